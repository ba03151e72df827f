"""Command line interface.

Subcommands are grouped as ``nested enum``, ``assoc export``,
``assoc coherence``, ``cartan analyze``, ``verify braid``,
``verify monodromy``, and ``verify twist``. Exit codes follow one
discipline everywhere: 0 when the requested run passed (an infeasibility
verdict from ``cartan analyze`` is still a completed analysis, hence 0),
1 when a verification ran and the checked identity failed (a JSON report
goes to stdout), 2 on usage errors or unreadable input (message on
stderr).

All output is deterministic byte for byte for fixed inputs and flags:
JSON is dumped with sorted keys, every set is emitted in sorted order,
and all arithmetic is exact. Rational matrix entries are written as
strings such as ``"-3/2"``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from . import _linalg as la
from .assoc import (
    PhiAssignment,
    RationalMatrixGroup,
    check_coherence,
    free_telescoping,
    poset_to_json_obj,
    skeleton_to_dot,
)
from .cartan import (
    CorankViolation,
    DimensionObstruction,
    Gcm,
    analyze_dstructure,
    dstructure_to_json_obj,
    gcm_from_text,
)
from .diagrams import Diagram
from .errors import DynkitError
from .liealg import build_algebra, standard_gcm
from .nested import NestedSet, enumerate_maximal_nested_sets, enumerate_nested_sets
from .parabolic import parabolic_split
from .reps import (
    braid_order,
    casimir_element,
    check_braid,
    check_coproduct_identity,
    irrep,
    tensor_module,
    tilde_s,
)
from .twist import one_jet_twist, verify_alt2

MAX_ORDER = 4
FORMATS = ("text", "json", "dot")


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation: the subcommand, the input files it reads,
    and the numeric knobs shared across subcommands."""

    command: str
    inputs: tuple[str, ...] = ()
    order: int = 1
    bound: int = 10
    fmt: str = "text"

    def __post_init__(self) -> None:
        if self.bound < 1:
            raise ValueError("enumeration bound must be positive")
        if not 0 <= self.order <= MAX_ORDER:
            raise ValueError(f"truncation order must lie in 0..{MAX_ORDER}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown output format {self.fmt!r}")


# -- small helpers ---------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _plain(x):
    """Recursively convert tuples to lists and rationals to strings so
    any report value becomes JSON-serializable."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return str(x)


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_diagram(path: str) -> Diagram:
    return Diagram.from_json(_read_text(path))


def _load_gcm(path: str) -> Gcm:
    """GCM input, either a whitespace-separated integer matrix or a JSON
    array of integer rows."""
    text = _read_text(path)
    if text.lstrip().startswith("["):
        rows = json.loads(text)
        return Gcm.make(rows)
    return gcm_from_text(text)


def _fraction_matrix(rows) -> la.Matrix:
    return tuple(tuple(Fraction(str(x)) for x in row) for row in rows)


def _one_based(indices) -> list[int]:
    return [i + 1 for i in sorted(indices)]


def _parse_vertices(text: str, n: int, what: str) -> frozenset[int]:
    """Comma-separated 1-based vertex numbers into 0-based indices."""
    text = text.strip()
    if not text:
        return frozenset()
    out = set()
    for part in text.split(","):
        k = int(part)
        if not 1 <= k <= n:
            raise ValueError(f"{what} vertex {k} out of range 1..{n}")
        out.add(k - 1)
    return frozenset(out)


def _parse_weight(token: str, alg) -> tuple[int, ...]:
    t = token.strip().lower()
    if t in ("f", "fund", "fundamental"):
        return (1,) + (0,) * (alg.n - 1)
    if t in ("a", "adj", "adjoint"):
        theta = alg.positive[-1]
        return tuple(
            sum(alg.gcm[i, j] * theta[j] for j in range(alg.n)) for i in range(alg.n)
        )
    return tuple(int(p) for p in t.split(":"))


def _parse_rep_pair(text: str, alg):
    tokens = [t for t in text.split(",") if t.strip()]
    if len(tokens) != 2:
        raise ValueError("--reps takes exactly two comma-separated factors")
    return tuple(irrep(alg, _parse_weight(t, alg)) for t in tokens)


def _emit(report: dict, cfg: RunConfig, text_lines: Sequence[str]) -> int:
    """Success output: JSON report or the prepared text lines."""
    if cfg.fmt == "json":
        print(_dumps(report))
    else:
        for line in text_lines:
            print(line)
    return 0


def _fail(report: dict) -> int:
    # verification failures always carry the JSON report on stdout
    print(_dumps(report))
    return 1


# -- shipped schemas -------------------------------------------------------------------

_SCHEMA_FILES = {
    "nested enum": "nested_enum.schema.json",
    "assoc export": "assoc_export.schema.json",
    "assoc coherence": "assoc_coherence.schema.json",
    "cartan analyze": "cartan_analyze.schema.json",
    "verify braid": "verify_braid.schema.json",
    "verify monodromy": "verify_monodromy.schema.json",
    "verify twist": "verify_twist.schema.json",
}


def schema_for(command: str) -> dict:
    """Parsed JSON schema describing the ``--format json`` output of a
    subcommand, loaded from the copies shipped with the package."""
    name = _SCHEMA_FILES[command]
    text = resources.files("dynkit.schemas").joinpath(name).read_text("utf-8")
    return json.loads(text)


# -- nested enum -----------------------------------------------------------------------


def _run_nested_enum(cfg: RunConfig, ns) -> int:
    diagram = _load_diagram(ns.diagram)
    if ns.mns:
        sets = enumerate_maximal_nested_sets(diagram, bound=cfg.bound)
    else:
        sets = enumerate_nested_sets(diagram, bound=cfg.bound)
    report = {
        "command": cfg.command,
        "maximal": bool(ns.mns),
        "count": len(sets),
        "nested_sets": [s.to_json_obj() for s in sets],
    }
    lines = [
        " ".join("{" + ",".join(m) + "}" for m in s.sorted_elements) for s in sets
    ]
    return _emit(report, cfg, lines)


# -- assoc export ----------------------------------------------------------------------


def _run_assoc_export(cfg: RunConfig, ns) -> int:
    diagram = _load_diagram(ns.diagram)
    if cfg.fmt == "dot":
        sys.stdout.write(skeleton_to_dot(diagram, bound=cfg.bound))
        return 0
    poset = poset_to_json_obj(diagram, bound=cfg.bound)
    report = {"command": cfg.command, **poset}
    lines = [
        f"faces: {len(poset['faces'])}",
        "f-vector: " + " ".join(str(k) for k in poset["f_vector"]),
        f"euler characteristic: {poset['euler_characteristic']}",
    ]
    return _emit(report, cfg, lines)


# -- assoc coherence -------------------------------------------------------------------


def _load_phi(path: str, diagram: Diagram) -> PhiAssignment:
    """Assignment file: ``{"dim": d, "pairs": [{"first": [[verts]..],
    "second": [[verts]..], "value": [[rational strings]]}]}``."""
    obj = json.loads(_read_text(path))
    carrier = RationalMatrixGroup(int(obj["dim"]))
    phi = PhiAssignment(carrier)
    for pair in obj["pairs"]:
        f = NestedSet.of(diagram, pair["first"])
        g = NestedSet.of(diagram, pair["second"])
        phi.set_pair(f, g, _fraction_matrix(pair["value"]))
    return phi


def _run_assoc_coherence(cfg: RunConfig, ns) -> int:
    diagram = _load_diagram(ns.diagram)
    if ns.phi is None:
        phi = free_telescoping(enumerate_maximal_nested_sets(diagram, bound=cfg.bound))
    else:
        phi = _load_phi(ns.phi, diagram)
    result = check_coherence(diagram, phi, bound=cfg.bound)
    report = {
        "command": cfg.command,
        "ok": result.ok,
        "checked_faces": result.checked_faces,
        "failures": [
            {
                "face": fail.face.to_json_obj(),
                "cycle": [s.to_json_obj() for s in fail.cycle],
                "product": _plain(fail.product),
                "path_one": [s.to_json_obj() for s in fail.path_one],
                "path_two": [s.to_json_obj() for s in fail.path_two],
            }
            for fail in result.failures
        ],
    }
    if not result.ok:
        return _fail(report)
    lines = [f"coherence ok: {result.checked_faces} faces checked"]
    return _emit(report, cfg, lines)


# -- cartan analyze --------------------------------------------------------------------


def _certificate_json(cert):
    if cert is None:
        return None
    if isinstance(cert, CorankViolation):
        return {
            "kind": "corank violation",
            "subset_one": _one_based(cert.subset_one),
            "subset_two": _one_based(cert.subset_two),
            "intersection": _one_based(cert.intersection),
            "corank_one": cert.corank_one,
            "corank_two": cert.corank_two,
            "corank_intersection": cert.corank_intersection,
        }
    if isinstance(cert, DimensionObstruction):
        return {
            "kind": "dimension obstruction",
            "subset": _one_based(cert.subset),
            "dim_available": cert.dim_available,
            "dim_needed": cert.dim_needed,
        }
    raise TypeError(f"unknown certificate {cert!r}")


def _run_cartan_analyze(cfg: RunConfig, ns) -> int:
    gcm = _load_gcm(ns.gcm)
    analysis = analyze_dstructure(gcm)
    report = {
        "command": cfg.command,
        "gcm": [[gcm[i, j] for j in range(gcm.n)] for i in range(gcm.n)],
        "verdict": analysis.verdict,
        "certificate": _certificate_json(analysis.certificate),
        "assignment": (
            None
            if analysis.structure is None
            else dstructure_to_json_obj(analysis.structure)
        ),
        "notes": list(analysis.notes),
    }
    lines = [f"verdict: {analysis.verdict}"]
    cert = report["certificate"]
    if cert is not None:
        lines.append(f"certificate: {cert['kind']}")
        for key in sorted(cert):
            if key != "kind":
                val = cert[key]
                text = ",".join(str(v) for v in val) if isinstance(val, list) else val
                lines.append(f"  {key}: {text}")
    for note in analysis.notes:
        lines.append(f"note: {note}")
    return _emit(report, cfg, lines)


# -- verify braid ----------------------------------------------------------------------


def _run_verify_braid(cfg: RunConfig, ns) -> int:
    alg = build_algebra(standard_gcm(ns.type))
    module = irrep(alg, _parse_weight(ns.rep, alg))
    pairs = []
    ok = True
    for i in range(alg.n):
        for j in range(i + 1, alg.n):
            m = braid_order(alg, i, j)
            exact = check_braid(module, i, j)
            jet = check_braid(module, i, j, element="s_ic", order=cfg.order)
            ok = ok and exact and jet
            entry = {"i": i + 1, "j": j + 1, "m": m, "tilde_s": exact, "s_ic": jet}
            if ns.matrices:
                a, b = tilde_s(module, i), tilde_s(module, j)
                lhs = rhs = la.identity(module.dim)
                for k in range(m):
                    lhs = la.mat_mul(lhs, a if k % 2 == 0 else b)
                    rhs = la.mat_mul(rhs, b if k % 2 == 0 else a)
                entry["left"] = _plain(lhs)
                entry["right"] = _plain(rhs)
            pairs.append(entry)
    report = {
        "command": cfg.command,
        "type": ns.type,
        "rep": ns.rep,
        "dim": module.dim,
        "order": cfg.order,
        "pairs": pairs,
        "ok": ok,
    }
    if not ok:
        return _fail(report)
    lines = [
        f"pair {p['i']},{p['j']} (m={p['m']}): exact ok, "
        f"normalized ok through order {cfg.order}"
        for p in pairs
    ]
    lines.append(f"braid relations hold on {ns.type} rep {ns.rep} (dim {module.dim})")
    return _emit(report, cfg, lines)


# -- verify monodromy ------------------------------------------------------------------


def _run_verify_monodromy(cfg: RunConfig, ns) -> int:
    alg = build_algebra(standard_gcm(ns.type))
    v, w = _parse_rep_pair(ns.reps, alg)
    vertex = _parse_vertices(str(ns.vertex), alg.n, "monodromy")
    if len(vertex) != 1:
        raise ValueError("--vertex takes exactly one vertex number")
    (i,) = vertex
    result = check_coproduct_identity(v, w, i, order=cfg.order)
    # the normalization is an identity through first order; higher
    # residuals are reported but do not gate the exit code
    window = min(cfg.order, 1)
    resid_left = result.get("residual_left")
    resid_right = result.get("residual_right")
    resid_ok = True
    if cfg.order >= 1:
        resid_ok = all(
            resid_left[k] and resid_right[k] for k in range(window + 1)
        )
    ok = result["grouplike"] and result["coproduct_casimir"] and resid_ok
    report = {
        "command": cfg.command,
        "type": ns.type,
        "reps": [t.strip() for t in ns.reps.split(",") if t.strip()],
        "vertex": i + 1,
        "order": cfg.order,
        "verified_orders": list(range(window + 1)),
        "grouplike": result["grouplike"],
        "coproduct_casimir": result["coproduct_casimir"],
        "residual_left": None if resid_left is None else list(resid_left),
        "residual_right": None if resid_right is None else list(resid_right),
        "ok": ok,
    }
    if ns.matrices:
        report["matrices"] = {
            "s_first": _plain(tilde_s(v, i)),
            "s_second": _plain(tilde_s(w, i)),
            "casimir_pair": _plain(casimir_element(tensor_module(v, w), i)),
        }
    if not ok:
        return _fail(report)
    lines = [
        f"grouplike at order 0: {result['grouplike']}",
        f"coproduct of the local casimir: {result['coproduct_casimir']}",
        f"residuals vanish through order {window}: {resid_ok}",
    ]
    return _emit(report, cfg, lines)


# -- verify twist ----------------------------------------------------------------------


def _run_verify_twist(cfg: RunConfig, ns) -> int:
    alg = build_algebra(standard_gcm(ns.type))
    sub = _parse_vertices(ns.sub, alg.n, "subdiagram")
    split = parabolic_split(alg, sub)
    v, w = _parse_rep_pair(ns.reps, alg)
    jet = one_jet_twist(v, w, split, depth=ns.depth)
    alternation = None
    if v.dim == w.dim:
        alt = verify_alt2(v, w, split)
        alternation = {
            "match": alt["match"],
            "lhs": _plain(alt["lhs"]),
            "rhs": _plain(alt["rhs"]),
        }
    ok = alternation is None or alternation["match"]
    report = {
        "command": cfg.command,
        "type": ns.type,
        "sub": _one_based(sub),
        "reps": [t.strip() for t in ns.reps.split(",") if t.strip()],
        "dims": [v.dim, w.dim],
        "jet": {"0": _plain(jet.at(0)), "1": _plain(jet.at(1))},
        "alternation": alternation,
        "ok": ok,
    }
    if not ok:
        return _fail(report)
    lines = [f"one-jet computed on a {v.dim} x {w.dim} module pair"]
    if alternation is None:
        lines.append("alternation skipped: factors of unequal dimension")
    else:
        lines.append("alternation matches the classical part: true")
    return _emit(report, cfg, lines)


# -- argument parsing ------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _order_int(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"must lie in 0..{MAX_ORDER}")
    return value


def _depth_int(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("truncation depth must be at least 2")
    return value


def _add_format(parser, choices=("text", "json")) -> None:
    parser.add_argument("--format", choices=choices, default="text")


def _add_bound(parser) -> None:
    parser.add_argument("--bound", type=_positive_int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynkit",
        description="exact combinatorics of labeled diagrams: nested sets, "
        "face complexes, Cartan-datum analysis, and verification of "
        "braid, monodromy, and twist identities",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    nested = groups.add_parser("nested", help="nested set enumeration")
    nested_sub = nested.add_subparsers(dest="action", required=True)
    enum = nested_sub.add_parser("enum", help="enumerate nested sets")
    enum.add_argument("--diagram", required=True, help="diagram JSON file")
    enum.add_argument("--mns", action="store_true", help="maximal sets only")
    _add_bound(enum)
    _add_format(enum)

    assoc = groups.add_parser("assoc", help="face complex tools")
    assoc_sub = assoc.add_subparsers(dest="action", required=True)
    export = assoc_sub.add_parser("export", help="export skeleton or face poset")
    export.add_argument("--diagram", required=True, help="diagram JSON file")
    _add_bound(export)
    _add_format(export, choices=FORMATS)
    coherence = assoc_sub.add_parser("coherence", help="check face coherence")
    coherence.add_argument("--diagram", required=True, help="diagram JSON file")
    coherence.add_argument("--phi", default=None, help="assignment JSON file")
    _add_bound(coherence)
    _add_format(coherence)

    cartan = groups.add_parser("cartan", help="Cartan datum analysis")
    cartan_sub = cartan.add_subparsers(dest="action", required=True)
    analyze = cartan_sub.add_parser("analyze", help="complement structure search")
    analyze.add_argument("--gcm", required=True, help="matrix file, text or JSON")
    _add_format(analyze)

    verify = groups.add_parser("verify", help="identity verification")
    verify_sub = verify.add_subparsers(dest="action", required=True)

    braid = verify_sub.add_parser("braid", help="braid relations on a module")
    braid.add_argument("--type", required=True, help='diagram type, e.g. "A2"')
    braid.add_argument("--rep", default="fund", help="fund, adjoint, or w1:w2:...")
    braid.add_argument("--order", type=_order_int, default=1)
    braid.add_argument("--matrices", action="store_true", help="dump both sides")
    _add_format(braid)

    monodromy = verify_sub.add_parser(
        "monodromy", help="coproduct identity for the normalized local element"
    )
    monodromy.add_argument("--type", default="A1", help='diagram type, e.g. "A1"')
    monodromy.add_argument("--reps", default="f,f", help="two factors, e.g. f,f")
    monodromy.add_argument("--vertex", type=int, default=1, help="1-based vertex")
    monodromy.add_argument("--order", type=_order_int, default=1)
    monodromy.add_argument("--matrices", action="store_true", help="dump operators")
    _add_format(monodromy)

    twist = verify_sub.add_parser(
        "twist", help="one-jet of the relative twist on a module pair"
    )
    twist.add_argument("--type", required=True, help='diagram type, e.g. "A2"')
    twist.add_argument("--sub", default="", help="1-based vertices, e.g. 1 or 1,2")
    twist.add_argument("--reps", default="f,f", help="two factors, e.g. f,f")
    twist.add_argument("--depth", type=_depth_int, default=None)
    _add_format(twist)

    return parser


_HANDLERS = {
    "nested enum": _run_nested_enum,
    "assoc export": _run_assoc_export,
    "assoc coherence": _run_assoc_coherence,
    "cartan analyze": _run_cartan_analyze,
    "verify braid": _run_verify_braid,
    "verify monodromy": _run_verify_monodromy,
    "verify twist": _run_verify_twist,
}


def _config_from(ns) -> RunConfig:
    command = f"{ns.group} {ns.action}"
    inputs = tuple(
        path
        for path in (
            getattr(ns, "diagram", None),
            getattr(ns, "gcm", None),
            getattr(ns, "phi", None),
        )
        if path is not None
    )
    return RunConfig(
        command=command,
        inputs=inputs,
        order=getattr(ns, "order", 1),
        bound=getattr(ns, "bound", 10),
        fmt=getattr(ns, "format", "text"),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already wrote its diagnostic
        return int(exc.code or 0)
    try:
        cfg = _config_from(ns)
        return _HANDLERS[cfg.command](cfg, ns)
    except (DynkitError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
