"""Generalized Cartan matrices, realizations, and complement structures.

A generalized Cartan matrix (GCM) has 2 on the diagonal, nonpositive
integers off it, and zeros in symmetric positions. A symmetrizer is a
positive rational diagonal d with d_i a_ij = d_j a_ji; it exists iff the
ratios a_ij / a_ji multiply to 1 around every cycle of the nonzero
pattern, and `find_symmetrizer` either returns d (first entry of each
connected component normalized to 1) or raises with an offending cycle.

The realization places everything in Q^(2n - rank A): coroots h_i are
the first n coordinate vectors, root functionals are the columns of A
extended by indicator rows at the non-pivot columns, and the invariant
form is pinned on coroot rows by (h_i | x) = alpha_i(x) / d_i with a
free symmetric block on the complement, chosen zero (or identity, if
zero degenerates).

A complement structure assigns to every connected index subset J a
subspace h_J that contains the coroots of J, has dimension
2|J| - rank(A_J), is annihilated by every root orthogonal to J, sits
inside h_J' for every larger connected J', keeps the roots of J
independent, and carries a nondegenerate restricted form.
`analyze_dstructure` searches greedily from large subsets to small,
treating corank-zero subsets as forced, and returns a verified
structure, a certificate of impossibility (a corank-inequality
violation, or a subset whose forced constraint space is too small), or
"undecided" when the search runs out of choices without either.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import inf
from typing import Iterable, Sequence

from . import _linalg as la
from .diagrams import Diagram
from .errors import NotAffine, NotGcm, NotSymmetrizable

IndexSet = frozenset[int]

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Gcm:
    """Generalized Cartan matrix, optionally with a stored symmetrizer."""

    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[Fraction, ...] | None = None

    @staticmethod
    def make(
        rows: Iterable[Iterable[int]],
        symmetrizer: Sequence[Fraction | int] | None = None,
    ) -> "Gcm":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise NotGcm("matrix must be square and nonempty")
        for i in range(n):
            if entries[i][i] != 2:
                raise NotGcm(f"diagonal entry ({i}, {i}) must be 2")
            for j in range(n):
                if i == j:
                    continue
                if entries[i][j] > 0:
                    raise NotGcm(f"off-diagonal entry ({i}, {j}) must be <= 0")
                if (entries[i][j] == 0) != (entries[j][i] == 0):
                    raise NotGcm(f"zero pattern must be symmetric at ({i}, {j})")
        d = None
        if symmetrizer is not None:
            d = tuple(Fraction(x) for x in symmetrizer)
            if len(d) != n or any(x == 0 for x in d):
                raise NotGcm("symmetrizer must list n nonzero rationals")
            for i in range(n):
                for j in range(n):
                    if d[i] * entries[i][j] != d[j] * entries[j][i]:
                        raise NotGcm(f"symmetrizer fails at ({i}, {j})")
        return Gcm(entries, d)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.entries[i][j] != 0:
                    masks[i] |= 1 << j
        return tuple(masks)

    def submatrix(self, subset: Iterable[int]) -> "Gcm":
        idx = sorted(set(subset))
        return Gcm(tuple(tuple(self.entries[i][j] for j in idx) for i in idx))

    def as_matrix(self) -> la.Matrix:
        return la.mat(self.entries)

    def is_connected_subset(self, subset: Iterable[int]) -> bool:
        mask = 0
        for i in subset:
            mask |= 1 << i
        return _mask_connected(self.adjacency_masks, mask)

    def connected_subsets(self) -> tuple[IndexSet, ...]:
        """All nonempty connected index subsets, decreasing size then
        lexicographic."""
        out = []
        for mask in range(1, 1 << self.n):
            if _mask_connected(self.adjacency_masks, mask):
                out.append(frozenset(i for i in range(self.n) if mask >> i & 1))
        out.sort(key=lambda s: (-len(s), sorted(s)))
        return tuple(out)


def _mask_connected(adj: Sequence[int], mask: int) -> bool:
    if mask == 0:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def gcm_from_text(text: str) -> Gcm:
    """Whitespace-separated integer rows, one per line."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    try:
        return Gcm.make([[int(x) for x in row] for row in rows])
    except ValueError as exc:
        raise NotGcm(f"non-integer entry: {exc}") from None


def gcm_to_text(gcm: Gcm) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in gcm.entries)


def find_symmetrizer(gcm: Gcm) -> tuple[Fraction, ...]:
    """Positive d with d_i a_ij = d_j a_ji, first entry 1 in each
    connected component. Raises NotSymmetrizable with a cycle along
    which the defining ratios are inconsistent."""
    n = gcm.n
    a = gcm.entries
    d: list[Fraction | None] = [None] * n
    parent: dict[int, int] = {}
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or a[i][j] == 0:
                    continue
                expected = d[i] * Fraction(a[i][j], a[j][i])
                if d[j] is None:
                    d[j] = expected
                    parent[j] = i
                    stack.append(j)
                elif d[j] != expected:
                    raise NotSymmetrizable(
                        "ratios a_ij/a_ji are inconsistent around a cycle",
                        cycle=_trace_cycle(parent, i, j),
                    )
    return tuple(d)  # type: ignore[return-value]


def _trace_cycle(parent: dict[int, int], i: int, j: int) -> tuple[int, ...]:
    """Closed walk j .. meet .. i, j through the search tree that
    exposed the inconsistency on edge (i, j)."""
    up_i = [i]
    while up_i[-1] in parent:
        up_i.append(parent[up_i[-1]])
    up_j = [j]
    while up_j[-1] in parent:
        up_j.append(parent[up_j[-1]])
    common = set(up_i) & set(up_j)
    trim_i = list(itertools.takewhile(lambda k: k not in common, up_i))
    trim_j = list(itertools.takewhile(lambda k: k not in common, up_j))
    meet = next(k for k in up_i if k in common)
    return tuple(trim_j + [meet] + list(reversed(trim_i)) + [j])


def symmetrized(gcm: Gcm, d: Sequence[Fraction] | None = None) -> la.Matrix:
    """The symmetric matrix diag(d) A."""
    if d is None:
        d = gcm.symmetrizer or find_symmetrizer(gcm)
    d = tuple(Fraction(x) for x in d)
    return tuple(
        tuple(d[i] * gcm.entries[i][j] for j in range(gcm.n)) for i in range(gcm.n)
    )


def corank(gcm: Gcm, subset: Iterable[int] | None = None) -> int:
    sub = gcm if subset is None else gcm.submatrix(subset)
    return sub.n - la.rank(sub.as_matrix())


def _det(m: la.Matrix) -> Fraction:
    n = len(m)
    rows = [list(r) for r in m]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det *= rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] / rows[c][c]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return det


def is_finite_type(gcm: Gcm) -> bool:
    """Finite type iff the symmetrized matrix is positive definite,
    decided exactly through leading principal minors."""
    try:
        b = symmetrized(gcm)
    except NotSymmetrizable:
        return False
    for k in range(1, gcm.n + 1):
        if _det(tuple(row[:k] for row in b[:k])) <= 0:
            return False
    return True


def is_affine_type(gcm: Gcm) -> bool:
    """Connected, corank one, every proper principal submatrix finite."""
    if not gcm.is_connected_subset(range(gcm.n)):
        return False
    try:
        if corank(gcm) != 1:
            return False
    except NotSymmetrizable:
        return False
    for r in range(1, gcm.n):
        for subset in itertools.combinations(range(gcm.n), r):
            if not is_finite_type(gcm.submatrix(subset)):
                return False
    return True


def diagram_of_gcm(gcm: Gcm, ids: Sequence[str] | None = None) -> Diagram:
    """Diagram with edge label determined by the product a_ij a_ji:
    0 -> 2 (no edge), 1 -> 3, 2 -> 4, 3 -> 6, 4 or more -> infinity."""
    ids = [str(i + 1) for i in range(gcm.n)] if ids is None else list(ids)
    label_of = {0: 2, 1: 3, 2: 4, 3: 6}
    edges = {}
    for i in range(gcm.n):
        for j in range(i + 1, gcm.n):
            prod = gcm.entries[i][j] * gcm.entries[j][i]
            edges[(ids[i], ids[j])] = label_of.get(prod, inf)
    return Diagram.make(ids, edges)


# -- realizations ---------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    """Exact realization of a GCM in Q^(2n - rank A).

    Coroots are rows of `coroots`; root functionals are rows of `roots`
    acting by the dot product; `gram` is the invariant symmetric form.
    """

    gcm: Gcm
    sym: tuple[Fraction, ...]
    dim: int
    coroots: la.Matrix
    roots: la.Matrix
    gram: la.Matrix

    def root_apply(self, j: int, vector: la.Vector) -> Fraction:
        return sum(a * x for a, x in zip(self.roots[j], vector))

    def form(self, x: la.Vector, y: la.Vector) -> Fraction:
        gy = la.mat_vec(self.gram, y)
        return sum(xi * v for xi, v in zip(x, gy))

    def root_kernel(self, indices: Iterable[int]) -> la.Matrix:
        """Intersection of the kernels of the listed root functionals."""
        idx = sorted(set(indices))
        if not idx:
            return la.identity(self.dim)
        return la.span(la.nullspace(tuple(self.roots[j] for j in idx)))


def build_realization(gcm: Gcm) -> Realization:
    n = gcm.n
    d = gcm.symmetrizer or find_symmetrizer(gcm)
    _, pivots = la.rref(gcm.as_matrix())
    extra = [j for j in range(n) if j not in pivots]
    dim = 2 * n - len(pivots)
    coroots = la.identity(dim)[:n]
    roots = tuple(
        tuple(Fraction(gcm.entries[i][j]) for i in range(n))
        + tuple(Fraction(1 if e == j else 0) for e in extra)
        for j in range(n)
    )
    assert la.rank(roots) == n, "root functionals must be independent"
    for block in (Fraction(0), Fraction(1)):
        rows = [tuple(x / d[i] for x in roots[i]) for i in range(n)]
        for k in range(n, dim):
            row = [rows[i][k] for i in range(n)]
            row += [block if k == l else Fraction(0) for l in range(n, dim)]
            rows.append(tuple(row))
        gram = tuple(rows)
        if la.rank(gram) == dim:
            break
    else:
        raise AssertionError("no nondegenerate invariant form found")
    assert gram == la.transpose(gram)
    return Realization(gcm, tuple(d), dim, coroots, roots, gram)


# -- complement structures -------------------------------------------------------


@dataclass(frozen=True)
class CorankViolation:
    subset_one: IndexSet
    subset_two: IndexSet
    intersection: IndexSet
    corank_one: int
    corank_two: int
    corank_intersection: int


@dataclass(frozen=True)
class DimensionObstruction:
    subset: IndexSet
    dim_available: int
    dim_needed: int


@dataclass(frozen=True)
class DStructure:
    realization: Realization
    assignment: dict[IndexSet, la.Matrix]


@dataclass(frozen=True)
class DStructureAnalysis:
    verdict: str  # FEASIBLE | INFEASIBLE | UNDECIDED
    realization: Realization
    structure: DStructure | None
    certificate: CorankViolation | DimensionObstruction | None
    notes: tuple[str, ...]


def check_corank_lemma(gcm: Gcm) -> tuple[CorankViolation, ...]:
    """Violations of corank(A at the intersection) <= corank(A at J') +
    corank(A at J'') over crossing pairs of connected subsets with
    connected nonempty intersection. A nonempty result rules out
    complement structures."""
    subsets = gcm.connected_subsets()
    coranks = {s: corank(gcm, s) for s in subsets}
    out = []
    for i, j1 in enumerate(subsets):
        for j2 in subsets[i + 1 :]:
            inter = j1 & j2
            if not inter or j1 <= j2 or j2 <= j1:
                continue
            if not gcm.is_connected_subset(inter):
                continue
            ci = corank(gcm, inter)
            if ci > coranks[j1] + coranks[j2]:
                out.append(
                    CorankViolation(j1, j2, inter, coranks[j1], coranks[j2], ci)
                )
    return tuple(out)


def _orthogonal_indices(gcm: Gcm, subset: IndexSet) -> list[int]:
    return [
        k
        for k in range(gcm.n)
        if k not in subset and all(gcm.entries[k][j] == 0 for j in subset)
    ]


def _forced_constraint_space(gcm: Gcm, real: Realization, subset: IndexSet) -> la.Matrix:
    """Constraints on h_subset that no admissible structure avoids:
    kernels of orthogonal roots, plus the coroot spans of corank-zero
    connected supersets (whose subspaces admit no choice)."""
    space = real.root_kernel(_orthogonal_indices(gcm, subset))
    for sup in gcm.connected_subsets():
        if subset < sup and corank(gcm, sup) == 0:
            forced = la.span(tuple(real.coroots[j] for j in sup))
            space = la.subspace_intersect(space, forced, real.dim)
    return space


def recheck_dimension_obstruction(gcm: Gcm, cert: DimensionObstruction) -> bool:
    """Independent validation of a dimension certificate from forced
    data only."""
    real = build_realization(gcm)
    space = _forced_constraint_space(gcm, real, cert.subset)
    needed = 2 * len(cert.subset) - la.rank(gcm.submatrix(cert.subset).as_matrix())
    return needed == cert.dim_needed and len(space) < needed


def verify_dstructure(ds: DStructure) -> tuple[str, ...]:
    """All axiom violations of an assignment, as readable strings;
    empty means the structure is valid. Containments are checked on
    covering pairs only, which suffices by transitivity."""
    real = ds.realization
    gcm = real.gcm
    subsets = gcm.connected_subsets()
    problems = [
        f"missing subspace for {sorted(s)}" for s in subsets if s not in ds.assignment
    ]
    if problems:
        return tuple(problems)
    spans = {s: la.span(ds.assignment[s]) for s in subsets}
    for subset in subsets:
        h_j = spans[subset]
        name = sorted(subset)
        needed = 2 * len(subset) - la.rank(gcm.submatrix(subset).as_matrix())
        if len(h_j) != needed:
            problems.append(
                f"subspace for {name} has dimension {len(h_j)}, expected {needed}"
            )
            continue
        coroot_rows = tuple(real.coroots[j] for j in subset)
        if not la.subspace_contains(h_j, coroot_rows):
            problems.append(f"subspace for {name} misses its coroots")
        for k in _orthogonal_indices(gcm, subset):
            if any(real.root_apply(k, v) != 0 for v in h_j):
                problems.append(f"subspace for {name} not annihilated by root {k}")
                break
        restricted = tuple(
            tuple(real.root_apply(j, v) for v in h_j) for j in sorted(subset)
        )
        if la.rank(restricted) != len(subset):
            problems.append(f"roots of {name} are dependent on its subspace")
        gram_j = tuple(tuple(real.form(u, w) for w in h_j) for u in h_j)
        if la.rank(gram_j) != len(h_j):
            problems.append(f"form degenerates on the subspace for {name}")
        for k in range(gcm.n):
            cover = subset | {k}
            if k in subset or cover not in spans:
                continue
            if not la.subspace_contains(spans[cover], h_j):
                problems.append(
                    f"subspace for {name} not inside that of {sorted(cover)}"
                )
    return tuple(problems)


class _Obstruction(Exception):
    def __init__(self, certificate: DimensionObstruction):
        self.certificate = certificate


def _extend_subspace(
    real: Realization,
    subset: IndexSet,
    space: la.Matrix,
    needed: int,
    reverse: bool,
) -> la.Matrix | None:
    """Greedy basis completion: grow the coroot span of `subset` inside
    `space` until the restricted roots reach full rank, taking basis
    vectors in echelon (or reversed) order. Returns None when the
    target dimension, root independence, or form nondegeneracy is out
    of reach along this order."""
    idx = sorted(subset)
    chosen = [real.coroots[j] for j in idx]
    images = [tuple(real.root_apply(j, v) for j in idx) for v in chosen]
    for v in reversed(space) if reverse else space:
        if len(chosen) == needed:
            break
        img = tuple(real.root_apply(j, v) for j in idx)
        if la.rank(tuple(images + [img])) > la.rank(tuple(images)):
            chosen.append(v)
            images.append(img)
    if len(chosen) != needed or la.rank(tuple(images)) != len(idx):
        return None
    out = la.span(tuple(chosen))
    gram_j = tuple(tuple(real.form(u, w) for w in out) for u in out)
    if la.rank(gram_j) != len(out):
        return None
    return out


def analyze_dstructure(gcm: Gcm) -> DStructureAnalysis:
    """Greedy search for a complement structure, with certificates.

    Corank-zero subsets and the full connected set are forced; other
    subsets get a greedy choice inside their constraint space, with one
    alternative (reversed completion order) per level before giving up.
    Infeasibility is only declared on evidence independent of all
    choices: a corank-lemma violation, or a forced constraint space
    below the required dimension. Feasible verdicts are re-verified."""
    real = build_realization(gcm)
    violations = check_corank_lemma(gcm)
    if violations:
        return DStructureAnalysis(
            INFEASIBLE, real, None, violations[0], ("corank inequality fails",)
        )
    order = gcm.connected_subsets()
    coranks = {s: corank(gcm, s) for s in order}

    def solve(level: int, assignment: dict[IndexSet, la.Matrix]):
        if level == len(order):
            return dict(assignment)
        subset = order[level]
        needed = len(subset) + coranks[subset]
        if coranks[subset] == 0:
            candidates = [la.span(tuple(real.coroots[j] for j in subset))]
        elif len(subset) == gcm.n:
            candidates = [la.span(la.identity(real.dim))]
        else:
            space = real.root_kernel(_orthogonal_indices(gcm, subset))
            for sup in order[:level]:
                if subset < sup:
                    space = la.subspace_intersect(space, assignment[sup], real.dim)
            if len(space) < needed:
                forced = _forced_constraint_space(gcm, real, subset)
                if len(forced) < needed:
                    raise _Obstruction(DimensionObstruction(subset, len(forced), needed))
                return None  # dead end caused by earlier choices
            candidates = []
            for reverse in (False, True):
                cand = _extend_subspace(real, subset, space, needed, reverse)
                if cand is not None and cand not in candidates:
                    candidates.append(cand)
        for cand in candidates[:2]:
            assignment[subset] = cand
            out = solve(level + 1, assignment)
            if out is not None:
                return out
            del assignment[subset]
        return None

    try:
        assignment = solve(0, {})
    except _Obstruction as ob:
        return DStructureAnalysis(
            INFEASIBLE,
            real,
            None,
            ob.certificate,
            ("forced constraint space is too small",),
        )
    if assignment is None:
        return DStructureAnalysis(
            UNDECIDED, real, None, None, ("search exhausted without certificate",)
        )
    ds = DStructure(real, assignment)
    problems = verify_dstructure(ds)
    if problems:
        return DStructureAnalysis(
            UNDECIDED, real, None, None, ("candidate failed verification",) + problems
        )
    return DStructureAnalysis(FEASIBLE, real, ds, None, ())


def affine_dstructure(gcm: Gcm) -> DStructure:
    """Canonical structure for an irreducible affine GCM: coroot spans
    on proper connected subsets, everything on the full set."""
    if not is_affine_type(gcm):
        raise NotAffine("canonical structure needs an irreducible affine GCM")
    real = build_realization(gcm)
    full = frozenset(range(gcm.n))
    assignment = {
        subset: la.span(la.identity(real.dim))
        if subset == full
        else la.span(tuple(real.coroots[j] for j in subset))
        for subset in gcm.connected_subsets()
    }
    ds = DStructure(real, assignment)
    problems = verify_dstructure(ds)
    assert not problems, problems
    return ds


def dstructure_to_json_obj(ds: DStructure) -> dict:
    """JSON object mapping comma-joined 1-based index sets to rational
    basis vectors written as strings."""
    out = {}
    for subset in sorted(ds.assignment, key=lambda s: (len(s), sorted(s))):
        key = ",".join(str(i + 1) for i in sorted(subset))
        out[key] = [[str(x) for x in v] for v in ds.assignment[subset]]
    return out
