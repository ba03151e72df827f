"""Truncated induced modules over the doubled triple and the one-jet
of the relative tensor correction.

Everything here lives on the doubled algebra g + h. Given a parabolic
split with vertex set D there are four module flavors:

* source kinds ("M_-", "L_-"): spanned by lowering monomials in the
  complement negative roots, cyclic vector killed by the whole positive
  parabolic half; truncated by weight height;
* dual kinds ("M_+*", "N_+*"): graded duals of the module induced from
  the complement half, whose free directions are the plus-half root and
  Cartan embeddings together with the D-supported minus-half ones;
  truncated by monomial degree.

Intertwiners into (dual kind) tensor (weight module) are pinned by
invariance under the parabolic half plus a leading-term normalization;
the defining linear system is unitriangular degree by degree and every
leftover row is checked exactly. Pairing degree-one tails of the solved
intertwiners against dual bases of the two halves yields the order-one
jet of the tensor correction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import _linalg as la
from . import series
from .errors import DepthInsufficient
from .liealg import ChevalleyAlgebra, ManinTripleData, build_manin_triple
from .parabolic import Doubled, ParabolicSplit, doubled_bracket, parabolic_split
from .reps import WeightModule, omega_and_r

SOURCE_KINDS = ("M_-", "L_-")
DUAL_KINDS = ("M_+*", "N_+*")
KINDS = SOURCE_KINDS + DUAL_KINDS

Mono = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _plus_root(alg: ChevalleyAlgebra, k: int) -> Doubled:
    return {alg.pos_index(k): _ONE}


def _minus_root(alg: ChevalleyAlgebra, k: int) -> Doubled:
    return {alg.neg_index(k): _ONE}


def _plus_cartan(alg: ChevalleyAlgebra, i: int) -> Doubled:
    return {alg.h_index(i): _ONE, alg.dim + i: _ONE}


def _minus_cartan(alg: ChevalleyAlgebra, i: int) -> Doubled:
    return {alg.h_index(i): _ONE, alg.dim + i: Fraction(-1)}


def _supported(root: Sequence[int], vertices: frozenset[int]) -> bool:
    return all(c == 0 or j in vertices for j, c in enumerate(root))


def _project(alg: ChevalleyAlgebra, el: Doubled) -> dict[int, Fraction]:
    return {i: c for i, c in el.items() if i < alg.dim}


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(_ONE if j == i else _ZERO for j in range(n))


@dataclass(frozen=True, eq=False)
class TruncatedVerma:
    """PBW-monomial model of one induced module, cut at finite depth.

    Basis monomials are exponent tuples over the free directions, with
    the cyclic vector at exponent zero. Left multiplication straightens
    a doubled element into the ordered basis, dropping monomials past
    the truncation; dual kinds act through the negative transpose.
    """

    kind: str
    depth: int
    split: ParabolicSplit
    dirs: tuple[Doubled, ...]
    dir_roots: tuple[tuple[int, ...], ...]
    grades: tuple[int, ...]
    monomials: tuple[Mono, ...]
    index: Mapping[Mono, int]
    _ann: tuple[Doubled, ...]
    _basis_inv: la.Matrix
    _memo_dir: dict = field(default_factory=dict, repr=False)
    _memo_ann: dict = field(default_factory=dict, repr=False)
    _memo_right: dict = field(default_factory=dict, repr=False)

    @property
    def algebra(self) -> ChevalleyAlgebra:
        return self.split.algebra

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def empty(self) -> Mono:
        return (0,) * len(self.dirs)

    def grade(self, mono: Mono) -> int:
        return sum(k * g for k, g in zip(mono, self.grades))

    def _within(self, mono: Mono) -> bool:
        return self.grade(mono) <= self.depth

    def decompose(
        self, el: Doubled
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Coefficients of a doubled element over (directions | annihilators)."""
        size = self.algebra.dim + self.algebra.n
        vec = [_ZERO] * size
        for i, c in el.items():
            vec[i] += c
        sol = tuple(
            sum(row[i] * vec[i] for i in range(size) if vec[i])
            for row in self._basis_inv
        )
        nd = len(self.dirs)
        return sol[:nd], sol[nd:]

    def _mult_dir(self, k: int, mono: Mono) -> dict[Mono, Fraction]:
        key = (k, mono)
        hit = self._memo_dir.get(key)
        if hit is not None:
            return hit
        first = next((b for b, e in enumerate(mono) if e), None)
        out: dict[Mono, Fraction] = {}
        if first is None or k <= first:
            bumped = list(mono)
            bumped[k] += 1
            bumped_t = tuple(bumped)
            if self._within(bumped_t):
                out[bumped_t] = _ONE
        else:
            rest = list(mono)
            rest[first] -= 1
            rest_t = tuple(rest)
            for m2, c2 in self._mult_dir(k, rest_t).items():
                for m3, c3 in self._mult_dir(first, m2).items():
                    out[m3] = out.get(m3, _ZERO) + c2 * c3
            self._mult_bracket(self.dirs[k], first, rest_t, out)
        out = {m: c for m, c in out.items() if c}
        self._memo_dir[key] = out
        return out

    def _mult_ann(self, l: int, mono: Mono) -> dict[Mono, Fraction]:
        key = (l, mono)
        hit = self._memo_ann.get(key)
        if hit is not None:
            return hit
        first = next((b for b, e in enumerate(mono) if e), None)
        out: dict[Mono, Fraction] = {}
        if first is not None:
            rest = list(mono)
            rest[first] -= 1
            rest_t = tuple(rest)
            for m2, c2 in self._mult_ann(l, rest_t).items():
                for m3, c3 in self._mult_dir(first, m2).items():
                    out[m3] = out.get(m3, _ZERO) + c2 * c3
            self._mult_bracket(self._ann[l], first, rest_t, out)
        out = {m: c for m, c in out.items() if c}
        self._memo_ann[key] = out
        return out

    def _mult_bracket(
        self, el: Doubled, first: int, rest: Mono, out: dict[Mono, Fraction]
    ) -> None:
        br = doubled_bracket(self.algebra, el, self.dirs[first])
        if not br:
            return
        dcoef, acoef = self.decompose(br)
        for j, c in enumerate(dcoef):
            if c:
                for m3, c3 in self._mult_dir(j, rest).items():
                    out[m3] = out.get(m3, _ZERO) + c * c3
        for l2, c in enumerate(acoef):
            if c:
                for m3, c3 in self._mult_ann(l2, rest).items():
                    out[m3] = out.get(m3, _ZERO) + c * c3

    def multiply(self, el: Doubled, mono: Mono) -> dict[Mono, Fraction]:
        """Left product el * mono, straightened into the basis."""
        dcoef, acoef = self.decompose(el)
        out: dict[Mono, Fraction] = {}
        for j, c in enumerate(dcoef):
            if c:
                for m, cm in self._mult_dir(j, mono).items():
                    out[m] = out.get(m, _ZERO) + c * cm
        for l, c in enumerate(acoef):
            if c:
                for m, cm in self._mult_ann(l, mono).items():
                    out[m] = out.get(m, _ZERO) + c * cm
        return {m: c for m, c in out.items() if c}

    def right_multiply(self, mono: Mono, el: Doubled) -> dict[Mono, Fraction]:
        """Right product mono * el; well defined when el normalizes the
        annihilator half."""
        el_key = tuple(sorted(el.items()))
        key = (mono, el_key)
        hit = self._memo_right.get(key)
        if hit is not None:
            return hit
        first = next((b for b, e in enumerate(mono) if e), None)
        if first is None:
            out = self.multiply(el, mono)
        else:
            rest = list(mono)
            rest[first] -= 1
            rest_t = tuple(rest)
            out = {}
            for m2, c2 in self.right_multiply(rest_t, el).items():
                for m3, c3 in self._mult_dir(first, m2).items():
                    out[m3] = out.get(m3, _ZERO) + c2 * c3
            out = {m: c for m, c in out.items() if c}
        self._memo_right[key] = out
        return out

    def action(self, el: Doubled) -> la.Matrix:
        """Action matrix on column coordinates. Dual kinds act by the
        negative transpose of left multiplication."""
        n = self.dim
        cols = []
        for mono in self.monomials:
            col = [_ZERO] * n
            for m, c in self.multiply(el, mono).items():
                col[self.index[m]] = c
            cols.append(col)
        if self.kind in DUAL_KINDS:
            return tuple(
                tuple(-cols[i][j] for j in range(n)) for i in range(n)
            )
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def right_action(self, el: Doubled) -> la.Matrix:
        """Right action on a dual kind through the antipode: negative
        transpose of right multiplication. Requires an element that
        normalizes the annihilator half (a subdiagram element)."""
        assert self.kind in DUAL_KINDS, "right action lives on dual kinds"
        for a in self._ann:
            br = doubled_bracket(self.algebra, a, el)
            dcoef, _ = self.decompose(br)
            assert not any(dcoef), "element must normalize the complement half"
        n = self.dim
        cols = []
        for mono in self.monomials:
            col = [_ZERO] * n
            for m, c in self.right_multiply(mono, el).items():
                col[self.index[m]] = c
            cols.append(col)
        return tuple(tuple(-cols[i][j] for j in range(n)) for i in range(n))


def _enumerate_monomials(grades: Sequence[int], depth: int) -> tuple[Mono, ...]:
    out: list[Mono] = []

    def rec(pos: int, prefix: list[int], budget: int) -> None:
        if pos == len(grades):
            out.append(tuple(prefix))
            return
        g = grades[pos]
        k = 0
        while k * g <= budget:
            prefix.append(k)
            rec(pos + 1, prefix, budget - k * g)
            prefix.pop()
            k += 1

    rec(0, [], depth)
    out.sort(
        key=lambda m: (sum(k * g for k, g in zip(m, grades)), sum(m), m)
    )
    return tuple(out)


def _construct(split: ParabolicSplit, kind: str, depth: int) -> TruncatedVerma:
    alg = split.algebra
    q, n = alg.num_positive, alg.n
    comp = len(split.complement_roots)
    sub_roots = [
        k for k in range(q) if _supported(alg.positive[k], split.vertices)
    ]
    zero_root = (0,) * n
    if kind in SOURCE_KINDS:
        dirs = tuple(dict(el) for el in split.m_minus[:comp])
        grades = tuple(
            sum(alg.positive[k]) for k in split.complement_roots
        )
        roots = tuple(
            tuple(-c for c in alg.positive[k]) for k in split.complement_roots
        )
        ann = [_plus_root(alg, k) for k in range(q)]
        ann += [_plus_cartan(alg, i) for i in range(n)]
        ann += [_minus_root(alg, k) for k in sub_roots]
        ann += [_minus_cartan(alg, j) for j in sorted(split.vertices)]
        ann += [dict(el) for el in split.m_minus[comp:]]
    else:
        dir_list = [_plus_root(alg, k) for k in range(q)]
        dir_list += [_plus_cartan(alg, i) for i in range(n)]
        dir_list += [_minus_root(alg, k) for k in sub_roots]
        dir_list += [_minus_cartan(alg, j) for j in sorted(split.vertices)]
        dirs = tuple(dir_list)
        grades = (1,) * len(dirs)
        root_list = [tuple(alg.positive[k]) for k in range(q)]
        root_list += [zero_root] * n
        root_list += [tuple(-c for c in alg.positive[k]) for k in sub_roots]
        root_list += [zero_root] * len(split.vertices)
        roots = tuple(root_list)
        ann = [dict(el) for el in split.m_minus]
    size = alg.dim + n
    assert len(dirs) + len(ann) == size, "directions and annihilators must span"
    basis_rows = []
    for el in tuple(dirs) + tuple(ann):
        vec = [_ZERO] * size
        for i, c in el.items():
            vec[i] += c
        basis_rows.append(tuple(vec))
    basis = tuple(
        tuple(basis_rows[j][i] for j in range(size)) for i in range(size)
    )
    basis_inv = la.mat_inv(basis)
    monomials = _enumerate_monomials(grades, depth)
    index = {m: i for i, m in enumerate(monomials)}
    verma = TruncatedVerma(
        kind,
        depth,
        split,
        dirs,
        roots,
        grades,
        monomials,
        index,
        tuple(ann),
        basis_inv,
    )
    _verify_build(verma)
    return verma


def _verify_build(verma: TruncatedVerma) -> None:
    alg = verma.algebra
    empty = verma.empty
    for a in verma._ann:
        assert verma.multiply(a, empty) == {}, "cyclic vector must be killed"
    gens: list[Doubled] = [_plus_root(alg, alg.e_index(i)) for i in range(alg.n)]
    gens += [_plus_cartan(alg, i) for i in range(alg.n)]
    gens += [_minus_root(alg, alg.e_index(i)) for i in range(alg.n)]
    gens += [_minus_cartan(alg, i) for i in range(alg.n)]
    # brackets only close away from the truncation boundary; low grades
    # already exercise every straightening path, so cap the sweep
    bound = min(verma.depth - 2, 3)
    safe = [m for m in verma.monomials if verma.grade(m) <= bound][:300]
    for xi in range(len(gens)):
        for yi in range(xi + 1, len(gens)):
            x, y = gens[xi], gens[yi]
            br = doubled_bracket(alg, x, y)
            for mono in safe:
                lhs: dict[Mono, Fraction] = {}
                for m2, c2 in verma.multiply(y, mono).items():
                    for m3, c3 in verma.multiply(x, m2).items():
                        lhs[m3] = lhs.get(m3, _ZERO) + c2 * c3
                for m2, c2 in verma.multiply(x, mono).items():
                    for m3, c3 in verma.multiply(y, m2).items():
                        lhs[m3] = lhs.get(m3, _ZERO) - c2 * c3
                lhs = {m: c for m, c in lhs.items() if c}
                rhs = verma.multiply(br, mono) if br else {}
                assert lhs == rhs, "straightening must respect brackets"


_VERMA_CACHE: dict = {}


def build_verma(
    triple: ManinTripleData, split: ParabolicSplit, kind: str, depth: int
) -> TruncatedVerma:
    """Truncated induced module of the requested kind over the doubled
    triple. Absolute kinds ("M_-", "M_+*") ignore the split's vertex
    set; relative kinds use it. Results are cached per value-equal
    inputs."""
    if kind not in KINDS:
        raise ValueError(f"unknown module kind {kind!r}")
    alg = split.algebra
    assert triple.algebra is alg, "triple and split must share an algebra"
    if depth < 1:
        raise DepthInsufficient("truncation depth must be at least 1")
    vertices = split.vertices if kind in ("L_-", "N_+*") else frozenset()
    key = (alg.gcm, vertices, kind, depth)
    hit = _VERMA_CACHE.get(key)
    if hit is not None:
        return hit
    eff = split if vertices == split.vertices else parabolic_split(alg, ())
    verma = _construct(eff, kind, depth)
    _VERMA_CACHE[key] = verma
    return verma


def splitting_map(verma: TruncatedVerma, mono: Mono) -> dict[tuple[Mono, Mono], Fraction]:
    """Two-sided splittings of a source-kind monomial with binomial
    weights: the classical coproduct of the generated half in the PBW
    basis. Ordered subsequences of an ordered word stay ordered, so no
    straightening occurs."""
    assert verma.kind in SOURCE_KINDS, "splittings live on source kinds"
    nd = len(verma.dirs)
    acc: dict[tuple[Mono, Mono], Fraction] = {((0,) * nd, (0,) * nd): _ONE}
    for b, kexp in enumerate(mono):
        if not kexp:
            continue
        new: dict[tuple[Mono, Mono], Fraction] = {}
        for (left, right), c in acc.items():
            for j in range(kexp + 1):
                l2 = list(left)
                l2[b] += j
                r2 = list(right)
                r2[b] += kexp - j
                keypair = (tuple(l2), tuple(r2))
                new[keypair] = new.get(keypair, _ZERO) + c * comb(kexp, j)
        acc = new
    return acc


def check_splitting_coassociative(verma: TruncatedVerma) -> bool:
    """(split x 1) after split equals (1 x split) after split on every
    basis monomial, and the empty left part reproduces the monomial."""
    for mono in verma.monomials:
        top = splitting_map(verma, mono)
        if top.get((verma.empty, mono)) != _ONE:
            return False
        lhs: dict = {}
        rhs: dict = {}
        for (left, right), c in top.items():
            for (a, b), c2 in splitting_map(verma, left).items():
                key = (a, b, right)
                lhs[key] = lhs.get(key, _ZERO) + c * c2
            for (b, cpart), c2 in splitting_map(verma, right).items():
                key = (left, b, cpart)
                rhs[key] = rhs.get(key, _ZERO) + c * c2
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """Invariant element of (dual kind) tensor (weight module), one
    exact coefficient vector per basis monomial, graded by weight."""

    source: TruncatedVerma
    target: TruncatedVerma
    module: WeightModule
    components: Mapping[Mono, tuple[Fraction, ...]]

    def at(self, mono: Mono) -> tuple[Fraction, ...]:
        got = self.components.get(tuple(mono))
        if got is None:
            return (_ZERO,) * self.module.dim
        return got

    @property
    def leading(self) -> tuple[Fraction, ...]:
        return self.at(self.target.empty)


def solve_intertwiner(
    v: Sequence[Fraction], module: WeightModule, verma: TruncatedVerma
) -> Intertwiner:
    """Unique invariant element with leading term v.

    The defining system runs over every direction X of the parabolic
    half and every basis monomial u below depth: F(X * u) = X . F(u).
    Prepending the leading direction of a monomial makes the system
    unitriangular degree by degree, which pins each component; every
    remaining row is then checked exactly, so existence and per-degree
    uniqueness both hold or the solve fails loudly.
    """
    assert verma.kind in DUAL_KINDS, "intertwiners target a dual kind"
    alg = verma.algebra
    assert module.algebra is alg, "modules must share the algebra"
    vec = tuple(Fraction(x) for x in v)
    assert len(vec) == module.dim, "leading term must match the module"
    rho = [module.act(_project(alg, x)) for x in verma.dirs]
    empty = verma.empty
    comps: dict[Mono, tuple[Fraction, ...]] = {empty: vec}
    for mono in verma.monomials:
        if mono == empty:
            continue
        first = next(b for b, e in enumerate(mono) if e)
        rest = list(mono)
        rest[first] -= 1
        comps[mono] = la.mat_vec(rho[first], comps[tuple(rest)])
    zero_vec = (_ZERO,) * module.dim
    for u in verma.monomials:
        if verma.grade(u) > verma.depth - 1:
            continue
        fu = comps[u]
        for b in range(len(verma.dirs)):
            lhs = [_ZERO] * module.dim
            for m, c in verma._mult_dir(b, u).items():
                fm = comps[m]
                for i in range(module.dim):
                    lhs[i] += c * fm[i]
            rhs = la.mat_vec(rho[b], fu)
            assert tuple(lhs) == rhs, "invariance rows must close exactly"
    kept = {m: w for m, w in comps.items() if any(w) or m == empty}
    triple = build_manin_triple(alg)
    source = build_verma(triple, verma.split, "L_-", verma.depth)
    return Intertwiner(source, verma, module, kept)


def _dual_pairs(triple: ManinTripleData) -> tuple[tuple[Doubled, Doubled], ...]:
    inv = la.mat_inv(triple.pairing)
    out = []
    for a_pos, a_el in enumerate(triple.minus_basis):
        dual: Doubled = {}
        for b_pos, b_el in enumerate(triple.plus_basis):
            c = inv[b_pos][a_pos]
            if not c:
                continue
            for i, ci in b_el.items():
                dual[i] = dual.get(i, _ZERO) + c * ci
        out.append((dict(a_el), {i: c for i, c in dual.items() if c}))
    return tuple(out)


def _lowest_height(module: WeightModule) -> int:
    alg = module.algebra
    if module.highest is None:
        raise DepthInsufficient(
            "automatic depth needs a module with a recorded highest weight"
        )
    gcm_rows = tuple(
        tuple(Fraction(alg.gcm[i, j]) for j in range(alg.n))
        for i in range(alg.n)
    )
    inv = la.mat_inv(gcm_rows)
    best = 0
    for wt in module.weights:
        diff = tuple(
            Fraction(h) - Fraction(m) for h, m in zip(module.highest, wt)
        )
        coords = la.mat_vec(inv, diff)
        total = sum(coords)
        assert total.denominator == 1 and total >= 0
        best = max(best, int(total))
    return best


def one_jet_twist(
    v: WeightModule,
    w: WeightModule,
    split: ParabolicSplit,
    depth: int | None = None,
) -> series.SeriesMatrix:
    """Order-one jet of the relative tensor correction on v tensor w.

    Identity at order zero. The order-one term pairs dual bases of the
    two halves against the degree-one tails of the solved intertwiners:
    the minus leg acts on the first factor while its dual partner is
    read off the second factor's tail, and symmetrically; only the
    subdiagram-supported part of the minus half survives the second
    read-off. The two built-in sign flips (inverse-ordering insertion
    and dual-pairing transpose) cancel.
    """
    alg = split.algebra
    assert v.algebra is alg and w.algebra is alg, "modules must match the split"
    if depth is None:
        depth = _lowest_height(v) + _lowest_height(w) + 1
    if depth < 2:
        raise DepthInsufficient("the one-jet needs truncation depth at least 2")
    triple = build_manin_triple(alg)
    verma = build_verma(triple, split, "N_+*", depth)
    basis_v = tuple(
        solve_intertwiner(_unit(v.dim, i), v, verma) for i in range(v.dim)
    )
    basis_w = tuple(
        solve_intertwiner(_unit(w.dim, i), w, verma) for i in range(w.dim)
    )
    nd = len(verma.dirs)
    unit_monos = []
    for b in range(nd):
        m = [0] * nd
        m[b] = 1
        unit_monos.append(tuple(m))
    ops: list[tuple[la.Matrix, list[tuple[int, Fraction]]]] = []
    for a_el, b_el in _dual_pairs(triple):
        for x_el, y_el in ((a_el, b_el), (b_el, a_el)):
            xmat = v.act(_project(alg, x_el))
            dcoef, _ = verma.decompose(y_el)
            tails = [(b, c) for b, c in enumerate(dcoef) if c]
            if tails and not la.is_zero(xmat):
                ops.append((xmat, tails))
    dim_vw = v.dim * w.dim
    cols: list[list[Fraction]] = []
    half = Fraction(1, 2)
    for iv in range(v.dim):
        for iw in range(w.dim):
            col = [_ZERO] * dim_vw
            lead_v = basis_v[iv].leading
            for xmat, tails in ops:
                xv = la.mat_vec(xmat, lead_v)
                if not any(xv):
                    continue
                tail = [_ZERO] * w.dim
                for b, c in tails:
                    comp = basis_w[iw].at(unit_monos[b])
                    for j in range(w.dim):
                        tail[j] += c * comp[j]
                if not any(tail):
                    continue
                for a in range(v.dim):
                    if not xv[a]:
                        continue
                    base = a * w.dim
                    for bj in range(w.dim):
                        if tail[bj]:
                            col[base + bj] += half * xv[a] * tail[bj]
            cols.append(col)
    jet1 = tuple(
        tuple(cols[c][r] for c in range(dim_vw)) for r in range(dim_vw)
    )
    return series.SeriesMatrix((la.identity(dim_vw), jet1))


def verify_alt2(
    v: WeightModule, w: WeightModule, split: ParabolicSplit
) -> dict:
    """Compare the alternator of the computed one-jet against the
    closed-form antisymmetric combination of the full and subdiagram
    half-difference tensors. Exact equality; both matrices are always
    included in the report."""
    assert v.dim == w.dim, "alternation swaps the two tensor factors"
    jet = one_jet_twist(v, w, split)
    swap = la.swap_matrix(v.dim, w.dim)
    j1 = jet.at(1)
    flipped = la.mat_mul(swap, la.mat_mul(j1, swap))
    half = Fraction(1, 2)
    lhs = la.mat_scale(half, la.mat_sub(j1, flipped))
    data = omega_and_r(v, w, split.vertices)

    def half_diff(r: la.Matrix, omega: la.Matrix) -> la.Matrix:
        # (r - r^{21})/2 with r^{21} = omega - r
        return la.mat_scale(half, la.mat_sub(la.mat_scale(2, r), omega))

    rhs = la.mat_scale(
        half,
        la.mat_sub(half_diff(data.r, data.omega), half_diff(data.r_sub, data.omega_sub)),
    )
    return {"match": lhs == rhs, "lhs": lhs, "rhs": rhs}
