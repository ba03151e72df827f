"""Finite-dimensional modules and the operators built from them.

Irreducible highest-weight modules are realized as Verma quotients:
the weight spaces of the Verma module are spanned by ordered monomials
in the negative root vectors, the maximal submodule is generated by
f_i^{lam_i + 1} applied to the highest vector, and each weight space is
reduced exactly by row echelon elimination. The dimension of every
module built this way is checked against the Weyl dimension formula,
which uses nothing but the GCM and its root system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from . import series
from .errors import NotDominant
from .liealg import (
    ChevalleyAlgebra,
    Element,
    Tensor,
    _add_into,
    build_algebra,
    casimir_tensor,
    r_tensor,
    tensor_add,
    tensor_flip,
)

Weight = tuple[Fraction, ...]


@dataclass(frozen=True, eq=False)
class WeightModule:
    """Module with a chosen weight basis: one action matrix per algebra
    basis index, applied to column vectors."""

    algebra: ChevalleyAlgebra
    weights: tuple[Weight, ...]
    actions: tuple[la.Matrix, ...]
    highest: Weight | None = None

    @property
    def dim(self) -> int:
        return len(self.weights)

    def operator(self, idx: int) -> la.Matrix:
        return self.actions[idx]

    def act(self, el: Element) -> la.Matrix:
        out = la.zeros(self.dim, self.dim)
        for idx, c in el.items():
            out = la.mat_add(out, la.mat_scale(c, self.actions[idx]))
        return out


def weyl_dim(alg: ChevalleyAlgebra, lam: Sequence[int]) -> int:
    """Weyl dimension formula, straight from the GCM data."""
    d = alg.sym
    n = alg.n

    def pair(mu, root):
        return sum(Fraction(root[j]) * d[j] * mu[j] for j in range(n))

    rho = (Fraction(1),) * n
    shifted = tuple(Fraction(x) + 1 for x in lam)
    out = Fraction(1)
    for root in alg.positive:
        out *= pair(shifted, root) / pair(rho, root)
    assert out.denominator == 1 and out > 0
    return int(out)


def _monomials_by_level(alg: ChevalleyAlgebra, level: int):
    """Exponent tuples over the positive roots with total height
    `level`, grouped by the exact root-lattice weight they lower by."""
    heights = [sum(r) for r in alg.positive]
    p = len(heights)
    out: dict[tuple[int, ...], list[tuple[int, ...]]] = {}

    def rec(pos: int, remaining: int, acc: list[int]):
        if pos == p:
            if remaining == 0:
                mono = tuple(acc)
                nu = [0] * alg.n
                for b, k in enumerate(mono):
                    if k:
                        for j, c in enumerate(alg.positive[b]):
                            nu[j] += k * c
                out.setdefault(tuple(nu), []).append(mono)
            return
        top = remaining // heights[pos]
        for k in range(top + 1):
            acc.append(k)
            rec(pos + 1, remaining - k * heights[pos], acc)
            acc.pop()

    rec(0, level, [])
    for monos in out.values():
        monos.sort()
    return out


class _VermaSpace:
    """One weight space of the Verma quotient: its monomials, the
    echelon rows of the submodule, and the surviving coset basis."""

    def __init__(self, monos: list[tuple[int, ...]], rows: list[la.Vector]):
        self.monos = monos
        self.index = {m: i for i, m in enumerate(monos)}
        if rows:
            red, pivots = la.rref(tuple(rows))
            self.rows = [r for r in red if any(r)]
            self.pivots = list(pivots)
        else:
            self.rows = []
            self.pivots = []
        pivot_set = set(self.pivots)
        self.free = [i for i in range(len(monos)) if i not in pivot_set]

    def reduce(self, vec: dict) -> tuple[Fraction, ...]:
        coords = [Fraction(0)] * len(self.monos)
        for mono, c in vec.items():
            coords[self.index[mono]] += c
        for row, pcol in zip(self.rows, self.pivots):
            c = coords[pcol]
            if c:
                for j, v in enumerate(row):
                    if v:
                        coords[j] -= c * v
        for pcol in self.pivots:
            assert coords[pcol] == 0
        return tuple(coords[i] for i in self.free)


def irrep(alg: ChevalleyAlgebra, lam: Sequence[int]) -> WeightModule:
    """Irreducible module with dominant integral highest weight, given
    by its pairings with the h_i."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != alg.n or any(x < 0 for x in lam):
        raise NotDominant(
            "highest weight must be a tuple of nonnegative integers, one per vertex"
        )
    p = alg.num_positive
    gcm = alg.gcm
    n = alg.n
    gen_cache: dict = {}

    def mul_gen(b: int, mono: tuple[int, ...]) -> dict:
        """Normal ordering of f_b times an ordered monomial."""
        key = (b, mono)
        hit = gen_cache.get(key)
        if hit is not None:
            return hit
        c = next((i for i, k in enumerate(mono) if k), None)
        if c is None or b <= c:
            new = list(mono)
            new[b] += 1
            out = {tuple(new): Fraction(1)}
        else:
            rest = list(mono)
            rest[c] -= 1
            rest = tuple(rest)
            out = {}
            for m2, v in mul_gen(b, rest).items():
                new = list(m2)
                new[c] += 1
                _add_into(out, tuple(new), v)
            br = alg.bracket_indices(alg.neg_index(b), alg.neg_index(c))
            for idx, coeff in br.items():
                kind, kk = alg.kind(idx)
                assert kind == "neg"
                for m2, v in mul_gen(kk, rest).items():
                    _add_into(out, m2, coeff * v)
        gen_cache[key] = out
        return out

    act_cache: dict = {}

    def act_mono(x_idx: int, mono: tuple[int, ...]) -> dict:
        """Action of an algebra basis vector on (monomial . highest)."""
        key = (x_idx, mono)
        hit = act_cache.get(key)
        if hit is not None:
            return hit
        kind, k = alg.kind(x_idx)
        if kind == "neg":
            out = mul_gen(k, mono)
        elif kind == "cartan":
            val = Fraction(lam[k])
            for b, kb in enumerate(mono):
                if kb:
                    val -= kb * sum(
                        alg.positive[b][j] * gcm[k, j] for j in range(n)
                    )
            out = {mono: val} if val else {}
        else:
            c = next((i for i, kk in enumerate(mono) if kk), None)
            if c is None:
                out = {}
            else:
                rest = list(mono)
                rest[c] -= 1
                rest = tuple(rest)
                out = {}
                for m2, v in act_mono(x_idx, rest).items():
                    for m3, w in mul_gen(c, m2).items():
                        _add_into(out, m3, v * w)
                br = alg.bracket_indices(x_idx, alg.neg_index(c))
                for idx, coeff in br.items():
                    for m3, w in act_mono(idx, rest).items():
                        _add_into(out, m3, coeff * w)
        act_cache[key] = out
        return out

    # submodule generators f_i^{lam_i + 1}
    generators = []
    for i in range(n):
        b = alg.e_index(i)
        g: dict = {(0,) * p: Fraction(1)}
        for _ in range(lam[i] + 1):
            nxt: dict = {}
            for mono, c in g.items():
                for m2, v in mul_gen(b, mono).items():
                    _add_into(nxt, m2, c * v)
            g = nxt
        generators.append((i, b, lam[i] + 1, g))

    def left_multiply(mono: tuple[int, ...], el: dict) -> dict:
        """mono (as a word in the f_b) times an element of U(n_-)."""
        cur = el
        for b in range(p - 1, -1, -1):
            for _ in range(mono[b]):
                nxt: dict = {}
                for m2, c in cur.items():
                    for m3, v in mul_gen(b, m2).items():
                        _add_into(nxt, m3, c * v)
                cur = nxt
        return cur

    spaces: dict[tuple[int, ...], _VermaSpace] = {}
    level_cache: dict[int, dict] = {}

    def monomials_at(lvl: int) -> dict:
        if lvl not in level_cache:
            level_cache[lvl] = _monomials_by_level(alg, lvl)
        return level_cache[lvl]

    def build_space(nu, monos, level) -> _VermaSpace:
        rows: list[la.Vector] = []
        mono_pos = {m: i for i, m in enumerate(monos)}
        for i, b, power, g in generators:
            # weight removed by the generator itself
            gen_nu = tuple(power * (1 if j == i else 0) for j in range(n))
            need = tuple(a - bb for a, bb in zip(nu, gen_nu))
            if any(x < 0 for x in need):
                continue
            need_level = level - power
            for mono in monomials_at(need_level).get(need, []):
                vec = left_multiply(mono, g)
                row = [Fraction(0)] * len(monos)
                for m2, c in vec.items():
                    row[mono_pos[m2]] += c
                if any(row):
                    rows.append(tuple(row))
        return _VermaSpace(monos, rows)

    level = 0
    while True:
        assert level <= 200, "runaway weight levels"
        any_free = False
        for nu, monos in sorted(monomials_at(level).items()):
            space = build_space(nu, monos, level)
            spaces[nu] = space
            if space.free:
                any_free = True
        if not any_free and level > 0:
            break
        level += 1

    # root vectors can lower by more than one level in a single step, so
    # the action assembly may reduce against spaces past the stop level;
    # those are fully killed in the quotient
    top = max(sum(r) for r in alg.positive)
    for extra in range(level + 1, level + top):
        for nu, monos in sorted(monomials_at(extra).items()):
            space = build_space(nu, monos, extra)
            assert not space.free
            spaces[nu] = space

    # global basis: (nu, free monomial), weights ordered by level then nu
    basis: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    order_key = {}
    for nu in sorted(spaces, key=lambda t: (sum(t), t)):
        space = spaces[nu]
        for i in space.free:
            order_key[nu, space.monos[i]] = len(basis)
            basis.append((nu, space.monos[i]))
    dim = len(basis)
    assert dim == weyl_dim(alg, lam), "dimension must match the Weyl formula"

    weights = tuple(
        tuple(
            Fraction(lam[j]) - sum(nu[l] * gcm[j, l] for l in range(n))
            for j in range(n)
        )
        for nu, _ in basis
    )

    actions = []
    for x_idx in range(alg.dim):
        root = alg.signed_root(x_idx)
        cols = []
        for nu, mono in basis:
            if root is None:
                target = nu
            else:
                target = tuple(a - c for a, c in zip(nu, root))
            col = [Fraction(0)] * dim
            if all(x >= 0 for x in target) and target in spaces:
                vec = act_mono(x_idx, mono)
                reduced = spaces[target].reduce(vec)
                tspace = spaces[target]
                for pos, c in enumerate(reduced):
                    if c:
                        key = (target, tspace.monos[tspace.free[pos]])
                        col[order_key[key]] = c
            else:
                assert not act_mono(x_idx, mono), "action left the module support"
            cols.append(col)
        actions.append(tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim)))

    lam_frac = tuple(Fraction(x) for x in lam)
    return WeightModule(alg, weights, tuple(actions), lam_frac)


def trivial_module(alg: ChevalleyAlgebra) -> WeightModule:
    return irrep(alg, (0,) * alg.n)


def tensor_module(v: WeightModule, w: WeightModule) -> WeightModule:
    assert v.algebra is w.algebra
    weights = tuple(
        tuple(a + b for a, b in zip(wv, ww))
        for wv in v.weights
        for ww in w.weights
    )
    eye_v = la.identity(v.dim)
    eye_w = la.identity(w.dim)
    actions = tuple(
        la.mat_add(la.kron(v.actions[i], eye_w), la.kron(eye_v, w.actions[i]))
        for i in range(v.algebra.dim)
    )
    return WeightModule(v.algebra, weights, actions, None)


def irreps_up_to_dim(alg: ChevalleyAlgebra, bound: int) -> tuple[tuple[int, ...], ...]:
    """Dominant integral weights whose irreps have dimension at most
    `bound`; the Weyl dimension grows in each coordinate, so a lattice
    walk suffices."""
    found = []
    seen = set()
    frontier = [(0,) * alg.n]
    while frontier:
        nxt = []
        for lam in frontier:
            if lam in seen:
                continue
            seen.add(lam)
            if weyl_dim(alg, lam) <= bound:
                found.append(lam)
                for i in range(alg.n):
                    bumped = tuple(
                        x + (1 if j == i else 0) for j, x in enumerate(lam)
                    )
                    nxt.append(bumped)
        frontier = nxt
    return tuple(sorted(found, key=lambda t: (weyl_dim(alg, t), t)))


def restrict_to_subdiagram(module: WeightModule, vertices) -> WeightModule:
    """The same vector space as a module over the subdiagram algebra.

    Action matrices are reused along the root embedding of the
    subdiagram; weights keep only the subdiagram coordinates. The result
    is usually reducible, so no highest weight is recorded.
    """
    alg = module.algebra
    vs = tuple(sorted({int(j) for j in vertices}))
    assert vs and all(0 <= j < alg.n for j in vs), "need subdiagram vertices"
    sub = build_algebra(alg.gcm.submatrix(vs))

    def embed(root):
        full = [0] * alg.n
        for pos, j in enumerate(vs):
            full[j] = root[pos]
        return tuple(full)

    pos_parent = [alg.root_index(embed(r)) for r in sub.positive]
    actions = [module.actions[alg.pos_index(k)] for k in pos_parent]
    actions += [module.actions[alg.neg_index(k)] for k in pos_parent]
    actions += [module.actions[alg.h_index(j)] for j in vs]
    weights = tuple(tuple(wt[j] for j in vs) for wt in module.weights)
    return WeightModule(sub, weights, tuple(actions), None)


# -- reflection operators and Casimirs --------------------------------------------


def nilpotent_exp(m: la.Matrix) -> la.Matrix:
    dim = len(m)
    out = la.identity(dim)
    term = la.identity(dim)
    k = 0
    while True:
        k += 1
        assert k <= dim + 1, "matrix exponential needs a nilpotent input"
        term = la.mat_scale(Fraction(1, k), la.mat_mul(term, m))
        if la.is_zero(term):
            return out
        out = la.mat_add(out, term)


def tilde_s(module: WeightModule, i: int) -> la.Matrix:
    """exp(e_i) exp(-f_i) exp(e_i) on the module, exactly."""
    alg = module.algebra
    e = module.operator(alg.e_index(i))
    f = module.operator(alg.f_index(i))
    a = nilpotent_exp(e)
    b = nilpotent_exp(la.mat_scale(Fraction(-1), f))
    return la.mat_mul(la.mat_mul(a, b), a)


def casimir_element(module: WeightModule, i: int) -> la.Matrix:
    """d_i (e_i f_i + f_i e_i + h_i^2 / 2) on the module."""
    alg = module.algebra
    e = module.operator(alg.e_index(i))
    f = module.operator(alg.f_index(i))
    h = module.operator(alg.h_index(i))
    out = la.mat_add(la.mat_mul(e, f), la.mat_mul(f, e))
    out = la.mat_add(out, la.mat_scale(Fraction(1, 2), la.mat_mul(h, h)))
    return la.mat_scale(alg.sym[i], out)


def s_ic(module: WeightModule, i: int, order: int) -> series.SeriesMatrix:
    """tilde_s times exp((hbar/2) C_i), truncated."""
    c_half = la.mat_scale(Fraction(1, 2), casimir_element(module, i))
    arg = series.SeriesMatrix.single(1, c_half, order)
    return series.series_exp(arg).const_mul(tilde_s(module, i))


def braid_order(alg: ChevalleyAlgebra, i: int, j: int) -> int:
    product = alg.gcm[i, j] * alg.gcm[j, i]
    try:
        return {0: 2, 1: 3, 2: 4, 3: 6}[product]
    except KeyError:
        raise ValueError("vertex pair generates an infinite braid group") from None


def check_braid(
    module: WeightModule, i: int, j: int, element: str = "tilde_s", order: int = 1
) -> bool:
    """Braid relation of length m_ij for the chosen reflection-type
    elements, exactly (tilde_s) or modulo hbar^{order+1} (s_ic)."""
    m = braid_order(module.algebra, i, j)
    if element == "tilde_s":
        a = tilde_s(module, i)
        b = tilde_s(module, j)
        lhs, rhs = la.identity(module.dim), la.identity(module.dim)
        for k in range(m):
            lhs = la.mat_mul(lhs, a if k % 2 == 0 else b)
            rhs = la.mat_mul(rhs, b if k % 2 == 0 else a)
        return lhs == rhs
    if element == "s_ic":
        a = s_ic(module, i, order)
        b = s_ic(module, j, order)
        lhs = series.SeriesMatrix.identity(module.dim, order)
        rhs = series.SeriesMatrix.identity(module.dim, order)
        for k in range(m):
            lhs = lhs * (a if k % 2 == 0 else b)
            rhs = rhs * (b if k % 2 == 0 else a)
        return lhs == rhs
    raise ValueError(f"unknown element kind {element!r}")


# -- invariant tensors on module pairs --------------------------------------------


def realize_tensor(t: Tensor, v: WeightModule, w: WeightModule) -> la.Matrix:
    out = la.zeros(v.dim * w.dim, v.dim * w.dim)
    for (a, b), c in t.items():
        out = la.mat_add(
            out, la.mat_scale(c, la.kron(v.actions[a], w.actions[b]))
        )
    return out


@dataclass(frozen=True)
class OmegaR:
    omega: la.Matrix
    r: la.Matrix
    omega_sub: la.Matrix
    r_sub: la.Matrix


def omega_and_r(
    v: WeightModule, w: WeightModule, sub: frozenset[int] | None = None
) -> OmegaR:
    """Invariant 2-tensors of the pair, and of the subalgebra generated
    by `sub`, as operators on the tensor product."""
    alg = v.algebra
    r_abs = r_tensor(alg)
    omega_abs = tensor_add(r_abs, tensor_flip(r_abs))
    assert omega_abs == casimir_tensor(alg)
    r_sub_abs = r_tensor(alg, sub if sub is not None else frozenset(range(alg.n)))
    omega_sub_abs = tensor_add(r_sub_abs, tensor_flip(r_sub_abs))
    return OmegaR(
        realize_tensor(omega_abs, v, w),
        realize_tensor(r_abs, v, w),
        realize_tensor(omega_sub_abs, v, w),
        realize_tensor(r_sub_abs, v, w),
    )


def coproduct_matrix(v: WeightModule, w: WeightModule, el: Element) -> la.Matrix:
    """x (x) 1 + 1 (x) x on the product."""
    return la.mat_add(
        la.kron(v.act(el), la.identity(w.dim)),
        la.kron(la.identity(v.dim), w.act(el)),
    )


def series_kron(a: series.SeriesMatrix, b: series.SeriesMatrix) -> series.SeriesMatrix:
    assert a.order == b.order
    out = []
    for k in range(a.order + 1):
        acc = la.zeros(a.dim * b.dim, a.dim * b.dim)
        for l in range(k + 1):
            acc = la.mat_add(acc, la.kron(a.at(l), b.at(k - l)))
        out.append(acc)
    return series.SeriesMatrix(tuple(out))


def check_coproduct_identity(
    v: WeightModule, w: WeightModule, i: int, order: int = 1
) -> dict:
    """Compare the reflection element on V (x) W with the twisted
    product form, reporting residuals for both flip placements."""
    assert order >= 0
    alg = v.algebra
    t = tensor_module(v, w)
    report: dict = {"order": order}

    # hbar^0: the bare reflection is group-like, exactly
    s_t = tilde_s(t, i)
    s_pair = la.kron(tilde_s(v, i), tilde_s(w, i))
    report["grouplike"] = s_t == s_pair

    # Delta(C_i) = C_i (x) 1 + 1 (x) C_i + 2 Omega_i, exactly
    pair = omega_and_r(v, w, frozenset({i}))
    delta_c = la.mat_add(
        la.kron(casimir_element(v, i), la.identity(w.dim)),
        la.kron(la.identity(v.dim), casimir_element(w, i)),
    )
    delta_c_full = la.mat_add(delta_c, la.mat_scale(Fraction(2), pair.omega_sub))
    report["coproduct_casimir"] = casimir_element(t, i) == delta_c_full
    if order == 0:
        return report

    lhs = s_ic(t, i, order)
    s_pair_series = series_kron(s_ic(v, i, order), s_ic(w, i, order))
    r_i_abs = r_tensor(alg, frozenset({i}))
    r_op = realize_tensor(r_i_abs, v, w)
    r_flip_op = realize_tensor(tensor_flip(r_i_abs), v, w)
    half_omega = series.SeriesMatrix.single(
        1, la.mat_scale(Fraction(1, 2), pair.omega_sub), order
    )
    big_r = series.series_exp(half_omega)
    one = series.SeriesMatrix.identity(t.dim, order)
    j_jet = one + series.SeriesMatrix.single(
        1, la.mat_scale(Fraction(1, 2), r_op), order
    )
    j_flip = one + series.SeriesMatrix.single(
        1, la.mat_scale(Fraction(1, 2), r_flip_op), order
    )

    def resid(candidate):
        diff = lhs - candidate
        return tuple(la.is_zero(diff.at(k)) for k in range(order + 1))

    correction = big_r * j_flip * j_jet
    report["residual_left"] = resid(correction * s_pair_series)
    report["residual_right"] = resid(s_pair_series * correction)
    return report
