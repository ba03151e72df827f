"""Parabolic complements inside the doubled triple.

For a vertex subset D, the doubled algebra g + h splits each Borel half
into the D-generated part and its orthogonal complement m_+- with
respect to the difference form. The complement is spanned by the root
vectors outside the D-span together with the Cartan combinations
orthogonal to the h_j with j in D. These complements are ideals of
their Borel halves, are stable under the D-part, and project cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg as la
from .liealg import (
    ChevalleyAlgebra,
    Element,
    _add_into,
    build_manin_triple,
    cobracket,
    r_tensor,
)

Doubled = dict[int, Fraction]


def _doubled_dim(alg: ChevalleyAlgebra) -> int:
    return alg.dim + alg.n


def _to_vec(alg: ChevalleyAlgebra, el: Doubled) -> la.Vector:
    out = [Fraction(0)] * _doubled_dim(alg)
    for i, c in el.items():
        out[i] += c
    return tuple(out)


def doubled_bracket(alg: ChevalleyAlgebra, a: Doubled, b: Doubled) -> Doubled:
    """Bracket on g + h: the g-legs bracket, the h-copy legs commute."""
    out: Doubled = {}
    for i, ca in a.items():
        if i >= alg.dim:
            continue
        for j, cb in b.items():
            if j >= alg.dim:
                continue
            for k, v in alg.bracket_indices(i, j).items():
                _add_into(out, k, ca * cb * v)
    return out


@dataclass(frozen=True, eq=False)
class ParabolicSplit:
    """Orthogonal complements m_+- of the doubled D-part inside the
    Borel halves, with bases and projection data."""

    algebra: ChevalleyAlgebra
    vertices: frozenset[int]
    m_plus: tuple[Doubled, ...]
    m_minus: tuple[Doubled, ...]
    d_plus: tuple[Doubled, ...]
    d_minus: tuple[Doubled, ...]
    complement_roots: tuple[int, ...]

    def project_minus(self, el: Doubled) -> Doubled:
        """Component of a b_- element along m_- in the splitting
        b_- = (D-part) + m_-."""
        return self._project(el, self.m_minus, self.d_minus)

    def project_plus(self, el: Doubled) -> Doubled:
        return self._project(el, self.m_plus, self.d_plus)

    def _project(self, el: Doubled, m_basis, d_basis) -> Doubled:
        alg = self.algebra
        cols = [_to_vec(alg, b) for b in m_basis] + [
            _to_vec(alg, b) for b in d_basis
        ]
        mat = tuple(tuple(col[i] for col in cols) for i in range(_doubled_dim(alg)))
        sol = la.solve(mat, _to_vec(alg, el))
        assert sol is not None, "element must lie in the Borel half"
        out: Doubled = {}
        for coeff, b in zip(sol[: len(m_basis)], m_basis):
            for i, c in b.items():
                _add_into(out, i, coeff * c)
        return out


def parabolic_split(alg: ChevalleyAlgebra, vertices) -> ParabolicSplit:
    vertices = frozenset(vertices)
    assert vertices <= set(range(alg.n))
    triple = build_manin_triple(alg)
    q = alg.num_positive
    n = alg.n

    in_span = [
        all(c == 0 or j in vertices for j, c in enumerate(root))
        for root in alg.positive
    ]
    complement = tuple(k for k in range(q) if not in_span[k])

    # Cartan combinations orthogonal to the h_j, j in D, under the
    # coroot Gram
    gram = alg.coroot_gram()
    if vertices:
        rows = tuple(gram[j] for j in sorted(vertices))
        cartan_coeffs = la.nullspace(rows)
    else:
        cartan_coeffs = tuple(la.identity(n))

    def half(sign: int):
        basis = triple.plus_basis if sign > 0 else triple.minus_basis
        m = [dict(basis[k]) for k in complement]
        for coeffs in cartan_coeffs:
            vec: Doubled = {}
            for j, c in enumerate(coeffs):
                if c:
                    for i, v in basis[q + j].items():
                        _add_into(vec, i, c * v)
            m.append(vec)
        d_part = [dict(basis[k]) for k in range(q) if in_span[k]]
        d_part += [dict(basis[q + j]) for j in sorted(vertices)]
        return tuple(m), tuple(d_part)

    m_plus, d_plus = half(+1)
    m_minus, d_minus = half(-1)
    split = ParabolicSplit(
        alg, vertices, m_plus, m_minus, d_plus, d_minus, complement
    )
    _verify_split(split, triple)
    return split


def _verify_split(split: ParabolicSplit, triple) -> None:
    alg = split.algebra
    ddim = _doubled_dim(alg)
    for m_basis, d_basis in (
        (split.m_plus, split.d_plus),
        (split.m_minus, split.d_minus),
    ):
        m_vecs = tuple(_to_vec(alg, b) for b in m_basis)
        m_span = la.span(m_vecs, ddim) if m_vecs else ()
        # orthogonality to the doubled D-part
        for b in m_basis:
            for d in d_basis:
                assert triple.doubled_form(b, d) == 0
        # ideal in the Borel half, stable under the D-part
        for b in list(m_basis):
            for other in list(m_basis) + list(d_basis):
                out = doubled_bracket(alg, b, other)
                if out:
                    assert la.in_span(_to_vec(alg, out), m_span), (
                        "complement must be an ideal of its Borel half"
                    )
        # projection restricted to the complement is the identity
        project = (
            split.project_plus if m_basis is split.m_plus else split.project_minus
        )
        for b in m_basis:
            got = project(dict(b))
            assert _to_vec(alg, got) == _to_vec(alg, b)
    _verify_coideal(split)


def _verify_coideal(split: ParabolicSplit) -> None:
    """The cobracket sends the negative complement into
    m_- (x) b_- + b_- (x) m_-, read on the first legs."""
    alg = split.algebra
    dim = alg.dim
    m_proj: list[Element] = []
    for el in split.m_minus:
        m_proj.append({i: c for i, c in el.items() if i < dim and c})
    borel = [alg.neg_index(k) for k in range(alg.num_positive)]
    borel += [alg.h_index(i) for i in range(alg.n)]
    pos = {b: k for k, b in enumerate(borel)}
    s = len(borel)
    m = len(m_proj)

    # adapted basis of the Borel coordinate subspace: the complement
    # vectors first, completed by unit vectors
    cols = []
    spanned: tuple = ()
    for x in m_proj:
        col = [Fraction(0)] * s
        for i, c in x.items():
            col[pos[i]] = c
        cols.append(tuple(col))
        spanned = la.span(tuple(cols), s)
    assert len(spanned) == m, "complement basis must be independent"
    for k in range(s):
        unit = tuple(Fraction(1 if j == k else 0) for j in range(s))
        if not la.in_span(unit, spanned):
            cols.append(unit)
            spanned = la.span(tuple(cols), s)
    assert len(cols) == s
    u_inv = la.mat_inv(tuple(tuple(col[i] for col in cols) for i in range(s)))

    r = r_tensor(alg)
    for x in m_proj:
        delta: dict[tuple[int, int], Fraction] = {}
        for i, c in x.items():
            for pair, v in cobracket(alg, i, r).items():
                _add_into(delta, pair, c * v)
        rows = [[Fraction(0)] * s for _ in range(s)]
        for (a, b), v in delta.items():
            assert a in pos and b in pos, "cobracket left the Borel half"
            rows[pos[a]][pos[b]] += v
        adapted = la.mat_mul(
            la.mat_mul(u_inv, tuple(tuple(r_) for r_ in rows)),
            la.transpose(u_inv),
        )
        for a in range(m, s):
            for b in range(m, s):
                assert adapted[a][b] == 0, "cobracket left the coideal"
