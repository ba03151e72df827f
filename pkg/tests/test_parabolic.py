"""Parabolic complement tests.

The sl3 single-vertex fixture was worked out by hand: with D = {0},
the orthogonal complement of the doubled D-part inside the negative
Borel half is spanned by the root vectors for -(0,1) and -(1,1)
together with the Cartan combination h_0 + 2 h_1 (embedded with its
negative h-copy leg). Everything else is degenerate-case bookkeeping
plus the construction-time checks firing across small diagrams.
"""

import itertools
from fractions import Fraction

import pytest

from dynkit import _linalg as la
from dynkit import liealg
from dynkit.parabolic import doubled_bracket, parabolic_split

F = Fraction


def alg_of(name):
    return liealg.build_algebra(liealg.standard_gcm(name))


def to_vec(alg, el):
    out = [F(0)] * (alg.dim + alg.n)
    for i, c in el.items():
        out[i] += c
    return tuple(out)


def test_sl3_single_vertex_fixture():
    alg = alg_of("A2")
    split = parabolic_split(alg, {0})
    assert split.vertices == frozenset({0})
    # positive roots sorted by (height, lex): (0,1), (1,0), (1,1)
    assert split.complement_roots == (0, 2)

    expected = (
        {alg.neg_index(0): F(1)},
        {alg.neg_index(2): F(1)},
        {
            alg.h_index(0): F(1),
            alg.h_index(1): F(2),
            alg.dim + 0: F(-1),
            alg.dim + 1: F(-2),
        },
    )
    got = la.span(tuple(to_vec(alg, b) for b in split.m_minus), alg.dim + alg.n)
    want = la.span(tuple(to_vec(alg, b) for b in expected), alg.dim + alg.n)
    assert la.subspace_eq(got, want)

    # the positive half mirrors it with e-vectors and +1 h-copy legs
    expected_plus = (
        {alg.pos_index(0): F(1)},
        {alg.pos_index(2): F(1)},
        {
            alg.h_index(0): F(1),
            alg.h_index(1): F(2),
            alg.dim + 0: F(1),
            alg.dim + 1: F(2),
        },
    )
    got = la.span(tuple(to_vec(alg, b) for b in split.m_plus), alg.dim + alg.n)
    want = la.span(tuple(to_vec(alg, b) for b in expected_plus), alg.dim + alg.n)
    assert la.subspace_eq(got, want)


def test_empty_subdiagram_gives_whole_borel():
    alg = alg_of("A2")
    split = parabolic_split(alg, frozenset())
    assert split.complement_roots == (0, 1, 2)
    assert len(split.m_minus) == alg.num_positive + alg.n
    assert len(split.m_plus) == alg.num_positive + alg.n
    assert split.d_minus == ()
    assert split.d_plus == ()


def test_full_subdiagram_gives_zero_complement():
    alg = alg_of("B2")
    split = parabolic_split(alg, {0, 1})
    assert split.m_minus == ()
    assert split.m_plus == ()
    assert split.complement_roots == ()
    assert len(split.d_minus) == alg.num_positive + alg.n


def test_all_small_subdiagrams_verify():
    # construction runs the orthogonality, ideal, coideal, and
    # projection checks; sizes follow the complement-root count
    for name in ("A2", "A3", "B2"):
        alg = alg_of(name)
        for size in range(alg.n + 1):
            for d in itertools.combinations(range(alg.n), size):
                split = parabolic_split(alg, d)
                expect = len(split.complement_roots) + alg.n - len(d)
                assert len(split.m_minus) == expect
                assert len(split.m_plus) == expect


def test_projection_drops_the_d_part():
    alg = alg_of("A2")
    split = parabolic_split(alg, {0})
    mixed = {alg.neg_index(0): F(3), alg.neg_index(1): F(5)}
    assert split.project_minus(mixed) == {alg.neg_index(0): F(3)}
    mixed_plus = {alg.pos_index(2): F(2), alg.pos_index(1): F(-1)}
    assert split.project_plus(mixed_plus) == {alg.pos_index(2): F(2)}


def test_projection_rejects_wrong_half():
    alg = alg_of("A2")
    split = parabolic_split(alg, {0})
    with pytest.raises(AssertionError):
        split.project_minus({alg.pos_index(0): F(1)})


def test_doubled_bracket_rules():
    alg = alg_of("A2")
    # the h-copy legs never bracket
    assert doubled_bracket(alg, {alg.dim + 0: F(1)}, {alg.dim + 1: F(1)}) == {}
    assert doubled_bracket(alg, {alg.dim + 0: F(1)}, {alg.neg_index(0): F(1)}) == {}
    # the g legs bracket as usual: [h_0, f_(0,1)] = f_(0,1)
    h_minus = {alg.h_index(0): F(1), alg.dim + 0: F(-1)}
    out = doubled_bracket(alg, h_minus, {alg.neg_index(0): F(1)})
    assert out == {alg.neg_index(0): F(1)}
