"""Acceptance gate: eight end-to-end criteria, each with a time budget.

One test per criterion. Every check runs in exact rational arithmetic
with zero tolerance, prints a pass line with its wall time, and asserts
the stated budget. Where a criterion calls for cross-checking, the
oracle side comes from the independent implementations in _oracles.py,
never from the code under test.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from _oracles import atlas_diagrams, oracle_nested_sets

from dynkit import _linalg as la
from dynkit import liealg
from dynkit.assoc import (
    FacePoset,
    PhiAssignment,
    RationalMatrixGroup,
    check_coherence,
    free_telescoping,
)
from dynkit.cartan import (
    FEASIBLE,
    INFEASIBLE,
    CorankViolation,
    DimensionObstruction,
    Gcm,
    affine_dstructure,
    analyze_dstructure,
    check_corank_lemma,
    find_symmetrizer,
    verify_dstructure,
)
from dynkit.diagrams import Subdiagram, collapse, compatible, lift, preset_diagram, quotient
from dynkit.errors import NotSymmetrizable
from dynkit.nested import enumerate_maximal_nested_sets, enumerate_nested_sets
from dynkit.parabolic import parabolic_split
from dynkit.reps import (
    braid_order,
    check_braid,
    check_coproduct_identity,
    irrep,
    irreps_up_to_dim,
    omega_and_r,
    realize_tensor,
    s_ic,
    tensor_module,
)
from dynkit.series import SeriesMatrix
from dynkit.twist import one_jet_twist, verify_alt2

F = Fraction

MATRIX_ONE = [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
MATRIX_TWO = [[2, -2, 0, 0], [-2, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]]


@contextmanager
def criterion(number: int, budget: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    print(f"criterion {number}: PASS ({elapsed:.2f}s / {budget:.0f}s budget)")
    assert elapsed < budget, (
        f"criterion {number} exceeded its {budget:.0f}s budget: {elapsed:.2f}s"
    )


# -- criterion 1: nested set combinatorics ---------------------------------------------


def test_criterion_1_nested_set_combinatorics():
    with criterion(1, 10.0):
        # maximal counts on paths match Catalan numbers and an
        # independent brute-force enumeration
        for n in range(1, 6):
            d = preset_diagram(f"A{n}")
            mns = enumerate_maximal_nested_sets(d)
            catalan = math.comb(2 * n, n) // (n + 1)
            assert len(mns) == catalan
            oracle_all = oracle_nested_sets(d)
            oracle_max = [s for s in oracle_all if not any(s < t for t in oracle_all)]
            assert len(oracle_max) == catalan
            assert {m.elements for m in mns} == set(oracle_max)
        # cardinality of maximal sets and the degree formula, on every
        # diagram with at most six vertices
        for d in atlas_diagrams(6):
            all_sets = enumerate_nested_sets(d)
            masked = [frozenset(map(d.mask_of, s.elements)) for s in all_sets]
            fams = set(masked)
            conn = [
                m for m in range(1, d.full_mask + 1) if d.connected_mask(m)
            ]
            for s, ms in zip(all_sets, masked):
                assert s.degree == d.n - len(ms)
                if len(ms) < d.n:
                    # anything below full cardinality extends, so the
                    # maximal families are exactly those of size |D|
                    assert any(c not in ms and (ms | {c}) in fams for c in conn)
            mns = enumerate_maximal_nested_sets(d)
            assert all(len(m.elements) == d.n for m in mns)
            assert {frozenset(map(d.mask_of, m.elements)) for m in mns} == {
                f for f in fams if len(f) == d.n
            }


# -- criterion 2: quotient bijection ---------------------------------------------------


def _connected_masks(d):
    return [m for m in range(1, d.full_mask + 1) if d.connected_mask(m)]


def _all_connected_subs(d):
    return [Subdiagram.of(d, d.verts_of(m)) for m in _connected_masks(d)]


def _compatibility_sweep(max_vertices: int, cross_check: bool) -> None:
    """Collapse preserves compatibility except possibly for orthogonal
    pairs both joined to one kernel component. Mask arithmetic on the
    quotient diagram the package built; when `cross_check` is set, every
    mask verdict is compared with the public collapse/compatible path."""
    for d in atlas_diagrams(max_vertices):
        conn = _connected_masks(d)
        nbr = {m: d.neighbors_mask(m) for m in conn}
        pairs = []
        for a, b in itertools.combinations(conn, 2):
            if a & b:
                u = a | b
                if u == a or u == b:
                    pairs.append((a, b, False))
            elif not nbr[a] & b:
                pairs.append((a, b, True))
        for kmask in range(1, d.full_mask):
            q = quotient(d, d.verts_of(kmask))
            comp_masks = d.component_masks(kmask)
            comp_nbrs = [d.neighbors_mask(cm) for cm in comp_masks]
            qd = q.diagram
            qpos = {v: i for i, v in enumerate(qd.vertices)}
            qbit = {
                1 << i: 1 << qpos[v]
                for i, v in enumerate(d.vertices)
                if not kmask >> i & 1
            }
            qadj = qd.adjacency_masks

            def to_q(mask):
                out = 0
                m = mask & ~kmask
                while m:
                    low = m & -m
                    out |= qbit[low]
                    m ^= low
                return out

            qnbr_cache = {}

            def qnbr(qm):
                try:
                    return qnbr_cache[qm]
                except KeyError:
                    out = 0
                    m = qm
                    while m:
                        i = m.bit_length() - 1
                        out |= qadj[i]
                        m ^= 1 << i
                    out &= ~qm
                    qnbr_cache[qm] = out
                    return out

            for a, b, orth in pairs:
                if not a & ~kmask or not b & ~kmask:
                    continue
                if orth and any(
                    (cm & a or cn & a) and (cm & b or cn & b)
                    for cm, cn in zip(comp_masks, comp_nbrs)
                ):
                    continue
                qa, qb = to_q(a), to_q(b)
                if qa & qb:
                    u = qa | qb
                    ok = u == qa or u == qb
                else:
                    ok = not qnbr(qa) & qb
                assert ok, (d.vertices, kmask, a, b)
                if cross_check:
                    ca = collapse(q, Subdiagram.of(d, d.verts_of(a)))
                    cb = collapse(q, Subdiagram.of(d, d.verts_of(b)))
                    assert compatible(ca, cb) == ok


def test_criterion_2_quotient_bijection():
    with criterion(2, 30.0):
        # collapse after lift is the identity for every kernel choice
        for d in atlas_diagrams(6):
            for r in range(1, d.n):
                for kernel in itertools.combinations(d.vertices, r):
                    q = quotient(d, kernel)
                    for a in _all_connected_subs(q.diagram):
                        lifted = lift(q, a)
                        assert collapse(q, lifted).vertex_set == a.vertex_set
        _compatibility_sweep(5, cross_check=True)
        _compatibility_sweep(6, cross_check=False)


# -- criterion 3: face complex ----------------------------------------------------------


def test_criterion_3_face_complex():
    with criterion(3, 30.0):
        a3 = preset_diagram("A3")
        pentagon = FacePoset.of(a3)
        assert pentagon.f_vector == (5, 5, 1)
        assert pentagon.euler_characteristic == 1
        for d in atlas_diagrams(6):
            if d.component_masks() == (d.full_mask,):
                assert FacePoset.of(d).euler_characteristic == 1
        # every telescoping assignment is coherent, over the free group
        # and over random rational matrices
        rng = random.Random(8)
        carrier = RationalMatrixGroup(2)
        for name in ("A2", "A3", "A4", "B2+A1"):
            d = preset_diagram(name)
            mns = enumerate_maximal_nested_sets(d)
            assert check_coherence(d, free_telescoping(mns)).ok
            labels = {}
            for f in mns:
                a, b = rng.randrange(-3, 4), rng.randrange(-3, 4)
                labels[f] = la.mat_mul(
                    ((F(1), F(a)), (F(0), F(1))), ((F(1), F(0)), (F(b), F(1)))
                )
            phi = PhiAssignment.from_telescoping(carrier, labels)
            assert check_coherence(d, phi).ok
        # a planted defect on one pentagon edge is rejected
        mns = enumerate_maximal_nested_sets(a3)
        cycle = [mns[0]]
        while len(cycle) < 5:
            cycle.append(
                next(
                    g
                    for g in mns
                    if g not in cycle and len(cycle[-1].elements - g.elements) == 1
                )
            )
        phi = PhiAssignment(carrier)
        eye = carrier.identity()
        shear = ((F(1), F(1)), (F(0), F(1)))
        for k in range(5):
            phi.set_pair(cycle[k], cycle[(k + 1) % 5], shear if k == 4 else eye)
        report = check_coherence(a3, phi)
        assert not report.ok
        assert len(report.failures) == 1
        assert report.failures[0].product != eye


# -- criterion 4: complement structure verdicts ------------------------------------------


def test_criterion_4_dstructure_verdicts():
    with criterion(4, 5.0):
        one = analyze_dstructure(Gcm.make(MATRIX_ONE))
        assert one.verdict == INFEASIBLE
        assert isinstance(one.certificate, CorankViolation)
        two = analyze_dstructure(Gcm.make(MATRIX_TWO))
        assert two.verdict == INFEASIBLE
        assert isinstance(two.certificate, DimensionObstruction)
        names = (
            "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4",
            "D4", "F4", "G2", "A1+A1", "A2+B2",
        )
        for name in names:
            result = analyze_dstructure(liealg.standard_gcm(name))
            assert result.verdict == FEASIBLE, name
            assert result.structure is not None, name
            assert verify_dstructure(result.structure) == (), name
        for rows in ([[2, -2], [-2, 2]], [[2, -1], [-4, 2]], [[2, -4], [-1, 2]]):
            ds = affine_dstructure(Gcm.make(rows))
            assert verify_dstructure(ds) == ()


# -- criterion 5: corank inequality vs verdicts ------------------------------------------

_GCM_PAIRS = [
    (0, 0), (0, 0), (0, 0),
    (-1, -1), (-1, -1),
    (-1, -2), (-2, -1),
    (-1, -3), (-3, -1),
    (-2, -2), (-1, -4),
]


def _random_symmetrizable(rng, max_n=5) -> Gcm:
    while True:
        n = rng.randint(1, max_n)
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a[i][j], a[j][i] = _GCM_PAIRS[rng.randrange(len(_GCM_PAIRS))]
        g = Gcm.make(a)
        try:
            find_symmetrizer(g)
        except NotSymmetrizable:
            continue
        return g


def test_criterion_5_corank_lemma_never_contradicts_feasibility():
    with criterion(5, 60.0):
        rng = random.Random(20260816)
        feasible = violated = 0
        for _ in range(1000):
            g = _random_symmetrizable(rng)
            violations = check_corank_lemma(g)
            result = analyze_dstructure(g)
            assert not (result.verdict == FEASIBLE and violations)
            feasible += result.verdict == FEASIBLE
            violated += bool(violations)
        # both sides of the implication must actually occur
        assert feasible > 0 and violated > 0


# -- criterion 6: braid relations, centrality, invariance ---------------------------------


def test_criterion_6_lie_identities():
    with criterion(6, 30.0):
        a2 = liealg.build_algebra(liealg.standard_gcm("A2"))
        weights = irreps_up_to_dim(a2, 15)
        assert len(weights) == 12
        for lam in weights:
            assert check_braid(irrep(a2, lam), 0, 1), lam
        b2 = liealg.build_algebra(liealg.standard_gcm("B2"))
        assert braid_order(b2, 0, 1) == 4
        for lam in irreps_up_to_dim(b2, 10):
            assert check_braid(irrep(b2, lam), 0, 1), lam
        # the square of the normalized local element is central
        a1 = liealg.build_algebra(liealg.standard_gcm("A1"))
        for k in range(5):
            m = irrep(a1, (k,))
            s = s_ic(m, 0, order=2)
            sq = s * s
            for idx in range(a1.dim):
                p = SeriesMatrix.constant(m.operator(idx), 2)
                assert sq * p == p * sq
        # invariance of the symmetrized pairing tensor
        cases = (
            (a1, (1,), (1,)),
            (a2, (1, 0), (1, 0)),
            (a2, (1, 0), (0, 1)),
        )
        for alg, lv, lw in cases:
            v, w = irrep(alg, lv), irrep(alg, lw)
            coupled = tensor_module(v, w)
            om = omega_and_r(v, w).omega
            for idx in range(alg.dim):
                p = coupled.operator(idx)
                assert la.mat_mul(p, om) == la.mat_mul(om, p)


# -- criterion 7: one-jets of the relative twist -----------------------------------------


def test_criterion_7_twist_one_jets():
    with criterion(7, 120.0):
        cases = (("A1", ()), ("A2", ()), ("A2", (0,)))
        for name, sub in cases:
            alg = liealg.build_algebra(liealg.standard_gcm(name))
            split = parabolic_split(alg, sub)
            v = irrep(alg, (1,) + (0,) * (alg.n - 1))
            jet = one_jet_twist(v, v, split)
            assert jet.at(0) == la.identity(v.dim * v.dim)
            want = liealg.tensor_add(
                liealg.r_tensor(alg),
                liealg.tensor_flip(liealg.r_tensor(alg, frozenset(sub))),
            )
            assert jet.at(1) == la.mat_scale(F(1, 2), realize_tensor(want, v, v))
            alt = verify_alt2(v, v, split)
            assert alt["match"]
        # depth stability: a deeper truncation gives the same jet
        a1 = liealg.build_algebra(liealg.standard_gcm("A1"))
        v1 = irrep(a1, (1,))
        s_abs = parabolic_split(a1, ())
        assert one_jet_twist(v1, v1, s_abs, depth=4) == one_jet_twist(v1, v1, s_abs)
        a2 = liealg.build_algebra(liealg.standard_gcm("A2"))
        f = irrep(a2, (1, 0))
        s_rel = parabolic_split(a2, (0,))
        assert one_jet_twist(f, f, s_rel, depth=6) == one_jet_twist(f, f, s_rel)


# -- criterion 8: coproduct identity ------------------------------------------------------


def test_criterion_8_coproduct_identity():
    with criterion(8, 10.0):
        a1 = liealg.build_algebra(liealg.standard_gcm("A1"))
        v = irrep(a1, (1,))
        report = check_coproduct_identity(v, v, 0, order=1)
        assert report["grouplike"] is True
        assert report["coproduct_casimir"] is True
        assert report["residual_left"] == (True, True)
        assert report["residual_right"] == (True, True)
        # the first-order twist correction the identity consumes is half
        # the classical pairing tensor
        jet = one_jet_twist(v, v, parabolic_split(a1, ()))
        half_r = la.mat_scale(
            F(1, 2), realize_tensor(liealg.r_tensor(a1), v, v)
        )
        assert jet.at(1) == half_r
