"""Face complexes of nested-set families and coherence of edge assignments.

The faces of the complex attached to a diagram are its nested sets,
ordered by reverse inclusion: adding a member shrinks the face. The
dimension of a face is the degree of the nested set, so maximal nested
sets are the vertices and the family of components alone is the unique
top face. Edges of the one-skeleton are the elementary pairs; faces of
dimension two carry a boundary cycle of vertices.

An assignment gives a group element to each oriented elementary pair,
with opposite orientations forced inverse to each other. Coherence
requires the product around the boundary of every two-dimensional face
to be the identity; factorization additionally requires the value to be
invariant under composition with a fixed lower layer and to depend only
on the support data of the pair, across all layers. Both checks return
reports with concrete counterexamples instead of booleans alone.

Group elements live in pluggable carriers: permutations, reduced words
of a free group, or exact rational matrices. The free-group telescoping
construction ships as the generic way to produce coherent assignments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import _linalg as la
import math

from .diagrams import Diagram
from .errors import MissingPair, NoRelation, NotElementary
from .nested import (
    LayeredNested,
    NestedSet,
    cup,
    enumerate_maximal_nested_sets,
    enumerate_nested_sets,
    equivalence_key,
    is_elementary,
    layer_diagram,
)


# -- face poset -----------------------------------------------------------------


@dataclass(frozen=True)
class FacePoset:
    """All faces of the nested-set complex of a diagram."""

    diagram: Diagram
    faces: tuple[NestedSet, ...]

    @staticmethod
    def of(diagram: Diagram, bound: int = 10) -> "FacePoset":
        faces = enumerate_nested_sets(diagram, bound=bound)
        faces.sort(key=lambda h: (h.degree, h.sorted_elements))
        return FacePoset(diagram, tuple(faces))

    @cached_property
    def top_dimension(self) -> int:
        return max(h.degree for h in self.faces)

    def faces_of_dim(self, k: int) -> tuple[NestedSet, ...]:
        return tuple(h for h in self.faces if h.degree == k)

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.top_dimension + 1)
        for h in self.faces:
            counts[h.degree] += 1
        return tuple(counts)

    @cached_property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def face_le(self, a: NestedSet, b: NestedSet) -> bool:
        """Face order: a is a face of b iff a's family refines b's."""
        return b.elements <= a.elements

    def covering_pairs(self) -> tuple[tuple[NestedSet, NestedSet], ...]:
        """(face, coface) pairs with dim(coface) = dim(face) + 1."""
        out = []
        by_dim: dict[int, list[NestedSet]] = {}
        for h in self.faces:
            by_dim.setdefault(h.degree, []).append(h)
        for k in range(self.top_dimension):
            for lower in by_dim.get(k, ()):
                for upper in by_dim.get(k + 1, ()):
                    if upper.elements < lower.elements:
                        out.append((lower, upper))
        return tuple(out)

    @property
    def vertices(self) -> tuple[NestedSet, ...]:
        return self.faces_of_dim(0)


def one_skeleton(
    poset_or_diagram, bound: int = 10
) -> tuple[tuple[NestedSet, ...], tuple[tuple[int, int], ...]]:
    """Vertices (maximal nested sets) and edges (elementary pairs) as
    index pairs i < j, deterministically ordered."""
    if isinstance(poset_or_diagram, FacePoset):
        verts = list(poset_or_diagram.vertices)
    else:
        verts = enumerate_maximal_nested_sets(poset_or_diagram, bound=bound)
    edges = []
    for i, f in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if len(f.elements - verts[j].elements) == 1:
                edges.append((i, j))
    return tuple(verts), tuple(edges)


def two_face_boundary(poset: FacePoset, face: NestedSet) -> tuple[NestedSet, ...]:
    """Boundary cycle of a dimension-two face, starting at its smallest
    vertex and proceeding toward the smaller of its two neighbors."""
    if face.degree != 2:
        raise ValueError("boundary cycles are defined for faces of dimension two")
    verts = [v for v in poset.vertices if face.elements <= v.elements]
    adj: dict[int, list[int]] = {i: [] for i in range(len(verts))}
    for i, f in enumerate(verts):
        for j in range(i + 1, len(verts)):
            if len(f.elements - verts[j].elements) == 1:
                adj[i].append(j)
                adj[j].append(i)
    assert all(len(nbrs) == 2 for nbrs in adj.values()), (
        "a two-dimensional face has a cycle as boundary"
    )
    order = sorted(range(len(verts)), key=lambda i: verts[i].sorted_elements)
    start = order[0]
    first = min(adj[start], key=lambda i: verts[i].sorted_elements)
    cycle = [start, first]
    while True:
        prev, cur = cycle[-2], cycle[-1]
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cycle.append(nxt)
    assert len(cycle) == len(verts), "boundary walk must close up through all vertices"
    return tuple(verts[i] for i in cycle)


def two_faces(poset: FacePoset) -> tuple[NestedSet, ...]:
    return poset.faces_of_dim(2)


# -- group carriers ----------------------------------------------------------------


class GroupCarrier:
    """Minimal group interface. Elements must be hashable values."""

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def product(self, elements: Iterable):
        out = self.identity()
        for e in elements:
            out = self.mul(out, e)
        return out

    def is_identity(self, a) -> bool:
        return a == self.identity()


class PermutationGroup(GroupCarrier):
    """Symmetric group on range(degree); elements are image tuples."""

    def __init__(self, degree: int):
        self.degree = degree

    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        # apply a first, then b
        return tuple(b[a[i]] for i in range(self.degree))

    def inv(self, a):
        out = [0] * self.degree
        for i, img in enumerate(a):
            out[img] = i
        return tuple(out)


class FreeGroup(GroupCarrier):
    """Free group on arbitrary hashable symbols; elements are reduced
    words of (symbol, exponent) pairs with exponent +1 or -1."""

    def identity(self):
        return ()

    def generator(self, symbol):
        return ((symbol, 1),)

    def mul(self, a, b):
        out = list(a)
        for sym, e in b:
            if out and out[-1][0] == sym and out[-1][1] == -e:
                out.pop()
            else:
                out.append((sym, e))
        return tuple(out)

    def inv(self, a):
        return tuple((sym, -e) for sym, e in reversed(a))


class RationalMatrixGroup(GroupCarrier):
    """Invertible matrices over the rationals, exact arithmetic."""

    def __init__(self, dim: int):
        self.dim = dim

    def identity(self):
        return la.identity(self.dim)

    def mul(self, a, b):
        return la.mat_mul(a, b)

    def inv(self, a):
        return la.mat_inv(a)


# -- assignments --------------------------------------------------------------------


class PhiAssignment:
    """Group values on oriented elementary pairs of one layer's maximal
    nested sets. Opposite orientations are stored once; querying the
    reverse returns the inverse, so the orientation axiom holds by
    construction."""

    def __init__(self, carrier: GroupCarrier):
        self.carrier = carrier
        self._values: dict[tuple[NestedSet, NestedSet], object] = {}

    def set_pair(self, f: NestedSet, g: NestedSet, value) -> None:
        if not is_elementary(f, g):
            raise NotElementary("assignments are defined on elementary pairs")
        if (g, f) in self._values:
            stored = self._values[(g, f)]
            if self.carrier.inv(stored) != value:
                raise ValueError("conflicting values for the two orientations")
            return
        self._values[(f, g)] = value

    def value(self, f: NestedSet, g: NestedSet):
        if (f, g) in self._values:
            return self._values[(f, g)]
        if (g, f) in self._values:
            return self.carrier.inv(self._values[(g, f)])
        raise MissingPair(
            f"no value assigned for the pair {f.sorted_elements} -> {g.sorted_elements}"
        )

    def has_pair(self, f: NestedSet, g: NestedSet) -> bool:
        return (f, g) in self._values or (g, f) in self._values

    def pairs(self) -> tuple[tuple[NestedSet, NestedSet], ...]:
        return tuple(self._values)

    @staticmethod
    def from_telescoping(
        carrier: GroupCarrier,
        labels: Mapping[NestedSet, object],
    ) -> "PhiAssignment":
        """Assignment value(F, G) = labels[F]^-1 labels[G]; coherent by
        construction since products along paths telescope."""
        phi = PhiAssignment(carrier)
        mns = list(labels)
        for i, f in enumerate(mns):
            for g in mns[i + 1 :]:
                if len(f.elements - g.elements) == 1:
                    phi.set_pair(
                        f, g, carrier.mul(carrier.inv(labels[f]), labels[g])
                    )
        return phi


def free_telescoping(mns: Sequence[NestedSet]) -> PhiAssignment:
    """Telescoping assignment in the free group on one generator per
    maximal nested set; the generic coherent assignment."""
    carrier = FreeGroup()
    labels = {f: carrier.generator(f.sorted_elements) for f in mns}
    return PhiAssignment.from_telescoping(carrier, labels)


def product_along_path(phi: PhiAssignment, path: Sequence[NestedSet]):
    """Ordered product of the values along consecutive elementary pairs."""
    return phi.carrier.product(
        phi.value(f, g) for f, g in zip(path, path[1:])
    )


# -- coherence ------------------------------------------------------------------------


@dataclass(frozen=True)
class CoherenceFailure:
    face: NestedSet
    cycle: tuple[NestedSet, ...]
    product: object
    # the two boundary paths with common endpoints whose products differ
    path_one: tuple[NestedSet, ...]
    path_two: tuple[NestedSet, ...]


@dataclass(frozen=True)
class CoherenceReport:
    ok: bool
    checked_faces: int
    failures: tuple[CoherenceFailure, ...]


def check_coherence(
    diagram: Diagram, phi: PhiAssignment, bound: int = 10
) -> CoherenceReport:
    """Product around every two-dimensional face must be the identity.

    Raises MissingPair when phi lacks a needed value. On failure the
    report carries, per bad face, the boundary cycle, its product, and
    the two halves of the cycle as explicit paths between the same
    endpoints (their products differ, which is the counterexample)."""
    poset = FacePoset.of(diagram, bound=bound)
    failures = []
    faces = two_faces(poset)
    for face in faces:
        cycle = two_face_boundary(poset, face)
        closed = list(cycle) + [cycle[0]]
        prod = product_along_path(phi, closed)
        if not phi.carrier.is_identity(prod):
            m = len(cycle) // 2
            path_one = tuple(closed[: m + 1])
            path_two = tuple([closed[0]] + list(reversed(closed[m:-1])))
            failures.append(
                CoherenceFailure(face, cycle, prod, path_one, path_two)
            )
    return CoherenceReport(not failures, len(faces), tuple(failures))


# -- factorization across layers --------------------------------------------------------


@dataclass(frozen=True)
class FactorizationViolation:
    kind: str  # "support", "forgetfulness", or "composition"
    layer_one: tuple[frozenset, frozenset]
    pair_one: tuple[NestedSet, NestedSet]
    layer_two: tuple[frozenset, frozenset]
    pair_two: tuple[NestedSet, NestedSet]
    value_one: object
    value_two: object


@dataclass(frozen=True)
class FactorizationReport:
    ok: bool
    checked_pairs: int
    violations: tuple[FactorizationViolation, ...]


def _layer_mns(ambient: Diagram, outer: frozenset, inner: frozenset, bound: int):
    layer = layer_diagram(ambient, outer, inner)
    return [
        LayeredNested(ambient, outer, inner, h)
        for h in enumerate_maximal_nested_sets(layer, bound=bound)
    ]


def check_factorization(
    ambient: Diagram,
    assignments: Mapping[tuple[frozenset, frozenset], PhiAssignment],
    bound: int = 10,
) -> FactorizationReport:
    """Check support, forgetfulness, and composition constraints for a
    family of assignments indexed by layers (outer, inner).

    Support: within one layer, equivalent elementary pairs carry equal
    values. Forgetfulness: the same across two different layers.
    Composition: whenever layers (B'', B'), (B', B) and (B'', B) are all
    present, composing an elementary pair of either factor layer with a
    fixed maximal nested set of the other yields an elementary pair of
    the composite layer with the same value.
    """
    assignments = {
        (frozenset(o), frozenset(i)): phi for (o, i), phi in assignments.items()
    }
    layer_pairs: dict[tuple[frozenset, frozenset], list] = {}
    keyed: list[tuple] = []
    checked = 0
    for (outer, inner), phi in sorted(
        assignments.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]))
    ):
        mns = _layer_mns(ambient, outer, inner, bound)
        pairs = []
        for f in mns:
            for g in mns:
                if f is not g and len(f.nested.elements - g.nested.elements) == 1:
                    pairs.append((f, g))
        layer_pairs[(outer, inner)] = pairs
        for f, g in pairs:
            key = equivalence_key(f.nested, g.nested)
            value = phi.value(f.nested, g.nested)
            keyed.append(((outer, inner), (f.nested, g.nested), key, value))
            checked += 1
    violations = []
    for i, (lay1, pair1, key1, val1) in enumerate(keyed):
        for lay2, pair2, key2, val2 in keyed[i + 1 :]:
            if key1 == key2 and val1 != val2:
                kind = "support" if lay1 == lay2 else "forgetfulness"
                violations.append(
                    FactorizationViolation(
                        kind, lay1, pair1, lay2, pair2, val1, val2
                    )
                )
    # composition against chains of layers
    for (outer_u, inner_u), upper_pairs in layer_pairs.items():
        for (outer_l, inner_l), lower_pairs in layer_pairs.items():
            if inner_u != outer_l:
                continue
            composite = (outer_u, inner_l)
            if composite not in assignments:
                continue
            phi_u = assignments[(outer_u, inner_u)]
            phi_l = assignments[(outer_l, inner_l)]
            phi_c = assignments[composite]
            lower_mns = {g for pair in lower_pairs for g in pair} or set(
                _layer_mns(ambient, outer_l, inner_l, bound)
            )
            upper_mns = {f for pair in upper_pairs for f in pair} or set(
                _layer_mns(ambient, outer_u, inner_u, bound)
            )
            for f, fp in upper_pairs:
                for g in sorted(lower_mns, key=lambda x: x.nested.sorted_elements):
                    left = cup(f, g).nested
                    right = cup(fp, g).nested
                    checked += 1
                    want = phi_u.value(f.nested, fp.nested)
                    got = phi_c.value(left, right)
                    if got != want:
                        violations.append(
                            FactorizationViolation(
                                "composition",
                                (outer_u, inner_u),
                                (f.nested, fp.nested),
                                composite,
                                (left, right),
                                want,
                                got,
                            )
                        )
            for g, gp in lower_pairs:
                for f in sorted(upper_mns, key=lambda x: x.nested.sorted_elements):
                    left = cup(f, g).nested
                    right = cup(f, gp).nested
                    checked += 1
                    want = phi_l.value(g.nested, gp.nested)
                    got = phi_c.value(left, right)
                    if got != want:
                        violations.append(
                            FactorizationViolation(
                                "composition",
                                (outer_l, inner_l),
                                (g.nested, gp.nested),
                                composite,
                                (left, right),
                                want,
                                got,
                            )
                        )
    return FactorizationReport(not violations, checked, tuple(violations))


# -- braid words ---------------------------------------------------------------------------


def braid_words(m, a: str = "a", b: str = "b") -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The two sides of the length-m braid relation: (a b a ..., b a b ...).

    Raises NoRelation for an infinite label; m must be an integer >= 2."""
    if m == math.inf:
        raise NoRelation("no braid relation for an infinite label")
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"braid length must be an integer >= 2, got {m!r}")
    one = tuple(a if k % 2 == 0 else b for k in range(m))
    two = tuple(b if k % 2 == 0 else a for k in range(m))
    return one, two


# -- exports ---------------------------------------------------------------------------------


def skeleton_to_json_obj(diagram: Diagram, bound: int = 10) -> dict:
    verts, edges = one_skeleton(diagram, bound=bound)
    return {
        "vertices": [[list(e) for e in v.sorted_elements] for v in verts],
        "edges": [[i, j] for i, j in edges],
    }


def poset_to_json_obj(diagram: Diagram, bound: int = 10) -> dict:
    poset = FacePoset.of(diagram, bound=bound)
    index = {h: i for i, h in enumerate(poset.faces)}
    return {
        "faces": [
            {
                "dim": h.degree,
                "members": [list(e) for e in h.sorted_elements],
            }
            for h in poset.faces
        ],
        "covers": [[index[a], index[b]] for a, b in poset.covering_pairs()],
        "f_vector": list(poset.f_vector),
        "euler_characteristic": poset.euler_characteristic,
    }


def skeleton_to_dot(diagram: Diagram, bound: int = 10) -> str:
    verts, edges = one_skeleton(diagram, bound=bound)
    lines = ["graph skeleton {"]
    for i, v in enumerate(verts):
        label = "|".join(",".join(e) for e in v.sorted_elements)
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in edges:
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
