"""Nested sets of a diagram and their relative calculus.

A nested set is a family of connected subdiagrams (stored as vertex
sets) that is pairwise compatible and contains every connected component
of the diagram. Its degree counts the freedom left: for each member B,
the members properly below B leave a residue alpha(B) of B uncovered,
and the degree is the sum of |alpha(B)| - 1, which also equals
|vertices| - |family|. Maximal nested sets are those of degree zero.

The relative layer between two nested kernels B inside B' is the
quotient of the subdiagram on B' by B; `LayeredNested` carries a nested
set over such a layer together with the layer data, so composition can
check that inner and outer layers actually meet. Composition (`cup`)
lifts the members of the upper family through the middle kernel and
merges with the lower family; restriction projects a composed family
back onto either layer and is one-sided inverse to composition.

An elementary pair is an ordered pair of maximal nested sets differing
in exactly one member. Its support is the unique member of the common
part whose residue has size two; the zero part of the support is what
the members below cover. Pairs (possibly across different layers) are
equivalent when support, zero part, and both residues agree as vertex
sets; equivalent pairs are exactly those identified by the support and
forgetfulness properties of coherent assignments downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .diagrams import Diagram, Subdiagram, lift, quotient
from .errors import (
    ChainMismatch,
    NotElementary,
    NotNested,
    ParentMismatch,
    TooLarge,
)

VertexSet = frozenset[str]


@dataclass(frozen=True)
class NestedSet:
    """Validated nested set over a diagram."""

    diagram: Diagram
    elements: frozenset[VertexSet]

    @staticmethod
    def of(diagram: Diagram, families: Iterable[Iterable[str]]) -> "NestedSet":
        elems = frozenset(frozenset(str(v) for v in fam) for fam in families)
        comp_masks = set(diagram.component_masks())
        masks = {}
        for e in elems:
            if not e:
                raise NotNested("nested sets contain nonempty subdiagrams only")
            m = diagram.mask_of(e)
            if not diagram.connected_mask(m):
                raise NotNested(f"member {sorted(e)} is not connected")
            masks[e] = m
        for cm in comp_masks:
            if cm not in masks.values():
                raise NotNested(
                    "nested sets contain every connected component of the diagram"
                )
        elist = list(elems)
        for i, a in enumerate(elist):
            for b in elist[i + 1 :]:
                am, bm = masks[a], masks[b]
                if am & bm:
                    u = am | bm
                    if u != am and u != bm:
                        raise NotNested(
                            f"members {sorted(a)} and {sorted(b)} are incompatible"
                        )
                elif diagram.neighbors_mask(am) & bm:
                    raise NotNested(
                        f"members {sorted(a)} and {sorted(b)} are incompatible"
                    )
        return NestedSet(diagram, elems)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, item) -> bool:
        return frozenset(item) in self.elements

    @cached_property
    def sorted_elements(self) -> tuple[tuple[str, ...], ...]:
        return tuple(
            sorted((tuple(sorted(e)) for e in self.elements), key=lambda t: (len(t), t))
        )

    @cached_property
    def degree(self) -> int:
        return sum(local_rank(self, b) - 1 for b in self.elements)

    @property
    def is_maximal(self) -> bool:
        return self.degree == 0

    def to_json_obj(self) -> list:
        return [list(e) for e in self.sorted_elements]


def _check_member(h: NestedSet, b) -> VertexSet:
    b = frozenset(str(v) for v in b)
    if b not in h.elements:
        raise NotNested(f"{sorted(b)} is not a member of the nested set")
    return b


def inner_union(h: NestedSet, b) -> VertexSet:
    """Union of the members properly contained in b (equivalently, of
    the maximal such members)."""
    b = _check_member(h, b)
    out: set[str] = set()
    for e in h.elements:
        if e != b and e <= b:
            out |= e
    return frozenset(out)


def alpha_set(h: NestedSet, b) -> VertexSet:
    """Residue of b: vertices of b not covered by smaller members."""
    b = _check_member(h, b)
    return b - inner_union(h, b)


def local_rank(h: NestedSet, b) -> int:
    return len(alpha_set(h, b))


def is_unsaturated(h: NestedSet, b) -> bool:
    return local_rank(h, b) > 1


def unsaturated_elements(h: NestedSet) -> tuple[VertexSet, ...]:
    out = [b for b in h.elements if local_rank(h, b) > 1]
    return tuple(sorted(out, key=lambda e: (len(e), tuple(sorted(e)))))


# -- enumeration ----------------------------------------------------------------


def _connected_masks(d: Diagram) -> list[int]:
    full = d.full_mask
    out = [m for m in range(1, full + 1) if d.connected_mask(m)]
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def _compatible_masks(d: Diagram, a: int, b: int) -> bool:
    if a & b:
        u = a | b
        return u == a or u == b
    return d.neighbors_mask(a) & b == 0


def _enumerate_families(d: Diagram, bound: int, maximal_only: bool) -> list[frozenset[int]]:
    if d.n > bound:
        raise TooLarge(
            f"enumeration over {d.n} vertices exceeds the bound {bound}; "
            "raise `bound` explicitly if this size is intended"
        )
    required = list(d.component_masks())
    req_set = set(required)
    conn = _connected_masks(d)
    cands = [m for m in conn if m not in req_set]
    cands = [m for m in cands if all(_compatible_masks(d, m, r) for r in required)]
    k = len(cands)
    # compat[i]: bitset over candidate indices compatible with candidate i
    compat = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if _compatible_masks(d, cands[i], cands[j]):
                compat[i] |= 1 << j
                compat[j] |= 1 << i
    target = d.n - len(required) if maximal_only else None
    results: list[frozenset[int]] = []
    base = frozenset(required)

    def rec(start: int, chosen: tuple[int, ...], allowed: int):
        if target is None:
            results.append(base | frozenset(cands[i] for i in chosen))
        elif len(chosen) == target:
            results.append(base | frozenset(cands[i] for i in chosen))
            return
        m = allowed >> start << start
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            if target is not None:
                # not enough candidates left to reach the target size
                remaining = bin(allowed >> i).count("1")
                if len(chosen) + remaining < target:
                    break
            rec(i + 1, chosen + (i,), allowed & compat[i])

    rec(0, (), (1 << k) - 1)
    return results


def _materialize(d: Diagram, fams: list[frozenset[int]]) -> list[NestedSet]:
    """Each distinct mask is translated once per call, and the sorted
    form is seeded up front, so dense diagrams do not pay for repeated
    vertex-set conversion during the deterministic sort."""
    cache: dict[int, tuple[frozenset, tuple]] = {}
    out = []
    for fam in fams:
        elems = []
        tups = []
        for m in fam:
            pair = cache.get(m)
            if pair is None:
                vs = d.verts_of(m)
                pair = (frozenset(vs), tuple(sorted(vs)))
                cache[m] = pair
            elems.append(pair[0])
            tups.append(pair[1])
        ns = NestedSet(d, frozenset(elems))
        ns.__dict__["sorted_elements"] = tuple(
            sorted(tups, key=lambda t: (len(t), t))
        )
        out.append(ns)
    return out


def _sorted_nested(out: list[NestedSet]) -> list[NestedSet]:
    return sorted(out, key=lambda h: (len(h.elements), h.sorted_elements))


def enumerate_nested_sets(d: Diagram, bound: int = 10) -> list[NestedSet]:
    """All nested sets, smallest families first, deterministic order."""
    fams = _enumerate_families(d, bound, maximal_only=False)
    return _sorted_nested(_materialize(d, fams))


def enumerate_maximal_nested_sets(d: Diagram, bound: int = 10) -> list[NestedSet]:
    fams = _enumerate_families(d, bound, maximal_only=True)
    return _sorted_nested(_materialize(d, fams))


# -- relative layers -------------------------------------------------------------


def layer_diagram(ambient: Diagram, outer: Iterable[str], inner: Iterable[str]) -> Diagram:
    """Diagram of the layer outer/inner: the subdiagram on `outer`
    quotiented by `inner` (or taken as-is when `inner` is empty)."""
    outer = frozenset(str(v) for v in outer)
    inner = frozenset(str(v) for v in inner)
    if not inner <= outer:
        raise ChainMismatch("inner vertex set must lie inside the outer one")
    base = Subdiagram.of(ambient, outer).induced()
    if not inner:
        return base
    return quotient(base, inner).diagram


@dataclass(frozen=True)
class LayeredNested:
    """A nested set over the layer outer/inner of an ambient diagram."""

    ambient: Diagram
    outer: VertexSet
    inner: VertexSet
    nested: NestedSet

    @staticmethod
    def of(
        ambient: Diagram,
        outer: Iterable[str],
        inner: Iterable[str],
        families: Iterable[Iterable[str]],
    ) -> "LayeredNested":
        outer = frozenset(str(v) for v in outer)
        inner = frozenset(str(v) for v in inner)
        layer = layer_diagram(ambient, outer, inner)
        return LayeredNested(ambient, outer, inner, NestedSet.of(layer, families))

    @staticmethod
    def full(ambient: Diagram, nested: NestedSet) -> "LayeredNested":
        """View a plain nested set of the ambient diagram as the layer
        over the empty kernel."""
        if nested.diagram != ambient:
            raise ParentMismatch("nested set does not live in the ambient diagram")
        return LayeredNested(ambient, frozenset(ambient.vertices), frozenset(), nested)

    @property
    def is_maximal(self) -> bool:
        return self.nested.is_maximal


def cup(f: LayeredNested, g: LayeredNested) -> LayeredNested:
    """Compose maximal nested sets along a chain of kernels.

    `f` lives over B''/B', `g` over B'/B with the same ambient diagram
    and matching middle layer; the result lives over B''/B. Members of
    `f` are lifted through the middle kernel, members of `g` are kept.
    """
    if f.ambient != g.ambient:
        raise ChainMismatch("layers live over different ambient diagrams")
    if f.inner != g.outer:
        raise ChainMismatch(
            "inner layer of the first factor must equal the outer layer of the second"
        )
    if not f.is_maximal or not g.is_maximal:
        raise NotNested("composition is defined for maximal nested sets")
    big = layer_diagram(f.ambient, f.outer, g.inner)
    middle = frozenset(f.inner - g.inner)
    elems: set[VertexSet] = set(g.nested.elements)
    if middle:
        q = quotient(big, middle)
        # value equality with f's layer diagram makes the parent checks sound
        if q.diagram != f.nested.diagram:
            raise ChainMismatch("layer diagrams do not form a tower")
        for a in f.nested.elements:
            elems.add(lift(q, Subdiagram.of(q.diagram, a)).vertex_set)
    else:
        if big != f.nested.diagram:
            raise ChainMismatch("layer diagrams do not form a tower")
        elems |= f.nested.elements
    return LayeredNested(
        f.ambient, f.outer, g.inner, NestedSet.of(big, elems)
    )


def restrict_inner(h: LayeredNested, middle: Iterable[str]) -> LayeredNested:
    """Members of h living inside middle/inner; inverts `cup` on its
    second argument."""
    middle = frozenset(str(v) for v in middle)
    if not h.inner <= middle <= h.outer:
        raise ChainMismatch("middle layer must sit between inner and outer")
    keep = middle - h.inner
    elems = [e for e in h.nested.elements if e <= keep]
    return LayeredNested.of(h.ambient, middle, h.inner, elems)


def restrict_outer(h: LayeredNested, middle: Iterable[str]) -> LayeredNested:
    """Members of h reaching outside middle, collapsed to the upper
    layer; inverts `cup` on its first argument."""
    middle = frozenset(str(v) for v in middle)
    if not h.inner <= middle <= h.outer:
        raise ChainMismatch("middle layer must sit between inner and outer")
    keep = middle - h.inner
    elems = [e - keep for e in h.nested.elements if not e <= keep]
    return LayeredNested.of(h.ambient, h.outer, middle, elems)


# -- elementary pairs ------------------------------------------------------------


def _pair_layer_check(f: NestedSet, g: NestedSet) -> None:
    if f.diagram != g.diagram:
        raise ParentMismatch("the two nested sets live over different diagrams")


def is_elementary(f: NestedSet, g: NestedSet) -> bool:
    _pair_layer_check(f, g)
    if not (f.is_maximal and g.is_maximal):
        return False
    return len(f.elements - g.elements) == 1


def support_pair(f: NestedSet, g: NestedSet) -> tuple[VertexSet, VertexSet]:
    """(support, zero part) of an elementary pair.

    The support is the unique member of the common part with residue of
    size two; the zero part is the portion covered by smaller common
    members."""
    if not is_elementary(f, g):
        raise NotElementary("pair of maximal nested sets must differ in one member")
    common = NestedSet(f.diagram, frozenset(f.elements & g.elements))
    unsat = unsaturated_elements(common)
    assert len(unsat) == 1, "a corank-one family has exactly one unsaturated member"
    supp = unsat[0]
    return supp, supp - alpha_set(common, supp)


def equivalence_key(
    f: NestedSet, g: NestedSet
) -> tuple[VertexSet, VertexSet, VertexSet, VertexSet]:
    """Invariant deciding equivalence of elementary pairs: support, zero
    part, and the residues of the support inside each side."""
    supp, zsupp = support_pair(f, g)
    return supp, zsupp, alpha_set(f, supp), alpha_set(g, supp)


def are_equivalent(pair1, pair2) -> bool:
    """Equivalence of two (possibly cross-layer) elementary pairs."""
    return equivalence_key(*pair1) == equivalence_key(*pair2)


def elementary_pairs(
    mns_list: Iterable[NestedSet],
) -> Iterator[tuple[NestedSet, NestedSet]]:
    """All ordered elementary pairs from the given maximal nested sets."""
    mns = list(mns_list)
    for f in mns:
        for g in mns:
            if f is not g and len(f.elements - g.elements) == 1:
                yield f, g
