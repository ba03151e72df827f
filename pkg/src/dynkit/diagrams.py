"""Labeled diagrams and their quotient calculus.

A diagram is a finite simple graph with string vertex ids and an integer
label m >= 3 (or infinity) on each edge. A missing edge is the same
thing as label 2; constructors normalize label-2 edges away so equality
is structural.

Subdiagrams are always full: a subdiagram is determined by its vertex
set, and it inherits every edge both of whose ends lie in that set.
Orthogonality of two subdiagrams means disjoint vertex sets and no edge
between them; compatibility means one contains the other or they are
orthogonal.

The quotient of a diagram by a (not necessarily connected) kernel keeps
the vertices outside the kernel; two survivors are joined when they were
already joined, or when both are joined to a common connected component
of the kernel. Labels of new edges are not determined by this rule;
they default to 3 and nothing downstream reads them. Collapse sends a
connected subdiagram not inside the kernel to its surviving vertices;
lift adjoins to a connected quotient subdiagram every kernel component
it is joined to. The two maps are mutually inverse bijections between
connected subdiagrams of the quotient and connected subdiagrams of the
source that are unions of a connected set with the kernel components
near it; both directions are exercised in the tests.

Internally vertex sets are bitmasks over the sorted vertex tuple, which
keeps exhaustive enumeration over all subsets cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    CollapsesToEmpty,
    EmptyDiagram,
    EmptyKernel,
    NotASubdiagram,
    NotConnected,
    NotProper,
    ParentMismatch,
)

INFINITY = math.inf

Label = int | float


def _check_label(m) -> Label:
    if m == INFINITY:
        return INFINITY
    if isinstance(m, bool) or not isinstance(m, int):
        raise ValueError(f"edge label must be an integer >= 2 or infinity, got {m!r}")
    if m < 2:
        raise ValueError(f"edge label must be >= 2, got {m}")
    return m


@dataclass(frozen=True)
class Diagram:
    """Immutable labeled simple graph. Use `Diagram.make` to build one."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    labels: tuple[Label, ...]

    @staticmethod
    def make(vertices: Iterable[str], edges=()) -> "Diagram":
        """Build a diagram from vertex ids and edges.

        `edges` may be a mapping {(u, v): label} or an iterable of
        (u, v) pairs (label 3) and (u, v, label) triples. Label-2
        entries are dropped, duplicate edges must agree on the label.
        """
        verts = tuple(sorted(set(str(v) for v in vertices)))
        if not verts:
            raise EmptyDiagram("diagram needs at least one vertex")
        vset = set(verts)
        seen: dict[tuple[str, str], Label] = {}
        if isinstance(edges, Mapping):
            items = [(u, v, m) for (u, v), m in edges.items()]
        else:
            items = []
            for e in edges:
                e = tuple(e)
                if len(e) == 2:
                    items.append((e[0], e[1], 3))
                elif len(e) == 3:
                    items.append(e)
                else:
                    raise ValueError(f"bad edge entry {e!r}")
        for u, v, m in items:
            u, v = str(u), str(v)
            if u == v:
                raise ValueError(f"loop edge at {u!r}")
            if u not in vset or v not in vset:
                raise NotASubdiagram(f"edge ({u!r}, {v!r}) uses unknown vertices")
            m = _check_label(m)
            key = (u, v) if u < v else (v, u)
            if key in seen and seen[key] != m:
                raise ValueError(f"conflicting labels for edge {key}")
            seen[key] = m
        kept = sorted(k for k, m in seen.items() if m != 2)
        return Diagram(verts, tuple(kept), tuple(seen[k] for k in kept))

    @staticmethod
    def path(vertices: Iterable[str], label: Label = 3) -> "Diagram":
        """Path with consecutive vertices joined, all edges labeled alike."""
        vs = [str(v) for v in vertices]
        return Diagram.make(vs, [(a, b, label) for a, b in zip(vs, vs[1:])])

    # -- basic queries --------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _label_map(self) -> dict[tuple[str, str], Label]:
        return dict(zip(self.edges, self.labels))

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Bit j set in entry i iff vertices i and j are joined."""
        masks = [0] * self.n
        for u, v in self.edges:
            i, j = self._index[u], self._index[v]
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return tuple(masks)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise NotASubdiagram(f"vertex {v!r} not in diagram") from None

    def mask_of(self, vertices: Iterable[str]) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.index(str(v))
        return m

    def verts_of(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def label(self, u: str, v: str) -> Label:
        """Label of the edge between u and v; 2 when they are not joined."""
        self.index(u), self.index(v)
        if u == v:
            raise ValueError("label is defined for distinct vertices")
        key = (u, v) if u < v else (v, u)
        return self._label_map.get(key, 2)

    def adjacent(self, u: str, v: str) -> bool:
        return self.label(u, v) != 2

    def neighbors_mask(self, mask: int) -> int:
        """Union of neighborhoods of the vertices in `mask`."""
        adj = self.adjacency_masks
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= adj[low.bit_length() - 1]
            m ^= low
        return out

    def connected_mask(self, mask: int) -> bool:
        if mask == 0:
            return False
        adj = self.adjacency_masks
        start = mask & -mask
        seen = start
        frontier = start
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

    def component_masks(self, mask: int | None = None) -> tuple[int, ...]:
        """Connected components of the induced subgraph, as masks,
        ordered by lowest vertex index."""
        remaining = self.full_mask if mask is None else mask
        adj = self.adjacency_masks
        comps = []
        while remaining:
            start = remaining & -remaining
            seen = start
            frontier = start
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    low = m & -m
                    nxt |= adj[low.bit_length() - 1]
                    m ^= low
                frontier = nxt & remaining & ~seen
                seen |= frontier
            comps.append(seen)
            remaining &= ~seen
        return tuple(comps)

    def is_connected(self) -> bool:
        return self.connected_mask(self.full_mask)

    # -- serialization ---------------------------------------------------------

    def to_json_obj(self) -> dict:
        out = {
            "vertices": list(self.vertices),
            "edges": [[u, v] for u, v in self.edges],
        }
        labels = {
            f"{u},{v}": ("inf" if m == INFINITY else m)
            for (u, v), m in zip(self.edges, self.labels)
            if m != 3
        }
        if labels:
            out["labels"] = labels
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @staticmethod
    def from_json_obj(obj: dict) -> "Diagram":
        labels = obj.get("labels", {})
        edges = {}
        for pair in obj.get("edges", ()):
            u, v = pair
            m = labels.get(f"{u},{v}", labels.get(f"{v},{u}", 3))
            if m == "inf":
                m = INFINITY
            edges[(u, v)] = m
        return Diagram.make(obj["vertices"], edges)

    @staticmethod
    def from_json(text: str) -> "Diagram":
        return Diagram.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class Subdiagram:
    """Full subdiagram of a parent diagram, identified by its vertex set."""

    parent: Diagram
    vertex_set: frozenset[str]

    @staticmethod
    def of(parent: Diagram, vertices: Iterable[str]) -> "Subdiagram":
        vs = frozenset(str(v) for v in vertices)
        for v in vs:
            parent.index(v)
        return Subdiagram(parent, vs)

    @cached_property
    def mask(self) -> int:
        return self.parent.mask_of(self.vertex_set)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertex_set))

    def __len__(self) -> int:
        return len(self.vertex_set)

    def induced(self) -> Diagram:
        """The subdiagram as a standalone diagram."""
        if not self.vertex_set:
            raise EmptyDiagram("empty subdiagram has no induced diagram")
        p = self.parent
        edges = {
            (u, v): m
            for (u, v), m in zip(p.edges, p.labels)
            if u in self.vertex_set and v in self.vertex_set
        }
        return Diagram.make(self.vertex_set, edges)

    def is_connected(self) -> bool:
        return self.parent.connected_mask(self.mask)

    def components(self) -> tuple["Subdiagram", ...]:
        return tuple(
            Subdiagram(self.parent, frozenset(self.parent.verts_of(m)))
            for m in self.parent.component_masks(self.mask)
        )


def _same_parent(a: Subdiagram, b: Subdiagram) -> Diagram:
    if a.parent != b.parent:
        raise ParentMismatch("subdiagrams live in different diagrams")
    return a.parent


def orthogonal(a: Subdiagram, b: Subdiagram) -> bool:
    """Disjoint vertex sets and no edge from one to the other."""
    d = _same_parent(a, b)
    if a.mask & b.mask:
        return False
    return d.neighbors_mask(a.mask) & b.mask == 0


def compatible(a: Subdiagram, b: Subdiagram) -> bool:
    """One contains the other, or they are orthogonal."""
    _same_parent(a, b)
    am, bm = a.mask, b.mask
    if am & bm:
        u = am | bm
        return u == am or u == bm
    return orthogonal(a, b)


@dataclass(frozen=True)
class QuotientDiagram:
    """Quotient of `base` by `kernel`, with the quotient graph exposed as
    an ordinary diagram in `diagram`."""

    base: Diagram
    kernel: Subdiagram
    diagram: Diagram

    @property
    def kernel_components(self) -> tuple[Subdiagram, ...]:
        return self.kernel.components()


def quotient(
    base: Diagram,
    kernel: Subdiagram | Iterable[str],
    labels: Mapping[tuple[str, str], Label] | None = None,
) -> QuotientDiagram:
    """Quotient diagram of `base` by `kernel`.

    Vertices: those of `base` outside the kernel. Edges: survivors u, v
    are joined when they were joined in `base`, or when both are joined
    to the same connected component of the kernel. New labels default to
    3 unless overridden through `labels`.
    """
    if not isinstance(kernel, Subdiagram):
        kernel = Subdiagram.of(base, kernel)
    if kernel.parent != base:
        raise ParentMismatch("kernel does not live in the base diagram")
    if not kernel.vertex_set:
        raise EmptyKernel("quotient kernel must be nonempty")
    if kernel.mask == base.full_mask:
        raise NotProper("quotient kernel must be a proper subdiagram")
    comp_masks = base.component_masks(kernel.mask)
    adj = base.adjacency_masks
    survivors = [
        (v, i) for i, v in enumerate(base.vertices) if not kernel.mask >> i & 1
    ]
    edges: dict[tuple[str, str], Label] = {}
    for a, (u, i) in enumerate(survivors):
        for v, j in survivors[a + 1 :]:
            joined = bool(adj[i] >> j & 1)
            if not joined:
                for cm in comp_masks:
                    if adj[i] & cm and adj[j] & cm:
                        joined = True
                        break
            if joined:
                key = (u, v) if u < v else (v, u)
                old = base.label(u, v)
                if old != 2:
                    m = old
                elif labels and key in labels:
                    m = labels[key]
                else:
                    m = 3
                edges[key] = m
    qd = Diagram.make([v for v, _ in survivors], edges)
    return QuotientDiagram(base, kernel, qd)


def collapse(q: QuotientDiagram, c: Subdiagram) -> Subdiagram:
    """Image in the quotient of a connected subdiagram of the base."""
    if c.parent != q.base:
        raise ParentMismatch("subdiagram does not live in the quotient base")
    if not c.vertex_set:
        raise EmptyDiagram("cannot collapse the empty subdiagram")
    if not c.is_connected():
        raise NotConnected("collapse requires a connected subdiagram")
    rest = c.vertex_set - q.kernel.vertex_set
    if not rest:
        raise CollapsesToEmpty("subdiagram lies inside the kernel")
    out = Subdiagram.of(q.diagram, rest)
    assert out.is_connected(), "collapse of a connected set must be connected"
    return out


def lift(q: QuotientDiagram, a: Subdiagram) -> Subdiagram:
    """Preimage in the base: adjoin every kernel component joined to `a`."""
    if a.parent != q.diagram:
        raise ParentMismatch("subdiagram does not live in the quotient")
    if not a.vertex_set:
        raise EmptyDiagram("cannot lift the empty subdiagram")
    if not a.is_connected():
        raise NotConnected("lift requires a connected subdiagram")
    base = q.base
    amask_in_base = base.mask_of(a.vertex_set)
    nbrs = base.neighbors_mask(amask_in_base)
    total = amask_in_base
    for cm in base.component_masks(q.kernel.mask):
        if nbrs & cm:
            total |= cm
    out = Subdiagram.of(base, base.verts_of(total))
    assert out.is_connected(), "lift of a connected set must be connected"
    return out


# -- small catalog of standard diagrams ---------------------------------------


def preset_diagram(name: str) -> Diagram:
    """Standard diagrams by family name, e.g. 'A3', 'B2', 'D4', 'G2',
    'H3', 'I2(7)'. Disjoint unions join names with '+', e.g. 'A2+A2';
    repeated families get distinct vertex ids ('1..', "1'..")."""
    parts = [p.strip() for p in name.split("+")]
    pieces = [_preset_one(p) for p in parts]
    if len(pieces) == 1:
        return pieces[0]
    verts: list[str] = []
    edges: dict[tuple[str, str], Label] = {}
    for k, d in enumerate(pieces):
        suffix = "'" * k
        ren = {v: v + suffix for v in d.vertices}
        verts.extend(ren[v] for v in d.vertices)
        for (u, v), m in zip(d.edges, d.labels):
            edges[(ren[u], ren[v])] = m
    return Diagram.make(verts, edges)


def _preset_one(name: str) -> Diagram:
    name = name.strip()
    if name.upper().startswith("I2(") and name.endswith(")"):
        inner = name[3:-1]
        m = INFINITY if inner in ("inf", "oo") else int(inner)
        return Diagram.make(["1", "2"], {("1", "2"): m})
    family, rank = name[0].upper(), name[1:]
    n = int(rank)
    ids = [str(i + 1) for i in range(n)]
    chain = lambda: {(ids[i], ids[i + 1]): 3 for i in range(n - 1)}
    if family == "A" and n >= 1:
        return Diagram.make(ids, chain())
    if family in ("B", "C") and n >= 2:
        e = chain()
        e[(ids[n - 2], ids[n - 1])] = 4
        return Diagram.make(ids, e)
    if family == "D" and n >= 3:
        e = {(ids[i], ids[i + 1]): 3 for i in range(n - 2)}
        e[(ids[n - 3], ids[n - 1])] = 3
        return Diagram.make(ids, e)
    if family == "E" and n in (6, 7, 8):
        e = {(ids[i], ids[i + 1]): 3 for i in range(n - 2)}
        e[(ids[2], ids[n - 1])] = 3
        return Diagram.make(ids, e)
    if family == "F" and n == 4:
        return Diagram.make(ids, {("1", "2"): 3, ("2", "3"): 4, ("3", "4"): 3})
    if family == "G" and n == 2:
        return Diagram.make(ids, {("1", "2"): 6})
    if family == "H" and n in (2, 3, 4):
        e = chain()
        e[(ids[0], ids[1])] = 5
        return Diagram.make(ids, e)
    raise ValueError(f"unknown diagram preset {name!r}")
