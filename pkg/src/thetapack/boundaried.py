"""Boundaried graphs: graphs cut open along edges.

A boundaried graph is ``(graph, boundary, labels)`` where boundary vertices
have degree exactly one and carry a bijective positive-integer labeling.
``glue`` joins two compatible boundaried graphs by identifying equal labels
and dissolving the identified vertices; ``split`` cuts a graph along the
edges crossing a vertex set, producing two halves that glue back together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .errors import CompatibilityError, GraphError
from .multigraph import MultiGraph, canonical_key, dissolve


@dataclass(frozen=True)
class BoundariedGraph:
    graph: MultiGraph
    boundary: FrozenSet[int]
    labels: Dict[int, int] = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        for b in self.boundary:
            if not self.graph.has_vertex(b):
                raise GraphError("boundary vertex %d not in graph" % b)
            if self.graph.degree(b) != 1:
                raise GraphError(
                    "boundary vertex %d has degree %d, expected 1" % (b, self.graph.degree(b))
                )
        if set(self.labels) != set(self.boundary):
            raise GraphError("labels must be defined exactly on the boundary")
        vals = list(self.labels.values())
        if len(set(vals)) != len(vals):
            raise GraphError("labels must be injective")
        if any(l < 1 for l in vals):
            raise GraphError("labels must be positive integers")

    # n() counts interior vertices only; m() counts all edges (incl. stubs).
    def n(self) -> int:
        return self.graph.n() - len(self.boundary)

    def m(self) -> int:
        return self.graph.m()

    def label_set(self) -> FrozenSet[int]:
        return frozenset(self.labels.values())

    def interior(self) -> FrozenSet[int]:
        return self.graph.vertices - self.boundary

    def interior_graph(self) -> MultiGraph:
        return self.graph.subgraph(self.interior())

    def boundary_of_label(self, label: int) -> int:
        for b, l in self.labels.items():
            if l == label:
                return b
        raise KeyError(label)

    def boundary_edges(self) -> Dict[int, Tuple[int, int]]:
        """label -> (boundary vertex, interior neighbor)."""
        out = {}
        for b in self.boundary:
            (w,) = self.graph.neighbors(b)
            out[self.labels[b]] = (b, w)
        return out

    def canonical(self) -> tuple:
        colors = {b: ("B", self.labels[b]) for b in self.boundary}
        return canonical_key(self.graph, colors)

    def is_isomorphic_to(self, other: "BoundariedGraph") -> bool:
        """Isomorphism respecting boundary labels."""
        return self.label_set() == other.label_set() and self.canonical() == other.canonical()

    def __repr__(self):
        return "BoundariedGraph(n=%d, labels=%s)" % (self.n(), sorted(self.label_set()))


def compatible(g1: BoundariedGraph, g2: BoundariedGraph) -> bool:
    return g1.label_set() == g2.label_set()


def glue(g1: BoundariedGraph, g2: BoundariedGraph) -> MultiGraph:
    """``g1 ⊕ g2``: disjoint union, matching labels identified and dissolved.

    The first operand keeps its vertex ids; the second is shifted past them.
    """
    w, _ = glue_with_maps(g1, g2)
    return w


def glue_with_maps(
    g1: BoundariedGraph, g2: BoundariedGraph
) -> Tuple[MultiGraph, Dict[int, int]]:
    """Glue and also return the id map applied to ``g2``'s vertices."""
    l1, l2 = g1.label_set(), g2.label_set()
    if l1 != l2:
        raise CompatibilityError(l1 - l2, l2 - l1)
    offset = max(g1.graph.vertices, default=-1) + 1 - min(g2.graph.vertices, default=0)
    shift = {v: v + offset for v in g2.graph.vertices}
    h2 = g2.graph.relabeled(shift)
    merged = g1.graph.union(h2)
    # identify each label's two boundary vertices: redirect h2-side stub onto
    # g1's boundary vertex, which then has degree 2 and gets dissolved.
    to_dissolve = []
    for label in sorted(l1):
        b1 = g1.boundary_of_label(label)
        b2 = shift[g2.boundary_of_label(label)]
        (nbr2,) = merged.neighbors(b2)
        mult = merged.multiplicity(b2, nbr2)
        merged = merged.without_vertices([b2])
        if nbr2 == b1:
            raise GraphError("glue: label %d would form a loop" % label)
        merged = merged.with_edge(b1, nbr2, mult)
        to_dissolve.append(b1)
    try:
        return dissolve(merged, to_dissolve), shift
    except GraphError as exc:
        raise GraphError("glue: degenerate boundary chain (%s)" % exc) from exc


def split(
    w: MultiGraph, s: Iterable[int], first_boundary_id: Optional[int] = None
) -> Tuple[BoundariedGraph, BoundariedGraph]:
    """S-splitting of ``w``: subdivide every crossing edge occurrence, share
    the created vertices as boundary of both sides.

    Labels are assigned in increasing order of (inside endpoint, outside
    endpoint, copy index), so the result is deterministic.
    """
    s = set(s)
    if not s:
        raise GraphError("split: S must be non-empty")
    if not s <= w.vertices:
        raise GraphError("split: S must be a subset of the vertices")
    crossings = []
    for (u, v), mult in w.edge_items():
        if (u in s) != (v in s):
            inside, outside = (u, v) if u in s else (v, u)
            for c in range(mult):
                crossings.append((inside, outside, c))
    crossings.sort()
    next_id = max(w.vertices, default=-1) + 1
    if first_boundary_id is not None:
        next_id = max(next_id, first_boundary_id)
    boundary = {}
    labels = {}
    for i, (inside, outside, _c) in enumerate(crossings):
        b = next_id + i
        boundary[b] = (inside, outside)
        labels[b] = i + 1

    g_in = w.subgraph(s)
    g_out = w.subgraph(w.vertices - s)
    for b, (inside, outside) in boundary.items():
        g_in = g_in.with_vertices([b]).with_edge(inside, b)
        g_out = g_out.with_vertices([b]).with_edge(b, outside)
    bset = frozenset(boundary)
    return (
        BoundariedGraph(g_in, bset, dict(labels)),
        BoundariedGraph(g_out, bset, dict(labels)),
    )


def boundaried_from_obj(obj: dict) -> BoundariedGraph:
    from .multigraph import graph_from_obj

    return BoundariedGraph(
        graph_from_obj(obj["graph"]),
        frozenset(obj["boundary"]),
        {int(k): v for k, v in obj["labels"].items()},
    )


def boundaried_to_obj(bg: BoundariedGraph) -> dict:
    from .multigraph import graph_to_obj

    return {
        "graph": graph_to_obj(bg.graph),
        "boundary": sorted(bg.boundary),
        "labels": {str(b): l for b, l in sorted(bg.labels.items())},
    }
