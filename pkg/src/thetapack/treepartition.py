"""Rooted tree-partitions and partitioned protrusions.

A rooted tree-partition groups the vertices into bags arranged on a rooted
tree so that every edge stays inside a bag or crosses one tree edge; its
width is the larger of the biggest bag and the biggest inter-bag edge count
(counting multiplicity).  A t-partitioned protrusion is a boundaried chunk
of a host graph together with such a partition of its interior, rooted at
the bag that meets the boundary's neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .boundaried import BoundariedGraph, split
from .errors import GraphError
from .multigraph import MultiGraph


@dataclass(frozen=True)
class RootedTreePartition:
    root: int
    parent: Dict[int, Optional[int]] = field(compare=False)
    bags: Dict[int, FrozenSet[int]] = field(compare=False)

    def __post_init__(self):
        if self.root not in self.bags:
            raise GraphError("tree partition: root %r has no bag" % (self.root,))
        if set(self.parent) != set(self.bags):
            raise GraphError("tree partition: parent map and bags disagree on nodes")
        if self.parent[self.root] is not None:
            raise GraphError("tree partition: root must have no parent")
        # every node must reach the root (i.e. the parent map is a tree)
        for u in self.bags:
            seen = set()
            cur: Optional[int] = u
            while cur is not None:
                if cur in seen:
                    raise GraphError("tree partition: parent cycle at %r" % (cur,))
                seen.add(cur)
                cur = self.parent[cur]
            if self.root not in seen:
                raise GraphError("tree partition: node %r detached from root" % (u,))

    def nodes(self) -> List[int]:
        return sorted(self.bags)

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {u: [] for u in self.bags}
        for u, p in self.parent.items():
            if p is not None:
                out[p].append(u)
        for u in out:
            out[u].sort()
        return out

    def descendants(self, u: int) -> Set[int]:
        kids = self.children()
        out = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for c in kids[x]:
                out.add(c)
                stack.append(c)
        return out

    def region(self, u: int) -> Set[int]:
        """Union of the bags in u's subtree."""
        out: Set[int] = set()
        for x in self.descendants(u):
            out |= self.bags[x]
        return out

    def heights(self) -> Dict[int, int]:
        """Longest downward path length from each node to a leaf below it."""
        kids = self.children()
        h: Dict[int, int] = {}
        order = []
        stack = [self.root]
        while stack:
            x = stack.pop()
            order.append(x)
            stack.extend(kids[x])
        for x in reversed(order):
            h[x] = 1 + max((h[c] for c in kids[x]), default=-1)
        return h

    def tree_edges(self) -> List[Tuple[int, int]]:
        return [(u, p) for u, p in sorted(self.parent.items()) if p is not None]

    def restricted_to(self, keep_vertices: Set[int]) -> "RootedTreePartition":
        """Same tree, bags intersected with a surviving vertex set."""
        return RootedTreePartition(
            self.root,
            dict(self.parent),
            {u: frozenset(b & keep_vertices) for u, b in self.bags.items()},
        )

    def drop_subtree(self, u: int) -> "RootedTreePartition":
        if u == self.root:
            raise GraphError("cannot drop the root subtree")
        gone = self.descendants(u)
        return RootedTreePartition(
            self.root,
            {x: p for x, p in self.parent.items() if x not in gone},
            {x: b for x, b in self.bags.items() if x not in gone},
        )


def cross_edges(g: MultiGraph, a: Iterable[int], b: Iterable[int]) -> int:
    a, b = set(a), set(b)
    total = 0
    for u in a:
        if not g.has_vertex(u):
            continue
        for w, mult in g.adj(u).items():
            if w in b:
                total += mult
    return total


def tpw_validate(g: MultiGraph, d: RootedTreePartition) -> int:
    """Check both tree-partition conditions and return the width."""
    union: Set[int] = set()
    for u, bag in d.bags.items():
        overlap = union & bag
        if overlap:
            raise GraphError(
                "tree partition: vertices %s appear in several bags" % sorted(overlap)
            )
        union |= bag
    if union != set(g.vertices):
        missing = set(g.vertices) - union
        extra = union - set(g.vertices)
        raise GraphError(
            "tree partition: bags do not partition the vertices (missing=%s, foreign=%s)"
            % (sorted(missing), sorted(extra))
        )
    owner = {v: u for u, bag in d.bags.items() for v in bag}
    adjacent = set()
    for u, p in d.parent.items():
        if p is not None:
            adjacent.add((u, p))
            adjacent.add((p, u))
    if len(d.bags) > 1:
        for (x, y), _mult in g.edge_items():
            bx, by = owner[x], owner[y]
            if bx != by and (bx, by) not in adjacent:
                raise GraphError(
                    "tree partition: edge (%d,%d) crosses non-adjacent bags %r and %r"
                    % (x, y, bx, by)
                )
    width = max((len(b) for b in d.bags.values()), default=0)
    for u, p in d.tree_edges():
        width = max(width, cross_edges(g, d.bags[u], d.bags[p]))
    return width


@dataclass(frozen=True)
class PartitionedProtrusion:
    bg: BoundariedGraph
    dec: RootedTreePartition
    t: int

    def interior_graph(self) -> MultiGraph:
        return self.bg.interior_graph()

    def validate(self) -> int:
        """Full definition check; returns the realized width."""
        if any(l < 1 or l > self.t for l in self.bg.label_set()):
            raise GraphError(
                "protrusion: labels %s leave [1,%d]" % (sorted(self.bg.label_set()), self.t)
            )
        width = tpw_validate(self.interior_graph(), self.dec)
        if width > self.t:
            raise GraphError("protrusion: width %d exceeds t=%d" % (width, self.t))
        if self.bg.boundary:
            nbrs = set()
            for b in self.bg.boundary:
                nbrs.update(self.bg.graph.neighbors(b))
            if set(self.dec.bags[self.dec.root]) != nbrs:
                raise GraphError(
                    "protrusion: root bag %s differs from boundary neighbors %s"
                    % (sorted(self.dec.bags[self.dec.root]), sorted(nbrs))
                )
        return width

    def region(self) -> Set[int]:
        return set(self.bg.interior())

    def subtree_boundaried(self, host: MultiGraph, u: int) -> BoundariedGraph:
        """The boundaried graph spanned by u's subtree, split out of the host."""
        return split(host, self.dec.region(u))[0]


def protrusion_from_host(
    host: MultiGraph, dec: RootedTreePartition, t: int
) -> PartitionedProtrusion:
    """Split the host at the decomposition's full region and package it."""
    region = set()
    for bag in dec.bags.values():
        region |= bag
    if region == set(host.vertices):
        bg = BoundariedGraph(host.copy(), frozenset(), {})
    else:
        bg = split(host, region)[0]
    pp = PartitionedProtrusion(bg, dec, t)
    pp.validate()
    return pp


# -- stock decompositions --------------------------------------------------------


def tree_singleton_partition(g: MultiGraph, root_vertex: Optional[int] = None) -> RootedTreePartition:
    """Singleton bags over a connected forest-shaped graph (width 1)."""
    if root_vertex is None:
        root_vertex = min(g.vertices)
    parent: Dict[int, Optional[int]] = {root_vertex: None}
    order = [root_vertex]
    stack = [root_vertex]
    seen = {root_vertex}
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                parent[w] = v
                stack.append(w)
    if seen != set(g.vertices):
        raise GraphError("tree_singleton_partition: graph is not connected")
    return RootedTreePartition(
        root_vertex, parent, {v: frozenset({v}) for v in g.vertices}
    )


def folded_chain_partition(chain: List[int]) -> RootedTreePartition:
    """Paired bags {first,last}, {second, second-last}, ... along a chain;
    width 2 regardless of length."""
    if not chain:
        raise GraphError("folded_chain_partition: empty chain")
    bags = []
    i, j = 0, len(chain) - 1
    while i < j:
        bags.append(frozenset({chain[i], chain[j]}))
        i, j = i + 1, j - 1
    if i == j:
        bags.append(frozenset({chain[i]}))
    parent: Dict[int, Optional[int]] = {0: None}
    for idx in range(1, len(bags)):
        parent[idx] = idx - 1
    return RootedTreePartition(0, parent, {i: b for i, b in enumerate(bags)})
