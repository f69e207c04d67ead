"""Undirected loopless multigraphs with integer vertex ids.

Edges are stored as unordered pairs with a positive multiplicity.  Vertex
ids are stable: no operation ever renumbers surviving vertices.  All public
operations are functional (they return new graphs); instances should be
treated as immutable once built, which makes them safe to share.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .errors import GraphError

Pair = Tuple[int, int]


def _norm(u: int, v: int) -> Pair:
    if u == v:
        raise GraphError("loops are not allowed: (%d,%d)" % (u, v))
    return (u, v) if u < v else (v, u)


class MultiGraph:
    """Loopless undirected multigraph; n() and m() are O(1)."""

    __slots__ = ("_vertices", "_edges", "_adj", "_m")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[Tuple[int, int, int]] | Iterable[Tuple[int, int]] = (),
    ):
        self._vertices: Set[int] = set(vertices)
        self._edges: Dict[Pair, int] = {}
        self._adj: Dict[int, Dict[int, int]] = {v: {} for v in self._vertices}
        self._m = 0
        for e in edges:
            if len(e) == 2:
                u, v = e  # type: ignore[misc]
                mult = 1
            else:
                u, v, mult = e  # type: ignore[misc]
            self._add_edge(u, v, mult)

    # -- internal mutators (construction only) --------------------------------

    def _add_vertex(self, v: int) -> None:
        if v not in self._vertices:
            self._vertices.add(v)
            self._adj[v] = {}

    def _add_edge(self, u: int, v: int, mult: int = 1) -> None:
        if mult <= 0:
            raise GraphError("edge multiplicity must be positive")
        p = _norm(u, v)
        self._add_vertex(p[0])
        self._add_vertex(p[1])
        self._edges[p] = self._edges.get(p, 0) + mult
        self._adj[p[0]][p[1]] = self._edges[p]
        self._adj[p[1]][p[0]] = self._edges[p]
        self._m += mult

    def _remove_edge(self, u: int, v: int, count: int = 1) -> None:
        p = _norm(u, v)
        have = self._edges.get(p, 0)
        if count > have:
            raise GraphError("removing %d copies of %s but only %d present" % (count, p, have))
        left = have - count
        self._m -= count
        if left:
            self._edges[p] = left
            self._adj[p[0]][p[1]] = left
            self._adj[p[1]][p[0]] = left
        else:
            del self._edges[p]
            del self._adj[p[0]][p[1]]
            del self._adj[p[1]][p[0]]

    def _remove_vertex(self, v: int) -> None:
        for w in list(self._adj[v]):
            self._remove_edge(v, w, self._adj[v][w])
        del self._adj[v]
        self._vertices.discard(v)

    # -- basic queries ---------------------------------------------------------

    def n(self) -> int:
        return len(self._vertices)

    def m(self) -> int:
        """Edge count, counting multiplicity."""
        return self._m

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(self._vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vertices

    def edge_pairs(self) -> Iterator[Pair]:
        return iter(sorted(self._edges))

    def edge_items(self) -> Iterator[Tuple[Pair, int]]:
        return iter(sorted(self._edges.items()))

    def edge_occurrences(self) -> Iterator[Tuple[int, int, int]]:
        """Every (u, v, copy_index) with copy indices 0..mult-1."""
        for (u, v), mult in sorted(self._edges.items()):
            for c in range(mult):
                yield (u, v, c)

    def multiplicity(self, u: int, v: int) -> int:
        if u == v:
            return 0
        return self._edges.get(_norm(u, v), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.multiplicity(u, v) > 0

    def neighbors(self, v: int) -> List[int]:
        return sorted(self._adj[v])

    def adj(self, v: int) -> Dict[int, int]:
        """neighbor -> multiplicity view (do not mutate)."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        """Sum of incident multiplicities."""
        return sum(self._adj[v].values())

    def simple_degree(self, v: int) -> int:
        """Number of distinct neighbors."""
        return len(self._adj[v])

    def min_degree(self) -> int:
        if not self._vertices:
            return 0
        return min(self.degree(v) for v in self._vertices)

    def min_simple_degree(self) -> int:
        if not self._vertices:
            return 0
        return min(len(self._adj[v]) for v in self._vertices)

    # -- functional updates ----------------------------------------------------

    def copy(self) -> "MultiGraph":
        g = MultiGraph.__new__(MultiGraph)
        g._vertices = set(self._vertices)
        g._edges = dict(self._edges)
        g._adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        g._m = self._m
        return g

    def with_vertices(self, vs: Iterable[int]) -> "MultiGraph":
        g = self.copy()
        for v in vs:
            g._add_vertex(v)
        return g

    def with_edge(self, u: int, v: int, mult: int = 1) -> "MultiGraph":
        g = self.copy()
        g._add_edge(u, v, mult)
        return g

    def without_vertices(self, vs: Iterable[int]) -> "MultiGraph":
        g = self.copy()
        for v in set(vs):
            if v in g._vertices:
                g._remove_vertex(v)
        return g

    def without_edge_occurrences(self, occs: Iterable[Tuple[int, int]]) -> "MultiGraph":
        """Delete one copy per listed pair (a pair listed twice loses two)."""
        g = self.copy()
        for u, v in occs:
            g._remove_edge(u, v, 1)
        return g

    def subgraph(self, vs: Iterable[int]) -> "MultiGraph":
        """Induced subgraph; keeps ids."""
        keep = set(vs) & self._vertices
        g = MultiGraph(keep)
        for (u, v), mult in self._edges.items():
            if u in keep and v in keep:
                g._add_edge(u, v, mult)
        return g

    def with_capped_multiplicities(self, cap: int) -> "MultiGraph":
        g = MultiGraph(self._vertices)
        for (u, v), mult in self._edges.items():
            g._add_edge(u, v, min(mult, cap))
        return g

    def relabeled(self, mapping: Dict[int, int]) -> "MultiGraph":
        """Injective vertex relabeling."""
        if len(set(mapping.values())) != len(mapping):
            raise GraphError("relabeling must be injective")
        g = MultiGraph(mapping[v] for v in self._vertices)
        for (u, v), mult in self._edges.items():
            g._add_edge(mapping[u], mapping[v], mult)
        return g

    def union(self, other: "MultiGraph") -> "MultiGraph":
        """Edge-multiset union (shared pairs add up); vertex union."""
        g = self.copy()
        for v in other._vertices:
            g._add_vertex(v)
        for (u, v), mult in other._edges.items():
            g._add_edge(u, v, mult)
        return g

    # -- traversal -------------------------------------------------------------

    def component_of(self, start: int) -> Set[int]:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def components(self) -> List[Set[int]]:
        out: List[Set[int]] = []
        left = set(self._vertices)
        while left:
            c = self.component_of(min(left))
            out.append(c)
            left -= c
        return out

    def is_connected(self) -> bool:
        if not self._vertices:
            return True
        return len(self.component_of(min(self._vertices))) == self.n()

    def bfs_distances(self, start: int) -> Dict[int, int]:
        dist = {start: 0}
        frontier = [start]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in self._adj[v]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        return dist

    # -- equality / hashing ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiGraph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((frozenset(self._vertices), frozenset(self._edges.items())))

    def key(self) -> Tuple[FrozenSet[int], FrozenSet[Tuple[Pair, int]]]:
        """Exact identity key (ids matter), usable for memo tables."""
        return (frozenset(self._vertices), frozenset(self._edges.items()))

    def __repr__(self):
        return "MultiGraph(n=%d, m=%d)" % (self.n(), self.m())


# -- dissolution ---------------------------------------------------------------


def dissolve(g: MultiGraph, s: Iterable[int]) -> MultiGraph:
    """Replace every maximal path with internal vertices in ``s`` by an edge.

    Every vertex of ``s`` must have degree exactly 2 (counting multiplicity).
    Rejects inputs where the replacement would create a loop or erase a cycle
    (parallel pair inside ``s``, chain closing on itself, cycle fully in ``s``).
    """
    s = set(s)
    for v in s:
        if v not in g.vertices:
            raise GraphError("dissolve: vertex %d not in graph" % v)
        if g.degree(v) != 2:
            raise GraphError("dissolve: vertex %d has degree %d != 2" % (v, g.degree(v)))
    out = g.copy()
    done: Set[int] = set()
    for v0 in sorted(s):
        if v0 in done:
            continue
        # walk both directions to the first endpoints outside s
        ends = []
        chain = {v0}
        incident = []
        for w, mult in g.adj(v0).items():
            incident.extend([w] * mult)
        if len(incident) != 2:
            raise GraphError("dissolve: inconsistent degree at %d" % v0)
        if incident[0] == incident[1]:
            # parallel pair at a dissolved vertex would become a loop
            raise GraphError("dissolve: vertex %d lies on a parallel pair" % v0)
        closed = False
        for direction in (0, 1):
            prev, cur = v0, incident[direction]
            while cur in s:
                if cur in chain:
                    closed = True
                    break
                chain.add(cur)
                nbrs = []
                for w, mult in g.adj(cur).items():
                    nbrs.extend([w] * mult)
                a, b = nbrs
                nxt = b if a == prev else a
                if nxt == prev and a == b:
                    raise GraphError("dissolve: vertex %d lies on a parallel pair" % cur)
                prev, cur = cur, nxt
            if closed:
                break
            ends.append(cur)
        if closed:
            raise GraphError("dissolve: set contains a whole cycle")
        if ends[0] == ends[1]:
            raise GraphError(
                "dissolve: chain through %s would create a loop at %d" % (sorted(chain), ends[0])
            )
        done |= chain
        for v in chain:
            out._remove_vertex(v)
        out._add_edge(ends[0], ends[1], 1)
    return out


# -- text / json formats ---------------------------------------------------------


def parse_edge_list(text: str) -> MultiGraph:
    """``u v [mult]`` per line; ``#`` comments and blank lines ignored."""
    g = MultiGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphError("edge list line %d: expected 'u v [mult]'" % lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            mult = int(parts[2]) if len(parts) == 3 else 1
        except ValueError as exc:
            raise GraphError("edge list line %d: %s" % (lineno, exc)) from exc
        if u < 0 or v < 0:
            raise GraphError("edge list line %d: vertex ids must be non-negative" % lineno)
        g._add_edge(u, v, mult)
    return g


def format_edge_list(g: MultiGraph) -> str:
    lines = ["# %d vertices, %d edges" % (g.n(), g.m())]
    isolated = sorted(v for v in g.vertices if g.degree(v) == 0)
    if isolated:
        lines.append("# isolated: %s" % " ".join(map(str, isolated)))
    for (u, v), mult in g.edge_items():
        lines.append("%d %d %d" % (u, v, mult) if mult != 1 else "%d %d" % (u, v))
    return "\n".join(lines) + "\n"


def graph_to_obj(g: MultiGraph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [[u, v, mult] for (u, v), mult in g.edge_items()],
    }


def graph_from_obj(obj: dict) -> MultiGraph:
    return MultiGraph(obj["vertices"], [tuple(e) for e in obj["edges"]])


# -- canonical forms -------------------------------------------------------------


def canonical_key(g: MultiGraph, colors: Optional[Dict[int, object]] = None) -> tuple:
    """Canonical form invariant under id-respecting isomorphism.

    ``colors`` pins vertices: two vertices may only map to each other when
    their colors are equal (used to fix boundary labels).  Refinement plus
    individualization with a transposition-automorphism prune; intended for
    the small graphs this package compares.
    """
    verts = sorted(g.vertices)
    if not verts:
        return ("G", 0, (), ())
    base: Dict[int, object] = {v: (colors.get(v) if colors else None) for v in verts}

    def refine(col: Dict[int, tuple]) -> Dict[int, tuple]:
        cur = col
        while True:
            sig = {}
            for v in verts:
                nbr = tuple(sorted(((cur[w], mult) for w, mult in g.adj(v).items()), key=repr))
                sig[v] = (cur[v], nbr)
            ranks = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
            new = {v: (ranks[sig[v]],) for v in verts}
            if len(set(new.values())) == len(set(cur.values())):
                return new
            cur = new

    def encode(ordered: List[int]) -> tuple:
        pos = {v: i for i, v in enumerate(ordered)}
        return tuple(
            (repr(base[v]), tuple(sorted((pos[w], mult) for w, mult in g.adj(v).items())))
            for v in ordered
        )

    def swap_is_automorphism(u: int, w: int, col: Dict[int, tuple]) -> bool:
        if col[u] != col[w]:
            return False
        if g.multiplicity(u, w) != g.multiplicity(w, u):  # always equal; kept for clarity
            return False
        for x in verts:
            if x in (u, w):
                continue
            if g.multiplicity(u, x) != g.multiplicity(w, x):
                return False
        return True

    best: Optional[tuple] = None

    def search(col: Dict[int, tuple]) -> None:
        nonlocal best
        col = refine(col)
        classes: Dict[tuple, List[int]] = {}
        for v in verts:
            classes.setdefault(col[v], []).append(v)
        multi = sorted(
            (c for c in classes.values() if len(c) > 1),
            key=lambda c: (len(c), col[c[0]]),
        )
        if not multi:
            ordered = sorted(verts, key=lambda v: col[v])
            enc = encode(ordered)
            if best is None or enc < best:
                best = enc
            return
        target = multi[0]
        tried: List[int] = []
        for v in sorted(target):
            if any(swap_is_automorphism(v, u, col) for u in tried):
                continue
            tried.append(v)
            child = dict(col)
            child[v] = (col[v], "*")
            search(child)

    init_ranks = {s: i for i, s in enumerate(sorted({repr(base[v]) for v in verts}))}
    init = {v: (init_ranks[repr(base[v])],) for v in verts}
    search(init)
    assert best is not None
    color_profile = tuple(sorted(repr(base[v]) for v in verts))
    return ("G", len(verts), color_profile, best)


def are_isomorphic(
    g1: MultiGraph,
    g2: MultiGraph,
    colors1: Optional[Dict[int, object]] = None,
    colors2: Optional[Dict[int, object]] = None,
) -> bool:
    if g1.n() != g2.n() or g1.m() != g2.m():
        return False
    return canonical_key(g1, colors1) == canonical_key(g2, colors2)
