"""Packings extracted from minimum-degree guarantees.

Degrees here count distinct neighbors: the maximal-path argument and the
partition local search both reason about neighbor positions, and parallel
edges would not add usable positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .certificates import PackingCert, SubdivisionWitness, witness_from_subgraph
from .errors import GraphError, PreconditionError
from .hfamily import HCollection
from .multigraph import MultiGraph
from .oracle import verify_certificate


def _check_min_simple_degree(g: MultiGraph, bound: int, what: str) -> None:
    for v in sorted(g.vertices):
        if g.simple_degree(v) < bound:
            raise PreconditionError(
                "%s: vertex %d has %d distinct neighbors, need >= %d"
                % (what, v, g.simple_degree(v), bound)
            )


def _maximal_path(g: MultiGraph) -> List[int]:
    """Grow from the lowest id, always stepping to the lowest unvisited neighbor."""
    start = min(g.vertices)
    path = [start]
    on_path = {start}
    while True:
        nxt = None
        for w in g.neighbors(path[-1]):
            if w not in on_path:
                nxt = w
                break
        if nxt is None:
            return path
        path.append(nxt)
        on_path.add(nxt)


def greedy_epack(g: MultiGraph, k: int, r: int) -> PackingCert:
    """k edge-disjoint theta_r hits from delta(g) >= k*r, sharing one vertex.

    Maximal path P; the last vertex v has all its neighbors on P.  Splitting
    the first k*r neighbors (in P-order) into k blocks of r, each block's
    span of P plus its spokes to v carries theta_r as a minor.  O(m).
    """
    if k < 1 or r < 1:
        raise PreconditionError("greedy_epack: k and r must be >= 1")
    _check_min_simple_degree(g, k * r, "greedy_epack")
    path = _maximal_path(g)
    pos = {v: i for i, v in enumerate(path)}
    v = path[-1]
    nbrs = g.neighbors(v)
    if any(w not in pos for w in nbrs):
        raise GraphError("greedy_epack: path not maximal")  # cannot happen
    ordered = sorted(nbrs, key=lambda w: pos[w])
    if len(ordered) < k * r:
        raise PreconditionError(
            "greedy_epack: last vertex %d has only %d neighbors on the path" % (v, len(ordered))
        )
    witnesses = []
    for i in range(k):
        block = ordered[i * r : (i + 1) * r]
        lo, hi = pos[block[0]], pos[block[-1]]
        span = path[lo : hi + 1]
        sub = MultiGraph([v] + span)
        for x, y in zip(span, span[1:]):
            sub = sub.with_edge(x, y, 1)
        for w in block:
            sub = sub.with_edge(v, w, 1)
        witnesses.append(witness_from_subgraph(sub))
    cert = PackingCert(tuple(witnesses), "e")
    ok, why = verify_certificate(g, cert, HCollection.thetas(r))
    if not ok:
        raise GraphError("internal: greedy_epack certificate invalid: %s" % why)
    return cert


@dataclass(frozen=True)
class DegreePartition:
    parts: Tuple[FrozenSet[int], ...]
    r: int
    moves: int

    def validate(self, g: MultiGraph) -> bool:
        seen = set()
        for part in self.parts:
            if not part or part & seen:
                return False
            seen |= part
            sub = g.subgraph(part)
            if any(sub.simple_degree(v) < self.r for v in part):
                return False
        return seen == set(g.vertices)


def _local_search_partition(g: MultiGraph, k: int, r: int) -> Tuple[List[set], int]:
    """Move each violating vertex to the part holding most of its neighbors
    (>= r+1 exists by pigeonhole); every move adds >= 2 internal edges, so
    at most m/2 moves.  May leave parts empty."""
    verts = sorted(g.vertices)
    assign = {v: i % k for i, v in enumerate(verts)}
    moves = 0
    budget = g.m() + 1
    while True:
        moved = False
        for v in verts:
            own = assign[v]
            counts = [0] * k
            for w in g.adj(v):
                counts[assign[w]] += 1
            if counts[own] >= r:
                continue
            best = max(range(k), key=lambda i: (counts[i], -i))
            if counts[best] <= counts[own]:
                raise GraphError("internal: no improving move despite degree bound")
            assign[v] = best
            moves += 1
            moved = True
            if moves > budget:
                raise GraphError("internal: local search exceeded its move budget")
        if not moved:
            break
    parts = [set(v for v in verts if assign[v] == i) for i in range(k)]
    return parts, moves


def _degree_core(g: MultiGraph, within: set, s: int) -> set:
    """Largest subset of ``within`` inducing minimum simple degree >= s."""
    alive = set(within)
    changed = True
    while changed and alive:
        changed = False
        for v in list(alive):
            if sum(1 for w in g.adj(v) if w in alive) < s:
                alive.discard(v)
                changed = True
    return alive


def _minimal_core(g: MultiGraph, within: set, s: int) -> set:
    """Inclusion-minimal subset inducing min degree >= s (empty if none)."""
    core = _degree_core(g, within, s)
    shrinking = True
    while shrinking and core:
        shrinking = False
        for u in sorted(core):
            smaller = _degree_core(g, core - {u}, s)
            if smaller:
                core = smaller
                shrinking = True
                break
    return core


def _bipartition(g: MultiGraph, within: set, s: int, t: int) -> Optional[Tuple[set, set, int]]:
    """Split ``within`` into (A, B) with induced min degrees >= s and >= t,
    assuming every vertex has >= s+t+1 neighbors inside.  Returns the move
    count of the repair loop, or None when the seed degenerates."""
    a = _minimal_core(g, within, s)
    if not a or a == set(within):
        return None
    b = set(within) - a
    moves = 0
    while True:
        violating = None
        for v in sorted(b):
            if sum(1 for w in g.adj(v) if w in b) < t:
                violating = v
                break
        if violating is None:
            return a, b, moves
        # the mover has >= s+2 neighbors in A, so A keeps its guarantee
        b.discard(violating)
        a.add(violating)
        moves += 1
        if not b:
            return None


def _exhaustive_partition(g: MultiGraph, k: int, r: int) -> Optional[List[set]]:
    verts = sorted(g.vertices)
    if k ** len(verts) > 2_000_000:
        return None
    import itertools

    for assign in itertools.product(range(k), repeat=len(verts)):
        parts = [set() for _ in range(k)]
        for v, i in zip(verts, assign):
            parts[i].add(v)
        if any(not p for p in parts):
            continue
        ok = all(
            sum(1 for w in g.adj(v) if w in p) >= r for p in parts for v in p
        )
        if ok:
            return parts
    return None


def degree_partition(g: MultiGraph, k: int, r: int) -> DegreePartition:
    """Partition into k non-empty parts, each inducing min degree >= r.

    Fast path: the neighbor-count local search.  That search can strand a
    part empty (its last member is always violating and walks out), so a
    recursive bipartition repairs such outcomes: peel an inclusion-minimal
    subset inducing min degree >= r, pull complement vertices with fewer
    than (k-1)(r+1)-1 inside neighbors across, recurse on the rest.
    """
    if k < 1 or r < 1:
        raise PreconditionError("degree_partition: k and r must be >= 1")
    _check_min_simple_degree(g, k * (r + 1) - 1, "degree_partition")
    parts, moves = _local_search_partition(g, k, r)
    if all(parts):
        dp = DegreePartition(tuple(frozenset(p) for p in parts), r, moves)
        if not dp.validate(g):
            raise GraphError("internal: degree_partition produced an invalid partition")
        return dp

    out: List[set] = []
    remaining = set(g.vertices)
    total_moves = moves
    failed = False
    for step in range(k - 1, 0, -1):
        # remaining side must keep min degree >= step*(r+1)-1
        res = _bipartition(g, remaining, r, step * (r + 1) - 1)
        if res is None:
            failed = True
            break
        a, b, mv = res
        out.append(a)
        remaining = b
        total_moves += mv
    if not failed:
        out.append(remaining)
        dp = DegreePartition(tuple(frozenset(p) for p in out), r, total_moves)
        if dp.validate(g):
            return dp

    exhaustive = _exhaustive_partition(g, k, r)
    if exhaustive is not None:
        dp = DegreePartition(tuple(frozenset(p) for p in exhaustive), r, total_moves)
        if dp.validate(g):
            return dp
    raise GraphError(
        "degree_partition: could not realize a partition with %d parts at degree %d" % (k, r)
    )


def vpack_from_degree(g: MultiGraph, k: int, r: int) -> PackingCert:
    """k vertex-disjoint theta_r hits from delta(g) >= k(r+1)-1."""
    dp = degree_partition(g, k, r)
    witnesses: List[SubdivisionWitness] = []
    for part in dp.parts:
        sub = g.subgraph(part)
        one = greedy_epack(sub, 1, r)
        witnesses.append(one.witnesses[0])
    cert = PackingCert(tuple(witnesses), "v")
    ok, why = verify_certificate(g, cert, HCollection.thetas(r))
    if not ok:
        raise GraphError("internal: vpack_from_degree certificate invalid: %s" % why)
    return cert


# -- lifting a packing through a minor model ------------------------------------------


def validate_model(host: MultiGraph, model: Dict[int, FrozenSet[int]], h_graph: MultiGraph):
    """Branch sets must be disjoint, connected, and carry the h_graph edges."""
    seen: set = set()
    for a, s in model.items():
        if not s:
            raise GraphError("model: branch set of %d is empty" % a)
        if s & seen:
            raise GraphError("model: branch set of %d overlaps another" % a)
        seen |= s
        for v in s:
            if not host.has_vertex(v):
                raise GraphError("model: branch set of %d leaves the host" % a)
        if not host.subgraph(s).is_connected():
            raise GraphError("model: branch set of %d is not connected" % a)
    for (a, b), mult in h_graph.edge_items():
        cross = 0
        for u in model[a]:
            for w, c in host.adj(u).items():
                if w in model[b]:
                    cross += c
        if cross < mult:
            raise GraphError(
                "model: edge (%d,%d) needs %d host edges, found %d" % (a, b, mult, cross)
            )


def lift_packing(
    host: MultiGraph,
    model: Dict[int, FrozenSet[int]],
    h_graph: MultiGraph,
    cert: PackingCert,
    target: Optional[HCollection] = None,
) -> PackingCert:
    """Re-route a packing of the contracted graph into the host.

    Singleton branch sets relabel paths directly; general branch sets route
    each member through spanning subtrees of its sets.  The lifted
    certificate is re-verified before being returned.
    """
    validate_model(host, model, h_graph)
    singleton = all(len(s) == 1 for s in model.values())
    if singleton:
        vmap = {a: min(s) for a, s in model.items()}
        lifted = []
        for w in cert.witnesses:
            lifted.append(
                SubdivisionWitness(
                    w.pattern.relabeled({v: vmap[v] for v in w.pattern.vertices})
                    if set(w.pattern.vertices) <= set(vmap)
                    else w.pattern,
                    {p: vmap[b] for p, b in w.branch_map.items()},
                    {key: tuple(vmap[x] for x in p) for key, p in w.paths.items()},
                )
            )
        out = PackingCert(tuple(lifted), cert.mode)
    else:
        from .detect import steiner_subtree

        cross_used: Dict[Tuple[int, int], int] = {}
        lifted = []
        for w in cert.witnesses:
            usage = w.edge_usage()
            member = MultiGraph()
            terminals: Dict[int, set] = {}
            for (a, b), need in usage.items():
                picked = 0
                for (u, x), c in sorted(host.edge_items()):
                    if picked >= need:
                        break
                    if (u in model[a] and x in model[b]) or (u in model[b] and x in model[a]):
                        avail = c - cross_used.get((u, x), 0)
                        take = min(avail, need - picked)
                        if take <= 0:
                            continue
                        cross_used[(u, x)] = cross_used.get((u, x), 0) + take
                        member = member.with_vertices([u, x]).with_edge(u, x, take)
                        side_a = u if u in model[a] else x
                        side_b = x if side_a == u else u
                        terminals.setdefault(a, set()).add(side_a)
                        terminals.setdefault(b, set()).add(side_b)
                        picked += take
                if picked < need:
                    raise GraphError(
                        "lift_packing: not enough free host edges for (%d,%d)" % (a, b)
                    )
            for a, term in terminals.items():
                tree = steiner_subtree(host, set(model[a]), term)
                member = member.union(tree)
            lifted.append(witness_from_subgraph(member))
        out = PackingCert(tuple(lifted), cert.mode)
    if target is not None:
        ok, why = verify_certificate(host, out, target)
        if not ok:
            raise GraphError("lift_packing: lifted certificate invalid: %s" % why)
    return out
