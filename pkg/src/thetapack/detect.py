"""Detection engines for theta-style targets and generic subdivisions.

Fast engines: cycles (r=2) via BFS, r internally disjoint paths via
unit-capacity flow on the vertex-split graph (exact for theta minors when
r <= 3 since minor and topological minor coincide for patterns of maximum
degree 3), and exhaustive disjoint connected-pair enumeration for general r.
A generic backtracking engine finds subdivisions of arbitrary small patterns.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .certificates import SubdivisionWitness, witness_from_subgraph
from .errors import GraphError, OracleSizeError
from .multigraph import MultiGraph

Pair = Tuple[int, int]

DEFAULT_ORACLE_CAP = 16


def guard_size(g: MultiGraph, cap: Optional[int], what: str) -> None:
    limit = DEFAULT_ORACLE_CAP if cap is None else cap
    if g.n() > limit:
        raise OracleSizeError(
            "%s: instance has %d vertices, exhaustive cap is %d" % (what, g.n(), limit)
        )


# -- cycles (theta_2) --------------------------------------------------------------


def find_parallel_pair(g: MultiGraph) -> Optional[Pair]:
    for (u, v), mult in g.edge_items():
        if mult >= 2:
            return (u, v)
    return None


def _path_to_root(parent: Dict[int, Optional[int]], v: int) -> List[int]:
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


def shortest_cycle(g: MultiGraph) -> Optional[List[int]]:
    """Vertex sequence of a shortest cycle, or None on forests.

    A parallel pair is the 2-cycle [u, v].  Exact girth scan; quadratic-ish,
    meant for small hosts.
    """
    pair = find_parallel_pair(g)
    if pair:
        return [pair[0], pair[1]]
    best: Optional[List[int]] = None
    for root in sorted(g.vertices):
        dist: Dict[int, int] = {root: 0}
        parent: Dict[int, Optional[int]] = {root: None}
        frontier = [root]
        while frontier:
            if best is not None and 2 * dist[frontier[0]] + 1 >= len(best):
                break
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if w == parent[v]:
                        continue
                    if w in dist:
                        pv, pw = _path_to_root(parent, v), _path_to_root(parent, w)
                        if set(pv) & set(pw) == {root}:
                            cyc = list(reversed(pw)) + pv[:-1]
                            if best is None or len(cyc) < len(best):
                                best = cyc
                        continue
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    nxt.append(w)
            frontier = nxt
    return best


def some_cycle(g: MultiGraph, max_len: Optional[int] = None) -> Optional[List[int]]:
    """Near-shortest cycle in one BFS-forest pass; None on forests."""
    pair = find_parallel_pair(g)
    if pair:
        return [pair[0], pair[1]]
    visited: Set[int] = set()
    for root in sorted(g.vertices):
        if root in visited:
            continue
        dist: Dict[int, int] = {root: 0}
        parent: Dict[int, Optional[int]] = {root: None}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if w == parent[v]:
                        continue
                    if w in dist:
                        pv, pw = _path_to_root(parent, v), _path_to_root(parent, w)
                        sw = set(pw)
                        lca = next(x for x in pv if x in sw)
                        iv, iw = pv.index(lca), pw.index(lca)
                        cyc = pv[: iv + 1] + list(reversed(pw[:iw]))
                        if max_len is None or len(cyc) <= max_len:
                            return cyc
                        continue
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    nxt.append(w)
            frontier = nxt
        visited |= set(dist)
    return None


def cycle_witness(cycle: Sequence[int]) -> SubdivisionWitness:
    """Witness for a cycle given as a closed vertex sequence (len >= 2)."""
    cyc = list(cycle)
    a, b = cyc[0], cyc[1]
    lo, hi = (a, b) if a < b else (b, a)
    pattern = MultiGraph([a, b], [(a, b, 2)])
    if len(cyc) == 2:
        return SubdivisionWitness(
            pattern, {a: a, b: b}, {(lo, hi, 0): (lo, hi), (lo, hi, 1): (lo, hi)}
        )
    direct = (lo, hi)
    back = cyc[1:] + [cyc[0]]
    if back[0] != lo:
        back = list(reversed(back))
    return SubdivisionWitness(
        pattern, {a: a, b: b}, {(lo, hi, 0): direct, (lo, hi, 1): tuple(back)}
    )


def is_forest(g: MultiGraph) -> bool:
    """No cycle, counting parallel pairs as cycles."""
    if find_parallel_pair(g):
        return False
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), _m in g.edge_items():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


# -- max flow core ------------------------------------------------------------------


class _Flow:
    """Small min-cost augmenting flow network (unit costs on forward arcs)."""

    def __init__(self):
        self.head: Dict[object, List[int]] = {}
        self.to: List[object] = []
        self.cap: List[int] = []
        self.cost: List[int] = []

    def add_node(self, u) -> None:
        self.head.setdefault(u, [])

    def add_arc(self, u, v, cap: int, cost: int = 1) -> int:
        self.add_node(u)
        self.add_node(v)
        i = len(self.to)
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.head[u].append(i)
        self.to.append(u)
        self.cap.append(0)
        self.cost.append(-cost)
        self.head[v].append(i + 1)
        return i

    def augment_shortest(self, s, t) -> Optional[int]:
        """One SPFA augmentation along a min-cost path; returns its cost."""
        dist: Dict[object, int] = {s: 0}
        pre: Dict[object, Tuple[object, int]] = {}
        inq = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            inq.discard(u)
            for i in self.head[u]:
                if self.cap[i] <= 0:
                    continue
                v = self.to[i]
                nd = dist[u] + self.cost[i]
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    pre[v] = (u, i)
                    if v not in inq:
                        inq.add(v)
                        q.append(v)
        if t not in dist:
            return None
        v = t
        while v != s:
            u, i = pre[v]
            self.cap[i] -= 1
            self.cap[i ^ 1] += 1
            v = u
        return dist[t]

    def flow_on(self, i: int) -> int:
        return self.cap[i ^ 1]


def disjoint_paths(
    g: MultiGraph,
    x: int,
    y: int,
    r: int,
    excluded: Iterable[int] = (),
    total_budget: Optional[int] = None,
) -> Optional[List[Tuple[int, ...]]]:
    """r internally vertex-disjoint x-y paths minimizing total length.

    Parallel edge copies count as separate paths.  Returns None when fewer
    than r paths exist or the minimum total length exceeds ``total_budget``.
    """
    if x == y:
        raise GraphError("disjoint_paths: endpoints must differ")
    banned = set(excluded) - {x, y}
    net = _Flow()
    big = 10 ** 9
    arcs: Dict[Tuple[int, int], int] = {}
    for v in g.vertices:
        if v in banned:
            continue
        net.add_arc(("i", v), ("o", v), big if v in (x, y) else 1, cost=0)
    for (u, v), mult in g.edge_items():
        if u in banned or v in banned:
            continue
        arcs[(u, v)] = net.add_arc(("o", u), ("i", v), mult, cost=1)
        arcs[(v, u)] = net.add_arc(("o", v), ("i", u), mult, cost=1)
    s, t = ("o", x), ("i", y)
    if s not in net.head or t not in net.head:
        return None
    total = 0
    for _ in range(r):
        c = net.augment_shortest(s, t)
        if c is None:
            return None
        total += c
        if total_budget is not None and total > total_budget:
            return None
    # net flow per undirected step; cancel opposite directions
    succ: Dict[int, List[int]] = {}
    done: Set[Tuple[int, int]] = set()
    for (u, v), i in arcs.items():
        if (u, v) in done or (v, u) in done:
            continue
        f_uv = net.flow_on(i)
        f_vu = net.flow_on(arcs[(v, u)])
        net_f = f_uv - f_vu
        if net_f > 0:
            succ.setdefault(u, []).extend([v] * net_f)
        elif net_f < 0:
            succ.setdefault(v, []).extend([u] * (-net_f))
        done.add((u, v))
    paths: List[Tuple[int, ...]] = []
    for _ in range(r):
        path = [x]
        cur = x
        while cur != y:
            nxts = succ.get(cur)
            if not nxts:
                raise GraphError("disjoint_paths: flow decomposition failed")
            nxt = nxts.pop()
            path.append(nxt)
            cur = nxt
        paths.append(tuple(path))
    return paths


def theta_subdivision_witness(
    g: MultiGraph,
    r: int,
    total_budget: Optional[int] = None,
    candidate_pairs: Optional[Iterable[Pair]] = None,
) -> Optional[SubdivisionWitness]:
    """Search for two branch vertices joined by r internally disjoint paths."""
    if r < 1:
        raise GraphError("r must be >= 1")
    if r == 1:
        for (u, v), _m in g.edge_items():
            pattern = MultiGraph([u, v], [(u, v, 1)])
            return SubdivisionWitness(pattern, {u: u, v: v}, {(u, v, 0): (u, v)})
        return None
    if r == 2:
        cyc = shortest_cycle(g) if g.n() <= 400 else some_cycle(g, max_len=total_budget)
        if cyc is None or (total_budget is not None and len(cyc) > total_budget):
            return None
        return cycle_witness(cyc)
    if candidate_pairs is None:
        heavy = [v for v in sorted(g.vertices) if g.degree(v) >= r]
        candidate_pairs = [(u, v) for i, u in enumerate(heavy) for v in heavy[i + 1 :]]
    best: Optional[List[Tuple[int, ...]]] = None
    best_len = None
    for u, v in candidate_pairs:
        paths = disjoint_paths(g, u, v, r, total_budget=total_budget)
        if paths is None:
            continue
        tot = sum(len(p) - 1 for p in paths)
        if best_len is None or tot < best_len:
            best, best_len = paths, tot
            if tot == r:  # cannot do better than all-direct edges
                break
    if best is None:
        return None
    return _paths_witness(best)


def _paths_witness(paths: List[Tuple[int, ...]]) -> SubdivisionWitness:
    x, y = paths[0][0], paths[0][-1]
    lo, hi = (x, y) if x < y else (y, x)
    pattern = MultiGraph([x, y], [(x, y, len(paths))])
    out = {}
    for c, p in enumerate(sorted(paths, key=lambda q: (len(q), q))):
        if p[0] != lo:
            p = tuple(reversed(p))
        out[(lo, hi, c)] = p
    return SubdivisionWitness(pattern, {x: x, y: y}, out)


# -- exhaustive minor detection ------------------------------------------------------


def connected_subsets(g: MultiGraph, within: Optional[Set[int]] = None) -> Iterator[Set[int]]:
    """Every connected vertex subset exactly once (ascending roots)."""
    verts = sorted(within if within is not None else g.vertices)
    vset = set(verts)

    def rec(s: Set[int], frontier: List[int], banned: Set[int]) -> Iterator[Set[int]]:
        yield s
        local_ban = set(banned)
        for w in list(frontier):
            if w in local_ban:
                continue
            new_s = s | {w}
            new_frontier = [x for x in frontier if x != w and x not in local_ban]
            for x in g.neighbors(w):
                if x in vset and x not in new_s and x not in local_ban and x > root:
                    if x not in new_frontier:
                        new_frontier.append(x)
            yield from rec(new_s, new_frontier, set(local_ban))
            local_ban.add(w)

    for root in verts:
        frontier = [x for x in g.neighbors(root) if x in vset and x > root]
        yield from rec({root}, frontier, set())


def cross_multiplicity(g: MultiGraph, a: Set[int], b: Set[int]) -> int:
    total = 0
    small = a if len(a) <= len(b) else b
    other = b if small is a else a
    for u in small:
        for w, mult in g.adj(u).items():
            if w in other:
                total += mult
    return total


def theta_minor_pair(
    g: MultiGraph, r: int, cap: Optional[int] = None
) -> Optional[Tuple[Set[int], Set[int]]]:
    """Two disjoint connected sets with >= r edges between, or None."""
    guard_size(g, cap, "theta_minor_pair")
    for a in connected_subsets(g):
        rest = g.vertices - a
        if not rest:
            continue
        sub = g.subgraph(rest)
        for comp in sub.components():
            if cross_multiplicity(g, a, comp) >= r:
                return a, comp
    return None


def has_theta_minor_exhaustive(g: MultiGraph, r: int, cap: Optional[int] = None) -> bool:
    if r < 1:
        raise GraphError("r must be >= 1")
    return theta_minor_pair(g, r, cap) is not None


def steiner_subtree(g: MultiGraph, region: Set[int], terminals: Set[int]) -> MultiGraph:
    """A small subtree of g[region] spanning ``terminals`` (BFS tree pruned)."""
    region = set(region)
    terminals = set(terminals)
    if not terminals:
        raise GraphError("steiner_subtree: no terminals")
    root = min(terminals)
    parent: Dict[int, Optional[int]] = {root: None}
    order = [root]
    q = deque([root])
    while q:
        v = q.popleft()
        for w in g.neighbors(v):
            if w in region and w not in parent:
                parent[w] = v
                order.append(w)
                q.append(w)
    missing = terminals - set(parent)
    if missing:
        raise GraphError("steiner_subtree: terminals not connected: %s" % sorted(missing))
    keep: Set[int] = set()
    for tvert in terminals:
        v: Optional[int] = tvert
        while v is not None and v not in keep:
            keep.add(v)
            v = parent[v]
    tree = MultiGraph(keep)
    for v in keep:
        p = parent[v]
        if p is not None and p in keep:
            tree = tree.with_edge(v, p, 1)
    return tree


def theta_minor_model_from_pair(
    g: MultiGraph, a: Set[int], b: Set[int], r: int
) -> MultiGraph:
    """Minimal-ish subgraph demonstrating the theta_r minor over (a, b)."""
    cross = []
    for (u, v), mult in g.edge_items():
        if (u in a and v in b) or (u in b and v in a):
            for c in range(mult):
                cross.append((u, v, c))
    cross.sort()
    chosen = cross[:r]
    if len(chosen) < r:
        raise GraphError("theta_minor_model_from_pair: not enough cross edges")
    ta = {u if u in a else v for (u, v, _c) in chosen}
    tb = {u if u in b else v for (u, v, _c) in chosen}
    tree_a = steiner_subtree(g, a, ta)
    tree_b = steiner_subtree(g, b, tb)
    m = tree_a.union(tree_b)
    counts: Dict[Pair, int] = {}
    for (u, v, _c) in chosen:
        key = (u, v) if u < v else (v, u)
        counts[key] = counts.get(key, 0) + 1
    for (u, v), c in counts.items():
        m = m.with_vertices([u, v]).with_edge(u, v, c)
    return m


def theta_minor_witness(
    g: MultiGraph, r: int, cap: Optional[int] = None, total_budget: Optional[int] = None
) -> Optional[SubdivisionWitness]:
    """A witness that g contains theta_r as a minor (fast r<=3, else exhaustive)."""
    if r <= 3:
        w = theta_subdivision_witness(g, r, total_budget=total_budget)
        return w
    pairres = theta_minor_pair(g, r, cap)
    if pairres is None:
        return None
    m = theta_minor_model_from_pair(g, pairres[0], pairres[1], r)
    w = witness_from_subgraph(m)
    if total_budget is not None and w.edge_count() > total_budget:
        return None
    return w


def has_theta_minor_fast(g: MultiGraph, r: int, cap: Optional[int] = None) -> bool:
    """Freeness-oriented dispatch; exact for every r (exhaustive when r >= 4)."""
    if r == 1:
        return g.m() >= 1
    if r == 2:
        return not is_forest(g)
    if r == 3:
        work = _strip_low_degree(g.with_capped_multiplicities(3), 2)
        heavy = [v for v in sorted(work.vertices) if work.degree(v) >= 3]
        for i, u in enumerate(heavy):
            for v in heavy[i + 1 :]:
                if disjoint_paths(work, u, v, 3) is not None:
                    return True
        return False
    return has_theta_minor_exhaustive(g, r, cap)


def _strip_low_degree(g: MultiGraph, threshold: int) -> MultiGraph:
    """Iteratively delete vertices of degree < threshold (multiplicity degree)."""
    work = g
    while True:
        drop = [v for v in work.vertices if work.degree(v) < threshold]
        if not drop:
            return work
        work = work.without_vertices(drop)


# -- double theta (two thetas sharing a vertex) ---------------------------------------


def double_theta_model(
    g: MultiGraph, r: int, rp: int, cap: Optional[int] = None
) -> Optional[Tuple[Set[int], Set[int], Set[int]]]:
    """(A, C, B) disjoint connected with cross(A,C) >= r and cross(C,B) >= rp."""
    guard_size(g, cap, "double_theta_model")
    for c in connected_subsets(g):
        rest = g.vertices - c
        if not rest:
            continue
        comps = g.subgraph(rest).components()
        crosses = sorted(
            ((cross_multiplicity(g, c, comp), i) for i, comp in enumerate(comps)),
            reverse=True,
        )
        # two different components
        for ci, (x1, i1) in enumerate(crosses):
            if x1 < min(r, rp):
                break
            for x2, i2 in crosses[ci + 1 :]:
                hi, lo = max(r, rp), min(r, rp)
                if x1 >= hi and x2 >= lo:
                    a = comps[i1] if r >= rp else comps[i2]
                    b = comps[i2] if r >= rp else comps[i1]
                    return a, c, b
        # both sides inside one component
        for comp in comps:
            if cross_multiplicity(g, c, comp) < r + rp:
                continue
            for a in connected_subsets(g, within=set(comp)):
                if cross_multiplicity(g, a, c) < r:
                    continue
                rest2 = set(comp) - a
                if not rest2:
                    continue
                for b in g.subgraph(rest2).components():
                    if cross_multiplicity(g, b, c) >= rp:
                        return a, c, b
    return None


def has_double_theta_minor(g: MultiGraph, r: int, rp: int, cap: Optional[int] = None) -> bool:
    return double_theta_model(g, r, rp, cap) is not None


def double_theta_witness(
    g: MultiGraph, r: int, rp: int, cap: Optional[int] = None
) -> Optional[SubdivisionWitness]:
    triple = double_theta_model(g, r, rp, cap)
    if triple is None:
        return None
    a, c, b = triple
    cross_ac = []
    cross_cb = []
    for (u, v), mult in g.edge_items():
        for copy in range(mult):
            if (u in a and v in c) or (u in c and v in a):
                cross_ac.append((u, v, copy))
            elif (u in c and v in b) or (u in b and v in c):
                cross_cb.append((u, v, copy))
    cross_ac = sorted(cross_ac)[:r]
    cross_cb = sorted(cross_cb)[:rp]
    term_a = {u if u in a else v for (u, v, _x) in cross_ac}
    term_b = {u if u in b else v for (u, v, _x) in cross_cb}
    term_c = {u if u in c else v for (u, v, _x) in cross_ac}
    term_c |= {u if u in c else v for (u, v, _x) in cross_cb}
    m = steiner_subtree(g, a, term_a)
    m = m.union(steiner_subtree(g, b, term_b))
    m = m.union(steiner_subtree(g, c, term_c))
    counts: Dict[Pair, int] = {}
    for (u, v, _x) in cross_ac + cross_cb:
        key = (u, v) if u < v else (v, u)
        counts[key] = counts.get(key, 0) + 1
    for (u, v), cnt in counts.items():
        m = m.with_vertices([u, v]).with_edge(u, v, cnt)
    return witness_from_subgraph(m)


# -- generic subdivision search --------------------------------------------------------


def find_pattern_subdivision(
    g: MultiGraph,
    pattern: MultiGraph,
    edge_budget: Optional[int] = None,
    cap: Optional[int] = None,
) -> Optional[SubdivisionWitness]:
    """Exhaustive search for a subdivision of ``pattern`` in ``g``.

    Branch-injection backtracking followed by internally disjoint path
    routing.  Exponential; the size guard keeps it at oracle scale.
    """
    guard_size(g, cap, "find_pattern_subdivision")
    pverts = sorted(pattern.vertices, key=lambda v: -pattern.degree(v))
    hverts = sorted(g.vertices)
    occs = list(pattern.edge_occurrences())

    def route(
        idx: int,
        phi: Dict[int, int],
        used_internal: Set[int],
        usage: Dict[Pair, int],
        budget: Optional[int],
        acc: Dict[Tuple[int, int, int], Tuple[int, ...]],
    ) -> bool:
        if idx == len(occs):
            return True
        a, b, copy = occs[idx]
        sa, sb = phi[a], phi[b]
        branch_images = set(phi.values())
        lower = len(occs) - idx - 1  # each remaining occurrence needs >= 1 edge

        def paths_dfs(path: List[int], blen: int) -> bool:
            cur = path[-1]
            if budget is not None and blen + lower > budget:
                return False
            if cur == sb and len(path) >= 2:
                key = (a, b, copy)
                acc[key] = tuple(path)
                new_internal = used_internal | set(path[1:-1])
                rem = None if budget is None else budget - blen
                if route(idx + 1, phi, new_internal, usage, rem, acc):
                    return True
                del acc[key]
                return False
            for w in g.neighbors(cur):
                if w in path:
                    continue
                if w != sb and (w in branch_images or w in used_internal):
                    continue
                pair = (cur, w) if cur < w else (w, cur)
                if usage.get(pair, 0) >= g.multiplicity(*pair):
                    continue
                usage[pair] = usage.get(pair, 0) + 1
                path.append(w)
                if paths_dfs(path, blen + 1):
                    usage[pair] -= 1
                    path.pop()
                    return True
                path.pop()
                usage[pair] -= 1
            return False

        return paths_dfs([sa], 0)

    def assign(i: int, phi: Dict[int, int], used: Set[int]) -> Optional[Dict[int, int]]:
        if i == len(pverts):
            acc: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
            if route(0, phi, set(), {}, edge_budget, acc):
                return dict(acc)  # type: ignore[return-value]
            return None
        pv = pverts[i]
        for hv in hverts:
            if hv in used or g.degree(hv) < pattern.degree(pv):
                continue
            phi[pv] = hv
            used.add(hv)
            res = assign(i + 1, phi, used)
            if res is not None:
                return res
            used.discard(hv)
            del phi[pv]
        return None

    phi: Dict[int, int] = {}
    result = assign(0, phi, set())
    if result is None:
        return None
    return SubdivisionWitness(pattern.copy(), dict(phi), result)  # type: ignore[arg-type]
