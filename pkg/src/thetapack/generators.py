"""Instance generators: the unavoidable patterns of large tree-partition
width (walls, fans, stars, thick paths), theta hosts, and seeded random
multigraphs."""

from __future__ import annotations

import random
from typing import Dict, Optional, Tuple

from .errors import GraphError
from .hfamily import double_theta_graph, theta_graph
from .multigraph import MultiGraph


def wall(n: int) -> MultiGraph:
    """The n-wall on the vertex grid [1..n]^2 (brick pattern)."""
    if n < 1:
        raise GraphError("wall: n must be >= 1")

    def vid(i: int, j: int) -> int:
        return (i - 1) * n + (j - 1)

    g = MultiGraph(range(n * n))
    for i in range(1, n + 1):
        for j in range(1, n):
            g = g.with_edge(vid(i, j), vid(i, j + 1))
    for i in range(1, n + 1):
        if 1 < 2 * i <= n:
            for j in range(0, n + 1):
                col = 2 * j + 1
                if 1 <= col <= n:
                    g = g.with_edge(vid(2 * i - 1, col), vid(2 * i, col))
    for i in range(1, n + 1):
        if 1 <= 2 * i < n:
            for j in range(1, n + 1):
                col = 2 * j
                if 1 <= col <= n:
                    g = g.with_edge(vid(2 * i, col), vid(2 * i + 1, col))
    return g


def fan(n: int) -> MultiGraph:
    """Dominating vertex over a path on n vertices: n+1 vertices, 2n-1 edges."""
    if n < 1:
        raise GraphError("fan: n must be >= 1")
    g = MultiGraph(range(n + 1))
    for i in range(n - 1):
        g = g.with_edge(i, i + 1)
    for i in range(n):
        g = g.with_edge(n, i)
    return g


def star(n: int) -> MultiGraph:
    """Every edge of K_{1,n} replaced by n independent two-edge paths."""
    if n < 1:
        raise GraphError("star: n must be >= 1")
    g = MultiGraph([0])
    nxt = 1
    for _leaf in range(n):
        leaf = nxt
        nxt += 1
        g = g.with_vertices([leaf])
        for _p in range(n):
            mid = nxt
            nxt += 1
            g = g.with_vertices([mid]).with_edge(0, mid).with_edge(mid, leaf)
    return g


def npath(n: int) -> MultiGraph:
    """Every edge of an n-edge path replaced by n independent two-edge paths."""
    if n < 1:
        raise GraphError("npath: n must be >= 1")
    g = MultiGraph(range(n + 1))
    nxt = n + 1
    for i in range(n):
        for _p in range(n):
            mid = nxt
            nxt += 1
            g = g.with_vertices([mid]).with_edge(i, mid).with_edge(mid, i + 1)
    return g


def theta(r: int) -> MultiGraph:
    return theta_graph(r)


def theta_double(r: int, rp: int) -> MultiGraph:
    return double_theta_graph(r, rp)


def disjoint_triangles(k: int) -> MultiGraph:
    g = MultiGraph()
    for i in range(k):
        b = 3 * i
        g = g.with_vertices([b, b + 1, b + 2])
        g = g.with_edge(b, b + 1).with_edge(b + 1, b + 2).with_edge(b, b + 2)
    return g


def caterpillar(segments: int, seg_len: int = 2) -> MultiGraph:
    """Long path with a pendant leaf after every segment (pattern-free)."""
    g = MultiGraph([0])
    cur, nxt = 0, 1
    for _ in range(segments):
        for _ in range(seg_len):
            g = g.with_vertices([nxt]).with_edge(cur, nxt)
            cur = nxt
            nxt += 1
        g = g.with_vertices([nxt]).with_edge(cur, nxt)
        nxt += 1
    return g


def random_multigraph(
    n: int, m: int, max_mult: int = 1, seed: int = 0, connected_bias: bool = True
) -> MultiGraph:
    """Seeded multigraph with n vertices and exactly m edge copies."""
    if n < 2 and m > 0:
        raise GraphError("random_multigraph: need n >= 2 to place edges")
    rng = random.Random(seed)
    counts: Dict[Tuple[int, int], int] = {}
    placed = 0
    if connected_bias:
        order = list(range(1, n))
        rng.shuffle(order)
        for v in order:
            if placed >= m:
                break
            u = rng.randrange(v)
            key = (u, v)
            counts[key] = counts.get(key, 0) + 1
            placed += 1
    attempts = 0
    while placed < m:
        u, v = rng.randrange(n), rng.randrange(n)
        attempts += 1
        if attempts > 100 * (m + 10):
            raise GraphError("random_multigraph: could not place edges under the cap")
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if counts.get(key, 0) >= max_mult:
            continue
        counts[key] = counts.get(key, 0) + 1
        placed += 1
    return MultiGraph(range(n), [(u, v, c) for (u, v), c in counts.items()])


FAMILIES = {
    "wall": (wall, ("n",)),
    "fan": (fan, ("n",)),
    "star": (star, ("n",)),
    "npath": (npath, ("n",)),
    "theta": (theta, ("r",)),
    "theta_double": (theta_double, ("r", "rp")),
    "triangles": (disjoint_triangles, ("k",)),
    "caterpillar": (caterpillar, ("segments", "seg_len")),
    "random": (random_multigraph, ("n", "m", "max_mult", "seed")),
}


def generate(family: str, **params) -> MultiGraph:
    if family not in FAMILIES:
        raise GraphError(
            "unknown family %r (known: %s)" % (family, ", ".join(sorted(FAMILIES)))
        )
    fn, names = FAMILIES[family]
    unknown = set(params) - set(names)
    if unknown:
        raise GraphError("family %r does not take %s" % (family, sorted(unknown)))
    return fn(**params)
