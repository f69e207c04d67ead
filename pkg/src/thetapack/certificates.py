"""Verifiable certificates: subdivision witnesses, packings, coverings.

Every algorithmic claim in this package is grounded in one of these objects,
and ``verify_certificate`` re-checks them from scratch against the host graph.
A witness certifies that the union of its paths is a subgraph of the host
that is a subdivision of ``pattern``; membership of the pattern in the target
family is checked separately (isomorphism for literal families, minor
containment for expansion families).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import GraphError
from .multigraph import MultiGraph, graph_from_obj, graph_to_obj

PathKey = Tuple[int, int, int]  # (a, b, copy) with a < b, pattern-side


@dataclass(frozen=True)
class SubdivisionWitness:
    pattern: MultiGraph
    branch_map: Dict[int, int] = field(compare=False)
    paths: Dict[PathKey, Tuple[int, ...]] = field(compare=False)

    def edge_count(self) -> int:
        return sum(len(p) - 1 for p in self.paths.values())

    def vertex_set(self) -> frozenset:
        out = set(self.branch_map.values())
        for p in self.paths.values():
            out.update(p)
        return frozenset(out)

    def edge_usage(self) -> Dict[Tuple[int, int], int]:
        """host pair -> number of copies this witness consumes."""
        usage: Dict[Tuple[int, int], int] = {}
        for p in self.paths.values():
            for x, y in zip(p, p[1:]):
                key = (x, y) if x < y else (y, x)
                usage[key] = usage.get(key, 0) + 1
        return usage

    def subgraph(self) -> MultiGraph:
        g = MultiGraph(self.vertex_set())
        for (u, v), c in self.edge_usage().items():
            g = g.with_edge(u, v, c)
        return g

    def __repr__(self):
        return "SubdivisionWitness(pattern_n=%d, edges=%d)" % (
            self.pattern.n(),
            self.edge_count(),
        )


@dataclass(frozen=True)
class PackingCert:
    witnesses: Tuple[SubdivisionWitness, ...]
    mode: str  # "v" or "e"

    def size(self) -> int:
        return len(self.witnesses)


@dataclass(frozen=True)
class CoverCert:
    mode: str
    vertex_elements: Tuple[int, ...] = ()
    edge_elements: Tuple[Tuple[int, int], ...] = ()  # one entry per deleted copy

    def size(self) -> int:
        return len(self.vertex_elements) if self.mode == "v" else len(self.edge_elements)

    def apply(self, host: MultiGraph) -> MultiGraph:
        if self.mode == "v":
            return host.without_vertices(self.vertex_elements)
        return host.without_edge_occurrences(self.edge_elements)


def check_mode(mode: str) -> str:
    if mode not in ("v", "e"):
        raise GraphError("mode must be 'v' or 'e', got %r" % (mode,))
    return mode


# -- structural verification -----------------------------------------------------


def verify_witness_structure(
    host: MultiGraph, w: SubdivisionWitness, edge_budget: Optional[int] = None
) -> Tuple[bool, str]:
    """Check the subdivision structure of ``w`` inside ``host``.

    Does not check pattern family membership; see ``verify_certificate``.
    """
    pat = w.pattern
    if set(w.branch_map) != set(pat.vertices):
        return False, "branch_map keys differ from pattern vertices"
    images = list(w.branch_map.values())
    if len(set(images)) != len(images):
        return False, "branch_map is not injective"
    for v in images:
        if not host.has_vertex(v):
            return False, "branch image %d not in host" % v

    expected_keys = {(u, v, c) for (u, v, c) in pat.edge_occurrences()}
    if set(w.paths) != expected_keys:
        return False, "path keys differ from pattern edge occurrences"

    branch_images = set(images)
    internal_owner: Dict[int, PathKey] = {}
    usage: Dict[Tuple[int, int], int] = {}
    total_edges = 0
    for key in sorted(w.paths):
        a, b, _c = key
        path = w.paths[key]
        if len(path) < 2:
            return False, "path %s too short" % (key,)
        if path[0] != w.branch_map[a] or path[-1] != w.branch_map[b]:
            return False, "path %s endpoints do not match branch images" % (key,)
        if len(set(path)) != len(path):
            return False, "path %s repeats a vertex" % (key,)
        for x, y in zip(path, path[1:]):
            if not host.has_vertex(x) or not host.has_vertex(y):
                return False, "path %s leaves the host" % (key,)
            if host.multiplicity(x, y) == 0:
                return False, "path %s uses a missing edge (%d,%d)" % (key, x, y)
            pair = (x, y) if x < y else (y, x)
            usage[pair] = usage.get(pair, 0) + 1
            total_edges += 1
        for x in path[1:-1]:
            if x in branch_images:
                return False, "internal vertex %d of path %s is a branch image" % (x, key)
            if x in internal_owner:
                return False, "internal vertex %d shared by %s and %s" % (
                    x,
                    internal_owner[x],
                    key,
                )
            internal_owner[x] = key
    for pair, used in usage.items():
        if used > host.multiplicity(*pair):
            return False, "edge %s used %d times, multiplicity %d" % (
                pair,
                used,
                host.multiplicity(*pair),
            )
    if edge_budget is not None and total_edges > edge_budget:
        return False, "witness has %d edges, budget %d" % (total_edges, edge_budget)
    return True, "ok"


def verify_packing(
    host: MultiGraph,
    cert: PackingCert,
    pattern_check=None,
) -> Tuple[bool, str]:
    check_mode(cert.mode)
    for i, w in enumerate(cert.witnesses):
        ok, why = verify_witness_structure(host, w)
        if not ok:
            return False, "witness %d: %s" % (i, why)
        if pattern_check is not None and not pattern_check(w.pattern):
            return False, "witness %d: pattern not in the target family" % i
    if cert.mode == "v":
        seen: Dict[int, int] = {}
        for i, w in enumerate(cert.witnesses):
            for v in w.vertex_set():
                if v in seen:
                    return False, "witnesses %d and %d share vertex %d" % (seen[v], i, v)
                seen[v] = i
    else:
        total: Dict[Tuple[int, int], int] = {}
        for w in cert.witnesses:
            for pair, c in w.edge_usage().items():
                total[pair] = total.get(pair, 0) + c
        for pair, c in total.items():
            if c > host.multiplicity(*pair):
                return False, "edge %s used %d times across witnesses, multiplicity %d" % (
                    pair,
                    c,
                    host.multiplicity(*pair),
                )
    return True, "ok"


def verify_cover(
    host: MultiGraph,
    cert: CoverCert,
    freeness_check,
) -> Tuple[bool, str]:
    check_mode(cert.mode)
    if cert.mode == "v":
        for v in cert.vertex_elements:
            if not host.has_vertex(v):
                return False, "cover vertex %d not in host" % v
    else:
        need: Dict[Tuple[int, int], int] = {}
        for u, v in cert.edge_elements:
            pair = (u, v) if u < v else (v, u)
            need[pair] = need.get(pair, 0) + 1
        for pair, c in need.items():
            if c > host.multiplicity(*pair):
                return False, "cover deletes %d copies of %s, multiplicity %d" % (
                    c,
                    pair,
                    host.multiplicity(*pair),
                )
    remaining = cert.apply(host)
    if not freeness_check(remaining):
        return False, "host minus cover still contains a target subdivision"
    return True, "ok"


# -- witness construction ---------------------------------------------------------


def witness_from_subgraph(m: MultiGraph) -> SubdivisionWitness:
    """Read the subdivision structure off a subgraph.

    Branch vertices are those of degree != 2; components that are bare cycles
    get their two smallest vertices promoted.  Closed walks through a single
    branch vertex promote their midpoint (the pattern stays loopless).
    """
    if any(m.degree(v) == 0 for v in m.vertices):
        raise GraphError("witness_from_subgraph: isolated vertex")
    branch = {v for v in m.vertices if m.degree(v) != 2}
    for comp in m.components():
        if not comp & branch:
            picks = sorted(comp)[:2]
            if len(picks) < 2:
                # two vertices joined by a parallel pair is the smallest cycle
                raise GraphError("witness_from_subgraph: degenerate component")
            branch.update(picks)

    while True:
        paths = _walk_paths(m, branch)
        if paths is None:
            # some closed walk returned to its origin; caller loop enlarged branch
            continue
        break

    pattern = MultiGraph(branch)
    branch_map = {v: v for v in branch}
    out_paths: Dict[PathKey, Tuple[int, ...]] = {}
    counts: Dict[Tuple[int, int], int] = {}
    for path in paths:
        a, b = path[0], path[-1]
        key_ab = (a, b) if a < b else (b, a)
        c = counts.get(key_ab, 0)
        counts[key_ab] = c + 1
        pattern = pattern.with_edge(key_ab[0], key_ab[1], 1)
        stored = path if a == key_ab[0] else tuple(reversed(path))
        out_paths[(key_ab[0], key_ab[1], c)] = tuple(stored)
    return SubdivisionWitness(pattern, branch_map, out_paths)


def _walk_paths(m: MultiGraph, branch: set) -> Optional[List[Tuple[int, ...]]]:
    used: Dict[Tuple[int, int], int] = {}

    def take(x, y):
        pair = (x, y) if x < y else (y, x)
        used[pair] = used.get(pair, 0) + 1

    def free(x, y):
        pair = (x, y) if x < y else (y, x)
        return m.multiplicity(x, y) - used.get(pair, 0)

    paths: List[Tuple[int, ...]] = []
    for b in sorted(branch):
        for nbr in m.neighbors(b):
            while free(b, nbr) > 0:
                path = [b]
                prev, cur = b, nbr
                take(b, nbr)
                while cur not in branch:
                    path.append(cur)
                    nxt = None
                    for w in m.neighbors(cur):
                        if free(cur, w) > 0:
                            nxt = w
                            break
                    if nxt is None:
                        raise GraphError("witness_from_subgraph: dangling walk at %d" % cur)
                    take(cur, nxt)
                    prev, cur = cur, nxt
                path.append(cur)
                if cur == b and len(path) > 2:
                    mid = path[len(path) // 2]
                    branch.add(mid)
                    return None
                if cur == b:
                    raise GraphError("witness_from_subgraph: loop walk")
                paths.append(tuple(path))
    if sum(len(p) - 1 for p in paths) != m.m():
        raise GraphError("witness_from_subgraph: edges left uncovered")
    return paths


# -- JSON ------------------------------------------------------------------------


def witness_to_obj(w: SubdivisionWitness) -> dict:
    return {
        "pattern": graph_to_obj(w.pattern),
        "branch_map": {str(k): v for k, v in sorted(w.branch_map.items())},
        "paths": [
            {"edge": [a, b, c], "path": list(p)} for (a, b, c), p in sorted(w.paths.items())
        ],
    }


def witness_from_obj(obj: dict) -> SubdivisionWitness:
    return SubdivisionWitness(
        graph_from_obj(obj["pattern"]),
        {int(k): v for k, v in obj["branch_map"].items()},
        {tuple(e["edge"]): tuple(e["path"]) for e in obj["paths"]},
    )


def packing_to_obj(cert: PackingCert) -> dict:
    return {"mode": cert.mode, "witnesses": [witness_to_obj(w) for w in cert.witnesses]}


def packing_from_obj(obj: dict) -> PackingCert:
    return PackingCert(
        tuple(witness_from_obj(w) for w in obj["witnesses"]), check_mode(obj["mode"])
    )


def cover_to_obj(cert: CoverCert) -> dict:
    if cert.mode == "v":
        return {"mode": "v", "elements": list(cert.vertex_elements)}
    return {"mode": "e", "elements": [[u, v] for u, v in cert.edge_elements]}


def cover_from_obj(obj: dict) -> CoverCert:
    mode = check_mode(obj["mode"])
    if mode == "v":
        return CoverCert("v", vertex_elements=tuple(obj["elements"]))
    return CoverCert("e", edge_elements=tuple((u, v) for u, v in obj["elements"]))
