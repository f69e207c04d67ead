"""Exact, exponential-time ground truth for packing and covering.

Deliberately small-scale: every polynomial algorithm in the package is
validated against these routines.  Packing enumerates an explicit family of
candidate models and solves a memoized disjoint-set packing; covering runs
iterative-deepening branching over the footprint of a found witness.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import detect
from .certificates import (
    CoverCert,
    PackingCert,
    SubdivisionWitness,
    check_mode,
    verify_cover,
    verify_packing,
    verify_witness_structure,
)
from .errors import GraphError, OracleSizeError
from .hfamily import HCollection
from .multigraph import MultiGraph

Pair = Tuple[int, int]


# -- freeness and detection -------------------------------------------------------


def find_subdivision(
    g: MultiGraph,
    H: HCollection,
    edge_budget: Optional[int] = None,
    cap: Optional[int] = None,
) -> Optional[SubdivisionWitness]:
    """A verified witness of a hit for ``H`` in ``g``, or None.

    Without ``edge_budget``, large instances are rejected (this is the
    exhaustive oracle facade, not a scalable detector; the approximation
    driver uses the detection engines directly).
    """
    if edge_budget is None:
        detect.guard_size(g, cap, "find_subdivision (unbudgeted)")
    if H.theta_r is not None:
        w = detect.theta_minor_witness(g, H.theta_r, cap, total_budget=edge_budget)
    elif H.theta_double_rs is not None:
        r, rp = H.theta_double_rs
        w = detect.double_theta_witness(g, r, rp, cap)
        if w is not None and edge_budget is not None and w.edge_count() > edge_budget:
            w = None
    else:
        w = None
        for member in sorted(H.members, key=lambda m: (m.m(), m.n())):
            if member.n() == 2:
                r = member.m()
                w = detect.theta_subdivision_witness(g, r, total_budget=edge_budget)
            else:
                w = detect.find_pattern_subdivision(g, member, edge_budget, cap)
            if w is not None:
                break
    if w is not None:
        ok, why = verify_witness_structure(g, w, edge_budget)
        if not ok:
            raise GraphError("internal: emitted witness failed verification: %s" % why)
        if not H.pattern_ok(w.pattern, cap):
            raise GraphError("internal: emitted witness pattern outside family")
    return w


def is_free(g: MultiGraph, H: HCollection, cap: Optional[int] = None) -> bool:
    if H.theta_r is not None:
        return not detect.has_theta_minor_fast(g, H.theta_r, cap)
    if H.theta_double_rs is not None:
        r, rp = H.theta_double_rs
        return not detect.has_double_theta_minor(g, r, rp, cap)
    return find_subdivision(g, H, cap=cap) is None


def has_theta_minor(g: MultiGraph, r: int, cap: Optional[int] = None) -> bool:
    """Exhaustive definition: two disjoint connected sets with >= r edges between."""
    if r < 1:
        raise GraphError("has_theta_minor: r must be >= 1")
    return detect.has_theta_minor_exhaustive(g, r, cap)


# -- model stripping helpers --------------------------------------------------------


def _strip_threshold(H: HCollection) -> int:
    # vertices of degree below this are in no hit; subdivisions have internal
    # degree 2 and branch degrees matching the member degrees
    dmin = min(
        min((mem.degree(v) for v in mem.vertices), default=1) for mem in H.members
    )
    return min(2, dmin)


def _strip(g: MultiGraph, H: HCollection) -> MultiGraph:
    thr = _strip_threshold(H)
    work = g
    while True:
        drop = [v for v in work.vertices if work.degree(v) < thr]
        if not drop:
            return work
        work = work.without_vertices(drop)


# -- model family enumeration --------------------------------------------------------


def _enumerate_cycles(g: MultiGraph) -> List[List[int]]:
    """All simple cycles (vertex sequences, smallest vertex first), plus one
    2-cycle per parallel pair."""
    cycles: List[List[int]] = []
    for (u, v), mult in g.edge_items():
        if mult >= 2:
            cycles.append([u, v])
    verts = sorted(g.vertices)
    for root in verts:
        # paths root -> x using vertices > root, closing back to root
        stack: List[Tuple[int, List[int]]] = [(root, [root])]
        while stack:
            cur, path = stack.pop()
            for w in g.neighbors(cur):
                if w == root and len(path) >= 3:
                    if path[1] < path[-1]:  # canonical orientation
                        cycles.append(list(path))
                    continue
                if w <= root or w in path:
                    continue
                stack.append((w, path + [w]))
    return cycles


def _cycle_footprints(cyc: List[int], mode: str):
    if mode == "v":
        return frozenset(cyc)
    usage: Dict[Pair, int] = {}
    closed = cyc + [cyc[0]]
    for x, y in zip(closed, closed[1:]):
        pair = (x, y) if x < y else (y, x)
        usage[pair] = usage.get(pair, 0) + 1
    return tuple(sorted(usage.items()))


def _enumerate_paths(g: MultiGraph, u: int, v: int, limit: int = 80) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = []
    stack: List[Tuple[int, List[int]]] = [(u, [u])]
    while stack:
        cur, path = stack.pop()
        for w in g.neighbors(cur):
            if w == v:
                out.append(tuple(path + [v]))
                if len(out) > limit:
                    raise OracleSizeError(
                        "theta path enumeration exceeded %d paths; instance too dense" % limit
                    )
                continue
            if w in path or w == u:
                continue
            stack.append((w, path + [w]))
    return out


def _path_usage(p: Sequence[int]) -> Dict[Pair, int]:
    usage: Dict[Pair, int] = {}
    for x, y in zip(p, p[1:]):
        pair = (x, y) if x < y else (y, x)
        usage[pair] = usage.get(pair, 0) + 1
    return usage


def _enumerate_theta_subdivisions(g: MultiGraph, r: int) -> List[List[Tuple[int, ...]]]:
    """All r-sets of internally disjoint u-v paths (direct edges may repeat up
    to their multiplicity)."""
    results: List[List[Tuple[int, ...]]] = []
    verts = sorted(v for v in g.vertices if g.degree(v) >= r)
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            paths = _enumerate_paths(g, u, v)
            if len(paths) < 1:
                continue
            paths.sort(key=lambda p: (len(p), p))
            reps = []
            for p in paths:
                cap = g.multiplicity(u, v) if len(p) == 2 else 1
                reps.append((p, set(p[1:-1]), cap))

            def extend(start: int, chosen: List[Tuple[int, ...]], internals: Set[int], usage: Dict[Pair, int]):
                if len(chosen) == r:
                    results.append(list(chosen))
                    return
                for j in range(start, len(reps)):
                    p, internal, capacity = reps[j]
                    if internal & internals:
                        continue
                    pu = _path_usage(p)
                    ok = True
                    for pair, c in pu.items():
                        if usage.get(pair, 0) + c > g.multiplicity(*pair):
                            ok = False
                            break
                    if not ok:
                        continue
                    for pair, c in pu.items():
                        usage[pair] = usage.get(pair, 0) + c
                    chosen.append(p)
                    # same index may repeat only for direct edges with capacity left
                    extend(j if len(p) == 2 else j + 1, chosen, internals | internal, usage)
                    chosen.pop()
                    for pair, c in pu.items():
                        usage[pair] -= c

            extend(0, [], set(), {})
    return results


def _theta_witness_from_paths(paths: List[Tuple[int, ...]]) -> SubdivisionWitness:
    x, y = paths[0][0], paths[0][-1]
    lo, hi = (x, y) if x < y else (y, x)
    pattern = MultiGraph([x, y], [(x, y, len(paths))])
    out = {}
    for c, p in enumerate(sorted(paths, key=lambda q: (len(q), q))):
        if p[0] != lo:
            p = tuple(reversed(p))
        out[(lo, hi, c)] = tuple(p)
    return SubdivisionWitness(pattern, {x: x, y: y}, out)


def _witness_footprint(w: SubdivisionWitness, mode: str):
    if mode == "v":
        return w.vertex_set()
    return tuple(sorted(w.edge_usage().items()))


def _generic_vertex_models(
    g: MultiGraph, H: HCollection, cap: Optional[int]
) -> List[Tuple[object, SubdivisionWitness]]:
    """Inclusion-minimal vertex sets inducing a hit, by subset sweep."""
    detect.guard_size(g, cap, "generic model enumeration")
    verts = sorted(g.vertices)
    hits: List[FrozenSet[int]] = []
    witnesses: Dict[FrozenSet[int], SubdivisionWitness] = {}
    for size in range(1, len(verts) + 1):
        for combo in itertools.combinations(verts, size):
            s = frozenset(combo)
            if any(prev <= s for prev in hits):
                continue
            sub = g.subgraph(s)
            if is_free(sub, H, cap):
                continue
            w = find_subdivision(sub, H, cap=cap)
            assert w is not None
            if w.vertex_set() != s:
                continue  # the minimal witness inside shows up at its own size
            hits.append(s)
            witnesses[s] = w
    return [(s, witnesses[s]) for s in hits]


def _generic_edge_models(
    g: MultiGraph, H: HCollection, cap: Optional[int]
) -> List[Tuple[object, SubdivisionWitness]]:
    """Inclusion-minimal edge sub-multisets carrying a hit."""
    detect.guard_size(g, cap, "generic model enumeration")
    if g.m() > 16:
        raise OracleSizeError("generic edge-model enumeration capped at 16 edges")
    items = list(g.edge_items())
    out: List[Tuple[object, SubdivisionWitness]] = []
    seen: List[Dict[Pair, int]] = []
    ranges = [range(mult + 1) for _pair, mult in items]
    for counts in itertools.product(*ranges):
        chosen = {pair: c for (pair, _m), c in zip(items, counts) if c > 0}
        if not chosen:
            continue
        if any(all(chosen.get(p, 0) >= c for p, c in prev.items()) for prev in seen):
            continue
        sub = MultiGraph(
            {x for pair in chosen for x in pair}, [(p[0], p[1], c) for p, c in chosen.items()]
        )
        if is_free(sub, H, cap):
            continue
        w = find_subdivision(sub, H, cap=cap)
        assert w is not None
        if dict(w.edge_usage()) != chosen:
            continue
        seen.append(dict(chosen))
        out.append((tuple(sorted(chosen.items())), w))
    return out


def enumerate_models(
    g: MultiGraph, H: HCollection, mode: str, cap: Optional[int] = None
) -> List[Tuple[object, SubdivisionWitness]]:
    """Candidate hit models as (footprint, witness) pairs.

    The family contains every inclusion-minimal model, which is what the
    packing recursion needs.
    """
    check_mode(mode)
    is_theta2 = H.theta_r == 2 or (
        H.theta_r is None
        and not H.expand
        and len(H.members) == 1
        and H.members[0].n() == 2
        and H.members[0].m() == 2
    )
    is_theta3 = H.theta_r == 3 or (
        H.theta_r is None
        and not H.expand
        and len(H.members) == 1
        and H.members[0].n() == 2
        and H.members[0].m() == 3
    )
    out: List[Tuple[object, SubdivisionWitness]] = []
    if is_theta2:
        seen = set()
        for cyc in _enumerate_cycles(g):
            fp = _cycle_footprints(cyc, mode)
            if mode == "v" and fp in seen:
                continue
            seen.add(fp)
            out.append((fp, detect.cycle_witness(cyc)))
        return out
    if is_theta3:
        seen = set()
        for paths in _enumerate_theta_subdivisions(g, 3):
            w = _theta_witness_from_paths(paths)
            fp = _witness_footprint(w, mode)
            if fp in seen:
                continue
            seen.add(fp)
            out.append((fp, w))
        return out
    if mode == "v":
        return _generic_vertex_models(g, H, cap)
    return _generic_edge_models(g, H, cap)


# -- disjoint set packing over the family ---------------------------------------------


def _max_disjoint_v(models: List[Tuple[FrozenSet[int], int]], universe: FrozenSet[int]):
    memo: Dict[FrozenSet[int], Tuple[int, Tuple[int, ...]]] = {}

    def rec(avail: FrozenSet[int]) -> Tuple[int, Tuple[int, ...]]:
        if avail in memo:
            return memo[avail]
        live = [(fp, i) for fp, i in models if fp <= avail]
        if not live:
            return 0, ()
        pivot = min(min(fp) for fp, _i in live)
        best = rec(avail - {pivot})
        for fp, i in live:
            if pivot in fp:
                sub_val, sub_sel = rec(avail - fp)
                if sub_val + 1 > best[0]:
                    best = (sub_val + 1, sub_sel + (i,))
        memo[avail] = best
        return best

    return rec(universe)


def _max_disjoint_e(
    models: List[Tuple[Tuple[Tuple[Pair, int], ...], int]], capacity: Dict[Pair, int]
):
    memo: Dict[Tuple, Tuple[int, Tuple[int, ...]]] = {}

    def fits(fp, cap):
        return all(cap.get(pair, 0) >= c for pair, c in fp)

    def rec(cap: Dict[Pair, int]) -> Tuple[int, Tuple[int, ...]]:
        key = tuple(sorted((p, c) for p, c in cap.items() if c > 0))
        if key in memo:
            return memo[key]
        live = [(fp, i) for fp, i in models if fits(fp, cap)]
        if not live:
            return 0, ()
        pivot = min(min(pair for pair, _c in fp) for fp, _i in live)
        reduced = dict(cap)
        reduced[pivot] = reduced.get(pivot, 0) - 1
        best = rec(reduced)
        for fp, i in live:
            if any(pair == pivot for pair, _c in fp):
                sub = dict(cap)
                for pair, c in fp:
                    sub[pair] = sub.get(pair, 0) - c
                sub_val, sub_sel = rec(sub)
                if sub_val + 1 > best[0]:
                    best = (sub_val + 1, sub_sel + (i,))
        memo[key] = best
        return best

    return rec(dict(capacity))


def exact_pack(
    g: MultiGraph, H: HCollection, mode: str, cap: Optional[int] = None
) -> Tuple[int, PackingCert]:
    """Exact maximum x-disjoint packing with an optimal certificate."""
    check_mode(mode)
    detect.guard_size(g, cap, "exact_pack")
    total = 0
    chosen: List[SubdivisionWitness] = []
    work = _strip(g, H)
    for comp in work.components():
        sub = work.subgraph(comp)
        models = enumerate_models(sub, H, mode, cap)
        if not models:
            continue
        indexed = [(fp, i) for i, (fp, _w) in enumerate(models)]
        if mode == "v":
            value, sel = _max_disjoint_v(indexed, sub.vertices)
        else:
            capacity = {pair: mult for pair, mult in sub.edge_items()}
            value, sel = _max_disjoint_e(indexed, capacity)
        total += value
        chosen.extend(models[i][1] for i in sel)
    cert = PackingCert(tuple(chosen), mode)
    ok, why = verify_packing(g, cert, pattern_check=lambda p: H.pattern_ok(p, cap))
    if not ok:
        raise GraphError("internal: exact_pack certificate invalid: %s" % why)
    return total, cert


# -- covering by iterative deepening ---------------------------------------------------


def _greedy_pack_count(g: MultiGraph, H: HCollection, mode: str, cap: Optional[int]) -> int:
    count = 0
    work = g
    while True:
        w = find_subdivision(work, H, cap=cap)
        if w is None:
            return count
        count += 1
        if mode == "v":
            work = work.without_vertices(w.vertex_set())
        else:
            occs = []
            for pair, c in w.edge_usage().items():
                occs.extend([pair] * c)
            work = work.without_edge_occurrences(occs)


def exact_cover(
    g: MultiGraph, H: HCollection, mode: str, cap: Optional[int] = None
) -> Tuple[int, CoverCert]:
    """Exact minimum x-cover with an optimal certificate."""
    check_mode(mode)
    detect.guard_size(g, cap, "exact_cover")
    work = _strip(g, H)
    elements_v: List[int] = []
    elements_e: List[Pair] = []
    for comp in work.components():
        sub = work.subgraph(comp)
        picked = _cover_component(sub, H, mode, cap)
        if mode == "v":
            elements_v.extend(picked)
        else:
            elements_e.extend(picked)
    cert = (
        CoverCert("v", vertex_elements=tuple(sorted(elements_v)))
        if mode == "v"
        else CoverCert("e", edge_elements=tuple(sorted(elements_e)))
    )
    ok, why = verify_cover(g, cert, freeness_check=lambda rem: is_free(rem, H, cap))
    if not ok:
        raise GraphError("internal: exact_cover certificate invalid: %s" % why)
    return cert.size(), cert


def _cover_component(g: MultiGraph, H: HCollection, mode: str, cap: Optional[int]) -> list:
    lb = _greedy_pack_count(g, H, mode, cap)
    failed: Set[Tuple] = set()

    def attempt(work: MultiGraph, k: int) -> Optional[list]:
        if is_free(work, H, cap):
            return []
        if k == 0:
            return None
        key = (work.key(), k)
        if key in failed:
            return None
        if _greedy_pack_count(work, H, mode, cap) > k:
            failed.add(key)
            return None
        w = find_subdivision(work, H, cap=cap)
        assert w is not None
        if mode == "v":
            options = sorted(w.vertex_set())
            for a in options:
                res = attempt(work.without_vertices([a]), k - 1)
                if res is not None:
                    return [a] + res
        else:
            options = sorted(w.edge_usage())
            for pair in options:
                res = attempt(work.without_edge_occurrences([pair]), k - 1)
                if res is not None:
                    return [pair] + res
        failed.add(key)
        return None

    max_k = len(g.vertices) if mode == "v" else g.m()
    for k in range(lb, max_k + 1):
        res = attempt(g, k)
        if res is not None:
            return res
    raise GraphError("internal: cover search failed to terminate")


# -- certificate facade ------------------------------------------------------------------


def verify_certificate(
    host: MultiGraph,
    cert,
    H: HCollection,
    edge_budget: Optional[int] = None,
    cap: Optional[int] = None,
) -> Tuple[bool, str]:
    """Re-check any certificate type against the host from scratch."""
    if isinstance(cert, SubdivisionWitness):
        ok, why = verify_witness_structure(host, cert, edge_budget)
        if not ok:
            return False, why
        if not H.pattern_ok(cert.pattern, cap):
            return False, "pattern not in the target family"
        return True, "ok"
    if isinstance(cert, PackingCert):
        return verify_packing(host, cert, pattern_check=lambda p: H.pattern_ok(p, cap))
    if isinstance(cert, CoverCert):
        return verify_cover(host, cert, freeness_check=lambda rem: is_free(rem, H, cap))
    return False, "unknown certificate type %r" % type(cert).__name__
