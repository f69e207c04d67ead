"""Reduce-or-progress driver and the O(log OPT) approximation.

For a trial value k, the driver repeatedly asks the structure finder for a
small hit (progress: delete it), a large protrusion (reduce: shrink the
graph, pack and cover preserved), or a dense minor (win: extract a full
k-packing).  Accumulated certificates are folded back through the recorded
steps so that the final packing or covering verifies against the original
host.  A binary search over k with endpoint confirmation yields the
approximation of all four parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import detect, oracle
from .certificates import CoverCert, PackingCert, SubdivisionWitness
from .degree_packing import greedy_epack, lift_packing, vpack_from_degree
from .errors import GraphError, OracleSizeError, PreconditionError, ReductionFailed
from .hfamily import HCollection
from .multigraph import MultiGraph
from .reduce import ReduceConfig, ReducedHost, reduce
from .structure import DenseMinor, Exhausted, Protrusion, SmallSubdivision, find_structure
from .treepartition import PartitionedProtrusion

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ApproxConfig:
    w: int = 8                      # protrusion size budget (stand-in for the closed form)
    oracle_fallback_cap: int = 16   # exhausted drivers fall back to the oracle below this
    reduce_config: ReduceConfig = field(default_factory=lambda: ReduceConfig(newred_threshold=8))
    batch_threshold: int = 600      # batched progress sweeps above this size (r=2)
    appx_k_cap: int = 4096


def z_budget(r: int, w: int, k: int) -> int:
    """Edge budget for one progress step (ceiling; log base 2)."""
    if r < 2 or k < 1 or w < 2:
        raise PreconditionError("z_budget: need r >= 2, w >= 2, k >= 1")
    return math.ceil(2 * r * (w - 1) * math.log2(k * (r + 1) * (r - 1)) + 5 * r)


def z_budget_exact(r: int, w: int, k: int) -> float:
    """Pre-ceiling value, for the budget identity tests."""
    return 2 * r * (w - 1) * math.log2(k * (r + 1) * (r - 1)) + 5 * r


def appx_constant(r: int, config: ApproxConfig = ApproxConfig()) -> int:
    """Measured covering-rate constant: the largest per-progress deletion the
    driver can emit, normalized by log k (the +1 covers vertex-mode counts,
    the oracle fallback cap is dominated by it)."""
    best = 0.0
    for k in range(1, config.appx_k_cap + 1):
        z = z_budget(r, config.w, k)
        ratio = (z + 1) / max(1.0, math.log2(k) if k > 1 else 1.0)
        if ratio > best:
            best = ratio
        if k > 8 and ratio < best / 4:
            break
    return math.ceil(max(best, config.oracle_fallback_cap + 1))


def covering_budget(r: int, k: int, config: ApproxConfig = ApproxConfig()) -> float:
    return appx_constant(r, config) * max(1.0, k * math.log2(k) if k > 1 else 1.0)


# -- pump: one application of the structure finder -----------------------------------


@dataclass
class PumpProgress:
    witness: SubdivisionWitness


@dataclass
class PumpReduced:
    reduced: ReducedHost


@dataclass
class PumpDense:
    dense: DenseMinor


@dataclass
class PumpExhausted:
    reason: str
    free_certified: bool = False


def pump(host: MultiGraph, mode: str, r: int, k: int, config: ApproxConfig = ApproxConfig()):
    """Per-component structure finding with t = 2r-2 and the proof's budgets."""
    if r < 2:
        raise PreconditionError("pump: r must be >= 2")
    z = z_budget(r, config.w, k)
    target = k * (r + 1)
    H = HCollection.thetas(r)
    reasons = []
    all_free = True
    for comp in sorted(host.components(), key=lambda c: min(c)):
        sub = host.subgraph(comp)
        if sub.m() == 0:
            continue
        if sub.m() < z:
            capped = sub.with_capped_multiplicities(max(r, 2))
            if r >= 4 and capped.n() > max(config.oracle_fallback_cap, 16):
                reasons.append("component too large for exhaustive r=%d detection" % r)
                all_free = False
                continue
            w = detect.theta_minor_witness(capped, r, cap=max(capped.n(), 16))
            if w is not None:
                return PumpProgress(w)
            continue  # component certified free
        all_free = False
        out = find_structure(sub, r, config.w, z, target)
        if isinstance(out, SmallSubdivision):
            return PumpProgress(out.witness)
        if isinstance(out, DenseMinor):
            return PumpDense(out)
        if isinstance(out, Protrusion):
            try:
                red = reduce(out.pp, host, H, config.reduce_config)
            except (PreconditionError, ReductionFailed) as exc:
                reasons.append("reduce failed: %s" % exc)
                continue
            if isinstance(red, SubdivisionWitness):
                if red.edge_count() <= z:
                    return PumpProgress(red)
                reasons.append("reduce found an oversized hit")
                continue
            return PumpReduced(red)
        reasons.append(out.reason)
    if reasons:
        return PumpExhausted("; ".join(reasons), free_certified=False)
    return PumpExhausted("all components are pattern-free", free_certified=all_free)


# -- the k-indexed packing-or-covering loop -------------------------------------------


@dataclass
class ApproxOutcome:
    kind: str                       # "packing" or "covering"
    packing: Optional[PackingCert]
    covering: Optional[CoverCert]
    trace: Tuple[Tuple[str, str], ...]


def _delete_witness(g: MultiGraph, w: SubdivisionWitness, mode: str) -> MultiGraph:
    if mode == "v":
        return g.without_vertices(w.vertex_set())
    occs: List[Pair] = []
    for pair, c in sorted(w.edge_usage().items()):
        occs.extend([pair] * c)
    return g.without_edge_occurrences(occs)


def _batch_cycles(g: MultiGraph, mode: str, z: int, want: int) -> List[SubdivisionWitness]:
    """One BFS-forest sweep collecting up to ``want`` x-disjoint short cycles."""
    out: List[SubdivisionWitness] = []
    used_v: set = set()
    used_e: Dict[Pair, int] = {}
    for (u, v), mult in g.edge_items():
        if len(out) >= want:
            return out
        if mult >= 2 and u not in used_v and v not in used_v:
            w = detect.cycle_witness([u, v])
            out.append(w)
            used_v.update([u, v])
            used_e[(u, v)] = used_e.get((u, v), 0) + 2
    parent: Dict[int, Optional[int]] = {}
    depth: Dict[int, int] = {}
    for root in sorted(g.vertices):
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        frontier = [root]
        while frontier:
            nxt = []
            for x in frontier:
                for y in g.neighbors(x):
                    if y in parent:
                        if y == parent[x]:
                            continue
                        if depth[x] + depth[y] + 1 > z:
                            continue
                        px = detect._path_to_root(parent, x)
                        py = detect._path_to_root(parent, y)
                        sy = set(py)
                        lca = next((q for q in px if q in sy), None)
                        if lca is None:
                            continue
                        cyc = px[: px.index(lca) + 1] + list(
                            reversed(py[: py.index(lca)])
                        )
                        if len(cyc) < 2 or len(cyc) > z:
                            continue
                        if mode == "v" and any(q in used_v for q in cyc):
                            continue
                        closed = cyc + [cyc[0]]
                        pairs = [
                            (a, b) if a < b else (b, a) for a, b in zip(closed, closed[1:])
                        ]
                        if mode == "e" and any(
                            used_e.get(p, 0) + 1 > g.multiplicity(*p) for p in pairs
                        ):
                            continue
                        if len(set(cyc)) != len(cyc):
                            continue
                        out.append(detect.cycle_witness(cyc))
                        used_v.update(cyc)
                        for p in pairs:
                            used_e[p] = used_e.get(p, 0) + 1
                        if len(out) >= want:
                            return out
                    else:
                        parent[y] = x
                        depth[y] = depth[x] + 1
                        nxt.append(y)
            frontier = nxt
    return out


def pack_or_cover(
    host: MultiGraph,
    mode: str,
    r: int,
    k: int,
    config: ApproxConfig = ApproxConfig(),
    build_packing: bool = True,
) -> ApproxOutcome:
    """Progress / Win / Reduce loop; certificates fold back to the host."""
    if k < 1:
        raise PreconditionError("pack_or_cover: k must be >= 1")
    H = HCollection.thetas(r)
    g = host
    steps: List[Tuple[str, object]] = []
    trace: List[Tuple[str, str]] = []
    progress_count = 0
    win_cert: Optional[PackingCert] = None
    win_full = False  # a full-size win packing ignores earlier progress hits
    z = z_budget(r, config.w, k)

    while True:
        if progress_count >= k:
            break
        if g.m() == 0:
            break
        if r == 2 and g.n() > config.batch_threshold:
            batch = _batch_cycles(g, mode, z, k - progress_count)
            if batch:
                bulk_v: List[int] = []
                bulk_e: List[Pair] = []
                for w in batch:
                    steps.append(("progress", w))
                    trace.append(("progress", "batched cycle of %d edges" % w.edge_count()))
                    if mode == "v":
                        bulk_v.extend(w.vertex_set())
                    else:
                        for pair, c in w.edge_usage().items():
                            bulk_e.extend([pair] * c)
                    progress_count += 1
                g = (
                    g.without_vertices(bulk_v)
                    if mode == "v"
                    else g.without_edge_occurrences(bulk_e)
                )
                continue
        out = pump(g, mode, r, k, config)
        if isinstance(out, PumpProgress):
            steps.append(("progress", out.witness))
            trace.append(("progress", "hit with %d edges" % out.witness.edge_count()))
            g = _delete_witness(g, out.witness, mode)
            progress_count += 1
            continue
        if isinstance(out, PumpReduced):
            steps.append(("reduce", out.reduced))
            trace.append(("reduce", out.reduced.info))
            g = out.reduced.host
            continue
        if isinstance(out, PumpDense):
            trace.append(("win", "dense minor with degree %d" % out.dense.min_degree))
            win_full = True
            if not build_packing:
                win_cert = PackingCert((), mode)  # existence marker
                break
            win_cert = _win_packing(g, out.dense, mode, r, k)
            break
        # exhausted
        if out.free_certified:
            break  # pattern-free remainder: the covering is complete
        if g.n() <= config.oracle_fallback_cap:
            trace.append(("fallback", "oracle on %d vertices" % g.n()))
            need = k - progress_count
            value, cert = oracle.exact_pack(g, H, mode, cap=config.oracle_fallback_cap)
            if value >= need:
                if build_packing:
                    win_cert = PackingCert(tuple(cert.witnesses[:need]), mode)
                else:
                    win_cert = PackingCert((), mode)
                break
            _cv, ccert = oracle.exact_cover(g, H, mode, cap=config.oracle_fallback_cap)
            steps.append(("oracle-cover", ccert))
            g = ccert.apply(g)
            break
        raise OracleSizeError(
            "pack_or_cover: structure finder exhausted on %d vertices: %s"
            % (g.n(), out.reason)
        )

    if progress_count >= k or win_cert is not None:
        if not build_packing:
            return ApproxOutcome("packing", None, None, tuple(trace))
        cert = win_cert if win_cert is not None else PackingCert((), mode)
        for kind, payload in reversed(steps):
            if kind == "progress":
                if not win_full:
                    cert = PackingCert((payload,) + cert.witnesses, mode)  # type: ignore[operator]
            elif kind == "reduce":
                cert = payload.lift_packing(cert)  # type: ignore[union-attr]
            # oracle-cover steps cannot appear on the packing path
        if cert.size() > k:
            cert = PackingCert(cert.witnesses[:k], mode)
        ok, why = oracle.verify_certificate(host, cert, H)
        if not ok:
            raise GraphError("pack_or_cover: emitted packing invalid: %s" % why)
        if cert.size() < k:
            raise GraphError("pack_or_cover: packing smaller than requested")
        return ApproxOutcome("packing", cert, None, tuple(trace))

    # covering: fold back
    cover = CoverCert(mode)
    for kind, payload in reversed(steps):
        if kind == "progress":
            w: SubdivisionWitness = payload  # type: ignore[assignment]
            if mode == "v":
                cover = CoverCert(
                    "v",
                    vertex_elements=tuple(sorted(cover.vertex_elements + tuple(w.vertex_set()))),
                )
            else:
                occs: List[Pair] = []
                for pair, c in sorted(w.edge_usage().items()):
                    occs.extend([pair] * c)
                cover = CoverCert(
                    "e", edge_elements=tuple(sorted(cover.edge_elements + tuple(occs)))
                )
        elif kind == "oracle-cover":
            oc: CoverCert = payload  # type: ignore[assignment]
            if mode == "v":
                cover = CoverCert(
                    "v", vertex_elements=tuple(sorted(cover.vertex_elements + oc.vertex_elements))
                )
            else:
                cover = CoverCert(
                    "e", edge_elements=tuple(sorted(cover.edge_elements + oc.edge_elements))
                )
        else:
            cover = payload.lift_cover(cover)  # type: ignore[union-attr]
    ok, why = oracle.verify_certificate(host, cover, H)
    if not ok:
        raise GraphError("pack_or_cover: emitted covering invalid: %s" % why)
    return ApproxOutcome("covering", None, cover, tuple(trace))


def _win_packing(g: MultiGraph, dense: DenseMinor, mode: str, r: int, k: int) -> PackingCert:
    identity = all(len(s) == 1 for s in dense.model.values())
    target = HCollection.thetas(r)
    if identity and mode == "e":
        inner = greedy_epack(dense.h_graph, k, r)
    else:
        inner = vpack_from_degree(dense.h_graph, k, r)
        if mode == "e":
            inner = PackingCert(inner.witnesses, "e")  # vertex-disjoint is edge-disjoint
    lifted = lift_packing(g, dense.model, dense.h_graph, inner, target=target)
    return PackingCert(tuple(lifted.witnesses[:k]), mode)


# -- existence bit and binary search ----------------------------------------------------


def exists_bit(
    host: MultiGraph, mode: str, r: int, k: int, config: ApproxConfig = ApproxConfig()
) -> Tuple[int, ApproxOutcome]:
    """0 certifies a size-k packing exists; 1 certifies a small covering."""
    out = pack_or_cover(host, mode, r, k, config, build_packing=False)
    return (0 if out.kind == "packing" else 1), out


@dataclass
class ApproxResult:
    k0: int
    value: float
    appx: int
    probes: Tuple[Tuple[int, int], ...]    # (k, bit) in probe order
    covering: Optional[CoverCert]
    trace: Tuple[Tuple[str, str], ...]


def approximate(
    host: MultiGraph, mode: str, r: int, config: ApproxConfig = ApproxConfig()
) -> ApproxResult:
    """Binary search for the flip point of the existence bit; the answer
    sandwiches both the packing and covering numbers."""
    if r < 2:
        raise PreconditionError("approximate: r must be >= 2")
    n = max(host.n(), 1)
    cache: Dict[int, Tuple[int, ApproxOutcome]] = {}
    probes: List[Tuple[int, int]] = []

    def bit(k: int) -> int:
        if k not in cache:
            cache[k] = exists_bit(host, mode, r, k, config)
            probes.append((k, cache[k][0]))
        return cache[k][0]

    lo, hi = 1, n + 1
    if bit(lo) == 1:
        k0 = 1
    else:
        while bit(hi) == 0:
            hi += max(1, hi // 2)  # soundness guard; bit(k) = 0 certifies pack >= k
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if bit(mid) == 1:
                hi = mid
            else:
                lo = mid
        k0 = hi
        # confirm the flip; the bit need not be monotone in the overlap zone
        while k0 > 1 and bit(k0 - 1) == 1:
            k0 -= 1
        while bit(k0) == 0:
            k0 += 1
    appx = appx_constant(r, config)
    value = appx * max(1.0, k0 * math.log2(k0) if k0 > 1 else 1.0)
    covering = cache[k0][1].covering
    trace = cache[k0][1].trace
    return ApproxResult(k0, value, appx, tuple(probes), covering, trace)
