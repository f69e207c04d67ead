"""Protrusion reduction: shrink a graph without changing pack or cover.

Two sub-reductions drive it.  A bag with many folio-equivalent child chunks
can lose one of them (high-degree case); a long root-to-leaf path contains
two nested chunks with equal folios, and the outer one can be replaced by
the inner (long-path case, via protrusion replacement).  Both return a
smaller host together with lift recipes that map packings and coverings of
the smaller graph back to the original at equal size.

The equivalence-class thresholds are configuration: the worst-case constants
behind them are astronomically large, while the reductions' correctness is
threshold-independent (and oracle-checked by the acceptance suite).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import folio as folio_mod
from . import oracle
from .boundaried import BoundariedGraph
from .certificates import (
    CoverCert,
    PackingCert,
    SubdivisionWitness,
    witness_from_subgraph,
)
from .errors import GraphError, PreconditionError, ReductionFailed
from .folio import (
    FOLIO_EDGE_CAP,
    FOLIO_INTERIOR_CAP,
    PieceRealization,
    compress_piece,
    compute_folio,
    enumerate_pieces,
    members_for_folio,
)
from .hfamily import HCollection
from .multigraph import MultiGraph, are_isomorphic, canonical_key
from .treepartition import PartitionedProtrusion, RootedTreePartition, cross_edges

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ReduceConfig:
    eqclass_bound: int = 3       # path length before we look for an equivalent pair
    intersect_bound: int = 3     # equivalent siblings tolerated before deletion
    child_edge_cap: int = FOLIO_EDGE_CAP
    newred_threshold: int = 8    # reduce applies only above this many interior vertices

    @property
    def maxdeg_bound(self) -> int:
        return self.eqclass_bound * self.intersect_bound


@dataclass
class ReducedHost:
    host: MultiGraph
    dec: Optional[RootedTreePartition]
    lift_packing: Callable[[PackingCert], PackingCert]
    lift_cover: Callable[[CoverCert], CoverCert]
    info: str = ""


def _freeness_graph(g: MultiGraph, H: HCollection) -> MultiGraph:
    """Multiplicities above h never help a subdivision; cap them first."""
    return g.with_capped_multiplicities(max(H.h, 1))


def _find_hit(g: MultiGraph, H: HCollection) -> Optional[SubdivisionWitness]:
    capped = _freeness_graph(g, H)
    if H.theta_r is not None:
        from . import detect

        return detect.theta_minor_witness(capped, H.theta_r)
    return oracle.find_subdivision(capped, H)


# -- chunks: boundaried subtree pieces with explicit crossing bookkeeping ------------


@dataclass(frozen=True)
class Chunk:
    bg: BoundariedGraph
    crossings: Tuple[Tuple[int, int, int], ...] = ()
    # per label (1-based order): (outside endpoint, inside endpoint, host copy idx)

    def label_of_stub(self) -> Dict[int, int]:
        return dict(self.bg.labels)


def make_chunk(host: MultiGraph, region: Set[int]) -> Chunk:
    """Split ``region`` out of the host with deterministic labels 1..q."""
    crossings = []
    for (u, v), mult in host.edge_items():
        if (u in region) != (v in region):
            inside, outside = (u, v) if u in region else (v, u)
            for c in range(mult):
                crossings.append((inside, outside, c))
    crossings.sort()
    g = host.subgraph(region)
    base = max(host.vertices, default=-1) + 1
    boundary = {}
    labels = {}
    triples = []
    for i, (inside, outside, c) in enumerate(crossings):
        b = base + i
        g = g.with_vertices([b]).with_edge(inside, b)
        boundary[b] = inside
        labels[b] = i + 1
        triples.append((outside, inside, c))
    bg = BoundariedGraph(g, frozenset(boundary), labels)
    return Chunk(bg, tuple(triples))


def chunk_class_key(chunk: Chunk, H: HCollection, t: int) -> tuple:
    """Folio fingerprint canonicalized over boundary label permutations."""
    labels = sorted(chunk.bg.label_set())
    best = None
    for perm in itertools.permutations(labels):
        mapping = dict(zip(labels, perm))
        relabeled = BoundariedGraph(
            chunk.bg.graph,
            chunk.bg.boundary,
            {b: mapping[l] for b, l in chunk.bg.labels.items()},
        )
        f = compute_folio(relabeled, H, rho=t, t=t)
        key = repr(f.fingerprint)
        if best is None or key < best:
            best = key
    return ("chunk-class", len(labels), best)


# -- high-degree reduction -------------------------------------------------------------


def reduce_high_degree(
    pp: PartitionedProtrusion,
    host: MultiGraph,
    u: int,
    H: HCollection,
    config: ReduceConfig = ReduceConfig(),
):
    """Either a subdivision threaded through u's subtree, or the host minus
    one of many folio-equivalent child chunks."""
    kids = pp.dec.children()[u]
    if len(kids) <= config.maxdeg_bound:
        raise PreconditionError(
            "reduce_high_degree: %d children at %r, need more than %d"
            % (len(kids), u, config.maxdeg_bound)
        )
    regions = {v: pp.dec.region(v) for v in kids}
    for v in kids:
        sub = host.subgraph(regions[v])
        if sub.m() > config.child_edge_cap:
            raise PreconditionError(
                "reduce_high_degree: child %r has %d edges, cap %d"
                % (v, sub.m(), config.child_edge_cap)
            )
    # a hit inside some child short-circuits
    for v in kids:
        w = _find_hit(host.subgraph(regions[v]), H)
        if w is not None:
            return w
    # a hit threaded through u's bag would make the deletion unsound
    w = _find_hit(host.subgraph(pp.dec.region(u)), H)
    if w is not None:
        return w
    t = pp.t
    counts: Dict[tuple, List[int]] = {}
    chosen: Optional[int] = None
    for v in kids:
        chunk = make_chunk(host, regions[v])
        key = chunk_class_key(chunk, H, t)
        counts.setdefault(key, []).append(v)
        if len(counts[key]) >= config.intersect_bound + 1:
            chosen = v
            break
    if chosen is None:
        raise ReductionFailed(
            "reduce_high_degree: no class reached %d members" % (config.intersect_bound + 1)
        )
    gone = set(regions[chosen])
    new_host = host.without_vertices(gone)
    new_dec = pp.dec.drop_subtree(chosen)

    def lift_packing(cert: PackingCert) -> PackingCert:
        ok, why = oracle.verify_certificate(host, cert, H)
        if not ok:
            raise GraphError("high-degree lift: packing does not transfer: %s" % why)
        return cert

    def lift_cover(cert: CoverCert) -> CoverCert:
        ok, _why = oracle.verify_certificate(host, cert, H)
        if ok:
            return cert
        # the deleted chunk re-routes some hits; recompute at oracle scale and
        # pad to the same size so the accounting stays intact
        value, exact = oracle.exact_cover(host, H, cert.mode)
        if value > cert.size():
            raise GraphError("high-degree lift: cover size would grow")
        pad = cert.size() - value
        if cert.mode == "v":
            extra = [v for v in sorted(host.vertices) if v not in exact.vertex_elements][:pad]
            return CoverCert("v", vertex_elements=exact.vertex_elements + tuple(extra))
        pool = []
        used: Dict[Pair, int] = {}
        for p in exact.edge_elements:
            used[p] = used.get(p, 0) + 1
        for (a, b), mult in host.edge_items():
            free = mult - used.get((a, b), 0)
            pool.extend([(a, b)] * free)
        return CoverCert("e", edge_elements=exact.edge_elements + tuple(pool[:pad]))

    return ReducedHost(
        new_host,
        new_dec,
        lift_packing,
        lift_cover,
        info="dropped child %r (%d vertices)" % (chosen, len(gone)),
    )


# -- long-path reduction ------------------------------------------------------------


@dataclass
class _Replacement:
    out_vertices: Tuple[int, ...]          # label -> outside endpoint (1-based index 0..)
    old_in: Tuple[int, ...]                # label -> inside endpoint in the outer region
    new_in: Tuple[int, ...]                # label -> inside endpoint in the inner region
    outer_region: FrozenSet[int]
    inner_region: FrozenSet[int]
    chunk_outer: Chunk
    chunk_inner_relabeled: BoundariedGraph
    outer_node: Optional[int] = None
    inner_node: Optional[int] = None


def _relabel(bg: BoundariedGraph, mapping: Dict[int, int]) -> BoundariedGraph:
    return BoundariedGraph(bg.graph, bg.boundary, {b: mapping[l] for b, l in bg.labels.items()})


def reduce_long_path(
    pp: PartitionedProtrusion,
    host: MultiGraph,
    u: int,
    H: HCollection,
    config: ReduceConfig = ReduceConfig(),
) -> "ReducedHost":
    """Replace an outer chunk on a root-to-leaf path by an equivalent nested
    inner chunk, strictly shrinking the host."""
    heights = pp.dec.heights()
    if heights[u] < config.eqclass_bound:
        raise PreconditionError(
            "reduce_long_path: height %d at %r is below the class bound %d"
            % (heights[u], u, config.eqclass_bound)
        )
    interior_u = host.subgraph(pp.dec.region(u))
    hit = _find_hit(interior_u, H)
    if hit is not None:
        raise PreconditionError("reduce_long_path: the subtree graph is not pattern-free")
    # deepest path below u
    kids = pp.dec.children()
    path = [u]
    while kids[path[-1]]:
        nxt = max(kids[path[-1]], key=lambda c: (heights[c], -c))
        path.append(nxt)
    t = pp.t
    # region sizes in one bottom-up pass; only folio-scale chunks can match
    sizes: Dict[int, int] = {}
    order: List[int] = []
    stack = [u]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(kids[x])
    for x in reversed(order):
        sizes[x] = len(pp.dec.bags[x]) + sum(sizes[c] for c in kids[x])
    candidates = [n for n in path if sizes[n] <= FOLIO_INTERIOR_CAP]
    for i, outer in enumerate(
        n for n in path if n in set(candidates)
    ):
        below = [n for n in candidates if n in set(path[path.index(outer) + 1 :])]
        for inner in reversed(below):
            rep = _try_replacement(pp, host, outer, inner, H, t, config)
            if rep is not None:
                return _apply_replacement(pp, host, rep, H, t)
    raise ReductionFailed("reduce_long_path: no folio-equivalent nested pair on the path")


def _try_replacement(pp, host, outer, inner, H, t, config) -> Optional[_Replacement]:
    r_out = pp.dec.region(outer)
    r_in = pp.dec.region(inner)
    if not (set(r_in) < set(r_out)):
        return None
    c_out = make_chunk(host, set(r_out))
    c_in = make_chunk(host, set(r_in))
    if len(c_out.crossings) != len(c_in.crossings):
        return None
    if c_out.bg.m() > config.child_edge_cap or c_in.bg.m() > config.child_edge_cap:
        return None
    if c_out.bg.n() > FOLIO_INTERIOR_CAP or c_in.bg.n() > FOLIO_INTERIOR_CAP:
        return None
    literal = HCollection.literal(*members_for_folio(H))
    if not oracle.is_free(_freeness_graph(c_out.bg.interior_graph(), H), literal):
        return None
    if not oracle.is_free(_freeness_graph(c_in.bg.interior_graph(), H), literal):
        return None
    labels = sorted(c_out.bg.label_set())
    f_out = compute_folio(c_out.bg, H, rho=t, t=t)
    for perm in itertools.permutations(labels):
        mapping = dict(zip(sorted(c_in.bg.label_set()), perm))
        relabeled = _relabel(c_in.bg, mapping)
        f_in = compute_folio(relabeled, H, rho=t, t=t)
        if f_in.fingerprint == f_out.fingerprint:
            # crossing triple for label l sits at position l-1 after relabeling
            inv = {v: k for k, v in mapping.items()}
            new_in = []
            for l in labels:
                orig_label = inv[l]
                new_in.append(c_in.crossings[orig_label - 1][1])
            return _Replacement(
                tuple(c[0] for c in c_out.crossings),
                tuple(c[1] for c in c_out.crossings),
                tuple(new_in),
                frozenset(r_out),
                frozenset(r_in),
                c_out,
                relabeled,
                outer_node=outer,
                inner_node=inner,
            )
    return None


def _apply_replacement(pp, host, rep: _Replacement, H, t) -> ReducedHost:
    gone = set(rep.outer_region) - set(rep.inner_region)
    if not gone:
        raise ReductionFailed("replacement would not shrink the host")
    new_host = host.without_vertices(gone)
    for out_v, in_v in zip(rep.out_vertices, rep.new_in):
        new_host = new_host.with_edge(out_v, in_v, 1)
    # updated decomposition: graft the inner subtree where the outer hung
    dec = pp.dec
    outer_node, inner_node = rep.outer_node, rep.inner_node
    new_dec = None
    if outer_node is not None and inner_node is not None:
        keep_gone = dec.descendants(outer_node) - dec.descendants(inner_node)
        parent = {n: p for n, p in dec.parent.items() if n not in keep_gone}
        parent[inner_node] = dec.parent[outer_node]
        bags = {n: b for n, b in dec.bags.items() if n not in keep_gone}
        new_root = inner_node if dec.parent[outer_node] is None else dec.root
        new_dec = RootedTreePartition(new_root, parent, bags)

    lift_p = _make_packing_lift(host, new_host, rep, H, t)
    lift_c = _make_cover_lift(host, new_host, rep, H, t)
    return ReducedHost(
        new_host,
        new_dec,
        lift_p,
        lift_c,
        info="replaced chunk of %d vertices by nested chunk of %d"
        % (len(rep.outer_region), len(rep.inner_region)),
    )


# -- lift recipes for the replacement --------------------------------------------------


@dataclass
class _Run:
    path_key: Tuple[int, int, int]
    start: int                    # index in the path where the inside run starts
    end: int                      # index where it ends (inclusive)
    entry_label: Optional[int]    # crossing label used to enter (None: path starts inside)
    exit_label: Optional[int]
    segments: List[Tuple[tuple, Tuple[int, ...]]]  # (old kappa occ, chunk path)


class _WitnessDecomposition:
    """Phase one of the replacement lift: clip one witness at an inner region."""

    def __init__(self, witness, region: Set[int], chunk_in: BoundariedGraph, slots):
        # slots: per crossing pair, the list of unused labels
        self.witness = witness
        self.region = set(region)
        self.chunk_in = chunk_in
        self.stub_of_label = {l: b for b, l in chunk_in.labels.items()}
        self.runs: List[_Run] = []
        edges: Dict[Pair, int] = {}
        trace = frozenset(
            v for v in witness.branch_map.values() if v in self.region
        )
        for key in sorted(witness.paths):
            path = witness.paths[key]
            i = 0
            while i < len(path):
                if path[i] not in self.region:
                    i += 1
                    continue
                j = i
                while j + 1 < len(path) and path[j + 1] in self.region:
                    j += 1
                entry = None
                if i > 0:
                    entry = self._take_slot(slots, path[i - 1], path[i])
                exit_ = None
                if j < len(path) - 1:
                    exit_ = self._take_slot(slots, path[j + 1], path[j])
                chunk_path = []
                if entry is not None:
                    chunk_path.append(self.stub_of_label[entry])
                chunk_path.extend(path[i : j + 1])
                if exit_ is not None:
                    chunk_path.append(self.stub_of_label[exit_])
                for x, y in zip(chunk_path, chunk_path[1:]):
                    pair = (x, y) if x < y else (y, x)
                    edges[pair] = edges.get(pair, 0) + 1
                self.runs.append(_Run(key, i, j, entry, exit_, segments=[]))
                i = j + 1
        self.edges = edges
        self.trace = trace

    @staticmethod
    def _take_slot(slots, outside, inside) -> int:
        key = (outside, inside)
        if not slots.get(key):
            raise GraphError("replacement lift: no crossing slot left for %s" % (key,))
        return slots[key].pop(0)

    def empty(self) -> bool:
        return not self.edges

    def piece(self) -> BoundariedGraph:
        verts = {x for pair in self.edges for x in pair}
        g = MultiGraph(verts, [(u, v, c) for (u, v), c in self.edges.items()])
        boundary = frozenset(v for v in verts if v in self.chunk_in.boundary)
        labels = {b: self.chunk_in.labels[b] for b in boundary}
        return BoundariedGraph(g, boundary, labels)

    def attach_segments(self, seg_paths: Dict[tuple, Tuple[int, ...]]) -> None:
        """Cut every run at its anchors and match the chunks' chains."""
        lookup: Dict[Tuple[int, ...], List[tuple]] = {}
        for occ, p in seg_paths.items():
            lookup.setdefault(tuple(p), []).append(occ)
            lookup.setdefault(tuple(reversed(p)), []).append(occ)
        anchors = set(self.trace) | set(self.piece().boundary)
        for run in self.runs:
            path = self.witness.paths[run.path_key]
            chunk_path = []
            if run.entry_label is not None:
                chunk_path.append(self.stub_of_label[run.entry_label])
            chunk_path.extend(path[run.start : run.end + 1])
            if run.exit_label is not None:
                chunk_path.append(self.stub_of_label[run.exit_label])
            seg: List[int] = [chunk_path[0]]
            for v in chunk_path[1:]:
                seg.append(v)
                if v in anchors:
                    key = tuple(seg)
                    cands = lookup.get(key)
                    if not cands:
                        raise GraphError("replacement lift: unmatched chain %s" % (key,))
                    occ = cands.pop(0)
                    rev = tuple(reversed(key))
                    if rev != key:
                        lookup[rev].remove(occ)
                    run.segments.append((occ, key))
                    seg = [v]
            if len(seg) != 1:
                raise GraphError("replacement lift: run does not end at an anchor")


def _find_kappa_iso(
    old: BoundariedGraph, new: BoundariedGraph
) -> Optional[Dict[int, int]]:
    """Label-respecting isomorphism old -> new between compressed pieces."""
    if sorted(old.labels.values()) != sorted(new.labels.values()):
        return None
    if old.n() != new.n() or old.m() != new.m():
        return None
    base = {new.boundary_of_label(l): old.boundary_of_label(l) for l in new.label_set()}
    old_interior = sorted(old.interior())
    new_interior = sorted(new.interior())
    for perm in itertools.permutations(new_interior):
        phi = {o: n for o, n in zip(old_interior, perm)}
        phi.update({old.boundary_of_label(l): new.boundary_of_label(l) for l in old.label_set()})
        ok = True
        for (u, v), mult in old.graph.edge_items():
            if new.graph.multiplicity(phi[u], phi[v]) != mult:
                ok = False
                break
        if ok:
            for (u, v), mult in new.graph.edge_items():
                inv = {b: a for a, b in phi.items()}
                if old.graph.multiplicity(inv[u], inv[v]) != mult:
                    ok = False
                    break
        if ok:
            return phi
    return None


def _match_collection(
    targets: List[tuple], candidates: List[PieceRealization], mode: str, capacity: Dict[Pair, int]
) -> Optional[List[PieceRealization]]:
    """Pick pairwise x-disjoint candidates realizing the target class multiset."""
    chosen: List[PieceRealization] = []

    def fits(cand: PieceRealization) -> bool:
        if mode == "v":
            return all(not cand.vertices & p.vertices for p in chosen)
        use: Dict[Pair, int] = {}
        for p in chosen + [cand]:
            for pair, c in p.edges:
                use[pair] = use.get(pair, 0) + c
        return all(c <= capacity.get(pair, 0) for pair, c in use.items())

    def rec(i: int) -> bool:
        if i == len(targets):
            return True
        for cand in candidates:
            if repr(cand.kappa_canon) != targets[i]:
                continue
            if not fits(cand):
                continue
            chosen.append(cand)
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    if rec(0):
        return list(chosen)
    return None


def _make_packing_lift(host, new_host, rep: _Replacement, H, t):
    chunk_out = rep.chunk_outer
    chunk_in = rep.chunk_inner_relabeled
    crossing_w: Dict[int, Tuple[int, int]] = {
        l + 1: (rep.out_vertices[l], rep.old_in[l]) for l in range(len(rep.out_vertices))
    }

    def lift(cert: PackingCert) -> PackingCert:
        slots: Dict[Tuple[int, int], List[int]] = {}
        for l in range(len(rep.out_vertices)):
            key = (rep.out_vertices[l], rep.new_in[l])
            slots.setdefault(key, []).append(l + 1)
            slots.setdefault((key[1], key[0]), slots[key])
        decs: List[Optional[_WitnessDecomposition]] = []
        targets: List[tuple] = []
        per_witness_kappa = []
        for w in cert.witnesses:
            dec = _WitnessDecomposition(w, set(rep.inner_region), chunk_in, slots)
            if dec.empty():
                decs.append(None)
                per_witness_kappa.append(None)
                continue
            piece = dec.piece()
            kappa, segs = compress_piece(piece, dec.trace)
            dec.attach_segments(segs)
            decs.append(dec)
            canon = folio_mod.kappa_canonical(kappa, dec.trace)
            targets.append(repr(canon))
            per_witness_kappa.append(kappa)
        if not targets:
            ok, why = oracle.verify_certificate(host, cert, H)
            if not ok:
                raise GraphError("replacement lift: untouched packing invalid: %s" % why)
            return cert
        candidates = enumerate_pieces(chunk_out.bg, H, t)
        capacity = {pair: mult for pair, mult in chunk_out.bg.graph.edge_items()}
        # match in one joint pass so disjointness is respected
        order = [i for i, d in enumerate(decs) if d is not None]
        matched = _match_collection(
            [targets[k] for k in range(len(targets))],
            candidates,
            cert.mode,
            capacity,
        )
        if matched is None:
            raise GraphError("replacement lift: no matching piece collection in the outer chunk")
        new_witnesses: List[SubdivisionWitness] = []
        ti = 0
        for wi, w in enumerate(cert.witnesses):
            dec = decs[wi]
            if dec is None:
                new_witnesses.append(w)
                continue
            cand = matched[ti]
            ti += 1
            new_witnesses.append(
                _rebuild_witness(w, dec, per_witness_kappa[wi], cand, chunk_out, crossing_w, H, t)
            )
        out = PackingCert(tuple(new_witnesses), cert.mode)
        ok, why = oracle.verify_certificate(host, out, H)
        if not ok:
            raise GraphError("replacement lift: lifted packing invalid: %s" % why)
        return out

    return lift


def _rebuild_witness(
    w: SubdivisionWitness,
    dec: _WitnessDecomposition,
    kappa_old: BoundariedGraph,
    cand: PieceRealization,
    chunk_out: Chunk,
    crossing_w: Dict[int, Tuple[int, int]],
    H,
    t,
) -> SubdivisionWitness:
    piece_new = folio_mod._sub_boundaried(chunk_out.bg, dict(cand.edges))
    kappa_new, segs_new = compress_piece(piece_new, cand.trace)
    phi = _find_kappa_iso(kappa_old, kappa_new)
    if phi is None:
        raise GraphError("replacement lift: compressed pieces not isomorphic after match")
    # expand: kappa_new occurrence -> concrete path in host coordinates
    stub_to_out = {
        chunk_out.bg.boundary_of_label(l): crossing_w[l][0] for l in chunk_out.bg.label_set()
    }

    def host_path(occ_new) -> Tuple[int, ...]:
        p = segs_new[occ_new]
        return tuple(stub_to_out.get(x, x) for x in p)

    # map old kappa occurrences to new ones (respecting phi, matching copies in order)
    occ_map: Dict[tuple, tuple] = {}
    used: Dict[Pair, int] = {}
    for (a, b, c) in sorted(kappa_old.graph.edge_occurrences()):
        na, nb = phi[a], phi[b]
        lo, hi = (na, nb) if na < nb else (nb, na)
        idx = used.get((lo, hi), 0)
        used[(lo, hi)] = idx + 1
        occ_map[(a, b, c)] = (lo, hi, idx)

    # phi in host coordinates for trace vertices
    trace_map = {v: phi[v] for v in dec.trace}

    new_paths = dict(w.paths)
    for key in sorted(w.paths):
        runs = [r for r in dec.runs if r.path_key == key]
        if not runs:
            continue
        path = list(w.paths[key])
        rebuilt: List[int] = []
        pos = 0
        for run in sorted(runs, key=lambda r: r.start):
            rebuilt.extend(path[pos : run.start])
            first = True
            for occ_old, chunk_path in run.segments:
                img = host_path(occ_map[occ_old])
                a_old = chunk_path[0]
                if a_old in kappa_old.boundary:
                    want_first = crossing_w[kappa_old.labels[a_old]][0]
                else:
                    want_first = phi[a_old]
                if img[0] != want_first:
                    img = tuple(reversed(img))
                if first:
                    rebuilt.extend(img)
                    first = False
                else:
                    rebuilt.extend(img[1:])
            pos = run.end + 1
        rebuilt.extend(path[pos:])
        # collapse accidental duplicate junctions at crossing vertices
        cleaned = [rebuilt[0]]
        for v in rebuilt[1:]:
            if v != cleaned[-1]:
                cleaned.append(v)
        new_paths[key] = tuple(cleaned)
    new_branch = {
        p: (trace_map.get(v, v)) for p, v in w.branch_map.items()
    }
    return SubdivisionWitness(w.pattern, new_branch, new_paths)


def _make_cover_lift(host, new_host, rep: _Replacement, H, t):
    chunk_out = rep.chunk_outer
    chunk_in = rep.chunk_inner_relabeled
    q = len(rep.out_vertices)
    rerouted_pairs: Dict[Pair, List[int]] = {}
    for l in range(q):
        pair = (rep.out_vertices[l], rep.new_in[l])
        pair = pair if pair[0] < pair[1] else (pair[1], pair[0])
        rerouted_pairs.setdefault(pair, []).append(l + 1)

    def lift(cert: CoverCert) -> CoverCert:
        mode = cert.mode
        inner = set(rep.inner_region)
        if mode == "v":
            inside = [v for v in cert.vertex_elements if v in inner]
            outside = [v for v in cert.vertex_elements if v not in inner]
            s_chunk: List = list(inside)
        else:
            inside_pairs: List[Pair] = []
            outside_e: List[Pair] = []
            slots = {pair: list(ls) for pair, ls in rerouted_pairs.items()}
            for (u, v) in cert.edge_elements:
                pair = (u, v) if u < v else (v, u)
                if pair[0] in inner and pair[1] in inner:
                    inside_pairs.append(pair)
                elif pair in slots and slots[pair]:
                    l = slots[pair].pop(0)
                    stub = chunk_in.boundary_of_label(l)
                    (attach,) = chunk_in.graph.neighbors(stub)
                    sp = (stub, attach) if stub < attach else (attach, stub)
                    inside_pairs.append(sp)
                else:
                    outside_e.append(pair)
            s_chunk = inside_pairs
            outside = outside_e
        size_s = len(s_chunk)
        if size_s > t:
            # sever the outer chunk instead: its q <= t crossings kill every
            # hit that enters, and the chunk itself is pattern-free
            if mode == "v":
                sever = list(dict.fromkeys(rep.old_in))
                lifted = list(outside) + sever
                pad_pool = [v for v in sorted(host.vertices) if v not in lifted]
            else:
                sever = [
                    tuple(sorted((rep.out_vertices[l], rep.old_in[l]))) for l in range(q)
                ]
                lifted = list(outside) + sever
                pad_pool = []
                used: Dict[Pair, int] = {}
                for p in lifted:
                    used[p] = used.get(p, 0) + 1
                for (a, b), mult in host.edge_items():
                    free = mult - used.get((a, b), 0)
                    pad_pool.extend([(a, b)] * free)
            pad = cert.size() - len(lifted)
            if pad < 0:
                raise GraphError("cover lift: severing grew the cover")
            lifted = lifted + list(pad_pool[:pad])
        else:
            target = folio_mod.mu_hat_fingerprint(chunk_in, mode, tuple(s_chunk), H, t)
            replacement = None
            if mode == "v":
                universe = sorted(chunk_out.bg.interior())
            else:
                universe = [
                    (u, v) for (u, v, _c) in chunk_out.bg.graph.edge_occurrences()
                ]
            for s_new in itertools.combinations(universe, size_s):
                got = folio_mod.mu_hat_fingerprint(chunk_out.bg, mode, tuple(s_new), H, t)
                if got == target:
                    replacement = list(s_new)
                    break
            if replacement is None:
                raise GraphError("cover lift: no matching deletion set in the outer chunk")
            if mode == "v":
                lifted = list(outside) + replacement
            else:
                mapped = []
                for (u, v) in replacement:
                    if u in chunk_out.bg.boundary or v in chunk_out.bg.boundary:
                        stub = u if u in chunk_out.bg.boundary else v
                        l = chunk_out.bg.labels[stub]
                        mapped.append(tuple(sorted(crossing_pair(rep, l))))
                    else:
                        mapped.append((u, v))
                lifted = list(outside) + mapped
        if mode == "v":
            out = CoverCert("v", vertex_elements=tuple(sorted(lifted)))
        else:
            out = CoverCert("e", edge_elements=tuple(sorted(lifted)))
        ok, why = oracle.verify_certificate(host, out, H)
        if not ok:
            raise GraphError("cover lift: lifted cover invalid: %s" % why)
        if out.size() != cert.size():
            raise GraphError("cover lift: size changed")
        return out

    return lift


def crossing_pair(rep: _Replacement, label: int) -> Tuple[int, int]:
    return (rep.out_vertices[label - 1], rep.old_in[label - 1])


# -- top-level dispatch ------------------------------------------------------------------


def reduce(
    pp: PartitionedProtrusion,
    host: MultiGraph,
    H: HCollection,
    config: ReduceConfig = ReduceConfig(),
):
    """Either a subdivision of the host or a strictly smaller host with the
    same pack and cover numbers (both modes), with lift recipes attached.

    DFS heights drive the dispatch: a low, very wide bag goes to the
    high-degree rule; otherwise a node at the class-count height goes to the
    long-path rule.  Raises ReductionFailed when neither applies (extensional
    equivalence classes cannot promise a hit at toy thresholds).
    """
    if pp.bg.n() <= config.newred_threshold:
        raise PreconditionError(
            "reduce: %d interior vertices is not above the threshold %d"
            % (pp.bg.n(), config.newred_threshold)
        )
    heights = pp.dec.heights()
    kids = pp.dec.children()
    failures: List[str] = []

    wide = [
        n
        for n in pp.dec.nodes()
        if len(kids[n]) > config.maxdeg_bound and heights[n] <= config.eqclass_bound - 1
    ]
    wide.sort(key=lambda n: (heights[n], n))
    for n in wide:
        try:
            return reduce_high_degree(pp, host, n, H, config)
        except (PreconditionError, ReductionFailed) as exc:
            failures.append(str(exc))

    tall = sorted(
        (n for n in pp.dec.nodes() if heights[n] == config.eqclass_bound),
        key=lambda n: -len(pp.dec.descendants(n)),
    )
    if not tall:
        deepest = max(heights.values(), default=0)
        tall = sorted(
            (n for n in pp.dec.nodes() if heights[n] == deepest and deepest >= 1),
            key=lambda n: -len(pp.dec.descendants(n)),
        )
    for n in tall:
        try:
            return reduce_long_path(pp, host, n, H, config)
        except (PreconditionError, ReductionFailed) as exc:
            failures.append(str(exc))

    raise ReductionFailed(
        "reduce: no rule applied (%s)" % ("; ".join(failures) if failures else "no candidates")
    )


# -- constructive cover on bounded tree-partition width ------------------------------------


@dataclass
class BoundedTpwResult:
    cover: CoverCert
    progress: int            # subdivisions deleted along the way
    reductions: int
    residual_size: int


def bounded_tpw_cover(
    g: MultiGraph,
    d: RootedTreePartition,
    H: HCollection,
    mode: str = "v",
    config: ReduceConfig = ReduceConfig(),
) -> BoundedTpwResult:
    """Progress-or-reduce until the graph is small, then take the whole
    residual: a cover of size at most (|P|+1) * threshold-ish with |P| bounded
    by the packing number."""
    from .treepartition import protrusion_from_host, tpw_validate

    tpw_validate(g, d)
    t = max(
        max((len(b) for b in d.bags.values()), default=1),
        max(
            (cross_edges(g, d.bags[u], d.bags[p]) for u, p in d.tree_edges()),
            default=1,
        ),
        1,
    )
    work = g
    dec = d
    steps: List[Tuple[str, object]] = []
    progress = 0
    reductions = 0
    while work.n() > config.newred_threshold:
        dec = dec.restricted_to(set(work.vertices))
        try:
            pp = protrusion_from_host(work, dec, t)
            outcome = reduce(pp, work, H, config)
        except (GraphError, PreconditionError, ReductionFailed):
            break
        if isinstance(outcome, SubdivisionWitness):
            progress += 1
            if mode == "v":
                victims = tuple(sorted(outcome.vertex_set()))
                steps.append(("progress-v", victims))
                work = work.without_vertices(victims)
            else:
                occs = []
                for pair, c in sorted(outcome.edge_usage().items()):
                    occs.extend([pair] * c)
                steps.append(("progress-e", tuple(occs)))
                work = work.without_edge_occurrences(occs)
        else:
            reductions += 1
            if outcome.dec is None:
                break
            steps.append(("reduce", outcome))
            work = outcome.host
            dec = outcome.dec
    # residual cover: everything that can still lie on a hit
    residual = work
    while True:
        drop = [v for v in residual.vertices if residual.degree(v) < 2]
        if not drop:
            break
        residual = residual.without_vertices(drop)
    if mode == "v":
        cover = CoverCert("v", vertex_elements=tuple(sorted(residual.vertices)))
    else:
        occs = []
        for (u, v), mult in residual.edge_items():
            occs.extend([(u, v)] * mult)
        cover = CoverCert("e", edge_elements=tuple(sorted(occs)))
    # fold the cover back through the recorded steps
    for kind, payload in reversed(steps):
        if kind == "progress-v":
            cover = CoverCert(
                "v", vertex_elements=tuple(sorted(cover.vertex_elements + payload))
            )
        elif kind == "progress-e":
            cover = CoverCert(
                "e", edge_elements=tuple(sorted(cover.edge_elements + payload))
            )
        else:
            cover = payload.lift_cover(cover)  # type: ignore[union-attr]
    ok, why = oracle.verify_certificate(g, cover, H)
    if not ok:
        raise GraphError("bounded_tpw_cover: emitted cover invalid: %s" % why)
    return BoundedTpwResult(cover, progress, reductions, residual.n())
