"""Partial-subdivision signatures for boundaried graphs.

A piece of a subdivision that crosses the boundary of a split-off chunk is
summarized by its *compression*: dissolve every interior vertex that is
neither a branch-vertex trace nor a boundary stub.  The folio of a
boundaried graph records, for every small deletion set, which multisets of
compressed pieces are simultaneously realizable as an x-disjoint partial
packing; two chunks with position-wise isomorphic folios are exchangeable
without changing any packing or covering number.

Realizability of a single piece is decided against the canonical extender
gadget: a clique on n(H)+t vertices with one private port per boundary
label, each port adjacent to the whole clique.  A guided search assigns the
compressed piece's edges to pattern-edge slots and is then materialized
into an explicit subdivision of the glued graph and re-verified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import oracle
from .boundaried import BoundariedGraph, glue_with_maps
from .certificates import SubdivisionWitness, verify_witness_structure
from .errors import GraphError, OracleSizeError
from .hfamily import HCollection, theta_graph
from .multigraph import MultiGraph, canonical_key, dissolve

Pair = Tuple[int, int]

FOLIO_INTERIOR_CAP = 9
FOLIO_EDGE_CAP = 14


def members_for_folio(H: HCollection) -> Tuple[MultiGraph, ...]:
    """Concrete patterns usable by the piece machinery.

    Theta expansion families are materializable for r <= 3 where minor and
    topological minor coincide; beyond that the reduction machinery reports
    unavailability and the driver falls back.
    """
    if H.theta_r is not None:
        if H.theta_r <= 3:
            return (theta_graph(H.theta_r),)
        raise OracleSizeError(
            "piece machinery needs materialized patterns; theta_%d expansions are not"
            % H.theta_r
        )
    if H.theta_double_rs is not None:
        r, rp = H.theta_double_rs
        if max(r, rp) <= 3:
            from .hfamily import double_theta_graph

            return (double_theta_graph(r, rp),)
        raise OracleSizeError("double-theta expansions are not materialized")
    return H.members


def family_key(H: HCollection) -> tuple:
    return tuple(sorted(canonical_key(m) for m in members_for_folio(H)))


# -- compression (kappa) ------------------------------------------------------------


def compress_piece(
    j: BoundariedGraph, trace: FrozenSet[int]
) -> Tuple[BoundariedGraph, Dict[Tuple[int, int, int], Tuple[int, ...]]]:
    """Dissolve interior non-trace vertices; also return, per compressed edge
    occurrence, the original path it stands for (endpoints included)."""
    interior = j.interior()
    bad = [v for v in trace if v not in interior]
    if bad:
        raise GraphError("compress_piece: trace %s outside the interior" % sorted(bad))
    to_dissolve = set(interior) - set(trace)
    for v in to_dissolve:
        if j.graph.degree(v) != 2:
            raise GraphError(
                "compress_piece: interior vertex %d has degree %d but is not traced"
                % (v, j.graph.degree(v))
            )
    kept = set(trace) | set(j.boundary)
    # walk chains to record the original paths
    paths: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
    counts: Dict[Pair, int] = {}
    used: Dict[Pair, int] = {}

    def free(x, y):
        pair = (x, y) if x < y else (y, x)
        return j.graph.multiplicity(x, y) - used.get(pair, 0)

    def take(x, y):
        pair = (x, y) if x < y else (y, x)
        used[pair] = used.get(pair, 0) + 1

    for a in sorted(kept):
        for nbr in j.graph.neighbors(a):
            while free(a, nbr) > 0:
                walk = [a]
                take(a, nbr)
                cur = nbr
                while cur in to_dissolve:
                    walk.append(cur)
                    nxt = None
                    for w in j.graph.neighbors(cur):
                        if free(cur, w) > 0:
                            nxt = w
                            break
                    if nxt is None:
                        raise GraphError("compress_piece: dangling chain at %d" % cur)
                    take(cur, nxt)
                    cur = nxt
                walk.append(cur)
                if cur == a:
                    raise GraphError("compress_piece: chain closes into a loop at %d" % a)
                if cur not in kept:
                    raise GraphError("compress_piece: chain ends at a foreign vertex")
                lo, hi = (a, cur) if a < cur else (cur, a)
                if a > cur:
                    continue  # record each chain from its smaller kept endpoint
                c = counts.get((lo, hi), 0)
                counts[(lo, hi)] = c + 1
                paths[(lo, hi, c)] = tuple(walk)
    if sum(len(p) - 1 for p in paths.values()) != j.graph.m():
        raise GraphError("compress_piece: some edges belong to no boundary-anchored chain")
    small = dissolve(j.graph, to_dissolve)
    kappa = BoundariedGraph(small, j.boundary, dict(j.labels))
    return kappa, paths


def kappa_canonical(kappa: BoundariedGraph, trace_like: FrozenSet[int]) -> tuple:
    colors: Dict[int, object] = {b: ("B", kappa.labels[b]) for b in kappa.boundary}
    for v in kappa.interior():
        colors[v] = "T"
    return canonical_key(kappa.graph, colors)


# -- the extender gadget -------------------------------------------------------------


@dataclass(frozen=True)
class Gadget:
    bg: BoundariedGraph
    ports: Dict[int, int] = field(compare=False)  # label -> port vertex
    clique: Tuple[int, ...] = ()


def extender_gadget(labels: Iterable[int], H: HCollection, t: int) -> Gadget:
    """Clique on n(H)+t vertices; one port per label adjacent to every clique
    vertex; the boundary stub of each label hangs off its port."""
    labels = sorted(labels)
    members = members_for_folio(H)
    c = sum(m.n() for m in members) + t
    clique = tuple(range(c))
    g = MultiGraph(clique, [(i, j) for i in clique for j in clique if i < j])
    ports = {}
    boundary = {}
    nxt = c
    for l in labels:
        port, stub = nxt, nxt + 1
        nxt += 2
        g = g.with_vertices([port, stub])
        for q in clique:
            g = g.with_edge(port, q)
        g = g.with_edge(port, stub)
        ports[l] = port
        boundary[stub] = l
    bg = BoundariedGraph(g, frozenset(boundary), boundary)
    return Gadget(bg, ports, clique)


# -- the guided assignment engine ------------------------------------------------------


@dataclass
class _Assignment:
    member_index: int
    psi: Dict[int, int]  # kappa interior -> pattern vertex
    edge_slots: Dict[Tuple[int, int, int], Tuple[Tuple[int, int, int], str]]
    # kappa edge occ -> (pattern edge occ, role in {"full", "end_a", "end_b", "mid"})
    middles: Dict[Tuple[int, int, int], int]  # pattern occ -> middle count
    outside: Tuple[int, ...]  # pattern vertices hosted in the clique


def _kappa_edge_classes(kappa: BoundariedGraph):
    interior = kappa.interior()
    ll, lb, bb = [], [], []
    for occ in kappa.graph.edge_occurrences():
        u, v, c = occ
        ui, vi = u in interior, v in interior
        if ui and vi:
            ll.append(occ)
        elif ui or vi:
            lb.append(occ)
        else:
            bb.append(occ)
    return ll, lb, bb


def realize_kappa(kappa: BoundariedGraph, H: HCollection, t: int) -> Optional[_Assignment]:
    """Can this compressed piece extend to a full pattern subdivision through
    the canonical gadget?  Returns a slot assignment when yes."""
    members = members_for_folio(H)
    clique_size = sum(m.n() for m in members) + t
    interior = sorted(kappa.interior())
    ll, lb, bb = _kappa_edge_classes(kappa)
    for mi, pattern in enumerate(members):
        pverts = sorted(pattern.vertices)
        if len(interior) > len(pverts):
            continue
        occs = list(pattern.edge_occurrences())
        for psi_img in itertools.permutations(pverts, len(interior)):
            psi = dict(zip(interior, psi_img))
            if any(kappa.graph.degree(v) != pattern.degree(psi[v]) for v in interior):
                continue
            asg = _assign_edges(kappa, pattern, psi, occs, ll, lb)
            if asg is None:
                continue
            full = _capacity_check(
                kappa, pattern, psi, occs, asg, len(bb), clique_size
            )
            if full is not None:
                middles, outside = full
                return _Assignment(mi, psi, asg_with_bb(asg, bb, middles), middles, outside)
    return None


def asg_with_bb(asg, bb, middles):
    out = dict(asg)
    pool = []
    for occ, cnt in sorted(middles.items()):
        pool.extend([occ] * cnt)
    for e, occ in zip(sorted(bb), pool):
        out[e] = (occ, "mid")
    return out


def _assign_edges(kappa, pattern, psi, occs, ll, lb):
    """Backtracking assignment of interior-incident compressed edges to
    pattern-edge slots."""
    interior = set(kappa.interior())
    state: Dict[Tuple[int, int, int], List] = {
        occ: ["free", {occ[0]: False, occ[1]: False}] for occ in occs
    }
    # slot bookkeeping: state[occ][0] in {"free", "full"}; [1]: end used per side

    def occ_between(a, b):
        lo, hi = (a, b) if a < b else (b, a)
        return [o for o in occs if (o[0], o[1]) == (lo, hi)]

    def occ_at(a):
        return [o for o in occs if a in (o[0], o[1])]

    edges = [(e, "ll") for e in sorted(ll)] + [(e, "lb") for e in sorted(lb)]
    chosen: Dict[Tuple[int, int, int], Tuple[Tuple[int, int, int], str]] = {}

    def rec(i):
        if i == len(edges):
            # every interior-mapped endpoint of every non-full occurrence must
            # have its end slot taken
            for occ in occs:
                st = state[occ]
                if st[0] == "full":
                    continue
                for side in (occ[0], occ[1]):
                    if side in psi.values():
                        if not st[1][side]:
                            return False
            return True
        e, kind = edges[i]
        u, v, _c = e
        if kind == "ll":
            a, b = psi[u], psi[v]
            for occ in occ_between(a, b):
                st = state[occ]
                if st[0] == "full" or st[1][occ[0]] or st[1][occ[1]]:
                    continue
                state[occ] = ["full", st[1]]
                chosen[e] = (occ, "full")
                if rec(i + 1):
                    return True
                state[occ] = st
                del chosen[e]
            return False
        ell = u if u in interior else v
        a = psi[ell]
        for occ in occ_at(a):
            st = state[occ]
            if st[0] == "full" or st[1][a]:
                continue
            new_ends = dict(st[1])
            new_ends[a] = True
            state[occ] = [st[0], new_ends]
            chosen[e] = (occ, "end_a" if occ[0] == a else "end_b")
            if rec(i + 1):
                return True
            state[occ] = st
            del chosen[e]
        return False

    if rec(0):
        return dict(chosen)
    return None


def _capacity_check(kappa, pattern, psi, occs, asg, n_bb, clique_size):
    """Distribute the boundary-to-boundary middles and count gadget demand."""
    mapped = set(psi.values())
    outside = tuple(v for v in sorted(pattern.vertices) if v not in mapped)
    ends: Dict[Tuple[int, int, int], int] = {occ: 0 for occ in occs}
    fulls: Set[Tuple[int, int, int]] = set()
    for e, (occ, role) in asg.items():
        if role == "full":
            fulls.add(occ)
        else:
            ends[occ] += 1
    open_occs = [occ for occ in occs if occ not in fulls]
    best = None
    for combo in itertools.combinations_with_replacement(range(len(open_occs)), n_bb):
        mid = {occ: 0 for occ in open_occs}
        for idx in combo:
            mid[open_occs[idx]] += 1
        links = 0
        pure: Dict[Pair, int] = {}
        ok = True
        for occ in open_occs:
            s = ends[occ] + mid[occ]
            a_in, b_in = occ[0] in mapped, occ[1] in mapped
            if (a_in or b_in) and s == 0:
                # an occurrence with an inside endpoint must start inside
                ok = False
                break
            links += max(0, s - 1)
            if not a_in and not b_in and s == 0:
                key = (occ[0], occ[1])
                pure[key] = pure.get(key, 0) + 1
        if not ok:
            continue
        extras = sum(max(0, cnt - 1) for cnt in pure.values())
        demand = len(outside) + links + extras
        if demand <= clique_size:
            cand = ({occ: mid[occ] for occ in open_occs}, outside)
            if best is None:
                best = cand
                break
    if best is None:
        return None
    return best


# -- materialization ------------------------------------------------------------------


def materialize_extension(
    j: BoundariedGraph, trace: FrozenSet[int], H: HCollection, t: int
) -> Optional[Tuple[MultiGraph, SubdivisionWitness]]:
    """Glue ``j`` to the gadget and produce a verified pattern subdivision
    whose intersection with ``j`` is exactly ``j`` with branch trace ``trace``."""
    try:
        kappa, seg_paths = compress_piece(j, trace)
    except GraphError:
        return None
    asg = realize_kappa(kappa, H, t)
    if asg is None:
        return None
    members = members_for_folio(H)
    pattern = members[asg.member_index]
    gadget = extender_gadget(sorted(j.label_set()), H, t)
    host, shift = glue_with_maps(j, gadget.bg)
    ports = {l: shift[p] for l, p in gadget.ports.items()}
    clique = [shift[q] for q in gadget.clique]

    # branch placement
    free_clique = [q for q in clique]
    branch_map: Dict[int, int] = {}
    for v, pv in asg.psi.items():
        branch_map[pv] = v
    for pv in asg.outside:
        branch_map[pv] = free_clique.pop()

    # segment expansion: kappa edge -> concrete path in the glued host
    def seg_to_host(e) -> List[int]:
        path = list(seg_paths[e])
        out = []
        for x in path:
            if x in j.boundary:
                out.append(ports[j.labels[x]])
            else:
                out.append(x)
        return out

    by_occ: Dict[Tuple[int, int, int], List[Tuple[str, List[int]]]] = {}
    for e, (occ, role) in asg.edge_slots.items():
        by_occ.setdefault(occ, []).append((role, seg_to_host(e)))

    paths: Dict[Tuple[int, int, int], Tuple[int, ...]] = {}
    for occ in pattern.edge_occurrences():
        a, b, _c = occ
        ta, tb = branch_map[a], branch_map[b]
        segs = by_occ.get(occ, [])
        fulls = [s for r, s in segs if r == "full"]
        if fulls:
            seg = fulls[0]
            if seg[0] != ta:
                seg = list(reversed(seg))
            paths[occ] = tuple(seg)
            continue
        heads = [s for r, s in segs if r == "end_a"]
        tails = [s for r, s in segs if r == "end_b"]
        mids = [list(s) for r, s in segs if r == "mid"]
        pieces: List[List[int]] = []
        if heads:
            seg = list(heads[0])
            if seg[0] != ta:
                seg.reverse()
            pieces.append(seg)
        pieces.extend(mids)
        if tails:
            seg = list(tails[0])
            if seg[-1] != tb:
                seg.reverse()
            pieces.append(seg)
        if not pieces:
            # entirely outside: direct clique edge or one fresh hop
            if host.multiplicity(ta, tb) > 0 and not _direct_used(paths, ta, tb):
                paths[occ] = (ta, tb)
            else:
                hop = free_clique.pop()
                paths[occ] = (ta, hop, tb)
            continue
        if heads:
            out_path = list(pieces[0])
            rest = pieces[1:]
        else:
            out_path = [ta]  # outside branch sits in the clique, ports are adjacent
            rest = pieces
        for seg in rest:
            if out_path == [ta]:
                out_path.append(seg[0])
            else:
                hop = free_clique.pop()  # port-to-port runs need a private hop
                out_path.extend([hop, seg[0]])
            out_path.extend(seg[1:])
        if not tails:
            out_path.append(tb)
        paths[occ] = tuple(out_path)

    witness = SubdivisionWitness(pattern.copy(), branch_map, paths)
    ok, why = verify_witness_structure(host, witness)
    if not ok:
        raise GraphError("internal: materialized extension invalid: %s" % why)
    # intersection with j must be exactly j
    expected: Dict[Pair, int] = {}
    for (u, v), mult in j.graph.edge_items():
        uu = ports[j.labels[u]] if u in j.boundary else u
        vv = ports[j.labels[v]] if v in j.boundary else v
        pair = (uu, vv) if uu < vv else (vv, uu)
        expected[pair] = expected.get(pair, 0) + mult
    usage = witness.edge_usage()
    j_side = set(j.interior())
    for pair, cnt in expected.items():
        if usage.get(pair, 0) != cnt:
            raise GraphError("internal: extension does not use j exactly")
    for pair, cnt in usage.items():
        if (pair[0] in j_side or pair[1] in j_side) and expected.get(pair, 0) != cnt:
            raise GraphError("internal: extension uses extra edges inside j")
    got_trace = {v for v in witness.branch_map.values() if v in j_side}
    if got_trace != set(trace):
        raise GraphError("internal: extension trace mismatch")
    return host, witness


def _direct_used(paths, a, b) -> bool:
    pair = (a, b) if a < b else (b, a)
    for p in paths.values():
        for x, y in zip(p, p[1:]):
            if ((x, y) if x < y else (y, x)) == pair:
                return True
    return False


# -- piece enumeration -----------------------------------------------------------------

_realize_cache: Dict[tuple, bool] = {}


def _realizable(kappa: BoundariedGraph, H: HCollection, t: int) -> bool:
    key = (kappa_canonical(kappa, frozenset()), family_key(H), t)
    hit = _realize_cache.get(key)
    if hit is None:
        hit = realize_kappa(kappa, H, t) is not None
        _realize_cache[key] = hit
    return hit


def partial_subdivision_test(
    j: BoundariedGraph, H: HCollection, t: int, certify: bool = False
) -> List[BoundariedGraph]:
    """All compressed forms kappa(j, L) over branch traces L that extend to a
    full pattern subdivision through the canonical gadget.

    Empty list means no compatible extension exists.  With ``certify`` the
    gadget extension is materialized and re-verified for each form.
    """
    if j.n() > FOLIO_INTERIOR_CAP or j.m() > FOLIO_EDGE_CAP:
        raise OracleSizeError("partial_subdivision_test: piece above folio scale")
    interior = j.interior()
    forced = frozenset(v for v in interior if j.graph.degree(v) != 2)
    optional = sorted(interior - forced)
    out: List[BoundariedGraph] = []
    seen: Set[tuple] = set()
    for rsize in range(len(optional) + 1):
        for extra in itertools.combinations(optional, rsize):
            trace = forced | frozenset(extra)
            try:
                kappa, _segs = compress_piece(j, trace)
            except GraphError:
                continue
            canon = kappa_canonical(kappa, trace)
            if canon in seen:
                continue
            if not _realizable(kappa, H, t):
                continue
            if certify and materialize_extension(j, trace, H, t) is None:
                continue
            seen.add(canon)
            out.append(kappa)
    return out


@dataclass(frozen=True)
class PieceRealization:
    edges: Tuple[Tuple[Pair, int], ...]      # edge sub-multiset of the chunk
    vertices: FrozenSet[int]                 # endpoints incl. used boundary
    trace: FrozenSet[int]
    kappa_canon: tuple = field(compare=False)

    def uses_vertex(self, other: "PieceRealization") -> bool:
        return bool(self.vertices & other.vertices)


def _sub_boundaried(bg: BoundariedGraph, edges: Dict[Pair, int]) -> BoundariedGraph:
    verts = {x for pair in edges for x in pair}
    sub = MultiGraph(verts, [(u, v, c) for (u, v), c in edges.items()])
    sub_boundary = frozenset(v for v in verts if v in bg.boundary)
    labels = {b: bg.labels[b] for b in sub_boundary}
    return BoundariedGraph(sub, sub_boundary, labels)


def _max_pattern_degree(H: HCollection) -> int:
    return max(
        max((m.degree(v) for v in m.vertices), default=0) for m in members_for_folio(H)
    )


def enumerate_pieces(
    bg: BoundariedGraph, H: HCollection, t: int
) -> List[PieceRealization]:
    """Every realizable (edge sub-multiset, trace) piece of the chunk, deduped
    by (footprint, compressed class)."""
    if bg.n() > FOLIO_INTERIOR_CAP or bg.m() > FOLIO_EDGE_CAP:
        raise OracleSizeError("enumerate_pieces: chunk above folio scale")
    max_deg = max(2, _max_pattern_degree(H))
    max_branch = sum(m.n() for m in members_for_folio(H))
    items = list(bg.graph.edge_items())
    ranges = [range(mult + 1) for _pair, mult in items]
    out: List[PieceRealization] = []
    seen: Set[tuple] = set()
    literal = HCollection.literal(*members_for_folio(H))
    for counts in itertools.product(*ranges):
        edges = {pair: c for (pair, _m), c in zip(items, counts) if c > 0}
        if not edges:
            continue
        sub = _sub_boundaried(bg, edges)
        interior = sub.interior()
        degs = {v: sub.graph.degree(v) for v in interior}
        if any(d > max_deg for d in degs.values()):
            continue
        if sum(1 for d in degs.values() if d != 2) > max_branch:
            continue
        # every component must reach the boundary
        if not sub.boundary:
            continue
        comps = sub.graph.components()
        if any(not (comp & sub.boundary) for comp in comps):
            continue
        # the piece itself must be pattern-free
        if not oracle.is_free(sub.interior_graph(), literal):
            continue
        forced = frozenset(v for v in interior if degs[v] != 2)
        optional = sorted(set(interior) - forced)
        for rsize in range(len(optional) + 1):
            for extra in itertools.combinations(optional, rsize):
                trace = forced | frozenset(extra)
                try:
                    kappa, _segs = compress_piece(sub, trace)
                except GraphError:
                    continue
                if kappa.n() > max_branch:
                    continue
                if not _realizable(kappa, H, t):
                    continue
                canon = kappa_canonical(kappa, trace)
                key = (tuple(sorted(edges.items())), canon)
                if key in seen:
                    continue
                seen.add(key)
                out.append(
                    PieceRealization(
                        tuple(sorted(edges.items())),
                        frozenset(sub.graph.vertices),
                        trace,
                        canon,
                    )
                )
    return out


# -- mu-hat, signatures, folios ----------------------------------------------------------


def _delete_from_chunk(bg: BoundariedGraph, mode: str, s: tuple) -> BoundariedGraph:
    """bg minus a deletion set; boundary vertices stranded at degree 0 are
    dropped together with their labels (no crossing can use them)."""
    if mode == "v":
        g = bg.graph.without_vertices(s)
    else:
        g = bg.graph.without_edge_occurrences(s)
    boundary = {b for b in bg.boundary if g.has_vertex(b) and g.degree(b) == 1}
    drop = [b for b in bg.boundary if g.has_vertex(b) and g.degree(b) == 0]
    g = g.without_vertices(drop)
    return BoundariedGraph(g, frozenset(boundary), {b: bg.labels[b] for b in boundary})


def _collections_fingerprint(
    pieces: List[PieceRealization], chunk: BoundariedGraph, mode: str, max_size: int
) -> FrozenSet[tuple]:
    """All x-disjoint piece collections, as a set of sorted kappa-class tuples."""
    found: Set[tuple] = {()}
    capacity = {pair: mult for pair, mult in chunk.graph.edge_items()}

    def fits(stack: List[PieceRealization], cand: PieceRealization) -> bool:
        if mode == "v":
            return all(not cand.vertices & p.vertices for p in stack)
        use: Dict[Pair, int] = {}
        for p in stack + [cand]:
            for pair, c in p.edges:
                use[pair] = use.get(pair, 0) + c
        return all(c <= capacity.get(pair, 0) for pair, c in use.items())

    def rec(start: int, stack: List[PieceRealization]):
        if len(stack) >= max_size:
            return
        for i in range(start, len(pieces)):
            cand = pieces[i]
            if not fits(stack, cand):
                continue
            stack.append(cand)
            found.add(tuple(sorted(repr(p.kappa_canon) for p in stack)))
            rec(i + 1, stack)
            stack.pop()

    rec(0, [])
    return frozenset(found)


def mu_hat_fingerprint(
    bg: BoundariedGraph, mode: str, s: tuple, H: HCollection, t: int
) -> FrozenSet[tuple]:
    chunk = _delete_from_chunk(bg, mode, s)
    pieces = enumerate_pieces(chunk, H, t)
    return _collections_fingerprint(pieces, chunk, mode, max_size=max(1, len(chunk.boundary)))


@dataclass(frozen=True)
class Folio:
    label_set: FrozenSet[int]
    t: int
    rho: int
    fingerprint: tuple = field(compare=True)

    def to_obj(self) -> dict:
        return {
            "labels": sorted(self.label_set),
            "t": self.t,
            "rho": self.rho,
            "fingerprint": repr(self.fingerprint),
        }


_folio_cache: Dict[tuple, Folio] = {}


def compute_folio(bg: BoundariedGraph, H: HCollection, rho: int, t: Optional[int] = None) -> Folio:
    """Signatures over both modes and every deletion budget y <= rho.

    The fingerprint is canonical: two compatible chunks have position-wise
    isomorphic folios iff their fingerprints are equal.
    """
    if t is None:
        t = max(len(bg.boundary), 1)
    cache_key = (bg.canonical(), family_key(H), rho, t)
    hit = _folio_cache.get(cache_key)
    if hit is not None:
        return hit
    sigs = []
    for mode in ("v", "e"):
        if mode == "v":
            universe: List[tuple] = sorted(bg.interior())
        else:
            universe = [(u, v) for (u, v, _c) in bg.graph.edge_occurrences()]
        for y in range(rho + 1):
            sig: Set[FrozenSet[tuple]] = set()
            for s in itertools.combinations(universe, y):
                sig.add(mu_hat_fingerprint(bg, mode, tuple(s), H, t))
            sigs.append(("sig", mode, y, frozenset(sig)))
    folio = Folio(bg.label_set(), t, rho, tuple(sigs))
    _folio_cache[cache_key] = folio
    return folio


def equivalent(
    bg1: BoundariedGraph,
    bg2: BoundariedGraph,
    H: HCollection,
    rho: Optional[int] = None,
    t: Optional[int] = None,
) -> bool:
    """Compatibility + pattern-freeness of both + position-wise folio match."""
    if bg1.label_set() != bg2.label_set():
        return False
    if t is None:
        t = max(len(bg1.boundary), 1)
    if rho is None:
        rho = t
    literal = HCollection.literal(*members_for_folio(H))
    if not oracle.is_free(bg1.interior_graph(), literal):
        return False
    if not oracle.is_free(bg2.interior_graph(), literal):
        return False
    f1 = compute_folio(bg1, H, rho, t)
    f2 = compute_folio(bg2, H, rho, t)
    return f1.fingerprint == f2.fingerprint
