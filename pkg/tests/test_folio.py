import itertools

import pytest

from thetapack.boundaried import BoundariedGraph, glue
from thetapack.certificates import witness_from_subgraph
from thetapack.errors import GraphError
from thetapack.folio import (
    compress_piece,
    compute_folio,
    enumerate_pieces,
    equivalent,
    materialize_extension,
    mu_hat_fingerprint,
    partial_subdivision_test,
)
from thetapack.hfamily import HCollection
from thetapack.multigraph import MultiGraph, are_isomorphic

THETA2 = HCollection.thetas(2)
THETA3 = HCollection.thetas(3)


def stub_path(n_interior, left_label=1, right_label=2):
    """b1 - x1 - ... - xk - b2 with boundary stubs labeled."""
    verts = list(range(1, n_interior + 1))
    g = MultiGraph(verts, [(i, i + 1) for i in verts[:-1]])
    b1, b2 = 100, 101
    g = g.with_vertices([b1, b2]).with_edge(b1, verts[0]).with_edge(verts[-1], b2)
    return BoundariedGraph(g, frozenset({b1, b2}), {b1: left_label, b2: right_label})


def bare_stub(label=1):
    g = MultiGraph([0, 100], [(0, 100)])
    return BoundariedGraph(g, frozenset({100}), {100: label})


def pendant_triangle(label=1):
    # stub into x, triangle x-y-z
    g = MultiGraph([0, 1, 2, 100], [(0, 1), (1, 2), (2, 0), (0, 100)])
    return BoundariedGraph(g, frozenset({100}), {100: label})


class TestCompress:
    def test_path_compresses_to_edge(self):
        j = stub_path(3)
        kappa, paths = compress_piece(j, frozenset())
        assert kappa.n() == 0
        assert kappa.m() == 1  # single stub-to-stub edge
        (path,) = paths.values()
        assert len(path) == 5  # b1 x1 x2 x3 b2

    def test_trace_kept(self):
        j = stub_path(3)
        kappa, _ = compress_piece(j, frozenset({2}))
        assert kappa.n() == 1
        assert kappa.m() == 2

    def test_untraced_degree3_rejected(self):
        g = MultiGraph([0, 1, 2, 3, 100], [(0, 1), (0, 2), (0, 3), (0, 100)])
        j = BoundariedGraph(g, frozenset({100}), {100: 1})
        with pytest.raises(GraphError):
            compress_piece(j, frozenset())


class TestPartialSubdivisionTest:
    def test_bare_path_extendable_theta2(self):
        j = stub_path(3)
        forms = partial_subdivision_test(j, THETA2, t=2, certify=True)
        assert forms
        # the no-trace compression is a single stub-to-stub edge
        assert any(k.n() == 0 and k.m() == 1 for k in forms)
        # traces of size 1 and 2 are realizable, 3 is not (theta_2 has 2 vertices)
        sizes = sorted(k.n() for k in forms)
        assert sizes == [0, 1, 2]

    def test_isolated_interior_not_extendable(self):
        g = MultiGraph([0])
        j = BoundariedGraph(g, frozenset(), {})
        assert partial_subdivision_test(j, THETA2, t=2) == []

    def test_k4_fragment_compression(self):
        # two inside branch vertices of a K4 subdivision, four crossings
        g = MultiGraph(
            [0, 1, 2, 100, 101, 102, 103],
            [(100, 0), (101, 0), (0, 1), (102, 2), (2, 1), (103, 1)],
        )
        j = BoundariedGraph(
            g,
            frozenset({100, 101, 102, 103}),
            {100: 1, 101: 2, 102: 3, 103: 4},
        )
        k4 = MultiGraph(range(4), [(a, b) for a in range(4) for b in range(a + 1, 4)])
        fam = HCollection.literal(k4)
        forms = partial_subdivision_test(j, fam, t=4, certify=True)
        assert any(k.n() == 2 and k.m() == 5 for k in forms)

    def test_stub_into_tree_not_theta2_extendable(self):
        # a stub into a 3-star: interior degree 3 can never sit on a cycle
        g = MultiGraph([0, 1, 2, 3, 100], [(0, 1), (0, 2), (0, 3), (0, 100)])
        j = BoundariedGraph(g, frozenset({100}), {100: 1})
        assert partial_subdivision_test(j, THETA2, t=2) == []


def enumerate_extenders(labels, max_interior=3):
    """Small compatible boundaried graphs for brute-force extension checks."""
    labels = sorted(labels)
    out = []
    if len(labels) == 2:
        # bare boundary-to-boundary edge
        g = MultiGraph([200, 201], [(200, 201)])
        out.append(
            BoundariedGraph(g, frozenset({200, 201}), {200: labels[0], 201: labels[1]})
        )
    for n in range(1, max_interior + 1):
        interior = list(range(n))
        pairs = [(i, j) for i in interior for j in interior if i < j]
        for picks in itertools.product([0, 1, 2], repeat=len(pairs)):
            base = [(u, v, c) for (u, v), c in zip(pairs, picks) if c]
            for attach in itertools.product(interior, repeat=len(labels)):
                g = MultiGraph(interior, base)
                bmap = {}
                ok = True
                for idx, l in enumerate(labels):
                    b = 200 + idx
                    g = g.with_vertices([b]).with_edge(b, attach[idx])
                    bmap[b] = l
                try:
                    out.append(BoundariedGraph(g, frozenset(bmap), dict(bmap)))
                except GraphError:
                    ok = False
        if n > 2:
            break  # enough coverage; keep the sweep cheap
    return out


def is_full_subdivision(g, members):
    """Does the whole graph form a subdivision of one of the patterns?"""
    if g.n() == 0 or g.m() == 0:
        return False
    if not g.is_connected():
        return False
    try:
        w = witness_from_subgraph(g)
    except GraphError:
        return False
    return any(are_isomorphic(w.pattern, m) for m in members)


class TestGadgetAgainstBruteForce:
    @pytest.mark.parametrize(
        "piece",
        [
            stub_path(1),
            stub_path(2),
            stub_path(3),
            bare_stub(),
            pendant_triangle(),
        ],
    )
    def test_theta2_extendability_matches(self, piece):
        forms = partial_subdivision_test(piece, THETA2, t=2)
        gadget_says = bool(forms)
        brute = False
        members = [MultiGraph([0, 1], [(0, 1, 2)])]
        for ext in enumerate_extenders(piece.label_set()):
            try:
                glued = glue(piece, ext)
            except GraphError:
                continue
            if is_full_subdivision(glued, members):
                brute = True
                break
        assert gadget_says == brute

    def test_theta3_stub_pair(self):
        # two stubs into one vertex of degree 2: a theta_3 branch needs degree 3
        g = MultiGraph([0, 100, 101], [(0, 100), (0, 101)])
        j = BoundariedGraph(g, frozenset({100, 101}), {100: 1, 101: 2})
        forms = partial_subdivision_test(j, THETA3, t=4, certify=True)
        # the middle vertex can only be a subdivision vertex, never a branch
        assert all(k.n() == 0 for k in forms)
        assert forms  # still extendable with both branches outside


class TestFolio:
    def test_empty_boundary_free_graph(self):
        g = MultiGraph([0, 1, 2], [(0, 1), (1, 2)])
        bg = BoundariedGraph(g, frozenset(), {})
        f = compute_folio(bg, THETA2, rho=2, t=2)
        for entry in f.fingerprint:
            _tag, _mode, _y, sig = entry
            for mu in sig:
                assert mu == frozenset({()})

    def test_path_lengths_3_and_5_equivalent(self):
        a, b = stub_path(3), stub_path(5)
        assert equivalent(a, b, THETA2, rho=2, t=2)

    def test_pendant_triangle_differs_from_stub_theta3(self):
        assert not equivalent(bare_stub(), pendant_triangle(), THETA3, rho=2, t=2)

    def test_reflexive(self):
        a = stub_path(4)
        assert equivalent(a, a, THETA2, rho=2, t=2)

    def test_non_free_not_equivalent(self):
        tri = pendant_triangle()
        assert not equivalent(tri, tri, THETA2, rho=2, t=2)

    def test_mu_hat_contains_empty(self):
        bg = stub_path(2)
        mu = mu_hat_fingerprint(bg, "v", (), THETA2, t=2)
        assert () in mu

    def test_length_2_vs_3_also_equivalent(self):
        assert equivalent(stub_path(2), stub_path(4), THETA2, rho=2, t=2)
