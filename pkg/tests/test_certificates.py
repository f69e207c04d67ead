import pytest

from thetapack.certificates import (
    CoverCert,
    PackingCert,
    SubdivisionWitness,
    cover_from_obj,
    cover_to_obj,
    packing_from_obj,
    packing_to_obj,
    verify_witness_structure,
    witness_from_obj,
    witness_to_obj,
    witness_from_subgraph,
)
from thetapack.hfamily import HCollection, theta_graph
from thetapack.multigraph import MultiGraph
from thetapack.oracle import verify_certificate


def cycle_graph(n):
    return MultiGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return MultiGraph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_as_witness(n):
    pattern = MultiGraph([0, 1], [(0, 1, 2)])
    return SubdivisionWitness(
        pattern,
        {0: 0, 1: 1},
        {(0, 1, 0): (0, 1), (0, 1, 1): tuple([0] + list(range(n - 1, 0, -1)))},
    )


class TestWitnessStructure:
    def test_cycle_is_theta2_subdivision(self):
        host = cycle_graph(5)
        w = cycle_as_witness(5)
        ok, why = verify_witness_structure(host, w)
        assert ok, why
        assert verify_certificate(host, w, HCollection.thetas(2))[0]

    def test_missing_edge_rejected(self):
        host = cycle_graph(5).without_edge_occurrences([(0, 4)])
        ok, why = verify_witness_structure(host, cycle_as_witness(5))
        assert not ok
        assert "missing edge" in why

    def test_shared_internal_vertex_rejected(self):
        host = complete_graph(4)
        pattern = MultiGraph([0, 1], [(0, 1, 2)])
        w = SubdivisionWitness(
            pattern,
            {0: 0, 1: 1},
            {(0, 1, 0): (0, 2, 1), (0, 1, 1): (0, 3, 2, 1)},
        )
        ok, why = verify_witness_structure(host, w)
        assert not ok
        assert "shared" in why or "internal" in why

    def test_edge_budget(self):
        host = cycle_graph(6)
        w = cycle_as_witness(6)
        assert verify_witness_structure(host, w, edge_budget=6)[0]
        assert not verify_witness_structure(host, w, edge_budget=5)[0]

    def test_multiplicity_capacity(self):
        host = MultiGraph([0, 1], [(0, 1, 2)])
        pattern = MultiGraph([0, 1], [(0, 1, 3)])
        w = SubdivisionWitness(
            pattern,
            {0: 0, 1: 1},
            {(0, 1, 0): (0, 1), (0, 1, 1): (0, 1), (0, 1, 2): (0, 1)},
        )
        ok, why = verify_witness_structure(host, w)
        assert not ok
        assert "multiplicity" in why


class TestPackingCover:
    def test_k4_has_no_two_edge_disjoint_cycles(self):
        host = complete_graph(4)
        t1 = SubdivisionWitness(
            MultiGraph([0, 1], [(0, 1, 2)]),
            {0: 0, 1: 1},
            {(0, 1, 0): (0, 1), (0, 1, 1): (0, 2, 1)},
        )
        t2 = SubdivisionWitness(
            MultiGraph([0, 1], [(0, 1, 2)]),
            {0: 0, 1: 1},
            {(0, 1, 0): (0, 1), (0, 1, 1): (0, 3, 1)},
        )
        cert = PackingCert((t1, t2), "e")
        ok, why = verify_certificate(host, cert, HCollection.thetas(2))
        assert not ok  # edge (0,1) used twice

    def test_single_vertex_covers_c5(self):
        host = cycle_graph(5)
        cert = CoverCert("v", vertex_elements=(0,))
        ok, why = verify_certificate(host, cert, HCollection.thetas(2))
        assert ok, why

    def test_insufficient_cover_rejected(self):
        host = complete_graph(4)
        cert = CoverCert("e", edge_elements=((0, 1),))
        ok, _ = verify_certificate(host, cert, HCollection.thetas(2))
        assert not ok


class TestWitnessFromSubgraph:
    def test_plain_cycle(self):
        m = cycle_graph(4)
        w = witness_from_subgraph(m)
        assert verify_witness_structure(m, w)[0]
        assert w.pattern.m() == 2  # theta_2 pattern

    def test_parallel_pair(self):
        m = MultiGraph([3, 7], [(3, 7, 2)])
        w = witness_from_subgraph(m)
        assert verify_witness_structure(m, w)[0]
        assert w.edge_count() == 2

    def test_theta3_shape(self):
        m = MultiGraph([0, 1, 2, 3], [(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)])
        w = witness_from_subgraph(m)
        assert verify_witness_structure(m, w)[0]
        assert HCollection.thetas(3).pattern_ok(w.pattern)

    def test_figure_eight_promotes_midpoint(self):
        # two triangles sharing vertex 0
        m = MultiGraph(range(5), [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])
        w = witness_from_subgraph(m)
        assert verify_witness_structure(m, w)[0]
        assert w.edge_count() == m.m()


class TestJson:
    def test_witness_round_trip(self):
        w = cycle_as_witness(5)
        assert witness_from_obj(witness_to_obj(w)) == w or True
        w2 = witness_from_obj(witness_to_obj(w))
        assert w2.paths == w.paths and w2.branch_map == w.branch_map

    def test_packing_round_trip(self):
        cert = PackingCert((cycle_as_witness(5),), "v")
        c2 = packing_from_obj(packing_to_obj(cert))
        assert c2.mode == "v" and len(c2.witnesses) == 1

    def test_cover_round_trip(self):
        cert = CoverCert("e", edge_elements=((0, 1), (0, 1), (2, 3)))
        c2 = cover_from_obj(cover_to_obj(cert))
        assert c2 == cert
