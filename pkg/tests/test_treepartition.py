import pytest

from thetapack.boundaried import BoundariedGraph
from thetapack.errors import GraphError
from thetapack.multigraph import MultiGraph
from thetapack.treepartition import (
    PartitionedProtrusion,
    RootedTreePartition,
    folded_chain_partition,
    protrusion_from_host,
    tpw_validate,
    tree_singleton_partition,
)


def path_graph(n):
    return MultiGraph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return MultiGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


class TestTpwValidate:
    def test_path_singletons_width_1(self):
        g = path_graph(4)
        d = tree_singleton_partition(g)
        assert tpw_validate(g, d) == 1

    def test_c6_folded_pairs_width_2(self):
        g = MultiGraph(range(1, 7), [(i, i + 1) for i in range(1, 6)] + [(6, 1)])
        d = RootedTreePartition(
            0,
            {0: None, 1: 0, 2: 1},
            {0: frozenset({1, 6}), 1: frozenset({2, 5}), 2: frozenset({3, 4})},
        )
        assert tpw_validate(g, d) == 2

    def test_violating_edge_named(self):
        g = cycle_graph(4)
        d = RootedTreePartition(
            0,
            {0: None, 1: 0, 2: 1},
            {0: frozenset({0}), 1: frozenset({1, 3}), 2: frozenset({2})},
        )
        # edge (0,3) is fine (bags adjacent); all edges ok here, so break one:
        d_bad = RootedTreePartition(
            0,
            {0: None, 1: 0, 2: 1},
            {0: frozenset({0, 1}), 1: frozenset({2}), 2: frozenset({3})},
        )
        with pytest.raises(GraphError) as ei:
            tpw_validate(g, d_bad)
        assert "(0,3)" in str(ei.value) or "(0, 3)" in str(ei.value)

    def test_bags_must_partition(self):
        g = path_graph(3)
        d = RootedTreePartition(0, {0: None}, {0: frozenset({0, 1})})
        with pytest.raises(GraphError):
            tpw_validate(g, d)

    def test_multiplicity_counts_in_width(self):
        g = MultiGraph([0, 1], [(0, 1, 3)])
        d = RootedTreePartition(
            0, {0: None, 1: 0}, {0: frozenset({0}), 1: frozenset({1})}
        )
        assert tpw_validate(g, d) == 3

    def test_folded_chain(self):
        g = path_graph(7)
        d = folded_chain_partition(list(range(7)))
        assert tpw_validate(g, d) == 2


class TestPartitionedProtrusion:
    def test_pendant_tree_protrusion(self):
        # host: triangle 0-1-2 with a pendant path 3-4-5 hanging off vertex 0
        host = MultiGraph(range(6), [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)])
        region = {3, 4, 5}
        d = RootedTreePartition(
            3,
            {3: None, 4: 3, 5: 4},
            {3: frozenset({3}), 4: frozenset({4}), 5: frozenset({5})},
        )
        pp = protrusion_from_host(host, d, t=2)
        assert pp.bg.n() == 3
        assert pp.validate() == 1

    def test_root_bag_must_meet_boundary_neighbors(self):
        host = MultiGraph(range(6), [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)])
        d = RootedTreePartition(
            5,
            {5: None, 4: 5, 3: 4},
            {3: frozenset({3}), 4: frozenset({4}), 5: frozenset({5})},
        )
        with pytest.raises(GraphError):
            protrusion_from_host(host, d, t=2)

    def test_whole_graph_protrusion_empty_boundary(self):
        host = path_graph(5)
        d = tree_singleton_partition(host)
        pp = protrusion_from_host(host, d, t=2)
        assert pp.bg.boundary == frozenset()
        assert pp.validate() == 1

    def test_width_capped_by_t(self):
        host = MultiGraph([0, 1], [(0, 1, 3)])
        d = RootedTreePartition(
            0, {0: None, 1: 0}, {0: frozenset({0}), 1: frozenset({1})}
        )
        pp = PartitionedProtrusion(BoundariedGraph(host, frozenset(), {}), d, t=2)
        with pytest.raises(GraphError):
            pp.validate()

    def test_subtree_boundaried(self):
        host = MultiGraph(range(6), [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 5)])
        d = RootedTreePartition(
            3,
            {3: None, 4: 3, 5: 4},
            {3: frozenset({3}), 4: frozenset({4}), 5: frozenset({5})},
        )
        pp = protrusion_from_host(host, d, t=2)
        sub = pp.subtree_boundaried(host, 4)
        assert sub.n() == 2  # vertices 4, 5
        assert len(sub.boundary) == 1  # one crossing edge (3,4)

    def test_heights(self):
        d = RootedTreePartition(
            0,
            {0: None, 1: 0, 2: 1, 3: 1},
            {i: frozenset({i + 10}) for i in range(4)},
        )
        h = d.heights()
        assert h[0] == 2 and h[1] == 1 and h[2] == 0

    def test_parent_cycle_rejected(self):
        with pytest.raises(GraphError):
            RootedTreePartition(0, {0: None, 1: 2, 2: 1}, {i: frozenset() for i in range(3)})
