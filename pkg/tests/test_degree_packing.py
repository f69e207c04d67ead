import random

import pytest

from thetapack.degree_packing import (
    DegreePartition,
    degree_partition,
    greedy_epack,
    lift_packing,
    validate_model,
    vpack_from_degree,
)
from thetapack.errors import GraphError, PreconditionError
from thetapack.hfamily import HCollection
from thetapack.multigraph import MultiGraph
from thetapack.oracle import verify_certificate


def complete_graph(n):
    return MultiGraph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    return MultiGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def random_min_degree_graph(rng, n, d):
    """Random graph with minimum simple degree >= d."""
    g = MultiGraph(range(n))
    verts = list(range(n))
    while True:
        low = [v for v in verts if g.simple_degree(v) < d]
        if not low:
            return g
        v = low[0]
        candidates = [w for w in verts if w != v and not g.has_edge(v, w)]
        rng.shuffle(candidates)
        if not candidates:
            raise RuntimeError("cannot reach degree %d with n=%d" % (d, n))
        g = g.with_edge(v, candidates[0])


class TestGreedyEpack:
    def test_k5(self):
        cert = greedy_epack(complete_graph(5), 2, 2)
        assert cert.size() == 2
        assert verify_certificate(complete_graph(5), cert, HCollection.thetas(2))[0]
        vsets = [w.vertex_set() for w in cert.witnesses]
        shared = vsets[0] & vsets[1]
        assert len(shared) == 1  # exactly the path end
        usages = [set(w.edge_usage()) for w in cert.witnesses]
        assert not (usages[0] & usages[1])

    def test_k_r_plus_one(self):
        for r in (1, 2, 3):
            g = complete_graph(r + 1)
            cert = greedy_epack(g, 1, r)
            assert cert.size() == 1
            assert verify_certificate(g, cert, HCollection.thetas(r))[0]

    def test_cycle(self):
        cert = greedy_epack(cycle_graph(7), 1, 2)
        assert cert.size() == 1
        w = cert.witnesses[0]
        assert w.edge_count() == 7  # whole cycle

    def test_precondition_error_names_vertex(self):
        with pytest.raises(PreconditionError) as ei:
            greedy_epack(cycle_graph(5), 2, 2)
        assert "vertex" in str(ei.value)

    def test_random_graphs(self):
        for seed in range(15):
            rng = random.Random(seed)
            k, r = rng.choice([(1, 2), (2, 2), (1, 3), (3, 2), (2, 3)])
            n = rng.randint(k * r + 2, k * r + 8)
            g = random_min_degree_graph(rng, n, k * r)
            cert = greedy_epack(g, k, r)
            assert cert.size() == k
            ok, why = verify_certificate(g, cert, HCollection.thetas(r))
            assert ok, why


class TestDegreePartition:
    def test_complete_balanced(self):
        for k, r in ((2, 2), (3, 1), (2, 3)):
            g = complete_graph(k * (r + 1))
            dp = degree_partition(g, k, r)
            assert dp.validate(g)
            assert len(dp.parts) == k

    def test_k5_two_parts(self):
        dp = degree_partition(complete_graph(5), 2, 1)
        assert dp.validate(complete_graph(5))

    def test_k1_identity(self):
        g = cycle_graph(6)
        dp = degree_partition(g, 1, 2)
        assert dp.parts == (frozenset(g.vertices),)
        assert dp.moves == 0

    def test_move_budget(self):
        for seed in range(15):
            rng = random.Random(100 + seed)
            k, r = rng.choice([(2, 1), (2, 2), (3, 1)])
            n = rng.randint(k * (r + 1), k * (r + 1) + 6)
            g = random_min_degree_graph(rng, n, k * (r + 1) - 1)
            dp = degree_partition(g, k, r)
            assert dp.validate(g)
            assert dp.moves <= g.m()

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            degree_partition(cycle_graph(6), 2, 2)


class TestVpackFromDegree:
    def test_complete(self):
        g = complete_graph(6)
        cert = vpack_from_degree(g, 2, 2)
        assert cert.size() == 2
        assert verify_certificate(g, cert, HCollection.thetas(2))[0]

    def test_k6_matching_of_thetas1(self):
        g = complete_graph(6)
        cert = vpack_from_degree(g, 2, 1)
        assert cert.size() == 2
        assert verify_certificate(g, cert, HCollection.thetas(1))[0]

    def test_random(self):
        for seed in range(12):
            rng = random.Random(200 + seed)
            k, r = rng.choice([(2, 2), (1, 3), (3, 1), (2, 3)])
            n = rng.randint(k * (r + 1) + 1, k * (r + 1) + 7)
            g = random_min_degree_graph(rng, n, k * (r + 1) - 1)
            cert = vpack_from_degree(g, k, r)
            assert cert.size() == k
            ok, why = verify_certificate(g, cert, HCollection.thetas(r))
            assert ok, why


class TestLiftPacking:
    def test_identity_model_unchanged(self):
        g = complete_graph(5)
        cert = greedy_epack(g, 2, 2)
        model = {v: frozenset({v}) for v in g.vertices}
        lifted = lift_packing(g, model, g, cert, target=HCollection.thetas(2))
        assert lifted.witnesses == cert.witnesses

    def test_theta2_model_with_two_vertex_sets(self):
        # C6 contracted to a 2-cycle: branch sets {0,1,2} and {3,4,5}
        host = cycle_graph(6)
        h = MultiGraph([0, 1], [(0, 1, 2)])
        model = {0: frozenset({0, 1, 2}), 1: frozenset({3, 4, 5})}
        from thetapack.certificates import SubdivisionWitness

        w = SubdivisionWitness(
            MultiGraph([0, 1], [(0, 1, 2)]),
            {0: 0, 1: 1},
            {(0, 1, 0): (0, 1), (0, 1, 1): (0, 1)},
        )
        from thetapack.certificates import PackingCert

        cert = PackingCert((w,), "e")
        lifted = lift_packing(host, model, h, cert, target=HCollection.thetas(2))
        assert lifted.size() == 1
        ok, why = verify_certificate(host, lifted, HCollection.thetas(2))
        assert ok, why
        assert lifted.witnesses[0].edge_count() == 6

    def test_empty_packing(self):
        from thetapack.certificates import PackingCert

        g = cycle_graph(4)
        model = {v: frozenset({v}) for v in g.vertices}
        lifted = lift_packing(g, model, g, PackingCert((), "v"))
        assert lifted.size() == 0

    def test_invalid_model_reports_branch_set(self):
        g = MultiGraph(range(4), [(0, 1), (2, 3)])
        model = {0: frozenset({0, 2}), 1: frozenset({1, 3})}
        h = MultiGraph([0, 1], [(0, 1)])
        from thetapack.certificates import PackingCert

        with pytest.raises(GraphError) as ei:
            lift_packing(g, model, h, PackingCert((), "v"))
        assert "branch set" in str(ei.value)
