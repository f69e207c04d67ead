import random

import pytest

from conftest import random_multigraph
from thetapack.boundaried import BoundariedGraph, compatible, glue, split
from thetapack.errors import CompatibilityError, GraphError
from thetapack.multigraph import MultiGraph, are_isomorphic


def pendant(label=1, interior=0, stub=10):
    g = MultiGraph([interior, stub], [(interior, stub)])
    return BoundariedGraph(g, frozenset({stub}), {stub: label})


def complete_graph(n):
    return MultiGraph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


class TestBoundariedGraph:
    def test_boundary_must_have_degree_one(self):
        g = MultiGraph([0, 1, 2], [(0, 1), (1, 2)])
        with pytest.raises(GraphError):
            BoundariedGraph(g, frozenset({1}), {1: 1})

    def test_labels_bijective(self):
        g = MultiGraph([0, 1, 2], [(0, 1), (0, 2)])
        with pytest.raises(GraphError):
            BoundariedGraph(g, frozenset({1, 2}), {1: 1, 2: 1})

    def test_counts(self):
        bg = pendant()
        assert bg.n() == 1
        assert bg.m() == 1


class TestGlue:
    def test_two_pendants(self):
        a, b = pendant(interior=0, stub=10), pendant(interior=0, stub=10)
        w = glue(a, b)
        assert w.n() == 2
        assert w.m() == 1

    def test_incompatible_reports_difference(self):
        a = pendant(label=1)
        b = pendant(label=2)
        with pytest.raises(CompatibilityError) as ei:
            glue(a, b)
        assert ei.value.only_first == {1}
        assert ei.value.only_second == {2}

    def test_vertex_count_additive(self, rng):
        for seed in range(20):
            r = random.Random(seed)
            w = random_multigraph(r, n_min=4, n_max=9)
            if not w.is_connected():
                continue
            s = set(sorted(w.vertices)[: r.randint(1, w.n() - 1)])
            left, right = split(w, s)
            glued = glue(left, right)
            assert glued.n() == left.n() + right.n()

    def test_symmetric_up_to_isomorphism(self, rng):
        for seed in range(15):
            r = random.Random(seed)
            w = random_multigraph(r, n_min=4, n_max=8)
            if not w.is_connected():
                continue
            s = set(sorted(w.vertices)[:2])
            a, b = split(w, s)
            assert are_isomorphic(glue(a, b), glue(b, a))


class TestSplit:
    def test_single_edge(self):
        w = MultiGraph([0, 1], [(0, 1)])
        a, b = split(w, {0})
        assert a.n() == 1 and b.n() == 1
        assert a.label_set() == b.label_set() == frozenset({1})
        assert a.m() == b.m() == 1

    def test_k4_one_vertex(self):
        w = complete_graph(4)
        a, b = split(w, {0})
        assert len(a.boundary) == 3
        assert a.n() == 1
        # interior vertex 0 has the three stubs
        assert a.graph.degree(0) == 3

    def test_s_equals_v(self):
        w = complete_graph(3)
        a, b = split(w, set(w.vertices))
        assert a.boundary == frozenset()
        assert a.graph == w
        assert b.n() == 0 and b.m() == 0

    def test_empty_s_rejected(self):
        with pytest.raises(GraphError):
            split(complete_graph(3), set())

    def test_round_trip_isomorphic(self):
        for seed in range(40):
            r = random.Random(seed)
            w = random_multigraph(r, n_min=2, n_max=10)
            verts = sorted(w.vertices)
            k = r.randint(1, len(verts))
            s = set(r.sample(verts, k))
            if len(s) == len(verts):
                continue
            a, b = split(w, s)
            assert compatible(a, b)
            glued = glue(a, b)
            assert are_isomorphic(glued, w)

    def test_crossing_multiplicities_become_separate_labels(self):
        w = MultiGraph([0, 1], [(0, 1, 3)])
        a, b = split(w, {0})
        assert len(a.boundary) == 3
        glued = glue(a, b)
        assert are_isomorphic(glued, w)
