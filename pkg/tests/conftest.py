import random

import pytest

from thetapack.multigraph import MultiGraph


def random_multigraph(
    rng: random.Random,
    n_min: int = 3,
    n_max: int = 10,
    extra_edges: int = 4,
    max_mult: int = 3,
) -> MultiGraph:
    """Sparse random multigraph: a random forest base plus a few extra edges,
    some with multiplicity."""
    n = rng.randint(n_min, n_max)
    g = MultiGraph(range(n))
    for v in range(1, n):
        if rng.random() < 0.85:
            g = g.with_edge(v, rng.randrange(v))
    for _ in range(rng.randint(0, extra_edges)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            g = g.with_edge(u, v, rng.randint(1, max_mult) if rng.random() < 0.25 else 1)
    return g


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
