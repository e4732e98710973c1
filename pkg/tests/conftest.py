"""
tests/conftest.py
=================
Shared factories: hand-placed links, seeded random instances and a
brute-force MWIS oracle.
"""

import math

import numpy as np
import pytest

from sinrgraph.bench import ExperimentConfig, gen_random_instance
from sinrgraph.config import get_config
from sinrgraph.models import ConflictGraph, Instance, Link, Point
from sinrgraph.utils.logging import configure_logging


def make_link(link_id, sx, sy, rx, ry, beta=1.0, weight=1.0):
    return Link(link_id, Point(sx, sy), Point(rx, ry), beta=beta, weight=weight)


def random_instance(seed, n=30, l_max=100.0, side=1000.0, beta=1.0, beta_max=None, alpha=2.8):
    cfg = ExperimentConfig(n=n, l_max=(l_max,), side=side, alpha=alpha, beta=beta,
                           beta_max=beta_max, seed=seed, trials=1)
    return gen_random_instance(cfg, 0, l_max)


def random_links(rng, count, side=100.0, max_len=10.0, beta_max=4.0):
    """Loose links (no instance) with uniform lengths in [1, max_len] and β in [1, beta_max]."""
    s = rng.uniform(0, side, size=(count, 2))
    theta = rng.uniform(0, 2 * math.pi, size=count)
    length = rng.uniform(1.0, max_len, size=count)
    r = s + length[:, None] * np.column_stack((np.cos(theta), np.sin(theta)))
    beta = rng.uniform(1.0, beta_max, size=count)
    return [Link(k, Point(*s[k]), Point(*r[k]), beta=float(beta[k])) for k in range(count)]


def brute_force_mwis(g: ConflictGraph, weights: dict) -> float:
    """Exact maximum-weight independent set by branching on vertex bitmasks."""
    n = len(g)
    nbr = [0] * n
    for a in range(n):
        for b in np.flatnonzero(g.adjacency[a]):
            nbr[a] |= 1 << int(b)
    w = [weights.get(v, 0.0) for v in g.vertex_ids]

    def best(cand: int) -> float:
        if cand == 0:
            return 0.0
        v = (cand & -cand).bit_length() - 1
        take = w[v] + best(cand & ~nbr[v] & ~(1 << v))
        if cand & nbr[v] == 0:
            return take
        return max(take, best(cand & ~(1 << v)))

    return best((1 << n) - 1)


@pytest.fixture(scope="session", autouse=True)
def package_logging():
    """Attach the package handlers once, to the real stderr."""
    configure_logging(get_config("testing"))


@pytest.fixture
def two_far_links():
    return Instance(2.8, (make_link(0, 0, 0, 1, 0), make_link(1, 500, 500, 501, 500)))


@pytest.fixture
def crossing_links():
    """Each sender sits next to the other link's receiver: infeasible under any powers."""
    return Instance(2.8, (make_link(0, 0, 0, 10, 0, weight=10.0),
                          make_link(1, 11, 0, 1, 0, weight=1.0)))
