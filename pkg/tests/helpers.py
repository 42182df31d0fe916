"""Shared generators and independent reference constructions for the suite."""

import numpy as np

from solgraph.groundset import enumerate_ground_states
from solgraph.model import IsingModel


def random_degenerate_models(count, max_spins, seed, min_states=2):
    """Random integer-coefficient models whose ground manifold has >= min_states.

    Integer grids make exact ties common, so rejection sampling terminates
    quickly; the generator is deterministic in `seed`.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(2, max_spins + 1))
        terms = []
        for i in range(n):
            h = int(rng.integers(-1, 2))
            if h:
                terms.append(((i,), float(h)))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.6:
                    j_ij = int(rng.integers(-1, 2))
                    if j_ij:
                        terms.append(((i, j), float(j_ij)))
        if not terms:
            continue
        model = IsingModel.build(n, terms)
        manifold = enumerate_ground_states(model)
        if len(manifold) >= min_states:
            out.append((model, manifold))
    return out


def dense_driver_matrix(driver) -> np.ndarray:
    """Full 2^N x 2^N driver matrix built directly from the flip terms."""
    dim = 1 << driver.num_spins
    v = np.zeros((dim, dim))
    for mask, coeff in driver.xterms:
        for col in range(dim):
            v[col ^ mask, col] += coeff
    return v


def connected_components(matrix) -> list[set]:
    """Breadth-first components of a symmetric adjacency matrix."""
    n = len(matrix)
    unseen = set(range(n))
    comps = []
    while unseen:
        start = min(unseen)
        comp, frontier = {start}, [start]
        unseen.discard(start)
        while frontier:
            i = frontier.pop()
            for j in list(unseen):
                if matrix[i][j] != 0:
                    unseen.discard(j)
                    comp.add(j)
                    frontier.append(j)
        comps.append(comp)
    return comps
