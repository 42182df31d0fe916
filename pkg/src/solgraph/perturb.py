"""Solution graphs: degenerate perturbation theory over the ground manifold.

For H(lambda) = H0 + lambda*V with ground projector P1, the first-order
effective matrix is A1 = -P1 V P1 restricted to the manifold (entrywise
A1[i][j] = -<g_i|V|g_j> >= 0 for stoquastic V).  When A1 vanishes identically
the degeneracy is addressed at second order with

    A2[i][j] = sum_{m not in manifold} V_im * V_jm / (E_m - E_0) >= 0,

computed locally by walking driver terms out of and back into the manifold;
no 2^N operator is ever assembled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse.csgraph import connected_components

from .driver import Driver
from .errors import DegenerateIntermediateError, OrderConflictError
from .groundset import GroundManifold
from .model import IsingModel, SpinConfig


class Order(Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(eq=False)
class SolutionGraph:
    """Weighted graph on manifold states; `components` lists node indices."""

    manifold: GroundManifold
    order: Order
    matrix: np.ndarray           # dense, nonnegative, symmetric
    hamming: np.ndarray          # pairwise spin-flip distances
    components: tuple[tuple[int, ...], ...]

    @property
    def num_states(self) -> int:
        return len(self.manifold)

    def component_of(self, i: int) -> int:
        for cid, nodes in enumerate(self.components):
            if i in nodes:
                return cid
        raise IndexError(i)


def _hamming_matrix(values: np.ndarray) -> np.ndarray:
    v = values.astype(np.uint64)
    return np.bitwise_count(v[:, None] ^ v[None, :]).astype(np.int64)


def _components(matrix: np.ndarray) -> tuple[tuple[int, ...], ...]:
    off = matrix.copy()
    np.fill_diagonal(off, 0.0)
    n_comp, labels = connected_components(off != 0, directed=False)
    comps = [[] for _ in range(n_comp)]
    for node, lab in enumerate(labels):
        comps[lab].append(node)
    # deterministic order: by smallest member state
    comps.sort(key=lambda c: c[0])
    return tuple(tuple(c) for c in comps)


def build_first_order(manifold: GroundManifold, driver: Driver) -> SolutionGraph:
    """A1[i][j] = -<g_i|V|g_j>; zero diagonal since driver masks flip spins."""
    m = len(manifold)
    a = np.zeros((m, m))
    for i, gi in enumerate(manifold.values):
        for t, c in driver.neighbors(int(gi)):
            if t in manifold:
                a[i, manifold.index_of(t)] -= c
    return SolutionGraph(
        manifold=manifold,
        order=Order.FIRST,
        matrix=a,
        hamming=_hamming_matrix(manifold.values),
        components=_components(a),
    )


def build_second_order(
    model: IsingModel, manifold: GroundManifold, driver: Driver
) -> SolutionGraph:
    """Second-order graph; only valid when the first-order matrix vanishes.

    Every intermediate reached by one driver term must clear the manifold
    energy by more than the manifold tolerance.
    """
    model = model.resolved()
    first = build_first_order(manifold, driver)
    if np.any(first.matrix != 0):
        raise OrderConflictError(
            "first-order matrix is nonzero; analyze this model at first order"
        )
    m = len(manifold)
    a = np.zeros((m, m))
    e0 = manifold.e0
    gap_cache: dict[int, float] = {}
    for i, gi in enumerate(manifold.values):
        for mid, c1 in driver.neighbors(int(gi)):
            if mid in manifold:
                continue  # would be a first-order path; matrix already zero
            gap = gap_cache.get(mid)
            if gap is None:
                gap = model.energy(mid) - e0
                gap_cache[mid] = gap
            if gap <= manifold.tol:
                s = SpinConfig(manifold.num_spins, mid)
                raise DegenerateIntermediateError(
                    f"intermediate state {s.bits()} sits at gap {gap:.3e} <= "
                    f"tol {manifold.tol:.3e} above the ground energy"
                )
            for back, c2 in driver.neighbors(mid):
                if back in manifold:
                    a[i, manifold.index_of(back)] += c1 * c2 / gap
    return SolutionGraph(
        manifold=manifold,
        order=Order.SECOND,
        matrix=a,
        hamming=_hamming_matrix(manifold.values),
        components=_components(a),
    )


def resolve(model: IsingModel, manifold: GroundManifold, driver: Driver) -> SolutionGraph:
    """First order if A1 has any nonzero entry, else second order."""
    first = build_first_order(manifold, driver)
    if np.any(first.matrix != 0):
        return first
    return build_second_order(model, manifold, driver)


# ---------------------------------------------------------------------- DOT

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def to_dot(graph: SolutionGraph) -> str:
    """Deterministic DOT rendering: same graph -> byte-identical text."""
    lines = ["graph solution_graph {", "  node [shape=circle];"]
    comp_of = {}
    for cid, nodes in enumerate(graph.components):
        for n in nodes:
            comp_of[n] = cid
    configs = graph.manifold.configs()
    for i, cfg in enumerate(configs):
        color = _PALETTE[comp_of[i] % len(_PALETTE)]
        attrs = [f'label="{cfg.bits()}"', f'color="{color}"', f"component={comp_of[i]}"]
        self_w = graph.matrix[i, i]
        if self_w != 0:
            attrs.append(f'selfweight="{_fmt(self_w)}"')
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for i in range(graph.num_states):
        for j in range(i + 1, graph.num_states):
            w = graph.matrix[i, j]
            if w != 0:
                lines.append(
                    f'  n{i} -- n{j} [w="{_fmt(w)}", hd={int(graph.hamming[i, j])}];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
