"""Centralities, survivor selection, sampling predictions and fairness scalars.

Component selection rule: the per-component Perron eigenvalues are compared
with relative tolerance 1e-9; every component tying the maximum survives and
the tied components share total weight equally.  Within a surviving component
the predicted sampling probability of state i is proportional to the square
of its Perron (eigenvector) centrality; suppressed components get exactly 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, NumericalError
from .perturb import Order, SolutionGraph

POWER_TOL = 1e-12
POWER_MAX_ITER = 1_000_000
SURVIVOR_REL_TOL = 1e-9


def power_iteration(matrix: np.ndarray, start: np.ndarray | None = None,
                    tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER):
    """Perron pair of a nonnegative symmetric matrix.

    Iterates on (A + sI) with a positive shift so bipartite blocks cannot
    oscillate; converges when the residual ||Ax - lambda x|| drops to
    tol * max(1, lambda), which bounds the eigenvector error directly
    (error <= residual / spectral gap for symmetric A).
    """
    a = np.asarray(matrix, dtype=np.float64)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0]), np.ones(1)
    shift = 1.0 + float(np.abs(a).sum(axis=1).max())
    if start is None:
        x = np.ones(n)
    else:
        x = np.asarray(start, dtype=np.float64).copy()
        if np.all(x == 0):
            raise ArgumentError("power iteration start vector is zero")
    x /= np.linalg.norm(x)
    resid = np.inf
    for it in range(1, max_iter + 1):
        ax = a @ x
        lam = float(x @ ax)
        resid = float(np.linalg.norm(ax - lam * x))
        if resid <= tol * max(1.0, abs(lam)):
            return lam, np.abs(x)  # Perron vector of a nonnegative block is signless
        y = ax + shift * x
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0, np.full(n, 1.0 / np.sqrt(n))
        x = y / norm
    raise NumericalError(
        f"power iteration did not converge in {max_iter} iterations (residual {resid:.3e})"
    )


@dataclass(eq=False)
class ComponentSpectrum:
    nodes: tuple[int, ...]
    lambda1: float
    centrality: np.ndarray  # Perron vector over `nodes`, max-norm 1


def component_spectra(graph: SolutionGraph) -> list[ComponentSpectrum]:
    out = []
    for nodes in graph.components:
        idx = np.asarray(nodes)
        block = graph.matrix[np.ix_(idx, idx)]
        lam, vec = power_iteration(block)
        top = vec.max()
        if top > 0:
            vec = vec / top
        out.append(ComponentSpectrum(tuple(nodes), lam, vec))
    return out


@dataclass(eq=False)
class FairnessReport:
    """Per-state predictions plus per-component and scalar diagnostics."""

    order: str
    states: list[str]
    component_ids: list[int]
    c_deg: np.ndarray
    c_eig: np.ndarray
    ef: np.ndarray | None
    ref: np.ndarray | None
    p: np.ndarray
    components: list[dict]
    scalars: dict
    settings: dict = field(default_factory=dict)
    oracle: dict | None = None

    def to_dict(self) -> dict:
        per_state = []
        for i, s in enumerate(self.states):
            row = {
                "state": s,
                "component": self.component_ids[i],
                "c_deg": float(self.c_deg[i]),
                "c_eig": float(self.c_eig[i]),
                "p": float(self.p[i]),
            }
            if self.ef is not None:
                row["ef"] = float(self.ef[i])
                row["ref"] = float(self.ref[i])
            per_state.append(row)
        d = {
            "per_state": per_state,
            "components": self.components,
            "scalars": self.scalars,
            "settings": self.settings,
        }
        if self.oracle is not None:
            d["oracle"] = self.oracle
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["state", "component", "c_deg", "c_eig", "ef", "ref", "p"]
        writer = csv.DictWriter(buf, fieldnames=cols)
        writer.writeheader()
        for i, s in enumerate(self.states):
            writer.writerow({
                "state": s,
                "component": self.component_ids[i],
                "c_deg": repr(float(self.c_deg[i])),
                "c_eig": repr(float(self.c_eig[i])),
                "ef": repr(float(self.ef[i])) if self.ef is not None else "",
                "ref": repr(float(self.ref[i])) if self.ref is not None else "",
                "p": repr(float(self.p[i])),
            })
        return buf.getvalue()


def energy_flatness(graph: SolutionGraph) -> tuple[np.ndarray, np.ndarray]:
    """EF_i = off-diagonal row sum of A2; REF_i = EF_i / sum_{j != i} EF_j."""
    if graph.order is not Order.SECOND:
        raise ArgumentError("energy flatness is defined for second-order graphs only")
    a = graph.matrix
    ef = a.sum(axis=1) - np.diag(a)
    total = ef.sum()
    denom = total - ef
    with np.errstate(divide="ignore", invalid="ignore"):
        ref = np.where(denom > 0, ef / denom, np.inf)
    return ef, ref


def predicted_probabilities(graph: SolutionGraph, settings: dict | None = None) -> FairnessReport:
    spectra = component_spectra(graph)
    lam_max = max(s.lambda1 for s in spectra)
    surviving = [
        s for s in spectra
        if s.lambda1 >= lam_max - SURVIVOR_REL_TOL * max(1.0, abs(lam_max))
    ]
    share = 1.0 / len(surviving)

    m = graph.num_states
    p = np.zeros(m)
    c_eig = np.zeros(m)
    comp_ids = np.zeros(m, dtype=int)
    comp_rows = []
    surviving_set = {id(s) for s in surviving}
    for cid, s in enumerate(spectra):
        for local, node in enumerate(s.nodes):
            comp_ids[node] = cid
            c_eig[node] = s.centrality[local]
        is_surv = id(s) in surviving_set
        comp_rows.append({
            "id": cid,
            "size": len(s.nodes),
            "lambda1": float(s.lambda1),
            "surviving": bool(is_surv),
        })
        if is_surv:
            weight = s.centrality ** 2
            weight = weight / weight.sum()
            for local, node in enumerate(s.nodes):
                p[node] = share * weight[local]

    c_deg = graph.matrix.sum(axis=1)
    ef = ref = None
    if graph.order is Order.SECOND:
        ef, ref = energy_flatness(graph)

    uniform = 1.0 / m
    tv_uniform = 0.5 * float(np.abs(p - uniform).sum())
    surv_mask = np.array([comp_rows[comp_ids[i]]["surviving"] for i in range(m)])
    surv_c = c_eig[surv_mask]
    cv = float(surv_c.std() / surv_c.mean()) if surv_c.size and surv_c.mean() > 0 else 0.0

    return FairnessReport(
        order=graph.order.value,
        states=graph.manifold.bit_strings(),
        component_ids=[int(x) for x in comp_ids],
        c_deg=c_deg,
        c_eig=c_eig,
        ef=ef,
        ref=ref,
        p=p,
        components=comp_rows,
        scalars={
            "tv_uniform": tv_uniform,
            "cv_centrality": cv,
            "order": graph.order.value,
        },
        settings=settings or {},
    )


def spectral_bounds_check(graph: SolutionGraph) -> dict:
    """Perron bounds for a 0/1 first-order graph: mean degree <= lam1 <= max degree."""
    a = graph.matrix.copy()
    np.fill_diagonal(a, 0.0)
    if not np.all((a == 0) | (a == 1)):
        raise ArgumentError("spectral bounds apply to 0/1 adjacency graphs")
    deg = a.sum(axis=1)
    lam1 = max(s.lambda1 for s in component_spectra(graph)) if len(a) else 0.0
    slack = 1e-9
    return {
        "lambda1": float(lam1),
        "mean_deg": float(deg.mean()),
        "max_deg": float(deg.max()),
        "ok": bool(deg.mean() <= lam1 + slack and lam1 <= deg.max() + slack),
    }


def tv_distance(p, q, residual_p: float = 0.0, residual_q: float = 0.0) -> float:
    """Total variation including any mass the distributions hold off-support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * (float(np.abs(p - q).sum()) + abs(residual_p - residual_q))


def coefficient_of_variation(x) -> float:
    x = np.asarray(x, dtype=float)
    mu = x.mean()
    return float(x.std() / mu) if mu > 0 else 0.0


def snap_ties(x, rel_tol: float = 1e-7):
    """Cluster nearly-equal values so exact model symmetries rank as ties."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    out = x.copy()
    scale = max(1.0, float(np.abs(x).max()))
    anchor = None
    for idx in order:
        if anchor is None or x[idx] - anchor > rel_tol * scale:
            anchor = x[idx]
        out[idx] = anchor
    return out


def rank_concordant(x, y, rel_tol: float = 1e-7) -> bool:
    """Kendall tau-b == 1 after snapping numerical ties in both lists."""
    from scipy.stats import kendalltau

    xs, ys = snap_ties(x, rel_tol), snap_ties(y, rel_tol)
    if np.all(xs == xs[0]) and np.all(ys == ys[0]):
        return True  # both constant: concordant by convention
    tau = kendalltau(xs, ys).statistic
    return bool(abs(tau - 1.0) < 1e-12)
