"""Path-integral Monte Carlo annealer for problems beyond exact reach.

The transverse-field system is Trotterized into M coupled replicas of the
classical model.  The effective energy of a replica stack {sigma_k} is

    E_eff = (beta / M) * sum_k H(sigma_k)
            - J_perp(Gamma) * sum_{i,k} sigma_{i,k} sigma_{i,k+1}

with periodic slices and J_perp = -(1/2) ln tanh(beta * Gamma / M) >= 0.
One anneal initializes the stack uniformly at random, performs a Metropolis
pass over all (site, slice) pairs per sweep while Gamma descends linearly
from `gamma_start` to `gamma_end`, and reads out slice 0.

Randomness: every sample owns an independent counter stream seeded through
numpy's SeedSequence((seed, run, sample)) and expanded with splitmix64
inside the kernel, so results are bit-identical for a fixed configuration
and embarrassingly parallel across samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ArgumentError, CapacityError
from .model import IsingModel, SpinConfig

# Inter-slice coupling clamp: as Gamma -> 0, J_perp diverges; beyond this cap
# a cross-slice flip is rejected with probability 1 - exp(-4 * CAP) ~ 1e-44,
# numerically indistinguishable from frozen slices.
J_PERP_CAP = 25.0

EXACT_REPLICA_CAP = 20  # suzuki_trotter_distribution enumerates 2^(N*M) states


@dataclass(frozen=True)
class SqaConfig:
    """Annealer settings; defaults frozen after calibrating the 5-Queens model."""

    trotter_slices: int = 32
    beta: float = 10.0
    gamma_start: float = 3.0
    gamma_end: float = 0.01
    sweeps: int = 1000
    samples: int = 1000
    runs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.trotter_slices < 2:
            raise ArgumentError(f"need at least 2 Trotter slices, got {self.trotter_slices}")
        if self.beta <= 0:
            raise ArgumentError(f"beta must be positive, got {self.beta}")
        if not (self.gamma_start >= self.gamma_end >= 0) or self.gamma_start <= 0:
            raise ArgumentError(
                f"need gamma_start >= gamma_end >= 0 with gamma_start > 0, "
                f"got {self.gamma_start} -> {self.gamma_end}"
            )
        for name in ("sweeps", "samples", "runs"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be >= 1, got {getattr(self, name)}")

    def gamma_schedule(self) -> np.ndarray:
        """Gamma per sweep, linear in sweep index (first at start, last at end).

        gamma_start == gamma_end gives fixed-field equilibrium sampling, the
        mode the detailed-balance test runs in.
        """
        if self.sweeps == 1:
            return np.array([self.gamma_end])
        return np.linspace(self.gamma_start, self.gamma_end, self.sweeps)

    def jperp_schedule(self) -> np.ndarray:
        return np.array([j_perp(self.beta, g, self.trotter_slices)
                         for g in self.gamma_schedule()])

    def to_dict(self) -> dict:
        return {
            "trotter_slices": self.trotter_slices, "beta": self.beta,
            "gamma_start": self.gamma_start, "gamma_end": self.gamma_end,
            "sweeps": self.sweeps, "samples": self.samples,
            "runs": self.runs, "seed": self.seed,
        }


def j_perp(beta: float, gamma: float, m: int) -> float:
    """Inter-slice ferromagnetic coupling, clamped at J_PERP_CAP."""
    arg = math.tanh(beta * gamma / m) if gamma > 0 else 0.0
    if arg <= 0.0:
        return J_PERP_CAP
    return min(J_PERP_CAP, -0.5 * math.log(arg))


def _model_arrays(model: IsingModel):
    """Fields plus symmetric neighbor lists (CSR layout) for the kernel."""
    model = model.resolved()
    n = model.num_spins
    h = np.zeros(n)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for spins, coeff in model.terms:
        if len(spins) == 0:
            continue
        if len(spins) == 1:
            h[spins[0]] += coeff
        elif len(spins) == 2:
            i, j = spins
            adj[i].append((j, coeff))
            adj[j].append((i, coeff))
        else:
            raise ArgumentError(
                f"annealer supports at most quadratic models, got order {len(spins)}"
            )
    indptr = np.zeros(n + 1, dtype=np.int64)
    nbr = np.zeros(sum(len(a) for a in adj), dtype=np.int64)
    jval = np.zeros(len(nbr))
    pos = 0
    for i, entries in enumerate(adj):
        for j, c in entries:
            nbr[pos] = j
            jval[pos] = c
            pos += 1
        indptr[i + 1] = pos
    return n, h, indptr, nbr, jval


@njit(cache=True, inline="always")
def _splitmix64(state: np.uint64) -> tuple[np.uint64, np.float64]:
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, np.float64(z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _anneal_kernel(seed, n, m, beta, jperps, h, indptr, nbr, jval):
    state = np.uint64(seed)
    spins = np.empty((m, n), dtype=np.int8)
    for k in range(m):
        for i in range(n):
            state, u = _splitmix64(state)
            spins[k, i] = 1 if u < 0.5 else -1
    beta_m = beta / m
    for sweep in range(jperps.shape[0]):
        jp = jperps[sweep]
        for i in range(n):
            for k in range(m):
                s = spins[k, i]
                hloc = h[i]
                for t in range(indptr[i], indptr[i + 1]):
                    hloc += jval[t] * spins[k, nbr[t]]
                up = spins[(k + 1) % m, i]
                dn = spins[(k - 1) % m, i]
                delta = -2.0 * beta_m * s * hloc + 2.0 * jp * s * (up + dn)
                if delta <= 0.0:
                    spins[k, i] = -s
                else:
                    state, u = _splitmix64(state)
                    if u < math.exp(-delta):
                        spins[k, i] = -s
    value = np.uint64(0)
    for i in range(n):
        if spins[0, i] > 0:
            value |= np.uint64(1) << np.uint64(i)
    return value


def _sample_seed(seed: int, run: int, sample: int) -> int:
    return int(np.random.SeedSequence((seed, run, sample)).generate_state(1, np.uint64)[0])


def anneal_once(model: IsingModel, cfg: SqaConfig, seed: int) -> SpinConfig:
    """One full anneal; returns the slice-0 configuration."""
    n, h, indptr, nbr, jval = _model_arrays(model)
    value = _anneal_kernel(np.uint64(seed), n, cfg.trotter_slices, cfg.beta,
                           cfg.jperp_schedule(), h, indptr, nbr, jval)
    return SpinConfig(n, int(value))


@dataclass(frozen=True)
class SampleTally:
    """Per-run hit counts over a target state set, plus out-of-set mass."""

    targets: tuple[int, ...]
    counts: np.ndarray       # (runs, len(targets)) int64
    out_of_set: np.ndarray   # (runs,) int64
    samples: int
    config: SqaConfig

    def frequencies(self) -> np.ndarray:
        return self.counts / self.samples

    def mean_frequency(self) -> np.ndarray:
        return self.frequencies().mean(axis=0)

    def stderr(self) -> np.ndarray:
        """Standard error of the per-run frequencies; zeros for a single run."""
        f = self.frequencies()
        if f.shape[0] < 2:
            return np.zeros(f.shape[1])
        return f.std(axis=0, ddof=1) / math.sqrt(f.shape[0])

    def hit_rate(self) -> float:
        total = self.counts.sum() + self.out_of_set.sum()
        return float(self.counts.sum() / total) if total else 0.0

    def to_dict(self) -> dict:
        return {
            "targets": list(self.targets),
            "counts": self.counts.tolist(),
            "out_of_set": self.out_of_set.tolist(),
            "samples": self.samples,
            "mean_frequency": self.mean_frequency().tolist(),
            "stderr": self.stderr().tolist(),
            "hit_rate": self.hit_rate(),
            "config": self.config.to_dict(),
        }


def run_experiment(model: IsingModel, target_states, cfg: SqaConfig) -> SampleTally:
    """cfg.runs x cfg.samples independent anneals tallied against target states."""
    targets = [int(t) for t in target_states]
    if targets != sorted(set(targets)):
        raise ArgumentError("target states must be sorted and unique")
    index = {t: i for i, t in enumerate(targets)}
    n, h, indptr, nbr, jval = _model_arrays(model)
    jperps = cfg.jperp_schedule()
    counts = np.zeros((cfg.runs, len(targets)), dtype=np.int64)
    out = np.zeros(cfg.runs, dtype=np.int64)
    for run in range(cfg.runs):
        for sample in range(cfg.samples):
            seed = _sample_seed(cfg.seed, run, sample)
            value = int(_anneal_kernel(np.uint64(seed), n, cfg.trotter_slices,
                                       cfg.beta, jperps, h, indptr, nbr, jval))
            hit = index.get(value)
            if hit is None:
                out[run] += 1
            else:
                counts[run, hit] += 1
    return SampleTally(targets=tuple(targets), counts=counts, out_of_set=out,
                       samples=cfg.samples, config=cfg)


def suzuki_trotter_distribution(model: IsingModel, cfg: SqaConfig, gamma: float) -> np.ndarray:
    """Exact slice-0 marginal of the replica Gibbs measure at fixed Gamma.

    Enumerates all 2^(N*M) replica stacks; the independent reference the
    detailed-balance test compares Metropolis sampling against.
    """
    model = model.resolved()
    n = model.num_spins
    m = cfg.trotter_slices
    if n * m > EXACT_REPLICA_CAP:
        raise CapacityError(
            f"exact replica enumeration supports N*M <= {EXACT_REPLICA_CAP}, got {n * m}"
        )
    jp = j_perp(cfg.beta, gamma, m)
    beta_m = cfg.beta / m
    energies = model.energy_table(np.arange(1 << n, dtype=np.uint64))
    probs = np.zeros(1 << n)
    mask = (1 << n) - 1
    for stack in range(1 << (n * m)):
        slices = [(stack >> (k * n)) & mask for k in range(m)]
        e = beta_m * sum(energies[v] for v in slices)
        for k in range(m):
            a, b = slices[k], slices[(k + 1) % m]
            agree = n - bin(a ^ b).count("1")
            e -= jp * (2 * agree - n)  # sum_i s_i(a) s_i(b)
        probs[slices[0]] += math.exp(-e)
    return probs / probs.sum()
