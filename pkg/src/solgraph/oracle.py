"""Exact small-system oracles the graph-based predictions are validated against.

Two independent routes:

* quasistatic: lowest eigenpair(s) of H(lambda) = H0 + lambda*V at a small
  fixed lambda; measurement probabilities of the manifold states, averaged
  uniformly over the bottom eigenspace when it is degenerate.
* adiabatic: fixed-step RK4 integration of i dpsi/dt = H(t) psi with
  H(t) = (t/tau) H0 + (1 - t/tau) V from the uniform superposition.

Both apply H matrix-free (diagonal lookup plus mask flips); nothing here
reuses the perturbative machinery under test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .driver import Driver
from .errors import ArgumentError, CapacityError, NumericalError
from .groundset import GroundManifold
from .model import IsingModel

QUASISTATIC_CAP = 20
ADIABATIC_CAP = 14
_DENSE_DIM = 1 << 12
RESIDUAL_TOL = 1e-10
STEP_DRIFT_LIMIT = 1e-8


@dataclass(eq=False)
class OracleResult:
    method: str
    probs: np.ndarray          # over manifold states, manifold order
    residual_mass: float       # |psi|^2 outside the manifold
    settings: dict
    bottom_energy: float | None = None
    cluster_size: int | None = None
    max_norm_drift: float | None = None

    def to_dict(self) -> dict:
        d = {
            "method": self.method,
            "probs": [float(x) for x in self.probs],
            "residual_mass": float(self.residual_mass),
            "settings": self.settings,
        }
        if self.bottom_energy is not None:
            d["bottom_energy"] = float(self.bottom_energy)
        if self.cluster_size is not None:
            d["cluster_size"] = int(self.cluster_size)
        if self.max_norm_drift is not None:
            d["max_norm_drift"] = float(self.max_norm_drift)
        return d


class _Hamiltonian:
    """Matrix-free H0 + coupling*V application on the full 2^N space."""

    def __init__(self, model: IsingModel, driver: Driver):
        model = model.resolved()
        if model.num_spins != driver.num_spins:
            raise ArgumentError(
                f"model has {model.num_spins} spins but driver has {driver.num_spins}"
            )
        self.n = model.num_spins
        self.dim = 1 << self.n
        self.diag = model.energy_table()
        idx = np.arange(self.dim, dtype=np.uint64)
        self.flips = [
            (np.asarray(idx ^ np.uint64(mask), dtype=np.int64), coeff)
            for mask, coeff in driver.xterms
        ]

    def apply_v(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        for perm, coeff in self.flips:
            out += coeff * psi[perm]
        return out

    def apply(self, psi: np.ndarray, coupling: float) -> np.ndarray:
        return self.diag * psi + coupling * self.apply_v(psi)

    def dense(self, coupling: float) -> np.ndarray:
        h = np.diag(self.diag)
        rows = np.arange(self.dim)
        for perm, coeff in self.flips:
            h[rows, perm] += coupling * coeff
        return h

    def v_norm1(self) -> float:
        return sum(abs(c) for _, c in self.flips)


def _bottom_eigenpairs(ham: _Hamiltonian, lam: float, threshold: float):
    """All eigenpairs within `threshold` of the bottom eigenvalue."""
    if ham.dim <= _DENSE_DIM:
        evals, evecs = scipy.linalg.eigh(ham.dense(lam))
        keep = evals <= evals[0] + threshold
        return evals[keep], evecs[:, keep]
    k = min(8, ham.dim - 2)
    op = scipy.sparse.linalg.LinearOperator(
        (ham.dim, ham.dim), matvec=lambda x: ham.apply(x, lam), dtype=np.float64
    )
    while True:
        evals, evecs = scipy.sparse.linalg.eigsh(op, k=k, which="SA", tol=0)
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]
        keep = evals <= evals[0] + threshold
        if not keep.all() or k >= ham.dim - 2:
            return evals[keep], evecs[:, keep]
        k = min(2 * k, ham.dim - 2)  # cluster may extend past the batch


def quasistatic(
    model: IsingModel,
    driver: Driver,
    manifold: GroundManifold,
    lam: float = 1e-3,
) -> OracleResult:
    """Measurement distribution of the bottom eigenspace of H0 + lambda*V.

    Degeneracy detection threshold: 1e-10*lambda^2 with a floor of
    1e-12*max(1, |E_bottom|) covering double-precision eigensolver noise on
    symmetry-exact ties (splittings below that floor are unresolvable).
    """
    model = model.resolved()
    if model.num_spins > QUASISTATIC_CAP:
        raise CapacityError(
            f"quasistatic oracle supports at most {QUASISTATIC_CAP} spins"
        )
    if lam <= 0:
        raise ArgumentError(f"lambda must be positive, got {lam}")
    ham = _Hamiltonian(model, driver)

    rough, _ = _bottom_eigenpairs(ham, lam, threshold=0.0)
    e_bottom = float(rough[0])
    threshold = max(1e-10 * lam * lam, 1e-12 * max(1.0, abs(e_bottom)))
    evals, evecs = _bottom_eigenpairs(ham, lam, threshold)

    for i in range(evecs.shape[1]):
        v = evecs[:, i]
        res = float(np.linalg.norm(ham.apply(v, lam) - evals[i] * v))
        if res > RESIDUAL_TOL * max(1.0, abs(evals[i])):
            raise NumericalError(
                f"eigensolver residual {res:.3e} exceeds {RESIDUAL_TOL:g}"
            )

    weight = np.abs(evecs) ** 2
    idx = manifold.values.astype(np.int64)
    probs = weight[idx, :].mean(axis=1)
    residual = 1.0 - float(weight[idx, :].sum(axis=0).mean())
    return OracleResult(
        method="quasistatic",
        probs=probs,
        residual_mass=residual,
        settings={"lambda": lam, "threshold": threshold},
        bottom_energy=float(evals[0]),
        cluster_size=evecs.shape[1],
    )


def adiabatic(
    model: IsingModel,
    driver: Driver,
    manifold: GroundManifold,
    tau: float,
    dt: float = 5e-3,
) -> OracleResult:
    """RK4 Schrodinger evolution along H(t) = (t/tau) H0 + (1 - t/tau) V.

    The state starts in the uniform superposition (the stoquastic driver's
    ground state), is renormalized every step, and any per-step norm drift
    above 1e-8 aborts with a request for a smaller dt.
    """
    model = model.resolved()
    if model.num_spins > ADIABATIC_CAP:
        raise CapacityError(f"adiabatic oracle supports at most {ADIABATIC_CAP} spins")
    if tau <= 0 or dt <= 0:
        raise ArgumentError("tau and dt must be positive")
    ham = _Hamiltonian(model, driver)
    steps = max(1, round(tau / dt))
    dt = tau / steps

    psi = np.full(ham.dim, 1.0 / np.sqrt(ham.dim), dtype=np.complex128)
    diag = ham.diag

    def deriv(t: float, y: np.ndarray) -> np.ndarray:
        a = t / tau
        b = 1.0 - a
        return -1j * (a * (diag * y) + b * ham.apply_v(y))

    max_drift = 0.0
    t = 0.0
    for _ in range(steps):
        k1 = deriv(t, psi)
        k2 = deriv(t + 0.5 * dt, psi + (0.5 * dt) * k1)
        k3 = deriv(t + 0.5 * dt, psi + (0.5 * dt) * k2)
        k4 = deriv(t + dt, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        norm = float(np.linalg.norm(psi))
        drift = abs(norm - 1.0)
        if drift > STEP_DRIFT_LIMIT:
            raise NumericalError(
                f"norm drift {drift:.3e} in one step exceeds {STEP_DRIFT_LIMIT:g}; "
                f"reduce dt (currently {dt:g})"
            )
        max_drift = max(max_drift, drift)
        psi /= norm

    weight = np.abs(psi) ** 2
    idx = manifold.values.astype(np.int64)
    probs = weight[idx]
    return OracleResult(
        method="adiabatic",
        probs=probs,
        residual_mass=1.0 - float(probs.sum()),
        settings={"tau": tau, "dt": dt, "steps": steps},
        max_norm_drift=max_drift,
    )


def cross_validate(
    model: IsingModel,
    driver: Driver,
    manifold: GroundManifold,
    predicted: np.ndarray,
    lam: float = 1e-3,
    tau: float | None = None,
    dt: float = 5e-3,
) -> dict:
    """Compare predicted probabilities against the available oracles."""
    from .metrics import tv_distance

    out: dict = {"predicted": [float(x) for x in predicted]}
    qs = quasistatic(model, driver, manifold, lam=lam)
    out["quasistatic"] = qs.to_dict()
    out["quasistatic"]["tv_vs_predicted"] = tv_distance(
        predicted, qs.probs, 0.0, qs.residual_mass
    )
    if tau is not None:
        ad = adiabatic(model, driver, manifold, tau=tau, dt=dt)
        out["adiabatic"] = ad.to_dict()
        out["adiabatic"]["tv_vs_predicted"] = tv_distance(
            predicted, ad.probs, 0.0, ad.residual_mass
        )
    return out
