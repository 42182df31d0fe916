"""Ground-state manifold extraction for diagonal cost models."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ArgumentError, CapacityError
from .model import IsingModel, SpinConfig

ENUMERATION_CAP = 28  # exhaustive scan refuses above 2^28 states
_CHUNK = 1 << 20


class ManifoldSource(Enum):
    BRUTE_FORCE = "brute_force"
    PROVIDED = "provided"


def default_tol(e0: float) -> float:
    return 1e-9 * max(1.0, abs(e0))


@dataclass(frozen=True, eq=False)
class GroundManifold:
    """Sorted degenerate ground-state set of a model."""

    num_spins: int
    values: np.ndarray  # sorted uint64 packed states
    e0: float
    tol: float
    source: ManifoldSource
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {int(v): i for i, v in enumerate(self.values)})

    def __len__(self):
        return len(self.values)

    def __contains__(self, state) -> bool:
        v = state.value if isinstance(state, SpinConfig) else int(state)
        return v in self._index

    def index_of(self, state) -> int:
        v = state.value if isinstance(state, SpinConfig) else int(state)
        try:
            return self._index[v]
        except KeyError:
            raise ArgumentError(f"state {v} is not in the ground manifold") from None

    def configs(self) -> list[SpinConfig]:
        return [SpinConfig(self.num_spins, int(v)) for v in self.values]

    def bit_strings(self) -> list[str]:
        return [c.bits() for c in self.configs()]


def enumerate_ground_states(model: IsingModel, tol: float | None = None) -> GroundManifold:
    """Exhaustive scan of all 2^N configurations (N <= 28), chunked.

    Collects every state within `tol` of the minimum energy;
    default tol = 1e-9 * max(1, |e0|).
    """
    model = model.resolved()
    n = model.num_spins
    if n > ENUMERATION_CAP:
        raise CapacityError(
            f"exhaustive enumeration supports at most {ENUMERATION_CAP} spins, got {n}"
        )
    total = 1 << n
    e0 = np.inf
    for start in range(0, total, _CHUNK):
        vals = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        e0 = min(e0, float(model.energy_table(vals).min()))
    if tol is None:
        tol = default_tol(e0)
    if tol < 0:
        raise ArgumentError(f"tolerance must be nonnegative, got {tol}")
    found = []
    for start in range(0, total, _CHUNK):
        vals = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        e = model.energy_table(vals)
        found.append(vals[e <= e0 + tol])
    values = np.concatenate(found)
    return GroundManifold(n, values, e0, float(tol), ManifoldSource.BRUTE_FORCE)


def manifold_from_states(
    model: IsingModel, states, tol: float | None = None
) -> GroundManifold:
    """Trust caller-provided ground states after checking mutual degeneracy.

    The energy spread across the supplied states must not exceed `tol`
    (default derived from their minimum energy); violations report the two
    extreme states.
    """
    model = model.resolved()
    vals = sorted(
        {s.value if isinstance(s, SpinConfig) else int(s) for s in states}
    )
    if not vals:
        raise ArgumentError("empty state list")
    if vals[-1] >= (1 << model.num_spins):
        raise ArgumentError(f"state {vals[-1]} out of range for {model.num_spins} spins")
    values = np.asarray(vals, dtype=np.uint64)
    energies = model.energy_table(values)
    e0 = float(energies.min())
    if tol is None:
        tol = default_tol(e0)
    spread = float(energies.max() - energies.min())
    if spread > tol:
        lo = SpinConfig(model.num_spins, int(values[int(energies.argmin())]))
        hi = SpinConfig(model.num_spins, int(values[int(energies.argmax())]))
        raise ArgumentError(
            f"states are not mutually degenerate within tol={tol:g}: "
            f"{lo.bits()} at {energies.min():.12g} vs {hi.bits()} at {energies.max():.12g}"
        )
    return GroundManifold(model.num_spins, values, e0, float(tol), ManifoldSource.PROVIDED)


def excited_energy(model: IsingModel, state, manifold: GroundManifold) -> float | None:
    """Energy of `state`, or None when it lies in the manifold."""
    v = state.value if isinstance(state, SpinConfig) else int(state)
    if v in manifold:
        return None
    return model.energy(v)
