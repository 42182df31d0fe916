"""Predict and explain unfair ground-state sampling in transverse-field annealing.

Pipeline: enumerate the degenerate ground manifold of a classical Ising
model, build the perturbative solution graph induced by the driver (first
order if any single flip connects ground states, otherwise second order
through excited intermediates), and turn component spectra into sampling
probabilities that can be checked against exact quasi-static and
Schrodinger-evolution oracles.
"""

from __future__ import annotations

from . import (
    bits,
    driver,
    errors,
    fixtures,
    groundset,
    metrics,
    model,
    oracle,
    perturb,
    transforms,
)
from .driver import Driver, shorthand, transverse_field, transverse_field_plus_pairs
from .errors import (
    ArgumentError,
    CapacityError,
    DegenerateIntermediateError,
    EmbeddingError,
    NumericalError,
    OrderConflictError,
    SchemaError,
    SolgraphError,
    UnboundParameterError,
    UnsupportedTransformError,
)
from .groundset import GroundManifold, enumerate_ground_states, manifold_from_states
from .metrics import (
    FairnessReport,
    energy_flatness,
    predicted_probabilities,
    rank_concordant,
    snap_ties,
    spectral_bounds_check,
    tv_distance,
)
from .model import IsingModel, SpinConfig, from_binary_polynomial
from .oracle import OracleResult, adiabatic, cross_validate, quasistatic
from .perturb import Order, SolutionGraph, resolve
from .transforms import Embedding, eltip, embed

__version__ = "0.1.0"


def analyze(
    ising: IsingModel,
    drv: Driver,
    bindings: dict[str, float] | None = None,
    manifold: GroundManifold | None = None,
) -> FairnessReport:
    """End-to-end analysis: manifold -> solution graph -> fairness report."""
    resolved = ising.substitute(bindings or {})
    if manifold is None:
        manifold = enumerate_ground_states(resolved)
    graph = resolve(resolved, manifold, drv)
    return predicted_probabilities(graph)


__all__ = [
    "ArgumentError",
    "CapacityError",
    "DegenerateIntermediateError",
    "Driver",
    "FairnessReport",
    "GroundManifold",
    "IsingModel",
    "NumericalError",
    "OracleResult",
    "Order",
    "OrderConflictError",
    "SchemaError",
    "SolgraphError",
    "SolutionGraph",
    "SpinConfig",
    "UnboundParameterError",
    "UnsupportedTransformError",
    "adiabatic",
    "analyze",
    "cross_validate",
    "eltip",
    "embed",
    "Embedding",
    "EmbeddingError",
    "energy_flatness",
    "enumerate_ground_states",
    "fixtures",
    "from_binary_polynomial",
    "manifold_from_states",
    "predicted_probabilities",
    "quasistatic",
    "rank_concordant",
    "resolve",
    "shorthand",
    "snap_ties",
    "spectral_bounds_check",
    "transverse_field",
    "transverse_field_plus_pairs",
    "tv_distance",
]
