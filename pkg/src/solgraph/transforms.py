"""Model transformations that reshape the solution graph.

Two transformations:

* minor embedding: each logical spin becomes a chain of physical qubits
  bound by ferromagnetic couplings of strength J_F, with logical couplings
  routed to assigned physical edges and fields split across the chain.
* field/interaction exchange: swap one spin's local field with its
  incident coupling coefficients (defined only when those are all equal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    ArgumentError,
    EmbeddingError,
    UnsupportedTransformError,
)
from .model import Coeff, IsingModel, ParamRef

FIELD_SPLIT_TOL = 1e-12


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class Embedding:
    """Logical-to-physical layout: chains, chain edges, coupling routes.

    chains: logical spin -> ordered physical qubits (disjoint, union covers
    0..P-1 exactly); chain_edges: per multi-qubit chain, physical edges
    forming a connected cover of the chain; assignment: logical edge ->
    one physical edge with endpoints in the two chains; field_split: per
    logical spin, weights over its chain summing to 1 (default: all weight
    on the first qubit).
    """

    chains: dict[int, tuple[int, ...]]
    chain_edges: dict[int, tuple[tuple[int, int], ...]]
    assignment: dict[tuple[int, int], tuple[int, int]]
    field_split: dict[int, tuple[float, ...]] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        chains: dict[int, list[int]],
        chain_edges: dict[int, list[tuple[int, int]]] | None = None,
        assignment: dict[tuple[int, int], tuple[int, int]] | None = None,
        field_split: dict[int, list[float]] | None = None,
    ) -> "Embedding":
        if not chains:
            raise EmbeddingError("embedding has no chains")
        norm_chains: dict[int, tuple[int, ...]] = {}
        seen: set[int] = set()
        for logical, qubits in chains.items():
            logical = int(logical)
            qubits = tuple(int(q) for q in qubits)
            if not qubits:
                raise EmbeddingError(f"chain for logical spin {logical} is empty")
            if len(set(qubits)) != len(qubits):
                raise EmbeddingError(f"chain for logical spin {logical} repeats a qubit")
            overlap = seen.intersection(qubits)
            if overlap:
                raise EmbeddingError(
                    f"physical qubit {min(overlap)} appears in more than one chain"
                )
            seen.update(qubits)
            norm_chains[logical] = qubits
        p = len(seen)
        if seen != set(range(p)):
            raise EmbeddingError(
                f"physical qubits must be contiguous 0..{p - 1}, got {sorted(seen)}"
            )

        norm_edges: dict[int, tuple[tuple[int, int], ...]] = {}
        chain_edges = chain_edges or {}
        for logical, qubits in norm_chains.items():
            edges = [
                _edge_key(int(a), int(b)) for a, b in chain_edges.get(logical, [])
            ]
            if len(qubits) == 1:
                if edges:
                    raise EmbeddingError(
                        f"singleton chain {logical} must not declare chain edges"
                    )
                norm_edges[logical] = ()
                continue
            qubit_set = set(qubits)
            for a, b in edges:
                if a == b or a not in qubit_set or b not in qubit_set:
                    raise EmbeddingError(
                        f"chain edge ({a},{b}) leaves chain {logical}"
                    )
            # connectivity: the edges must span the whole chain
            reach = {qubits[0]}
            frontier = [qubits[0]]
            adj: dict[int, list[int]] = {q: [] for q in qubits}
            for a, b in edges:
                adj[a].append(b)
                adj[b].append(a)
            while frontier:
                q = frontier.pop()
                for r in adj[q]:
                    if r not in reach:
                        reach.add(r)
                        frontier.append(r)
            if reach != qubit_set:
                raise EmbeddingError(
                    f"chain edges do not connect all qubits of chain {logical}"
                )
            norm_edges[logical] = tuple(sorted(set(edges)))

        norm_assign: dict[tuple[int, int], tuple[int, int]] = {}
        for (i, j), (a, b) in (assignment or {}).items():
            i, j = int(i), int(j)
            a, b = int(a), int(b)
            key = _edge_key(i, j)
            if i == j:
                raise EmbeddingError(f"logical edge ({i},{j}) is a self-loop")
            if key[0] not in norm_chains or key[1] not in norm_chains:
                raise EmbeddingError(f"assignment references unknown logical edge {key}")
            lo, hi = key
            if (i, j) != key:
                a, b = b, a
            if a not in norm_chains[lo] or b not in norm_chains[hi]:
                raise EmbeddingError(
                    f"assignment for logical edge {key} uses qubits outside its chains"
                )
            norm_assign[key] = (a, b)

        norm_split: dict[int, tuple[float, ...]] = {}
        for logical, weights in (field_split or {}).items():
            logical = int(logical)
            if logical not in norm_chains:
                raise EmbeddingError(f"field_split references unknown logical spin {logical}")
            weights = tuple(float(w) for w in weights)
            if len(weights) != len(norm_chains[logical]):
                raise EmbeddingError(
                    f"field_split for logical spin {logical} has wrong length"
                )
            if abs(sum(weights) - 1.0) > FIELD_SPLIT_TOL:
                raise EmbeddingError(
                    f"field_split for logical spin {logical} must sum to 1"
                )
            norm_split[logical] = weights
        return cls(norm_chains, norm_edges, norm_assign, norm_split)

    # ---- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        d: dict = {
            "chains": {str(k): list(v) for k, v in sorted(self.chains.items())},
            "chain_edges": {
                str(k): [list(e) for e in v]
                for k, v in sorted(self.chain_edges.items())
                if v
            },
            "assignment": {
                f"{i},{j}": list(e) for (i, j), e in sorted(self.assignment.items())
            },
        }
        if self.field_split:
            d["field_split"] = {
                str(k): list(v) for k, v in sorted(self.field_split.items())
            }
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Embedding":
        if not isinstance(data, dict) or "chains" not in data:
            raise EmbeddingError("embedding file must be an object with a 'chains' map")
        try:
            chains = {int(k): list(v) for k, v in data["chains"].items()}
            chain_edges = {
                int(k): [tuple(e) for e in v]
                for k, v in data.get("chain_edges", {}).items()
            }
            assignment = {}
            for key, edge in data.get("assignment", {}).items():
                i, j = (int(x) for x in str(key).split(","))
                assignment[(i, j)] = tuple(edge)
            field_split = {
                int(k): list(v) for k, v in data.get("field_split", {}).items()
            }
        except (TypeError, ValueError, AttributeError) as exc:
            raise EmbeddingError(f"malformed embedding file: {exc}") from exc
        return cls.build(chains, chain_edges, assignment, field_split)

    @classmethod
    def from_json(cls, text: str) -> "Embedding":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise EmbeddingError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "Embedding":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    # ---- state mapping ------------------------------------------------
    @property
    def num_physical(self) -> int:
        return sum(len(c) for c in self.chains.values())

    def extend_value(self, logical_value: int) -> int:
        """Physical configuration with every chain copying its logical bit."""
        phys = 0
        for logical, qubits in self.chains.items():
            if (int(logical_value) >> logical) & 1:
                for q in qubits:
                    phys |= 1 << q
        return phys

    def chain_intact(self, physical_value: int) -> bool:
        """True when every chain's qubits agree."""
        v = int(physical_value)
        for qubits in self.chains.values():
            bits = {(v >> q) & 1 for q in qubits}
            if len(bits) > 1:
                return False
        return True

    def logical_value(self, physical_value: int) -> int:
        """Collapse an intact physical configuration back to logical bits."""
        if not self.chain_intact(physical_value):
            raise ArgumentError(
                f"physical configuration {physical_value} has a broken chain"
            )
        v = int(physical_value)
        out = 0
        for logical, qubits in self.chains.items():
            if (v >> qubits[0]) & 1:
                out |= 1 << logical
        return out


def embed(model: IsingModel, emb: Embedding, j_f: float | None) -> IsingModel:
    """Physical model: routed couplings, split fields, and -J_F chain bonds.

    A ferromagnetic chain bond contributes -J_F per chain edge, so every
    intact configuration's physical energy is its logical energy shifted
    by the constant -J_F * (total chain edges).  Pass j_f=None to emit a
    template with chain couplings "-$J_F" instead of a number.
    """
    model = model.resolved()
    if j_f is not None and j_f <= 0:
        raise ArgumentError(f"chain strength must be positive, got {j_f}")
    chain_coeff: Coeff = -float(j_f) if j_f is not None else ParamRef("J_F", -1)
    terms: list[tuple[tuple[int, ...], Coeff]] = []
    for spins, coeff in model.terms:
        if len(spins) > 2:
            raise ArgumentError(
                f"embedding requires an at-most-quadratic model; term {spins} "
                f"has order {len(spins)}"
            )
        if len(spins) == 1:
            (i,) = spins
            if i not in emb.chains:
                raise EmbeddingError(f"no chain for logical spin {i}")
            qubits = emb.chains[i]
            weights = emb.field_split.get(i)
            if weights is None:
                weights = (1.0,) + (0.0,) * (len(qubits) - 1)
            for q, w in zip(qubits, weights):
                if w != 0.0:
                    terms.append(((q,), w * coeff))
        else:
            i, j = spins
            for k in (i, j):
                if k not in emb.chains:
                    raise EmbeddingError(f"no chain for logical spin {k}")
            edge = emb.assignment.get(_edge_key(i, j))
            if edge is None:
                raise EmbeddingError(
                    f"embedding assigns no physical edge to logical coupling ({i},{j})"
                )
            terms.append((tuple(sorted(edge)), coeff))
    for edges in emb.chain_edges.values():
        for a, b in edges:
            terms.append(((a, b), chain_coeff))
    return IsingModel.build(
        num_spins=emb.num_physical, terms=terms, offset=model.offset
    )


def eltip(model: IsingModel, k: int) -> IsingModel:
    """Exchange spin k's local field with its incident coupling coefficients.

    Requires an at-most-quadratic model in which spin k carries a field
    term and at least one coupling, with all incident couplings equal;
    the couplings take the old field value and the field takes the old
    common coupling value.  When the field equals the couplings the
    transform is an involution.
    """
    model = model.resolved()
    if not 0 <= k < model.num_spins:
        raise ArgumentError(
            f"spin index {k} out of range for {model.num_spins} spins"
        )
    h_k = None
    incident: list[float] = []
    for spins, coeff in model.terms:
        if len(spins) > 2:
            raise ArgumentError(
                f"field/interaction exchange requires an at-most-quadratic model; "
                f"term {spins} has order {len(spins)}"
            )
        if spins == (k,):
            h_k = coeff
        elif len(spins) == 2 and k in spins:
            incident.append(coeff)
    if h_k is None:
        raise UnsupportedTransformError(
            f"spin {k} has no local-field term; the exchange is undefined"
        )
    if not incident:
        raise UnsupportedTransformError(
            f"spin {k} has no incident couplings; the exchange is undefined"
        )
    common = incident[0]
    if any(c != common for c in incident):
        raise UnsupportedTransformError(
            f"incident couplings on spin {k} are not all equal "
            f"({sorted(set(incident))}); the exchange rule covers only the "
            f"equal-coupling case"
        )
    terms: list[tuple[tuple[int, ...], Coeff]] = []
    for spins, coeff in model.terms:
        if spins == (k,):
            terms.append((spins, common))
        elif len(spins) == 2 and k in spins:
            terms.append((spins, h_k))
        else:
            terms.append((spins, coeff))
    return IsingModel.build(
        num_spins=model.num_spins, terms=terms, offset=model.offset
    )
