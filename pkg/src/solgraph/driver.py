"""Stoquastic off-diagonal driver terms: products of sigma^x on spin subsets.

A driver V = sum_t c_t * prod_{i in mask_t} sigma^x_i with every c_t <= 0
(stoquastic in the computational basis).  Each term flips the spins in its
mask, so <s|V|t> = c_t exactly when s XOR t = mask_t.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import SchemaError
from .model import SpinConfig


@dataclass(frozen=True)
class Driver:
    """Immutable driver; xterms sorted by flip mask, coefficients strictly < 0."""

    num_spins: int
    xterms: tuple[tuple[int, float], ...]  # (mask, coeff)

    @classmethod
    def build(cls, num_spins: int, xterms: Iterable[tuple[int, float]]) -> "Driver":
        if not isinstance(num_spins, int) or num_spins < 1:
            raise SchemaError(f"num_spins must be a positive integer, got {num_spins!r}")
        merged: dict[int, float] = {}
        for mask, coeff in xterms:
            mask = int(mask)
            coeff = float(coeff)
            if mask <= 0 or mask >= (1 << num_spins):
                raise SchemaError(f"driver mask {mask:#x} out of range (need >=1 set bit)")
            if coeff > 0:
                raise SchemaError(f"driver coefficient {coeff} > 0 breaks stoquasticity")
            merged[mask] = merged.get(mask, 0.0) + coeff
        clean = {m: c for m, c in merged.items() if c != 0.0}
        if not clean:
            raise SchemaError("driver has no nonzero terms")
        return cls(num_spins, tuple(sorted(clean.items())))

    @classmethod
    def from_spin_terms(cls, num_spins: int, terms: Iterable[tuple[Sequence[int], float]]) -> "Driver":
        return cls.build(num_spins, [(value_from_spins_indices(s), c) for s, c in terms])

    # ------------------------------------------------------------------ access

    def matrix_element(self, s: SpinConfig | int, t: SpinConfig | int) -> float:
        sv = s.value if isinstance(s, SpinConfig) else int(s)
        tv = t.value if isinstance(t, SpinConfig) else int(t)
        mask = sv ^ tv
        for m, c in self.xterms:
            if m == mask:
                return c
        return 0.0

    def neighbors(self, s: SpinConfig | int) -> list[tuple[int, float]]:
        """(state value, coefficient) reachable by one driver term, mask order."""
        sv = s.value if isinstance(s, SpinConfig) else int(s)
        return [(sv ^ m, c) for m, c in self.xterms]

    # ------------------------------------------------------------------ json

    def to_dict(self) -> dict:
        return {
            "num_spins": self.num_spins,
            "xterms": [
                {"spins": [i for i in range(self.num_spins) if (m >> i) & 1], "coeff": c}
                for m, c in self.xterms
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Driver":
        try:
            num_spins = d["num_spins"]
            raw = d["xterms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"driver file missing field: {exc}") from None
        if not isinstance(raw, list):
            raise SchemaError("'xterms' must be a list")
        xterms = []
        for t in raw:
            try:
                spins = [int(i) for i in t["spins"]]
                coeff = float(t["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"bad xterm entry {t!r}: {exc}") from None
            if len(set(spins)) != len(spins):
                raise SchemaError(f"xterm {spins} repeats a spin index")
            if spins and not (0 <= min(spins) and max(spins) < num_spins):
                raise SchemaError(f"xterm {spins} out of range for {num_spins} spins")
            mask = 0
            for i in spins:
                mask |= 1 << i
            xterms.append((mask, coeff))
        return cls.build(num_spins, xterms)

    @classmethod
    def from_json(cls, text: str) -> "Driver":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "Driver":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(json.dumps(self.to_dict(), indent=2) + "\n")


def value_from_spins_indices(spins: Sequence[int]) -> int:
    mask = 0
    for i in spins:
        mask |= 1 << int(i)
    return mask


def transverse_field(num_spins: int, strength: float = 1.0) -> Driver:
    """V = -strength * sum_i sigma^x_i."""
    return Driver.build(num_spins, [(1 << i, -abs(strength)) for i in range(num_spins)])


def transverse_field_plus_pairs(num_spins: int, strength: float = 1.0) -> Driver:
    """Transverse field plus -strength * sigma^x_i sigma^x_j for every pair."""
    terms = [(1 << i, -abs(strength)) for i in range(num_spins)]
    terms += [
        ((1 << i) | (1 << j), -abs(strength))
        for i, j in combinations(range(num_spins), 2)
    ]
    return Driver.build(num_spins, terms)


def shorthand(name: str, num_spins: int) -> Driver:
    """CLI driver shorthand: 'tf' or 'tf+pairs'."""
    if name == "tf":
        return transverse_field(num_spins)
    if name == "tf+pairs":
        return transverse_field_plus_pairs(num_spins)
    raise SchemaError(f"unknown driver shorthand {name!r} (expected 'tf' or 'tf+pairs')")
