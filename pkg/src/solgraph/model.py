"""Diagonal Ising cost models over +/-1 spins.

A model is a sum of products of sigma^z operators:

    H0 = sum_t  c_t * prod_{i in spins_t} sigma_i   (+ offset)

Terms are stored verbatim with whatever signs they carry; no sign convention
is baked in.  Coefficients are either real numbers or references to a named
parameter ("$name" / "-$name" in files), resolved by `substitute`.

Spin configurations are packed into integers: bit i is spin i, set = up (+1).
States are totally ordered by that unsigned value.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .bits import products, spins_from_value, value_from_spins
from .errors import SchemaError, UnboundParameterError


@dataclass(frozen=True, order=True)
class SpinConfig:
    """One classical configuration of `num_spins` +/-1 spins."""

    num_spins: int
    value: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.num_spins):
            raise ValueError(f"value {self.value} out of range for {self.num_spins} spins")

    @classmethod
    def from_string(cls, s: str) -> "SpinConfig":
        """Parse '110', '↑↑↓' or '++-' (spin 0 is the leftmost character)."""
        up = {"1": 1, "↑": 1, "+": 1, "0": 0, "↓": 0, "-": 0}
        try:
            bits = [up[ch] for ch in s]
        except KeyError as exc:
            raise ValueError(f"bad spin character {exc} in {s!r}") from None
        return cls(len(bits), value_from_spins(bits))

    @classmethod
    def from_spins(cls, spins: Sequence[int]) -> "SpinConfig":
        return cls(len(spins), value_from_spins(spins))

    def spins(self) -> tuple[int, ...]:
        return spins_from_value(self.value, self.num_spins)

    def spin(self, i: int) -> int:
        return 1 if (self.value >> i) & 1 else -1

    def bits(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.num_spins))

    def arrows(self) -> str:
        return "".join("↑" if (self.value >> i) & 1 else "↓" for i in range(self.num_spins))

    def flipped(self, mask: int) -> "SpinConfig":
        return SpinConfig(self.num_spins, self.value ^ mask)

    def hamming(self, other: "SpinConfig") -> int:
        return bin(self.value ^ other.value).count("1")

    def __str__(self):
        return self.bits()


@dataclass(frozen=True)
class ParamRef:
    """Signed reference to a named parameter: sign * value(name)."""

    name: str
    sign: float = 1.0

    def __str__(self):
        return ("-$" if self.sign < 0 else "$") + self.name


Coeff = Union[float, ParamRef]


def _parse_coeff(raw) -> Coeff:
    if isinstance(raw, bool):
        raise SchemaError("coefficient must be a number or parameter reference")
    if isinstance(raw, (int, float)):
        if not math.isfinite(raw):
            raise SchemaError(f"coefficient {raw} is not finite")
        return float(raw)
    if isinstance(raw, str):
        sign, body = 1.0, raw
        if body.startswith("-"):
            sign, body = -1.0, body[1:]
        if body.startswith("$") and len(body) > 1:
            return ParamRef(body[1:], sign)
        raise SchemaError(f"bad coefficient string {raw!r} (expected '$name' or '-$name')")
    raise SchemaError(f"bad coefficient {raw!r}")


@dataclass(frozen=True)
class IsingModel:
    """Immutable diagonal cost model.

    terms: tuple of (spins, coeff); spins sorted, unique per term, no two
    terms share a support, exact-zero coefficients dropped.
    """

    num_spins: int
    terms: tuple[tuple[tuple[int, ...], Coeff], ...]
    offset: float = 0.0
    params: Mapping[str, float] | None = None

    @classmethod
    def build(
        cls,
        num_spins: int,
        terms: Iterable[tuple[Sequence[int], Coeff]],
        offset: float = 0.0,
        params: Mapping[str, float] | None = None,
    ) -> "IsingModel":
        """Validate, merge same-support terms, fold constants into the offset."""
        if not isinstance(num_spins, int) or num_spins < 1:
            raise SchemaError(f"num_spins must be a positive integer, got {num_spins!r}")
        merged: dict[tuple[int, ...], Coeff] = {}
        offset = float(offset)
        for spins, coeff in terms:
            spins = tuple(sorted(int(i) for i in spins))
            if len(set(spins)) != len(spins):
                raise SchemaError(f"term {spins} repeats a spin index")
            if spins and not (0 <= spins[0] and spins[-1] < num_spins):
                raise SchemaError(f"term {spins} out of range for {num_spins} spins")
            if not isinstance(coeff, ParamRef):
                coeff = _parse_coeff(coeff)
            if not spins:
                if isinstance(coeff, ParamRef):
                    raise SchemaError("constant terms must be numeric (fold into offset)")
                offset += coeff
                continue
            if spins in merged:
                old = merged[spins]
                if isinstance(old, ParamRef) or isinstance(coeff, ParamRef):
                    raise SchemaError(
                        f"cannot merge parameterized terms sharing support {spins}"
                    )
                merged[spins] = old + coeff
            else:
                merged[spins] = coeff
        clean = {
            s: c
            for s, c in merged.items()
            if isinstance(c, ParamRef) or c != 0.0
        }
        if params is not None:
            params = {str(k): float(v) for k, v in params.items()}
        return cls(
            num_spins=num_spins,
            terms=tuple(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))),
            offset=offset,
            params=params,
        )

    # ------------------------------------------------------------------ params

    def parameter_names(self) -> set[str]:
        return {c.name for _, c in self.terms if isinstance(c, ParamRef)}

    def is_template(self) -> bool:
        return bool(self.parameter_names())

    def substitute(self, bindings: Mapping[str, float] | None = None) -> "IsingModel":
        """Resolve every parameter reference; bindings override stored defaults."""
        table = dict(self.params or {})
        table.update(bindings or {})
        unresolved = self.parameter_names() - set(table)
        if unresolved:
            raise UnboundParameterError(
                f"unbound parameter(s): {', '.join(sorted(unresolved))}"
            )
        terms = [
            (s, c.sign * table[c.name] if isinstance(c, ParamRef) else c)
            for s, c in self.terms
        ]
        return IsingModel.build(self.num_spins, terms, self.offset)

    def resolved(self) -> "IsingModel":
        """Parameter-free view of this model (uses stored defaults if needed)."""
        return self.substitute({}) if self.is_template() or self.params else self

    # ------------------------------------------------------------------ energy

    def _require_numeric(self):
        if self.is_template():
            raise UnboundParameterError(
                f"model has unbound parameter(s): {', '.join(sorted(self.parameter_names()))}"
            )

    def term_masks(self) -> list[tuple[int, float]]:
        self._require_numeric()
        out = []
        for spins, coeff in self.terms:
            mask = 0
            for i in spins:
                mask |= 1 << i
            out.append((mask, float(coeff)))
        return out

    def energy(self, config: SpinConfig | int) -> float:
        value = config.value if isinstance(config, SpinConfig) else int(config)
        e = self.offset
        for mask, coeff in self.term_masks():
            down = bin(mask & ~value).count("1")  # mask >= 0 keeps this finite
            e += coeff * (1 - 2 * (down & 1))
        return e

    def energy_table(self, values=None) -> np.ndarray:
        """Vectorized energies for `values` (default: all 2^N configurations)."""
        if values is None:
            values = np.arange(1 << self.num_spins, dtype=np.uint64)
        else:
            values = np.asarray(values, dtype=np.uint64)
        e = np.full(values.shape, self.offset, dtype=np.float64)
        for mask, coeff in self.term_masks():
            e += coeff * products(values, mask)
        return e

    # ------------------------------------------------------------------ json

    def to_dict(self) -> dict:
        d = {
            "num_spins": self.num_spins,
            "terms": [
                {"spins": list(s), "coeff": str(c) if isinstance(c, ParamRef) else c}
                for s, c in self.terms
            ],
            "offset": self.offset,
        }
        if self.params:
            d["params"] = dict(self.params)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "IsingModel":
        try:
            num_spins = d["num_spins"]
            raw_terms = d["terms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"model file missing field: {exc}") from None
        if not isinstance(raw_terms, list):
            raise SchemaError("'terms' must be a list")
        terms = []
        for t in raw_terms:
            try:
                terms.append((t["spins"], _parse_coeff(t["coeff"])))
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"bad term entry {t!r}: {exc}") from None
        return cls.build(
            num_spins,
            terms,
            offset=d.get("offset", 0.0),
            params=d.get("params"),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "IsingModel":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "IsingModel":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")

    # ------------------------------------------------------------------ misc

    def scaled(self, factor: float) -> "IsingModel":
        self._require_numeric()
        return IsingModel.build(
            self.num_spins,
            [(s, factor * c) for s, c in self.terms],
            factor * self.offset,
        )

    def coupling(self, i: int, j: int) -> float:
        """Coefficient of the (i, j) pair term (0.0 if absent)."""
        key = tuple(sorted((i, j)))
        for s, c in self.terms:
            if s == key:
                self._require_numeric()
                return float(c)
        return 0.0

    def field(self, i: int) -> float:
        """Coefficient of the sigma_i term (0.0 if absent)."""
        for s, c in self.terms:
            if s == (i,):
                self._require_numeric()
                return float(c)
        return 0.0


def from_binary_polynomial(
    num_vars: int,
    terms: Iterable[tuple[Sequence[int], float]],
    constant: float = 0.0,
) -> IsingModel:
    """Convert a polynomial over binary x_i in {0,1} to spins via x = (1+s)/2.

    Expansion is exact: products of (1+s_i)/2 yield dyadic coefficients, so
    energies are preserved to the last bit for integer-coefficient inputs.
    """
    acc: dict[tuple[int, ...], Fraction] = {}
    const = Fraction(constant).limit_denominator(1 << 40) if constant else Fraction(0)
    for spins, coeff in terms:
        spins = tuple(sorted(set(int(i) for i in spins)))
        c = Fraction(coeff).limit_denominator(1 << 40)
        scale = Fraction(1, 2 ** len(spins))
        for r in range(len(spins) + 1):
            for sub in combinations(spins, r):
                if sub:
                    acc[sub] = acc.get(sub, Fraction(0)) + c * scale
                else:
                    const += c * scale
    out = [(s, float(c)) for s, c in acc.items()]
    return IsingModel.build(num_vars, out, offset=float(const))
