#!/usr/bin/env python3
"""Pin the five-spin six-state fixture by exhaustive integer-grid search.

The fixture contract: a five-spin Ising model with integer coefficients
(|h|, |J| <= 2) whose ground manifold is exactly the six states

    {00000, 11000, 00110, 11001, 00111, 11111}

written MSB-last (bit i = spin i, LSB first), i.e. the values

    {0, 3, 12, 19, 28, 31}.

Under a pure transverse field the solution graph of that manifold is two
isolated nodes (0, 31) plus the two single-flip edges (3, 19) and
(12, 28) — that shape follows from the manifold alone, for any
coefficients that realize it.

Search space
------------
All integer models with |h| <= 2 and |J| <= 2.  Two exact reductions cut
the grid with no loss of solutions (derivations in comments below):

  R1. Fields must follow the pattern h = (a, -a, b, -b, 0).
  R2. With Q = J02+J03+J12+J13, R = J04+J14, T = J24+J34, equal energies
      across the six target states force R = T = -Q.

Everything surviving R1/R2 is enumerated brute force and kept when the 26
non-target states all sit strictly above the target energy.

Classification
--------------
Each hit is classified on the properties the downstream test suite needs:

  sym      invariant under the spin relabeling (0 2)(1 3) or (0 3)(1 2).
           Either involution maps the two 2-state components onto each
           other, which keeps their quasi-degenerate doublets exactly
           tied at every order of the small-coupling expansion.  Without
           it the tie breaks at second order and the four edge states
           would not approach probability 1/4 in the exact spectrum.
  tie      the two states inside each 2-state component have exactly
           equal second-order diagonal sums (exact rational arithmetic),
           so within-component probabilities deviate from 1/2 only at
           second order in the coupling.
  emb      duplicating the lone single-flip spin (spin 4) into a 2-qubit
           chain yields a physical model whose ground states are exactly
           the chain-extended images of the six logical states at chain
           strengths 0.5, 1.0 and 1.5, with all pairwise Hamming
           distances >= 2 (second-order analysis applies).
  xchg     per spin k: the field/interaction exchange applies (field term
           present, all incident couplings equal) — reported with the
           component sizes of the transformed model's transverse-field
           solution graph.

The canonical winner is the lexicographically smallest coefficient tuple
(ordered by field/coupling vector, fewest nonzero couplings first) among
hits with sym AND tie AND emb.  Its constants are committed in
``solgraph.fixtures``; ``verify_pinned()`` re-checks every predicate for
the committed constants and is exercised by the test suite.

Exchange-shape survey
---------------------
The run also reports every (hit, spin) pair where the exchange applies
and the resulting component shape.  Over the full grid the transformed
graph always splits as two 3-node paths; no integer fixture in this grid
produces a 2-node + 4-node split, and no exchange-eligible hit has the
exact tie.  The suite therefore records the exchange criteria as a
documented deviation rather than asserting an unattainable shape.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from solgraph.driver import transverse_field
from solgraph.errors import UnsupportedTransformError
from solgraph.groundset import enumerate_ground_states
from solgraph.model import IsingModel
from solgraph.perturb import Order, resolve
from solgraph.transforms import Embedding, eltip, embed

N = 5
TARGET = (0, 3, 12, 19, 28, 31)
TARGET_SET = frozenset(TARGET)
EDGE_A = (3, 19)   # 2-state component: flip spin 4
EDGE_B = (12, 28)  # the other 2-state component
GRID = range(-2, 3)

COUPLING_ORDER = ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4),
                  (2, 3), (2, 4), (3, 4))

# R1 derivation.  States 3 and 19 differ only in spin 4, as do 12 and 28:
#   E(19)-E(3)  = 2*[h4 + J04 + J14 - J24 - J34] = 0
#   E(28)-E(12) = 2*[h4 - J04 - J14 + J24 + J34] = 0
# Adding the two forces h4 = 0.  With h4 = 0, subtracting gives
# J04 + J14 = J24 + J34 (part of R2).  All six targets have spin 0 = spin 1
# and spin 2 = spin 3, so grouping the cross couplings as Q, R, T above:
#   E = J01 + J23 + Q*x + R*y + T*x*y + h-part,   x = s0*s2, y = s0*s4.
# The six targets cover (x, y) in {(+,+), (-,+), (-,-)}; equality forces
# R = T = -Q (R2), after which E(3)-E(0) = 2*(h0+h1) = 0 and
# E(12)-E(0) = 2*(h2+h3) = 0 give the field pattern (R1).

_SPINS = np.array([[1 if (v >> i) & 1 else -1 for i in range(N)]
                   for v in range(32)], dtype=np.int64)
_NONTARGET = np.array([v for v in range(32) if v not in TARGET_SET])


def search_hits() -> list[dict]:
    """Exhaustive scan; returns coefficient dicts for every exact-manifold model."""
    s = _SPINS
    col_a = s[:, 0] - s[:, 1]
    col_b = s[:, 2] - s[:, 3]
    cols = {
        (0, 1): s[:, 0] * s[:, 1], (2, 3): s[:, 2] * s[:, 3],
        (0, 2): s[:, 0] * s[:, 2], (0, 3): s[:, 0] * s[:, 3],
        (1, 2): s[:, 1] * s[:, 2], (1, 3): s[:, 1] * s[:, 3],
        (0, 4): s[:, 0] * s[:, 4], (1, 4): s[:, 1] * s[:, 4],
        (2, 4): s[:, 2] * s[:, 4], (3, 4): s[:, 3] * s[:, 4],
    }
    # Inner grid over (a, b, J01, J23), vectorized as a 625-row block.
    inner = np.array(list(product(GRID, repeat=4)), dtype=np.int64)
    inner_E = (inner[:, 0:1] * col_a[None, :] + inner[:, 1:2] * col_b[None, :]
               + inner[:, 2:3] * cols[(0, 1)][None, :] + inner[:, 3:4] * cols[(2, 3)][None, :])
    nt = _NONTARGET
    hits: list[dict] = []
    for e02, e03, e12, e13 in product(GRID, repeat=4):
        q = e02 + e03 + e12 + e13
        if abs(q) > 4:
            continue  # J04 + J14 = -q unreachable with |J| <= 2
        cross = (e02 * cols[(0, 2)] + e03 * cols[(0, 3)]
                 + e12 * cols[(1, 2)] + e13 * cols[(1, 3)])
        for e04 in GRID:
            e14 = -q - e04
            if abs(e14) > 2:
                continue
            for e24 in GRID:
                e34 = -q - e24
                if abs(e34) > 2:
                    continue
                base = (cross + e04 * cols[(0, 4)] + e14 * cols[(1, 4)]
                        + e24 * cols[(2, 4)] + e34 * cols[(3, 4)])
                table = inner_E + base[None, :]
                e0 = table[:, TARGET[0]]
                ok = table[:, nt].min(axis=1) > e0  # targets tie by construction
                for row in np.nonzero(ok)[0]:
                    a, b, j01, j23 = (int(x) for x in inner[row])
                    hits.append({
                        "h": (a, -a, b, -b, 0),
                        "J": {(0, 1): j01, (2, 3): j23, (0, 2): e02, (0, 3): e03,
                              (1, 2): e12, (1, 3): e13, (0, 4): e04, (1, 4): e14,
                              (2, 4): e24, (3, 4): e34},
                    })
    return hits


def build_model(hit: dict) -> IsingModel:
    terms = []
    for (i, j), c in sorted(hit["J"].items()):
        if c != 0:
            terms.append(((i, j), float(c)))
    for i, c in enumerate(hit["h"]):
        if c != 0:
            terms.append(((i,), float(c)))
    return IsingModel.build(N, terms)


def coeff_tuple(hit: dict) -> tuple:
    return tuple(hit["h"][:4:2]) + tuple(hit["J"][ij] for ij in COUPLING_ORDER)


# ---------------------------------------------------------------- predicates

def manifold_exact(model: IsingModel) -> bool:
    return tuple(int(v) for v in enumerate_ground_states(model).values) == TARGET


_INVOLUTIONS = ({0: 2, 1: 3, 2: 0, 3: 1, 4: 4}, {0: 3, 1: 2, 2: 1, 3: 0, 4: 4})


def _permute_value(v: int, perm: dict[int, int]) -> int:
    return sum(((v >> i) & 1) << perm[i] for i in range(N))


def symmetric(model: IsingModel) -> bool:
    """True if the energy table is invariant under either pair-swap relabeling."""
    table = model.energy_table()
    return any(
        all(table[v] == table[_permute_value(v, perm)] for v in range(32))
        for perm in _INVOLUTIONS
    )


def second_order_diag(hit: dict, g: int) -> Fraction:
    """Sum over single-flip excited states of 1/gap, in exact rationals."""
    def energy(v: int) -> int:
        e = 0
        for (i, j), c in hit["J"].items():
            e += c * (1 if ((v >> i) & 1) == ((v >> j) & 1) else -1)
        for i, c in enumerate(hit["h"]):
            e += c * (1 if (v >> i) & 1 else -1)
        return e

    e0 = energy(TARGET[0])
    total = Fraction(0)
    for i in range(N):
        m = g ^ (1 << i)
        if m in TARGET_SET:
            continue
        total += Fraction(1, energy(m) - e0)
    return total


def quarter_tie_exact(hit: dict) -> bool:
    """Within each 2-state component, equal second-order diagonals (exact)."""
    return (second_order_diag(hit, EDGE_A[0]) == second_order_diag(hit, EDGE_A[1])
            and second_order_diag(hit, EDGE_B[0]) == second_order_diag(hit, EDGE_B[1]))


def chain_embedding(model: IsingModel) -> Embedding:
    """Duplicate spin 4 (the lone single-flip spin) into the chain [4, 5]."""
    chains = {i: (i,) for i in range(4)}
    chains[4] = (4, 5)
    assignment = {}
    for (i, j), _ in model_couplings(model):
        assignment[(i, j)] = (i, j)  # all couplings land on the first chain qubit
    return Embedding.build(chains=chains, chain_edges={4: ((4, 5),)},
                           assignment=assignment)


def model_couplings(model: IsingModel):
    for spins, coeff in model.terms:
        if len(spins) == 2:
            yield tuple(spins), coeff


def embedding_ok(model: IsingModel) -> bool:
    emb = chain_embedding(model)
    extended = sorted(emb.extend_value(v) for v in TARGET)
    for j_f in (0.5, 1.0, 1.5):
        phys = embed(model, emb, j_f)
        manifold = enumerate_ground_states(phys)
        if [int(v) for v in manifold.values] != extended:
            return False
        graph = resolve(phys, manifold, transverse_field(6))
        if graph.order is not Order.SECOND:
            return False
    return True


def exchange_survey(model: IsingModel) -> list[tuple[int, tuple[int, ...]]]:
    """(spin, sorted component sizes) for every spin where the exchange applies."""
    out = []
    for k in range(N):
        try:
            transformed = eltip(model, k)
        except UnsupportedTransformError:
            continue
        manifold = enumerate_ground_states(transformed)
        graph = resolve(transformed, manifold, transverse_field(N))
        sizes = tuple(sorted(len(c) for c in graph.components))
        out.append((k, sizes))
    return out


# ---------------------------------------------------------------- reporting

def classify(hits: list[dict]) -> list[dict]:
    rows = []
    for hit in hits:
        model = build_model(hit)
        assert manifold_exact(model), f"scan/groundset disagree on {hit}"
        row = dict(hit)
        row["tuple"] = coeff_tuple(hit)
        row["nonzero_J"] = sum(1 for c in hit["J"].values() if c != 0)
        row["sym"] = symmetric(model)
        row["tie"] = quarter_tie_exact(hit)
        row["xchg"] = exchange_survey(model)
        rows.append(row)
    return rows


def canonical_key(row: dict) -> tuple:
    return (row["nonzero_J"], row["tuple"])


def pick_winner(rows: list[dict]) -> dict:
    finalists = [r for r in rows if r["sym"] and r["tie"]]
    finalists = [r for r in finalists if embedding_ok(build_model(r))]
    if not finalists:
        raise SystemExit("no hit satisfies sym AND tie AND emb")
    return min(finalists, key=canonical_key)


def verify_pinned() -> dict:
    """Re-check every predicate for the committed fixture constants.

    Returns the classification row; raises AssertionError on any failure.
    Used by the test suite so the full grid scan never needs re-running.
    """
    from solgraph import fixtures

    model = fixtures.six_state_model()
    hit = {
        "h": tuple(int(model.field(i)) for i in range(N)),
        "J": {ij: int(model.coupling(*ij)) for ij in COUPLING_ORDER},
    }
    assert all(abs(c) <= 2 for c in hit["h"]), "field out of search grid"
    assert all(abs(c) <= 2 for c in hit["J"].values()), "coupling out of search grid"
    assert hit["h"][4] == 0 and hit["h"][1] == -hit["h"][0] and hit["h"][3] == -hit["h"][2]
    assert manifold_exact(model), "ground manifold is not the six target states"
    assert symmetric(model), "missing the component-swapping relabeling symmetry"
    assert quarter_tie_exact(hit), "second-order diagonals not tied within components"
    assert embedding_ok(model), "chain embedding does not preserve the manifold"
    assert exchange_survey(model) == [], "exchange unexpectedly applies to a spin"
    assert tuple(fixtures.SIX_STATE_MANIFOLD) == TARGET
    return hit


def main() -> None:
    t0 = time.time()
    hits = search_hits()
    print(f"scan: {len(hits)} exact-manifold hits in {time.time() - t0:.1f}s")
    rows = classify(hits)

    n_sym = sum(r["sym"] for r in rows)
    n_tie = sum(r["tie"] for r in rows)
    n_both = sum(r["sym"] and r["tie"] for r in rows)
    print(f"sym: {n_sym}   tie: {n_tie}   sym&tie: {n_both}")

    shapes = {}
    for r in rows:
        for spin, sizes in r["xchg"]:
            shapes.setdefault(sizes, []).append((r["tuple"], spin, r["tie"]))
    print("\nexchange survey (component sizes -> count, any with exact tie?):")
    for sizes, entries in sorted(shapes.items()):
        tied = sum(1 for _, _, tie in entries if tie)
        print(f"  {sizes}: {len(entries)} (tie hits: {tied})")
    if (2, 4) not in shapes:
        print("  NO hit in the grid produces a 2+4 split under the exchange.")

    winner = pick_winner(rows)
    print("\ncanonical winner (fewest nonzero couplings, lexicographic):")
    print(f"  h = {winner['h']}")
    for ij in COUPLING_ORDER:
        c = winner["J"][ij]
        if c != 0:
            print(f"  J{ij} = {c:+d}")
    print(f"  exchange-eligible spins: {winner['xchg'] or 'none'}")
    print("\nrunner-up exact-tie hits (same predicate set):")
    finalists = sorted((r for r in rows if r["sym"] and r["tie"]), key=canonical_key)
    for r in finalists[:8]:
        print(f"  J-nonzero={r['nonzero_J']} tuple={r['tuple']}")
    print(f"\ntotal: {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
