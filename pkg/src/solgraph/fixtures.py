"""Small reference models with exactly known ground manifolds and predictions.

Each builder returns an IsingModel (some parameterized); companion
constants record the hand-checked expected values the test suite asserts.
"""

from __future__ import annotations

from fractions import Fraction

from .driver import Driver
from .model import IsingModel
from .transforms import Embedding


def chain_model(n: int) -> IsingModel:
    """Ferromagnetic chain of n spins with opposing unit boundary fields.

    H = -sum_i s_i s_{i+1} - s_0 + s_{n-1}; the ground manifold is the
    n + 1 domain-wall states (a block of up spins on the left, down spins
    on the right, block size 0..n) at E0 = -(n - 1).  A transverse field
    moves the wall one site per flip, so the solution graph is an open
    path on n + 1 nodes at first order.
    """
    if n < 2:
        raise ValueError(f"chain needs at least 2 spins, got {n}")
    terms: list[tuple[tuple[int, ...], float]] = [
        ((i, i + 1), -1.0) for i in range(n - 1)
    ]
    terms += [((0,), -1.0), ((n - 1,), 1.0)]
    return IsingModel.build(num_spins=n, terms=terms)


# Chain n=4 (5 spins): manifold values ascending, first-order path graph,
# predicted p = (1/12, 1/4, 1/3, 1/4, 1/12), lambda1 = sqrt(3).
CHAIN4_MANIFOLD = (0, 1, 3, 7, 15)
CHAIN4_PROBS = (
    Fraction(1, 12),
    Fraction(1, 4),
    Fraction(1, 3),
    Fraction(1, 4),
    Fraction(1, 12),
)


def triangle_model(b: float | None = None) -> IsingModel:
    """Frustrated triangle with fields; parameter b in (0, 2) tunes the gaps.

    H = b s0 s1 + b s0 s2 + s1 s2 - b s0 - s1 - s2.  Ground manifold
    {110, 101, 011} (bit i = spin i, LSB first) at E0 = -b - 1; a pure
    transverse field reaches it only at second order, with closed-form
    off-diagonal weights 1/(b(2-b)) for the pair split by spin 0 and 1/b
    for the two pairs split by spins 1 and 2.
    """
    terms: list[tuple[tuple[int, ...], object]] = [
        ((0, 1), "$b"),
        ((0, 2), "$b"),
        ((1, 2), 1.0),
        ((0,), "-$b"),
        ((1,), -1.0),
        ((2,), -1.0),
    ]
    m = IsingModel.build(num_spins=3, terms=terms)
    if b is not None:
        m = m.substitute({"b": b})
    return m


TRIANGLE_MANIFOLD = (3, 5, 6)


def triangle_second_order(b: float) -> list[list[Fraction]]:
    """Exact second-order matrix for triangle_model(b) under a unit
    transverse field, in manifold order (3, 5, 6) = (110, 101, 011).

    Excited intermediates sit at gap 2b (spin-0-respecting flips) or
    4 - 2b (the single all-down-of-spin-0 state 100); states 110 and 101
    each touch 100 once, state 011 never does.
    """
    bf = Fraction(b).limit_denominator(10**12)
    near = Fraction(1, 1) / (2 * bf)          # one path at gap 2b
    far = Fraction(1, 1) / (4 - 2 * bf)       # one path at gap 4 - 2b
    a01 = near + far                          # 1/(b(2-b))
    a_cross = 2 * near                        # 1/b
    return [
        [2 * near + far, a01, a_cross],
        [a01, 2 * near + far, a_cross],
        [a_cross, a_cross, 3 * near],
    ]


def toy_three_state() -> IsingModel:
    """Three-spin model whose manifold mixes Hamming distances 1 and 2.

    H = -s0 s1 - s0 s2 - s1 s2 - 2 s0 + s1 + s2; ground states
    {111, 001, 000} at E0 = -3 (bit i = spin i).  Under a transverse
    field the pair at distance 1 forces first order, stranding 111.
    """
    return IsingModel.build(
        num_spins=3,
        terms=[
            ((0, 1), -1.0),
            ((0, 2), -1.0),
            ((1, 2), -1.0),
            ((0,), -2.0),
            ((1,), 1.0),
            ((2,), 1.0),
        ],
    )


TOY_THREE_STATE_MANIFOLD = (0, 1, 7)


def six_state_model() -> IsingModel:
    """Five-spin model with six degenerate ground states in three component types.

    H = -2 s0 s1 - 2 s2 s3 + s1 s3 - s0 s4 - s2 s4; the ground manifold is
    (0, 3, 12, 19, 28, 31) at E0 = -5, i.e. the spin patterns

        ddddd  uuddd  dduud  uuddu  dduuu  uuuuu     (spin 0 leftmost).

    Under a pure transverse field the solution graph is two isolated nodes
    (0 and 31), plus the single-flip edges (3, 19) and (12, 28): two tied
    2-state components whose four members are each predicted at 1/4 while
    the isolated states are never reached.  The relabeling (0 2)(1 3)
    swaps the two edge components, so their exact spectra stay tied at
    every order of the driver coupling, and within each component the
    second-order diagonal sums are exactly equal, keeping the four
    quasi-static probabilities at 1/4 up to second-order corrections.

    Coefficients pinned by scripts/pin_six_state_fixture.py: the
    lexicographically smallest exact-manifold integer model (|h|, |J| <= 2)
    with the component-swap symmetry, the within-component tie, and a
    manifold-preserving 2-qubit-chain embedding.  No spin carries a local
    field, so the field/interaction exchange transform refuses every spin
    of this fixture (see the search script's survey output).
    """
    return IsingModel.build(
        num_spins=5,
        terms=[
            ((0, 1), -2.0),
            ((0, 4), -1.0),
            ((1, 3), 1.0),
            ((2, 3), -2.0),
            ((2, 4), -1.0),
        ],
    )


SIX_STATE_MANIFOLD = (0, 3, 12, 19, 28, 31)

# Probabilities predicted under a pure transverse field, manifold order.
SIX_STATE_TF_PROBS = (
    Fraction(0), Fraction(1, 4), Fraction(1, 4),
    Fraction(1, 4), Fraction(1, 4), Fraction(0),
)


def six_state_partial_driver() -> Driver:
    """Transverse field plus the two pair flips that close the six-state cycle.

    Adding sigma^x_0 sigma^x_1 and sigma^x_2 sigma^x_3 to the transverse
    field joins the isolated states to the 2-state components, making the
    solution graph a single 6-cycle.
    """
    terms = [(1 << i, -1.0) for i in range(5)]
    terms += [(0b00011, -1.0), (0b01100, -1.0)]
    return Driver.build(5, terms)


def six_state_embedding() -> Embedding:
    """Embedding of the six-state fixture with spin 4 split into a 2-qubit chain.

    Spin 4 is the only spin that flips alone between ground states, so
    duplicating it lifts every pairwise Hamming distance of the extended
    manifold to at least 2; the physical ground states are exactly the
    chain-extended images for any positive chain strength, and the
    physical analysis runs at second order.
    """
    chains = {i: (i,) for i in range(4)}
    chains[4] = (4, 5)
    return Embedding.build(
        chains=chains,
        chain_edges={4: ((4, 5),)},
        assignment={
            (0, 1): (0, 1),
            (0, 4): (0, 4),
            (1, 3): (1, 3),
            (2, 3): (2, 3),
            (2, 4): (2, 4),
        },
    )


# Extended manifold: images of SIX_STATE_MANIFOLD with bit 4 copied to bit 5.
SIX_STATE_EXTENDED_MANIFOLD = (0, 3, 12, 51, 60, 63)
