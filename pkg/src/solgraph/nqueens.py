"""N-Queens as a quadratic spin model, with exact enumeration and symmetry families.

The board uses row-major binary variables x_{ij} = 1 when a queen sits at
row i, column j (variable index i*n + j).  The cost function is

    sum_rows (sum_j x_ij - 1)^2 + sum_cols (sum_i x_ij - 1)^2
    + sum_diagonals sum_{pairs u<v on the diagonal} x_u x_v

so every valid placement (one queen per row and column, at most one per
diagonal) has energy exactly 0 and any violation costs at least 1.  Both
diagonal directions contribute (4n - 2 diagonals total); single-cell
diagonals carry no pairs and drop out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArgumentError, CapacityError
from .model import IsingModel, from_binary_polynomial

ENUMERATION_CAP = 12

# Total solution counts for n = 4..9; values beyond those asserted by the
# acceptance suite are the standard backtracking sequence, committed here
# so the enumerator has an independent reference.
KNOWN_COUNTS = {4: 2, 5: 10, 6: 4, 7: 40, 8: 92, 9: 352}


@dataclass(frozen=True)
class QueensInstance:
    """Board size plus the spin model over n^2 row-major variables."""

    n: int
    model: IsingModel

    def site(self, i: int, j: int) -> int:
        return i * self.n + j


@dataclass(frozen=True)
class SolutionFamily:
    """One orbit of solutions under the 8 board symmetries.

    `fundamental` is the lexicographically smallest member; `variants`
    holds the whole orbit (including the fundamental), sorted.
    """

    fundamental: tuple[int, ...]
    variants: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.variants)


def build(n: int) -> QueensInstance:
    """Quadratic binary cost model for the n-Queens constraints."""
    if n < 4:
        raise ArgumentError(f"n-Queens model needs n >= 4, got {n}")
    terms: list[tuple[tuple[int, ...], float]] = []
    constant = 0.0

    def one_hot(sites: list[int]) -> None:
        nonlocal constant
        constant += 1.0
        for s in sites:
            terms.append(((s,), -1.0))
        for a in range(len(sites)):
            for b in range(a + 1, len(sites)):
                terms.append(((sites[a], sites[b]), 2.0))

    for i in range(n):
        one_hot([i * n + j for j in range(n)])
    for j in range(n):
        one_hot([i * n + j for i in range(n)])

    diagonals: list[list[int]] = []
    for c in range(2 * n - 1):  # i + j = c
        diagonals.append([i * n + (c - i) for i in range(n) if 0 <= c - i < n])
    for c in range(-(n - 1), n):  # i - j = c
        diagonals.append([i * n + (i - c) for i in range(n) if 0 <= i - c < n])
    for sites in diagonals:
        for a in range(len(sites)):
            for b in range(a + 1, len(sites)):
                terms.append(((sites[a], sites[b]), 1.0))

    model = from_binary_polynomial(n * n, terms, constant)
    return QueensInstance(n=n, model=model)


def placement_energy(n: int, placement: tuple[int, ...]) -> int:
    """Directly evaluated penalty for a one-queen-per-row placement."""
    cols = [0] * n
    diag_sum: dict[int, int] = {}
    diag_diff: dict[int, int] = {}
    for i, j in enumerate(placement):
        cols[j] += 1
        diag_sum[i + j] = diag_sum.get(i + j, 0) + 1
        diag_diff[i - j] = diag_diff.get(i - j, 0) + 1
    e = sum((c - 1) ** 2 for c in cols)
    for count in list(diag_sum.values()) + list(diag_diff.values()):
        e += count * (count - 1) // 2
    return e


def placement_value(n: int, placement: tuple[int, ...]) -> int:
    """Packed spin value of a placement: bit i*n + j set where a queen sits."""
    v = 0
    for i, j in enumerate(placement):
        v |= 1 << (i * n + j)
    return v


def is_solution(n: int, placement) -> bool:
    p = tuple(placement)
    if len(p) != n or sorted(p) != list(range(n)):
        return False
    return placement_energy(n, p) == 0


def enumerate_solutions(n: int) -> list[tuple[int, ...]]:
    """All n-Queens solutions as column-per-row tuples, lexicographic order."""
    if n < 1:
        raise ArgumentError(f"board size must be positive, got {n}")
    if n > ENUMERATION_CAP:
        raise CapacityError(
            f"exhaustive n-Queens enumeration supports n <= {ENUMERATION_CAP}, got {n}"
        )
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def backtrack(cols: int, diag_up: int, diag_down: int) -> None:
        i = len(stack)
        if i == n:
            out.append(tuple(stack))
            return
        for j in range(n):
            cb, ub, db = 1 << j, 1 << (i + j), 1 << (i - j + n - 1)
            if (cols & cb) or (diag_up & ub) or (diag_down & db):
                continue
            stack.append(j)
            backtrack(cols | cb, diag_up | ub, diag_down | db)
            stack.pop()

    backtrack(0, 0, 0)
    return out


def symmetry_images(n: int, placement: tuple[int, ...]) -> list[tuple[int, ...]]:
    """The orbit of a placement under the 8 rotations/reflections, deduplicated."""
    cells = [(i, j) for i, j in enumerate(placement)]
    maps = (
        lambda i, j: (i, j),
        lambda i, j: (j, n - 1 - i),
        lambda i, j: (n - 1 - i, n - 1 - j),
        lambda i, j: (n - 1 - j, i),
        lambda i, j: (i, n - 1 - j),
        lambda i, j: (j, i),
        lambda i, j: (n - 1 - i, j),
        lambda i, j: (n - 1 - j, n - 1 - i),
    )
    orbit = set()
    for f in maps:
        image = [0] * n
        for i, j in cells:
            ti, tj = f(i, j)
            image[ti] = tj
        orbit.add(tuple(image))
    return sorted(orbit)


def group_families(solutions, n: int) -> list[SolutionFamily]:
    """Partition solutions into symmetry orbits, sorted by fundamental member."""
    remaining = set(tuple(s) for s in solutions)
    families = []
    while remaining:
        seed = min(remaining)
        orbit = symmetry_images(n, seed)
        missing = [p for p in orbit if p not in remaining]
        if missing:
            raise ArgumentError(
                f"solution set is not closed under board symmetries: missing {missing[0]}"
            )
        for p in orbit:
            remaining.discard(p)
        families.append(SolutionFamily(fundamental=orbit[0], variants=tuple(orbit)))
    return sorted(families, key=lambda f: f.fundamental)


def landscape_triple(n: int, placement: tuple[int, ...]) -> tuple[int, int, int]:
    """Count empty sites creating 0, 1, or 2 diagonal conflicts if occupied.

    For a valid solution every diagonal holds at most one queen, so an
    added queen can collide along at most one up- and one down-diagonal;
    the counts (a, b, c) over all n^2 - n empty sites always total n^2 - n.
    """
    p = tuple(placement)
    if not is_solution(n, p):
        raise ArgumentError(f"placement {p} is not a valid {n}-Queens solution")
    up = {i + j for i, j in enumerate(p)}
    down = {i - j for i, j in enumerate(p)}
    queens = {(i, j) for i, j in enumerate(p)}
    counts = [0, 0, 0]
    for i in range(n):
        for j in range(n):
            if (i, j) in queens:
                continue
            conflicts = (i + j in up) + (i - j in down)
            counts[conflicts] += 1
    return tuple(counts)
