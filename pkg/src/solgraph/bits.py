"""Bit-level helpers for spin configurations packed into integers.

Convention: bit i of a packed value is spin i, bit 1 means spin up (+1).
"""

import numpy as np


def popcount(values):
    """Number of set bits, elementwise, for an unsigned integer array."""
    return np.bitwise_count(np.asarray(values, dtype=np.uint64))


def parity(values):
    """Popcount mod 2 as int8."""
    return (popcount(values) & 1).astype(np.int8)


def products(values, mask):
    """Product of spins selected by `mask` (+/-1) for each packed value.

    A set bit is spin +1, so the product is (-1)^(down spins inside mask).
    """
    down = ~np.asarray(values, dtype=np.uint64) & np.uint64(mask)
    return (1 - 2 * parity(down)).astype(np.int64)


def spins_from_value(value, num_spins):
    """Tuple of +/-1 spins for one packed value."""
    return tuple(1 if (value >> i) & 1 else -1 for i in range(num_spins))


def value_from_spins(spins):
    """Pack a +/-1 (or 0/1) spin sequence into an integer, spin 0 at bit 0."""
    v = 0
    for i, s in enumerate(spins):
        if s > 0:
            v |= 1 << i
    return v


def hamming(a, b):
    """Hamming distance between two packed values."""
    return int(popcount(np.uint64(int(a) ^ int(b))))
