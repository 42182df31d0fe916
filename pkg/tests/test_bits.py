import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from solgraph import bits


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_products_matches_explicit_spin_product(value, mask):
    spins = bits.spins_from_value(value, 16)
    expected = 1
    for i in range(16):
        if (mask >> i) & 1:
            expected *= spins[i]
    assert int(bits.products([value], mask)[0]) == expected


@given(st.integers(0, 2**20 - 1))
def test_value_spins_round_trip(value):
    assert bits.value_from_spins(bits.spins_from_value(value, 20)) == value


def test_value_from_spins_accepts_binary():
    assert bits.value_from_spins([1, 0, 1, 0]) == 0b0101
    assert bits.value_from_spins([-1, 1, 1, -1]) == 0b0110


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_hamming_symmetric_and_counts_flips(a, b):
    assert bits.hamming(a, b) == bits.hamming(b, a) == bin(a ^ b).count("1")


def test_popcount_and_parity_vectorized():
    vals = np.array([0, 1, 3, 0b1011], dtype=np.uint64)
    assert bits.popcount(vals).tolist() == [0, 1, 2, 3]
    assert bits.parity(vals).tolist() == [0, 1, 0, 1]


def test_products_empty_mask_is_one():
    assert bits.products([0, 5, 13], 0).tolist() == [1, 1, 1]
