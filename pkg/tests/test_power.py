import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varres.power import (
    BitAllocation,
    PowerModel,
    adc_power,
    max_high_count,
    normalized_power,
    normalized_power_from_counts,
    total_power,
)

MODEL = PowerModel(walden_fom=1e-12, bandwidth=1e9)


def _mixed(n_high, n_low, n_off=0, b_low=4, b_high=6):
    bits = np.array([b_high] * n_high + [b_low] * n_low + [0] * n_off)
    return BitAllocation(bits, b_low, b_high)


def test_adc_power_values():
    assert adc_power(0, MODEL) == 0.0
    assert adc_power(5, MODEL) == pytest.approx(0.032)
    for b in range(1, 14):
        assert adc_power(b + 1, MODEL) == pytest.approx(2 * adc_power(b, MODEL))
    with pytest.raises(ValueError):
        adc_power(-1, MODEL)


def test_power_model_validation():
    with pytest.raises(ValueError):
        PowerModel(walden_fom=0.0)
    with pytest.raises(ValueError):
        PowerModel(bandwidth=-1.0)


def test_total_power_examples():
    assert total_power(_mixed(0, 0, 64), MODEL) == 0.0
    assert total_power(BitAllocation.reference(64, 5), MODEL) == pytest.approx(2.048)
    assert total_power(_mixed(10, 54), MODEL) == pytest.approx(1.504)


def test_bit_allocation_counts_and_validation():
    alloc = _mixed(3, 5, 2)
    assert (alloc.n_high, alloc.n_on, alloc.n_antennas) == (3, 8, 10)
    assert not alloc.is_reference
    ref = BitAllocation.reference(8, 5)
    assert ref.is_reference and ref.n_on == 8
    with pytest.raises(ValueError):
        BitAllocation(np.array([4, 5, 6]), 4, 6)
    with pytest.raises(ValueError):
        BitAllocation(np.array([4.0, 6.0]), 4, 6)


@pytest.mark.parametrize("n_high, n_on, b_low, b_high, b_ref, expected", [
    (0, 64, 5, 6, 5, 1.0),
    (0, 64, 4, 6, 5, 0.5),
    (64, 64, 4, 6, 5, 2.0),
    (0, 0, 4, 6, 5, 0.0),
])
def test_normalized_power_examples(n_high, n_on, b_low, b_high, b_ref, expected):
    assert normalized_power_from_counts(n_high, n_on, 64, b_ref, b_low, b_high) == pytest.approx(expected)


def test_normalized_power_from_allocation():
    alloc = _mixed(10, 54)
    xi = normalized_power(alloc, 5, 4, 6, 64)
    assert xi == pytest.approx((10 * 64 + 54 * 16) / (64 * 32))
    assert normalized_power(BitAllocation.reference(16, 5), 5) == 1.0


def test_normalized_power_inconsistent_inputs():
    alloc = _mixed(2, 2)
    with pytest.raises(ValueError, match="inconsistent"):
        normalized_power(alloc, 5, 4, 6, 5)
    with pytest.raises(ValueError):
        normalized_power(alloc, 5, 3, 6, 4)
    with pytest.raises(ValueError, match="inconsistent"):
        normalized_power_from_counts(5, 3, 8, 5, 4, 6)


@given(n_high=st.integers(0, 30), n_low=st.integers(0, 30), n_off=st.integers(0, 5))
def test_xi_is_independent_of_walden_and_bandwidth(n_high, n_low, n_off):
    alloc = _mixed(n_high, n_low, n_off)
    n = alloc.n_antennas
    if n == 0:
        return
    a = PowerModel(1e-12, 1e9)
    b = PowerModel(3.7e-14, 2.5e8)
    ratio_a = total_power(alloc, a) / total_power(BitAllocation.reference(n, 5), a)
    ratio_b = total_power(alloc, b) / total_power(BitAllocation.reference(n, 5), b)
    xi = normalized_power(alloc, 5)
    assert ratio_a == pytest.approx(xi, rel=1e-12)
    assert ratio_b == pytest.approx(xi, rel=1e-12)
    assert xi * n * 2**5 * a.walden_fom * a.bandwidth == pytest.approx(total_power(alloc, a), rel=1e-12)


def test_xi_increases_with_high_count():
    xs = [normalized_power_from_counts(k, 64, 64, 5, 4, 6) for k in range(65)]
    assert all(a < b for a, b in zip(xs, xs[1:]))


def test_max_high_count_examples():
    assert max_high_count(64, 5, 4, 6) == 21
    assert max_high_count(256, 5, 1, 8) == 30
    assert max_high_count(64, 5, 5, 8) == 0
    with pytest.raises(ValueError, match="degenerate level pair"):
        max_high_count(64, 5, 5, 5)


@given(
    n=st.integers(1, 512),
    b_low=st.integers(1, 8),
    d_ref=st.integers(0, 4),
    d_high=st.integers(1, 5),
)
def test_max_high_count_keeps_power_within_reference(n, b_low, d_ref, d_high):
    b_ref = b_low + d_ref
    b_high = b_ref + d_high
    cap = max_high_count(n, b_ref, b_low, b_high)
    assert normalized_power_from_counts(cap, n, n, b_ref, b_low, b_high) <= 1 + 1e-12
    if cap < n:
        assert normalized_power_from_counts(cap + 1, n, n, b_ref, b_low, b_high) > 1
