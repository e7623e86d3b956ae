"""ADC power consumption and the normalized-power metric.

ADC power follows the Walden law ``c * B * 2**b``. A disabled ADC (``b = 0``)
draws no power at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

DEFAULT_WALDEN_FOM = 1e-12  # J per conversion step
DEFAULT_BANDWIDTH = 1e9  # Hz


@dataclass(frozen=True)
class PowerModel:
    walden_fom: float = DEFAULT_WALDEN_FOM
    bandwidth: float = DEFAULT_BANDWIDTH

    def __post_init__(self):
        if not self.walden_fom > 0 or not self.bandwidth > 0:
            raise ValueError("walden_fom and bandwidth must be positive")


@dataclass(frozen=True)
class BitAllocation:
    """Per-antenna ADC resolutions.

    In variable mode every entry is ``0``, ``b_low`` or ``b_high``. A
    reference allocation has every entry equal to ``b_ref``; it is stored with
    ``b_low == b_high == b_ref``. When the two levels coincide no antenna
    counts as upgraded, so ``n_high`` is 0.
    """

    per_antenna_bits: np.ndarray
    b_low: int
    b_high: int

    def __post_init__(self):
        bits = np.asarray(self.per_antenna_bits)
        if bits.ndim != 1:
            raise ValueError("per_antenna_bits must be a 1-D vector")
        if bits.size and not np.issubdtype(bits.dtype, np.integer):
            raise ValueError("per_antenna_bits must hold integers")
        allowed = {0, self.b_low, self.b_high}
        bad = set(np.unique(bits).tolist()) - allowed
        if bad:
            raise ValueError(f"bit values {sorted(bad)} not in {sorted(allowed)}")
        object.__setattr__(self, "per_antenna_bits", bits.astype(int))

    @classmethod
    def reference(cls, n_antennas: int, b_ref: int) -> "BitAllocation":
        return cls(np.full(n_antennas, b_ref, dtype=int), b_ref, b_ref)

    @property
    def n_antennas(self) -> int:
        return self.per_antenna_bits.size

    @property
    def n_high(self) -> int:
        if self.b_high == self.b_low:
            return 0
        return int(np.count_nonzero(self.per_antenna_bits == self.b_high))

    @property
    def n_on(self) -> int:
        return int(np.count_nonzero(self.per_antenna_bits > 0))

    @property
    def is_reference(self) -> bool:
        return self.b_low == self.b_high and self.n_on == self.n_antennas


def adc_power(b: int, model: PowerModel = PowerModel()) -> float:
    """Power in watts of one ``b``-bit ADC."""
    if b < 0:
        raise ValueError(f"bit count must be non-negative, got {b}")
    if b == 0:
        return 0.0
    return model.walden_fom * model.bandwidth * 2.0**b


def total_power(alloc: BitAllocation, model: PowerModel = PowerModel()) -> float:
    bits = alloc.per_antenna_bits
    on = bits[bits > 0]
    return model.walden_fom * model.bandwidth * float(np.sum(2.0**on))


def normalized_power_from_counts(
    n_high: int, n_on: int, n_antennas: int, b_ref: int, b_low: int, b_high: int
) -> float:
    """``xi`` from antenna counts; ``n_on - n_high`` antennas run at ``b_low``."""
    if not 0 <= n_high <= n_on <= n_antennas or n_antennas < 1:
        raise ValueError(
            f"inconsistent counts: n_high={n_high}, n_on={n_on}, n_antennas={n_antennas}"
        )
    num = n_high * 2.0 ** (b_high - b_ref) + (n_on - n_high) * 2.0 ** (b_low - b_ref)
    return num / n_antennas


def normalized_power(
    alloc: BitAllocation,
    b_ref: int,
    b_low: Optional[int] = None,
    b_high: Optional[int] = None,
    n_antennas: Optional[int] = None,
) -> float:
    """Ratio of the allocation's ADC power to ``n_antennas`` ADCs at ``b_ref`` bits.

    The Walden constant and bandwidth cancel. ``b_low``, ``b_high`` and
    ``n_antennas`` default to the allocation's own values; when given they
    must agree with it.
    """
    b_low = alloc.b_low if b_low is None else b_low
    b_high = alloc.b_high if b_high is None else b_high
    n_antennas = alloc.n_antennas if n_antennas is None else n_antennas
    if not b_low <= b_ref <= b_high:
        raise ValueError(f"need b_low <= b_ref <= b_high, got {b_low}, {b_ref}, {b_high}")
    if n_antennas != alloc.n_antennas:
        raise ValueError(
            f"inconsistent counts: allocation covers {alloc.n_antennas} antennas, not {n_antennas}"
        )
    if (b_low, b_high) != (alloc.b_low, alloc.b_high):
        raise ValueError(
            f"allocation levels ({alloc.b_low}, {alloc.b_high}) differ from ({b_low}, {b_high})"
        )
    return normalized_power_from_counts(alloc.n_high, alloc.n_on, n_antennas, b_ref, b_low, b_high)


def max_high_count(n_antennas: int, b_ref: int, b_low: int, b_high: int) -> int:
    """Largest number of ``b_high`` antennas that keeps an all-on allocation
    within the reference power budget."""
    if b_high == b_low:
        raise ValueError("degenerate level pair: b_high == b_low")
    if not b_low <= b_ref <= b_high:
        raise ValueError(f"need b_low <= b_ref <= b_high, got {b_low}, {b_ref}, {b_high}")
    # integer arithmetic keeps the floor exact
    return (n_antennas * (2 ** (b_ref - b_low) - 1)) // (2 ** (b_high - b_low) - 1)
