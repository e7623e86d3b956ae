"""Greedy per-antenna ADC bit allocation.

Both allocators walk the receive antennas from strongest to weakest
unquantized SNR (ties broken by ascending antenna index) and stop at the
first allocation whose quantized SNR reaches the fixed-resolution reference.

* :func:`gba` keeps every antenna on, starting all at ``b_low`` and raising
  the strongest ones to ``b_high``.
* :func:`gasba` starts with every antenna off and switches antennas on, at
  ``b_high`` while the power budget allows it and at ``b_low`` afterwards.
  It never exceeds the reference power, and may give up on the reference SNR.

SNR sums use :func:`math.fsum`, so the result does not depend on summation
order and ``b_low == b_ref`` terminates with no upgrades.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .power import BitAllocation, max_high_count, normalized_power_from_counts
from .quantize import quantized_snr_per_antenna

MATCH_SLACK = 1e-12


class UnreachableReferenceError(RuntimeError):
    """GBA cannot reach the reference SNR even with every antenna at ``b_high``."""


@dataclass(frozen=True)
class AllocOutcome:
    allocation: BitAllocation
    achieved_q_snr: float
    reference_q_snr: float
    matched: bool
    xi: float

    @property
    def n_high(self) -> int:
        return self.allocation.n_high

    @property
    def n_on(self) -> int:
        return self.allocation.n_on


def _as_gamma(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 1 or gamma.size == 0:
        raise ValueError("gamma must be a non-empty 1-D vector")
    if np.any(gamma < 0) or not np.all(np.isfinite(gamma)):
        raise ValueError("gamma must be finite and non-negative")
    return gamma


def _check_levels(b_ref: int, b_low: int, b_high: int) -> None:
    if b_low < 1:
        raise ValueError(f"b_low must be >= 1, got {b_low}")
    if not b_low <= b_ref <= b_high:
        raise ValueError(f"need b_low <= b_ref <= b_high, got {b_low}, {b_ref}, {b_high}")


def descending_order(gamma) -> np.ndarray:
    """Antenna indices by decreasing SNR; equal SNRs keep ascending index."""
    return np.argsort(-np.asarray(gamma, dtype=float), kind="stable")


def _first_reaching(approx: np.ndarray, exact: Callable[[int], float], target: float) -> int:
    """Smallest ``k`` with ``exact(k) >= target``, or ``len(approx)`` if none.

    ``approx`` is a cheap running-sum estimate of ``exact`` over
    ``k = 0..len(approx)-1``; both are non-decreasing in ``k``. The estimate
    locates the crossing and the exact sums settle it.
    """
    last = len(approx)
    k = int(np.searchsorted(approx, target, side="left"))
    while k > 0 and exact(k - 1) >= target:
        k -= 1
    while k < last and exact(k) < target:
        k += 1
    return k


def reference_snr(gamma, b_ref: int) -> float:
    """Quantized SNR of the same channel with every antenna at ``b_ref`` bits."""
    if b_ref < 1:
        raise ValueError(f"b_ref must be >= 1, got {b_ref}")
    return math.fsum(np.atleast_1d(quantized_snr_per_antenna(_as_gamma(gamma), b_ref)))


def gba(
    gamma, b_ref: int, b_low: int, b_high: int, gamma_ref: Optional[float] = None
) -> AllocOutcome:
    """Greedy bit allocation with all antennas active.

    Parameters
    ----------
    gamma : array_like, shape (N_r,)
        Unquantized per-antenna SNRs (linear).
    b_ref, b_low, b_high : int
        Reference resolution and the two available resolutions,
        ``1 <= b_low <= b_ref <= b_high``.
    gamma_ref : float, optional
        Target quantized SNR. Defaults to ``reference_snr(gamma, b_ref)``.

    Returns
    -------
    AllocOutcome
        The first sorted-prefix allocation (strongest antennas at ``b_high``,
        the rest at ``b_low``) whose quantized SNR is not below ``gamma_ref``.

    Raises
    ------
    UnreachableReferenceError
        If all antennas at ``b_high`` still fall short of ``gamma_ref``.
    """
    gamma = _as_gamma(gamma)
    _check_levels(b_ref, b_low, b_high)
    if gamma_ref is None:
        gamma_ref = reference_snr(gamma, b_ref)
    n = gamma.size
    order = descending_order(gamma)
    g = gamma[order]
    low = quantized_snr_per_antenna(g, b_low)
    high = quantized_snr_per_antenna(g, b_high)

    def exact(k: int) -> float:
        return math.fsum(np.concatenate((high[:k], low[k:])))

    # running total with the k strongest antennas upgraded, k = 0..n
    approx = low.sum() + np.concatenate(([0.0], np.cumsum(high - low)))
    n_high = _first_reaching(approx, exact, gamma_ref)
    if n_high > n:
        raise UnreachableReferenceError(
            f"unreachable reference: {exact(n):.6g} < {gamma_ref:.6g} with all antennas at {b_high} bits"
        )

    bits = np.full(n, b_low, dtype=int)
    bits[order[:n_high]] = b_high
    alloc = BitAllocation(bits, b_low, b_high)
    achieved = exact(n_high)
    return AllocOutcome(
        allocation=alloc,
        achieved_q_snr=achieved,
        reference_q_snr=float(gamma_ref),
        matched=achieved >= gamma_ref - MATCH_SLACK,
        xi=normalized_power_from_counts(n_high, n, n, b_ref, b_low, b_high),
    )


def gasba(
    gamma, b_ref: int, b_low: int, b_high: int, gamma_ref: Optional[float] = None
) -> AllocOutcome:
    """Greedy antenna selection and bit allocation.

    Antennas are switched on in decreasing-SNR order. The first
    ``max_high_count(N_r, b_ref, b_low, b_high)`` of them get ``b_high`` bits,
    any further ones ``b_low``. Activation stops as soon as the quantized SNR
    reaches ``gamma_ref`` or every antenna is on; in the latter case the
    outcome may be unmatched. Normalized power never exceeds 1.
    """
    gamma = _as_gamma(gamma)
    _check_levels(b_ref, b_low, b_high)
    n = gamma.size
    cap = max_high_count(n, b_ref, b_low, b_high)
    if gamma_ref is None:
        gamma_ref = reference_snr(gamma, b_ref)
    order = descending_order(gamma)
    level = np.where(np.arange(n) < cap, b_high, b_low)
    gains = quantized_snr_per_antenna(gamma[order], level)

    def exact(k: int) -> float:
        return math.fsum(gains[:k])

    approx = np.concatenate(([0.0], np.cumsum(gains)))
    n_on = min(_first_reaching(approx, exact, gamma_ref), n)
    n_high = min(n_on, cap)

    bits = np.zeros(n, dtype=int)
    bits[order[:n_on]] = level[:n_on]
    alloc = BitAllocation(bits, b_low, b_high)
    achieved = exact(n_on)
    return AllocOutcome(
        allocation=alloc,
        achieved_q_snr=achieved,
        reference_q_snr=float(gamma_ref),
        matched=achieved >= gamma_ref - MATCH_SLACK,
        xi=normalized_power_from_counts(n_high, n_on, n, b_ref, b_low, b_high),
    )


ALGORITHMS = {"GBA": gba, "GASBA": gasba}
