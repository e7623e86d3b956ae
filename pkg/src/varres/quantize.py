"""Additive quantization noise model (AQNM) for per-antenna ADCs.

A ``b``-bit ADC is modelled as ``y_q = (1 - eta) * y + n_q`` with ``n_q``
independent of ``y``. Under dominant-eigenmode beamforming and maximum ratio
combining the post-quantization SNR separates into a sum of per-antenna terms
``(1 - eta_i) * gamma_i / (1 + eta_i * gamma_i)``.

A bit depth of 0 means the antenna is switched off: ``eta = 1`` and the
antenna contributes nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .channel import ChannelRealization

MAX_BITS = 15

# Gaussian-input distortion factors for 1..5 bits
ETA_TABLE = MappingProxyType({1: 0.3634, 2: 0.1175, 3: 0.03454, 4: 0.009497, 5: 0.002499})
ASYMPTOTIC_COEFFICIENT = math.pi * math.sqrt(3.0) / 2.0


def _check_bits(b) -> int:
    if isinstance(b, (bool, np.bool_)) or int(b) != b:
        raise ValueError(f"bit count must be an integer, got {b!r}")
    b = int(b)
    if b < 0:
        raise ValueError(f"bit count must be non-negative, got {b}")
    return b


@dataclass(frozen=True)
class EtaModel:
    """Map from ADC resolution to the AQNM distortion factor ``eta``.

    Table values are used up to ``max(table)``; above that the high-resolution
    approximation ``coefficient * 2**(-2b)`` applies.
    """

    table: "MappingProxyType[int, float]" = field(default=ETA_TABLE)
    asymptotic_coefficient: float = ASYMPTOTIC_COEFFICIENT
    max_bits: int = MAX_BITS

    def __call__(self, b) -> float:
        b = _check_bits(b)
        if b > self.max_bits:
            raise ValueError(f"bit count {b} exceeds the supported maximum of {self.max_bits}")
        if b == 0:
            return 1.0
        if b in self.table:
            return self.table[b]
        return self.asymptotic_coefficient * 2.0 ** (-2 * b)

    def asymptotic(self, b) -> float:
        """The closed-form approximation, evaluated even where the table applies."""
        return self.asymptotic_coefficient * 2.0 ** (-2 * _check_bits(b))

    def lookup(self, bits) -> np.ndarray:
        """Vectorised ``eta`` over an integer array of bit depths."""
        bits = np.asarray(bits)
        levels, inverse = np.unique(bits, return_inverse=True)
        table = np.array([self(b) for b in levels], dtype=float)
        return table[inverse].reshape(bits.shape)


AQNM = EtaModel()


def eta(b) -> float:
    """Distortion factor of a ``b``-bit ADC (``b = 0`` gives 1)."""
    return AQNM(b)


@dataclass(frozen=True)
class QuantizedLinkState:
    per_antenna_unq_snr: np.ndarray
    per_antenna_bits: np.ndarray
    per_antenna_q_snr: np.ndarray
    aggregate_q_snr: float


def per_antenna_unquantized_snr(realization: ChannelRealization, link_snr: float) -> np.ndarray:
    """``gamma_i = |u_i|^2 * sigma_max^2 * link_snr`` for every receive antenna."""
    if link_snr < 0:
        raise ValueError(f"link_snr must be non-negative, got {link_snr!r}")
    return realization.rx_energy_profile * float(link_snr)


def quantized_snr_per_antenna(gamma_i, b):
    """Post-quantization SNR of one antenna, ``(1 - eta) g / (1 + eta g)``.

    Works elementwise when ``gamma_i`` is an array and ``b`` a scalar, or when
    both are arrays of the same shape. Returns a float for scalar input.
    """
    gamma_i = np.asarray(gamma_i, dtype=float)
    if np.any(gamma_i < 0):
        raise ValueError("per-antenna SNR must be non-negative")
    e = AQNM.lookup(b) if np.ndim(b) else eta(b)
    out = np.where(np.asarray(e) >= 1.0, 0.0, (1.0 - e) * gamma_i / (1.0 + e * gamma_i))
    return float(out) if out.ndim == 0 else out


def aggregate_snr(realization: ChannelRealization, link_snr: float, bits) -> QuantizedLinkState:
    """Sum of per-antenna quantized SNRs for a bit allocation (MRC combining).

    ``bits`` may be an integer vector or a :class:`varres.power.BitAllocation`.
    """
    bits = np.asarray(getattr(bits, "per_antenna_bits", bits))
    if bits.shape != (realization.n_rx,):
        raise ValueError(
            f"bit vector has length {bits.size}, channel has {realization.n_rx} receive antennas"
        )
    gamma = per_antenna_unquantized_snr(realization, link_snr)
    q = quantized_snr_per_antenna(gamma, bits)
    return QuantizedLinkState(
        per_antenna_unq_snr=gamma,
        per_antenna_bits=bits.copy(),
        per_antenna_q_snr=q,
        aggregate_q_snr=math.fsum(q),
    )


def spectral_efficiency(gamma_q):
    """``log2(1 + gamma_q)`` in bit/s/Hz; multiply by bandwidth for bit/s."""
    gamma_q = np.asarray(gamma_q, dtype=float)
    if np.any(gamma_q < 0):
        raise ValueError("SNR must be non-negative")
    out = np.log2(1.0 + gamma_q)
    return float(out) if out.ndim == 0 else out
