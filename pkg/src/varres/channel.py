"""Clustered sparse mmWave MIMO channel and its dominant eigenmode.

Channels are built as a sum of ``num_clusters * paths_per_cluster`` plane
waves between two uniform linear arrays. The transmitter is assumed to
beamform along the strongest singular pair of the matrix, so most callers
only need :func:`draw_channel` and the ``sigma_max`` / ``rx_mode`` fields of
the returned :class:`ChannelRealization`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Frozen after matching the dominant-eigenvalue statistics of a 4x64 link
# (P[fraction > 0.75] ~ 0.6 over 1e4 draws). See README.
DEFAULT_ANGLE_SPREAD = 0.035


class DegenerateChannelError(ValueError):
    """Raised when a channel matrix carries no energy."""


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array; spacing is in wavelengths."""

    element_count: int
    element_spacing: float = 0.5

    def __post_init__(self):
        if int(self.element_count) != self.element_count or self.element_count < 1:
            raise ValueError(f"element_count must be a positive integer, got {self.element_count!r}")
        if not self.element_spacing > 0:
            raise ValueError(f"element_spacing must be positive, got {self.element_spacing!r}")


@dataclass(frozen=True)
class ClusterModelParams:
    num_clusters: int = 2
    paths_per_cluster: int = 10
    intra_cluster_angle_spread: float = DEFAULT_ANGLE_SPREAD
    pathloss: float = 1.0
    fading_variance: float = 1.0

    def __post_init__(self):
        if self.num_clusters < 1 or self.paths_per_cluster < 1:
            raise ValueError("num_clusters and paths_per_cluster must be >= 1")
        if not self.pathloss > 0:
            raise ValueError(f"pathloss must be positive, got {self.pathloss!r}")
        if not self.fading_variance > 0:
            raise ValueError(f"fading_variance must be positive, got {self.fading_variance!r}")
        if not self.intra_cluster_angle_spread >= 0:
            raise ValueError("intra_cluster_angle_spread must be non-negative")

    @property
    def num_paths(self) -> int:
        return self.num_clusters * self.paths_per_cluster


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw together with its strongest singular triple."""

    matrix: np.ndarray
    sigma_max: float
    rx_mode: np.ndarray
    tx_mode: np.ndarray
    dominant_energy_fraction: float = field(default=1.0)

    @classmethod
    def from_matrix(cls, H) -> "ChannelRealization":
        H = np.asarray(H, dtype=complex)
        sigma, u, v = dominant_mode(H)
        energy = float(np.sum(np.abs(H) ** 2))
        return cls(
            matrix=H,
            sigma_max=sigma,
            rx_mode=u,
            tx_mode=v,
            dominant_energy_fraction=min(sigma**2 / energy, 1.0),
        )

    @property
    def n_rx(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_tx(self) -> int:
        return self.matrix.shape[1]

    @property
    def rx_energy_profile(self) -> np.ndarray:
        """Per-receive-antenna beamformed energy ``|u_i|^2 * sigma_max^2``."""
        return np.abs(self.rx_mode) ** 2 * self.sigma_max**2


def steering_vector(geometry: ArrayGeometry, angle) -> np.ndarray:
    """Unit-norm ULA response.

    ``angle`` may be a scalar (returns shape ``(N,)``) or an array of angles
    (returns shape ``angle.shape + (N,)``).
    """
    k = np.arange(geometry.element_count)
    phase = 2j * np.pi * geometry.element_spacing * np.multiply.outer(np.sin(angle), k)
    return np.exp(phase) / np.sqrt(geometry.element_count)


def dominant_mode(H) -> tuple[float, np.ndarray, np.ndarray]:
    """Largest singular value of ``H`` and its left/right singular vectors.

    The common phase of the pair is fixed so that the largest-magnitude entry
    of the left vector is real and positive (first index wins on ties); the
    right vector is rotated by the same phase so ``H @ v == sigma * u``.

    Raises
    ------
    DegenerateChannelError
        If ``H`` is identically zero.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {H.shape}")
    if not np.any(H):
        raise DegenerateChannelError("degenerate channel: H is all zeros")
    U, s, Vh = np.linalg.svd(H, full_matrices=False)
    u = U[:, 0]
    v = Vh[0].conj()
    anchor = u[np.argmax(np.abs(u))]  # argmax returns the first maximum
    rot = np.conj(anchor) / np.abs(anchor)
    return float(s[0]), u * rot, v * rot


def draw_channel(
    params: ClusterModelParams,
    tx_geom: ArrayGeometry,
    rx_geom: ArrayGeometry,
    rng: np.random.Generator,
    gains=None,
) -> ChannelRealization:
    """Draw one clustered channel matrix ``H`` (``n_rx x n_tx``).

    Cluster centres for departure and arrival are uniform on ``[-pi, pi]``;
    each path is offset from its centre by a zero-mean Laplacian angle whose
    standard deviation is ``params.intra_cluster_angle_spread``. Path gains
    are circularly symmetric complex Gaussian with variance
    ``params.fading_variance``; pass ``gains`` (shape ``(num_clusters,
    paths_per_cluster)``) to fix them instead.

    With unit pathloss and unit fading variance, ``E[||H||_F^2] = n_tx * n_rx``.
    """
    n_t, n_r = tx_geom.element_count, rx_geom.element_count
    if n_t * n_r == 0:
        raise ValueError("channel needs at least one transmit and one receive element")
    shape = (params.num_clusters, params.paths_per_cluster)

    aod_centre = rng.uniform(-np.pi, np.pi, params.num_clusters)
    aoa_centre = rng.uniform(-np.pi, np.pi, params.num_clusters)
    # Laplace(scale=b) has standard deviation b*sqrt(2)
    scale = params.intra_cluster_angle_spread / np.sqrt(2.0)
    aod = aod_centre[:, None] + rng.laplace(0.0, scale, shape)
    aoa = aoa_centre[:, None] + rng.laplace(0.0, scale, shape)
    if gains is None:
        std = np.sqrt(params.fading_variance / 2.0)
        gains = std * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    else:
        gains = np.broadcast_to(np.asarray(gains, dtype=complex), shape)

    a_t = steering_vector(tx_geom, aod.ravel())  # (paths, n_t)
    a_r = steering_vector(rx_geom, aoa.ravel())  # (paths, n_r)
    norm = np.sqrt(n_t * n_r / (params.pathloss * params.num_paths))
    H = norm * (a_r.T * gains.ravel()) @ a_t.conj()
    return ChannelRealization.from_matrix(H)
