"""Seeded Monte Carlo sweeps over link SNR, resolution pairs and allocators.

Every trial ``t`` draws one channel from a random stream derived only from
``(master_seed, t)``. The same draw is reused in every sweep cell (common
random numbers), so curves for different level pairs, algorithms and SNRs
are compared on identical channels. Because per-trial randomness never depends
on scheduling, and means are accumulated with exact summation, a sweep gives
identical numbers for any number of workers.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .alloc import ALGORITHMS, reference_snr
from .channel import ArrayGeometry, ChannelRealization, ClusterModelParams, draw_channel
from .power import DEFAULT_BANDWIDTH
from .quantize import spectral_efficiency

DEFAULT_SEED = 20170901
_EIGEN_STREAM = 1


def db_to_linear(x_db: float) -> float:
    """Power ratio in dB to linear; ``-inf`` maps to 0."""
    return 10.0 ** (float(x_db) / 10.0)


@dataclass(frozen=True)
class LinkBudget:
    """Unquantized link SNR: transmit power over pathloss and noise power."""

    transmit_power: float
    pathloss: float
    noise_power: float

    @property
    def snr(self) -> float:
        return self.transmit_power / (self.pathloss * self.noise_power)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr) if self.snr > 0 else -math.inf


@dataclass(frozen=True)
class SweepConfig:
    n_tx: int = 4
    n_rx: int = 64
    bandwidth: float = DEFAULT_BANDWIDTH
    snr_grid_db: tuple = tuple(float(x) for x in range(-20, 35, 5))
    trials: int = 1000
    master_seed: int = DEFAULT_SEED
    b_ref: int = 5
    level_pairs: tuple = ((1, 8), (2, 8), (4, 8), (2, 6), (4, 6))
    algorithms: tuple = ("GBA",)
    channel: ClusterModelParams = field(default_factory=ClusterModelParams)

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(x) for x in self.snr_grid_db))
        object.__setattr__(self, "level_pairs", tuple((int(lo), int(hi)) for lo, hi in self.level_pairs))
        object.__setattr__(self, "algorithms", tuple(a.upper() for a in self.algorithms))
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.n_tx < 1 or self.n_rx < 1:
            raise ValueError("n_tx and n_rx must be >= 1")
        if not self.snr_grid_db:
            raise ValueError("snr_grid_db must not be empty")
        if not self.level_pairs:
            raise ValueError("level_pairs must not be empty")
        if not self.algorithms:
            raise ValueError("algorithms must not be empty")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {alg!r}; choose from {sorted(ALGORITHMS)}")
        for lo, hi in self.level_pairs:
            if lo < 1:
                raise ValueError(f"level pair ({lo}, {hi}): b_low must be >= 1")
            if not lo <= self.b_ref <= hi:
                raise ValueError(
                    f"level pair ({lo}, {hi}) violates b_low <= b_ref <= b_high with b_ref={self.b_ref}"
                )
            if "GASBA" in self.algorithms and lo == hi:
                raise ValueError(f"level pair ({lo}, {hi}): GASBA needs b_high > b_low")

    def cells(self) -> list[tuple[float, tuple[int, int], str]]:
        return list(itertools.product(self.snr_grid_db, self.level_pairs, self.algorithms))


@dataclass(frozen=True)
class TrialRecord:
    snr_db: float
    b_low: int
    b_high: int
    algorithm: str
    trial_index: int
    xi: float
    q_snr_var: float
    q_snr_ref: float
    se_var: float
    se_ref: float
    matched: bool
    n_high: int
    n_on: int


_NUMERIC = ("xi", "se_ref", "se_var", "matched", "n_high", "n_on")


@dataclass(frozen=True)
class CellSummary:
    snr_db: float
    algorithm: str
    b_ref: int
    b_low: int
    b_high: int
    n_rx: int
    mean_xi: float
    mean_se_ref: float
    mean_se_var: float
    match_rate: float
    mean_n_high: float
    mean_n_on: float
    trials: int


@dataclass(frozen=True)
class SweepSummary:
    config: SweepConfig
    cells: dict

    def cell(self, snr_db: float, pair: Sequence[int], algorithm: str) -> CellSummary:
        return self.cells[(float(snr_db), (int(pair[0]), int(pair[1])), algorithm.upper())]

    def rows(self) -> list[CellSummary]:
        """Cells ordered by (algorithm, b_low, b_high, snr_db)."""
        return sorted(self.cells.values(), key=lambda c: (c.algorithm, c.b_low, c.b_high, c.snr_db))


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the seed and index alone."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def draw_trial_channel(config: SweepConfig, trial_index: int) -> ChannelRealization:
    return draw_channel(
        config.channel,
        ArrayGeometry(config.n_tx),
        ArrayGeometry(config.n_rx),
        trial_rng(config.master_seed, trial_index),
    )


def _evaluate(profile, config, snr_db, pair, algorithm, trial_index) -> TrialRecord:
    gamma = profile * db_to_linear(snr_db)
    b_low, b_high = pair
    gamma_ref = reference_snr(gamma, config.b_ref)
    out = ALGORITHMS[algorithm](gamma, config.b_ref, b_low, b_high, gamma_ref)
    return TrialRecord(
        snr_db=float(snr_db),
        b_low=b_low,
        b_high=b_high,
        algorithm=algorithm,
        trial_index=trial_index,
        xi=out.xi,
        q_snr_var=out.achieved_q_snr,
        q_snr_ref=gamma_ref,
        se_var=spectral_efficiency(out.achieved_q_snr),
        se_ref=spectral_efficiency(gamma_ref),
        matched=out.matched,
        n_high=out.n_high,
        n_on=out.n_on,
    )


def run_trial(config: SweepConfig, snr_db: float, pair, algorithm: str, trial_index: int) -> TrialRecord:
    """Evaluate one sweep cell on the channel drawn for ``trial_index``."""
    algorithm = algorithm.upper()
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    profile = draw_trial_channel(config, trial_index).rx_energy_profile
    return _evaluate(profile, config, snr_db, (int(pair[0]), int(pair[1])), algorithm, trial_index)


def _run_block(config: SweepConfig, trial_indices: Iterable[int]) -> np.ndarray:
    """Per-trial numeric results, shape ``(trials, cells, len(_NUMERIC))``."""
    cells = config.cells()
    trial_indices = list(trial_indices)
    out = np.empty((len(trial_indices), len(cells), len(_NUMERIC)))
    for i, t in enumerate(trial_indices):
        profile = draw_trial_channel(config, t).rx_energy_profile
        for j, (snr_db, pair, alg) in enumerate(cells):
            rec = _evaluate(profile, config, snr_db, pair, alg, t)
            out[i, j] = [getattr(rec, name) for name in _NUMERIC]
    return out


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepSummary:
    """Run every (snr, pair, algorithm) cell over ``config.trials`` channels.

    ``workers > 1`` spreads trials over processes; the summary is identical
    to the single-process result.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    trials = range(config.trials)
    if workers == 1:
        results = _run_block(config, trials)
    else:
        blocks = [b for b in np.array_split(np.arange(config.trials), workers * 4) if b.size]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, itertools.repeat(config), [b.tolist() for b in blocks]))
        results = np.concatenate(parts, axis=0)

    cells = {}
    for j, (snr_db, (b_low, b_high), alg) in enumerate(config.cells()):
        means = {name: math.fsum(results[:, j, k]) / config.trials for k, name in enumerate(_NUMERIC)}
        cells[(snr_db, (b_low, b_high), alg)] = CellSummary(
            snr_db=snr_db,
            algorithm=alg,
            b_ref=config.b_ref,
            b_low=b_low,
            b_high=b_high,
            n_rx=config.n_rx,
            mean_xi=means["xi"],
            mean_se_ref=means["se_ref"],
            mean_se_var=means["se_var"],
            match_rate=means["matched"],
            mean_n_high=means["n_high"],
            mean_n_on=means["n_on"],
            trials=config.trials,
        )
    return SweepSummary(config=config, cells=cells)


@dataclass(frozen=True)
class EigenStats:
    draws: int
    p_above_half: float
    p_above_three_quarters: float

    @property
    def se_above_half(self) -> float:
        return math.sqrt(self.p_above_half * (1 - self.p_above_half) / self.draws)

    @property
    def se_above_three_quarters(self) -> float:
        p = self.p_above_three_quarters
        return math.sqrt(p * (1 - p) / self.draws)


def dominant_energy_fractions(config: SweepConfig, draws: int) -> np.ndarray:
    tx, rx = ArrayGeometry(config.n_tx), ArrayGeometry(config.n_rx)
    out = np.empty(draws)
    for i in range(draws):
        rng = np.random.default_rng(
            np.random.SeedSequence(config.master_seed, spawn_key=(_EIGEN_STREAM, i))
        )
        out[i] = draw_channel(config.channel, tx, rx, rng).dominant_energy_fraction
    return out


def summarize_eigen_stats(config: SweepConfig, draws: int = 10_000) -> EigenStats:
    """How often the strongest eigenmode carries over 50% and 75% of the channel energy."""
    if draws < 1:
        raise ValueError("no draws requested")
    frac = dominant_energy_fractions(config, draws)
    return EigenStats(
        draws=draws,
        p_above_half=float(np.mean(frac > 0.5)),
        p_above_three_quarters=float(np.mean(frac > 0.75)),
    )


def summary_fields() -> list[str]:
    return [f.name for f in fields(CellSummary)]
