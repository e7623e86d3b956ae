"""Variable-resolution ADC receiver simulation.

Sparse mmWave channels, AQNM quantization, greedy per-antenna bit allocation
(GBA / GASBA) and ADC power normalized to a fixed-resolution reference.
"""
from .alloc import AllocOutcome, UnreachableReferenceError, gasba, gba, reference_snr
from .channel import (
    ArrayGeometry,
    ChannelRealization,
    ClusterModelParams,
    DegenerateChannelError,
    dominant_mode,
    draw_channel,
    steering_vector,
)
from .montecarlo import SweepConfig, SweepSummary, run_sweep, run_trial, summarize_eigen_stats
from .power import (
    BitAllocation,
    PowerModel,
    adc_power,
    max_high_count,
    normalized_power,
    total_power,
)
from .quantize import (
    aggregate_snr,
    eta,
    per_antenna_unquantized_snr,
    quantized_snr_per_antenna,
    spectral_efficiency,
)

__version__ = "0.1.0"
