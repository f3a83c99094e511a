"""Monte Carlo simulator of the incremental relaying protocol."""

from eirelay.sim.channel import (
    af_combined_snr,
    af_relayed_snr,
    relay_decode,
    sample_rayleigh_snr,
    select_weakest,
    symbol_level_packet,
)
from eirelay.sim.frame import (
    Fidelity,
    PerEstimate,
    error_counts_by_order,
    estimate_per,
    frame_errors,
    simulate_frame,
    simulate_frames,
)
from eirelay.sim.rng import RngStream

__all__ = [
    "Fidelity",
    "PerEstimate",
    "RngStream",
    "af_combined_snr",
    "af_relayed_snr",
    "error_counts_by_order",
    "estimate_per",
    "frame_errors",
    "relay_decode",
    "sample_rayleigh_snr",
    "select_weakest",
    "simulate_frame",
    "simulate_frames",
    "symbol_level_packet",
]
