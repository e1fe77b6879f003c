"""chirpsim: Monte-Carlo FER simulation of chirp-spread-spectrum links.

Modules:
    modem     -- CSS chirp generation and DFT demodulation
    channel   -- AWGN and exponentially-correlated Rayleigh fading
    framing   -- payload bytes <-> S-bit symbol sequences
    simulator -- per-point Monte-Carlo engine with reproducible streams
    sweep     -- sweep configs, CSV output, and the `simulate` CLI
"""

__version__ = "0.1.0"

from .modem import (  # noqa: F401
    ChirpTable,
    DemodDecision,
    ModemParams,
    basic_chirp,
    dechirp,
    demodulate,
    demodulate_frame,
    modulate_frame,
    modulate_symbol,
)
from .channel import awgn, apply_channel, generate_fading, noise_sigma  # noqa: F401
from .framing import (  # noqa: F401
    bytes_to_symbols,
    frame_duration_s,
    frame_sample_count,
    symbol_count,
    symbols_to_bytes,
)
from .simulator import (  # noqa: F401
    FerEstimate,
    FrameOutcome,
    TrialPoint,
    awgn_symbol_error_probability,
    estimate_fer,
    genie_receiver_trial,
    run_trial,
    trial_rng,
    wilson_interval,
)
from .sweep import ConfigError, SweepConfig, parse_config, run_sweep  # noqa: F401
