"""Quantum stabilizer codes from recursive Tanner-graph expansion.

Two families are provided: a rate-1/2 family of pure-Z-stabilizer codes
on N = 2^L qubits, and a mixed X/Z family whose rate is set by a second
parameter a.  On top of the constructions sit structural validation,
exact and randomized minimum logical weight searches, a two-stage
belief-propagation decoder, and depolarizing-noise Monte Carlo with
threshold estimation.  ``tgre --help`` exposes the same surface on the
command line.
"""

from __future__ import annotations

from .codes import (
    PauliOperator,
    StabilizerCode,
    ValidationReport,
    a_schedule,
    build_xztgre,
    build_ztgre,
    code_params,
    validate_code,
)
from .decoder import (
    BPDecoder,
    DecodeOutcome,
    DecoderConfig,
    decode,
    syndrome,
)
from .distance import (
    BudgetExceeded,
    DistanceResult,
    check_prop2,
    check_theorem1,
    estimate_distance,
    exact_distance,
)
from .gf2 import BitMatrix, in_row_space, rank, row_reduce, solve
from .sim import (
    NoiseModel,
    SimReport,
    ThresholdReport,
    classify_residual,
    run_trials,
    sample_error,
    sweep_threshold,
    wilson_interval,
)
from .tanner import TannerGraph, expand_g, expand_gprime

__version__ = "0.1.0"

__all__ = [
    "BPDecoder",
    "BitMatrix",
    "BudgetExceeded",
    "DecodeOutcome",
    "DecoderConfig",
    "DistanceResult",
    "NoiseModel",
    "PauliOperator",
    "SimReport",
    "StabilizerCode",
    "TannerGraph",
    "ThresholdReport",
    "ValidationReport",
    "a_schedule",
    "build_xztgre",
    "build_ztgre",
    "check_prop2",
    "check_theorem1",
    "classify_residual",
    "code_params",
    "decode",
    "estimate_distance",
    "exact_distance",
    "expand_g",
    "expand_gprime",
    "in_row_space",
    "rank",
    "row_reduce",
    "run_trials",
    "sample_error",
    "solve",
    "sweep_threshold",
    "syndrome",
    "validate_code",
    "wilson_interval",
]
