"""Competitive (first-wins) parallel computing toolkit.

Predicts the expected execution time of the fastest of n cores for a
given per-core execution-time distribution, estimates it by Monte
Carlo, and measures it with a real concurrent racing harness.
"""

from ._cpcsim import (
    CalibrationError,
    CancelTimeout,
    CommandFailure,
    CurvePoint,
    Distribution,
    QuadratureError,
    RaceResult,
    RoundResult,
    SimResult,
    calibrate,
    cdf,
    cv,
    erlang,
    expected_min,
    exponential,
    hyper_a_for_cv,
    hyperexponential,
    mean,
    min_cdf,
    min_pdf,
    parse,
    pdf,
    race,
    race_command,
    simulate,
    speedup,
    survival,
    sweep_cores,
    sweep_erlang_k,
    sweep_hyper_a,
    uniform,
    variance,
)

__all__ = [
    "CalibrationError",
    "CancelTimeout",
    "CommandFailure",
    "CurvePoint",
    "Distribution",
    "QuadratureError",
    "RaceResult",
    "RoundResult",
    "SimResult",
    "calibrate",
    "cdf",
    "cv",
    "erlang",
    "expected_min",
    "exponential",
    "hyper_a_for_cv",
    "hyperexponential",
    "mean",
    "min_cdf",
    "min_pdf",
    "parse",
    "pdf",
    "race",
    "race_command",
    "simulate",
    "speedup",
    "survival",
    "sweep_cores",
    "sweep_erlang_k",
    "sweep_hyper_a",
    "uniform",
    "variance",
]
