"""Achievable-rate analysis for magnitude-quantized complex AWGN channels.

The package computes the generalized mutual information of a channel whose
output magnitude is quantized by a symmetric finite-level quantizer, studies
the loading factor that maximizes it, and cross-checks the closed forms with
seeded Monte Carlo simulation.
"""

from .errors import BracketError, ConvergenceError, DomainError, ParameterError
from .gmi import (
    GmiReport,
    build_report,
    capacity_nats,
    coeff_a,
    coeff_a_uniform,
    coeff_b,
    coeff_b_uniform,
    decoder_scale_alpha,
    gamma,
    gmi_rate,
    rate_loss_fine_quantization,
    report_json_dict,
    snr_asymptotes,
    to_bits,
)
from .highres import (
    LoadingAnalysis,
    gamma_bar,
    granular_loss_approx,
    loading_estimate,
    mse_optimal_loading,
    mse_uniform,
    optimal_loading,
    overload_loss_approx,
    scaling_law,
    stationarity_residual,
)
from .montecarlo import (
    ChannelParams,
    DecodeExperiment,
    MomentEstimate,
    estimate_moments,
    run_decode_experiment,
    simulate_symbol,
)
from .numerics import (
    Tolerance,
    find_root,
    maximize_scalar,
    q_bounds,
    q_function,
    std_normal_pdf,
    tail_integral_phi_minus_tq,
    tail_integral_tq,
)
from .quantizer import SymmetricQuantizer, UniformSpec, make_uniform, normalize_gain, quantize

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ChannelParams",
    "ConvergenceError",
    "DecodeExperiment",
    "DomainError",
    "GmiReport",
    "LoadingAnalysis",
    "MomentEstimate",
    "ParameterError",
    "SymmetricQuantizer",
    "Tolerance",
    "UniformSpec",
    "build_report",
    "capacity_nats",
    "coeff_a",
    "coeff_a_uniform",
    "coeff_b",
    "coeff_b_uniform",
    "decoder_scale_alpha",
    "estimate_moments",
    "find_root",
    "gamma",
    "gamma_bar",
    "gmi_rate",
    "granular_loss_approx",
    "loading_estimate",
    "make_uniform",
    "maximize_scalar",
    "mse_optimal_loading",
    "mse_uniform",
    "normalize_gain",
    "optimal_loading",
    "overload_loss_approx",
    "q_bounds",
    "q_function",
    "quantize",
    "rate_loss_fine_quantization",
    "report_json_dict",
    "run_decode_experiment",
    "scaling_law",
    "simulate_symbol",
    "snr_asymptotes",
    "std_normal_pdf",
    "stationarity_residual",
    "tail_integral_phi_minus_tq",
    "tail_integral_tq",
    "to_bits",
]
