"""Exact achievable rates of the quantized complex-AWGN channel.

For an i.i.d. complex Gaussian codebook, nearest-neighbor decoding, and a
symmetric per-component quantizer applied at the receiver, the achievable
rate (GMI) depends on the quantizer only through two coefficients 𝒜 and ℬ
and their combination γ = 1 - 𝒜²/ℬ:

    GMI(snr) = ln(1 + snr) - ln(1 + γ·snr)   [nats/channel use].

Both the general-quantizer sums and the uniform-quantizer fast paths are
implemented and cross-tested; sums are accumulated with exact (fsum)
summation so term ordering is irrelevant even at very large K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np
from scipy.special import erfc

from .errors import DomainError
from .numerics import SQRT_2PI
from .quantizer import SymmetricQuantizer, UniformSpec

if TYPE_CHECKING:  # pragma: no cover
    from .montecarlo import ChannelParams

LN2 = math.log(2.0)

#: γ of every one-bit quantizer, and the corresponding high-SNR rate ceiling.
ONE_BIT_GAMMA = 1.0 - 2.0 / math.pi
ONE_BIT_SATURATION_NATS = math.log(math.pi / (math.pi - 2.0))
ONE_BIT_SATURATION_BITS = math.log2(math.pi / (math.pi - 2.0))


def to_bits(nats: float) -> float:
    """Presentation-layer conversion; all internal rates are in nats."""
    return nats / LN2


def _pdf_vec(t: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * t * t) / SQRT_2PI


def _q_vec(t: np.ndarray) -> np.ndarray:
    return 0.5 * erfc(t / math.sqrt(2.0))


def coeff_a(q: SymmetricQuantizer) -> float:
    """𝒜 = √(2π) Σ_k r_k (φ(ℓ_{k-1}) - φ(ℓ_k)), with ℓ_0 = 0, ℓ_K = ∞."""
    pdf = _pdf_vec(np.asarray(q.thresholds, dtype=float))
    lower = np.concatenate(([1.0 / SQRT_2PI], pdf))   # φ(ℓ_{k-1})
    upper = np.concatenate((pdf, [0.0]))              # φ(ℓ_k)
    terms = np.asarray(q.points, dtype=float) * (lower - upper)
    return SQRT_2PI * math.fsum(terms)


def coeff_b(q: SymmetricQuantizer) -> float:
    """ℬ = π Σ_k r_k² (Q(ℓ_{k-1}) - Q(ℓ_k)), with ℓ_0 = 0, ℓ_K = ∞."""
    tail = _q_vec(np.asarray(q.thresholds, dtype=float))
    lower = np.concatenate(([0.5], tail))
    upper = np.concatenate((tail, [0.0]))
    points = np.asarray(q.points, dtype=float)
    terms = points * points * (lower - upper)
    return math.pi * math.fsum(terms)


def coeff_a_uniform(spec: UniformSpec) -> float:
    """Uniform-quantizer form of 𝒜: √(2π) Σ_{k=0}^{K-1} ℓ·φ(kℓ) - ℓ/2."""
    step = spec.step
    grid = step * np.arange(spec.levels_K)
    return SQRT_2PI * math.fsum(step * _pdf_vec(grid)) - 0.5 * step


def coeff_b_uniform(spec: UniformSpec) -> float:
    """Uniform-quantizer form of ℬ: π Σ_{k=0}^{K-1} 2kℓ²Q(kℓ) + πℓ²/8."""
    step = spec.step
    k = np.arange(spec.levels_K)
    terms = 2.0 * k * step * step * _q_vec(k * step)
    return math.pi * math.fsum(terms) + math.pi * step * step / 8.0


def _two_product(a: float, b: float) -> Tuple[float, float]:
    """Dekker exact product: a·b = p + err with p = fl(a·b)."""
    p = a * b
    split = 134217729.0  # 2**27 + 1
    a1 = a * split
    ah = a1 - (a1 - a)
    al = a - ah
    b1 = b * split
    bh = b1 - (b1 - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _coeffs(q_or_spec: Union[SymmetricQuantizer, UniformSpec]) -> Tuple[float, float]:
    if isinstance(q_or_spec, UniformSpec):
        return coeff_a_uniform(q_or_spec), coeff_b_uniform(q_or_spec)
    if isinstance(q_or_spec, SymmetricQuantizer):
        return coeff_a(q_or_spec), coeff_b(q_or_spec)
    raise DomainError(f"expected SymmetricQuantizer or UniformSpec, got {type(q_or_spec).__name__}")


def gamma(q_or_spec: Union[SymmetricQuantizer, UniformSpec]) -> float:
    """γ = 1 - 𝒜²/ℬ, the quantizer's rate-loss parameter.

    Near the fine-quantization limit γ suffers cancellation, so for
    γ < 1e-6 it is recomputed as (ℬ - 𝒜²)/ℬ with the 𝒜² product carried
    exactly (Dekker two-product) before the subtraction.
    """
    a, b = _coeffs(q_or_spec)
    g = 1.0 - (a * a) / b
    if g < 1e-6:
        p, err = _two_product(a, a)
        g = ((b - p) - err) / b
    return g


def capacity_nats(snr: float) -> float:
    """Unquantized-channel ceiling ln(1 + snr)."""
    if snr < 0.0 or not math.isfinite(snr):
        raise DomainError(f"snr must be a finite nonnegative ratio, got {snr}")
    return math.log1p(snr)


def gmi_rate(gamma_value: float, snr: float) -> float:
    """GMI in nats: ln(1+snr) - ln(1+γ·snr)."""
    if not (0.0 < gamma_value < 1.0):
        raise DomainError(f"gamma must lie in (0,1), got {gamma_value}")
    if snr < 0.0 or not math.isfinite(snr):
        raise DomainError(f"snr must be a finite nonnegative ratio, got {snr}")
    return math.log1p(snr) - math.log1p(gamma_value * snr)


def delta_from_gamma(gamma_value: float, snr: float) -> float:
    """Δ = (1-γ)·snr/(1+snr); the GMI equals ln(1/(1-Δ))."""
    return (1.0 - gamma_value) * snr / (1.0 + snr)


def _alpha(h: complex, sigma_x2: float, sigma2: float, a_coeff: float) -> complex:
    return 2.0 * h * a_coeff / math.sqrt(math.pi * (abs(h) ** 2 * sigma_x2 + sigma2))


def decoder_scale_alpha(channel: "ChannelParams", q: SymmetricQuantizer) -> complex:
    """Rate-optimal decoder scaling α = E[X*Y]/σx².

    Evaluates to 2h·𝒜/√(π(|h|²σx² + σ²)); the phase equals the phase of the
    channel gain h (quantizing each component of hX+Z cannot rotate the
    input-output correlation, which a Monte Carlo check of E[X*Y] confirms).
    """
    if channel.sigma_x2 <= 0.0:
        raise DomainError(f"sigma_x2 must be positive, got {channel.sigma_x2}")
    return _alpha(channel.h, channel.sigma_x2, channel.sigma2, coeff_a(q))


def snr_asymptotes(gamma_value: float) -> Tuple[float, float, float, float]:
    """High/low-SNR behavior of the GMI for a fixed γ.

    Returns ``(saturation_nats, low_snr_slope, low_snr_quad, high_snr_correction)``:
    GMI → ln(1/γ) - (1/γ - 1)/snr as snr → ∞ and
    GMI = (1-γ)·snr - (1-γ²)·snr²/2 + o(snr²) as snr → 0.
    """
    if not (0.0 < gamma_value < 1.0):
        raise DomainError(f"gamma must lie in (0,1), got {gamma_value}")
    return (
        math.log(1.0 / gamma_value),
        1.0 - gamma_value,
        (1.0 - gamma_value * gamma_value) / 2.0,
        1.0 / gamma_value - 1.0,
    )


def rate_loss_fine_quantization(gamma_value: float, snr: float) -> float:
    """Exact rate loss ln(1+γ·snr) in the fine-quantization regime γ ≤ 0.1.

    For small γ this is γ·snr - (γ·snr)²/2 + o(γ²); the exact logarithm is
    returned rather than the expansion.
    """
    if not (0.0 < gamma_value <= 0.1):
        raise DomainError(f"fine-quantization loss expects gamma in (0, 0.1], got {gamma_value}")
    if snr < 0.0 or not math.isfinite(snr):
        raise DomainError(f"snr must be a finite nonnegative ratio, got {snr}")
    return math.log1p(gamma_value * snr)


@dataclass(frozen=True)
class GmiReport:
    """All rate quantities for one (quantizer, SNR) operating point."""

    coeff_a: float
    coeff_b: float
    gamma: float
    snr: float
    delta: float
    alpha_scale: complex
    gmi_nats: float
    capacity_nats: float
    rate_loss_nats: float


def build_report(spec: UniformSpec, snr: float) -> GmiReport:
    """GmiReport for a uniform quantizer at a given SNR.

    The decoder scale is reported for the canonical unit channel
    (h = 1, σ² = 1, σx² = snr), for which α is real positive.
    """
    a = coeff_a_uniform(spec)
    b = coeff_b_uniform(spec)
    g = gamma(spec)
    rate = gmi_rate(g, snr)
    cap = capacity_nats(snr)
    return GmiReport(
        coeff_a=a,
        coeff_b=b,
        gamma=g,
        snr=snr,
        delta=delta_from_gamma(g, snr),
        alpha_scale=_alpha(1.0, snr, 1.0, a) if snr > 0.0 else complex(0.0),
        gmi_nats=rate,
        capacity_nats=cap,
        rate_loss_nats=cap - rate,
    )


def report_json_dict(spec: UniformSpec, report: GmiReport) -> dict:
    """Serialize a uniform-quantizer report with the stable public field names."""
    if report.snr <= 0.0:
        raise DomainError("serialized reports require snr > 0 (snr_db is a dB field)")
    return {
        "K": spec.levels_K,
        "step": spec.step,
        "loading_factor": spec.loading_factor,
        "A": report.coeff_a,
        "B": report.coeff_b,
        "gamma": report.gamma,
        "snr_db": 10.0 * math.log10(report.snr),
        "gmi_bits": to_bits(report.gmi_nats),
        "capacity_bits": to_bits(report.capacity_nats),
        "loss_bits": to_bits(report.rate_loss_nats),
    }
