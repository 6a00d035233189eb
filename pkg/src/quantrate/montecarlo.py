"""Seeded Monte Carlo validation of the analytic rate formulas.

The channel is Y = q(g·Re(hX+Z)/σ_v) + j·q(g·Im(hX+Z)/σ_v) with X, Z i.i.d.
circular complex Gaussians: each component of hX+Z is scaled to unit variance
(σ_v per component), multiplied by the gain-control factor g, and quantized
by the symmetric rule in the normalized domain — so the analytic coefficients
of the *same* quantizer apply directly when g = 1.

Randomness comes from a counter-based Philox stream; Gaussians are formed by
an explicit Box–Muller transform of that stream rather than through library
normal generators, so estimates are reproducible bit-for-bit across platforms
and simple to re-derive. Standard errors use 16-batch batch means on the
moment ratio Δ̂ (mapped to the rate scale by 1/(1-Δ̂); at very high SNR a
single batch can put Δ̂ above 1, where a per-batch log would blow up, so the
batching happens on Δ̂ itself).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .gmi import decoder_scale_alpha
from .quantizer import SymmetricQuantizer, quantize

BATCHES = 16
MIN_SAMPLES = 10_000
MAX_MESSAGES = 2**16
MIN_TRIALS = 100


@dataclass(frozen=True)
class ChannelParams:
    """Complex-AWGN link: Y before quantization is h·X + Z, front-end gain g."""

    h: complex
    sigma_x2: float
    sigma2: float
    gain: float = 1.0

    def __post_init__(self) -> None:
        if not (self.sigma_x2 > 0.0 and math.isfinite(self.sigma_x2)):
            raise DomainError(f"sigma_x2 must be positive, got {self.sigma_x2}")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise DomainError(f"sigma2 must be positive, got {self.sigma2}")
        if not (self.gain > 0.0 and math.isfinite(self.gain)):
            raise DomainError(f"gain must be positive, got {self.gain}")

    @property
    def sigma_v(self) -> float:
        """Per-component standard deviation of hX + Z."""
        return math.sqrt((abs(self.h) ** 2 * self.sigma_x2 + self.sigma2) / 2.0)

    @property
    def snr(self) -> float:
        return abs(self.h) ** 2 * self.sigma_x2 / self.sigma2


@dataclass(frozen=True)
class MomentEstimate:
    """Sample moments and the induced rate estimate from one seeded run."""

    exy_conj: complex       # sample E[X·Y*]
    ey2: float              # sample E[|Y|²]
    delta_hat: float
    gmi_hat_nats: float
    n_samples: int
    std_err_gmi: float


@dataclass(frozen=True)
class DecodeExperiment:
    """Empirical nearest-neighbor decoding result."""

    rate_bits: float
    block_len: int
    num_messages: int
    trials: int
    error_rate: float
    scale_a: complex


def _complex_gaussians(rng: np.random.Generator, n: int, power: float) -> np.ndarray:
    """n i.i.d. circular complex Gaussians of total power `power`, by Box-Muller."""
    u1 = rng.random(n)
    u2 = rng.random(n)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    return (radius * np.cos(angle) + 1j * (radius * np.sin(angle))) * math.sqrt(power / 2.0)


def _quantize_array(u: np.ndarray, thresholds: np.ndarray, points: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(thresholds, np.abs(u), side="right")
    return np.where(u >= 0.0, points[idx], -points[idx])


def simulate_symbol(
    params: ChannelParams, q: SymmetricQuantizer, x: complex, z: complex
) -> complex:
    """One pass through the channel: quantize g·Re/Im(hX+Z)/σ_v independently."""
    v = params.h * x + z
    scale = params.gain / params.sigma_v
    return complex(quantize(q, scale * v.real), quantize(q, scale * v.imag))


def estimate_moments(
    params: ChannelParams, q: SymmetricQuantizer, n_samples: int, seed: int
) -> MomentEstimate:
    """Estimate E[XY*], E[|Y|²], Δ, and the GMI from n seeded channel uses.

    Samples are processed in 16 equal batches (n_samples is floored to a
    multiple of 16; the count actually used is reported back). Deterministic
    for a given seed.
    """
    if n_samples < MIN_SAMPLES:
        raise ParameterError(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    per_batch = n_samples // BATCHES
    n_used = per_batch * BATCHES

    rng = np.random.Generator(np.random.Philox(seed))
    thresholds = np.asarray(q.thresholds, dtype=float)
    points = np.asarray(q.points, dtype=float)
    scale = params.gain / params.sigma_v

    exy_batch = np.empty(BATCHES, dtype=complex)
    ey2_batch = np.empty(BATCHES, dtype=float)
    for i in range(BATCHES):
        x = _complex_gaussians(rng, per_batch, params.sigma_x2)
        z = _complex_gaussians(rng, per_batch, params.sigma2)
        v = params.h * x + z
        y = _quantize_array(scale * v.real, thresholds, points) + 1j * _quantize_array(
            scale * v.imag, thresholds, points
        )
        exy_batch[i] = np.mean(x * np.conj(y))
        ey2_batch[i] = np.mean(np.abs(y) ** 2)

    delta_batch = np.abs(exy_batch) ** 2 / (params.sigma_x2 * ey2_batch)
    exy = complex(np.mean(exy_batch))
    ey2 = float(np.mean(ey2_batch))
    delta_hat = abs(exy) ** 2 / (params.sigma_x2 * ey2)
    if not delta_hat < 1.0:
        raise ConvergenceError(
            f"pooled moment ratio {delta_hat} reached 1; estimate cannot be mapped to a rate"
        )
    gmi_hat = -math.log1p(-delta_hat)
    std_err_delta = float(np.std(delta_batch, ddof=1) / math.sqrt(BATCHES))
    std_err_gmi = std_err_delta / (1.0 - delta_hat)
    return MomentEstimate(
        exy_conj=exy,
        ey2=ey2,
        delta_hat=delta_hat,
        gmi_hat_nats=gmi_hat,
        n_samples=n_used,
        std_err_gmi=std_err_gmi,
    )


def run_decode_experiment(
    params: ChannelParams,
    q: SymmetricQuantizer,
    rate_bits: float,
    block_len: int,
    trials: int,
    seed: int,
) -> DecodeExperiment:
    """Nearest-neighbor decoding over fresh Gaussian codebooks.

    Each trial draws an i.i.d. complex Gaussian codebook of M = ⌈2^(N·R)⌉
    codewords, transmits the first, and decodes by minimum distance
    |Y - a·X(m)|² with the analytic scale a; an error is counted when some
    competitor beats the transmitted codeword strictly. M is capped at 2^16:
    exhaustive decoding is Θ(M·N) per trial, so larger message sets are
    rejected rather than silently truncated.
    """
    if trials < MIN_TRIALS:
        raise ParameterError(f"need at least {MIN_TRIALS} trials, got {trials}")
    if block_len < 1:
        raise ParameterError(f"block_len must be positive, got {block_len}")
    if rate_bits <= 0.0 or not math.isfinite(rate_bits):
        raise ParameterError(f"rate_bits must be positive, got {rate_bits}")
    exponent = block_len * rate_bits
    if exponent > math.log2(MAX_MESSAGES):
        raise ParameterError(
            f"message count 2^{exponent:.1f} exceeds the 2^16 exhaustive-decoding cap"
            f" (block_len={block_len}, rate_bits={rate_bits:g})"
        )
    num_messages = math.ceil(2.0**exponent)
    if num_messages < 2:
        raise ParameterError(
            f"rate {rate_bits:g} bits over block_len {block_len} yields fewer than 2 messages"
        )

    scale_a = decoder_scale_alpha(params, q)
    rng = np.random.Generator(np.random.Philox(seed))
    thresholds = np.asarray(q.thresholds, dtype=float)
    points = np.asarray(q.points, dtype=float)
    scale = params.gain / params.sigma_v

    errors = 0
    for _ in range(trials):
        codebook = _complex_gaussians(rng, num_messages * block_len, params.sigma_x2).reshape(
            num_messages, block_len
        )
        x = codebook[0]
        z = _complex_gaussians(rng, block_len, params.sigma2)
        v = params.h * x + z
        y = _quantize_array(scale * v.real, thresholds, points) + 1j * _quantize_array(
            scale * v.imag, thresholds, points
        )
        metrics = np.sum(np.abs(y[np.newaxis, :] - scale_a * codebook) ** 2, axis=1)
        if np.min(metrics[1:]) < metrics[0]:
            errors += 1

    return DecodeExperiment(
        rate_bits=rate_bits,
        block_len=block_len,
        num_messages=num_messages,
        trials=trials,
        error_rate=errors / trials,
        scale_a=scale_a,
    )
