"""High-resolution loading laws and loading-factor optimization.

For uniform quantizers with many levels, the rate-loss parameter γ of a
loading factor L splits into a granular part ~ ℓ²/12 and an overload part
that decays like a Gaussian tail in L. This module exposes the limiting
curve γ̄(L), the two loss approximations, the optimal loading factor L*
(with its scaling law 2√(ln 2K) and the closed-equation estimate L̂), and
the MSE-optimal loading for comparison.

GMI values inside a LoadingAnalysis are quoted at REFERENCE_SNR; the
optimal loading itself does not depend on that choice (the rate is monotone
in γ, so the argmax over L is SNR-free — asserted by tests, not assumed).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, DomainError
from .gmi import (
    SQRT_2PI,
    _pdf_vec,
    _q_vec,
    coeff_a_uniform,
    coeff_b_uniform,
    gamma,
    gmi_rate,
    to_bits,
)
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    find_root,
    maximize_scalar,
    q_function,
    tail_integral_phi_minus_tq,
    tail_integral_tq,
)
from .quantizer import UniformSpec

#: SNR (linear) at which LoadingAnalysis quotes its GMI values: 10 dB.
REFERENCE_SNR = 10.0

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class LoadingAnalysis:
    """Optimal-loading summary for one resolution (K positive levels)."""

    levels_K: int
    l_star: float
    step_star: float
    l_hat: float
    scaling_law: float
    gmi_at_star: float
    gmi_at_hat: float
    l_mse: float
    gamma_at_star: float

    def to_json_dict(self) -> dict:
        return {
            "K": self.levels_K,
            "b": math.log2(2 * self.levels_K),
            "L_star": self.l_star,
            "step_star": self.step_star,
            "L_hat": self.l_hat,
            "scaling_law": self.scaling_law,
            "L_mse": self.l_mse,
            "gamma_at_star": self.gamma_at_star,
            "gmi_at_star_bits": to_bits(self.gmi_at_star),
            "gmi_at_hat_bits": to_bits(self.gmi_at_hat),
        }


def gamma_bar(L: float) -> float:
    """Infinite-resolution limit of γ at fixed loading factor L.

    γ̄(L) = (∫_L^∞(φ - tQ)dt - Q²(L)) / (¼ - ∫_L^∞ tQ dt); positive and
    strictly decreasing. Singular at L = 0 where the denominator vanishes.
    """
    if not (L > 0.0 and math.isfinite(L)):
        raise DomainError(f"loading factor must be positive, got {L}")
    qL = q_function(L)
    num = tail_integral_phi_minus_tq(L) - qL * qL
    den = 0.25 - tail_integral_tq(L)
    return num / den


def overload_loss_approx(L: float, snr: float) -> float:
    """Leading-order overload rate loss, 4φ(L)/L³ · snr nats.

    This is the leading term of γ̄(L)·snr for large L: expanding the tail
    integrals with the Mills-ratio series gives
    γ̄(L) = 4φ(L)/L³ · (1 - 6/L² + 45/L⁴ - …). (A widely quoted variant
    normalizes by L⁴ without the √(2π); that form does not match γ̄ — see
    the ratio tests.) Intended for L ≥ 3 where the remainder is small.
    """
    if not (L >= 3.0 and math.isfinite(L)):
        raise DomainError(f"overload approximation expects L >= 3, got {L}")
    if snr < 0.0 or not math.isfinite(snr):
        raise DomainError(f"snr must be a finite nonnegative ratio, got {snr}")
    pdf = math.exp(-0.5 * L * L) / SQRT_2PI
    return 4.0 * pdf / L**3 * snr


def granular_loss_approx(step: float, snr: float) -> float:
    """Granular rate loss (ℓ²/12)·snr nats, the fine-quantization law."""
    if not (step > 0.0 and math.isfinite(step)):
        raise DomainError(f"step must be positive, got {step}")
    if snr < 0.0 or not math.isfinite(snr):
        raise DomainError(f"snr must be a finite nonnegative ratio, got {snr}")
    return step * step / 12.0 * snr


def stationarity_residual(spec: UniformSpec) -> float:
    """𝒜/ℬ - √(2/π); vanishes at the GMI-optimal step for fixed K ≥ 2.

    For K = 1 the GMI is flat in the step (γ is scale-invariant there), so
    every step is stationary while this residual is generally nonzero; the
    condition characterizes the optimum only for K ≥ 2.
    """
    return coeff_a_uniform(spec) / coeff_b_uniform(spec) - SQRT_2_OVER_PI


def scaling_law(levels_K: int) -> float:
    """Asymptotic optimal loading 2√(ln 2K)."""
    if levels_K < 1:
        raise DomainError(f"levels_K must be >= 1, got {levels_K}")
    return 2.0 * math.sqrt(math.log(2.0 * levels_K))


@functools.lru_cache(maxsize=None)
def loading_estimate(levels_K: int) -> float:
    """Closed-equation estimate L̂: the unique root of L² + 6 ln L - ln(18/π) = 4 ln(2K).

    The left side is strictly increasing on L > 0, so bisection on
    [0.5, scaling_law + 3] is guaranteed; the residual of the defining
    equation at the returned value is below 1e-10.
    """
    if levels_K < 2:
        raise DomainError(f"levels_K must be >= 2, got {levels_K}")
    rhs = 4.0 * math.log(2.0 * levels_K)
    offset = math.log(18.0 / math.pi)

    def f(L: float) -> float:
        return L * L + 6.0 * math.log(L) - offset - rhs

    bracket = (0.5, scaling_law(levels_K) + 3.0)
    return find_root(f, bracket, Tolerance(abs_tol=1e-13, rel_tol=0.0, max_iter=200))


def _gamma_at(levels_K: int, L: float) -> float:
    return gamma(UniformSpec.from_loading(levels_K, L))


def _gamma_slope_sign(levels_K: int, L: float) -> float:
    """𝒜ℬ' - 2𝒜'ℬ evaluated with closed-form step derivatives.

    Since dγ/dℓ = 𝒜(𝒜ℬ' - 2𝒜'ℬ)/ℬ² and 𝒜, ℬ > 0, this expression shares
    the sign (and the zero) of dγ/dL; its root is the polished L*.
    """
    step = L / levels_K
    k = np.arange(levels_K)
    x = k * step
    pdf = _pdf_vec(x)
    tail = _q_vec(x)
    a = SQRT_2PI * math.fsum(step * pdf) - 0.5 * step
    b = math.pi * math.fsum(2.0 * k * step * step * tail) + math.pi * step * step / 8.0
    da = SQRT_2PI * math.fsum(pdf * (1.0 - x * x)) - 0.5
    db = math.pi * math.fsum(4.0 * k * step * tail - 2.0 * x * x * pdf) + math.pi * step / 4.0
    # d(A²/B)/dℓ ∝ 2A'B - AB'; γ = 1 - A²/B, so dγ/dℓ has the opposite sign.
    return (a * db - 2.0 * da * b) / levels_K


@functools.lru_cache(maxsize=None)
def optimal_loading(levels_K: int, tol: Tolerance = DEFAULT_TOL) -> LoadingAnalysis:
    """Rate-optimal loading factor L* and its companions for one resolution.

    γ is minimized over L on [0.5, scaling_law + 3] (equivalent to
    maximizing the GMI at any SNR) with golden-section search, then polished
    on the analytic stationarity equation; the result is cross-validated
    against the root of :func:`stationarity_residual`, which must coincide
    to 1e-4. Requires K ≥ 2 (for K = 1, γ does not depend on L).
    """
    if levels_K < 2:
        raise DomainError(f"optimal loading requires levels_K >= 2, got {levels_K}")
    lo, hi = 0.5, scaling_law(levels_K) + 3.0
    l_coarse, _ = maximize_scalar(lambda L: -_gamma_at(levels_K, L), (lo, hi), tol)

    l_star = l_coarse
    for half_width in (0.02, 0.2):
        a = max(lo, l_coarse - half_width)
        b = min(hi, l_coarse + half_width)
        try:
            l_star = find_root(lambda L: _gamma_slope_sign(levels_K, L), (a, b), tol)
            break
        except BracketError:
            continue

    try:
        res_root = find_root(
            lambda L: stationarity_residual(UniformSpec.from_loading(levels_K, L)),
            (max(lo, l_star - 0.2), min(hi, l_star + 0.2)),
            tol,
        )
    except BracketError as exc:
        raise ConvergenceError(
            f"stationarity cross-validation found no sign change near L*={l_star:.6f}"
        ) from exc
    if abs(res_root - l_star) > 1e-4:
        raise ConvergenceError(
            f"optimizer and stationarity root disagree: {l_star:.8f} vs {res_root:.8f}"
        )

    g_star = _gamma_at(levels_K, l_star)
    l_hat = loading_estimate(levels_K)
    return LoadingAnalysis(
        levels_K=levels_K,
        l_star=l_star,
        step_star=l_star / levels_K,
        l_hat=l_hat,
        scaling_law=scaling_law(levels_K),
        gmi_at_star=gmi_rate(g_star, REFERENCE_SNR),
        gmi_at_hat=gmi_rate(_gamma_at(levels_K, l_hat), REFERENCE_SNR),
        l_mse=mse_optimal_loading(levels_K, tol),
        gamma_at_star=g_star,
    )


def mse_uniform(spec: UniformSpec) -> float:
    """Mean squared error of the uniform quantizer for unit-variance Gaussian input.

    Assembled from the per-cell closed form
    ∫_a^b (t-r)²φ(t)dt = (1+r²)(Q(a)-Q(b)) + aφ(a)-bφ(b) - 2r(φ(a)-φ(b)),
    with the outer cell taken to infinity; doubled for the negative axis.
    """
    K = spec.levels_K
    step = spec.step
    edges = step * np.arange(K + 1)            # ℓ_0..ℓ_K with ℓ_K handled as ∞
    points = step * (np.arange(K) + 0.5)
    pdf = _pdf_vec(edges)
    tail = _q_vec(edges)
    tail[-1] = 0.0
    pdf_term = edges * pdf
    pdf_term[-1] = 0.0
    pdf[-1] = 0.0
    cells = (
        (1.0 + points * points) * (tail[:-1] - tail[1:])
        + (pdf_term[:-1] - pdf_term[1:])
        - 2.0 * points * (pdf[:-1] - pdf[1:])
    )
    return 2.0 * math.fsum(cells)


@functools.lru_cache(maxsize=None)
def mse_optimal_loading(levels_K: int, tol: Tolerance = DEFAULT_TOL) -> float:
    """Loading factor minimizing the Gaussian MSE of the uniform quantizer."""
    if levels_K < 2:
        raise DomainError(f"MSE-optimal loading requires levels_K >= 2, got {levels_K}")
    lo, hi = 0.5, scaling_law(levels_K) + 3.0
    l_mse, _ = maximize_scalar(
        lambda L: -mse_uniform(UniformSpec.from_loading(levels_K, L)), (lo, hi), tol
    )
    return l_mse
