"""Tests for the fine-resolution loss decomposition and loading optimization.

MSE values are checked against per-cell adaptive quadrature of
2 * int (v - q(v))^2 phi(v) dv, and the closed-form overload term against
its defining tail expression built from the numerics primitives.
"""

import json
import math
from importlib import resources

import pytest
from scipy import integrate

from quantrate import (
    ConvergenceError,
    DomainError,
    UniformSpec,
    coeff_a_uniform,
    coeff_b_uniform,
    gamma,
    gamma_bar,
    gmi_rate,
    granular_loss_approx,
    loading_estimate,
    make_uniform,
    mse_optimal_loading,
    mse_uniform,
    optimal_loading,
    overload_loss_approx,
    q_function,
    quantize,
    scaling_law,
    stationarity_residual,
    std_normal_pdf,
    tail_integral_phi_minus_tq,
    tail_integral_tq,
)
from quantrate.highres import REFERENCE_SNR

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


# --- saturation-limit loss coefficient ---


def test_gamma_bar_frozen_value():
    assert gamma_bar(4.0) == pytest.approx(6.17714831124337e-06, rel=1e-13)


def test_gamma_bar_matches_tail_primitives():
    for L in (0.5, 2.0, 4.0, 7.0):
        ref = (tail_integral_phi_minus_tq(L) - q_function(L) ** 2) / (
            0.25 - tail_integral_tq(L)
        )
        assert gamma_bar(L) == pytest.approx(ref, rel=1e-13)


def test_gamma_bar_is_riemann_limit_of_gamma():
    # At fixed L = 4, |gamma(K) - gamma_bar| decreases strictly in K and
    # drops below 1e-6 by K = 2**14.
    diffs = [
        abs(gamma(UniformSpec.from_loading(2**p, 4.0)) - gamma_bar(4.0))
        for p in range(4, 15)
    ]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    assert diffs[8] < 1e-4  # K = 2**12
    assert diffs[-1] < 1e-6  # K = 2**14


def test_coefficient_sums_converge_to_tail_limits():
    # Coefficient sums approach their integral limits at the scaling-law
    # loading: the A gap vanishes and the B gap behaves like pi * step^2/24.
    ratios_b = []
    for p in range(6, 13):
        K = 2**p
        spec = UniformSpec.from_loading(K, scaling_law(K))
        L, step = spec.loading_factor, spec.step
        gap_a = abs(math.sqrt(2 * math.pi) * (0.5 - q_function(L)) - coeff_a_uniform(spec))
        gap_b = abs(math.pi * (0.5 - 2.0 * tail_integral_tq(L)) - coeff_b_uniform(spec))
        assert gap_a / step**2 < 0.001
        ratios_b.append(gap_b / step**2 * 24.0 / math.pi)
    assert ratios_b[-1] == pytest.approx(1.0, abs=0.05)


# --- loss-rate approximations ---


def test_overload_loss_closed_form():
    assert overload_loss_approx(5.0, 10.0) == pytest.approx(
        4.0 * std_normal_pdf(5.0) / 125.0 * 10.0, rel=1e-14
    )


def test_overload_loss_tracks_gamma_bar():
    ratios = [gamma_bar(L) * L**3 / (4.0 * std_normal_pdf(L)) for L in (4.0, 6.0, 8.0, 12.0)]
    assert ratios == pytest.approx([0.738506, 0.861133, 0.915869, 0.960373], abs=1e-5)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert gamma_bar(5.0) * 10.0 / overload_loss_approx(5.0, 10.0) == pytest.approx(
        0.8131641547161391, rel=1e-10
    )


def test_overload_loss_requires_moderate_loading():
    with pytest.raises(DomainError):
        overload_loss_approx(2.9, 10.0)
    overload_loss_approx(3.0, 10.0)  # boundary allowed


def test_granular_loss():
    assert granular_loss_approx(0.6, 10.0) == pytest.approx(0.36 / 12.0 * 10.0, rel=1e-15)
    with pytest.raises(DomainError):
        granular_loss_approx(-0.1, 10.0)


def test_loss_split_is_additive():
    # gamma ~ step^2/12 + gamma_bar(L) in the fine-step regime.
    spec = UniformSpec.from_loading(2**10, 4.0)
    approx = spec.step**2 / 12.0 + gamma_bar(4.0)
    assert gamma(spec) == pytest.approx(approx, rel=0.02)


# --- stationarity ---


def test_stationarity_residual_vanishes_at_optimum():
    an = optimal_loading(4)
    assert abs(stationarity_residual(UniformSpec.from_loading(4, an.l_star))) < 1e-8
    assert stationarity_residual(UniformSpec.from_loading(4, an.l_star - 0.1)) > 0.0
    assert stationarity_residual(UniformSpec.from_loading(4, an.l_star + 0.1)) < 0.0


def test_stationarity_residual_one_level_is_loading_dependent():
    # For K = 1 the ratio A/B depends on the point placement, not on any
    # optimality property, so the residual is generally nonzero.
    assert stationarity_residual(UniformSpec.from_loading(1, 4.0)) != pytest.approx(
        0.0, abs=1e-3
    )


# --- loading laws ---


def test_scaling_law_values():
    assert scaling_law(4) == pytest.approx(2.0 * math.sqrt(math.log(8.0)), rel=1e-15)
    assert scaling_law(4) == pytest.approx(2.884053773201766, rel=1e-13)
    assert scaling_law(2**15) == pytest.approx(6.6604368892615815, rel=1e-13)
    laws = [scaling_law(2**p) for p in range(1, 17)]
    assert all(b > a for a, b in zip(laws, laws[1:]))


def test_loading_estimate_solves_fixed_point():
    for K in (4, 64, 2**10, 2**15):
        L = loading_estimate(K)
        residual = L * L + 6.0 * math.log(L) - math.log(18.0 / math.pi) - 4.0 * math.log(2.0 * K)
        assert abs(residual) < 1e-10
    assert loading_estimate(4) == pytest.approx(2.268862411919846, rel=1e-12)


def test_loading_estimate_requires_two_levels():
    with pytest.raises(DomainError):
        loading_estimate(1)


def test_optimal_loading_frozen_values():
    assert optimal_loading(2).l_star == pytest.approx(1.9913733717647104, abs=1e-9)
    assert optimal_loading(4).l_star == pytest.approx(2.3440777656905123, abs=1e-9)
    assert optimal_loading(8).l_star == pytest.approx(2.6816048975026083, abs=1e-9)


def test_optimal_loading_is_gamma_minimum():
    an = optimal_loading(4)
    g_star = gamma(UniformSpec.from_loading(4, an.l_star))
    assert an.gamma_at_star == pytest.approx(g_star, rel=1e-12)
    for dL in (-0.05, -0.01, 0.01, 0.05):
        assert gamma(UniformSpec.from_loading(4, an.l_star + dL)) > g_star


def test_optimal_loading_is_snr_independent():
    # Maximizing the rate directly at widely different SNRs lands on the
    # same loading as the gamma minimization.
    from quantrate.numerics import Tolerance, maximize_scalar

    an = optimal_loading(8)
    for snr in (1.0, 100.0):
        x, _ = maximize_scalar(
            lambda L: gmi_rate(gamma(UniformSpec.from_loading(8, L)), snr),
            (1.5, scaling_law(8) + 2.0),
            Tolerance(1e-12, 0.0, 400),
        )
        assert abs(x - an.l_star) < 1e-6


def test_optimal_loading_companions():
    for p in (6, 8, 10):
        an = optimal_loading(2**p)
        assert an.step_star == pytest.approx(an.l_star / 2**p, rel=1e-15)
        assert an.l_hat == pytest.approx(loading_estimate(2**p), rel=1e-15)
        assert an.gmi_at_star >= an.gmi_at_hat
        assert an.gmi_at_star - an.gmi_at_hat < 1e-5  # nats, at snr = 10
        assert abs(an.l_star - an.l_hat) < 0.025
        assert an.gmi_at_star == pytest.approx(
            gmi_rate(an.gamma_at_star, REFERENCE_SNR), rel=1e-13
        )


def test_optimal_loading_requires_two_levels():
    with pytest.raises(DomainError):
        optimal_loading(1)


def test_estimate_gap_shrinks_at_high_resolution():
    # The estimate crosses the optimum near K = 2^4 and its absolute gap
    # peaks at K = 2^8; from there on it decreases.
    gaps = [abs(optimal_loading(2**p).l_star - loading_estimate(2**p)) for p in range(8, 13)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_gamma_is_unimodal_in_loading():
    import numpy as np

    for K in (2, 8, 64, 1024):
        grid = np.linspace(0.5, scaling_law(K) + 3.0, 400)
        vals = [gamma(UniformSpec.from_loading(K, L)) for L in grid]
        signs = np.sign(np.diff(vals))
        changes = np.count_nonzero(np.diff(signs[signs != 0]))
        assert changes == 1


# --- distortion ---


def quad_mse(spec: UniformSpec) -> float:
    q = make_uniform(spec.levels_K, spec.step)
    edges = [k * spec.step for k in range(spec.levels_K)] + [spec.loading_factor + 12.0]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(
            lambda v: (v - quantize(q, v)) ** 2 * std_normal_pdf(v),
            lo,
            hi,
            limit=400,
            epsabs=1e-14,
            epsrel=1e-13,
        )
        assert err < 1e-12
        total += val
    return 2.0 * total


@pytest.mark.parametrize("levels,L", [(1, 2.0), (2, 1.8), (4, 2.3), (32, 4.0)])
def test_mse_matches_quadrature(levels, L):
    spec = UniformSpec.from_loading(levels, L)
    assert mse_uniform(spec) == pytest.approx(quad_mse(spec), rel=1e-10)


def test_mse_moment_identity():
    # MSE = 1 - 2*sqrt(2/pi)*A + (2/pi)*B for unit-variance input.
    for K in (1, 2, 4, 32, 1024):
        for L in (0.8, 2.0, 4.0):
            spec = UniformSpec.from_loading(K, L)
            ref = (
                1.0
                - 2.0 * SQRT_2_OVER_PI * coeff_a_uniform(spec)
                + (2.0 / math.pi) * coeff_b_uniform(spec)
            )
            assert abs(mse_uniform(spec) - ref) < 1e-14


def test_one_bit_mse_at_matched_point():
    # Placing the single point at E[|V|] * sqrt(pi/2)... i.e. r = sqrt(2/pi)
    # gives MSE = 1 - 2/pi, the same constant that caps the rate loss.
    spec = UniformSpec(1, 2.0 * SQRT_2_OVER_PI)
    assert mse_uniform(spec) == pytest.approx(1.0 - 2.0 / math.pi, rel=1e-13)


def test_mse_unimodal_in_loading():
    vals = [mse_uniform(UniformSpec.from_loading(4, L)) for L in [0.5 + 0.05 * i for i in range(80)]]
    import numpy as np

    signs = np.sign(np.diff(vals))
    assert np.count_nonzero(np.diff(signs[signs != 0])) == 1


def test_mse_optimum_coincides_with_rate_optimum():
    # The MSE-optimal and rate-optimal loadings are the same point: at the
    # stationary loading, MSE = gamma exactly.
    for K in (2, 4, 8, 16, 2**10):
        l_mse = mse_optimal_loading(K)
        assert abs(l_mse - optimal_loading(K).l_star) < 5e-5
        spec = UniformSpec.from_loading(K, l_mse)
        assert mse_uniform(spec) == pytest.approx(gamma(spec), rel=1e-7)


def test_mse_optimal_loading_values():
    vals = [mse_optimal_loading(K) for K in (2, 4, 8, 16)]
    assert vals == pytest.approx(
        [1.99137335, 2.34407772, 2.68160496, 3.01022059], abs=1e-6
    )
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        mse_optimal_loading(1)


def test_mse_exceeds_granular_floor_at_optimum():
    # At the optimal loading the distortion sits a bounded factor above the
    # granular-only floor step^2/12 (about 7.9% at K = 2**10).
    K = 2**10
    spec = UniformSpec.from_loading(K, mse_optimal_loading(K))
    ratio = mse_uniform(spec) / (spec.step**2 / 12.0)
    assert ratio == pytest.approx(1.0791793770541191, abs=1e-6)


# --- analysis record ---


def test_loading_analysis_json_keys_and_schema():
    doc = optimal_loading(16).to_json_dict()
    assert list(doc) == [
        "K",
        "b",
        "L_star",
        "step_star",
        "L_hat",
        "scaling_law",
        "L_mse",
        "gamma_at_star",
        "gmi_at_star_bits",
        "gmi_at_hat_bits",
    ]
    assert doc["b"] == 5.0
    json.dumps(doc)
    jsonschema = pytest.importorskip("jsonschema")
    with resources.files("quantrate.schemas").joinpath(
        "loading_analysis.schema.json"
    ).open("r") as fh:
        schema = json.load(fh)
    jsonschema.validate(doc, schema)


def test_convergence_error_is_exported():
    assert issubclass(ConvergenceError, Exception)
