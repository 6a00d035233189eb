"""Tests for quantizer construction, application, and gain normalization."""

import json
import math
from importlib import resources

import pytest

from quantrate import DomainError, SymmetricQuantizer, UniformSpec, make_uniform, normalize_gain, quantize


def load_schema(name: str) -> dict:
    with resources.files("quantrate.schemas").joinpath(name).open("r") as fh:
        return json.load(fh)


# --- construction ---


def test_make_uniform_one_bit():
    q = make_uniform(1, 2.0)
    assert q.thresholds == ()
    assert q.points == (1.0,)


def test_make_uniform_two_level():
    q = make_uniform(2, 1.0)
    assert q.thresholds == (1.0,)
    assert q.points == (0.5, 1.5)


def test_make_uniform_k4():
    q = make_uniform(4, 1.0)
    assert q.thresholds == (1.0, 2.0, 3.0)
    assert q.points == (0.5, 1.5, 2.5, 3.5)
    assert UniformSpec(4, 1.0).loading_factor == 4.0


def test_make_uniform_rejects_bad_args():
    with pytest.raises(DomainError):
        make_uniform(0, 1.0)
    with pytest.raises(DomainError):
        make_uniform(4, 0.0)
    with pytest.raises(DomainError):
        make_uniform(4, -1.0)


def test_symmetric_quantizer_validation():
    with pytest.raises(DomainError):
        SymmetricQuantizer(2, (), (0.5, 1.5))  # missing threshold
    with pytest.raises(DomainError):
        SymmetricQuantizer(2, (1.0,), (0.5,))  # missing point
    with pytest.raises(DomainError):
        SymmetricQuantizer(2, (-1.0,), (0.5, 1.5))
    with pytest.raises(DomainError):
        SymmetricQuantizer(3, (2.0, 1.0), (0.5, 1.5, 2.5))
    with pytest.raises(DomainError):
        SymmetricQuantizer(2, (1.0,), (1.5, 0.5))
    with pytest.raises(DomainError):
        SymmetricQuantizer(2, (1.0,), (0.5, math.inf))


def test_points_need_not_sit_inside_cells():
    # General symmetric quantizers allow r_k outside [l_{k-1}, l_k).
    q = SymmetricQuantizer(2, (1.0,), (0.9, 5.0))
    assert q.points == (0.9, 5.0)


def test_resolution_bits():
    assert make_uniform(1, 1.0).resolution_bits == 1.0
    assert make_uniform(8, 1.0).resolution_bits == 4.0
    assert make_uniform(3, 1.0).resolution_bits == pytest.approx(math.log2(6.0))


def test_uniform_spec_invariant_and_from_loading():
    spec = UniformSpec(levels_K=8, step=0.25)
    assert spec.loading_factor == 8 * 0.25
    spec2 = UniformSpec.from_loading(8, 2.0)
    assert spec2.step == 0.25
    with pytest.raises(DomainError):
        UniformSpec(0, 1.0)
    with pytest.raises(DomainError):
        UniformSpec.from_loading(4, 0.0)


# --- quantize ---


def test_quantize_inside_first_cell():
    q = make_uniform(2, 1.0)
    assert quantize(q, 0.99) == 0.5


def test_quantize_threshold_is_lower_inclusive():
    q = make_uniform(2, 1.0)
    assert quantize(q, 1.0) == 1.5


def test_quantize_overload_clamps():
    q = make_uniform(2, 1.0)
    assert quantize(q, -7.0) == -1.5
    assert quantize(q, 7.0) == 1.5


def test_quantize_zero_convention():
    q = make_uniform(4, 0.5)
    assert quantize(q, 0.0) == q.points[0]


def test_quantize_odd():
    q = make_uniform(4, 0.7)
    for i in range(1, 60):
        v = 0.09 * i
        assert quantize(q, -v) == -quantize(q, v)


def test_quantize_monotone():
    q = SymmetricQuantizer(3, (0.8, 2.0), (0.5, 1.4, 3.0))
    grid = [-4.0 + 0.05 * i for i in range(161)]
    out = [quantize(q, v) for v in grid]
    assert all(b >= a for a, b in zip(out, out[1:]))


def test_quantize_output_set():
    q = make_uniform(3, 0.6)
    grid = [-3.0 + 0.01 * i for i in range(601)]
    observed = {quantize(q, v) for v in grid}
    expected = {p for p in q.points} | {-p for p in q.points}
    assert observed == expected


def test_quantize_granular_error_bound():
    spec = UniformSpec(4, 0.5)
    q = make_uniform(spec.levels_K, spec.step)
    L = spec.loading_factor
    for i in range(-200, 201):
        v = i * L / 200.0
        assert abs(quantize(q, v) - v) <= spec.step / 2.0 + 1e-15


def test_quantize_rejects_nonfinite():
    with pytest.raises(DomainError):
        quantize(make_uniform(2, 1.0), math.nan)


# --- normalize_gain ---


def test_normalize_gain_identity():
    q = normalize_gain((1.0,), (0.5, 1.5), 1.0, 2.3)
    assert q.thresholds == (1.0,)
    assert q.points == (0.5, 1.5)


def test_normalize_gain_divides_by_gain():
    q = normalize_gain((2.0,), (1.0, 3.0), 2.0, 1.0)
    assert q.thresholds == (1.0,)
    assert q.points == (0.5, 1.5)


def test_normalize_gain_scales_loading_factor():
    # Doubling g halves the loading factor of the effective uniform quantizer.
    q1 = normalize_gain((1.0, 2.0, 3.0), (0.5, 1.5, 2.5, 3.5), 1.0, 1.0)
    q2 = normalize_gain((1.0, 2.0, 3.0), (0.5, 1.5, 2.5, 3.5), 2.0, 1.0)
    L1 = 4 * (q1.thresholds[0])
    L2 = 4 * (q2.thresholds[0])
    assert L2 == L1 / 2.0


def test_normalize_gain_rejects_bad_scales():
    with pytest.raises(DomainError):
        normalize_gain((1.0,), (0.5, 1.5), 0.0, 1.0)
    with pytest.raises(DomainError):
        normalize_gain((1.0,), (0.5, 1.5), 1.0, -1.0)


# --- JSON round-trip ---


def test_json_round_trip():
    q = make_uniform(4, 0.75)
    d = q.to_json_dict()
    assert set(d) == {"K", "thresholds", "points"}
    q2 = SymmetricQuantizer.from_json_dict(json.loads(json.dumps(d)))
    assert q2 == q


def test_json_matches_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = load_schema("quantizer.schema.json")
    jsonschema.validate(make_uniform(5, 0.4).to_json_dict(), schema)
    jsonschema.validate(make_uniform(1, 2.0).to_json_dict(), schema)
