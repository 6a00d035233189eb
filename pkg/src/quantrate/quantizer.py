"""Symmetric 2K-level quantizers in the normalized (unit-variance) domain.

A symmetric quantizer is described by K-1 positive thresholds 0 < ℓ_1 < …
< ℓ_{K-1} (with implicit ℓ_0 = 0 and ℓ_K = ∞) and K positive output points
r_1 < … < r_K; negative inputs map to the mirrored points. Cells are
lower-inclusive: an input v with ℓ_{k-1} ≤ |v| < ℓ_k produces sgn(v)·r_k,
inputs beyond ℓ_{K-1} clamp to the outermost point, and v = 0 maps to +r_1
(a fixed convention for a probability-zero event, keeping the map
deterministic).

Everything here lives in normalized coordinates; physical front-end gain
enters only through :func:`normalize_gain`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError


def _as_float_tuple(xs: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(x) for x in xs)


def _strictly_increasing(xs: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(xs, xs[1:]))


@dataclass(frozen=True)
class SymmetricQuantizer:
    """A symmetric 2K-level quantizer (K positive output levels)."""

    levels_K: int
    thresholds: Tuple[float, ...]
    points: Tuple[float, ...]

    def __post_init__(self) -> None:
        K = self.levels_K
        if K < 1:
            raise DomainError(f"levels_K must be >= 1, got {K}")
        object.__setattr__(self, "thresholds", _as_float_tuple(self.thresholds))
        object.__setattr__(self, "points", _as_float_tuple(self.points))
        if len(self.thresholds) != K - 1:
            raise DomainError(
                f"expected {K - 1} thresholds for levels_K={K}, got {len(self.thresholds)}"
            )
        if len(self.points) != K:
            raise DomainError(f"expected {K} points, got {len(self.points)}")
        if self.thresholds and (self.thresholds[0] <= 0.0 or not _strictly_increasing(self.thresholds)):
            raise DomainError("thresholds must be strictly increasing and positive")
        if self.points[0] <= 0.0 or not _strictly_increasing(self.points):
            raise DomainError("points must be strictly increasing and positive")
        if not all(map(math.isfinite, self.thresholds + self.points)):
            raise DomainError("thresholds and points must be finite")

    @property
    def resolution_bits(self) -> float:
        """b = log2(2K), the nominal resolution in bits."""
        return math.log2(2 * self.levels_K)

    def to_json_dict(self) -> dict:
        return {
            "K": self.levels_K,
            "thresholds": list(self.thresholds),
            "points": list(self.points),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SymmetricQuantizer":
        return cls(int(d["K"]), tuple(d["thresholds"]), tuple(d["points"]))


@dataclass(frozen=True)
class UniformSpec:
    """Uniform (mid-rise) quantizer family: step ℓ and loading factor L = K·ℓ."""

    levels_K: int
    step: float
    loading_factor: float = field(default=0.0)

    def __post_init__(self) -> None:
        if self.levels_K < 1:
            raise DomainError(f"levels_K must be >= 1, got {self.levels_K}")
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise DomainError(f"step must be positive and finite, got {self.step}")
        object.__setattr__(self, "loading_factor", self.levels_K * self.step)

    @classmethod
    def from_loading(cls, levels_K: int, loading_factor: float) -> "UniformSpec":
        if levels_K < 1:
            raise DomainError(f"levels_K must be >= 1, got {levels_K}")
        if not (loading_factor > 0.0 and math.isfinite(loading_factor)):
            raise DomainError(f"loading factor must be positive, got {loading_factor}")
        return cls(levels_K, loading_factor / levels_K)


def make_uniform(levels_K: int, step: float) -> SymmetricQuantizer:
    """Uniform mid-rise quantizer: thresholds k·ℓ, points (k-½)·ℓ."""
    if levels_K < 1:
        raise DomainError(f"levels_K must be >= 1, got {levels_K}")
    if not (step > 0.0 and math.isfinite(step)):
        raise DomainError(f"step must be positive and finite, got {step}")
    thresholds = tuple(k * step for k in range(1, levels_K))
    points = tuple((k - 0.5) * step for k in range(1, levels_K + 1))
    return SymmetricQuantizer(levels_K, thresholds, points)


def cell_indices(thresholds: np.ndarray, magnitudes: np.ndarray) -> np.ndarray:
    """Lower-inclusive cell index of each |v|: count of thresholds <= |v|.

    Index k means ℓ_k ≤ |v| < ℓ_{k+1}; values beyond the last threshold get
    the last index (overload clamps).
    """
    return np.searchsorted(thresholds, magnitudes, side="right")


def quantize(q: SymmetricQuantizer, v: float) -> float:
    """Apply the quantizer to a normalized scalar input."""
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"input must be finite, got {v!r}")
    idx = int(np.searchsorted(np.asarray(q.thresholds), abs(v), side="right"))
    r = q.points[idx]
    return r if v >= 0.0 else -r


def normalize_gain(
    raw_thresholds: Sequence[float],
    raw_points: Sequence[float],
    gain: float,
    sigma_v: float,
) -> SymmetricQuantizer:
    """Normalized equivalent of a quantizer specified in raw front-end units.

    A front end with gain g that compares g·V against raw thresholds l_k·σ_v
    and emits y_k·σ_v acts on the normalized input V/σ_v exactly like a
    quantizer with thresholds l_k/g and points y_k/g; σ_v itself cancels but
    must be a valid scale.
    """
    if not (gain > 0.0 and math.isfinite(gain)):
        raise DomainError(f"gain must be positive, got {gain}")
    if not (sigma_v > 0.0 and math.isfinite(sigma_v)):
        raise DomainError(f"sigma_v must be positive, got {sigma_v}")
    thresholds = tuple(l / gain for l in raw_thresholds)
    points = tuple(y / gain for y in raw_points)
    return SymmetricQuantizer(len(points), thresholds, points)
