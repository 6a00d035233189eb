"""Gaussian special functions, closed-form tail integrals, and scalar solvers.

Everything downstream (quantizer coefficients, rate formulas, loading-factor
asymptotics) reduces to the standard normal pdf/tail and two tail integrals
that have exact integration-by-parts closed forms. Q(t) is computed through
erfc so it stays accurate to ~1e-15 relative error out to t ~ 10 and
underflows gracefully beyond, which the large-loading asymptotics rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import BracketError, ConvergenceError, DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)


def _require_finite(t: float, name: str = "t") -> float:
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"{name} must be finite, got {t!r}")
    return t


def std_normal_pdf(t: float) -> float:
    """Standard normal density φ(t) = exp(-t²/2)/√(2π)."""
    t = _require_finite(t)
    return math.exp(-0.5 * t * t) / SQRT_2PI


def q_function(t: float) -> float:
    """Gaussian tail probability Q(t) = ∫_t^∞ φ(u) du, via erfc."""
    t = _require_finite(t)
    return 0.5 * math.erfc(t / _SQRT2)


def q_bounds(t: float) -> Tuple[float, float]:
    """Two-sided bound on Q(t) for t > 0.

    Returns ``(t·φ(t)/(t²+1), φ(t)/t)``; the true tail lies strictly
    between them.
    """
    t = _require_finite(t)
    if t <= 0.0:
        raise DomainError(f"bounds require t > 0, got {t}")
    pdf = std_normal_pdf(t)
    return (t * pdf / (t * t + 1.0), pdf / t)


def tail_integral_tq(L: float) -> float:
    """∫_L^∞ t·Q(t) dt in closed form: ((1-L²)·Q(L) + L·φ(L))/2."""
    L = _require_finite(L, "L")
    if L < 0.0:
        raise DomainError(f"L must be >= 0, got {L}")
    return 0.5 * ((1.0 - L * L) * q_function(L) + L * std_normal_pdf(L))


def tail_integral_phi_minus_tq(L: float) -> float:
    """∫_L^∞ (φ(t) - t·Q(t)) dt in closed form: ((1+L²)·Q(L) - L·φ(L))/2."""
    L = _require_finite(L, "L")
    if L < 0.0:
        raise DomainError(f"L must be >= 0, got {L}")
    return 0.5 * ((1.0 + L * L) * q_function(L) - L * std_normal_pdf(L))


@dataclass(frozen=True)
class Tolerance:
    """Stopping rule for the scalar solvers.

    An iterate x is accepted once the remaining uncertainty is below
    ``abs_tol + rel_tol·|x|``; at least one of the two must be positive.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if self.abs_tol < 0.0 or self.rel_tol < 0.0:
            raise DomainError("tolerances must be nonnegative")
        if self.abs_tol == 0.0 and self.rel_tol == 0.0:
            raise DomainError("at least one of abs_tol, rel_tol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")

    def width(self, x: float) -> float:
        return self.abs_tol + self.rel_tol * abs(x)


DEFAULT_TOL = Tolerance()


def find_root(
    f: Callable[[float], float],
    bracket: Tuple[float, float],
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Bisection root of a continuous scalar function on a sign-changing bracket.

    Deterministic; returns the midpoint of the final interval. Raises
    BracketError if f has the same (nonzero) sign at both ends and
    ConvergenceError if the interval has not shrunk to tolerance within
    ``tol.max_iter`` bisections.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"invalid bracket {bracket!r}")
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa:g}, f(b)={fb:g}")
    for _ in range(tol.max_iter):
        mid = 0.5 * (a + b)
        if (b - a) <= 2.0 * tol.width(mid):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = mid, fm
        else:
            b = mid
    raise ConvergenceError(
        f"bisection did not reach tolerance in {tol.max_iter} iterations "
        f"(interval [{a}, {b}])"
    )


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 1/φ ≈ 0.618


def maximize_scalar(
    f: Callable[[float], float],
    bracket: Tuple[float, float],
    tol: Tolerance = DEFAULT_TOL,
) -> Tuple[float, float]:
    """Golden-section maximizer of a unimodal function on a bracket.

    Returns ``(x_star, f(x_star))``. Deterministic for a given bracket and
    tolerance. Raises ConvergenceError if the section interval has not
    shrunk to tolerance within ``tol.max_iter`` iterations.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"invalid bracket {bracket!r}")
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    converged = False
    for _ in range(tol.max_iter):
        if (b - a) <= 2.0 * tol.width(0.5 * (a + b)):
            converged = True
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
    if not converged and (b - a) > 2.0 * tol.width(0.5 * (a + b)):
        raise ConvergenceError(
            f"golden-section search did not reach tolerance in {tol.max_iter} iterations"
        )
    x = x1 if f1 >= f2 else x2
    return x, f(x)
