"""Explicit error bounds for F_N, C_N and S_N, plus the erfc lower bounds.

Every function here is a closed-form expression in x and N; nothing calls the
approximations themselves, so the bounds can be checked against measured
errors without circularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidInputError, InvalidParameterError, SingularityError

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
# exponent margin for the transition-region bound
BETA = 1 - SQRT2 / 2 - (2 * SQRT2 + 1) / 16

INNER = "inner"
TRANSITION = "transition"
OUTER = "outer"


@dataclass(frozen=True)
class BoundBreakdown:
    region: str
    delta: float
    tail: float
    eta: float


@dataclass(frozen=True)
class BoundConstants:
    c: float
    c_star: float
    c_tilde: float
    c_hat: float


class UniformBounds(NamedTuple):
    abs: float
    rel_pos: float
    rel_neg: float
    cs_abs: float


class SmallXBounds(NamedTuple):
    F: float
    CS: float | None
    S_strong: float | None


class ErfcBounds(NamedTuple):
    lower: float
    lower_loose: float
    upper: float


def _check_N(N):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidParameterError(f"N must be a positive integer, got {N!r}")
    return int(N)


def cutoff(N: int) -> float:
    """A_N = sqrt((N + 1/2) pi)."""
    return math.sqrt((_check_N(N) + 0.5) * math.pi)


def _finite(x, name="x"):
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError(f"non-finite input for {name}")
    return xa


def region_of(x: float, N: int) -> str:
    """Which branch of the piecewise Delta bound applies at ``x >= 0``."""
    A = cutoff(N)
    r = x / SQRT2
    if r <= 0.75 * A:
        return INNER
    if r < 1.25 * A:
        return TRANSITION
    return OUTER


def delta_values(x, N: int) -> np.ndarray:
    """Vectorised Delta_h(x) for ``x >= 0`` with the balanced step."""
    A = cutoff(N)
    x = _finite(x)
    if np.any(x < 0):
        raise DomainError("delta bound needs x >= 0")
    A2 = A * A
    eA = math.exp(-A2)
    damp = 1 - math.exp(-2 * A2)
    r = x / SQRT2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d1 = x * eA / (SQRT_PI * (A2 - x * x / 2) * damp)
        d2 = (4 * x * eA * (1 + 2 * SQRT_PI * math.exp(-BETA * A2))
              / (SQRT_PI * A * (A + r) * damp))
        pole = np.exp(-SQRT2 * A * x)
        d3 = x * eA / (SQRT_PI * (x * x / 2 - A2) * damp) + pole / (1 - pole)
    out = np.where(r <= 0.75 * A, d1, np.where(r < 1.25 * A, d2, d3))
    return out[()] if out.ndim == 0 else out


def delta_bound(x: float, N: int) -> BoundBreakdown:
    """Bound on the error of the untruncated corrected rule at ``x >= 0``."""
    x = float(x)
    d = float(delta_values(x, N))
    return BoundBreakdown(region=region_of(x, N), delta=d, tail=0.0, eta=d)


def tail_bound(x, N: int):
    """Bound on the contribution of the discarded nodes k > N."""
    A = cutoff(N)
    ax = np.abs(_finite(x))
    out = ((2 * math.pi + 1) * ax / (2 * math.pi * A * np.hypot(ax * ax, A * A))
           * math.exp(-A * A))
    return out[()] if out.ndim == 0 else out


def eta_values(x, N: int) -> np.ndarray:
    """Vectorised pointwise bound ``eta_N(x)``, even in x."""
    ax = np.abs(_finite(x))
    return delta_values(ax, N) + tail_bound(ax, N)


def eta(x: float, N: int) -> BoundBreakdown:
    """Pointwise bound on ``|F(x) - F_N(x)|`` with its two contributions."""
    ax = abs(float(x))
    d = float(delta_values(ax, N))
    t = float(tail_bound(ax, N))
    return BoundBreakdown(region=region_of(ax, N), delta=d, tail=t, eta=d + t)


def constants(N: int) -> BoundConstants:
    N = _check_N(N)
    A = cutoff(N)
    A2 = A * A
    damp = 1 - math.exp(-2 * A2)
    boost = 1 + 2 * SQRT_PI * math.exp(-BETA * A2)
    e_half = math.exp(-math.pi / 2)
    two_pi_1 = 2 * math.pi + 1

    c = (20 * SQRT2 * e_half / (9 * math.pi * damp) * boost
         + two_pi_1 * e_half / (2 * SQRT2 * math.pi ** 1.5 * A))
    c_star = (10 * SQRT2 * (4 + 5 * math.sqrt(2 * math.pi) * A) * boost * e_half
              / (9 * SQRT_PI * A * damp)
              + two_pi_1 * e_half / (math.pi * A) * (1 / (SQRT2 * A) + SQRT_PI))
    c_tilde = (8 * e_half / (3 * math.pi ** 1.5 * damp)
               + two_pi_1 * e_half / (math.pi ** 2 * A))
    c_hat = c + SQRT2 * two_pi_1 * e_half / (math.pi ** 1.5 * math.sqrt(N + 0.5))
    return BoundConstants(c=c, c_star=c_star, c_tilde=c_tilde, c_hat=c_hat)


def uniform_bounds(N: int) -> UniformBounds:
    """Bounds valid uniformly on the real line."""
    k = constants(N)
    decay = math.exp(-math.pi * N)
    root = math.sqrt(N + 0.5)
    return UniformBounds(
        abs=k.c * decay / root,
        rel_pos=k.c_star * decay,
        rel_neg=2 * k.c * decay / root,
        cs_abs=2 * k.c * decay / math.sqrt(2 * N + 1),
    )


def pointwise_rel_bound(x, N: int):
    """``2(1 + sqrt(pi) x) eta_N(x)`` for x >= 0 and ``2 eta_N(x)`` for x < 0."""
    xa = _finite(x)
    factor = np.where(xa >= 0, 2 * (1 + SQRT_PI * np.maximum(xa, 0)), 2.0)
    out = factor * eta_values(xa, N)
    return out[()] if out.ndim == 0 else out


def small_x_bounds(x: float, N: int) -> SmallXBounds:
    """Bounds that vanish linearly (cubically for S) as x -> 0.

    ``CS`` needs ``|x| <= sqrt(N + 1/2)`` and ``S_strong`` needs ``|x| < 1``
    and ``N >= 4``; outside those ranges the field is None.
    """
    N = _check_N(N)
    x = float(_finite(x))
    ax = abs(x)
    A = cutoff(N)
    if ax > A / SQRT2:
        raise InvalidInputError(f"|x| must not exceed A_N/sqrt(2) = {A / SQRT2:.6g}")
    k = constants(N)
    decay = math.exp(-math.pi * N)
    f = k.c_tilde * ax * decay / (2 * N + 1)
    cs = SQRT_PI * f if ax <= math.sqrt(N + 0.5) else None
    s_strong = None
    if ax < 1 and N >= 4:
        s_strong = (ax ** 3 / (1 - ax ** 4) * SQRT2 * k.c_hat
                    * math.exp(-math.pi * (N - 0.25)) / math.sqrt(N + 0.5))
    return SmallXBounds(F=f, CS=cs, S_strong=s_strong)


def hr_bound(x, h: float):
    """Error bound for the modified rule with arbitrary step h (blows up at sqrt(2) pi/h)."""
    xa = _finite(x)
    if np.any(xa <= 0):
        raise DomainError("hr_bound needs x > 0")
    if not (math.isfinite(h) and h > 0):
        raise InvalidParameterError(f"h must be positive, got {h!r}")
    q = (math.pi / h) ** 2
    gap = np.abs(xa * xa / 2 - q)
    if np.any(gap == 0) or np.any(xa == SQRT2 * math.pi / h):
        raise SingularityError("hr_bound is singular at x = sqrt(2) pi/h")
    out = xa * math.exp(-q) / (SQRT_PI * (1 - math.exp(-2 * q)) * gap)
    return out[()] if out.ndim == 0 else out


def F_lower_bound(x):
    """Lower bound on |F(x)|: 1/(2 + 2 sqrt(pi) x) for x >= 0, 1/2 for x <= 0."""
    xa = _finite(x)
    out = np.where(xa >= 0, 1 / (2 + 2 * SQRT_PI * np.maximum(xa, 0)), 0.5)
    return out[()] if out.ndim == 0 else out


def erfc_bounds(z) -> ErfcBounds:
    """Two-sided bounds on |erfc(z)| in the closed right half-plane."""
    z = complex(z)
    x, y = z.real, z.imag
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInputError("non-finite input for z")
    if x < 0:
        raise DomainError("erfc bounds need Re z >= 0")
    upper = math.exp(y * y - x * x)
    lower = upper / math.sqrt((1 + SQRT_PI * x) ** 2 + math.pi * y * y)
    loose = upper / (1 + SQRT_PI * abs(z))
    return ErfcBounds(lower=lower, lower_loose=loose, upper=upper)


def strip_bound(z, N: int) -> float:
    """Bound on ``|F(z) - F_N(z)|`` off the real axis.

    First/third quadrants and both axes take the real-line constant; the
    second and fourth quadrants pick up ``exp(-xy)`` and are limited to
    ``|Im z| <= A_N/(2 sqrt 2)``.
    """
    N = _check_N(N)
    z = complex(z)
    x, y = z.real, z.imag
    k = constants(N)
    scale = math.exp(-math.pi * N) / math.sqrt(N + 0.5)
    if x * y >= 0:
        return k.c * scale
    if abs(y) > cutoff(N) / (2 * SQRT2):
        raise DomainError(
            f"|Im z| must not exceed A_N/(2 sqrt 2) = {cutoff(N) / (2 * SQRT2):.6g} "
            "in the second and fourth quadrants"
        )
    return k.c_hat * math.exp(-x * y) * scale


def maclaurin_coeff_bound(n: int, N: int, cs: bool = False) -> float:
    """Bound on the n-th Maclaurin coefficient of ``F - F_N``.

    With ``cs=True`` bounds the coefficients of ``C - C_N`` and ``S - S_N``
    instead; the ``(2/pi)^(n/2)`` factor cancels against the argument scaling
    there, leaving a bound independent of n.
    """
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InvalidParameterError(f"n must be a non-negative integer, got {n!r}")
    N = _check_N(N)
    if N < 4:
        raise DomainError("coefficient bounds need N >= 4")
    base = constants(N).c_hat * math.exp(-math.pi * (N - 0.25)) / math.sqrt(N + 0.5)
    if cs:
        return SQRT2 * base
    return (2 / math.pi) ** (n / 2) * base
