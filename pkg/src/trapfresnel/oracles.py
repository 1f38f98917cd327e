"""Reference evaluations of F, C, S and erfc that share no code with the core rule.

* adaptive Gauss-Kronrod quadrature of the Gaussian integral representation
  of F, batched over many arguments at once;
* the Maclaurin series of C and S, evaluated by Horner's rule in x^4;
* Weideman's rational expansion of the Faddeeva function w(z);
* the series for the integral of exp(t^2), which gives erfc on the
  imaginary axis in closed form.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .core import FresnelPair, ROOTI, SQRT_PI
from .errors import (
    ConstructionError,
    ConvergenceError,
    DomainError,
    InvalidInputError,
    InvalidParameterError,
)

# QUADPACK qk15 abscissae (descending) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights on the same 15 nodes; zero at the Kronrod-only points
GK_GAUSS = np.zeros(15)
GK_GAUSS[1:7:2] = _WG[:3]
GK_GAUSS[7] = _WG[3]
GK_GAUSS[9:14:2] = _WG[2::-1]

_EPS = np.finfo(float).eps

SMALL_X = 0.1
SERIES_TERMS_FOR_ORACLE = 30


@dataclass(frozen=True)
class QuadSettings:
    rel_tol: float = 1e-15
    abs_tol: float = 1e-300
    max_depth: int = 60
    truncation: float = 8.6

    def __post_init__(self):
        if not 1e-16 <= self.rel_tol <= 1e-6:
            raise InvalidParameterError(f"rel_tol must lie in [1e-16, 1e-6], got {self.rel_tol}")
        if self.truncation < 8:
            raise InvalidParameterError("truncation T must be >= 8")
        if self.max_depth < 1:
            raise InvalidParameterError("max_depth must be positive")


DEFAULT_QUAD = QuadSettings()


def integrate_gk15(f, lo, hi, params, settings: QuadSettings = DEFAULT_QUAD, initial_panels=8):
    """Integrate a family of real integrands over ``[lo, hi]``, all at once.

    ``f(t, p)`` receives 2-D arrays of nodes and matching parameters and
    returns a tuple of same-shaped arrays, one per component.  Panels are
    bisected breadth-first until ``|K15 - G7|`` meets a share of the relative
    tolerance proportional to the panel length.

    Returns ``(values, errors)`` of shape ``(ncomp, len(params))``.
    """
    params = np.atleast_1d(np.asarray(params, dtype=float))
    m = params.size
    length = hi - lo
    edges = np.linspace(lo, hi, initial_panels + 1)
    pid = np.repeat(np.arange(m), initial_panels)
    a = np.tile(edges[:-1], m)
    b = np.tile(edges[1:], m)
    depth = 0

    done_pid = []
    done_K = []
    accepted = None
    accepted_err = None
    while pid.size:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        t = mid[:, None] + half[:, None] * GK_NODES
        comps = f(t, params[pid][:, None])
        K = np.stack([c @ GK_KRONROD for c in comps]) * half
        G = np.stack([c @ GK_GAUSS for c in comps]) * half
        Kabs = np.stack([np.abs(c) @ GK_KRONROD for c in comps]) * half
        err = np.abs(K - G)
        if accepted is None:
            accepted = np.zeros((len(comps), m))
            accepted_err = np.zeros((len(comps), m))

        est = accepted.copy()
        for c in range(len(comps)):
            est[c] += np.bincount(pid, weights=K[c], minlength=m)
        tol = np.maximum.reduce([
            settings.rel_tol * np.abs(est[:, pid]) * (2 * half / length),
            np.full_like(K, settings.abs_tol),
            10 * _EPS * Kabs,
        ])
        ok = np.all(err <= tol, axis=0)
        done_pid.append(pid[ok])
        done_K.append(K[:, ok])
        for c in range(len(comps)):
            accepted[c] += np.bincount(pid[ok], weights=K[c, ok], minlength=m)
            accepted_err[c] += np.bincount(pid[ok], weights=err[c, ok], minlength=m)

        rest = ~ok
        if not np.any(rest):
            break
        depth += 1
        if depth > settings.max_depth:
            bad = np.unique(pid[rest])
            raise ConvergenceError(
                f"quadrature tolerance not reached at depth {settings.max_depth} "
                f"for parameter(s) {params[bad][:5]}",
                estimate=est[:, bad],
                error=accepted_err[:, bad],
            )
        pid = np.repeat(pid[rest], 2)
        a, b = (
            np.column_stack([a[rest], mid[rest]]).ravel(),
            np.column_stack([mid[rest], b[rest]]).ravel(),
        )
    return _exact_sums(np.concatenate(done_pid), np.concatenate(done_K, axis=1), m), accepted_err


def _exact_sums(pid, K, m):
    # the running bincount totals drift by a few ulp; redo them exactly
    order = np.argsort(pid, kind="stable")
    pid = pid[order]
    K = K[:, order]
    cuts = np.flatnonzero(np.diff(pid)) + 1
    owners = pid[np.concatenate([[0], cuts])]
    out = np.zeros((K.shape[0], m))
    for c in range(K.shape[0]):
        out[c, owners] = [math.fsum(g) for g in np.split(K[c], cuts)]
    return out


def _f_parts(t, x):
    # x^2 (p, q) with p, q the real and imaginary integrals, written in
    # r = t/x so that x enters each node through one rounding only
    r = t / x
    r2 = r * r
    g = np.exp(-t * t) / (1.0 + r2 * r2)
    return g, g * r2


_BATCH = 4000
_PI_SQRT2 = math.pi * math.sqrt(2)


@lru_cache(maxsize=None)
def _series_coeffs(terms):
    with mpmath.workdps(40):
        hp = mpmath.pi / 2
        c = [(-1) ** n * hp ** (2 * n) / (mpmath.factorial(2 * n) * (4 * n + 1)) for n in range(terms)]
        s = [(-1) ** n * hp ** (2 * n + 1) / (mpmath.factorial(2 * n + 1) * (4 * n + 3)) for n in range(terms)]
        return tuple(float(v) for v in c), tuple(float(v) for v in s)


def cs_power_series(x, terms: int = 15) -> FresnelPair:
    """Truncated Maclaurin series of C and S, Horner-evaluated in ``x^4``.

    Full double accuracy needs ``|x| <= 2``; larger arguments lose
    significance to cancellation and trigger a warning.
    """
    if isinstance(terms, bool) or int(terms) != terms or terms < 1:
        raise InvalidParameterError(f"terms must be a positive integer, got {terms!r}")
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError("non-finite input for x")
    if np.any(np.abs(xa) > 2):
        warnings.warn("power series used beyond |x| = 2 loses significance", RuntimeWarning, stacklevel=2)
    cc, sc = _series_coeffs(int(terms))
    x2 = xa * xa
    x4 = x2 * x2
    pc = np.full_like(xa, cc[-1])
    ps = np.full_like(xa, sc[-1])
    for k in range(len(cc) - 2, -1, -1):
        pc = cc[k] + x4 * pc
        ps = sc[k] + x4 * ps
    c = xa * pc
    s = xa * (x2 * ps)
    if np.ndim(x) == 0:
        return FresnelPair(float(c), float(s))
    return FresnelPair(c, s)


def cs_power_series_terms(x: float, terms: int) -> tuple[np.ndarray, np.ndarray]:
    """Individual series terms of C and S at x (used to check alternation)."""
    cc, sc = _series_coeffs(int(terms))
    n = np.arange(terms)
    x = float(x)
    return np.array(cc) * x ** (4 * n + 1), np.array(sc) * x ** (4 * n + 3)


def _series_F(x):
    u = math.sqrt(2 / math.pi) * x
    c, s = cs_power_series(u, SERIES_TERMS_FOR_ORACLE)
    return ((0.5 - c) + 1j * (0.5 - s)) / (1 + 1j)


def quad_F(x, settings: QuadSettings = DEFAULT_QUAD):
    """F(x) by adaptive quadrature of its Gaussian integral representation.

    Arguments with ``|x| < 0.1`` go through the 30-term power series instead,
    since the integrand's peak narrows to width ~x there.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError("non-finite input for x")
    flat = np.abs(xa).ravel()
    out = np.empty(flat.shape, dtype=complex)

    small = flat < SMALL_X
    if np.any(small):
        out[small] = _series_F(flat[small])
    big_idx = np.flatnonzero(~small)
    if big_idx.size:
        xs = flat[big_idx]
        out[big_idx] = np.exp(1j * (xs * xs)) * _quad_envelope(xs, settings)

    out = out.reshape(xa.shape)
    out = np.where(xa >= 0, out, 1.0 - out)
    return out[()] if np.ndim(x) == 0 else out


def _quad_envelope(xs, settings: QuadSettings = DEFAULT_QUAD):
    """``exp(-i x^2) F(x)`` for ``x >= SMALL_X``: slowly varying, no phase."""
    env = np.empty(xs.shape, dtype=complex)
    for start in range(0, xs.size, _BATCH):
        chunk = xs[start:start + _BATCH]
        (p, q), _ = integrate_gk15(_f_parts, 0.0, settings.truncation, chunk, settings)
        # (1/(pi x)) e^{i pi/4} (p - iq) with a single complex rounding
        scale = 1.0 / (_PI_SQRT2 * chunk)
        env[start:start + chunk.size] = (scale * (p + q)) + 1j * (scale * (p - q))
    return env


_SPLIT = 134217729.0  # 2^27 + 1
_HALF_PI_HI = math.pi / 2
with mpmath.workdps(40):
    _HALF_PI_LO = float(mpmath.pi / 2 - mpmath.mpf(_HALF_PI_HI))


def _two_prod(a, b):
    """Dekker's error-free product: a*b = p + e exactly."""
    p = a * b
    ca = _SPLIT * a
    ah = ca - (ca - a)
    al = a - ah
    cb = _SPLIT * b
    bh = cb - (cb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def fresnel_phase(x):
    """``exp(i pi x^2 / 2)`` with the argument carried in double-double.

    A plain ``pi/2 * x * x`` loses about x^2 ulp of phase, which is what
    limits C and S obtained from F at a rounded argument.
    """
    x = np.asarray(x, dtype=float)
    sq, sq_err = _two_prod(x, x)
    hi, lo = _two_prod(np.full_like(sq, _HALF_PI_HI), sq)
    lo = lo + _HALF_PI_HI * sq_err + _HALF_PI_LO * sq
    return np.exp(1j * hi) * (1 + 1j * lo - 0.5 * lo * lo)


def _cs_from_envelope(x, env):
    w = (1 + 1j) * (0.5 - fresnel_phase(x) * env)
    return w.real, w.imag


def _cs_oracle(x, envelope):
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError("non-finite input for x")
    ax = np.abs(xa).ravel()
    c = np.empty(ax.shape)
    s = np.empty(ax.shape)
    u = math.sqrt(math.pi / 2) * ax
    small = u < SMALL_X
    if np.any(small):
        ser = cs_power_series(ax[small], SERIES_TERMS_FOR_ORACLE)
        c[small], s[small] = ser.c, ser.s
    big = ~small
    if np.any(big):
        c[big], s[big] = _cs_from_envelope(ax[big], envelope(u[big]))
    sgn = np.sign(xa).ravel()
    c, s = (sgn * c).reshape(xa.shape), (sgn * s).reshape(xa.shape)
    if np.ndim(x) == 0:
        return FresnelPair(float(c), float(s))
    return FresnelPair(c, s)


def quad_CS(x, settings: QuadSettings = DEFAULT_QUAD) -> FresnelPair:
    """C(x), S(x) from the quadrature envelope of F at sqrt(pi/2) x and an
    accurately computed phase pi x^2/2."""
    return _cs_oracle(x, lambda u: _quad_envelope(u, settings))


def gaussian_tail(x, settings: QuadSettings = DEFAULT_QUAD):
    """``integral_x^inf exp(-t^2) dt`` for ``x >= 0`` by adaptive quadrature."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs < 0):
        raise DomainError("gaussian_tail needs x >= 0")
    # shift t = x + u so every member integrates over the same u-range
    (v,), _ = integrate_gk15(
        lambda u, p: (np.exp(-(p + u) ** 2),), 0.0, settings.truncation, xs, settings
    )
    return float(v[0]) if np.ndim(x) == 0 else v


def _w_imag_quad(y, settings: QuadSettings = DEFAULT_QUAD):
    """w(iy) = (2y/pi) int_0^inf exp(-s^2)/(y^2+s^2) ds for y > 0."""
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    (v,), _ = integrate_gk15(
        lambda s, p: (np.exp(-s * s) / (p * p + s * s),), 0.0, settings.truncation, ys, settings
    )
    return 2 * ys / math.pi * v


# ---------------------------------------------------------------------------
# Weideman expansion of w(z)


@dataclass(frozen=True)
class WeidemanModel:
    """Degree-M expansion of w(z) in ``Z = (L + iz)/(L - iz)``, ``L = sqrt(M/sqrt(2))``.

    ``coeffs[n]`` is the n-th Fourier coefficient of
    ``exp(-t^2) (L^2 + t^2)`` under ``t = L tan(theta/2)``; the constant term
    ``coeffs[0]`` is carried by the explicit ``1/(sqrt(pi) (L - iz))`` part.
    """

    M: int
    L: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.coeffs.setflags(write=False)


_WEID_CACHE: dict[int, WeidemanModel] = {}
_WEID_LOCK = threading.Lock()
WEID_CHECK_POINTS = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


def _weideman_coeffs(M):
    L = math.sqrt(M / math.sqrt(2))
    n2 = 2 * M  # samples per half period; FFT length is 2 * n2
    k = np.arange(-n2 + 1, n2)
    theta = k * math.pi / n2
    t = L * np.tan(theta / 2)
    f = np.concatenate([[0.0], np.exp(-t * t) * (L * L + t * t)])
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * n2)
    return L, a[: M + 1].copy()


def make_weideman(M: int) -> WeidemanModel:
    """Build (or fetch from cache) the degree-M Weideman model."""
    if isinstance(M, bool) or int(M) != M or not 4 <= M <= 128:
        raise InvalidParameterError(f"M must be an integer in [4, 128], got {M!r}")
    M = int(M)
    with _WEID_LOCK:
        model = _WEID_CACHE.get(M)
        if model is not None:
            return model
        L, coeffs = _weideman_coeffs(M)
        if not np.all(np.isfinite(coeffs)):
            raise ConstructionError(f"non-finite Weideman coefficients for M={M}")
        model = WeidemanModel(M=M, L=L, coeffs=coeffs)
        ys = np.array(WEID_CHECK_POINTS)
        ref = _w_imag_quad(ys)
        got = np.real(weideman_w(1j * ys, model))
        rel = np.max(np.abs(got - ref) / ref)
        limit = 1e-13 if M >= 36 else 0.1
        if not rel <= limit:
            raise ConstructionError(
                f"Weideman model M={M} misses w(iy) by {rel:.3e} relative (limit {limit})"
            )
        _WEID_CACHE[M] = model
        return model


def weideman_w(z, model: WeidemanModel):
    """Evaluate the Weideman approximation to w(z) for ``Im z >= 0``."""
    za = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(za)):
        raise InvalidInputError("non-finite input for z")
    if np.any(za.imag < 0):
        raise DomainError("Weideman expansion requires Im z >= 0")
    L = model.L
    iz = 1j * za
    denom = L - iz
    Z = (L + iz) / denom
    a = model.coeffs
    p = np.full_like(za, a[model.M])
    for n in range(model.M - 1, 0, -1):
        p = p * Z + a[n]
    w = 2 * p / (denom * denom) + (1 / SQRT_PI) / denom
    return w[()] if np.ndim(z) == 0 else w


def weideman_F(x, M: int = 36):
    """F(x) = exp(i x^2) w(exp(i pi/4) x)/2, extended by F(-x) = 1 - F(x)."""
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise InvalidInputError("non-finite input for x")
    model = make_weideman(M)
    ax = np.abs(xa)
    f = np.exp(1j * (ax * ax)) * weideman_w(ROOTI * ax, model) / 2
    out = np.where(xa >= 0, f, 1.0 - f)
    return out[()] if np.ndim(x) == 0 else out


def weideman_CS(x, M: int = 50) -> FresnelPair:
    """C(x), S(x) from the Weideman envelope ``w(e^{i pi/4} u)/2`` at
    ``u = sqrt(pi/2) x`` with an accurately computed phase."""
    model = make_weideman(M)
    return _cs_oracle(x, lambda u: weideman_w(ROOTI * u, model) / 2)


def erfc_weideman(z, M: int = 50):
    """erfc(z) = exp(-z^2) w(iz) for ``Re z >= 0``."""
    za = np.asarray(z, dtype=complex)
    if np.any(za.real < 0):
        raise DomainError("erfc_weideman requires Re z >= 0")
    return np.exp(-za * za) * weideman_w(1j * za, make_weideman(M))


# ---------------------------------------------------------------------------
# erfc on the imaginary axis

DAWSON_MAX_Y = 6.5


def dawson_like(y: float) -> float:
    """``integral_0^y exp(t^2) dt`` from its everywhere-convergent series."""
    y = float(y)
    if not (0 <= y <= DAWSON_MAX_Y):
        raise DomainError(f"dawson_like needs 0 <= y <= {DAWSON_MAX_Y}, got {y}")
    if y == 0:
        return 0.0
    y2 = y * y
    power = y  # y^(2n+1)/n!
    total = y
    n = 0
    while True:
        n += 1
        power *= y2 / n
        term = power / (2 * n + 1)
        total += term
        if term <= 1e-18 * total:
            return total


def erfc_imag_axis(y: float) -> complex:
    """erfc(iy) = 1 - (2i/sqrt(pi)) * integral_0^y exp(t^2) dt."""
    y = float(y)
    if not abs(y) <= DAWSON_MAX_Y:
        raise DomainError(f"|y| must be <= {DAWSON_MAX_Y}, got {y}")
    v = complex(1.0, -2.0 / SQRT_PI * dawson_like(abs(y)))
    return v if y >= 0 else v.conjugate()


def G_magnitude(y: float) -> float:
    """|G(iy)| with ``G(z) = (1 + sqrt(pi) z) exp(z^2) erfc(z)``."""
    d = dawson_like(y)
    y2 = y * y
    return math.sqrt((1 + math.pi * y2) * math.exp(-2 * y2) * (1 + 4 / math.pi * d * d))
