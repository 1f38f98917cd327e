"""Error sweeps, convergence tables, eta_N checks, timing and erfc bound checks.

Each ``run_*`` function returns a :class:`Report`: column names, metadata
comment lines and rows in grid order, plus a count of failed checks. Writing
the report is left to the CLI so the numbers can also be used from tests.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .core import CS_TO_F, convert_F_CS, fresnel_CS, fresnel_F, make_rule
from .errors import InvalidInputError, InvalidParameterError
from .oracles import (
    G_magnitude,
    cs_power_series,
    erfc_imag_axis,
    erfc_weideman,
    quad_CS,
    quad_F,
    weideman_CS,
    weideman_F,
)

ORACLES = ("quad", "weideman", "power_series", "dual")
MODES = ("abs", "rel", "both")
FUNCTIONS = ("F", "CS")

ULP_SLACK = 10 * 2.0 ** -52
ROUNDING_FLOOR = 100 * 2.0 ** -52
# Weideman degree used whenever the polynomial serves as a reference
REFERENCE_M = 50
# trapezium rule size used as the large-x reference for C and S
REFERENCE_CS_N = 20
# below this x the C/S reference is the truncated power series
SERIES_CS_MAX = 1.5
SERIES_CS_TERMS = 15
# the power series oracle is not trusted for F beyond this |x|
POWER_SERIES_MAX_X = 2.0
APPENDIX_REL_TOL = 1e-14

PUBLISHED_F = "published N=12 max abs error < 2.9e-16, max rel error < 9.3e-16"
PUBLISHED_CS = ("published N>=11 abs error <= 4.5e-16, C rel error ~3.6e-15, "
                "S rel error up to 2.7e-13")
OPERATION_NOTE = (
    "operation count: Weideman route needs 1 complex vector exp plus M complex "
    "multiplications and M additions (Horner); the trapezium rule needs 2 complex "
    "vector exps plus slightly more than N real mult/div, real additions, complex "
    "multiplications and complex additions; 1e-15 needs N=12 against M=36"
)
PUBLISHED_TIMING = "published timings (Matlab, 1e7 points on [0,1000]): F(x,12) 11.1 s, Fw(x,36) 15.6 s"


@dataclass(frozen=True)
class SweepConfig:
    x_min: float = 0.0
    x_max: float = 1000.0
    points: int = 40000
    n_list: tuple[int, ...] = (12,)
    m_list: tuple[int, ...] = ()
    oracle: str = "dual"
    output: str | None = None
    mode: str = "both"

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise InvalidInputError("non-finite input for grid limits")
        if not self.x_min < self.x_max:
            raise InvalidParameterError("x_min must be below x_max")
        if self.points < 2:
            raise InvalidParameterError("points must be at least 2")
        if self.oracle not in ORACLES:
            raise InvalidParameterError(f"unknown oracle {self.oracle!r}")
        if self.mode not in MODES:
            raise InvalidParameterError(f"unknown mode {self.mode!r}")
        for n in self.n_list:
            make_rule(n)
        for m in self.m_list:
            if not 4 <= m <= 128:
                raise InvalidParameterError(f"M must lie in [4, 128], got {m}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    def describe(self) -> str:
        return (f"grid [{self.x_min:.17g}, {self.x_max:.17g}] x {self.points} "
                f"inclusive, oracle {self.oracle}")


@dataclass
class Report:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    meta: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------- references

def reference_F(x, oracle: str) -> list[np.ndarray]:
    """Reference values of F on the grid; ``dual`` returns two references."""
    x = np.asarray(x, dtype=float)
    if oracle == "quad":
        return [quad_F(x)]
    if oracle == "weideman":
        return [weideman_F(x, REFERENCE_M)]
    if oracle == "dual":
        return [fresnel_F(x, make_rule(REFERENCE_CS_N)), weideman_F(x, REFERENCE_M)]
    if oracle == "power_series":
        if np.max(np.abs(x)) > POWER_SERIES_MAX_X:
            raise InvalidParameterError(
                f"power_series oracle limited to |x| <= {POWER_SERIES_MAX_X}"
            )
        u = np.sqrt(2 / np.pi) * x
        c, s = cs_power_series(u, terms=30)
        return [np.asarray(convert_F_CS(CS_TO_F, (c, s)))]
    raise InvalidParameterError(f"unknown oracle {oracle!r}")


def reference_CS(x, oracle: str) -> list[tuple[np.ndarray, np.ndarray]]:
    """Reference (C, S) values.

    Small arguments always use the 15-term power series, since any route
    through F loses the relative accuracy of S ~ x^3 to cancellation.
    ``dual`` is series below 1.5 and the 20-node rule above, which shares
    the rounding of pi x^2/2 with C_N; ``quad`` and ``weideman`` take the
    envelope of F at sqrt(pi/2) x and carry the phase pi x^2/2 exactly, so
    they measure the true error including that rounding.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) <= SERIES_CS_MAX
    ser = cs_power_series(np.where(small, x, 0.0), terms=SERIES_CS_TERMS)

    def blend(c, s):
        return np.where(small, ser.c, c), np.where(small, ser.s, s)

    big = np.where(small, SERIES_CS_MAX, x)
    if oracle == "power_series":
        if np.max(np.abs(x)) > POWER_SERIES_MAX_X:
            raise InvalidParameterError(
                f"power_series oracle limited to |x| <= {POWER_SERIES_MAX_X}"
            )
        full = cs_power_series(x, terms=30)
        return [(np.asarray(full.c), np.asarray(full.s))]
    if oracle == "quad":
        return [blend(*quad_CS(big))]
    if oracle == "weideman":
        return [blend(*weideman_CS(big, REFERENCE_M))]
    if oracle == "dual":
        trap = fresnel_CS(big, make_rule(REFERENCE_CS_N))
        return [blend(trap.c, trap.s)]
    raise InvalidParameterError(f"unknown oracle {oracle!r}")


def _worst(values, refs):
    """Pointwise worst absolute and relative error over the references."""
    ab = np.zeros(np.shape(values))
    rel = np.zeros(np.shape(values))
    for ref in refs:
        e = np.abs(values - ref)
        mag = np.abs(ref)
        r = np.divide(e, mag, out=np.zeros_like(e), where=mag > 0)
        ab = np.maximum(ab, e)
        rel = np.maximum(rel, r)
    return ab, rel


def F_errors(x, N: int, oracle: str = "dual"):
    """Pointwise worst abs and rel error of F_N against the chosen oracle."""
    return _worst(fresnel_F(x, make_rule(N)), reference_F(x, oracle))


def CS_errors(x, N: int, oracle: str = "dual"):
    """Pointwise errors of C_N and S_N: ((abs_c, rel_c), (abs_s, rel_s))."""
    pair = fresnel_CS(x, make_rule(N))
    refs = reference_CS(x, oracle)
    return (_worst(pair.c, [r[0] for r in refs]),
            _worst(pair.s, [r[1] for r in refs]))


# -------------------------------------------------------------------- eval

def run_eval(xs, N: int = 12) -> Report:
    x = np.asarray([float(v) for v in xs], dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("non-finite input")
    rule = make_rule(N)
    F = np.atleast_1d(fresnel_F(x, rule))
    cs = fresnel_CS(x, rule)
    rep = Report(["x", "re_F", "im_F", "C", "S"], meta=[f"N={N}"])
    for i, xi in enumerate(x):
        rep.rows.append((xi, F[i].real, F[i].imag,
                         np.atleast_1d(cs.c)[i], np.atleast_1d(cs.s)[i]))
    return rep


# ------------------------------------------------------------------- sweep

def run_sweep(cfg: SweepConfig, function: str = "F", max_abs: float | None = None,
              max_rel: float | None = None, max_rel_s: float | None = None) -> Report:
    """Maximum errors per N (and per M for the Weideman route) over the grid."""
    if function not in FUNCTIONS:
        raise InvalidParameterError(f"unknown function {function!r}")
    x = cfg.grid()
    rep = Report(["method", "param", "component", "max_abs_err", "max_rel_err",
                  "x_at_max_abs", "x_at_max_rel"])
    rep.meta = [cfg.describe(), f"function {function}",
                PUBLISHED_F if function == "F" else PUBLISHED_CS]
    if max_abs is not None or max_rel is not None:
        rep.meta.append(f"thresholds abs {max_abs} rel {max_rel} rel_S {max_rel_s}")

    def record(method, param, comp, ab, rel):
        ia, ir = int(np.argmax(ab)), int(np.argmax(rel))
        mab, mrel = float(ab[ia]), float(rel[ir])
        if cfg.mode == "abs":
            mrel = float("nan")
        elif cfg.mode == "rel":
            mab = float("nan")
        rep.rows.append((method, param, comp, mab, mrel, x[ia], x[ir]))
        lim_rel = max_rel_s if (comp == "S" and max_rel_s is not None) else max_rel
        if max_abs is not None and ab[ia] > max_abs:
            rep.failures.append(f"{method} {param} {comp}: abs {ab[ia]:.3g} > {max_abs:g}")
        if lim_rel is not None and rel[ir] > lim_rel:
            rep.failures.append(f"{method} {param} {comp}: rel {rel[ir]:.3g} > {lim_rel:g}")

    if function == "F":
        refs = reference_F(x, cfg.oracle)
        for N in cfg.n_list:
            record("trapezium", N, "F", *_worst(fresnel_F(x, make_rule(N)), refs))
        if cfg.m_list:
            # compare the polynomial against quadrature, never against itself
            wref = [quad_F(x)] if cfg.oracle in ("weideman", "dual") else refs
            for M in cfg.m_list:
                record("weideman", M, "F", *_worst(weideman_F(x, M), wref))
    else:
        refs = reference_CS(x, cfg.oracle)
        for N in cfg.n_list:
            pair = fresnel_CS(x, make_rule(N))
            record("trapezium", N, "C", *_worst(pair.c, [r[0] for r in refs]))
            record("trapezium", N, "S", *_worst(pair.s, [r[1] for r in refs]))
    return rep


# ------------------------------------------------------------- convergence

def run_convergence(cfg: SweepConfig, check_range=(3, 8), band: float = 1.0) -> Report:
    """Max abs error per N with the implied exponential rate.

    Consecutive pairs with both N inside ``check_range`` must have
    ``ln(err_N / err_{N+1})`` within ``pi +- band``.
    """
    ns = list(cfg.n_list)
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise InvalidParameterError("N list must be strictly ascending")
    x = cfg.grid()
    refs = reference_F(x, cfg.oracle)
    rep = Report(["N", "max_abs_err", "ratio_to_prev", "implied_rate", "rounding_limited"])
    rep.meta = [cfg.describe(), f"expected rate pi = {math.pi:.17g} per unit N",
                PUBLISHED_F]
    prev = None
    for N in ns:
        err = float(_worst(fresnel_F(x, make_rule(N)), refs)[0].max())
        ratio = rate = float("nan")
        if prev is not None and prev[0] == N - 1 and err > 0:
            ratio = prev[1] / err
            rate = math.log(ratio)
            lo, hi = check_range
            if lo <= prev[0] and N <= hi + 1 and prev[0] <= hi:
                if not (math.pi - band <= rate <= math.pi + band):
                    rep.failures.append(f"rate {prev[0]}->{N} = {rate:.3f}")
        rep.rows.append((N, err, ratio, rate, int(err < ROUNDING_FLOOR)))
        prev = (N, err)
    return rep


# ------------------------------------------------------------------ bounds

def run_bounds(cfg: SweepConfig) -> Report:
    """Pointwise measured error against eta_N and the relative bound."""
    x = cfg.grid()
    refs = reference_F(x, cfg.oracle)
    ref0 = refs[0]
    rep = Report(["N", "x", "measured_err", "eta", "rel_err", "rel_bound", "violation"])
    rep.meta = [cfg.describe(), f"slack {ULP_SLACK:.17g} absolute"]
    mag = np.abs(ref0)
    for N in cfg.n_list:
        ab, rel = _worst(fresnel_F(x, make_rule(N)), refs)
        eta = bounds.eta_values(x, N)
        rb = bounds.pointwise_rel_bound(x, N)
        bad = (ab > eta + ULP_SLACK) | (rel > rb + ULP_SLACK / mag)
        if bad.any():
            rep.failures.append(f"N={N}: {int(bad.sum())} violations")
        for i in range(x.size):
            rep.rows.append((N, x[i], ab[i], eta[i], rel[i], rb[i], int(bad[i])))
    return rep


# ------------------------------------------------------------------- bench

def _timed(fn, x, chunk):
    t0 = time.perf_counter()
    for start in range(0, x.size, chunk):
        fn(x[start:start + chunk])
    return time.perf_counter() - t0


def run_bench(length: int = 10 ** 7, N: int = 12, M: int = 36, repeats: int = 3,
              chunk: int = 10 ** 6, x_max: float = 1000.0) -> Report:
    """Wall-clock comparison of F_N and the Weideman route on one vector.

    Informational only: the report never fails.
    """
    if length < 1:
        raise InvalidParameterError("vector length must be at least 1")
    if repeats < 1 or chunk < 1:
        raise InvalidParameterError("repeats and chunk must be positive")
    rule = make_rule(N)
    x = np.linspace(0.0, x_max, length)
    methods = [
        ("trapezium", N, lambda v: fresnel_F(v, rule)),
        ("weideman", M, lambda v: weideman_F(v, M)),
    ]
    rep = Report(["method", "param", "length", "repeats", "mean_seconds", "per_point_ns"])
    rep.meta = [f"vector of {length} equispaced points on [0, {x_max:g}], chunk {chunk}",
                "warm-up pass on one chunk discarded", OPERATION_NOTE, PUBLISHED_TIMING]
    for name, param, fn in methods:
        fn(x[:chunk])
        times = [_timed(fn, x, chunk) for _ in range(repeats)]
        mean = sum(times) / repeats
        rep.rows.append((name, param, length, repeats, mean, mean / length * 1e9))
    return rep


# ---------------------------------------------------------------- appendix

def _in_range(val, lo, hi, tol=APPENDIX_REL_TOL):
    return bool(lo * (1 - tol) <= val <= hi * (1 + tol))


def run_appendix(y_max: float = 6.0, points: int = 500, samples: int = 200,
                 seed: int = 0, x_span: float = 3.0, y_span: float = 3.0) -> Report:
    """Check the erfc bounds on the imaginary axis, at random right-half-plane
    points, and ``|G(iy)| >= 1`` on the same axis grid."""
    if points < 2 or samples < 0:
        raise InvalidParameterError("need points >= 2 and samples >= 0")
    if not 0 < y_max:
        raise InvalidParameterError("y_max must be positive")
    rep = Report(["kind", "re_z", "im_z", "abs_value", "lower", "upper", "in_range"])
    rep.meta = [f"imaginary axis y in [0, {y_max:g}] x {points}",
                f"{samples} right-half-plane samples, seed {seed}, "
                f"Re z in [0, {x_span:g}], Im z in [-{y_span:g}, {y_span:g}]",
                f"relative tolerance {APPENDIX_REL_TOL:g}"]

    def add(kind, z, val, lo, hi):
        ok = _in_range(val, lo, hi)
        rep.rows.append((kind, z.real, z.imag, val, lo, hi, int(ok)))
        if not ok:
            rep.failures.append(f"{kind} at {z}: {val:.17g} not in [{lo:.17g}, {hi:.17g}]")

    ys = np.linspace(0.0, y_max, points)
    for y in ys:
        z = complex(0.0, y)
        b = bounds.erfc_bounds(z)
        add("imag", z, abs(erfc_imag_axis(y)), b.lower, b.upper)
    rng = np.random.default_rng(seed)
    zs = rng.uniform(0, x_span, samples) + 1j * rng.uniform(-y_span, y_span, samples)
    for z in zs:
        b = bounds.erfc_bounds(z)
        add("rhp", complex(z), abs(complex(erfc_weideman(z, REFERENCE_M))), b.lower, b.upper)
    for y in ys:
        add("G", complex(0.0, y), G_magnitude(y), 1.0, math.inf)
    return rep
