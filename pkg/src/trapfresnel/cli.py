"""Command-line front end: ``trapfresnel {eval,sweep,convergence,bounds,bench,appendix}``.

Output is CSV: one header line, then ``#`` metadata lines, then rows with
numbers written to 17 significant digits. Exit codes: 0 success, 1 a
verification check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys

from . import harness
from .errors import FresnelError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# per-command defaults, overridden by --config and then by flags
DEFAULTS = {
    "eval": {"n": "12"},
    "sweep": {"n": "12", "m": "", "xmin": 0.0, "xmax": 1000.0, "points": 40000,
              "oracle": "dual", "mode": "both", "function": "F"},
    "convergence": {"n": "1-12", "xmin": 0.0, "xmax": 1000.0, "points": 40000,
                    "oracle": "dual"},
    "bounds": {"n": "1-8", "xmin": 0.0, "xmax": 50.0, "points": 2000, "oracle": "quad"},
    "bench": {"n": "12", "m": "36", "length": 10 ** 7, "repeats": 3, "chunk": 10 ** 6},
    "appendix": {"ymax": 6.0, "points": 500, "samples": 200, "seed": 0},
}


class UsageError(Exception):
    pass


def parse_int_list(text) -> tuple[int, ...]:
    """``"3,5-8"`` -> (3, 5, 6, 7, 8)."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def read_config(path) -> dict:
    """Parse a ``key = value`` file; blank lines and ``#`` comments ignored."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.replace("-", "_")] = value
    return cfg


def fmt(v) -> str:
    if isinstance(v, (bool, int)) and not isinstance(v, float):
        return str(int(v))
    if isinstance(v, float) or hasattr(v, "dtype"):
        return "%.17g" % float(v)
    return str(v)


def render(report: harness.Report) -> str:
    buf = io.StringIO()
    buf.write(",".join(report.columns) + "\n")
    for line in report.meta:
        buf.write(f"# {line}\n")
    for row in report.rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trapfresnel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True, oracle=True):
        sp.add_argument("--n", help="N values, e.g. 12 or 3-8 or 1,4,9")
        sp.add_argument("--out", help="write CSV here instead of stdout")
        sp.add_argument("--config", help="key=value file; flags take precedence")
        if grid:
            sp.add_argument("--xmin", type=float)
            sp.add_argument("--xmax", type=float)
            sp.add_argument("--points", type=int)
        if oracle:
            sp.add_argument("--oracle", choices=harness.ORACLES)

    sp = sub.add_parser("eval", help="F_N, C_N and S_N at given points")
    sp.add_argument("x", nargs="+", help="arguments (plain decimal or exponent form)")
    common(sp, grid=False, oracle=False)

    sp = sub.add_parser("sweep", help="max abs/rel errors per N over a grid")
    common(sp)
    sp.add_argument("--m", help="Weideman degrees to compare, e.g. 18,36")
    sp.add_argument("--mode", choices=harness.MODES)
    sp.add_argument("--function", choices=harness.FUNCTIONS)
    sp.add_argument("--max-abs", type=float, dest="max_abs")
    sp.add_argument("--max-rel", type=float, dest="max_rel")
    sp.add_argument("--max-rel-s", type=float, dest="max_rel_s",
                    help="relative threshold for S (defaults to --max-rel)")

    sp = sub.add_parser("convergence", help="error per N and implied rate")
    common(sp)

    sp = sub.add_parser("bounds", help="pointwise error against eta_N")
    common(sp)

    sp = sub.add_parser("bench", help="time F_N against the Weideman route")
    sp.add_argument("--n", help="trapezium N")
    sp.add_argument("--m", help="Weideman degree M")
    sp.add_argument("--length", type=int)
    sp.add_argument("--repeats", type=int)
    sp.add_argument("--chunk", type=int)
    sp.add_argument("--out")
    sp.add_argument("--config")

    sp = sub.add_parser("appendix", help="erfc bounds in the right half-plane")
    sp.add_argument("--ymax", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.add_argument("--config")
    return p


def _settings(args) -> dict:
    """Merge defaults, config file and flags, in increasing precedence."""
    merged = dict(DEFAULTS[args.command])
    if args.config:
        merged.update(read_config(args.config))
    for key, val in vars(args).items():
        if val is not None and key not in ("command", "config"):
            merged[key] = val
    return merged


def _float(v, name):
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: not a number: {v!r}") from None
    if not math.isfinite(out):
        raise UsageError(f"non-finite input for {name}")
    return out


def _int(v, name):
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: not an integer: {v!r}") from None


def _opt_float(s, key):
    return None if s.get(key) in (None, "") else _float(s[key], key)


def _sweep_config(s) -> harness.SweepConfig:
    return harness.SweepConfig(
        x_min=_float(s["xmin"], "xmin"),
        x_max=_float(s["xmax"], "xmax"),
        points=_int(s["points"], "points"),
        n_list=parse_int_list(s["n"]),
        m_list=parse_int_list(s.get("m", "")),
        oracle=s["oracle"],
        output=s.get("out"),
        mode=s.get("mode", "both"),
    )


def dispatch(s) -> harness.Report:
    cmd = s["command_name"]
    if cmd == "eval":
        xs = [_float(v, "x") for v in s["x"]]
        n = parse_int_list(s["n"])
        if len(n) != 1:
            raise UsageError("eval takes a single N")
        return harness.run_eval(xs, n[0])
    if cmd == "sweep":
        return harness.run_sweep(_sweep_config(s), function=s["function"],
                                 max_abs=_opt_float(s, "max_abs"),
                                 max_rel=_opt_float(s, "max_rel"),
                                 max_rel_s=_opt_float(s, "max_rel_s"))
    if cmd == "convergence":
        return harness.run_convergence(_sweep_config(s))
    if cmd == "bounds":
        return harness.run_bounds(_sweep_config(s))
    if cmd == "bench":
        return harness.run_bench(length=_int(s["length"], "length"),
                                 N=_int(s["n"], "n"), M=_int(s["m"], "m"),
                                 repeats=_int(s["repeats"], "repeats"),
                                 chunk=_int(s["chunk"], "chunk"))
    if cmd == "appendix":
        return harness.run_appendix(y_max=_float(s["ymax"], "ymax"),
                                    points=_int(s["points"], "points"),
                                    samples=_int(s["samples"], "samples"),
                                    seed=_int(s["seed"], "seed"))
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        s = _settings(args)
        s["command_name"] = args.command
        report = dispatch(s)
        text = render(report)
        out = s.get("out")
        if out:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (UsageError, FresnelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for msg in report.failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
