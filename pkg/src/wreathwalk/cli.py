"""Command-line experiment runner.

Every subcommand writes its CSV table(s), a ``manifest.json`` and, unless
``--no-plot`` is given, SVG plots into ``--out``.  Settings come from
built-in defaults, then an optional ``--config`` file of ``key = value``
lines, then command-line flags.

Exit codes: 0 success, 2 configuration error, 3 resource cap exceeded,
4 a verification check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, ResourceError
from .rng import default_seed

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_CHECK = 0, 2, 3, 4

COMMANDS = (
    "verify-group", "growth", "drift-exact", "drift-mc", "compose-drift",
    "entropy-exact", "entropy-bounds", "range-stats", "local-time",
    "functional", "concavity", "appendix-check", "rate-fit",
)


SEPARATION_CAVEAT = (
    "Rates n/ln^(i) n with i >= 2 cannot be told apart at desk-scale n; only the "
    "depth-one rate n/ln n is fitted. Deeper levels are checked through the "
    "local-time reduction: compose-drift with inner L:1,1 against Ltilde[2,1](n)."
)


class ConfigError(Exception):
    pass


class CheckFailed(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    spec: str = "Z2 wr C2"
    n: list = field(default_factory=lambda: [1024, 4096, 16384])
    trials: int = 200
    seed: int = 0
    out: str = "out"
    threads: int = 1
    plot: bool = True
    radius: int = 4
    support_cap: int = 5_000_000
    tol: float = 1e-9
    n_max: int = 6
    semantics: str = "elements"
    function: str = "sqrt"
    k: int = 1
    alpha: float = 1.0
    lo: str = ""
    hi: str = ""
    points: int = 1000
    input: str = ""
    column: str = ""
    catalog: str = ""
    debug_trajectory: bool = False

    def validate(self):
        if any(b <= a for a, b in zip(self.n, self.n[1:])):
            raise ConfigError(f"n-grid must be strictly increasing: {self.n}")
        if any(v < 0 for v in self.n):
            raise ConfigError("n-grid values must be non-negative")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.support_cap <= 0 or self.radius < 0 or self.threads < 1:
            raise ConfigError("caps and thread count must be positive")
        if self.semantics not in ("elements", "words"):
            raise ConfigError(f"unknown semantics {self.semantics!r}")


def parse_n_grid(text: str) -> list[int]:
    """``"1,2,3"`` or ``"start:stop:factor"`` (geometric, stop inclusive)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, factor = text.split(":")
            a, b, f = int(start), int(stop), float(factor)
            if a < 1 or f <= 1:
                raise ConfigError(f"bad geometric grid {text!r}")
            out, v = [], float(a)
            while round(v) <= b:
                if not out or round(v) != out[-1]:
                    out.append(int(round(v)))
                v *= f
            return out
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse n-grid {text!r}: {exc}") from None


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_BOOL = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


def _coerce(key: str, value, template: ExperimentConfig):
    if key == "n":
        return parse_n_grid(str(value)) if not isinstance(value, list) else value
    if key == "no_plot":
        return "plot", not _BOOL[str(value).lower()]
    current = getattr(template, key)
    try:
        if isinstance(current, bool):
            return _BOOL[str(value).lower()]
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
    except (KeyError, ValueError):
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return str(value)


def build_config(command: str, file_values: dict, flag_values: dict) -> ExperimentConfig:
    cfg = ExperimentConfig(command=command)
    cfg.seed = default_seed()
    for source in (file_values, flag_values):
        for key, value in source.items():
            if value is None:
                continue
            if key not in ExperimentConfig.__dataclass_fields__ and key != "no_plot":
                raise ConfigError(f"unknown setting {key!r}")
            coerced = _coerce(key, value, cfg)
            if key == "no_plot":
                setattr(cfg, *coerced)
            else:
                setattr(cfg, key, coerced)
    cfg.validate()
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wreathwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--spec")
        p.add_argument("--n")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--threads", type=int)
        p.add_argument("--no-plot", dest="no_plot", action="store_const", const="true")
        p.add_argument("--radius", type=int)
        p.add_argument("--support-cap", dest="support_cap", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--semantics", choices=("elements", "words"))
        p.add_argument("--function", help="sqrt, identity, indicator, power:A, L:K,A or Ltilde:K,A")
        p.add_argument("--inner", dest="function", help="alias of --function for compose-drift")
        p.add_argument("--k", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--lo")
        p.add_argument("--hi")
        p.add_argument("--points", type=int)
        p.add_argument("--input")
        p.add_argument("--column")
        p.add_argument("--catalog", help="rate names separated by ';'")
        p.add_argument("--debug-trajectory", dest="debug_trajectory",
                       action="store_const", const="true")
    return parser


# -- output helpers ----------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


class Run:
    """Output directory bookkeeping for one invocation."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.outputs: list[str] = []
        self.notes: list[str] = []

    def csv(self, name: str, header, rows):
        write_csv(self.out / name, header, rows)
        self.outputs.append(name)

    def plot(self, name: str, fn, *args, **kwargs):
        if not self.cfg.plot:
            return
        fn(self.out / name, *args, **kwargs)
        self.outputs.append(name)


def _versions() -> dict:
    import matplotlib
    import numba

    return {"wreathwalk": __version__, "python": platform.python_version(),
            "numpy": np.__version__, "numba": numba.__version__,
            "matplotlib": matplotlib.__version__}


def write_manifest(out: Path, cfg_dict: dict, status: str, category: str | None,
                   wall: float, outputs=(), notes=(), message: str = "") -> None:
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": cfg_dict,
        "seed": cfg_dict.get("seed"),
        "versions": _versions(),
        "wall_time_s": wall,
        "status": status,
        "failure_category": category,
        "message": message,
        "outputs": list(outputs),
        "notes": list(notes),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


# -- functions named on the command line ---------------------------------------

def parse_function(text: str):
    from .iterlog import ConcaveExtension, IterLogParams, LTilde
    from .lattice import Identity, Indicator, Power

    text = text.strip()
    if text == "sqrt":
        return Power(0.5)
    if text == "identity":
        return Identity()
    if text == "indicator":
        return Indicator()
    head, _, args = text.partition(":")
    try:
        if head == "power":
            return Power(float(args))
        if head in ("L", "Ltilde"):
            k, a = args.split(",")
            p = IterLogParams(int(k), float(a))
            return ConcaveExtension(p) if head == "L" else LTilde(p)
    except ValueError as exc:
        raise ConfigError(f"bad function {text!r}: {exc}") from None
    raise ConfigError(f"unknown function {text!r}")


def _reference_rate(f, n: int) -> tuple[str, float]:
    """The local-time rate expected for ``f``, for the ratio column."""
    from .iterlog import ConcaveExtension, IterLogParams, LTilde, l_tilde
    from .lattice import Power

    if isinstance(f, Power):
        return f"n/ln(n)^{1 - f.exponent:g}", n / math.log(n) ** (1.0 - f.exponent)
    if isinstance(f, (ConcaveExtension, LTilde)):
        p = IterLogParams(f.params.k + 1, f.params.alpha)
        try:
            return f"Ltilde[{p.k},{p.alpha:g}](n)", float(l_tilde(p, float(n)))
        except (ValueError, OverflowError):
            return "none", math.nan
    return "n/ln n", n / math.log(n)


def _tower(text: str, default):
    from .iterlog import TowerReal

    return TowerReal.from_text(text) if text else default


# -- subcommands -----------------------------------------------------------------

def cmd_verify_group(run: Run):
    from .groups import verify_group

    cfg = run.cfg
    spec = _spec(cfg)
    checks = verify_group(spec, cfg.radius, cfg.trials, cfg.seed, cap=cfg.support_cap)
    run.csv("verify_group.csv", ("check", "cases", "failures", "passed"),
            [(c.name, c.cases, c.failures, c.passed) for c in checks])
    bad = [c.name for c in checks if not c.passed]
    if bad:
        raise CheckFailed("failed checks: " + ", ".join(bad))


def _spec(cfg):
    from .groups import GroupSpec

    try:
        return GroupSpec.parse(cfg.spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_growth(run: Run):
    from .groups import bfs_ball
    from .plotting import line_plot

    cfg = run.cfg
    ball = bfs_ball(_spec(cfg), cfg.radius, cfg.support_cap)
    rows = [(r, v, math.log(v)) for r, v in enumerate(ball.counts)]
    run.csv("growth.csv", ("n", "v", "lnv"), rows)
    run.plot("growth.svg", line_plot, [r[0] for r in rows], {"ln v(n)": [r[2] for r in rows]},
             f"growth of {cfg.spec}", "ln v(n)", logx=False)


def cmd_drift_exact(run: Run, entropy: bool = False):
    from .estimators import exact_series
    from .plotting import line_plot

    cfg = run.cfg
    s = exact_series(_spec(cfg), cfg.n_max, cfg.support_cap, cfg.semantics)
    if entropy:
        rows = [(n, s.entropy[n], s.support[n], s.growth[n]) for n in s.n]
        run.csv("entropy_exact.csv", ("n", "H", "support", "v"), rows)
        run.plot("entropy_exact.svg", line_plot, s.n,
                 {"H(n)": s.entropy, "ln v(n)": [math.log(v) for v in s.growth]},
                 f"entropy on {cfg.spec}", "nats", logx=False)
    else:
        rows = [(n, float(s.drift[n]), float(s.second_moment[n]), s.support[n]) for n in s.n]
        run.csv("drift_exact.csv", ("n", "L", "El2", "support"), rows)
        run.plot("drift_exact.svg", line_plot, s.n, {"L(n)": [float(x) for x in s.drift]},
                 f"exact drift on {cfg.spec}", "L(n)", logx=False)


def cmd_drift_mc(run: Run):
    from .estimators import DRIFT_COLUMNS, drift_mc_bracket
    from .plotting import line_plot

    cfg = run.cfg
    spec = _spec(cfg)
    brackets = [drift_mc_bracket(spec, n, cfg.trials, cfg.seed, cfg.semantics) for n in cfg.n]
    run.csv("drift_mc.csv", DRIFT_COLUMNS, [b.row() for b in brackets])
    run.plot("drift_mc.svg", line_plot, cfg.n,
             {"lower": [b.lower_mean for b in brackets], "upper": [b.upper_mean for b in brackets]},
             f"drift bracket on {cfg.spec}", "word length",
             errors={"lower": [b.lower_se for b in brackets], "upper": [b.upper_se for b in brackets]})
    run.notes.append(SEPARATION_CAVEAT)


def _estimate_rows(reports, extra=()):
    return [r.row() + tuple(e) for r, e in zip(reports, extra or [()] * len(reports))]


def cmd_functional(run: Run, compose: bool = False):
    from .lattice import ESTIMATE_COLUMNS, survey
    from .plotting import line_plot

    cfg = run.cfg
    f = parse_function(cfg.function if cfg.function else "sqrt")
    name = getattr(f, "name", "f")
    rows, ratios = [], []
    for n in cfg.n:
        s = survey(n, cfg.trials, cfg.seed, {name: f}, threads=cfg.threads)
        est = s.estimate(name)
        ref_name, ref = _reference_rate(f, n) if n >= 2 else ("none", math.nan)
        ratios.append(est.mean / ref)
        rows.append(est.row() + (ref_name, est.mean / ref, s.conservation_failures))
    stem = "compose_drift" if compose else "functional"
    run.csv(f"{stem}.csv", ESTIMATE_COLUMNS + ("reference", "ratio", "conservation_failures"), rows)
    run.plot(f"{stem}.svg", line_plot, cfg.n, {f"mean / {rows[-1][5]}": ratios},
             f"sum_z {name}(b_z)", "ratio")


def cmd_range_stats(run: Run):
    from .lattice import ESTIMATE_COLUMNS, survey
    from .plotting import line_plot

    cfg = run.cfg
    rows = []
    for n in cfg.n:
        s = survey(n, cfg.trials, cfg.seed, threads=cfg.threads)
        r = s.range_statistics()
        tail = r.tail
        rows.append((n, cfg.trials, r.mean, r.stderr, cfg.seed, r.variance, r.spitzer_bound,
                     r.normalised_mean if n >= 2 else math.nan,
                     tail.q1 if tail else math.nan, tail.q2 if tail else math.nan,
                     s.conservation_failures))
    run.csv("range_stats.csv", ESTIMATE_COLUMNS + ("variance", "spitzer_bound", "mean_ln_n_over_n",
                                                    "q1", "q2", "conservation_failures"), rows)
    run.plot("range_stats.svg", line_plot, cfg.n, {"E[R] ln(n)/n": [r[7] for r in rows]},
             "normalised range", "E[R] ln(n)/n")


def cmd_local_time(run: Run):
    from .lattice import ESTIMATE_COLUMNS, dump_positions, simulate_srw, survey
    from .plotting import line_plot

    cfg = run.cfg
    rows = []
    for n in cfg.n:
        o = survey(n, cfg.trials, cfg.seed, threads=cfg.threads).origin_statistics()
        rows.append(o.estimate.row() + (o.ratio, o.k_fit, o.coverage))
    run.csv("local_time.csv", ESTIMATE_COLUMNS + ("mean_over_ln_n", "k_fit", "coverage"), rows)
    run.plot("local_time.svg", line_plot, cfg.n, {"E[b_0]/ln n": [r[5] for r in rows]},
             "origin local time", "E[b_0] / ln n")
    if cfg.debug_trajectory:
        dump_positions(simulate_srw(cfg.n[0], cfg.seed), run.out / "trajectory.txt")
        run.outputs.append("trajectory.txt")


def cmd_entropy_bounds(run: Run):
    from .estimators import ENTROPY_COLUMNS, bounds_from_series, exact_series
    from .groups import GroupSpec

    cfg = run.cfg
    try:
        specs = [GroupSpec.parse(t) for t in cfg.spec.split(";") if t.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows, summary = [], []
    failed = []
    for spec in specs:
        rep = bounds_from_series(exact_series(spec, cfg.n_max, cfg.support_cap, cfg.semantics))
        rows += [(str(spec),) + r.as_tuple() for r in rep.rows]
        summary.append((str(spec), rep.v_hat, rep.c_upper, rep.c_lower, rep.k_sqrt,
                        rep.growth_bound_ok, rep.entropy_monotone, rep.drift_subadditive,
                        rep.mass_conserved, rep.symmetric))
        if not rep.passed:
            failed.append(str(spec))
    run.csv("entropy_bounds.csv", ("spec",) + ENTROPY_COLUMNS, rows)
    run.csv("entropy_bounds_summary.csv",
            ("spec", "v_hat", "c_upper", "c_lower", "k_sqrt", "growth_bound_ok",
             "entropy_monotone", "drift_subadditive", "mass_conserved", "symmetric"), summary)
    if failed:
        raise CheckFailed("entropy checks failed for " + ", ".join(failed))


def cmd_concavity(run: Run):
    from .iterlog import (ConcaveExtension, IterLogParams, LTilde, TowerReal,
                          concavity_scan, reciprocal_iterlog_concavity, threshold_T)

    cfg = run.cfg
    p = IterLogParams(cfg.k, cfg.alpha)
    kind = cfg.function
    if kind not in ("ltilde", "extension", "reciprocal"):
        raise ConfigError(f"concavity --function must be ltilde, extension or reciprocal, not {kind!r}")
    header = ("x", "check", "lhs", "rhs", "slack", "pass")
    if kind == "reciprocal":
        # --hi names n; the scan runs over [lo, n/T].
        ln_t = threshold_T(p).ln()
        n = _tower(cfg.hi, TowerReal.exp_of(2.0 * ln_t + 50.0))
        hi = TowerReal.exp_of(n.ln() - ln_t)
        lo = _tower(cfg.lo, 1e-300)
        rep = reciprocal_iterlog_concavity(p.k, p.alpha, n, lo, hi, cfg.points, cfg.tol)
        rows = [(v.x, "second_difference", v.second_difference, v.threshold,
                 v.threshold - v.second_difference, False) for v in rep.concavity_violations]
        rows.append((f"{rep.points} points", "reciprocal_summary",
                     len(rep.concavity_violations), rep.hprime_below_one,
                     rep.g_hprime_not_above_two, rep.passed))
        passed = rep.passed
    else:
        f = LTilde(p) if kind == "ltilde" else ConcaveExtension(p)
        lo = _tower(cfg.lo, threshold_T(p) if kind == "ltilde" else 0.0)
        hi = _tower(cfg.hi, TowerReal(0, 1e300))
        extra = [f._knot_float] if kind == "extension" else []
        rep = concavity_scan(f, lo, hi, cfg.points, cfg.tol, extra=extra)
        rows, passed = rep.rows(), rep.passed
    run.csv("concavity.csv", header, rows)
    if not passed:
        raise CheckFailed(f"concavity violations for {kind} k={p.k} alpha={p.alpha}")


def cmd_appendix_check(run: Run):
    from .iterlog import IterLogParams, appendix_inequality_check, tower_samples

    cfg = run.cfg
    p = IterLogParams(cfg.k, cfg.alpha)
    rows, ok = [], True
    for x in tower_samples(p, cfg.points):
        rep = appendix_inequality_check(p, x)
        ok &= rep.passed
        rows += [r.as_tuple() for r in rep.rows]
    run.csv("appendix_check.csv", ("x", "check", "lhs", "rhs", "slack", "pass"), rows)
    if not ok:
        raise CheckFailed("appendix inequality violated")


def read_series(path: str, column: str = "") -> list[tuple[float, float]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if len(rows) < 2:
        raise ConfigError(f"{path} has no data rows")
    header = rows[0]
    if "n" not in header:
        raise ConfigError(f"{path} has no 'n' column")
    if column:
        if column not in header:
            raise ConfigError(f"{path} has no column {column!r}")
        col = column
    else:
        col = "value" if "value" in header else ("mean" if "mean" in header else header[1])
    i, j = header.index("n"), header.index(col)
    try:
        return [(float(r[i]), float(r[j])) for r in rows[1:] if r]
    except ValueError as exc:
        raise ConfigError(f"non-numeric data in {path}: {exc}") from None


def cmd_rate_fit(run: Run):
    from .plotting import band_plot
    from .rates import DEFAULT_CATALOG, RATE_COLUMNS, rate_fit

    cfg = run.cfg
    if not cfg.input:
        raise ConfigError("rate-fit needs --input")
    series = read_series(cfg.input, cfg.column)
    catalog = [c.strip() for c in cfg.catalog.split(";") if c.strip()] or list(DEFAULT_CATALOG)
    try:
        reports = rate_fit(series, catalog)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    run.csv("rate_fit.csv", RATE_COLUMNS, [r.row() for r in reports])
    run.plot("rate_fit.svg", band_plot, reports, f"ratio bands for {Path(cfg.input).name}")
    run.notes.append(SEPARATION_CAVEAT)


HANDLERS = {
    "verify-group": cmd_verify_group,
    "growth": cmd_growth,
    "drift-exact": cmd_drift_exact,
    "drift-mc": cmd_drift_mc,
    "compose-drift": lambda run: cmd_functional(run, compose=True),
    "entropy-exact": lambda run: cmd_drift_exact(run, entropy=True),
    "entropy-bounds": cmd_entropy_bounds,
    "range-stats": cmd_range_stats,
    "local-time": cmd_local_time,
    "functional": cmd_functional,
    "concavity": cmd_concavity,
    "appendix-check": cmd_appendix_check,
    "rate-fit": cmd_rate_fit,
}

COMMAND_DEFAULTS = {
    "compose-drift": {"function": "L:1,1"},
    "concavity": {"function": "ltilde", "points": 10000},
}


def _guess_out(argv) -> str:
    for i, a in enumerate(argv):
        if a == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if a.startswith("--out="):
            return a.split("=", 1)[1]
    return "out"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    cfg = None
    try:
        args = make_parser().parse_args(argv)
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        file_values = read_config_file(args.config) if args.config else {}
        defaults = dict(COMMAND_DEFAULTS.get(args.command, {}))
        cfg = build_config(args.command, {**defaults, **file_values}, flags)
        run = Run(cfg)
        try:
            HANDLERS[cfg.command](run)
        except (DomainError, OverflowError) as exc:
            raise ConfigError(f"parameters outside the supported domain: {exc}") from None
    except ConfigError as exc:
        out = Path(cfg.out if cfg else _guess_out(argv))
        write_manifest(out, asdict(cfg) if cfg else {"argv": argv}, "error", "config",
                       time.perf_counter() - start, message=str(exc))
        print(f"wreathwalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        write_manifest(run.out, asdict(cfg), "error", "resource", time.perf_counter() - start,
                       run.outputs, run.notes, str(exc))
        print(f"wreathwalk: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CheckFailed as exc:
        write_manifest(run.out, asdict(cfg), "failed", "check", time.perf_counter() - start,
                       run.outputs, run.notes, str(exc))
        print(f"wreathwalk: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    write_manifest(run.out, asdict(cfg), "ok", None, time.perf_counter() - start,
                   run.outputs, run.notes)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
