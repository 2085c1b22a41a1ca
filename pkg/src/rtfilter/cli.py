"""Command-line front end.

Subcommands:

* ``estimate`` - run the DLM filter and/or the windowed baseline over an
  incidence CSV and emit a per-day quantile table (CSV or JSON).
* ``wgen`` - dump the discretized generation-interval weights.
* ``forecast`` - filter, then Monte Carlo forecast R_t a few days ahead.
* ``plot`` - render the estimate as a static SVG fan chart.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
The RT_FILTER_QUANTILES environment variable supplies a default for
``--quantiles`` (comma-separated levels in (0, 1)).
"""

import argparse
import datetime as dt
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .cori import CoriConfig, run_cori
from .dlm import DEFAULT_QUANTILE_LEVELS, FilterConfig, NumericError, forecast_rt, run_filter
from .fanchart import FanGroup, render_fanchart
from .generation import ErlangSpec, discretize
from .incidence import (
    ObservationSeries,
    compute_lambda,
    compute_observations,
    observed_rt,
    parse_csv,
)

__all__ = ["RunManifest", "main", "app", "cmd_estimate", "cmd_wgen", "cmd_forecast", "cmd_plot"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

QUANTILES_ENV_VAR = "RT_FILTER_QUANTILES"
MAX_EXACT_INT = 2 ** 53


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunManifest:
    """Everything one invocation needs, assembled from flags."""

    input: Optional[Path] = None
    estimator: str = "dlm"
    tau: int = 7
    delta: Optional[float] = None
    w_star: Optional[float] = None
    s0: float = 1.0
    gi_shape: int = 3
    gi_scale: float = 8.0 / 3.0
    gi_smax: int = 30
    min_incidence: int = 10
    levels: tuple = DEFAULT_QUANTILE_LEVELS
    output_format: str = "csv"
    output: Optional[Path] = None
    forecast: Optional[int] = None
    draws: int = 10000
    seed: int = 0
    scale_check: Optional[int] = None
    plot: Optional[Path] = None

    @property
    def estimators(self) -> tuple:
        return ("dlm", "cori") if self.estimator == "both" else (self.estimator,)

    def filter_config(self) -> FilterConfig:
        return FilterConfig(tau=self.tau, delta=self.delta, w_star=self.w_star, s0=self.s0)

    def cori_config(self) -> CoriConfig:
        return CoriConfig(tau=self.tau)

    def interval(self):
        return discretize(ErlangSpec(self.gi_shape, self.gi_scale), self.gi_smax)


def _parse_levels(text: str) -> tuple:
    try:
        levels = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cannot parse quantile levels from {text!r}") from None
    if not levels:
        raise UsageError("at least one quantile level is required")
    if any(not (0.0 < p < 1.0) for p in levels):
        raise UsageError("quantile levels must lie strictly in (0, 1)")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise UsageError("quantile levels must be strictly increasing")
    return levels


def _level_label(p: float) -> str:
    return f"q{100.0 * p:g}"


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return repr(v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def _write_atomic(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
    else:
        _write_atomic(output, text)


def _csv_quote(cell: str) -> str:
    if any(ch in cell for ch in (",", '"', "\n", "\r")):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def _render_table(header, rows, fmt):
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]

        def scrub(v):
            # NaN/inf have no RFC-compliant JSON rendering
            if isinstance(v, float) and not math.isfinite(v):
                return None
            if isinstance(v, (np.bool_,)):
                return bool(v)
            return v

        payload = [{k: scrub(v) for k, v in row.items()} for row in payload]
        return json.dumps(payload, indent=2) + "\n"
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_quote(_fmt_cell(v)) for v in row))
    return "\n".join(lines) + "\n"


def _observations(manifest: RunManifest, series, interval):
    """Observation series, or an all-invalid one for baseline-only runs.

    The baseline needs only positive window infectiousness, so a series
    with no DLM-observable day should still produce its table; the filter
    itself keeps the hard error.
    """
    try:
        return compute_observations(series, interval, manifest.min_incidence)
    except ValueError:
        if "dlm" in manifest.estimators:
            raise
        n = len(series)
        return ObservationSeries(
            series.start_date,
            lam=compute_lambda(series, interval),
            y=np.full(n, np.nan),
            valid=np.zeros(n, dtype=bool),
        )


def _estimate_table(manifest: RunManifest, series):
    """Per-day rows: date, valid, observed R_t, then per-estimator quantiles."""
    interval = manifest.interval()
    obs = _observations(manifest, series, interval)
    obs_rt = observed_rt(obs)
    dates = series.dates
    header = ["date", "valid", "observed_rt"]
    columns = {}

    if "dlm" in manifest.estimators:
        post = run_filter(obs, manifest.filter_config(), manifest.levels)
        by_date = {r.date: r for r in post.records}
        for p in manifest.levels:
            name = f"dlm_{_level_label(p)}"
            header.append(name)
            columns[name] = [
                by_date[d].quantiles[p] if d in by_date else None for d in dates
            ]
    if "cori" in manifest.estimators:
        post = run_cori(series, interval, manifest.cori_config(), manifest.levels)
        for p in manifest.levels:
            name = f"cori_{_level_label(p)}"
            header.append(name)
            columns[name] = [
                r.quantiles[p] if r.valid else None for r in post.records
            ]
        header.append("cori_cv")
        columns["cori_cv"] = [r.cv if r.valid else None for r in post.records]

    rows = []
    for i, d in enumerate(dates):
        row = [d.isoformat(), bool(obs.valid[i])]
        row.append(float(obs_rt[i]) if np.isfinite(obs_rt[i]) else None)
        for name in header[3:]:
            row.append(columns[name][i])
        rows.append(row)
    return header, rows


def _scale_check_report(manifest: RunManifest, series) -> str:
    """Run the pipeline on I and K*I and report the scale (in)sensitivity.

    DLM quantile columns are expected to agree exactly; the baseline's CV
    shrinks by sqrt((a + sum I) / (a + K sum I)) per window.  Both
    estimators run regardless of --estimator, since the point of the check
    is their contrast.
    """
    k = manifest.scale_check
    if int(series.counts.max()) * k > MAX_EXACT_INT:
        raise ValueError("scaled counts exceed exact float64 integer range")
    manifest = replace(manifest, estimator="both")
    header1, rows1 = _estimate_table(manifest, series)
    header2, rows2 = _estimate_table(manifest, series.scaled(k))
    idx = {name: j for j, name in enumerate(header1)}
    lines = ["metric,value", f"k,{k}"]

    for name in header1:
        if not name.startswith("dlm_q"):
            continue
        j = idx[name]
        deltas = [
            abs(r1[j] - r2[j])
            for r1, r2 in zip(rows1, rows2)
            if r1[j] is not None and r2[j] is not None
        ]
        worst = max(deltas) if deltas else float("nan")
        lines.append(f"{name}_max_abs_delta,{worst!r}")

    if "cori_cv" in idx:
        j = idx["cori_cv"]
        cfg = manifest.cori_config()
        counts = series.counts
        errs, ratios = [], []
        for i, (r1, r2) in enumerate(zip(rows1, rows2)):
            if r1[j] is None or r2[j] is None:
                continue
            window = counts[i - cfg.tau + 1 : i + 1].sum()
            expected = math.sqrt((cfg.a + window) / (cfg.a + k * window))
            ratio = r2[j] / r1[j]
            ratios.append(ratio)
            errs.append(abs(ratio / expected - 1.0))
        if ratios:
            lines.append(f"cori_cv_ratio_min,{min(ratios)!r}")
            lines.append(f"cori_cv_ratio_max,{max(ratios)!r}")
            lines.append(f"cori_cv_ratio_max_rel_error,{max(errs)!r}")
    return "\n".join(lines) + "\n"


def _fan_groups(manifest: RunManifest, series):
    interval = manifest.interval()
    obs = _observations(manifest, series, interval)
    dates = series.dates
    groups = []
    if "dlm" in manifest.estimators:
        post = run_filter(obs, manifest.filter_config(), manifest.levels)
        by_date = {r.date: r for r in post.records}
        q = np.full((len(dates), len(manifest.levels)), np.nan)
        for i, d in enumerate(dates):
            if d in by_date:
                q[i] = [by_date[d].quantiles[p] for p in manifest.levels]
        groups.append(FanGroup("dlm", manifest.levels, q, "#1f77b4", "#d62728"))
    if "cori" in manifest.estimators:
        post = run_cori(series, interval, manifest.cori_config(), manifest.levels)
        q = np.full((len(dates), len(manifest.levels)), np.nan)
        for i, r in enumerate(post.records):
            if r.valid:
                q[i] = [r.quantiles[p] for p in manifest.levels]
        groups.append(FanGroup("cori", manifest.levels, q, "#2ca02c", "#000000"))
    return dates, groups, observed_rt(obs)


def cmd_estimate(manifest: RunManifest) -> int:
    series = parse_csv(manifest.input)
    if manifest.scale_check is not None:
        _emit(_scale_check_report(manifest, series), manifest.output)
        return EXIT_OK
    header, rows = _estimate_table(manifest, series)
    _emit(_render_table(header, rows, manifest.output_format), manifest.output)
    if manifest.plot is not None:
        dates, groups, obs_rt = _fan_groups(manifest, series)
        _write_atomic(manifest.plot, render_fanchart(dates, groups, obs_rt))
    return EXIT_OK


def cmd_wgen(manifest: RunManifest) -> int:
    interval = manifest.interval()
    lines = ["s,w_s"]
    for s, w in zip(interval.days, interval.weights):
        lines.append(f"{s},{float(w)!r}")
    _emit("\n".join(lines) + "\n", manifest.output)
    print(
        f"mean={interval.mean!r} argmax_day={interval.argmax_day} "
        f"truncated_mass={interval.truncated_mass!r}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_forecast(manifest: RunManifest) -> int:
    series = parse_csv(manifest.input)
    interval = manifest.interval()
    obs = compute_observations(series, interval, manifest.min_incidence)
    post = run_filter(obs, manifest.filter_config(), manifest.levels)
    maps = forecast_rt(
        post.last_state(),
        manifest.filter_config(),
        horizon=manifest.forecast,
        draws=manifest.draws,
        seed=manifest.seed,
        levels=manifest.levels,
    )
    last_date = post.records[-1].date
    header = ["date"] + [_level_label(p) for p in manifest.levels]
    rows = []
    for k, qmap in enumerate(maps, start=1):
        day = last_date + dt.timedelta(days=k)
        rows.append([day.isoformat()] + [qmap[p] for p in manifest.levels])
    _emit(_render_table(header, rows, manifest.output_format), manifest.output)
    return EXIT_OK


def cmd_plot(manifest: RunManifest) -> int:
    series = parse_csv(manifest.input)
    dates, groups, obs_rt = _fan_groups(manifest, series)
    _write_atomic(manifest.output, render_fanchart(dates, groups, obs_rt))
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("input", type=Path, help="incidence CSV with header 'date,cases'")
    sub.add_argument("--tau", type=int, default=7, help="smoothing horizon in days (default 7)")
    sub.add_argument("--delta", type=float, default=None,
                     help="variance discount factor (default 1 - 1/(2 tau))")
    sub.add_argument("--w-star", type=float, default=None,
                     help="state innovation variance multiplier (default 2/tau)")
    sub.add_argument("--s0", type=float, default=1.0,
                     help="prior point estimate of the observational variance")
    _add_interval_args(sub)
    sub.add_argument("--min-incidence", type=int, default=10,
                     help="smallest daily count treated as observable (default 10)")
    sub.add_argument("--quantiles", type=str, default=None,
                     help="comma-separated levels in (0,1); default from "
                          f"${QUANTILES_ENV_VAR} or 0.1,0.25,0.5,0.75,0.9")
    sub.add_argument("--output", type=Path, default=None, help="output file (default stdout)")


def _add_interval_args(sub):
    sub.add_argument("--gi-shape", type=int, default=3,
                     help="generation-interval Erlang shape (default 3)")
    sub.add_argument("--gi-scale", type=float, default=8.0 / 3.0,
                     help="generation-interval Erlang scale in days (default 8/3)")
    sub.add_argument("--gi-smax", type=int, default=30,
                     help="generation-interval truncation horizon in days (default 30)")


def build_parser() -> _Parser:
    parser = _Parser(prog="rtfilter", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    est = subs.add_parser("estimate", help="per-day R_t posterior quantile table")
    _add_common(est)
    est.add_argument("--estimator", choices=("dlm", "cori", "both"), default="dlm")
    est.add_argument("--format", choices=("csv", "json"), default="csv")
    est.add_argument("--scale-check", type=int, default=None, metavar="K",
                     help="run twice with counts and K*counts and report the differences")
    est.add_argument("--plot", type=Path, default=None, help="also write an SVG fan chart here")

    wgen = subs.add_parser("wgen", help="dump generation-interval weights as CSV")
    _add_interval_args(wgen)
    wgen.add_argument("--output", type=Path, default=None, help="output file (default stdout)")

    fc = subs.add_parser("forecast", help="Monte Carlo forecast of R_t beyond the last day")
    _add_common(fc)
    fc.add_argument("--forecast", type=int, required=True, metavar="HORIZON",
                    help="number of days ahead (>= 1)")
    fc.add_argument("--draws", type=int, default=10000, help="Monte Carlo sample size")
    fc.add_argument("--seed", type=int, default=0, help="random seed (fixed seed -> fixed output)")
    fc.add_argument("--format", choices=("csv", "json"), default="csv")

    plot = subs.add_parser("plot", help="render the estimate as an SVG fan chart")
    _add_common(plot)
    plot.add_argument("--estimator", choices=("dlm", "cori", "both"), default="dlm")
    return parser


def _manifest_from_args(args) -> RunManifest:
    text = getattr(args, "quantiles", None)
    if text is None:
        text = os.environ.get(QUANTILES_ENV_VAR)
    levels = _parse_levels(text) if text else DEFAULT_QUANTILE_LEVELS

    manifest = RunManifest(
        input=getattr(args, "input", None),
        estimator=getattr(args, "estimator", "dlm"),
        tau=getattr(args, "tau", 7),
        delta=getattr(args, "delta", None),
        w_star=getattr(args, "w_star", None),
        s0=getattr(args, "s0", 1.0),
        gi_shape=args.gi_shape,
        gi_scale=args.gi_scale,
        gi_smax=args.gi_smax,
        min_incidence=getattr(args, "min_incidence", 10),
        levels=levels,
        output_format=getattr(args, "format", "csv"),
        output=getattr(args, "output", None),
        forecast=getattr(args, "forecast", None),
        draws=getattr(args, "draws", 10000),
        seed=getattr(args, "seed", 0),
        scale_check=getattr(args, "scale_check", None),
        plot=getattr(args, "plot", None),
    )
    if manifest.forecast is not None and manifest.forecast < 1:
        raise UsageError("--forecast horizon must be >= 1")
    if getattr(args, "draws", 1) < 1:
        raise UsageError("--draws must be >= 1")
    if manifest.scale_check is not None and manifest.scale_check < 1:
        raise UsageError("--scale-check factor must be a positive integer")
    if args.command == "plot" and manifest.output is None:
        raise UsageError("plot requires --output PATH for the SVG file")
    return manifest


_COMMANDS = {
    "estimate": cmd_estimate,
    "wgen": cmd_wgen,
    "forecast": cmd_forecast,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        manifest = _manifest_from_args(args)
        return _COMMANDS[args.command](manifest)
    except UsageError as exc:
        print(f"rtfilter: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"rtfilter: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"rtfilter: {exc}", file=sys.stderr)
        return EXIT_DATA


def app():
    raise SystemExit(main())


if __name__ == "__main__":
    app()
