"""Command line front end: generate, eval, sweep, oracle."""

from __future__ import annotations

import concurrent.futures
import json
import os
from pathlib import Path
from typing import Optional, Sequence

import click

from .base import NextActivityPredictor
from .ensembles import (
    DEFAULT_TAU,
    PROMOTION_DEFAULT_ORDERS,
    SOFT_DEFAULT_ORDERS,
    AdaptiveVotingEnsemble,
    PromotionEnsemble,
    SoftVotingEnsemble,
)
from .generators import BUILTIN_PATTERNS, GenConfig, builtin_pattern, generate_log
from .harness import EvalReport, interleave, run_prequential, run_split, stream_from_log
from .ingest import LogFormatError, load_log, log_stats, write_log
from .ngram import NGramPredictor
from .oracle import (
    ExactEnumerationTooLarge,
    best_accuracy,
    ceiling_accuracy,
    plateau_fix,
)

JOBS_ENV_VAR = "STREAMGRAM_JOBS"

MODEL_SPEC_HELP = (
    "ngram[:N] | soft[:N1,N2,...] | adaptive[:N1,N2,...] | "
    "promotion[:N1,N2,...][:tau=T][:confirmation=consecutive|cumulative]"
)


def parse_model_spec(spec: str, defaults: Optional[dict] = None) -> NextActivityPredictor:
    """Build a model from a compact spec string.

    Examples: ``ngram:5``, ``soft:3,4,5,6``, ``adaptive:3,4,5,6``,
    ``promotion:3,5,7,9,13,17,25,33:tau=20``. Omitted parts fall back to
    ``defaults`` (from a config file) and then to built-in defaults.
    """
    defaults = defaults or {}
    parts = [p.strip() for p in spec.strip().split(":")]
    kind = parts[0].lower()
    sizes: Optional[tuple[int, ...]] = None
    options: dict[str, str] = {}
    for part in parts[1:]:
        if not part:
            raise ValueError(f"empty segment in model spec {spec!r}")
        if "=" in part:
            key, _, value = part.partition("=")
            options[key.strip()] = value.strip()
        elif sizes is None:
            try:
                sizes = tuple(int(x) for x in part.split(","))
            except ValueError:
                raise ValueError(
                    f"bad size list {part!r} in model spec {spec!r}") from None
        else:
            raise ValueError(f"duplicate size list in model spec {spec!r}")

    if sizes is None and "window_sizes" in defaults:
        sizes = tuple(defaults["window_sizes"])
    tau = int(options.pop("tau", defaults.get("tau", DEFAULT_TAU)))
    confirmation = options.pop("confirmation",
                               defaults.get("confirmation", "consecutive"))
    if options:
        raise ValueError(f"unknown options {sorted(options)} in model spec {spec!r}")

    if kind == "ngram":
        if sizes is None:
            sizes = (5,)
        if len(sizes) != 1:
            raise ValueError(f"ngram takes exactly one order, got {sizes}")
        return NGramPredictor(n=sizes[0])
    if kind == "soft":
        return SoftVotingEnsemble(window_sizes=sizes or SOFT_DEFAULT_ORDERS)
    if kind == "adaptive":
        return AdaptiveVotingEnsemble(window_sizes=sizes or SOFT_DEFAULT_ORDERS)
    if kind == "promotion":
        return PromotionEnsemble(window_sizes=sizes or PROMOTION_DEFAULT_ORDERS,
                                 tau=tau, confirmation=confirmation)
    raise ValueError(
        f"unknown model kind {kind!r} in spec {spec!r}; grammar: {MODEL_SPEC_HELP}")


def parse_window_range(text: str) -> list[int]:
    """'LO..HI' or comma list, e.g. '0..8' or '1,2,4'."""
    text = text.strip()
    try:
        if ".." in text:
            lo_s, _, hi_s = text.partition("..")
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"bad window range {text!r}, want 'LO..HI' or a comma list")


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise click.ClickException(f"cannot read config {path}: {e}")
    if not isinstance(config, dict):
        raise click.ClickException(f"config {path} must hold a JSON object")
    return config


def _build_models(model_specs: Sequence[str], config: dict) -> list[NextActivityPredictor]:
    models = []
    try:
        for spec in model_specs:
            models.append(parse_model_spec(spec, defaults=config))
        if not models and config.get("kind"):
            models.append(parse_model_spec(str(config["kind"]), defaults=config))
    except ValueError as e:
        raise click.UsageError(str(e))
    if not models:
        raise click.UsageError("no model given; pass --model or a config file with 'kind'")
    return models


def _echo_table(reports: Sequence[EvalReport]) -> None:
    header = f"{'model':<32} {'dataset':<18} {'events':>9} {'acc %':>7} {'pred us':>9} {'train us':>9}"
    click.echo(header)
    click.echo("-" * len(header))
    for r in reports:
        click.echo(f"{r.model_name:<32} {r.dataset_name:<18} {r.n_events:>9} "
                   f"{r.accuracy:>7.2f} {r.pred_us_mean:>9.2f} {r.train_us_mean:>9.2f}")


@click.group()
@click.version_option(package_name="streamgram")
def main():
    """Synthetic log generation, streaming evaluation, window sweeps, and
    best-accuracy oracle curves for next-activity prediction."""


@main.command("generate")
@click.option("--pattern", required=True,
              help="one of: " + ", ".join(sorted(BUILTIN_PATTERNS)))
@click.option("--cases", "n_cases", type=int, default=100, show_default=True)
@click.option("--case-length", type=int, default=2000, show_default=True,
              help="activities per case, stop excluded")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="output log (.csv or .jsonl)")
def cmd_generate(pattern, n_cases, case_length, seed, out_path):
    """Write a synthetic event log."""
    try:
        spec = builtin_pattern(pattern)
        log = generate_log(spec, GenConfig(n_cases=n_cases, case_length=case_length,
                                           seed=seed))
        write_log(log, out_path)
    except (ValueError, LogFormatError) as e:
        raise click.UsageError(str(e))
    s = log_stats(log)
    click.echo(f"wrote {out_path}: {s.n_cases} cases, {s.n_events} events, "
               f"{s.n_activities} activities, avg length {s.avg_case_length:.1f}")


@main.command("eval")
@click.option("--model", "model_specs", multiple=True, help=MODEL_SPEC_HELP)
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--protocol", type=click.Choice(["prequential", "split"]),
              default="prequential", show_default=True)
@click.option("--order", "order_mode",
              type=click.Choice(["sequential", "roundrobin", "random"]),
              default="sequential", show_default=True,
              help="event interleaving for the prequential stream")
@click.option("--seed", type=int, default=0, show_default=True,
              help="seed for --order random")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON object with kind / window_sizes / tau / confirmation")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="write report JSON (list when several models)")
@click.option("--table", "as_table", is_flag=True, help="print a comparison table")
def cmd_eval(model_specs, input_path, protocol, order_mode, seed, config_path,
             out_path, as_table):
    """Evaluate models on an event log."""
    config = _load_config(config_path)
    models = _build_models(model_specs, config)
    try:
        log = load_log(input_path)
    except LogFormatError as e:
        raise click.ClickException(str(e))
    dataset = Path(input_path).name
    reports = []
    try:
        for model in models:
            if protocol == "prequential":
                stream = interleave(log, seed=seed, mode=order_mode)
                reports.append(run_prequential(model, stream, dataset_name=dataset))
            else:
                reports.append(run_split(model, log, dataset_name=dataset))
    except ValueError as e:
        raise click.ClickException(str(e))
    if out_path:
        payload = (reports[0].to_json() if len(reports) == 1 else
                   json.dumps([json.loads(r.to_json()) for r in reports], indent=2))
        Path(out_path).write_text(payload + "\n", encoding="utf-8")
    if as_table or not out_path:
        _echo_table(reports)


def _sweep_one(args) -> tuple[str, int, EvalReport]:
    kind, window, log, seed = args
    if kind == "ngram":
        model = NGramPredictor(n=window + 1)
    else:
        model = parse_model_spec(kind)
    stream = stream_from_log(log)
    report = run_prequential(model, stream)
    return kind, window, report


@main.command("sweep")
@click.option("--model", "model_specs", multiple=True,
              help=f"repeatable; {MODEL_SPEC_HELP}; 'ngram' is swept over --windows "
                   "(default: ngram)")
@click.option("--windows", "windows_text", default="1..8", show_default=True,
              help="history lengths for the ngram sweep (order = window + 1)")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", type=int, default=None,
              help=f"parallel workers (default ${JOBS_ENV_VAR} or 1)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="write CSV here instead of stdout")
def cmd_sweep(model_specs, windows_text, input_path, jobs, seed, out_path):
    """Accuracy over a grid of models and window sizes."""
    try:
        windows = parse_window_range(windows_text)
        kinds = list(model_specs) or ["ngram"]
        for k in kinds:
            if k != "ngram":
                parse_model_spec(k)
    except ValueError as e:
        raise click.UsageError(str(e))
    try:
        log = load_log(input_path)
    except LogFormatError as e:
        raise click.ClickException(str(e))

    tasks = []
    for kind in kinds:
        if kind == "ngram":
            tasks.extend(("ngram", w, log, seed) for w in windows)
        else:
            tasks.append((kind, -1, log, seed))

    if jobs is None:
        jobs = int(os.environ.get(JOBS_ENV_VAR, "1"))
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]

    lines = ["model,window,accuracy,n_events,pred_us_mean,train_us_mean"]
    for kind, window, report in results:
        w = "" if window < 0 else str(window)
        lines.append(f"{report.model_name},{w},{report.accuracy:.4f},"
                     f"{report.n_events},{report.pred_us_mean:.2f},{report.train_us_mean:.2f}")
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out_path} ({len(results)} rows)")
    else:
        click.echo(text, nl=False)


@main.command("oracle")
@click.option("--pattern", required=True,
              help="one of: " + ", ".join(sorted(BUILTIN_PATTERNS)))
@click.option("--windows", "windows_text", default="0..8", show_default=True)
@click.option("--method", type=click.Choice(["exact", "empirical"]),
              default="exact", show_default=True)
@click.option("--sample-budget", type=int, default=200_000, show_default=True,
              help="stream symbols for the empirical method")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--raw", is_flag=True, help="skip the plateau clamp")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="write CSV here instead of stdout")
def cmd_oracle(pattern, windows_text, method, sample_budget, seed, raw, out_path):
    """Best achievable accuracy per window for a synthetic pattern."""
    try:
        spec = builtin_pattern(pattern)
        windows = parse_window_range(windows_text)
    except ValueError as e:
        raise click.UsageError(str(e))
    estimates = {}
    try:
        for w in windows:
            estimates[w] = best_accuracy(spec, w, method=method,
                                         sample_budget=sample_budget, seed=seed)
    except ExactEnumerationTooLarge as e:
        raise click.ClickException(str(e))
    curve = {w: est.value for w, est in estimates.items()}
    if not raw and sorted(curve) == list(range(len(curve))):
        curve = plateau_fix(curve, ceiling=ceiling_accuracy(spec))
    lines = ["pattern,window,method,best_accuracy,ci_low,ci_high"]
    for w in windows:
        est = estimates[w]
        lines.append(f"{pattern},{w},{method},{curve[w]:.6f},"
                     f"{est.ci_low:.6f},{est.ci_high:.6f}")
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out_path} ({len(windows)} rows)")
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
