"""Command-line interface: decompose, spectrum, run, ablate, summation, audit, synth.

Experiment configuration comes from a flat key=value file (see CONFIG_KEYS)
with command-line flags taking precedence; every command exits 0 on success
and with the failing error's category code (config=2, data=3, numeric=4)
otherwise.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .datasets import DATASET_REGISTRY, load_csv, verify_against_registry
from .decompose import METHODS, decompose
from .decompose.emd import EmdConfig
from .decompose.ssa import SsaConfig
from .errors import DecompAuditError, InvalidConfigError, InvalidInputError
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    aggregate_rows,
    audit_leakage,
    emit_reports,
    run_ablation,
    run_experiment,
    run_summation,
)
from .models import TrainConfig
from .pipeline import CausalScheduleConfig
from .series import TimeSeries, WindowSpec, split_chronological
from .spectral import power_spectrum
from .synth import SyntheticSpec, gen_synthetic, standard_fixture_spec

# config-file schema: key -> parser
_SPLIT = lambda s: tuple(part.strip() for part in s.split(",") if part.strip())
_INTS = lambda s: tuple(int(p) for p in _SPLIT(s))
CONFIG_KEYS = {
    "dataset": str,
    "column": str,
    "methods": _SPLIT,
    "modes": _SPLIT,
    "models": _SPLIT,
    "train_fraction": float,
    "window": int,
    "n_seeds": int,
    "base_seed": int,
    "ridge_lambda": float,
    "refresh_stride": int,
    "track_test_loss": str,
    "optimizer": str,
    "learning_rate": float,
    "max_epochs": int,
    "batch_size": int,
    "patience": int,
    "validation": str,
    "validation_fraction": float,
    "loss": str,
    "hidden_sizes": _INTS,
    "synthetic_fixture": lambda s: s.lower() in ("1", "true", "yes"),
    "synthetic_length": int,
    "synthetic_tones": str,
    "noise_kind": str,
    "noise_sigma": float,
    "ar_coefficient": float,
    "synthetic_seed": int,
}


def parse_config_file(path) -> dict:
    """Parse a flat `key = value` config file; '#' starts a comment."""
    out = {}
    text = Path(path).read_text()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise InvalidConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise InvalidConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def parse_tones(text: str) -> tuple[tuple[float, float, float], ...]:
    """Parse 'amp:freq[:phase];amp:freq[:phase];...' tone lists."""
    tones = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        if len(bits) not in (2, 3):
            raise InvalidConfigError(f"tone {part!r} must be amp:freq or amp:freq:phase")
        amp, freq = float(bits[0]), float(bits[1])
        phase = float(bits[2]) if len(bits) == 3 else 0.0
        tones.append((amp, freq, phase))
    if not tones:
        raise InvalidConfigError("no tones given")
    return tuple(tones)


def _synthetic_from_options(options: dict) -> SyntheticSpec | None:
    if options.get("synthetic_fixture"):
        return standard_fixture_spec()
    if "synthetic_length" not in options:
        return None
    return SyntheticSpec(
        length=options["synthetic_length"],
        tones=parse_tones(options["synthetic_tones"]) if "synthetic_tones" in options else (),
        noise_kind=options.get("noise_kind", "white"),
        noise_sigma=options.get("noise_sigma", 0.0),
        ar_coefficient=options.get("ar_coefficient", 0.0),
        seed=options.get("synthetic_seed", 0),
    )


def build_experiment_config(options: dict) -> ExperimentConfig:
    """Assemble an ExperimentConfig from merged file + flag options."""
    train_kwargs = {}
    for key in ("optimizer", "learning_rate", "max_epochs", "batch_size",
                "patience", "validation", "validation_fraction", "loss", "hidden_sizes"):
        if key in options and options[key] is not None:
            train_kwargs[key] = options[key]
    synthetic = _synthetic_from_options(options)
    kwargs = dict(
        synthetic=synthetic,
        dataset_path=options.get("dataset"),
        dataset_column=options.get("column"),
        train=TrainConfig(**train_kwargs),
    )
    for key in ("methods", "modes", "models", "train_fraction", "window", "n_seeds",
                "base_seed", "ridge_lambda", "refresh_stride", "track_test_loss"):
        if key in options and options[key] is not None:
            kwargs[key] = options[key]
    return ExperimentConfig(**kwargs)


def _merge_options(args) -> dict:
    options = {}
    if getattr(args, "config", None):
        options.update(parse_config_file(args.config))
    flag_map = {
        "dataset": "dataset", "column": "column", "methods": "methods",
        "modes": "modes", "models": "models", "seeds": "n_seeds",
        "seed": "base_seed", "window": "window", "train_fraction": "train_fraction",
        "ridge_lambda": "ridge_lambda", "refresh_stride": "refresh_stride",
        "track_test_loss": "track_test_loss", "optimizer": "optimizer",
        "learning_rate": "learning_rate", "max_epochs": "max_epochs",
        "patience": "patience", "validation": "validation", "loss": "loss",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            options[key] = CONFIG_KEYS[key](value) if isinstance(value, str) and key in (
                "methods", "modes", "models", "hidden_sizes") else value
    if getattr(args, "fixture", False):
        options["synthetic_fixture"] = True
    return options


def _load_series_arg(args) -> TimeSeries:
    if getattr(args, "fixture", False):
        return gen_synthetic(standard_fixture_spec())
    if getattr(args, "input", None):
        return load_csv(args.input, getattr(args, "column", None))
    raise InvalidConfigError("provide --input CSV or --fixture")


def _write_series_csv(series: TimeSeries, path: Path) -> None:
    lines = [series.name] + [repr(float(v)) for v in series.values]
    path.write_text("\n".join(lines) + "\n")


def _cmd_synth(args) -> int:
    if args.fixture:
        spec = standard_fixture_spec()
    else:
        spec = SyntheticSpec(
            length=args.length,
            tones=parse_tones(args.tones) if args.tones else (),
            noise_kind=args.noise,
            noise_sigma=args.sigma,
            ar_coefficient=args.ar_coef,
            seed=args.seed,
        )
    series = gen_synthetic(spec)
    _write_series_csv(series, Path(args.out))
    print(f"wrote {len(series)} points to {args.out}")
    return 0


def _decompose_config(args):
    if args.method == "ssa" and args.ssa_window is not None:
        return SsaConfig(window=args.ssa_window)
    if args.method == "emd":
        kwargs = {}
        if args.emd_max_imfs is not None:
            kwargs["max_imfs"] = args.emd_max_imfs
        if args.emd_sd_threshold is not None:
            kwargs["sift_sd_threshold"] = args.emd_sd_threshold
        if args.emd_max_sift is not None:
            kwargs["max_sift_iterations"] = args.emd_max_sift
        if kwargs:
            return EmdConfig(**kwargs)
    return None


def _cmd_decompose(args) -> int:
    series = _load_series_arg(args)
    comps = decompose(series, args.method, _decompose_config(args))
    header = ",".join(comps.labels)
    rows = [",".join(repr(float(v)) for v in col) for col in comps.components.T]
    Path(args.out).write_text(header + "\n" + "\n".join(rows) + "\n")
    print(f"wrote {comps.n_components} components x {comps.length} steps to {args.out}")
    return 0


def _cmd_spectrum(args) -> int:
    series = _load_series_arg(args)
    spectrum = power_spectrum(series.values)
    lines = ["frequency,power"] + [
        f"{repr(float(f))},{repr(float(p))}"
        for f, p in zip(spectrum.frequencies, spectrum.power)
    ]
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote spectrum ({spectrum.frequencies.size} bins, n={spectrum.n}) to {args.out}")
    return 0


def _run_seed_chunk(payload):
    cfg_doc, base_seed, n_seeds = payload
    cfg = dataclasses.replace(cfg_doc, base_seed=base_seed, n_seeds=n_seeds)
    return run_experiment(cfg)


def _run_parallel(cfg: ExperimentConfig, workers: int) -> ExperimentResult:
    """Split seeds across processes; merged output is identical to serial runs."""
    seeds = cfg.seeds
    chunks = []
    per = max(1, len(seeds) // workers + (1 if len(seeds) % workers else 0))
    start = 0
    while start < len(seeds):
        count = min(per, len(seeds) - start)
        chunks.append((cfg, seeds[start], count))
        start += count
    if len(chunks) == 1:
        return run_experiment(cfg)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_seed_chunk, chunks))
    merged_rows = sorted((r for res in results for r in res.rows), key=lambda r: r.key())
    merged_failures = [f for res in results for f in res.failures]
    merged_histories = {}
    for res in results:
        merged_histories.update(res.histories)
    return ExperimentResult(
        config=cfg,
        rows=merged_rows,
        failures=merged_failures,
        aggregates=aggregate_rows(merged_rows),
        histories=merged_histories,
        spectra=results[0].spectra,
    )


def _print_aggregates(result: ExperimentResult) -> None:
    print(f"{'method':8s} {'mode':18s} {'model':12s} {'mse_mean':>12s} {'mse_std':>10s} {'p_vs_causal':>12s}")
    for a in result.aggregates:
        p = f"{a.p_vs_causal:.3g}" if a.p_vs_causal is not None else "-"
        print(f"{a.method:8s} {a.mode:18s} {a.model:12s} {a.mse_mean:12.6g} {a.mse_std:10.4g} {p:>12s}")


def _cmd_run(args) -> int:
    cfg = build_experiment_config(_merge_options(args))
    workers = args.workers or 1
    result = _run_parallel(cfg, workers) if workers > 1 else run_experiment(cfg)
    _print_aggregates(result)
    if result.failures:
        print(f"{len(result.failures)} cell(s) failed; see failures.csv", file=sys.stderr)
    if args.out:
        written = emit_reports(result, args.out)
        print(f"wrote {len(written)} report files to {args.out}")
    return 0


def _cmd_ablate(args) -> int:
    cfg = build_experiment_config(_merge_options(args))
    result = run_ablation(cfg, args.method)
    print(f"{'model':8s} {'component':12s} {'dominant_freq':>14s} {'error_reduction':>16s}")
    for (model, label), reduction in sorted(result.error_reduction.items()):
        freq = result.component_frequency[label]
        print(f"{model:8s} {label:12s} {freq:14.5f} {100 * reduction:15.1f}%")
    if args.out:
        from .harness import ExperimentResult

        wrapped = ExperimentResult(cfg, result.rows, result.failures,
                                   result.aggregates, {}, {})
        written = emit_reports(wrapped, args.out)
        print(f"wrote {len(written)} report files to {args.out}")
    return 0


def _cmd_summation(args) -> int:
    cfg = build_experiment_config(_merge_options(args))
    result = run_summation(cfg, args.method, leaked=not args.causal)
    _print_aggregates_summary(result)
    if args.out:
        from .harness import ExperimentResult

        wrapped = ExperimentResult(cfg, result.rows, [], result.aggregates, {}, {})
        written = emit_reports(wrapped, args.out)
        print(f"wrote {len(written)} report files to {args.out}")
    return 0


def _print_aggregates_summary(result) -> None:
    print(f"{result.n_models} component models, "
          f"{'leaked' if result.leaked else 'causal'} test features")
    for a in result.aggregates:
        print(f"  {a.model:12s} mse={a.mse_mean:.6g} (+/- {a.mse_std:.3g})")


def _cmd_audit(args) -> int:
    cfg = build_experiment_config(_merge_options(args))
    verdict = audit_leakage(cfg, args.method, args.model)
    print(verdict.summary())
    return 0


def _cmd_registry(args) -> int:
    if args.verify:
        series = load_csv(args.verify, args.column)
        problems = verify_against_registry(series, args.name)
        if problems:
            for problem in problems:
                print(f"MISMATCH: {problem}")
            return 3
        print(f"{args.name}: length/mean/std match the registry")
        return 0
    print(f"{'name':6s} {'length':>8s} {'mean':>10s} {'std':>8s}  source")
    for entry in DATASET_REGISTRY.values():
        print(f"{entry.name:6s} {entry.expected_length:8d} {entry.expected_mean:10.4g} "
              f"{entry.expected_std:8.4g}  {entry.url}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decompaudit",
        description="Signal-decomposition forecasting and future-leakage auditing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_series_source(p):
        p.add_argument("--input", help="input series CSV")
        p.add_argument("--column", help="CSV column name")
        p.add_argument("--fixture", action="store_true",
                       help="use the built-in leakage fixture")

    def add_experiment_flags(p):
        p.add_argument("--config", help="key=value experiment config file")
        p.add_argument("--dataset", help="dataset CSV path")
        p.add_argument("--column", help="dataset CSV column")
        p.add_argument("--fixture", action="store_true",
                       help="use the built-in leakage fixture")
        p.add_argument("--methods", help="comma list: emd,dwt,ssa")
        p.add_argument("--modes", help="comma list: raw,leaked,causal")
        p.add_argument("--models", help="comma list: persistence,ridge,mlp")
        p.add_argument("--seeds", type=int, help="number of repeated seeds")
        p.add_argument("--seed", type=int, help="base seed")
        p.add_argument("--window", type=int, help="model input window")
        p.add_argument("--train-fraction", dest="train_fraction", type=float)
        p.add_argument("--ridge-lambda", dest="ridge_lambda", type=float)
        p.add_argument("--refresh-stride", dest="refresh_stride", type=int)
        p.add_argument("--optimizer", choices=("adagrad", "adam"))
        p.add_argument("--learning-rate", dest="learning_rate", type=float)
        p.add_argument("--max-epochs", dest="max_epochs", type=int)
        p.add_argument("--patience", type=int)
        p.add_argument("--validation", choices=("random", "chronological"))
        p.add_argument("--loss", choices=("mse", "mae"))
        p.add_argument("--out", help="report output directory")

    p = sub.add_parser("synth", help="generate a synthetic series CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--length", type=int, default=2000)
    p.add_argument("--tones", help="amp:freq[:phase];... list")
    p.add_argument("--noise", choices=("white", "ar1"), default="white")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--ar-coef", dest="ar_coef", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixture", action="store_true", help="emit the standard leakage fixture")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("decompose", help="decompose a series into components CSV")
    add_series_source(p)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--out", required=True)
    p.add_argument("--ssa-window", dest="ssa_window", type=int)
    p.add_argument("--emd-max-imfs", dest="emd_max_imfs", type=int)
    p.add_argument("--emd-sd-threshold", dest="emd_sd_threshold", type=float)
    p.add_argument("--emd-max-sift", dest="emd_max_sift", type=int)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("spectrum", help="write a series' power spectrum CSV")
    add_series_source(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("run", help="run the leaked-vs-causal experiment grid")
    add_experiment_flags(p)
    p.add_argument("--workers", type=int, default=1,
                   help="parallel worker processes over seed chunks")
    p.add_argument("--track-test-loss", dest="track_test_loss",
                   choices=("leaked", "causal"))
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("ablate", help="per-component leaked ablation")
    add_experiment_flags(p)
    p.add_argument("--method", required=True, choices=METHODS)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("summation", help="per-component models, summed predictions")
    add_experiment_flags(p)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--causal", action="store_true",
                   help="use causal test features (default: leaked)")
    p.set_defaults(func=_cmd_summation)

    p = sub.add_parser("audit", help="print the leaked-vs-causal delta and verdict")
    add_experiment_flags(p)
    p.add_argument("--method", default="ssa", choices=METHODS)
    p.add_argument("--model", default="ridge", choices=("persistence", "ridge", "mlp"))
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("registry", help="list known datasets or verify a local file")
    p.add_argument("--name", help="registry entry to verify against")
    p.add_argument("--verify", help="local CSV to verify")
    p.add_argument("--column", help="CSV column name")
    p.set_defaults(func=_cmd_registry)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DecompAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
