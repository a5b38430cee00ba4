"""Experiment orchestration: the leaked-vs-causal grid, ablation, summation,
seed aggregation and deterministic report emission.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import load_csv
from .decompose import decompose, default_config
from .errors import DecompAuditError, InvalidConfigError, InvalidInputError
from .metrics import MetricsReport, compute_metrics, welch_t_test
from .models import (
    MlpParams,
    RidgeParams,
    TrainConfig,
    TrainingHistory,
    mlp_forward,
    ridge_fit,
    train_mlp,
)
from .pipeline import (
    ChannelScaler,
    PipelineMode,
    WindowStack,
    build_test_features_causal,
    build_train_features,
    leaked_test_windows,
    raw_test_windows,
    select_components,
    train_windows,
    CausalScheduleConfig,
    FeatureMatrix,
    RAW_LABEL,
)
from .series import TimeSeries, WindowSpec, make_windows, split_chronological
from .spectral import Spectrum, power_spectrum
from .synth import SyntheticSpec, gen_synthetic, standard_fixture_spec

TRAINABLE_MODELS = ("ridge", "mlp")
ALL_MODELS = ("persistence",) + TRAINABLE_MODELS
MODE_KINDS = ("raw", "leaked", "causal")
NO_METHOD = "none"


@dataclass(frozen=True)
class ExperimentConfig:
    """One declarative description of a full experiment grid."""

    synthetic: SyntheticSpec | None = None
    dataset_path: str | None = None
    dataset_column: str | int | None = None
    methods: tuple[str, ...] = ("ssa",)
    modes: tuple[str, ...] = MODE_KINDS
    models: tuple[str, ...] = ALL_MODELS
    train_fraction: float = 0.75
    window: int = 12
    n_seeds: int = 5
    base_seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)
    ridge_lambda: float = 1e-3
    refresh_stride: int = 1
    track_test_loss: str | None = None

    def __post_init__(self):
        if (self.synthetic is None) == (self.dataset_path is None):
            raise InvalidConfigError("provide exactly one of synthetic spec or dataset path")
        if not self.modes or not self.models:
            raise InvalidConfigError("need at least one mode and one model")
        for mode in self.modes:
            if mode not in MODE_KINDS:
                raise InvalidConfigError(f"unknown mode {mode!r}; expected {MODE_KINDS}")
        for model in self.models:
            if model not in ALL_MODELS:
                raise InvalidConfigError(f"unknown model {model!r}; expected {ALL_MODELS}")
        if self.n_seeds < 1:
            raise InvalidConfigError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if self.track_test_loss not in (None, "leaked", "causal"):
            raise InvalidConfigError("track_test_loss must be None, 'leaked' or 'causal'")
        if self.refresh_stride < 1:
            raise InvalidConfigError(f"refresh_stride must be >= 1, got {self.refresh_stride}")

    @property
    def dataset_name(self) -> str:
        if self.synthetic is not None:
            return self.synthetic.name
        return Path(self.dataset_path).stem

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(self.base_seed + i for i in range(self.n_seeds))

    def to_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["synthetic"] = dataclasses.asdict(self.synthetic) if self.synthetic else None
        doc["train"] = dataclasses.asdict(self.train)
        return doc


def fixture_experiment_config(**overrides) -> ExperimentConfig:
    """The default audit experiment on the standard leakage fixture."""
    base = dict(
        synthetic=standard_fixture_spec(),
        methods=("ssa",),
        modes=MODE_KINDS,
        models=ALL_MODELS,
        train=TrainConfig(optimizer="adam", learning_rate=1e-3),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    method: str
    mode: str
    model: str
    seed: int
    metrics: MetricsReport
    wall_time: float

    def key(self) -> tuple:
        return (self.dataset, self.method, self.mode, self.model, self.seed)


@dataclass(frozen=True)
class CellFailure:
    dataset: str
    method: str
    mode: str
    model: str
    seed: int
    error: str


@dataclass(frozen=True)
class AggregateRow:
    dataset: str
    method: str
    mode: str
    model: str
    mse_mean: float
    mse_std: float
    mae_mean: float
    mae_std: float
    mape_mean: float
    mape_std: float
    r2_mean: float | None
    r2_std: float | None
    p_vs_causal: float | None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ResultRow]
    failures: list[CellFailure]
    aggregates: list[AggregateRow]
    histories: dict[str, TrainingHistory]
    spectra: dict[str, Spectrum]


# ---------------------------------------------------------------------------
# grid execution


def load_experiment_series(cfg: ExperimentConfig) -> TimeSeries:
    if cfg.synthetic is not None:
        return gen_synthetic(cfg.synthetic)
    return load_csv(cfg.dataset_path, cfg.dataset_column)


def _fit_and_predict(
    model: str,
    train_stack: WindowStack,
    eval_stacks: dict[str, WindowStack],
    cfg: ExperimentConfig,
    seed: int,
    eval_for_history: WindowStack | None,
):
    """Train one model and return (scaled predictions per stack key, history)."""
    if model == "ridge":
        params = ridge_fit(train_stack.inputs, train_stack.targets, cfg.ridge_lambda)
        history = None
    elif model == "mlp":
        train_cfg = dataclasses.replace(cfg.train, seed=seed)
        eval_set = None
        if eval_for_history is not None:
            eval_set = (eval_for_history.inputs, eval_for_history.targets)
        params, history = train_mlp(train_stack.inputs, train_stack.targets, train_cfg, eval_set)
    else:
        raise InvalidConfigError(f"cannot train model {model!r}")
    preds = {key: params.predict(stack.inputs) for key, stack in eval_stacks.items()}
    return preds, history


def _persistence_metrics(stack: WindowStack) -> MetricsReport:
    preds = stack.inputs[:, -1, 0]
    return compute_metrics(stack.targets, preds)


def _prepare_raw(full, split, wspec):
    train_series = TimeSeries(full.values[: split.train_len], name=f"{full.name}[train]")
    fm = FeatureMatrix(train_series.values[:, None], (RAW_LABEL,), PipelineMode.raw_only())
    scaler = ChannelScaler.fit(fm)
    tr_stack = train_windows(scaler.transform_matrix(fm), wspec)
    test_unscaled = raw_test_windows(full, split, wspec)
    test_scaled = scaler.transform_stack(test_unscaled)
    return scaler, tr_stack, test_unscaled, test_scaled


def _prepare_method(full, split, wspec, method, cfg: ExperimentConfig):
    train_series = TimeSeries(full.values[: split.train_len], name=f"{full.name}[train]")
    fm = build_train_features(train_series, method)
    scaler = ChannelScaler.fit(fm)
    tr_stack = train_windows(scaler.transform_matrix(fm), wspec)
    stacks_unscaled: dict[str, WindowStack] = {}
    stacks_scaled: dict[str, WindowStack] = {}
    if "leaked" in cfg.modes:
        stack = leaked_test_windows(full, split, wspec, method, align_to=fm.labels)
        stacks_unscaled["leaked"] = stack
        stacks_scaled["leaked"] = scaler.transform_stack(stack)
    if "causal" in cfg.modes:
        stack = build_test_features_causal(
            full, split, wspec, method,
            schedule=CausalScheduleConfig(cfg.refresh_stride),
            align_to=fm.labels,
        )
        stacks_unscaled["causal"] = stack
        stacks_scaled["causal"] = scaler.transform_stack(stack)
    return fm, scaler, tr_stack, stacks_unscaled, stacks_scaled


def planned_cells(cfg: ExperimentConfig) -> list[tuple[str, str, str, int]]:
    """Every (method, mode, model, seed) cell the grid will produce.

    Raw-mode cells are method-independent and appear once per model; the
    persistence baseline ignores features entirely so it only has raw cells.
    """
    cells = []
    for seed in cfg.seeds:
        if "raw" in cfg.modes:
            for model in cfg.models:
                cells.append((NO_METHOD, "raw", model, seed))
        for method in cfg.methods:
            for mode in cfg.modes:
                if mode == "raw":
                    continue
                for model in cfg.models:
                    if model == "persistence":
                        continue
                    cells.append((method, mode, model, seed))
    return cells


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the full grid: build features per mode, train, evaluate one-step-ahead.

    Models are trained on the training-split decomposition (identical for the
    leaked and causal test protocols, which differ only in test-time features),
    so a (method, model, seed) cell pair shares its trained parameters. Any
    cell failure is recorded without aborting the rest of the grid.
    """
    full = load_experiment_series(cfg)
    _, _, split = split_chronological(full, cfg.train_fraction)
    wspec = WindowSpec(cfg.window)

    rows: list[ResultRow] = []
    failures: list[CellFailure] = []
    histories: dict[str, TrainingHistory] = {}
    name = cfg.dataset_name

    def record_failure(method, mode, model, seed, exc):
        failures.append(CellFailure(name, method, mode, model, seed, f"{type(exc).__name__}: {exc}"))

    if "raw" in cfg.modes:
        scaler, tr_stack, test_unscaled, test_scaled = _prepare_raw(full, split, wspec)
        for model in cfg.models:
            for seed in cfg.seeds:
                start = time.perf_counter()
                try:
                    if model == "persistence":
                        report = _persistence_metrics(test_unscaled)
                    else:
                        preds, history = _fit_and_predict(
                            model, tr_stack, {"raw": test_scaled}, cfg, seed, None
                        )
                        raw_preds = scaler.invert_predictions(preds["raw"])
                        report = compute_metrics(test_unscaled.targets, raw_preds)
                        if history is not None:
                            histories[f"{name}_raw_{model}_seed{seed}"] = history
                    rows.append(ResultRow(
                        name, NO_METHOD, "raw", model, seed, report,
                        time.perf_counter() - start,
                    ))
                except DecompAuditError as exc:
                    record_failure(NO_METHOD, "raw", model, seed, exc)

    test_modes = [m for m in cfg.modes if m != "raw"]
    for method in cfg.methods:
        if not test_modes:
            break
        try:
            fm, scaler, tr_stack, stacks_unscaled, stacks_scaled = _prepare_method(
                full, split, wspec, method, cfg
            )
        except DecompAuditError as exc:
            for mode in test_modes:
                for model in cfg.models:
                    if model == "persistence":
                        continue
                    for seed in cfg.seeds:
                        record_failure(method, mode, model, seed, exc)
            continue
        history_eval = None
        if cfg.track_test_loss in stacks_scaled:
            history_eval = stacks_scaled[cfg.track_test_loss]
        for model in cfg.models:
            if model == "persistence":
                continue
            for seed in cfg.seeds:
                start = time.perf_counter()
                try:
                    preds, history = _fit_and_predict(
                        model, tr_stack, stacks_scaled, cfg, seed, history_eval
                    )
                    if history is not None:
                        histories[f"{name}_{method}_{model}_seed{seed}"] = history
                    elapsed = time.perf_counter() - start
                    for mode in test_modes:
                        raw_preds = scaler.invert_predictions(preds[mode])
                        report = compute_metrics(stacks_unscaled[mode].targets, raw_preds)
                        rows.append(ResultRow(name, method, mode, model, seed, report, elapsed))
                except DecompAuditError as exc:
                    for mode in test_modes:
                        record_failure(method, mode, model, seed, exc)

    rows.sort(key=lambda r: r.key())
    aggregates = aggregate_rows(rows)
    spectra = component_spectra(full, cfg.methods)
    return ExperimentResult(cfg, rows, failures, aggregates, histories, spectra)


def aggregate_rows(rows: list[ResultRow]) -> list[AggregateRow]:
    """Per-cell mean/std over seeds plus Welch p between leaked and causal."""
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.dataset, row.method, row.mode, row.model), []).append(row)

    def stats(values):
        arr = np.asarray(values, dtype=float)
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        return float(arr.mean()), std

    aggregates = []
    for key in sorted(groups):
        dataset, method, mode, model = key
        group = sorted(groups[key], key=lambda r: r.seed)
        mse_mean, mse_std = stats([r.metrics.mse for r in group])
        mae_mean, mae_std = stats([r.metrics.mae for r in group])
        mape_mean, mape_std = stats([r.metrics.mape for r in group])
        r2_values = [r.metrics.r2 for r in group]
        if any(v is None for v in r2_values):
            r2_mean = r2_std = None
        else:
            r2_mean, r2_std = stats(r2_values)
        p_value = None
        if mode == "leaked":
            causal = groups.get((dataset, method, "causal", model))
            if causal and len(group) >= 2 and len(causal) >= 2:
                causal = sorted(causal, key=lambda r: r.seed)
                _, p_value = welch_t_test(
                    [r.metrics.mse for r in group],
                    [r.metrics.mse for r in causal],
                )
        aggregates.append(AggregateRow(
            dataset, method, mode, model,
            mse_mean, mse_std, mae_mean, mae_std, mape_mean, mape_std,
            r2_mean, r2_std, p_value,
        ))
    return aggregates


def component_spectra(full: TimeSeries, methods) -> dict[str, Spectrum]:
    """Power spectrum of every component of every method's full decomposition."""
    spectra: dict[str, Spectrum] = {}
    for method in methods:
        comps = decompose(full, method)
        for label, component in zip(comps.labels, comps.components):
            spectra[f"{method}_{label}"] = power_spectrum(component)
    return spectra


# ---------------------------------------------------------------------------
# ablation (per-component leaked contribution)


@dataclass
class AblationResult:
    config: ExperimentConfig
    method: str
    rows: list[ResultRow]
    failures: list[CellFailure]
    aggregates: list[AggregateRow]
    error_reduction: dict[tuple[str, str], float]  # (model, component) -> fraction
    component_frequency: dict[str, float]  # component label -> dominant frequency


def run_ablation(cfg: ExperimentConfig, method: str) -> AblationResult:
    """Leaked single-component cells ({raw, component k}) plus a raw reference.

    The error reduction of component k is 1 - mse_k / mse_raw per model, with
    means over seeds. The raw reference cell reuses the grid's seeds, so it is
    bit-identical to the corresponding run_experiment cell.
    """
    from .spectral import dominant_frequency

    full = load_experiment_series(cfg)
    _, _, split = split_chronological(full, cfg.train_fraction)
    wspec = WindowSpec(cfg.window)
    name = cfg.dataset_name
    models = [m for m in cfg.models if m != "persistence"]
    if not models:
        raise InvalidConfigError("ablation needs at least one trainable model")

    rows: list[ResultRow] = []
    failures: list[CellFailure] = []

    # raw reference cells
    scaler_raw, tr_raw, test_raw_unscaled, test_raw_scaled = _prepare_raw(full, split, wspec)
    for model in models:
        for seed in cfg.seeds:
            start = time.perf_counter()
            try:
                preds, _ = _fit_and_predict(model, tr_raw, {"raw": test_raw_scaled}, cfg, seed, None)
                report = compute_metrics(
                    test_raw_unscaled.targets, scaler_raw.invert_predictions(preds["raw"])
                )
                rows.append(ResultRow(name, NO_METHOD, "raw", model, seed, report,
                                      time.perf_counter() - start))
            except DecompAuditError as exc:
                failures.append(CellFailure(name, NO_METHOD, "raw", model, seed,
                                            f"{type(exc).__name__}: {exc}"))

    # single-component leaked cells
    train_series = TimeSeries(full.values[: split.train_len], name=f"{full.name}[train]")
    fm = build_train_features(train_series, method)
    scaler = ChannelScaler.fit(fm)
    fm_scaled = scaler.transform_matrix(fm)
    leaked = leaked_test_windows(full, split, wspec, method, align_to=fm.labels)
    leaked_scaled = scaler.transform_stack(leaked)

    component_labels = fm.labels[1:]
    frequencies = {
        label: dominant_frequency(fm.channel(label)) for label in component_labels
    }

    for label in component_labels:
        mode = PipelineMode.single_component(method, label, leaked=True)
        tr_stack = train_windows(select_components(fm_scaled, mode), wspec)
        test_scaled = select_components(leaked_scaled, mode)
        for model in models:
            for seed in cfg.seeds:
                start = time.perf_counter()
                try:
                    preds, _ = _fit_and_predict(model, tr_stack, {"t": test_scaled}, cfg, seed, None)
                    report = compute_metrics(
                        leaked.targets, scaler.invert_predictions(preds["t"])
                    )
                    rows.append(ResultRow(name, method, mode.describe(), model, seed, report,
                                          time.perf_counter() - start))
                except DecompAuditError as exc:
                    failures.append(CellFailure(name, method, mode.describe(), model, seed,
                                                f"{type(exc).__name__}: {exc}"))

    rows.sort(key=lambda r: r.key())
    aggregates = aggregate_rows(rows)

    def mean_mse(method_key, mode_key, model):
        vals = [r.metrics.mse for r in rows
                if r.method == method_key and r.mode == mode_key and r.model == model]
        return float(np.mean(vals)) if vals else None

    error_reduction = {}
    for model in models:
        raw_mse = mean_mse(NO_METHOD, "raw", model)
        if raw_mse is None or raw_mse == 0:
            continue
        for label in component_labels:
            mode_key = PipelineMode.single_component(method, label, leaked=True).describe()
            comp_mse = mean_mse(method, mode_key, model)
            if comp_mse is not None:
                error_reduction[(model, label)] = 1.0 - comp_mse / raw_mse

    return AblationResult(cfg, method, rows, failures, aggregates, error_reduction, frequencies)


# ---------------------------------------------------------------------------
# component summation (one model per component, predictions summed)


@dataclass
class SummationResult:
    config: ExperimentConfig
    method: str
    leaked: bool
    rows: list[ResultRow]
    aggregates: list[AggregateRow]
    n_models: int


def run_summation(cfg: ExperimentConfig, method: str, leaked: bool = True) -> SummationResult:
    """Train one model per component; the forecast is the sum of their predictions.

    Each component model learns to predict its own component's next value from
    that component's window; predictions are inverse-scaled per component,
    summed, and evaluated against the raw truth.
    """
    full = load_experiment_series(cfg)
    _, _, split = split_chronological(full, cfg.train_fraction)
    wspec = WindowSpec(cfg.window)
    name = cfg.dataset_name
    models = [m for m in cfg.models if m != "persistence"]
    if not models:
        raise InvalidConfigError("summation needs at least one trainable model")

    train_series = TimeSeries(full.values[: split.train_len], name=f"{full.name}[train]")
    fm = build_train_features(train_series, method)
    scaler = ChannelScaler.fit(fm)
    fm_scaled = scaler.transform_matrix(fm)
    if leaked:
        test_stack = leaked_test_windows(full, split, wspec, method, align_to=fm.labels)
    else:
        test_stack = build_test_features_causal(
            full, split, wspec, method,
            schedule=CausalScheduleConfig(cfg.refresh_stride), align_to=fm.labels,
        )
    test_scaled = scaler.transform_stack(test_stack)

    component_labels = fm.labels[1:]
    mode = PipelineMode.summation(method, leaked=leaked)

    rows: list[ResultRow] = []
    for model in models:
        for seed in cfg.seeds:
            start = time.perf_counter()
            total = np.zeros(test_stack.n_windows)
            for label in component_labels:
                idx = fm.labels.index(label)
                channel = fm_scaled.values[:, idx]
                inputs, targets = make_windows(channel, channel, wspec)
                if model == "ridge":
                    params = ridge_fit(inputs, targets, cfg.ridge_lambda)
                else:
                    params, _ = train_mlp(
                        inputs, targets, dataclasses.replace(cfg.train, seed=seed)
                    )
                comp_pred = params.predict(test_scaled.inputs[:, :, idx : idx + 1])
                total += scaler.invert_channel(label, comp_pred)
            report = compute_metrics(test_stack.targets, total)
            rows.append(ResultRow(name, method, mode.describe(), model, seed, report,
                                  time.perf_counter() - start))

    rows.sort(key=lambda r: r.key())
    return SummationResult(cfg, method, leaked, rows, aggregate_rows(rows),
                           n_models=len(component_labels))


# ---------------------------------------------------------------------------
# leakage audit verdict


@dataclass(frozen=True)
class AuditVerdict:
    method: str
    model: str
    raw_mse: float | None
    leaked_mse: float
    causal_mse: float
    reduction_vs_causal: float
    p_value: float | None
    suspicious: bool

    def summary(self) -> str:
        lines = [
            f"method={self.method} model={self.model}",
            f"  leaked  MSE: {self.leaked_mse:.6g}",
            f"  causal  MSE: {self.causal_mse:.6g}",
        ]
        if self.raw_mse is not None:
            lines.append(f"  raw     MSE: {self.raw_mse:.6g}")
        lines.append(f"  leaked vs causal reduction: {100 * self.reduction_vs_causal:.1f}%")
        if self.p_value is not None:
            lines.append(f"  Welch two-sided p: {self.p_value:.3g}")
        if self.suspicious:
            lines.append(
                "  VERDICT: leakage likely - whole-series decomposition inflates accuracy;"
                " re-decompose per step using only past data."
            )
        else:
            lines.append("  VERDICT: no significant leaked-vs-causal gap detected.")
        return "\n".join(lines)


def audit_leakage(cfg: ExperimentConfig, method: str, model: str = "ridge") -> AuditVerdict:
    """Quantify the leaked-vs-causal accuracy gap for one method and model."""
    audit_cfg = dataclasses.replace(
        cfg, methods=(method,), modes=MODE_KINDS,
        models=(model,) if model == "persistence" else ("persistence", model),
    )
    result = run_experiment(audit_cfg)

    def cell_mse(method_key, mode_key):
        for agg in result.aggregates:
            if agg.method == method_key and agg.mode == mode_key and agg.model == model:
                return agg
        return None

    leaked = cell_mse(method, "leaked")
    causal = cell_mse(method, "causal")
    raw = cell_mse(NO_METHOD, "raw")
    if leaked is None or causal is None:
        raise InvalidInputError("audit needs both leaked and causal cells to finish")
    reduction = 1.0 - leaked.mse_mean / causal.mse_mean if causal.mse_mean > 0 else 0.0
    p_value = leaked.p_vs_causal
    suspicious = reduction >= 0.10 and (p_value is None or p_value < 0.01)
    return AuditVerdict(
        method=method,
        model=model,
        raw_mse=raw.mse_mean if raw else None,
        leaked_mse=leaked.mse_mean,
        causal_mse=causal.mse_mean,
        reduction_vs_causal=reduction,
        p_value=p_value,
        suspicious=suspicious,
    )


# ---------------------------------------------------------------------------
# report emission


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def emit_reports(result: ExperimentResult, out_dir) -> list[Path]:
    """Write result, aggregate, history and spectrum CSVs plus a manifest.

    Output bytes are a pure function of the experiment result: rows are sorted,
    floats use shortest round-trip repr, and no timestamps are embedded, so
    re-running the same manifest reproduces byte-identical files.
    """
    if not result.rows:
        raise InvalidInputError("no result rows to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    results_path = out / "results.csv"
    _write_csv(
        results_path,
        ["dataset", "method", "mode", "model", "seed", "mse", "mae", "mape", "r2", "n"],
        [
            [r.dataset, r.method, r.mode, r.model, r.seed,
             r.metrics.mse, r.metrics.mae, r.metrics.mape, r.metrics.r2, r.metrics.n]
            for r in sorted(result.rows, key=lambda r: r.key())
        ],
    )
    written.append(results_path)

    aggregate_path = out / "aggregate.csv"
    _write_csv(
        aggregate_path,
        ["dataset", "method", "mode", "model",
         "mse_mean", "mse_std", "mae_mean", "mae_std",
         "mape_mean", "mape_std", "r2_mean", "r2_std", "p_vs_causal"],
        [
            [a.dataset, a.method, a.mode, a.model,
             a.mse_mean, a.mse_std, a.mae_mean, a.mae_std,
             a.mape_mean, a.mape_std, a.r2_mean, a.r2_std, a.p_vs_causal]
            for a in result.aggregates
        ],
    )
    written.append(aggregate_path)

    if result.failures:
        failures_path = out / "failures.csv"
        _write_csv(
            failures_path,
            ["dataset", "method", "mode", "model", "seed", "error"],
            [[f.dataset, f.method, f.mode, f.model, f.seed, f.error.replace(",", ";")]
             for f in result.failures],
        )
        written.append(failures_path)

    for key in sorted(result.histories):
        history = result.histories[key]
        path = out / f"history_{key}.csv"
        header = ["epoch", "train_loss", "val_loss"]
        rows = [
            [epoch, history.train_loss[epoch], history.val_loss[epoch]]
            for epoch in range(history.n_epochs)
        ]
        if history.test_loss is not None:
            header.append("test_loss")
            for epoch, row in enumerate(rows):
                row.append(history.test_loss[epoch])
        _write_csv(path, header, rows)
        written.append(path)

    for key in sorted(result.spectra):
        spectrum = result.spectra[key]
        path = out / f"spectrum_{key}.csv"
        _write_csv(
            path,
            ["frequency", "power"],
            [[float(f), float(p)] for f, p in zip(spectrum.frequencies, spectrum.power)],
        )
        written.append(path)

    config_doc = result.config.to_dict()
    config_json = json.dumps(config_doc, sort_keys=True)
    manifest = {
        "config": config_doc,
        "config_sha256": hashlib.sha256(config_json.encode()).hexdigest(),
        "versions": {
            "decompaudit": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "row_count": len(result.rows),
        "failure_count": len(result.failures),
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    written.append(manifest_path)
    return written
