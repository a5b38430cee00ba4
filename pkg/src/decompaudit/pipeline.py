"""Model-input construction under leaked and strictly-causal protocols.

The leaked protocol decomposes the entire series once and slices windows out
of the result, so pre-cutoff feature values were computed with knowledge of
the future. The causal protocol re-decomposes the prefix preceding each test
step, making every feature a function of past values only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decompose import ComponentSet, decompose
from .errors import InvalidConfigError, InvalidInputError
from .series import (
    MinMaxParams,
    SplitSpec,
    TimeSeries,
    WindowSpec,
    make_windows,
    minmax_apply,
    minmax_fit,
    minmax_invert,
)

RAW_LABEL = "raw"


@dataclass(frozen=True)
class PipelineMode:
    """Which feature pipeline produced a matrix/window stack."""

    kind: str  # "raw" | "leaked" | "causal" | "single" | "summation"
    method: str | None = None
    component: str | None = None
    leaked: bool = True

    def __post_init__(self):
        if self.kind not in ("raw", "leaked", "causal", "single", "summation"):
            raise InvalidConfigError(f"unknown pipeline mode kind {self.kind!r}")
        if self.kind != "raw" and self.method is None:
            raise InvalidConfigError(f"mode {self.kind!r} requires a decomposition method")
        if self.kind == "single" and self.component is None:
            raise InvalidConfigError("single-component mode requires a component label")

    @staticmethod
    def raw_only() -> "PipelineMode":
        return PipelineMode(kind="raw")

    @staticmethod
    def leaked_full(method: str) -> "PipelineMode":
        return PipelineMode(kind="leaked", method=method)

    @staticmethod
    def causal_full(method: str) -> "PipelineMode":
        return PipelineMode(kind="causal", method=method)

    @staticmethod
    def single_component(method: str, component: str, leaked: bool = True) -> "PipelineMode":
        return PipelineMode(kind="single", method=method, component=component, leaked=leaked)

    @staticmethod
    def summation(method: str, leaked: bool = True) -> "PipelineMode":
        return PipelineMode(kind="summation", method=method, leaked=leaked)

    def describe(self) -> str:
        if self.kind == "raw":
            return "raw"
        if self.kind in ("leaked", "causal"):
            return self.kind
        flavor = "leaked" if self.leaked else "causal"
        if self.kind == "single":
            return f"single[{self.component}]/{flavor}"
        return f"summation/{flavor}"


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-time-step stacked channels; channel 0 is always the raw series."""

    values: np.ndarray  # (n_steps, n_channels)
    labels: tuple[str, ...]
    mode: PipelineMode

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2:
            raise InvalidInputError(f"feature matrix must be 2-D, got {vals.shape}")
        if vals.shape[1] != len(self.labels):
            raise InvalidInputError(
                f"{vals.shape[1]} channels but {len(self.labels)} labels"
            )
        if self.labels and self.labels[0] != RAW_LABEL:
            raise InvalidInputError(f"channel 0 must be {RAW_LABEL!r}, got {self.labels[0]!r}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]

    def channel(self, label: str) -> np.ndarray:
        try:
            return self.values[:, self.labels.index(label)]
        except ValueError:
            raise InvalidConfigError(f"no channel labeled {label!r}") from None


@dataclass(frozen=True)
class WindowStack:
    """Stacked per-step model inputs: (n, W, C) windows and their targets."""

    inputs: np.ndarray
    targets: np.ndarray
    labels: tuple[str, ...]
    mode: PipelineMode

    def __post_init__(self):
        ins = np.asarray(self.inputs, dtype=float)
        tgt = np.asarray(self.targets, dtype=float)
        if ins.ndim != 3 or tgt.ndim != 1 or ins.shape[0] != tgt.size:
            raise InvalidInputError(
                f"window stack needs (n, W, C) inputs and (n,) targets, got "
                f"{ins.shape} / {tgt.shape}"
            )
        if ins.shape[2] != len(self.labels):
            raise InvalidInputError(f"{ins.shape[2]} channels but {len(self.labels)} labels")
        ins = ins.copy()
        ins.flags.writeable = False
        tgt = tgt.copy()
        tgt.flags.writeable = False
        object.__setattr__(self, "inputs", ins)
        object.__setattr__(self, "targets", tgt)

    @property
    def n_windows(self) -> int:
        return self.inputs.shape[0]


@dataclass(frozen=True)
class CausalScheduleConfig:
    """How often the causal pipeline refreshes its prefix decomposition.

    ``refresh_stride=1`` re-decomposes before every test step (exact protocol);
    larger strides reuse the most recent earlier-prefix decomposition, which
    stays causal but uses staler component values.
    """

    refresh_stride: int = 1

    def __post_init__(self):
        if self.refresh_stride < 1:
            raise InvalidConfigError(
                f"refresh_stride must be >= 1, got {self.refresh_stride}"
            )


def align_components(comps: ComponentSet, target_labels: tuple[str, ...]) -> np.ndarray:
    """Map a component set onto a fixed label layout.

    Labels present in both keep their rows; target labels absent from the
    source are zero-filled; leftover source components (extra trailing IMFs of
    a longer prefix) are folded into the target's 'Res' channel so the channel
    sum still reconstructs the parent series.
    """
    out = np.zeros((len(target_labels), comps.length))
    used = []
    for i, label in enumerate(target_labels):
        if label in comps.labels:
            out[i] = comps.component(label)
            used.append(label)
    leftovers = [lab for lab in comps.labels if lab not in used]
    if leftovers:
        if "Res" not in target_labels:
            raise InvalidConfigError(
                f"components {leftovers} do not fit the layout {target_labels}"
            )
        res_row = target_labels.index("Res")
        for lab in leftovers:
            out[res_row] += comps.component(lab)
    return out


def build_train_features(
    train: TimeSeries, method: str, config=None
) -> FeatureMatrix:
    """Decompose the training subsequence once; raw channel plus K components."""
    comps = decompose(train, method, config)
    values = np.column_stack([train.values, comps.components.T])
    labels = (RAW_LABEL, *comps.labels)
    return FeatureMatrix(values, labels, mode=PipelineMode.causal_full(method))


def train_windows(features: FeatureMatrix, wspec: WindowSpec) -> WindowStack:
    """One-step-ahead training pairs; the target is the raw channel's next value."""
    inputs, targets = make_windows(features.values, features.values[:, 0], wspec)
    return WindowStack(inputs, targets, features.labels, features.mode)


def build_test_features_leaked(
    full: TimeSeries, split: SplitSpec, method: str, config=None
) -> FeatureMatrix:
    """Decompose the ENTIRE series once (the leaked protocol's feature table)."""
    if len(full) != split.total_len:
        raise InvalidInputError("split does not describe this series")
    comps = decompose(full, method, config)
    values = np.column_stack([full.values, comps.components.T])
    return FeatureMatrix(values, (RAW_LABEL, *comps.labels), mode=PipelineMode.leaked_full(method))


def leaked_test_windows(
    full: TimeSeries,
    split: SplitSpec,
    wspec: WindowSpec,
    method: str,
    config=None,
    align_to: tuple[str, ...] | None = None,
) -> WindowStack:
    """Per-step leaked windows: rows [t-W, t-1] of the whole-series decomposition.

    ``align_to`` (a training feature layout) pins the channel order when the
    full-series decomposition yields a different component count.
    """
    if split.train_len < wspec.window:
        raise InvalidInputError(
            f"train length {split.train_len} shorter than window {wspec.window}"
        )
    comps = decompose(full, method, config)
    labels = align_to if align_to is not None else (RAW_LABEL, *comps.labels)
    aligned = align_components(comps, labels[1:])
    matrix = np.column_stack([full.values, aligned.T])

    p, q, w = split.train_len, split.total_len, wspec.window
    steps = np.arange(p, q)
    idx = steps[:, None] + np.arange(-w, 0)[None, :]
    inputs = matrix[idx]  # (n_test, W, C)
    targets = full.values[p:q]
    return WindowStack(inputs, targets, labels, PipelineMode.leaked_full(method))


def causal_window(
    full: TimeSeries,
    split: SplitSpec,
    wspec: WindowSpec,
    method: str,
    step: int,
    config=None,
    align_to: tuple[str, ...] | None = None,
    prefix_len: int | None = None,
) -> tuple[np.ndarray, float, tuple[str, ...]]:
    """Model input for one test step under the causal protocol.

    For test step ``step`` (0-based; target index t = train_len + step) the
    prefix x[0 : t] is decomposed and its trailing W rows form the component
    channels; the raw channel always holds the true values x[t-W : t]. A
    ``prefix_len`` shorter than t reuses a stale decomposition (still causal).
    Returns (window (W, C), target, labels).
    """
    p, q, w = split.train_len, split.total_len, wspec.window
    if not (0 <= step < q - p):
        raise InvalidConfigError(f"test step {step} out of range [0, {q - p})")
    t = p + step
    used_prefix = t if prefix_len is None else prefix_len
    if not (w <= used_prefix <= t):
        raise InvalidConfigError(
            f"prefix length {used_prefix} must lie in [{w}, {t}] for step {step}"
        )
    prefix = TimeSeries(full.values[:used_prefix], name=f"{full.name}[:{used_prefix}]")
    comps = decompose(prefix, method, config)
    labels = align_to if align_to is not None else (RAW_LABEL, *comps.labels)
    aligned = align_components(comps, labels[1:])
    window = np.empty((w, len(labels)))
    window[:, 0] = full.values[t - w : t]
    window[:, 1:] = aligned[:, used_prefix - w : used_prefix].T
    return window, float(full.values[t]), labels


def build_test_features_causal(
    full: TimeSeries,
    split: SplitSpec,
    wspec: WindowSpec,
    method: str,
    config=None,
    schedule: CausalScheduleConfig | None = None,
    align_to: tuple[str, ...] | None = None,
) -> WindowStack:
    """Per-step causal windows over the whole test split.

    Every feature value is a function of past data only; perturbing values at
    or after a step's target index cannot change that step's window.
    """
    sched = schedule if schedule is not None else CausalScheduleConfig()
    p, q = split.train_len, split.total_len
    n_test = q - p
    stride = sched.refresh_stride

    labels = align_to
    if labels is None:
        # fix the layout from the first prefix (identical to the training split)
        _, _, labels = causal_window(full, split, wspec, method, 0, config)

    windows = np.empty((n_test, wspec.window, len(labels)))
    targets = np.empty(n_test)
    for step in range(n_test):
        prefix_len = p + (step // stride) * stride
        window, target, _ = causal_window(
            full, split, wspec, method, step, config,
            align_to=labels, prefix_len=prefix_len,
        )
        windows[step] = window
        targets[step] = target
    return WindowStack(windows, targets, labels, PipelineMode.causal_full(method))


def raw_test_windows(
    full: TimeSeries, split: SplitSpec, wspec: WindowSpec
) -> WindowStack:
    """Per-step raw-only windows; trivially identical under both protocols."""
    if split.train_len < wspec.window:
        raise InvalidInputError(
            f"train length {split.train_len} shorter than window {wspec.window}"
        )
    p, q, w = split.train_len, split.total_len, wspec.window
    steps = np.arange(p, q)
    idx = steps[:, None] + np.arange(-w, 0)[None, :]
    inputs = full.values[idx][:, :, None]
    return WindowStack(inputs, full.values[p:q], (RAW_LABEL,), PipelineMode.raw_only())


def select_components(stack_or_matrix, mode: PipelineMode):
    """Restrict channels per the pipeline mode: raw keeps channel 0 only,
    single-component keeps {raw, that component}; full modes pass through."""
    labels = stack_or_matrix.labels
    if mode.kind in ("leaked", "causal", "summation"):
        return stack_or_matrix
    if mode.kind == "raw":
        keep = [0]
        new_labels = (RAW_LABEL,)
    else:  # single
        if mode.component not in labels:
            raise InvalidConfigError(
                f"component {mode.component!r} not among channels {labels}"
            )
        keep = [0, labels.index(mode.component)]
        new_labels = (RAW_LABEL, mode.component)
    if isinstance(stack_or_matrix, FeatureMatrix):
        return FeatureMatrix(stack_or_matrix.values[:, keep], new_labels, mode)
    if isinstance(stack_or_matrix, WindowStack):
        return WindowStack(
            stack_or_matrix.inputs[:, :, keep],
            stack_or_matrix.targets,
            new_labels,
            mode,
        )
    raise InvalidInputError(f"cannot select channels of {type(stack_or_matrix).__name__}")


@dataclass(frozen=True)
class ChannelScaler:
    """Per-channel min-max params fitted on training features only."""

    params: tuple[MinMaxParams, ...]
    labels: tuple[str, ...]

    @staticmethod
    def fit(features: FeatureMatrix) -> "ChannelScaler":
        params = tuple(minmax_fit(features.values[:, i]) for i in range(features.n_channels))
        return ChannelScaler(params=params, labels=features.labels)

    def _param_for(self, label: str) -> MinMaxParams:
        try:
            return self.params[self.labels.index(label)]
        except ValueError:
            raise InvalidConfigError(f"scaler has no channel {label!r}") from None

    def transform_matrix(self, features: FeatureMatrix) -> FeatureMatrix:
        cols = [
            minmax_apply(self._param_for(label), features.values[:, i])
            for i, label in enumerate(features.labels)
        ]
        return FeatureMatrix(np.column_stack(cols), features.labels, features.mode)

    def transform_stack(self, stack: WindowStack) -> WindowStack:
        """Scale inputs per channel label and targets with the raw channel params."""
        scaled = np.empty_like(stack.inputs)
        for i, label in enumerate(stack.labels):
            scaled[:, :, i] = minmax_apply(self._param_for(label), stack.inputs[:, :, i])
        targets = minmax_apply(self._param_for(RAW_LABEL), stack.targets)
        return WindowStack(scaled, targets, stack.labels, stack.mode)

    def scale_channel(self, label: str, values) -> np.ndarray:
        return minmax_apply(self._param_for(label), values)

    def invert_channel(self, label: str, values) -> np.ndarray:
        return minmax_invert(self._param_for(label), values)

    def invert_predictions(self, scaled_predictions) -> np.ndarray:
        """Map model outputs back to original units via the raw channel params."""
        return minmax_invert(self._param_for(RAW_LABEL), scaled_predictions)
