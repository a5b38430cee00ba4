"""Signal decomposition methods producing same-length components that sum to the input."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfigError, InvalidInputError
from ..series import TimeSeries

METHODS = ("emd", "dwt", "ssa")


@dataclass(frozen=True)
class ComponentSet:
    """K decomposed subsequences aligned to the parent series.

    ``components`` is (K, N); every row has the parent length and the
    element-wise sum of rows reconstructs the parent series.
    """

    components: np.ndarray
    labels: tuple[str, ...]
    method: str

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        if comps.ndim != 2:
            raise InvalidInputError(f"components must be (K, N), got shape {comps.shape}")
        if comps.shape[0] != len(self.labels):
            raise InvalidInputError(
                f"{comps.shape[0]} components but {len(self.labels)} labels"
            )
        comps = comps.copy()
        comps.flags.writeable = False
        object.__setattr__(self, "components", comps)

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def length(self) -> int:
        return self.components.shape[1]

    def reconstruction(self) -> np.ndarray:
        """Element-wise sum of all components."""
        return self.components.sum(axis=0)

    def component(self, label: str) -> np.ndarray:
        try:
            return self.components[self.labels.index(label)]
        except ValueError:
            raise InvalidConfigError(f"no component labeled {label!r}") from None


def decompose(series: TimeSeries, method: str, config=None) -> ComponentSet:
    """Decompose a series with the named method ('emd', 'dwt' or 'ssa').

    The extra method 'identity' returns the input as its single component; it
    is a strictly causal pass-through useful as a leak-free reference.
    """
    from . import dwt, emd, ssa

    if method == "emd":
        return emd.emd_decompose(series, config)
    if method == "dwt":
        return dwt.dwt_decompose(series, config)
    if method == "ssa":
        return ssa.ssa_decompose(series, config)
    if method == "identity":
        return ComponentSet(series.values[None, :], labels=("ID1",), method="identity")
    raise InvalidConfigError(f"unknown decomposition method {method!r}; expected one of {METHODS}")


def default_config(method: str):
    from . import dwt, emd, ssa

    if method == "emd":
        return emd.EmdConfig()
    if method == "dwt":
        return dwt.DwtConfig()
    if method == "ssa":
        return ssa.SsaConfig()
    raise InvalidConfigError(f"unknown decomposition method {method!r}; expected one of {METHODS}")
