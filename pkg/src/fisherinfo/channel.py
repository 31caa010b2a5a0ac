"""Gaussian-noise channel Y = sqrt(snr)*X + Z: sampling and ground truth.

Two built-in input laws have closed-form Fisher information and MMSE and
serve as oracles: a standard Gaussian input and a symmetric binary input
on {-1, +1}. Arbitrary inputs are supported for sampling only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedOracleError
from .samples import SampleSet

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Gauss-Hermite rule used for the binary-input MMSE integral.
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(61)


class InputLaw(enum.Enum):
    GAUSSIAN_STD = "gaussian"
    BINARY_PM1 = "binary"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ChannelModel:
    """Input law, SNR, and the input moments the error bounds need.

    alpha is a sub-Gaussian proxy for |X|; both built-in inputs have
    alpha = 1.
    """

    input: InputLaw
    snr: float
    alpha: float = 1.0
    variance: float = 1.0
    second_moment: float = 1.0
    sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None

    def __post_init__(self):
        if not self.snr >= 0:
            raise ValueError("snr must be nonnegative")
        if self.variance < 0 or self.second_moment < self.variance:
            raise ValueError("need second_moment >= variance >= 0")
        if self.input is InputLaw.CUSTOM and self.sampler is None:
            raise ValueError("CUSTOM input requires a sampler")

    def to_config_dict(self) -> dict:
        return {
            "input": self.input.value,
            "snr": self.snr,
            "alpha": self.alpha,
            "variance": self.variance,
            "second_moment": self.second_moment,
        }

    @classmethod
    def from_config_dict(cls, d: dict) -> "ChannelModel":
        known = {"input", "snr", "alpha", "variance", "second_moment"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown channel keys: {sorted(unknown)}")
        if "input" not in d or "snr" not in d:
            raise ValueError("channel config requires 'input' and 'snr'")
        law = InputLaw(d["input"])
        if law is InputLaw.CUSTOM:
            raise ValueError("CUSTOM channels cannot be built from a config file")
        kwargs = {k: float(d[k]) for k in known & set(d) if k != "input"}
        return cls(input=law, **kwargs)


def gaussian_channel(snr: float) -> ChannelModel:
    return ChannelModel(InputLaw.GAUSSIAN_STD, snr=snr)


def binary_channel(snr: float) -> ChannelModel:
    return ChannelModel(InputLaw.BINARY_PM1, snr=snr)


def _rng(seed: int) -> np.random.Generator:
    # Counter-based generator: streams for distinct seeds are independent,
    # which makes per-trial seed derivation (seed ^ trial) parallel-safe.
    return np.random.Generator(np.random.Philox(seed))


def trial_seed(master_seed: int, trial: int) -> int:
    return int(master_seed) ^ int(trial)


def sample_channel(model: ChannelModel, n: int, seed: int) -> SampleSet:
    """Draw n i.i.d. observations of sqrt(snr)*X + Z, reproducibly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _rng(seed)
    if model.input is InputLaw.GAUSSIAN_STD:
        x = gen.standard_normal(n)
    elif model.input is InputLaw.BINARY_PM1:
        x = gen.integers(0, 2, size=n) * 2.0 - 1.0
    else:
        x = np.asarray(model.sampler(gen, n), dtype=float)
        if x.shape != (n,):
            raise ValueError("custom sampler must return shape (n,)")
    z = gen.standard_normal(n)
    y = math.sqrt(model.snr) * x + z
    return SampleSet(y, seed=seed, source=f"{model.input.value} channel, snr={model.snr}")


def _require_builtin(model: ChannelModel):
    if model.input is InputLaw.CUSTOM:
        raise UnsupportedOracleError(
            "no closed-form ground truth for CUSTOM input laws"
        )


def true_mmse(model: ChannelModel) -> float:
    """Minimum mean squared error of estimating X from Y."""
    _require_builtin(model)
    snr = model.snr
    if model.input is InputLaw.GAUSSIAN_STD:
        return 1.0 / (1.0 + snr)
    # Binary input: the conditional mean is tanh(sqrt(snr)*y), which gives
    # mmse = 1 - E[tanh(snr - sqrt(snr)*Z)]. Gauss-Hermite in z = y/sqrt(2).
    g = np.tanh(snr - math.sqrt(snr) * math.sqrt(2.0) * _GH_NODES)
    return float(1.0 - (_GH_WEIGHTS @ g) / math.sqrt(math.pi))


def true_fisher(model: ChannelModel) -> float:
    """Fisher information for location of the output density f_Y."""
    _require_builtin(model)
    snr = model.snr
    if model.input is InputLaw.GAUSSIAN_STD:
        return 1.0 / (1.0 + snr)
    return 1.0 - snr * true_mmse(model)


def true_density(model: ChannelModel, t):
    """Closed-form output density f_Y(t); t scalar or array."""
    _require_builtin(model)
    snr = model.snr
    t = np.asarray(t, dtype=float)
    if model.input is InputLaw.GAUSSIAN_STD:
        var = 1.0 + snr
        out = np.exp(-0.5 * t * t / var) / (_SQRT_2PI * math.sqrt(var))
    else:
        m = math.sqrt(snr)
        out = 0.5 * (
            np.exp(-0.5 * (t - m) ** 2) + np.exp(-0.5 * (t + m) ** 2)
        ) / _SQRT_2PI
    return float(out) if out.ndim == 0 else out


def true_density_deriv(model: ChannelModel, t):
    """Closed-form derivative f_Y'(t)."""
    _require_builtin(model)
    snr = model.snr
    t = np.asarray(t, dtype=float)
    if model.input is InputLaw.GAUSSIAN_STD:
        var = 1.0 + snr
        out = -t / var * np.exp(-0.5 * t * t / var) / (_SQRT_2PI * math.sqrt(var))
    else:
        m = math.sqrt(snr)
        out = 0.5 * (
            -(t - m) * np.exp(-0.5 * (t - m) ** 2)
            - (t + m) * np.exp(-0.5 * (t + m) ** 2)
        ) / _SQRT_2PI
    return float(out) if out.ndim == 0 else out


def true_score(model: ChannelModel, t):
    """Score f_Y'/f_Y of the output density."""
    return true_density_deriv(model, t) / true_density(model, t)
