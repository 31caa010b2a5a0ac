"""Gaussian-kernel density and density-derivative estimation.

Conventions for the Gaussian kernel K(t) = exp(-t^2/2)/sqrt(2*pi):

    f_n(t)  = (1/n) sum_i (1/a)   K((t - Y_i)/a)
    f_n'(t) = (1/n) sum_i (1/a^2) K'((t - Y_i)/a)

The 1/a^2 scaling makes f_n' the exact derivative of f_n when both use
the same bandwidth.

Also provides the empirical CDF and the concentration machinery that
controls sup-norm deviations of f_n and f_n': the sharp DKW tail for the
empirical CDF and the derived tail for the kernel estimates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolationError
from .samples import SampleSet

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Max elements per broadcast block during kernel sums; keeps temporaries
# around 64 MB of float64.
_BLOCK_ELEMENTS = 8_000_000


class KernelKind(enum.Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel plus the constants its concentration bounds need.

    v0, v1 are the total variations of K' and K'' (equivalently, the
    integrals of |K'| and |K''|). bias_slope_r is the sup-norm bias of the
    r-th derivative estimate per unit bandwidth, for densities smoothed by
    standard Gaussian noise.
    """

    kind: KernelKind
    v0: float
    v1: float
    bias_slope_0: float
    bias_slope_1: float

    def __post_init__(self):
        if self.v0 <= 0 or self.v1 <= 0:
            raise ValueError("v0 and v1 must be positive")
        if self.bias_slope_0 < 0 or self.bias_slope_1 < 0:
            raise ValueError("bias slopes must be nonnegative")

    def bias_slope(self, r: int) -> float:
        return (self.bias_slope_0, self.bias_slope_1)[_check_order(r)]

    def total_variation(self, r: int) -> float:
        return (self.v0, self.v1)[_check_order(r)]


# |K''(t)| = |t^2 - 1| K(t) integrates to 2*sqrt(2/(e*pi)); the factor 2
# comes from the sign changes at t = +/-1.
GAUSSIAN_KERNEL = KernelSpec(
    kind=KernelKind.GAUSSIAN,
    v0=math.sqrt(2.0 / math.pi),
    v1=2.0 * math.sqrt(2.0 / (math.e * math.pi)),
    bias_slope_0=1.0 / math.sqrt(2.0 * math.pi * math.e),
    bias_slope_1=(2.0 / math.e + 1.0) / math.sqrt(2.0 * math.pi),
)


def _check_order(r: int) -> int:
    if r not in (0, 1):
        raise ValueError(f"derivative order r must be 0 or 1, got {r}")
    return r


def _check_bandwidth(a: float) -> float:
    a = float(a)
    if not (a > 0) or not math.isfinite(a):
        raise ValueError(f"bandwidth must be positive and finite, got {a}")
    return a


def _kernel_sums(values: np.ndarray, a: float, t: np.ndarray, want_deriv: bool):
    """Blocked evaluation of (f_n, f_n') on an array of points.

    Returns (density, derivative); derivative is None unless requested.
    The exponentials are shared between the two outputs.
    """
    n = values.size
    dens = np.empty_like(t)
    deriv = np.empty_like(t) if want_deriv else None
    block = max(1, _BLOCK_ELEMENTS // n)
    for i in range(0, t.size, block):
        u = (t[i : i + block, None] - values[None, :]) / a
        k = np.exp(-0.5 * u * u)
        dens[i : i + block] = k.sum(axis=1) / (n * a * _SQRT_2PI)
        if want_deriv:
            deriv[i : i + block] = (u * k).sum(axis=1) / (-n * a * a * _SQRT_2PI)
    return dens, deriv


def _eval(samples: SampleSet, a: float, t, want_deriv: bool):
    a = _check_bandwidth(a)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    dens, deriv = _kernel_sums(samples.values, a, t_arr, want_deriv)
    out = deriv if want_deriv else dens
    return float(out[0]) if np.isscalar(t) or np.ndim(t) == 0 else out


def kde_at(samples: SampleSet, a: float, t, kernel: KernelSpec = GAUSSIAN_KERNEL):
    """Kernel density estimate f_n(t); t may be a scalar or an array."""
    return _eval(samples, a, t, want_deriv=False)


def kde_deriv_at(samples: SampleSet, a: float, t, kernel: KernelSpec = GAUSSIAN_KERNEL):
    """Kernel estimate f_n'(t) of the density derivative."""
    return _eval(samples, a, t, want_deriv=True)


def kde_profile(
    samples: SampleSet,
    a0: float,
    a1: float,
    grid: np.ndarray,
    kernel: KernelSpec = GAUSSIAN_KERNEL,
):
    """(f_n, f_n') on a grid, sharing exponentials when a0 == a1."""
    a0 = _check_bandwidth(a0)
    a1 = _check_bandwidth(a1)
    grid = np.asarray(grid, dtype=float)
    if a0 == a1:
        dens, deriv = _kernel_sums(samples.values, a0, grid, want_deriv=True)
        return dens, deriv
    dens, _ = _kernel_sums(samples.values, a0, grid, want_deriv=False)
    _, deriv = _kernel_sums(samples.values, a1, grid, want_deriv=True)
    return dens, deriv


def empirical_cdf(samples: SampleSet, t) -> float | np.ndarray:
    """Fraction of samples <= t (right-continuous step function)."""
    sorted_vals = np.sort(samples.values)
    counts = np.searchsorted(sorted_vals, np.asarray(t, dtype=float), side="right")
    out = counts / samples.n
    return float(out) if np.ndim(t) == 0 else out


def dkw_tail(n: int, eps: float) -> float:
    """Sharp DKW bound 2*exp(-2*n*eps^2) on P[sup|F_n - F| > eps]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not eps > 0:
        raise ValueError("eps must be positive")
    return 2.0 * math.exp(-2.0 * n * eps * eps)


def sup_deviation_tail(
    r: int, n: int, a: float, eps: float, kernel: KernelSpec = GAUSSIAN_KERNEL
) -> float:
    """Tail bound on P[sup_t |f_n^{(r)}(t) - f^{(r)}(t)| > eps].

    Requires eps to exceed the deterministic bias delta = a * bias_slope_r;
    the stochastic part is then controlled through the DKW inequality:
    2 * exp(-2 n a^{2r+2} (eps - delta)^2 / v_r^2).
    """
    r = _check_order(r)
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _check_bandwidth(a)
    delta = a * kernel.bias_slope(r)
    if not eps > delta:
        raise HypothesisViolationError(
            f"need eps > delta_(r={r},a={a}) = {delta}; got eps = {eps}"
        )
    v = kernel.total_variation(r)
    exponent = 2.0 * n * a ** (2 * r + 2) * (eps - delta) ** 2 / (v * v)
    return 2.0 * math.exp(-exponent)
