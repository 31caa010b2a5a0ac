"""Finite-sample error bounds and sample-complexity optimization.

Everything here is deterministic arithmetic on the bound formulas for the
plug-in (Bhattacharya) and clipped Fisher-information estimators under
Gaussian-noise data:

* deterministic error bounds given sup-norm estimation errors (eps0, eps1)
  on the density and its derivative over [-k_n, k_n];
* the Gaussian-channel constants (inverse-density envelope phi, score
  envelope rho_max, kernel bias slopes, tail mass c(k_n));
* precision/confidence schedules for the specific bandwidth and
  truncation growth rates a = n^-w, k_n = sqrt(u log n) (plug-in) and
  a_r = n^-w_r, k_n = n^u (clipped);
* a numeric search for the smallest sample size guaranteeing a target
  precision with a target confidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import ChannelModel, InputLaw, true_score
from .errors import HypothesisViolationError, InfeasibleTargetError
from .estimators import EstimatorKind
from .kernels import GAUSSIAN_KERNEL
from .quadrature import integrate

_SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class ErrorBudget:
    """Sup-norm errors on f and f', target precision, and failure probability."""

    eps0: float
    eps1: float
    eps_n: float
    p_err: float

    def __post_init__(self):
        for name in ("eps0", "eps1", "eps_n", "p_err"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.p_err < 1:
            raise ValueError("p_err must be < 1")


@dataclass(frozen=True)
class TailModel:
    """Envelopes and tail functionals of the (unknown) sampled density.

    phi bounds 1/f on [-x, x]; rho_bar bounds |f'/f| pointwise; rho_max(k)
    bounds sup_{|t|<=k} |f'/f|; c_tail(k) bounds the Fisher-information
    mass outside [-k, k].
    """

    phi: Callable[[float], float]
    rho_bar: Callable[[np.ndarray], np.ndarray]
    rho_max: Callable[[float], float]
    c_tail: Callable[[float], float]
    f0: float | None = None
    alpha: float | None = None
    second_moment: float | None = None
    variance: float | None = None


@dataclass(frozen=True)
class ZeroCount:
    """Number of zeros of a derivative on [-interval_half_width, ...]."""

    count: int
    tolerance: float
    interval_half_width: float

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class GaussianBoundConstants:
    """The constants entering the Gaussian-channel precision/confidence
    schedules, fully determined by (snr, Var(X), E[X^2], alpha)."""

    snr: float
    variance: float
    second_moment: float
    alpha: float | None = None
    # Optional exponents carried along when a schedule has been chosen.
    u: float | None = None
    w: float | None = None
    w0: float | None = None
    w1: float | None = None

    def __post_init__(self):
        if not self.snr > 0:
            raise ValueError("snr must be positive")
        if self.variance < 0 or self.second_moment < self.variance:
            raise ValueError("need second_moment >= variance >= 0")

    @property
    def c1(self) -> float:
        return math.pi * (1.0 - 1.0 / math.sqrt(2.0 * math.pi * math.e)) ** 2

    @property
    def c2(self) -> float:
        return (
            math.e
            * math.pi
            * (1.0 - (2.0 / math.e + 1.0) / math.sqrt(2.0 * math.pi)) ** 2
        )

    @property
    def c3(self) -> float:
        return math.sqrt(3.0 * self.snr * self.variance)

    @property
    def c4(self) -> float:
        return (
            2.0
            * math.sqrt(math.gamma(1.5))
            * math.sqrt(self.snr * self.second_moment + 1.0)
            / math.pi**0.25
        )

    @property
    def c5(self) -> float:
        return _SQRT_2PI * math.exp(self.snr * self.second_moment)

    @property
    def c6(self) -> float:
        if self.alpha is None:
            raise ValueError("c6 requires a sub-Gaussian proxy alpha")
        return (
            2.0**1.5
            * math.sqrt(math.gamma(1.5))
            * math.exp(self.alpha**2 * self.snr / 4.0)
            / math.pi**0.25
        )

    @classmethod
    def for_channel(cls, model: ChannelModel, **exponents) -> "GaussianBoundConstants":
        return cls(
            snr=model.snr,
            variance=model.variance,
            second_moment=model.second_moment,
            alpha=model.alpha,
            **exponents,
        )


# ---------------------------------------------------------------------------
# Gaussian-channel envelopes


@dataclass(frozen=True)
class GaussianChannelEnvelopes:
    """Kernel bias slopes, kernel total variations, and the density/score
    envelopes valid for any finite-variance input in Gaussian noise."""

    delta_slope_0: float
    delta_slope_1: float
    v0: float
    v1: float
    rho_max: Callable[[float], float]
    phi: Callable[[float], float]
    fisher_upper: float


def lemma1_constants(
    snr: float, variance: float, second_moment: float
) -> GaussianChannelEnvelopes:
    """Envelopes for a Gaussian-kernel estimate of a Gaussian-noise density.

    rho_max(k) = sqrt(3*snr*Var(X)) + 3k, phi(t) = sqrt(2*pi) *
    exp(t^2 + snr*E[X^2]); the Fisher information of the output never
    exceeds 1 (the pure-noise value).
    """
    if snr < 0 or variance < 0 or second_moment < variance:
        raise ValueError("need snr >= 0 and second_moment >= variance >= 0")
    c = math.sqrt(3.0 * snr * variance)
    shift = snr * second_moment
    return GaussianChannelEnvelopes(
        delta_slope_0=GAUSSIAN_KERNEL.bias_slope_0,
        delta_slope_1=GAUSSIAN_KERNEL.bias_slope_1,
        v0=GAUSSIAN_KERNEL.v0,
        v1=GAUSSIAN_KERNEL.v1,
        rho_max=lambda k: c + 3.0 * k,
        phi=lambda t: _SQRT_2PI * np.exp(np.asarray(t) ** 2 + shift),
        fisher_upper=1.0,
    )


_V_GRID = np.arange(0.05, 5.0 + 1e-12, 0.05)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _lemma2_objective(v: np.ndarray, log_base: float) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    prefactor = (
        2.0
        * np.vectorize(math.gamma)(v + 0.5) ** (1.0 / (1.0 + v))
        / math.pi ** (1.0 / (2.0 * (1.0 + v)))
    )
    return prefactor * np.exp(v / (1.0 + v) * log_base)


def _minimize_over_v(log_base: float, v_grid: np.ndarray) -> float:
    vals = _lemma2_objective(v_grid, log_base)
    i = int(np.argmin(vals))
    lo = v_grid[max(i - 1, 0)]
    hi = v_grid[min(i + 1, v_grid.size - 1)]
    # Golden-section refinement; the objective is smooth and unimodal in
    # practice on this bracket.
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = float(_lemma2_objective(x1, log_base))
    f2 = float(_lemma2_objective(x2, log_base))
    for _ in range(60):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = float(_lemma2_objective(x1, log_base))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = float(_lemma2_objective(x2, log_base))
    return min(f1, f2, float(vals[i]))


def lemma2_tail(
    k_n: float,
    snr: float,
    second_moment: float,
    alpha: float | None = None,
    v_search_grid: np.ndarray | None = None,
) -> float:
    """Upper bound on the Fisher-information mass outside [-k_n, k_n].

    Minimizes over the Holder exponent v > 0. Always evaluates the
    second-moment branch; when a sub-Gaussian proxy alpha is given, also
    evaluates the Chernoff branch and returns the smaller. The result may
    exceed 1 and is returned as-is.
    """
    if not k_n > 0:
        raise ValueError("k_n must be positive")
    grid = _V_GRID if v_search_grid is None else np.asarray(v_search_grid, float)
    best = _minimize_over_v(
        math.log((snr * second_moment + 1.0) / k_n**2), grid
    )
    if alpha is not None:
        sub_g = _minimize_over_v(
            math.log(2.0) + (alpha**2 * snr - k_n**2) / 2.0, grid
        )
        best = min(best, sub_g)
    return best


def gaussian_tail_model(
    snr: float,
    variance: float,
    second_moment: float,
    alpha: float | None = None,
    f0: float | None = None,
) -> TailModel:
    """TailModel for an arbitrary input in standard Gaussian noise."""
    env = lemma1_constants(snr, variance, second_moment)
    return TailModel(
        phi=env.phi,
        rho_bar=lambda t: env.rho_max(0.0) + 3.0 * np.abs(t),
        rho_max=env.rho_max,
        c_tail=lambda k: lemma2_tail(k, snr, second_moment, alpha),
        f0=f0,
        alpha=alpha,
        second_moment=second_moment,
        variance=variance,
    )


def tail_model_for_channel(model: ChannelModel, f0: float | None = None) -> TailModel:
    if f0 is None and model.input is not InputLaw.CUSTOM:
        # sup of the output density: both built-ins peak at most at the
        # pure-noise peak smoothed to variance >= 1.
        if model.input is InputLaw.GAUSSIAN_STD:
            f0 = 1.0 / (_SQRT_2PI * math.sqrt(1.0 + model.snr))
        else:
            f0 = 1.0 / _SQRT_2PI
    return gaussian_tail_model(
        model.snr, model.variance, model.second_moment, model.alpha, f0
    )


# ---------------------------------------------------------------------------
# Deterministic error bounds


def _check_phi_hypothesis(eps0: float, k_n: float, tail: TailModel) -> float:
    phi_k = float(tail.phi(k_n))
    if not eps0 * phi_k < 1.0:
        raise HypothesisViolationError(
            f"eps0 * phi(k_n) = {eps0 * phi_k} >= 1; the bound does not apply"
        )
    return phi_k


def bhattacharya_error_bound(
    eps0: float,
    eps1: float,
    k_n: float,
    tail: TailModel,
    fisher_upper: float = 1.0,
) -> float:
    """Deterministic error bound for the plug-in estimator.

    (4 eps1 k rho_max + 2 eps1^2 k phi + eps0 phi I_max) / (1 - eps0 phi)
    + c(k), valid when eps0 * phi(k) < 1.
    """
    if eps0 < 0 or eps1 < 0:
        raise ValueError("eps0 and eps1 must be nonnegative")
    phi_k = _check_phi_hypothesis(eps0, k_n, tail)
    rho_m = float(tail.rho_max(k_n))
    numer = (
        4.0 * eps1 * k_n * rho_m
        + 2.0 * eps1**2 * k_n * phi_k
        + eps0 * phi_k * fisher_upper
    )
    return numer / (1.0 - eps0 * phi_k) + float(tail.c_tail(k_n))


def log_envelope_psi(eps0: float, k_n: float, tail: TailModel) -> float:
    """max(log(f0 + eps0), log(phi(k)/(1 - eps0 phi(k)))): bounds |log f_n|."""
    if tail.f0 is None:
        raise ValueError("this bound requires a density sup f0 in the tail model")
    phi_k = _check_phi_hypothesis(eps0, k_n, tail)
    return max(
        math.log(tail.f0 + eps0), math.log(phi_k / (1.0 - eps0 * phi_k))
    )


def _zero_count(d) -> int:
    return d.count if isinstance(d, ZeroCount) else int(d)


def modified_error_bound(
    eps0: float,
    eps1: float,
    k_n: float,
    tail: TailModel,
    d_f: ZeroCount | int,
    d_fn: ZeroCount | int,
) -> float:
    """Log-envelope error bound for the plug-in estimator.

    Replaces the phi factor by the much slower-growing |log f_n| envelope,
    at the price of the derivative zero counts of f and f_n.
    """
    if eps0 < 0 or eps1 < 0:
        raise ValueError("eps0 and eps1 must be nonnegative")
    psi = log_envelope_psi(eps0, k_n, tail)
    df, dfn = _zero_count(d_f), _zero_count(d_fn)
    rho_m = float(tail.rho_max(k_n))
    lead = eps1 * (4.0 + df + dfn) + eps0 * (2.0 + dfn) * rho_m
    return lead * psi + float(tail.c_tail(k_n))


def envelope_integrals(
    rho_bar, k_n: float, grid_points: int = 2001
) -> tuple[float, float]:
    """(integral of |rho_bar|, integral of rho_bar^2) over [-k_n, k_n]."""
    def check(t):
        out = np.abs(np.asarray(rho_bar(t), dtype=float))
        if not np.all(np.isfinite(out)):
            raise ValueError("score envelope must be finite on [-k_n, k_n]")
        return out

    phi1 = integrate(lambda t: check(t), -k_n, k_n, grid_points)
    phi2 = integrate(lambda t: check(t) ** 2, -k_n, k_n, grid_points)
    return phi1, phi2


def clipped_error_bound(
    eps0: float,
    eps1: float,
    k_n: float,
    tail: TailModel,
    grid_points: int = 2001,
) -> float:
    """4 eps1 int|rho_bar| + 2 eps0 int rho_bar^2 + c(k): the summed-form
    error bound for the clipped estimator."""
    if eps0 < 0 or eps1 < 0:
        raise ValueError("eps0 and eps1 must be nonnegative")
    phi1, phi2 = envelope_integrals(tail.rho_bar, k_n, grid_points)
    return 4.0 * eps1 * phi1 + 2.0 * eps0 * phi2 + float(tail.c_tail(k_n))


def clipped_error_bound_two_sided(
    eps0: float,
    eps1: float,
    k_n: float,
    tail: TailModel,
    score_phi1: float,
    score_phi2: float,
    grid_points: int = 2001,
) -> float:
    """Max-form clipped error bound, sharper when the integrals of the true
    score (|rho| and rho^2 over [-k_n, k_n]) are available:

    max(4 eps1 Phi1 + 2 eps0 Phi2 + c(k),
        3 eps1 Phi1_max + eps0 Phi2_max).
    """
    if eps0 < 0 or eps1 < 0:
        raise ValueError("eps0 and eps1 must be nonnegative")
    phi1_max, phi2_max = envelope_integrals(tail.rho_bar, k_n, grid_points)
    under = 4.0 * eps1 * score_phi1 + 2.0 * eps0 * score_phi2 + float(
        tail.c_tail(k_n)
    )
    over = 3.0 * eps1 * phi1_max + eps0 * phi2_max
    return max(under, over)


def channel_score_integrals(
    model: ChannelModel, k_n: float, grid_points: int = 2001
) -> tuple[float, float]:
    """(int |rho_Y|, int rho_Y^2) over [-k_n, k_n] for a built-in channel."""
    phi1 = integrate(lambda t: np.abs(true_score(model, t)), -k_n, k_n, grid_points)
    phi2 = integrate(lambda t: true_score(model, t) ** 2, -k_n, k_n, grid_points)
    return phi1, phi2


# ---------------------------------------------------------------------------
# Precision/confidence schedules (a = n^-w, k_n growing with n)


def _check_open(name: str, value: float, lo: float, hi: float):
    if value is None or not (lo < value < hi):
        raise HypothesisViolationError(
            f"{name} must lie in the open interval ({lo}, {hi}); got {value}"
        )


def bhattacharya_precision(
    n,
    u: float,
    w: float,
    constants: GaussianBoundConstants,
    sub_gaussian: bool = False,
):
    """Guaranteed precision of the plug-in estimator under the schedule
    a = n^-w, k_n = sqrt(u log n); decays like 1/sqrt(u log n).

    Accepts scalar or array n. The sub-Gaussian variant replaces the
    slowest tail term by c6 * n^(-u/4).
    """
    _check_open("w", w, 0.0, 1.0 / 6.0)
    _check_open("u", u, 0.0, w)
    n = np.asarray(n, dtype=float)
    if np.any(n < 2):
        raise HypothesisViolationError("n must be >= 2")
    ratio = n ** (u - w)
    if np.any(ratio >= 1.0):
        raise HypothesisViolationError("need n^(w-u) > 1")
    s = np.sqrt(u * np.log(n))
    c = constants
    if sub_gaussian:
        lead = n ** (-w) * s * (c.c3 + 12.0 * s + 2.0 * c.c5 * ratio) / (1.0 - ratio)
        out = lead + c.c5 / (n ** (w - u) - 1.0) + c.c6 * n ** (-u / 4.0)
    else:
        lead = (
            n ** (-w) * s * (4.0 * c.c3 + 12.0 * s + 2.0 * c.c5 * ratio)
            / (1.0 - ratio)
        )
        out = lead + c.c4 / s + c.c5 / (n ** (w - u) - 1.0)
    return float(out) if out.ndim == 0 else out


def clipped_precision(
    n,
    u: float,
    w0: float,
    w1: float,
    constants: GaussianBoundConstants,
    sub_gaussian: bool = False,
):
    """Guaranteed precision of the clipped estimator under the schedule
    a0 = n^-w0, a1 = n^-w1, k_n = n^u; decays polynomially in n."""
    _check_open("w0", w0, 0.0, 1.0 / 4.0)
    _check_open("w1", w1, 0.0, 1.0 / 6.0)
    _check_open("u", u, 0.0, min(w0 / 3.0, w1 / 2.0))
    n = np.asarray(n, dtype=float)
    if np.any(n < 2):
        raise HypothesisViolationError("n must be >= 2")
    c = constants
    lead = 4.0 * n ** (3.0 * u - w0) * (
        c.c3 * n ** (-2.0 * u) + 3.0 * n ** (-u) + 3.0
    ) + 4.0 * n ** (2.0 * u - w1) * (2.0 * c.c3 * n ** (-u) + 3.0)
    if sub_gaussian:
        out = lead + c.c6 * np.exp(-(n ** (2.0 * u)) / 4.0)
    else:
        out = lead + c.c4 * n ** (-u)
    return float(out) if out.ndim == 0 else out


def confidence_bound(
    n,
    constants: GaussianBoundConstants,
    estimator: EstimatorKind,
    w: float | None = None,
    w0: float | None = None,
    w1: float | None = None,
):
    """Failure probability 2 exp(-c1 n^(1-4w0)) + 2 exp(-c2 n^(1-6w1)).

    The plug-in schedule uses a single bandwidth exponent (w0 = w1 = w)."""
    if estimator in (EstimatorKind.BHATTACHARYA, EstimatorKind.MMSE_BHATTACHARYA):
        _check_open("w", w, 0.0, 1.0 / 6.0)
        w0 = w1 = w
    else:
        _check_open("w0", w0, 0.0, 1.0 / 4.0)
        _check_open("w1", w1, 0.0, 1.0 / 6.0)
    n = np.asarray(n, dtype=float)
    out = 2.0 * np.exp(-constants.c1 * n ** (1.0 - 4.0 * w0)) + 2.0 * np.exp(
        -constants.c2 * n ** (1.0 - 6.0 * w1)
    )
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Derivative zero counting


def count_derivative_zeros(
    fn, k: float, grid_points: int = 4001, tolerance: float = 1e-3
) -> ZeroCount:
    """Count sign changes of a derivative evaluator on [-k, k].

    Sign changes closer together than `tolerance` are merged; tangential
    zeros (touch without sign change) are not detected.
    """
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    grid = np.linspace(-k, k, int(grid_points))
    try:
        vals = np.asarray(fn(grid), dtype=float)
        if vals.shape != grid.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(fn(t)) for t in grid])
    signs = np.sign(vals)
    nonzero = signs != 0
    idx = np.flatnonzero(nonzero)
    changes = []
    for i, j in zip(idx[:-1], idx[1:]):
        if signs[i] != signs[j]:
            changes.append(0.5 * (grid[i] + grid[j]))
    merged = 0
    last = None
    for pos in changes:
        if last is None or pos - last > tolerance:
            merged += 1
            last = pos
    return ZeroCount(count=merged, tolerance=tolerance, interval_half_width=k)


# ---------------------------------------------------------------------------
# Sample-complexity search


@dataclass(frozen=True)
class ComplexityResult:
    log10_n: float
    estimator: EstimatorKind
    k_n: float
    eps0: float
    eps1: float
    a0: float
    a1: float
    target_eps: float
    target_perr: float

    def to_dict(self) -> dict:
        return {
            "log10_n": self.log10_n,
            "estimator": self.estimator.value,
            "k_n": self.k_n,
            "eps0": self.eps0,
            "eps1": self.eps1,
            "a0": self.a0,
            "a1": self.a1,
            "target_eps": self.target_eps,
            "target_perr": self.target_perr,
        }


@dataclass(frozen=True)
class ComplexitySearchSpec:
    """Deterministic grids for the sample-complexity optimization."""

    k_grid: np.ndarray = None
    e0_points: int = 60
    e1_points: int = 72
    log10_n_max: float = 40.0
    bisect_iters: int = 60

    def __post_init__(self):
        if self.k_grid is None:
            object.__setattr__(self, "k_grid", np.linspace(0.8, 8.0, 60))


def _optimal_bandwidths(e0: np.ndarray, e1: np.ndarray):
    """Bandwidths maximizing the concentration exponents a^(2r+2)(e - d a)^2
    for a given sup-norm budget: a0 = e0/(2 d0), a1 = 2 e1/(3 d1)."""
    d0 = GAUSSIAN_KERNEL.bias_slope_0
    d1 = GAUSSIAN_KERNEL.bias_slope_1
    return e0 / (2.0 * d0), 2.0 * e1 / (3.0 * d1)


def _concentration_rates(e0, e1):
    """Per-sample exponential rates A_r of the two sup-norm tail bounds,
    at the optimal bandwidths."""
    d0 = GAUSSIAN_KERNEL.bias_slope_0
    d1 = GAUSSIAN_KERNEL.bias_slope_1
    a0, a1 = _optimal_bandwidths(e0, e1)
    rate0 = 2.0 * a0**2 * (e0 - a0 * d0) ** 2 / GAUSSIAN_KERNEL.v0**2
    rate1 = 2.0 * a1**4 * (e1 - a1 * d1) ** 2 / GAUSSIAN_KERNEL.v1**2
    return a0, a1, rate0, rate1


def _vector_bisect_log10n(rate0, rate1, target_perr, lo, hi, iters):
    """Smallest log10 n with 2 e^(-A0 n) + 2 e^(-A1 n) <= target, per entry."""

    def conf(l10):
        n = 10.0**l10
        return 2.0 * np.exp(-rate0 * n) + 2.0 * np.exp(-rate1 * n)

    lo_v = np.full_like(rate0, lo)
    hi_v = np.full_like(rate0, hi)
    feasible = conf(hi_v) <= target_perr
    for _ in range(iters):
        mid = 0.5 * (lo_v + hi_v)
        ok = conf(mid) <= target_perr
        hi_v = np.where(ok, mid, hi_v)
        lo_v = np.where(ok, lo_v, mid)
    return np.where(feasible, hi_v, np.inf)


def _complexity_pass(
    estimator: EstimatorKind,
    channel: ChannelModel,
    env: GaussianChannelEnvelopes,
    k_grid: np.ndarray,
    b0_grid: np.ndarray,
    e1_grid: np.ndarray,
    target_eps: float,
    target_perr: float,
    spec: ComplexitySearchSpec,
):
    """One grid pass of the sample-complexity search.

    For the plug-in estimator b0 is the dimensionless budget
    x0 = eps0 * phi(k) in (0, 1); for the clipped estimator b0 is eps0
    directly. Returns (best tuple or None, smallest precision seen).
    """
    snr, var, ex2 = channel.snr, channel.variance, channel.second_moment
    best = None
    best_prec = np.inf
    for k in k_grid:
        c_k = lemma2_tail(float(k), snr, ex2, channel.alpha)
        if estimator is EstimatorKind.BHATTACHARYA:
            phi_k = float(env.phi(k))
            rho_m = env.rho_max(k)
            x0g, e1g = np.meshgrid(b0_grid, e1_grid, indexing="ij")
            e0g = x0g / phi_k
            prec = (
                4.0 * e1g * k * rho_m
                + 2.0 * e1g**2 * k * phi_k
                + x0g * env.fisher_upper
            ) / (1.0 - x0g) + c_k
        else:
            c3 = math.sqrt(3.0 * snr * var)
            phi1_max = 2.0 * c3 * k + 3.0 * k**2
            phi2_max = 2.0 * c3**2 * k + 6.0 * c3 * k**2 + 6.0 * k**3
            if channel.input is InputLaw.CUSTOM:
                score_phi1, score_phi2 = phi1_max, phi2_max
            else:
                score_phi1, score_phi2 = channel_score_integrals(channel, k)
            e0g, e1g = np.meshgrid(b0_grid, e1_grid, indexing="ij")
            prec = np.maximum(
                4.0 * e1g * score_phi1 + 2.0 * e0g * score_phi2 + c_k,
                3.0 * e1g * phi1_max + e0g * phi2_max,
            )
        best_prec = min(best_prec, float(prec.min()))
        mask = prec <= target_eps
        if not mask.any():
            continue
        b0m, e1m = np.meshgrid(b0_grid, e1_grid, indexing="ij")
        b0m, e1m = b0m[mask], e1m[mask]
        e0m = e0g[mask]
        a0m, a1m, r0, r1 = _concentration_rates(e0m, e1m)
        log10n = _vector_bisect_log10n(
            r0, r1, target_perr, 1.0, spec.log10_n_max, spec.bisect_iters
        )
        i = int(np.argmin(log10n))
        if np.isfinite(log10n[i]) and (best is None or log10n[i] < best[0]):
            best = (
                float(log10n[i]),
                float(k),
                float(b0m[i]),
                float(e0m[i]),
                float(e1m[i]),
                float(a0m[i]),
                float(a1m[i]),
            )
    return best, best_prec


def sample_complexity(
    target_eps: float,
    target_perr: float,
    estimator: EstimatorKind,
    channel: ChannelModel,
    spec: ComplexitySearchSpec | None = None,
) -> ComplexityResult:
    """Smallest sample size guaranteeing |estimate - truth| <= target_eps
    with probability >= 1 - target_perr, by grid search over the free
    parameters (k_n, eps0, eps1) with per-point optimal bandwidths and
    bisection on log10 n.

    The precision term is n-free, so each grid point is first screened
    against target_eps and only the surviving points enter the confidence
    bisection. A global grid pass is followed by zoom refinement passes
    around the incumbent optimum. Deterministic for a fixed search spec;
    ties are broken by grid order.
    """
    if not (0.0 < target_eps <= 1.0):
        raise ValueError("target_eps must lie in (0, 1]")
    if not (0.0 < target_perr < 1.0):
        raise ValueError("target_perr must lie in (0, 1)")
    if estimator not in (EstimatorKind.BHATTACHARYA, EstimatorKind.CLIPPED):
        raise ValueError("sample_complexity supports the Fisher estimators only")
    spec = spec or ComplexitySearchSpec()
    env = lemma1_constants(channel.snr, channel.variance, channel.second_moment)

    k_grid = np.asarray(spec.k_grid, dtype=float)
    if estimator is EstimatorKind.BHATTACHARYA:
        b0_grid = np.geomspace(1e-6, 0.999, spec.e0_points)
        e1_grid = np.geomspace(1e-7, 1.0, spec.e1_points)
    else:
        b0_grid = np.geomspace(1e-9, 0.5, spec.e0_points)
        e1_grid = np.geomspace(1e-9, 0.5, spec.e1_points)

    best, best_prec = _complexity_pass(
        estimator, channel, env, k_grid, b0_grid, e1_grid,
        target_eps, target_perr, spec,
    )
    if best is not None:
        dk = float(k_grid[1] - k_grid[0]) if k_grid.size > 1 else 0.5
        r0 = b0_grid[1] / b0_grid[0]
        r1 = e1_grid[1] / e1_grid[0]
        for _ in range(3):
            _, k, b0, _, e1, _, _ = best
            k_local = np.linspace(max(k - dk, 1e-3), k + dk, 9)
            b0_local = np.geomspace(b0 / r0, min(b0 * r0, 0.999), 17)
            e1_local = np.geomspace(e1 / r1, e1 * r1, 17)
            refined, _ = _complexity_pass(
                estimator, channel, env, k_local, b0_local, e1_local,
                target_eps, target_perr, spec,
            )
            if refined is None or refined[0] >= best[0]:
                break
            best = refined
            dk /= 4.0
            r0 = r0 ** (1.0 / 8.0)
            r1 = r1 ** (1.0 / 8.0)
    if best is None:
        raise InfeasibleTargetError(
            f"no parameters reach precision {target_eps} with confidence "
            f"{target_perr} within n <= 1e{spec.log10_n_max:g}",
            best_precision=best_prec,
        )
    log10_n, k, _, e0, e1, a0, a1 = best
    return ComplexityResult(
        log10_n=log10_n,
        estimator=estimator,
        k_n=k,
        eps0=e0,
        eps1=e1,
        a0=a0,
        a1=a1,
        target_eps=target_eps,
        target_perr=target_perr,
    )
