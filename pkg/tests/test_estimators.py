"""Tests for the plug-in and clipped Fisher estimators and the MMSE
transform."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fisherinfo import (
    EstimatorConfig,
    EstimatorKind,
    SampleSet,
    bhattacharya,
    clipped,
    constant_clip_envelope,
    default_bandwidth,
    default_truncation,
    estimate,
    gaussian_channel,
    integrate,
    lemma_clip_envelope,
    mmse_from_fisher,
    sample_channel,
    score_at,
)
from fisherinfo.estimators import EstimateResult

finite_samples = st.lists(
    st.floats(min_value=-5, max_value=5, allow_nan=False),
    min_size=1,
    max_size=25,
)


def truncated_gaussian_fisher(sigma: float, k: float) -> float:
    """Closed-form ∫_{|t|<=k} (f')^2/f dt for f = N(0, sigma^2).

    The integrand is (t/sigma^2)^2 f(t), so the integral is
    (1/sigma^2) * P[|T| <= k] - 2k f(k)/sigma^2 ... derived via
    integration by parts; evaluated here by high-resolution quadrature of
    the analytic integrand instead, which is an independent oracle for the
    kernel-based path.
    """
    f = lambda t: np.exp(-0.5 * (t / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    return integrate(lambda t: (t / sigma**2) ** 2 * f(t), -k, k, 40_001)


class TestConfigValidation:
    def test_positive_parameters(self):
        for bad in ({"a0": 0.0}, {"a1": -1.0}, {"k_n": 0.0}):
            kwargs = {"a0": 0.3, "a1": 0.3, "k_n": 5.0, **bad}
            with pytest.raises(ValueError):
                EstimatorConfig(**kwargs)

    def test_grid_points_odd(self):
        with pytest.raises(ValueError):
            EstimatorConfig(a0=0.3, a1=0.3, k_n=5.0, grid_points=100)

    def test_density_floor_nonnegative(self):
        with pytest.raises(ValueError):
            EstimatorConfig(a0=0.3, a1=0.3, k_n=5.0, density_floor=-1e-9)

    def test_defaults(self):
        assert default_bandwidth(10_000) == pytest.approx(10_000 ** (-1 / 6))
        assert default_truncation(10_000) == pytest.approx(math.log(10_000))


class TestScoreAt:
    def test_single_sample_analytic(self):
        # One sample at 0 with a = 1: f_n = N(0,1), score(t) = -t.
        config = EstimatorConfig(a0=1.0, a1=1.0, k_n=10.0)
        assert score_at(SampleSet([0.0]), config, 2.0) == pytest.approx(-2.0, abs=1e-9)

    def test_symmetric_samples_zero_at_origin(self):
        config = EstimatorConfig(a0=0.5, a1=0.5, k_n=10.0)
        assert score_at(SampleSet([-1.0, 1.0]), config, 0.0) == pytest.approx(0.0)

    def test_floor_keeps_result_finite(self):
        config = EstimatorConfig(a0=0.1, a1=0.1, k_n=100.0, density_floor=1e-30)
        out = score_at(SampleSet([0.0]), config, 50.0)
        assert math.isfinite(out)

    def test_zero_floor_zero_density_raises(self):
        config = EstimatorConfig(a0=0.1, a1=0.1, k_n=100.0, density_floor=0.0)
        with pytest.raises(ZeroDivisionError):
            score_at(SampleSet([0.0]), config, 1e6)


class TestBhattacharya:
    def test_single_sample_unit_bandwidth(self):
        # f_n is exactly N(0,1); its Fisher information is 1.
        config = EstimatorConfig(a0=1.0, a1=1.0, k_n=10.0)
        result = bhattacharya(SampleSet([0.0]), config)
        assert result.value == pytest.approx(1.0, abs=1e-4)
        assert result.estimator is EstimatorKind.BHATTACHARYA

    def test_single_sample_half_bandwidth(self):
        # f_n = N(0, 0.25): Fisher information 1/a^2 = 4.
        config = EstimatorConfig(a0=0.5, a1=0.5, k_n=10.0)
        assert bhattacharya(SampleSet([0.0]), config).value == pytest.approx(
            4.0, abs=1e-3
        )

    def test_truncated_oracle(self):
        # Narrow truncation against the closed-form truncated integral.
        config = EstimatorConfig(a0=1.0, a1=1.0, k_n=1.5)
        expected = truncated_gaussian_fisher(1.0, 1.5)
        assert bhattacharya(SampleSet([0.0]), config).value == pytest.approx(
            expected, abs=1e-4
        )

    def test_desk_scale_accuracy_single_trial(self):
        n = 10_000
        a = default_bandwidth(n)
        config = EstimatorConfig(a0=a, a1=a, k_n=default_truncation(n))
        s = sample_channel(gaussian_channel(1.0), n, seed=11)
        assert bhattacharya(s, config).value == pytest.approx(0.5, abs=0.05)

    @settings(max_examples=25, deadline=None)
    @given(finite_samples, st.floats(min_value=0.2, max_value=2))
    def test_nonnegative(self, values, a):
        config = EstimatorConfig(a0=a, a1=a, k_n=5.0)
        assert bhattacharya(SampleSet(values), config).value >= 0.0


class TestClipped:
    def test_requires_envelope(self):
        config = EstimatorConfig(a0=0.5, a1=0.5, k_n=5.0)
        with pytest.raises(ValueError, match="envelope"):
            clipped(SampleSet([0.0]), config)

    def test_huge_constant_envelope_matches_plugin(self):
        s = SampleSet([-0.5, 0.2, 1.0])
        config = EstimatorConfig(a0=0.8, a1=0.8, k_n=6.0)
        loose = config.with_envelope(constant_clip_envelope(1e12))
        assert clipped(s, loose).value == pytest.approx(
            bhattacharya(s, config).value, abs=1e-9
        )

    def test_zero_envelope_gives_zero(self):
        config = EstimatorConfig(a0=0.5, a1=0.5, k_n=5.0).with_envelope(
            constant_clip_envelope(0.0)
        )
        result = clipped(SampleSet([0.0, 1.0]), config)
        assert result.value == 0.0
        assert result.clip_active_fraction > 0.9

    def test_lemma_envelope_matches_plugin_on_channel_data(self):
        s = sample_channel(gaussian_channel(1.0), 10_000, seed=3)
        base = EstimatorConfig(a0=0.3, a1=0.3, k_n=10.0)
        withenv = base.with_envelope(lemma_clip_envelope(1.0, 1.0))
        assert clipped(s, withenv).value == pytest.approx(
            bhattacharya(s, base).value, abs=1e-6
        )

    def test_clip_dominance(self):
        # clipped <= integral of |rho_bar| * |f_n'| on the same grid.
        s = SampleSet([-1.0, 0.0, 2.0])
        env = lemma_clip_envelope(1.0, 1.0)
        config = EstimatorConfig(a0=0.4, a1=0.4, k_n=6.0).with_envelope(env)
        value = clipped(s, config).value
        from fisherinfo.kernels import kde_deriv_at

        upper = integrate(
            lambda t: np.abs(env(t)) * np.abs(kde_deriv_at(s, 0.4, t)),
            -6.0, 6.0, config.grid_points,
        )
        assert value <= upper + 1e-12

    def test_inactivity_identity_exact(self):
        # With an envelope above the realized score everywhere and no
        # density floor, the two estimators integrate identical values.
        s = SampleSet([0.0, 0.5])
        config = EstimatorConfig(
            a0=1.0, a1=1.0, k_n=3.0, density_floor=0.0
        ).with_envelope(constant_clip_envelope(100.0))
        base = EstimatorConfig(a0=1.0, a1=1.0, k_n=3.0, density_floor=0.0)
        assert clipped(s, config).value == bhattacharya(s, base).value

    def test_non_finite_envelope_rejected(self):
        config = EstimatorConfig(a0=0.5, a1=0.5, k_n=5.0).with_envelope(
            lambda t: np.full_like(np.asarray(t, float), np.inf)
        )
        with pytest.raises(ValueError, match="finite"):
            clipped(SampleSet([0.0]), config)

    @settings(max_examples=25, deadline=None)
    @given(finite_samples, st.floats(min_value=0.3, max_value=2))
    def test_nonnegative(self, values, a):
        config = EstimatorConfig(a0=a, a1=a, k_n=5.0).with_envelope(
            lemma_clip_envelope(1.0, 1.0)
        )
        assert clipped(SampleSet(values), config).value >= 0.0


class TestMmse:
    def test_point_mass_case(self):
        assert mmse_from_fisher(1.0, 2.0) == 0.0

    def test_gaussian_truth_at_unit_snr(self):
        assert mmse_from_fisher(0.5, 1.0) == pytest.approx(0.5)

    def test_high_snr_value(self):
        assert mmse_from_fisher(0.0909, 10.0) == pytest.approx(0.09091, abs=1e-4)

    def test_invalid_snr(self):
        with pytest.raises(ValueError):
            mmse_from_fisher(0.5, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=0, max_value=1, allow_nan=False),
        st.floats(min_value=0.01, max_value=100, allow_nan=False),
    )
    def test_brown_consistency(self, fisher, snr):
        assert mmse_from_fisher(fisher, snr) * snr + fisher == pytest.approx(
            1.0, abs=1e-12
        )


class TestDispatch:
    def test_mmse_kinds_transform_base_value(self):
        s = sample_channel(gaussian_channel(1.0), 2000, seed=9)
        config = EstimatorConfig(a0=0.3, a1=0.3, k_n=8.0)
        base = estimate(s, config, EstimatorKind.BHATTACHARYA)
        wrapped = estimate(s, config, EstimatorKind.MMSE_BHATTACHARYA, snr=1.0)
        assert wrapped.value == pytest.approx(
            mmse_from_fisher(base.value, 1.0)
        )
        assert wrapped.estimator is EstimatorKind.MMSE_BHATTACHARYA

    def test_mmse_requires_snr(self):
        config = EstimatorConfig(a0=0.3, a1=0.3, k_n=8.0)
        with pytest.raises(ValueError, match="snr"):
            estimate(SampleSet([0.0]), config, EstimatorKind.MMSE_BHATTACHARYA)

    def test_result_serialization(self):
        config = EstimatorConfig(a0=1.0, a1=1.0, k_n=5.0)
        d = bhattacharya(SampleSet([0.0]), config).to_dict()
        assert set(d) == {
            "value", "estimator", "clip_active_fraction", "floored_fraction"
        }


class TestShiftEquivariance:
    def test_shift_and_widen_leaves_estimate(self):
        rng = np.random.Generator(np.random.Philox(21))
        s = SampleSet(rng.standard_normal(300))
        c = 1.0
        base = EstimatorConfig(a0=0.5, a1=0.5, k_n=20.0)
        wide = EstimatorConfig(a0=0.5, a1=0.5, k_n=21.0, grid_points=2101)
        before = bhattacharya(s, base).value
        after = bhattacharya(s.shifted(c), wide).value
        assert after == pytest.approx(before, abs=1e-8)
