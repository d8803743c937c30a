import math

import numpy as np
import pytest

from platelab import analysis, model
from platelab.analysis import (Classification, GrowthClassificationError,
                               NormSeries, antiderivative_identity_residual,
                               classify_growth, fit_log, fit_power,
                               fourier_data_norm_sq, frequency_split,
                               high_dim_upper_bound, low_freq_lower_bound,
                               norm_series, norm_sq_with_error,
                               solution_l2_sq, total_energy)
from platelab.model import (Dipole, Gaussian, LapGaussian, Problem,
                            TensorDipole, ZERO, build_data)

from conftest import gauss, dipole, problem

SQRTPI = math.sqrt(math.pi)

# independent tensor-grid oracle value, frozen: n=1, u1 = exp(-x^2/2),
# u0 = 0, t = 1, box 12, step 1e-3
ORACLE_NORM_SQ_T1 = 1.5364611989989756


def synthetic_series(t, values):
    return NormSeries(t=np.asarray(t, float), value=np.asarray(values, float),
                      err=np.zeros(len(values)), quantity="norm_sq", problem={})


class TestSolutionNorm:
    def test_static_data_is_plancherel(self):
        prob = problem(1, gauss(1), ZERO)
        assert solution_l2_sq(prob, 0.0) == pytest.approx(SQRTPI, rel=1e-12)

    def test_small_time_scales_with_velocity_norm(self, gauss1):
        v = solution_l2_sq(gauss1, 1e-3)
        assert v / 1e-6 == pytest.approx(SQRTPI, rel=1e-4)

    def test_matches_tensor_oracle_fixture(self, gauss1):
        v = solution_l2_sq(gauss1, 1.0)
        assert v == pytest.approx(ORACLE_NORM_SQ_T1, rel=1e-6)

    def test_error_estimate_reported(self, gauss1):
        v, e = norm_sq_with_error(gauss1, 10.0)
        assert v > 0 and 0 <= e < 1e-6 * v


class TestFrequencySplit:
    @pytest.mark.parametrize("t", [1e2, 1e4])
    def test_partition(self, gauss1, t):
        low, high = frequency_split(gauss1, t)
        total = solution_l2_sq(gauss1, t)
        assert low + high == pytest.approx(total, rel=1e-9)

    def test_low_band_bound_for_displacement_data(self):
        # cos^2 <= 1 pins the low band under the volume of the ball times
        # the squared sup of the transform
        prob = problem(1, gauss(1), ZERO)
        t, delta0 = 1e4, 0.9
        low, _ = frequency_split(prob, t, delta0)
        l1_sq = model.l1_norm(prob.data0, 1) ** 2
        bound = (2 * math.pi) ** -1 * 2.0 * delta0 * l1_sq * t ** -0.5
        assert 0 < low <= bound

    def test_zero_data(self):
        prob = problem(2, ZERO, ZERO)
        assert frequency_split(prob, 100.0) == (0.0, 0.0)

    def test_radius_guard(self, gauss1):
        with pytest.raises(ValueError):
            frequency_split(gauss1, 1e-3)   # radius above one
        with pytest.raises(ValueError):
            frequency_split(gauss1, 10.0, delta0=1.5)


class TestEnergy:
    def test_velocity_data_energy(self, gauss1):
        want = 0.5 * SQRTPI
        for t in (0.0, 1.0, 10.0, 100.0):
            assert total_energy(gauss1, t) == pytest.approx(want, rel=1e-9)

    def test_displacement_data_energy(self):
        prob = problem(1, gauss(1), ZERO)
        want = 3.0 / 8.0 * SQRTPI    # ||(exp(-x^2/2))''||^2 / 2
        assert total_energy(prob, 5.0) == pytest.approx(want, rel=1e-9)

    def test_zero_data(self):
        assert total_energy(problem(2, ZERO, ZERO), 3.0) == 0.0


class TestAntiderivativeIdentity:
    def test_zero_time(self, gauss1):
        assert antiderivative_identity_residual(gauss1, 0.0) == 0.0

    def test_residual_small_velocity_only(self, gauss1):
        e0 = total_energy(gauss1, 0.0)
        assert antiderivative_identity_residual(gauss1, 10.0) <= 1e-8 * e0

    def test_residual_small_displacement_only(self):
        prob = problem(1, gauss(1), ZERO)
        e0 = total_energy(prob, 0.0)
        assert antiderivative_identity_residual(prob, 10.0) <= 1e-8 * e0


class TestNormSeries:
    def test_log_grid(self, gauss1):
        s = norm_series(gauss1, np.logspace(0, 2, 5), "norm_sq")
        assert len(s) == 5 and s.quantity == "norm_sq"

    def test_single_point(self, gauss1):
        s = norm_series(gauss1, [2.0], "norm")
        assert len(s) == 1
        assert s.value[0] == pytest.approx(math.sqrt(solution_l2_sq(gauss1, 2.0)),
                                           rel=1e-12)

    def test_empty_grid_rejected(self, gauss1):
        with pytest.raises(ValueError):
            norm_series(gauss1, [], "norm_sq")

    def test_non_increasing_grid_rejected(self, gauss1):
        with pytest.raises(ValueError):
            norm_series(gauss1, [1.0, 1.0], "norm_sq")

    def test_unknown_quantity(self, gauss1):
        with pytest.raises(ValueError):
            norm_series(gauss1, [1.0], "entropy")

    def test_energy_series_constant(self, gauss1):
        s = norm_series(gauss1, np.logspace(-1, 3, 5), "energy")
        assert np.max(np.abs(s.value - s.value[0])) <= 1e-8 * s.value[0]

    def test_csv_round_trip(self, gauss1):
        s = norm_series(gauss1, np.logspace(0, 2, 4), "norm_sq")
        again = NormSeries.from_csv(s.to_csv())
        assert np.array_equal(again.t, s.t)
        assert np.array_equal(again.value, s.value)

    def test_threaded_matches_serial(self, gauss1, monkeypatch):
        serial = norm_series(gauss1, np.logspace(0, 2, 5), "norm_sq")
        monkeypatch.setenv("DRL_THREADS", "4")
        threaded = norm_series(gauss1, np.logspace(0, 2, 5), "norm_sq")
        assert np.array_equal(serial.value, threaded.value)


class TestFits:
    def test_power_exact(self):
        t = np.array([10.0, 100.0, 1000.0, 10000.0])
        s = synthetic_series(t, 5.0 * t ** 1.5)
        fit = fit_power(s)
        assert fit.exponent == pytest.approx(1.5, abs=1e-13)
        assert fit.amplitude == pytest.approx(5.0, rel=1e-12)
        assert fit.max_relative_residual < 1e-12

    def test_power_constant(self):
        t = np.logspace(1, 4, 6)
        fit = fit_power(synthetic_series(t, np.full(6, 7.0)))
        assert fit.exponent == pytest.approx(0.0, abs=1e-14)

    def test_power_flags_log_data(self):
        t = np.logspace(1, 5, 9)
        y = 2.0 * np.log(t)
        pf = fit_power(synthetic_series(t, y))
        lf = fit_log(synthetic_series(t, y))
        assert pf.max_relative_residual > 10 * lf.max_relative_residual

    def test_log_exact(self):
        t = np.logspace(1, 4, 7)
        fit = fit_log(synthetic_series(t, 2.0 * np.log(t) + 3.0))
        assert fit.exponent == pytest.approx(2.0, abs=1e-12)
        assert fit.amplitude == pytest.approx(3.0, abs=1e-11)

    def test_log_constant(self):
        t = np.logspace(1, 4, 7)
        fit = fit_log(synthetic_series(t, np.full(7, 4.0)))
        assert fit.exponent == pytest.approx(0.0, abs=1e-13)

    def test_log_rejects_power_data(self):
        t = np.logspace(1, 5, 9)
        fit = fit_log(synthetic_series(t, t ** 0.5))
        assert fit.max_relative_residual > 0.05

    def test_guards(self):
        with pytest.raises(ValueError):
            fit_power(synthetic_series([1.0, 2.0], [1.0, 2.0]))
        with pytest.raises(ValueError):
            fit_power(synthetic_series([1.0, 2.0, 3.0, 4.0], [1.0, -1.0, 1.0, 1.0]))


class TestClassify:
    def test_power(self):
        t = np.logspace(2, 6, 9)
        cls = classify_growth(synthetic_series(t, 3.0 * t ** 1.5))
        assert cls.kind == "power"
        assert cls.exponent == pytest.approx(1.5, abs=1e-10)

    def test_log(self):
        t = np.logspace(2, 6, 9)
        cls = classify_growth(synthetic_series(t, 4.0 * np.log(t) + 2.0))
        assert cls.kind == "log"
        assert cls.slope == pytest.approx(4.0, rel=1e-6)

    def test_bounded(self):
        t = np.logspace(2, 6, 9)
        cls = classify_growth(synthetic_series(t, 5.0 - 0.3 / np.sqrt(t)))
        assert cls.kind == "bounded"

    def test_ambiguous_raises(self):
        t = np.logspace(2, 6, 9)
        rng = np.random.default_rng(7)
        wild = np.abs(1.0 + 0.8 * np.sin(3 * np.log(t)) + 0.3 * t ** 0.4)
        with pytest.raises(GrowthClassificationError):
            classify_growth(synthetic_series(t, wild), tol=0.01)

    def test_window_guard(self):
        t = np.logspace(1, 2, 6)
        with pytest.raises(ValueError):
            classify_growth(synthetic_series(t, t))

    def test_scaling_covariance(self, gauss1):
        lam = 3.0
        scaled = Problem(n=1, sigma=2.0, data0=ZERO,
                         data1=build_data([(lam, Gaussian(0.5))], 1))
        grid = np.logspace(2, 5, 7)
        s1 = norm_series(gauss1, grid, "norm_sq")
        s2 = norm_series(scaled, grid, "norm_sq")
        assert np.allclose(s2.value, lam ** 2 * s1.value, rtol=1e-9)
        assert fit_power(s2).exponent == pytest.approx(fit_power(s1).exponent,
                                                       abs=1e-10)


class TestExplicitBounds:
    def test_low_freq_lower_bound_values(self):
        got = low_freq_lower_bound(math.sqrt(2 * math.pi), 1, 0.9, 1e4)
        assert got == pytest.approx(2 * math.pi * 2 * 0.9 / 32 * 1e6, rel=1e-12)
        assert got == pytest.approx(3.5343e5, rel=1e-4)
        assert low_freq_lower_bound(0.0, 3, 0.9, 10.0) == 0.0
        got2 = low_freq_lower_bound(1.0, 2, 0.9, 100.0)
        assert got2 == pytest.approx(2 * math.pi * 0.81 / 64 * 100.0, rel=1e-12)
        assert got2 == pytest.approx(7.9522, rel=1e-4)

    def test_low_freq_guards(self):
        with pytest.raises(ValueError):
            low_freq_lower_bound(1.0, 1, 1.2, 10.0)
        with pytest.raises(ValueError):
            low_freq_lower_bound(1.0, 1, 0.9, 0.0)

    def test_high_dim_bound_values(self):
        got = high_dim_upper_bound(5, 1.0, 2.0, 3.0)
        omega5 = 8 * math.pi ** 2 / 3
        assert got == pytest.approx(2 * omega5 + 4 + 3, rel=1e-12)
        assert got == pytest.approx(59.638, rel=1e-4)
        assert high_dim_upper_bound(5, 0.0, 0.0, 0.0) == 0.0
        assert high_dim_upper_bound(6, 1.0, 0.0, 0.0) == pytest.approx(
            math.pi ** 3, rel=1e-12)

    def test_high_dim_guard(self):
        with pytest.raises(ValueError):
            high_dim_upper_bound(4, 1.0, 1.0, 1.0)


class TestLowBandMomentLaw:
    @pytest.mark.parametrize("n,u1,kappa", [
        (1, build_data([(1.0, Gaussian(0.5))], 1), 0),
        (1, build_data([(1.0, Dipole(0.5, 1))], 1), 1),
        (2, build_data([(1.0, TensorDipole(0.5))], 2), 2),
    ])
    def test_low_band_exponent(self, n, u1, kappa):
        prob = Problem(n=n, sigma=2.0, data0=ZERO, data1=u1)
        s = norm_series(prob, np.logspace(2, 6, 9), "I_low")
        alpha = fit_power(s).exponent
        assert alpha == pytest.approx(2 - (n + 2 * kappa) / 2.0, abs=0.05)
