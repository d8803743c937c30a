import math

import numpy as np
import pytest

from platelab.quadrature import (DEFAULT_CONFIG, OscillatorySplit, PowerGauss,
                                 QuadConfig, QuadratureError, integrate_radial,
                                 oracle_grid, oscillation_nodes, tensor_oracle)
from platelab.model import Dipole, Gaussian, Problem, ZERO, build_data

from conftest import gauss, problem


def fresnel_gauss_exact(t):
    """int_0^inf sin^2(t r^2) exp(-r^2) dr in closed form."""
    return (math.sqrt(math.pi) / 4.0) * (1.0 - ((1 + 2j * t) ** -0.5).real)


def simpson_oracle(f, a, b, n_panels):
    """Plain composite Simpson; the independent check for the fixtures."""
    x = np.linspace(a, b, 2 * n_panels + 1)
    y = f(x)
    h = x[1] - x[0]
    return (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()) * h / 3.0


# frozen from the Simpson oracle (h = 1e-5 on [0, 12]) and the closed form;
# both agree to 15 digits
FRESNEL_FIXTURE = 0.19104195272586197


class TestOscillationNodes:
    def test_plate_nodes_unit_band(self):
        nodes = oscillation_nodes(math.pi, 2.0, 0.0, 1.0)
        for expected in (0.5, math.sqrt(0.5), math.sqrt(0.75), 1.0):
            assert np.min(np.abs(nodes - expected)) < 1e-12
        assert nodes[0] == 0.0 and nodes[-1] == 1.0
        assert np.all(np.diff(nodes) > 0)

    def test_sigma_one_quarter_node(self):
        nodes = oscillation_nodes(math.pi, 1.0, 0.0, 1.0)
        assert np.min(np.abs(nodes - 0.25)) < 1e-14

    def test_interior_band_gaps_decrease(self):
        # gaps between consecutive eighth-phase bands shrink with j
        t = 50.0
        nodes = oscillation_nodes(t, 2.0, 0.1, 3.0)
        quarter_pairs = []
        for j in range(40):
            lo = math.sqrt((0.25 + j) * math.pi / t)
            hi = math.sqrt((0.75 + j) * math.pi / t)
            if lo > 0.1 and hi < 3.0:
                quarter_pairs.append(hi - lo)
        assert all(a > b for a, b in zip(quarter_pairs, quarter_pairs[1:]))

    def test_node_budget_guard(self):
        cfg = QuadConfig(max_halfperiods=100)
        with pytest.raises(QuadratureError):
            oscillation_nodes(1e6, 2.0, 0.0, 10.0, cfg)

    def test_bad_band(self):
        with pytest.raises(ValueError):
            oscillation_nodes(1.0, 2.0, 2.0, 1.0)


class TestSmoothIntegration:
    def test_gaussian_halfline(self):
        v, e = integrate_radial(lambda r: np.exp(-r * r), 1, (0.0, math.inf))
        assert v == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)
        assert abs(v - math.sqrt(math.pi) / 2.0) <= max(e, 1e-15)

    def test_radial_weight(self):
        # n = 3 weight r^2
        v, _ = integrate_radial(lambda r: np.exp(-r * r), 3, (0.0, math.inf))
        assert v == pytest.approx(math.sqrt(math.pi) / 4.0, rel=1e-12)

    def test_band_additivity_smooth(self):
        f = lambda r: np.exp(-0.7 * r * r) * (1 + r ** 4)
        whole, ew = integrate_radial(f, 2, (0.0, 6.0))
        parts = [integrate_radial(f, 2, band) for band in ((0.0, 1.0), (1.0, 3.0), (3.0, 6.0))]
        assert sum(p[0] for p in parts) == pytest.approx(whole, abs=ew + sum(p[1] for p in parts) + 1e-14)


class TestOscillatoryIntegration:
    @pytest.mark.parametrize("t", [1.0, 10.0, 1e3, 1e6])
    def test_fresnel_gaussian_family(self, t):
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        split = OscillatorySplit.sin_squared(t, 2.0, amp)
        density = lambda r: np.sin(t * r * r) ** 2 * np.exp(-r * r)
        v, e = integrate_radial(density, 1, (0.0, math.inf), oscillation=split)
        exact = fresnel_gauss_exact(t)
        assert v == pytest.approx(exact, rel=2e-10)
        assert abs(v - exact) <= e + 1e-13   # error honesty on the fixture

    def test_fixture_value(self):
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        split = OscillatorySplit.sin_squared(1.0, 2.0, amp)
        density = lambda r: np.sin(r * r) ** 2 * np.exp(-r * r)
        v, _ = integrate_radial(density, 1, (0.0, math.inf), oscillation=split)
        simpson = simpson_oracle(lambda r: np.sin(r * r) ** 2 * np.exp(-r * r),
                                 0.0, 12.0, 600_000)
        assert simpson == pytest.approx(FRESNEL_FIXTURE, abs=1e-12)
        assert fresnel_gauss_exact(1.0) == pytest.approx(FRESNEL_FIXTURE, abs=1e-15)
        assert v == pytest.approx(FRESNEL_FIXTURE, abs=1e-9)

    def test_oscillation_averages_out(self):
        # Riemann-Lebesgue: sin^2 averages to 1/2 as t -> infinity
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        t = 1e4
        split = OscillatorySplit.sin_squared(t, 2.0, amp)
        density = lambda r: np.sin(t * r * r) ** 2 * np.exp(-r * r)
        v, _ = integrate_radial(density, 1, (0.0, math.inf), oscillation=split)
        assert v == pytest.approx(math.sqrt(math.pi) / 4.0, rel=0.01)

    def test_band_additivity_oscillatory(self):
        t = 300.0
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        density = lambda r: np.sin(t * r * r) ** 2 * np.exp(-r * r)
        def osc():
            return OscillatorySplit.sin_squared(t, 2.0, amp)
        whole, ew = integrate_radial(density, 1, (0.0, math.inf), oscillation=osc())
        a, ea = integrate_radial(density, 1, (0.0, 0.8), oscillation=osc())
        b, eb = integrate_radial(density, 1, (0.8, 2.5), oscillation=osc())
        c, ec = integrate_radial(density, 1, (2.5, math.inf), oscillation=osc())
        assert a + b + c == pytest.approx(whole, abs=ew + ea + eb + ec + 1e-12)

    def test_direct_and_split_paths_agree(self):
        # seam regime: total phase around 1e3
        t = 30.0
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        density = lambda r: np.sin(t * r * r) ** 2 * np.exp(-r * r)
        split = OscillatorySplit.sin_squared(t, 2.0, amp)
        v1, e1 = integrate_radial(density, 1, (0.0, math.inf), oscillation=split)
        v2, e2 = integrate_radial(density, 1, (0.0, math.inf), oscillation=split,
                                  _force_direct=True)
        assert v1 == pytest.approx(v2, abs=e1 + e2 + 1e-13)
        assert v1 == pytest.approx(fresnel_gauss_exact(t), rel=1e-10)

    def test_budget_exhaustion_raises(self):
        cfg = QuadConfig(max_halfperiods=50)
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        split = OscillatorySplit.sin_squared(1e5, 2.0, amp)
        density = lambda r: np.sin(1e5 * r * r) ** 2 * np.exp(-r * r)
        with pytest.raises(QuadratureError):
            integrate_radial(density, 1, (0.0, math.inf), oscillation=split, cfg=cfg)

    def test_invalid_band(self):
        with pytest.raises(ValueError):
            integrate_radial(lambda r: r, 1, (2.0, 1.0))

    def test_split_evaluate_matches_density(self):
        t = 7.0
        amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
        split = OscillatorySplit.sin_squared(t, 2.0, amp)
        r = np.linspace(0.2, 3.0, 23)
        direct = np.sin(t * r * r) ** 2 * np.exp(-r * r)
        assert np.allclose(split.evaluate(r), direct, atol=1e-12)


class TestPowerGauss:
    def test_tail_bound_is_upper_bound(self):
        pg = PowerGauss.from_terms(-4.0, [(2.0, 0, 1.0), (0.5, 1, 0.5)])
        from scipy.integrate import quad
        for R in (1.0, 2.0, 4.0):
            ref, _ = quad(lambda r: abs(pg(np.array([r]))[0]) * r ** 2, R, 25.0,
                          limit=400)
            assert pg.tail_bound(R, extra_power=2.0) >= ref * (1 - 1e-9)

    def test_zero_amplitude(self):
        pg = PowerGauss.from_terms(0.0, [])
        assert pg.is_zero and pg.tail_bound(1.0) == 0.0


class TestTensorOracle:
    def test_zero_initial_state(self, gauss1):
        assert tensor_oracle(gauss1, 0.0, 8.0, 0.01) == pytest.approx(0.0, abs=1e-30)

    def test_static_norm(self):
        prob = problem(1, gauss(1), ZERO)
        got = tensor_oracle(prob, 0.0, 10.0, 1e-3)
        assert got == pytest.approx(math.sqrt(math.pi), rel=1e-10)

    def test_point_budget_guard(self, gauss1):
        with pytest.raises(ValueError):
            tensor_oracle(gauss1, 1.0, 10.0, 1e-5, max_points=10_000)

    def test_dimension_guard(self):
        prob = Problem(n=4, sigma=2.0, data0=ZERO, data1=gauss(4))
        with pytest.raises(ValueError):
            tensor_oracle(prob, 1.0, 5.0, 0.1)

    def test_coarse_n3_smoke(self):
        prob = Problem(n=3, sigma=2.0, data0=ZERO, data1=gauss(3))
        from platelab import analysis
        got = tensor_oracle(prob, 0.5, 5.5, 0.02)
        want = analysis.solution_l2_sq(prob, 0.5)
        assert got == pytest.approx(want, rel=1e-3)
