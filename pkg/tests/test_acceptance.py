"""Acceptance criteria for the laboratory, one test per criterion.

Every criterion prints a single PASS line with its headline measurement
and runtime (visible with ``pytest -s`` or on failure).  Tolerances are
asserted exactly as stated; runtime budgets are asserted where the
criterion carries one.
"""

import math
import time

import numpy as np
import pytest

from platelab import analysis, model, quadrature, scenarios
from platelab.analysis import (classify_growth, fit_power, fourier_data_norm_sq,
                               frequency_split, high_dim_upper_bound,
                               last_decade_variation, low_freq_lower_bound,
                               norm_series, solution_l2_sq, total_energy)
from platelab.model import (Dipole, Gaussian, LapGaussian, Problem,
                            TensorDipole, ZERO, build_data)
from platelab.quadrature import (OscillatorySplit, PowerGauss, integrate_radial,
                                 oracle_grid, tensor_oracle)


def _report(name, elapsed, detail, budget=None):
    line = f"PASS {name}: {detail} ({elapsed:.1f}s)"
    print(line)
    if budget is not None:
        assert elapsed < budget, f"{name} exceeded runtime budget {budget}s"


def _gauss(n, a=0.5):
    return build_data([(1.0, Gaussian(a))], n)


def _dipole(n, a=0.5):
    return build_data([(1.0, Dipole(a, 1))], n)


def test_criterion_01_energy_conservation():
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 4):
        catalog = [
            Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n)),
            Problem(n=n, sigma=2.0, data0=_gauss(n, 0.7), data1=_dipole(n)),
        ]
        for prob in catalog:
            e0 = total_energy(prob, 0.0)
            for t in (0.1, 1.0, 10.0, 1e2, 1e3):
                worst = max(worst, abs(total_energy(prob, t) - e0) / e0)
    assert worst <= 1e-8
    _report("criterion 1 (energy conservation)", time.perf_counter() - start,
            f"max drift {worst:.2e} <= 1e-8 over 6 problems x 5 times", budget=10)


def test_criterion_02_antiderivative_identity():
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2):
        prob = Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n))
        e0 = total_energy(prob, 0.0)
        for t in (1.0, 10.0, 100.0):
            resid = analysis.antiderivative_identity_residual(prob, t)
            worst = max(worst, resid / e0)
    assert worst <= 1e-8
    _report("criterion 2 (antiderivative identity)", time.perf_counter() - start,
            f"max residual {worst:.2e} of E(0)", budget=10)


def _oracle_combos(n):
    if n == 1:
        fourth0 = build_data([(1.0, LapGaussian(0.5))], 1)
        fourth1 = build_data([(1.0, Gaussian(0.5)), (0.2, LapGaussian(0.8))], 1)
    else:
        fourth0 = build_data([(1.0, TensorDipole(0.5))], 2)
        fourth1 = build_data([(1.0, Gaussian(0.5)), (0.3, TensorDipole(0.8))], 2)
    return [
        (ZERO, _gauss(n)),
        (_gauss(n, 0.7), _dipole(n)),
        (build_data([(1.0, Dipole(0.4, 1))], n),
         build_data([(0.8, Gaussian(0.6)), (-0.5, Dipole(0.5, 1))], n)),
        (fourth0, fourth1),
    ]


def test_criterion_03_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2):
        for u0, u1 in _oracle_combos(n):
            prob = Problem(n=n, sigma=2.0, data0=u0, data1=u1)
            box, step = oracle_grid(prob, 10.0)
            for t in (0.5, 1.0, 5.0, 10.0):
                reference = tensor_oracle(prob, t, box, step)
                radial = solution_l2_sq(prob, t)
                worst = max(worst, abs(radial - reference) / max(reference, 1e-300))
    assert worst <= 1e-6
    _report("criterion 3 (oracle equivalence)", time.perf_counter() - start,
            f"worst relative gap {worst:.2e} over 32 cases", budget=120)


def test_criterion_04_low_dimension_rates():
    start = time.perf_counter()
    grid = np.logspace(2, 6, 13)
    results = {}
    for n in (1, 2, 3):
        prob = Problem(n=n, sigma=2.0, data0=ZERO, data1=_gauss(n))
        series = norm_series(prob, grid, "norm_sq")
        alpha = 0.5 * fit_power(series).exponent
        results[n] = alpha
        assert abs(alpha - (1.0 - n / 4.0)) <= 0.02
    _report("criterion 4 (growth exponents t^(1-n/4))", time.perf_counter() - start,
            ", ".join(f"n={n}: {a:.4f}" for n, a in results.items()), budget=180)


def test_criterion_05_log_growth_plateau():
    start = time.perf_counter()
    prob = Problem(n=4, sigma=2.0, data0=ZERO, data1=_gauss(4))
    series = norm_series(prob, np.logspace(4, 6, 9), "norm_sq")
    ratio = series.value / np.log(series.t)
    spread = (ratio.max() - ratio.min()) / ratio.min()
    assert spread <= 0.05
    _report("criterion 5 (n=4 log plateau)", time.perf_counter() - start,
            f"norm^2/log t spread {spread:.2%} <= 5%", budget=120)


def test_criterion_06_lower_envelope_dominance():
    start = time.perf_counter()
    worst = math.inf
    for n in (1, 2, 3):
        prob = Problem(n=n, sigma=2.0, data0=ZERO, data1=_gauss(n))
        P = model.moments(prob.data1, n).P
        for t in (1e3, 1e4, 1e5, 1e6):
            w_sq = analysis.fourier_norm_sq(prob, t)
            bound = low_freq_lower_bound(P, n, 0.9, t)
            worst = min(worst, w_sq / bound)
            assert w_sq >= bound
    _report("criterion 6 (explicit lower envelope)", time.perf_counter() - start,
            f"min margin {worst:.1f}x for n in {{1,2,3}}, t >= 1e3")


def test_criterion_07_boundedness():
    start = time.perf_counter()
    cases = [
        (3, _dipole(3), "n=3 dipole"),
        (4, _dipole(4), "n=4 dipole"),
        (2, build_data([(1.0, TensorDipole(0.5))], 2), "n=2 tensor dipole"),
        (1, build_data([(1.0, LapGaussian(0.5))], 1), "n=1 lap gaussian"),
    ]
    grid = np.logspace(2, 6, 13)
    details = []
    for n, u1, label in cases:
        prob = Problem(n=n, sigma=2.0, data0=ZERO, data1=u1)
        series = norm_series(prob, grid, "norm_sq")
        alpha = fit_power(series).exponent
        var = last_decade_variation(series)
        assert abs(alpha) <= 0.02, label
        assert var <= 0.02, label
        details.append(f"{label}: alpha {alpha:+.4f}, var {var:.2%}")
    _report("criterion 7 (moment-condition boundedness)",
            time.perf_counter() - start, "; ".join(details))


def test_criterion_08_quarter_power_and_log():
    start = time.perf_counter()
    prob1 = Problem(n=1, sigma=2.0, data0=ZERO, data1=_dipole(1))
    series = norm_series(prob1, np.logspace(3, 6, 10), "norm_sq")
    alpha = 0.5 * fit_power(series).exponent
    c = np.sqrt(series.value) / series.t ** 0.25
    assert abs(alpha - 0.25) <= 0.02
    assert c.min() > 0.0
    spread_c = (c.max() - c.min()) / c.mean()
    assert spread_c <= 0.05

    prob2 = Problem(n=2, sigma=2.0, data0=ZERO, data1=_dipole(2))
    series2 = norm_series(prob2, np.logspace(4, 6, 9), "norm_sq")
    ratio = series2.value / np.log(series2.t)
    spread = (ratio.max() - ratio.min()) / ratio.min()
    assert spread <= 0.05
    _report("criterion 8 (first-moment growth)", time.perf_counter() - start,
            f"n=1 alpha {alpha:.4f}, c spread {spread_c:.2%}; "
            f"n=2 plateau spread {spread:.2%}")


def test_criterion_09_high_dimension_bound():
    start = time.perf_counter()
    n = 5
    prob = Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n))
    bound = high_dim_upper_bound(
        n, model.l1_norm(prob.data1, n),
        fourier_data_norm_sq(prob.data1, n), fourier_data_norm_sq(prob.data0, n))
    worst = 0.0
    for t in (1.0, 10.0, 1e2, 1e3, 1e4):
        w_sq = analysis.fourier_norm_sq(prob, t)
        worst = max(worst, w_sq / bound)
        assert w_sq <= bound
    cls = classify_growth(norm_series(prob, np.logspace(2, 6, 13), "norm_sq"))
    assert cls.kind == "bounded"
    _report("criterion 9 (n=5 uniform bound)", time.perf_counter() - start,
            f"max ratio to bound {worst:.3f}, classified bounded")


def test_criterion_10_dimension_threshold_sweep():
    start = time.perf_counter()
    rows = scenarios.sigma_sweep((1.0, 1.5, 2.0, 3.0), range(1, 8))
    assert len(rows) == 28
    for cell in rows:
        expected = ("power" if cell.n < 2 * cell.sigma
                    else "log" if cell.n == 2 * cell.sigma else "bounded")
        assert cell.classification == expected, cell
        if expected == "power":
            want = 2.0 - cell.n / cell.sigma
            assert abs(cell.alpha_sq - want) <= 0.05, cell
    elapsed = time.perf_counter() - start
    _report("criterion 10 (threshold n* = 2 sigma sweep)", elapsed,
            "28/28 cells classified with exponents within 0.05", budget=600)


def test_criterion_11_quadrature_fixture():
    start = time.perf_counter()
    exact = (math.sqrt(math.pi) / 4.0) * (1.0 - ((1 + 2j) ** -0.5).real)
    amp = PowerGauss.from_terms(0.0, [(1.0, 0, 1.0)])
    split = OscillatorySplit.sin_squared(1.0, 2.0, amp)
    value, _ = integrate_radial(lambda r: np.sin(r * r) ** 2 * np.exp(-r * r),
                                1, (0.0, math.inf), oscillation=split)
    assert abs(value - exact) <= 1e-9
    assert exact == pytest.approx(0.191041, abs=1e-6)
    _report("criterion 11 (oscillatory unit fixture)", time.perf_counter() - start,
            f"|value - closed form| = {abs(value - exact):.2e} <= 1e-9")
