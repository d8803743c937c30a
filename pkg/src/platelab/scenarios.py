"""Executable verification scenarios for the growth and boundedness claims.

Each scenario turns one theorem-level claim about ||u(t)|| into concrete
measured quantities with explicit thresholds and produces a
:class:`VerificationReport`.  Quadrature failures surface as failed
reports with diagnostics, never as silent passes; a scenario also fails
itself when its own quadrature error estimates exceed 1% of any quantity
it compares.

Scenario ids
------------
THM_1_1     n in {1,2,3}: Gaussian velocity data grows like t^(1-n/4)
THM_1_2     n = 4: squared norm grows like log t
THM_1_3     n in {3,4}: zero-mean velocity data stays bounded
THM_1_4     n in {1,2}: zero mean + zero first moments stays bounded
THM_1_5_N1  n = 1: dipole data grows like t^(1/4)
THM_1_5_N2  n = 2: dipole data grows like sqrt(log t)
PROP_4_1    n = 5: explicit uniform bound on the squared Fourier norm
ENERGY      conservation and the antiderivative identity on a data catalog
LEMMA_3_1   explicit low-frequency lower envelope dominance
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import analysis, model
from .analysis import (Classification, GrowthClassificationError, classify_growth,
                       fit_log, fit_power, fourier_data_norm_sq,
                       high_dim_upper_bound, last_decade_variation,
                       low_freq_lower_bound, norm_series)
from .model import Dipole, Gaussian, LapGaussian, Problem, TensorDipole, ZERO, build_data
from .quadrature import DEFAULT_CONFIG, QuadConfig, QuadratureError

DELTA0 = analysis.DEFAULT_DELTA0

# fit/plateau windows; growth claims hold for large t, so the transient
# below t = 100 is excluded everywhere
GROWTH_GRID = np.logspace(2, 6, 13)
PLATEAU_GRID = np.logspace(4, 6, 9)
T14_GRID = np.logspace(3, 6, 10)
ENERGY_TIMES = (0.1, 1.0, 10.0, 100.0, 1000.0)
IDENTITY_TIMES = (1.0, 10.0, 100.0)
PROP41_TIMES = (1.0, 10.0, 100.0, 1000.0, 10000.0)
LEMMA31_MIN_T = 1000.0

ERROR_BUDGET = 0.01     # quadrature error above 1% of a compared value fails


def _gauss(n, a=0.5):
    return build_data([(1.0, Gaussian(a))], n)


def _dipole(n, a=0.5):
    return build_data([(1.0, Dipole(a, 1))], n)


@dataclass
class VerificationReport:
    scenario_id: str
    claim: str
    measured: list = field(default_factory=list)      # (name, value)
    thresholds: list = field(default_factory=list)    # (name, value, provenance)
    passed: bool = False
    runtime_seconds: float = 0.0
    quadrature: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def measure(self, name, value):
        self.measured.append((name, float(value)))

    def require(self, name, ok, threshold, provenance):
        ok = bool(ok)
        self.thresholds.append((name, threshold, provenance))
        if not ok:
            self.diagnostics.append(f"threshold failed: {name}")
        return ok

    def to_json(self):
        return {
            "scenario_id": self.scenario_id,
            "claim": self.claim,
            "measured": [{"name": k, "value": v} for k, v in self.measured],
            "thresholds": [{"name": k, "value": v, "provenance": p}
                           for k, v, p in self.thresholds],
            "passed": self.passed,
            "runtime_seconds": self.runtime_seconds,
            "quadrature": self.quadrature,
            "diagnostics": self.diagnostics,
        }


def _series_error_guard(report, series):
    """Fail the report when quadrature error estimates are material."""
    scale = np.maximum(np.abs(series.value), 1e-300)
    worst = float(np.max(series.err / scale))
    report.quadrature["max_rel_err_estimate"] = max(
        worst, report.quadrature.get("max_rel_err_estimate", 0.0))
    if worst > ERROR_BUDGET:
        report.diagnostics.append(
            f"quadrature error estimate {worst:.2e} exceeds {ERROR_BUDGET:.0%} "
            f"of a compared quantity")
        return False
    return True


def _alpha_from_norm_sq(series):
    """Exponent of ||u(t)||: fit the better-conditioned squared norm, halve."""
    return 0.5 * fit_power(series).exponent


# ---------------------------------------------------------------------------
# Scenario implementations


def _scenario_thm_1_1(cfg, ns=(1, 2, 3), delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_1",
        claim="For n in {1,2,3} and Gaussian velocity data (nonzero mean), "
              "||u(t)|| grows like t^(1-n/4) and the squared Fourier norm "
              "dominates the explicit low-frequency envelope for large t.")
    ok = True
    for n in ns:
        want = 1.0 - n / 4.0
        for label, u0 in (("u0=0", ZERO), ("u0=gauss", _gauss(n))):
            problem = Problem(n=n, sigma=2.0, data0=u0, data1=_gauss(n))
            series = norm_series(problem, GROWTH_GRID, "norm_sq", cfg)
            ok &= _series_error_guard(report, series)
            alpha = _alpha_from_norm_sq(series)
            report.measure(f"alpha[n={n},{label}]", alpha)
            ok &= report.require(
                f"alpha[n={n},{label}] within 0.02 of {want}",
                abs(alpha - want) <= 0.02, want,
                "scenario:THM_1_1 dispersive exponent (1 - n/4)")
            P = model.moments(problem.data1, n).P
            w_sq = (2.0 * math.pi) ** n * series.value
            mask = series.t >= LEMMA31_MIN_T
            bounds = np.array([low_freq_lower_bound(P, n, delta0, t)
                               for t in series.t[mask]])
            margin = float(np.min(w_sq[mask] / bounds))
            report.measure(f"envelope_margin[n={n},{label}]", margin)
            ok &= report.require(
                f"||w||^2 >= envelope for t >= {LEMMA31_MIN_T:g} [n={n},{label}]",
                margin >= 1.0, 1.0,
                "formula:low_freq_lower_bound")
    report.passed = ok and not report.diagnostics
    return report


def _scenario_thm_1_2(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_2",
        claim="For n = 4 and Gaussian velocity data, ||u(t)||^2 grows like "
              "log t (sqrt-log growth of the norm).  With nonzero "
              "displacement data the two-sided claim carries different "
              "constants, so that variant is checked through the fitted "
              "log slope instead of the raw plateau.")
    ok = True
    slopes = {}
    for label, u0 in (("u0=0", ZERO), ("u0=gauss", _gauss(4))):
        problem = Problem(n=4, sigma=2.0, data0=u0, data1=_gauss(4))
        series = norm_series(problem, PLATEAU_GRID, "norm_sq", cfg)
        ok &= _series_error_guard(report, series)
        lf = fit_log(series)
        slopes[label] = lf.exponent
        report.measure(f"log_slope[{label}]", lf.exponent)
        if label == "u0=0":
            ratio = series.value / np.log(series.t)
            spread = float((ratio.max() - ratio.min()) / ratio.min())
            report.measure("plateau_spread[u0=0]", spread)
            ok &= report.require(
                "norm^2/log t spread <= 5% on [1e4, 1e6] [u0=0]",
                spread <= 0.05, 0.05,
                "scenario:THM_1_2 log-growth plateau; decision:plateau-window")
        else:
            ok &= report.require(
                "log model fits within 0.1% [u0=gauss]",
                lf.max_relative_residual <= 1e-3, 1e-3,
                "scenario:THM_1_2 log growth (fit form)")
    drift = abs(slopes["u0=gauss"] - slopes["u0=0"]) / slopes["u0=0"]
    report.measure("log_slope_drift", drift)
    ok &= report.require(
        "log slope independent of displacement data within 1%",
        drift <= 0.01, 0.01,
        "scenario:THM_1_2 slope set by the velocity datum alone")
    report.passed = ok and not report.diagnostics
    return report


def _bounded_case(report, cfg, problem, label, gamma):
    series = norm_series(problem, GROWTH_GRID, "norm_sq", cfg)
    ok = _series_error_guard(report, series)
    alpha2 = fit_power(series).exponent
    var = last_decade_variation(series)
    cls = classify_growth(series)
    report.measure(f"alpha_sq[{label}]", alpha2)
    report.measure(f"last_decade_variation[{label}]", var)
    budget = (model.l2_norm_data(problem.data0, problem.n)
              + model.l2_norm_data(problem.data1, problem.n)
              + model.l1_weighted_norm(problem.data1, gamma, problem.n, cfg))
    report.measure(f"bound_budget_gamma{gamma:g}[{label}]", budget)
    ok &= report.require(
        f"|alpha_sq| <= 0.02 [{label}]", abs(alpha2) <= 0.02, 0.02,
        "decision:bounded-exponent-threshold")
    ok &= report.require(
        f"last-decade variation <= 2% [{label}]", var <= 0.02, 0.02,
        "decision:bounded-variation-threshold")
    ok &= report.require(
        f"classified bounded [{label}]", cls.kind == "bounded", "bounded",
        "scenario:boundedness classification")
    return ok


def _scenario_thm_1_3(cfg, ns=(3, 4), delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_3",
        claim="For n in {3,4} and velocity data with zero mean (dipole), "
              "||u(t)|| stays bounded in t.")
    ok = True
    for n in ns:
        problem = Problem(n=n, sigma=2.0, data0=ZERO, data1=_dipole(n))
        ok &= _bounded_case(report, cfg, problem, f"n={n},dipole", gamma=1.0)
    report.passed = ok and not report.diagnostics
    return report


def _scenario_thm_1_4(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_4",
        claim="For n in {1,2} and velocity data with zero mean and zero first "
              "moments, ||u(t)|| stays bounded in t.")
    ok = True
    cases = [
        (1, build_data([(1.0, LapGaussian(0.5))], 1), "n=1,lap_gaussian"),
        (2, build_data([(1.0, TensorDipole(0.5))], 2), "n=2,tensor_dipole"),
    ]
    for n, u1, label in cases:
        kappa = model.moments(u1, n).decay_order
        report.measure(f"decay_order[{label}]", kappa)
        ok &= report.require(
            f"moment conditions hold [{label}]", kappa == 2, 2,
            "scenario:THM_1_4 vanishing zeroth and first moments")
        problem = Problem(n=n, sigma=2.0, data0=ZERO, data1=u1)
        ok &= _bounded_case(report, cfg, problem, label, gamma=2.0)
    report.passed = ok and not report.diagnostics
    return report


def _scenario_thm_1_5_n1(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_5_N1",
        claim="For n = 1 dipole velocity data (zero mean, nonzero first "
              "moment), ||u(t)|| >= c t^(1/4) with stable positive c; the "
              "measured exponent itself is a quarter (a finding of this "
              "laboratory: only the lower bound is guaranteed).")
    problem = Problem(n=1, sigma=2.0, data0=ZERO, data1=_dipole(1))
    series = norm_series(problem, T14_GRID, "norm_sq", cfg)
    ok = _series_error_guard(report, series)
    alpha = _alpha_from_norm_sq(series)
    c = np.sqrt(series.value) / series.t ** 0.25
    spread = float((c.max() - c.min()) / c.mean())
    report.measure("alpha", alpha)
    report.measure("c_min", float(c.min()))
    report.measure("c_spread", spread)
    ok &= report.require("alpha within 0.02 of 0.25", abs(alpha - 0.25) <= 0.02,
                         0.25, "scenario:THM_1_5 quarter-power growth (measured)")
    ok &= report.require("prefactor positive", float(c.min()) > 0.0, 0.0,
                         "scenario:THM_1_5 lower bound")
    ok &= report.require("prefactor stable within 5%", spread <= 0.05, 0.05,
                         "decision:prefactor-stability-threshold")
    report.passed = ok and not report.diagnostics
    return report


def _scenario_thm_1_5_n2(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="THM_1_5_N2",
        claim="For n = 2 dipole velocity data, ||u(t)||^2 / log t plateaus "
              "(sqrt-log growth; the plateau level is a measured finding).")
    problem = Problem(n=2, sigma=2.0, data0=ZERO, data1=_dipole(2))
    series = norm_series(problem, PLATEAU_GRID, "norm_sq", cfg)
    ok = _series_error_guard(report, series)
    ratio = series.value / np.log(series.t)
    spread = float((ratio.max() - ratio.min()) / ratio.min())
    report.measure("plateau_spread", spread)
    report.measure("plateau_level", float(ratio.mean()))
    ok &= report.require("norm^2/log t spread <= 5% on [1e4, 1e6]",
                         spread <= 0.05, 0.05,
                         "scenario:THM_1_5 log plateau; decision:plateau-window")
    report.passed = ok and not report.diagnostics
    return report


def _scenario_prop_4_1(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="PROP_4_1",
        claim="For n = 5 Gaussian data the squared Fourier norm obeys the "
              "explicit uniform bound 2 omega_5 ||u1||_1^2 + 2 ||w1||^2 + "
              "||w0||^2 for all t, and the norm is bounded.")
    n = 5
    problem = Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n))
    l1_u1 = model.l1_norm(problem.data1, n, cfg)
    wsq_u1 = fourier_data_norm_sq(problem.data1, n)
    wsq_u0 = fourier_data_norm_sq(problem.data0, n)
    bound = high_dim_upper_bound(n, l1_u1, wsq_u1, wsq_u0)
    report.measure("bound", bound)
    ok = True
    worst = 0.0
    for t in PROP41_TIMES:
        w_sq = analysis.fourier_norm_sq(problem, t, cfg)
        worst = max(worst, w_sq / bound)
        report.measure(f"w_sq[t={t:g}]", w_sq)
    report.measure("max_ratio_to_bound", worst)
    ok &= report.require("||w(t)||^2 <= bound at all sampled t", worst <= 1.0,
                         1.0, "formula:high_dim_upper_bound")
    series = norm_series(problem, GROWTH_GRID, "norm_sq", cfg)
    ok &= _series_error_guard(report, series)
    cls = classify_growth(series)
    ok &= report.require("classified bounded", cls.kind == "bounded", "bounded",
                         "scenario:PROP_4_1 uniform boundedness")
    report.passed = ok and not report.diagnostics
    return report


def _energy_catalog():
    problems = []
    for n in (1, 2, 4):
        problems.append((f"n={n},gauss/gauss",
                         Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n))))
        problems.append((f"n={n},gauss/dipole",
                         Problem(n=n, sigma=2.0, data0=_gauss(n, 0.7),
                                 data1=_dipole(n))))
    return problems


def _scenario_energy(cfg, delta0=DELTA0):
    report = VerificationReport(
        scenario_id="ENERGY",
        claim="Total energy is conserved to quadrature accuracy across the "
              "data catalog, and the antiderivative energy identity holds "
              "with residual at the quadrature-error level.")
    ok = True
    worst_drift = 0.0
    for label, problem in _energy_catalog():
        e0 = analysis.total_energy(problem, 0.0, cfg)
        drift = max(abs(analysis.total_energy(problem, t, cfg) - e0) / e0
                    for t in ENERGY_TIMES)
        worst_drift = max(worst_drift, drift)
        report.measure(f"energy_drift[{label}]", drift)
    ok &= report.require("max |E(t)-E(0)|/E(0) <= 1e-8", worst_drift <= 1e-8,
                         1e-8, "scenario:ENERGY conservation law")
    worst_resid = 0.0
    for n in (1, 2):
        problem = Problem(n=n, sigma=2.0, data0=_gauss(n), data1=_gauss(n))
        e0 = analysis.total_energy(problem, 0.0, cfg)
        resid = max(analysis.antiderivative_identity_residual(problem, t, cfg)
                    for t in IDENTITY_TIMES) / e0
        worst_resid = max(worst_resid, resid)
        report.measure(f"identity_residual_rel[n={n}]", resid)
    ok &= report.require("antiderivative identity residual <= 1e-8 E(0)",
                         worst_resid <= 1e-8, 1e-8,
                         "scenario:ENERGY antiderivative identity")
    report.quadrature["max_rel_err_estimate"] = max(worst_drift, worst_resid)
    report.passed = ok and not report.diagnostics
    return report


def _scenario_lemma_3_1(cfg, ns=(1, 2, 3), delta0=DELTA0):
    report = VerificationReport(
        scenario_id="LEMMA_3_1",
        claim="The squared Fourier norm dominates the explicit envelope "
              "P^2/(32 n) omega_n delta0^n t^(2-n/2) for all sampled "
              "t >= 1e3, and the first sampled t where it holds is reported.")
    ok = True
    scan = np.logspace(0, 6, 25)
    for n in ns:
        problem = Problem(n=n, sigma=2.0, data0=ZERO, data1=_gauss(n))
        P = model.moments(problem.data1, n).P
        ratios = []
        first_t = None
        for t in scan:
            w_sq = analysis.fourier_norm_sq(problem, t, cfg)
            bound = low_freq_lower_bound(P, n, delta0, t)
            holds = w_sq >= bound
            if holds and first_t is None:
                first_t = t
            if not holds:
                first_t = None
            if t >= LEMMA31_MIN_T:
                ratios.append(w_sq / bound)
        report.measure(f"first_t_dominated[n={n}]", first_t if first_t else math.inf)
        report.measure(f"min_margin[n={n}]", min(ratios))
        ok &= report.require(
            f"dominance for sampled t >= 1e3 [n={n}]", min(ratios) >= 1.0, 1.0,
            "formula:low_freq_lower_bound")
    report.passed = ok and not report.diagnostics
    return report


SCENARIOS = {
    "THM_1_1": _scenario_thm_1_1,
    "THM_1_2": _scenario_thm_1_2,
    "THM_1_3": _scenario_thm_1_3,
    "THM_1_4": _scenario_thm_1_4,
    "THM_1_5_N1": _scenario_thm_1_5_n1,
    "THM_1_5_N2": _scenario_thm_1_5_n2,
    "PROP_4_1": _scenario_prop_4_1,
    "ENERGY": _scenario_energy,
    "LEMMA_3_1": _scenario_lemma_3_1,
}


def run_scenario(scenario_id, cfg: QuadConfig = DEFAULT_CONFIG, n=None,
                 delta0=DELTA0) -> VerificationReport:
    """Run one catalog scenario; unknown ids raise KeyError.

    ``n`` restricts THM_1_1 / THM_1_3 / LEMMA_3_1 to a single dimension.
    """
    if scenario_id not in SCENARIOS:
        raise KeyError(f"unknown scenario {scenario_id!r}; "
                       f"known: {', '.join(sorted(SCENARIOS))}")
    runner = SCENARIOS[scenario_id]
    kwargs = {}
    if n is not None and scenario_id in ("THM_1_1", "THM_1_3", "LEMMA_3_1"):
        kwargs["ns"] = (int(n),)
    start = time.perf_counter()
    try:
        report = runner(cfg, delta0=delta0, **kwargs)
    except (QuadratureError, GrowthClassificationError) as exc:
        report = VerificationReport(scenario_id=scenario_id,
                                    claim="(aborted before completion)")
        report.diagnostics.append(f"{type(exc).__name__}: {exc}")
        report.passed = False
    report.runtime_seconds = time.perf_counter() - start
    report.quadrature.setdefault("rel_tol", cfg.rel_tol)
    report.quadrature.setdefault("abs_tol", cfg.abs_tol)
    report.quadrature.setdefault("max_halfperiods", cfg.max_halfperiods)
    return report


def run_all(cfg: QuadConfig = DEFAULT_CONFIG, delta0=DELTA0):
    """Run the whole catalog, in id order, returning the report list."""
    return [run_scenario(sid, cfg, delta0=delta0) for sid in sorted(SCENARIOS)]


# ---------------------------------------------------------------------------
# Dimension/exponent sweep


@dataclass(frozen=True)
class SweepCell:
    sigma: float
    n: int
    classification: str     # "power" | "log" | "bounded" | "error"
    alpha_sq: float | None  # fitted exponent of the squared norm, power cells
    detail: str = ""

    def to_row(self):
        alpha = "" if self.alpha_sq is None else f"{self.alpha_sq:.17g}"
        return [f"{self.sigma:.17g}", str(self.n), self.classification, alpha]


# Sweep cells only need classification accuracy (~1e-3), and large sigma
# packs many more half-periods under the Gaussian envelope (phase grows
# like r^(2 sigma/...)=t r^sigma), so the sweep trades tolerance for budget.
SWEEP_CONFIG = QuadConfig(rel_tol=1e-8, abs_tol=1e-14, max_halfperiods=50_000_000)


def sigma_sweep(sigmas, ns, cfg: QuadConfig = SWEEP_CONFIG):
    """Classify Gaussian-velocity growth per (sigma, n) cell.

    The boundary sits at n = 2 sigma: power growth of the squared norm with
    exponent 2 - n/sigma below it, log growth on it, boundedness above it.
    """
    grid = np.logspace(3, 6, 10)
    rows = []
    for sigma in sigmas:
        for n in ns:
            problem = Problem(n=int(n), sigma=float(sigma), data0=ZERO,
                              data1=_gauss(int(n)))
            try:
                series = norm_series(problem, grid, "norm_sq", cfg)
                cls = classify_growth(series)
            except (QuadratureError, GrowthClassificationError) as exc:
                rows.append(SweepCell(float(sigma), int(n), "error", None,
                                      detail=str(exc)))
                continue
            alpha = cls.exponent if cls.kind == "power" else None
            rows.append(SweepCell(float(sigma), int(n), cls.kind, alpha))
    return rows
