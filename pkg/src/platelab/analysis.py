"""L2 functionals of the propagated solution and growth-law fitting.

The Plancherel constant is fixed by the transform convention
FT(f)(xi) = int exp(-i x.xi) f dx, so

    ||u(t)||^2_{L2(x)} = (2 pi)^(-n) ||w(t)||^2_{L2(xi)},

and every functional below is a weighted radial integral of the spectral
profiles.  Each trigonometric density is handed to the quadrature module
as an exact average + harmonics split, so evaluation cost stays flat in t.

Explicit bounds: the low-frequency mass of the sine kernel gives the
closed-form lower envelope P^2/(32 n) omega_n delta0^n t^(2 - n/2) once t
is large, while for n >= 5 the uniform-in-time Fourier-side bound
2 omega_n/(n-4) ||u1||_1^2 + 2 ||w1||^2 + ||w0||^2 holds for all t.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import model, propagator, spectra
from .model import Problem
from .quadrature import (DEFAULT_CONFIG, OscillatorySplit, PowerGauss,
                         QuadConfig, integrate_radial)
from .spectra import SpectralProfiles, spectral_profiles as _build_profiles

QUANTITIES = ("norm_sq", "norm", "energy", "I_low", "I_high")

DEFAULT_DELTA0 = 0.9


@lru_cache(maxsize=128)
def profiles_for(problem: Problem) -> SpectralProfiles:
    return _build_profiles(problem)


def _pg(profile, power, scale):
    return PowerGauss.from_terms(power, tuple((c * scale, k, b) for c, k, b in profile.terms))


@lru_cache(maxsize=128)
def _splits(prof: SpectralProfiles):
    """Average + harmonic decompositions of each quadratic density.

    Powers are relative to the density; phase is phi = t r^sigma, harmonics
    are in {phi, 2 phi}.  All entries follow from sin^2 = (1 - cos 2 phi)/2,
    cos^2 = (1 + cos 2 phi)/2, sin cos = sin(2 phi)/2 applied to the kernel
    combinations in the propagator module.
    """
    s2 = 2.0 * prof.sigma
    S0, S1, X = prof.S0, prof.S1, prof.X
    out = {}
    out["displacement"] = (
        (_pg(S1, -s2, 0.5), _pg(S0, 0.0, 0.5)),
        ((2, "cos", _pg(S0, 0.0, 0.5)), (2, "cos", _pg(S1, -s2, -0.5)),
         (2, "sin", _pg(X, -prof.sigma, 1.0))),
    )
    out["velocity"] = (
        (_pg(S1, 0.0, 0.5), _pg(S0, s2, 0.5)),
        ((2, "cos", _pg(S1, 0.0, 0.5)), (2, "cos", _pg(S0, s2, -0.5)),
         (2, "sin", _pg(X, prof.sigma, -1.0))),
    )
    out["op_energy"] = (
        (_pg(S1, 0.0, 0.5), _pg(S0, s2, 0.5)),
        ((2, "cos", _pg(S1, 0.0, -0.5)), (2, "cos", _pg(S0, s2, 0.5)),
         (2, "sin", _pg(X, prof.sigma, 1.0))),
    )
    # r^(2 sigma) |V|^2 where V is the time antiderivative:
    # (1-cos)^2/r^(2s) S1 + sin^2 S0 + 2 (1-cos) sin / r^s X
    out["lap_antiderivative"] = (
        (_pg(S1, -s2, 1.5), _pg(S0, 0.0, 0.5)),
        ((1, "cos", _pg(S1, -s2, -2.0)),
         (2, "cos", _pg(S1, -s2, 0.5)), (2, "cos", _pg(S0, 0.0, -0.5)),
         (1, "sin", _pg(X, -prof.sigma, 2.0)),
         (2, "sin", _pg(X, -prof.sigma, -1.0))),
    )
    # Re[w1 conj(V)] = (1-cos)/r^(2s) S1 + sin/r^s X
    out["source_cross"] = (
        (_pg(S1, -s2, 1.0),),
        ((1, "cos", _pg(S1, -s2, -1.0)), (1, "sin", _pg(X, -prof.sigma, 1.0))),
    )
    return out


def _op_energy_density(prof, t, r):
    r_arr = np.asarray(r, dtype=float)
    return r_arr ** (2.0 * prof.sigma) * propagator.displacement_density(prof, t, r_arr)


def _lap_antiderivative_density(prof, t, r):
    return propagator.antiderivative_density(prof, t, r).lapV_sq_density


_DENSITY_FUNCS = {
    "displacement": propagator.displacement_density,
    "velocity": propagator.velocity_density,
    "op_energy": _op_energy_density,
    "lap_antiderivative": _lap_antiderivative_density,
    "source_cross": propagator.source_cross_density,
}


def _integrate_density(problem, name, t, cfg: QuadConfig, band=(0.0, math.inf)):
    """(value, err) of int density r^(n-1) dr over the band, Fourier side."""
    prof = profiles_for(problem)
    base, parts = _splits(prof)[name]
    density = _DENSITY_FUNCS[name]

    def f(r):
        return density(prof, t, np.asarray(r, dtype=float))

    if t <= 0.0:
        # static data: densities reduce to their t = 0 values, no oscillation
        return integrate_radial(f, problem.n, band, cfg=cfg)
    split = OscillatorySplit(t=float(t), sigma=prof.sigma, base=base, parts=parts)
    return integrate_radial(f, problem.n, band, oscillation=split, cfg=cfg)


# ---------------------------------------------------------------------------
# Public functionals (physical-space normalisation)


def norm_sq_with_error(problem: Problem, t, cfg: QuadConfig = DEFAULT_CONFIG):
    """||u(t)||^2 with its quadrature error estimate."""
    scale = (2.0 * math.pi) ** -problem.n
    v, e = _integrate_density(problem, "displacement", t, cfg)
    return scale * v, scale * e


def solution_l2_sq(problem: Problem, t, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """||u(t)||^2 via the radial reduction."""
    return norm_sq_with_error(problem, t, cfg)[0]


def fourier_norm_sq(problem: Problem, t, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """||w(t)||^2 on the Fourier side (no (2 pi)^(-n) factor)."""
    return _integrate_density(problem, "displacement", t, cfg)[0]


def frequency_split(problem: Problem, t, delta0=DEFAULT_DELTA0,
                    cfg: QuadConfig = DEFAULT_CONFIG):
    """Split ||u(t)||^2 at radius (delta0^2 / t)^(1/sigma) into (I_low, I_high).

    Inside the low band the phase t r^sigma stays below delta0^2 < 1, where
    the sine kernel is within a factor 2 of t; the two pieces sum to the
    full squared norm.
    """
    if not 0.0 < delta0 < 1.0:
        raise ValueError(f"delta0 must lie in (0, 1), got {delta0}")
    if t <= 0.0:
        raise ValueError("frequency split needs t > 0")
    radius = (delta0 * delta0 / t) ** (1.0 / problem.sigma)
    if radius > 1.0:
        raise ValueError(f"split radius {radius:.4g} > 1; increase t")
    scale = (2.0 * math.pi) ** -problem.n
    low, _ = _integrate_density(problem, "displacement", t, cfg, band=(0.0, radius))
    high, _ = _integrate_density(problem, "displacement", t, cfg, band=(radius, math.inf))
    return scale * low, scale * high


def total_energy(problem: Problem, t, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """E(t) = (||u_t||^2 + ||(-Lap)^(sigma/2) u||^2)/2, conserved in t.

    The two pieces are integrated separately (each one oscillates in t), so
    constancy of their sum is a genuine end-to-end check of kernels and
    quadrature rather than an algebraic identity.
    """
    scale = (2.0 * math.pi) ** -problem.n
    kin, _ = _integrate_density(problem, "velocity", t, cfg)
    pot, _ = _integrate_density(problem, "op_energy", t, cfg)
    return 0.5 * scale * (kin + pot)


def antiderivative_identity_residual(problem: Problem, t,
                                     cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """|LHS - RHS| of the antiderivative energy identity.

    With V(t) = int_0^t u ds (so V(0) = 0, V_t(0) = u0):

        1/2 ||V_t(t)||^2 + 1/2 ||(-Lap)^(sigma/2) V(t)||^2
            = 1/2 ||u0||^2 + int u1 V(t) dx.

    The identity is exact, so the returned residual is pure quadrature
    error.  The three integrals grow with t while their combination stays
    at the initial-energy scale, so they are evaluated at a tightened
    relative tolerance to keep the residual meaningful in absolute terms.
    """
    if t == 0.0:
        return 0.0
    tight = QuadConfig(rel_tol=min(cfg.rel_tol, 1e-12), abs_tol=cfg.abs_tol,
                       max_halfperiods=cfg.max_halfperiods,
                       panel_order=cfg.panel_order,
                       tail_sigma_mult=cfg.tail_sigma_mult,
                       max_adaptive_panels=cfg.max_adaptive_panels)
    scale = (2.0 * math.pi) ** -problem.n
    vt_sq, _ = _integrate_density(problem, "displacement", t, tight)
    lap_sq, _ = _integrate_density(problem, "lap_antiderivative", t, tight)
    cross, _ = _integrate_density(problem, "source_cross", t, tight)
    lhs = 0.5 * scale * (vt_sq + lap_sq)
    rhs = 0.5 * model.l2_norm_data(problem.data0, problem.n) ** 2 + scale * cross
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Norm trajectories


@dataclass(frozen=True)
class NormSeries:
    """Sampled trajectory of one scalar functional of the solution."""

    t: np.ndarray
    value: np.ndarray
    err: np.ndarray
    quantity: str
    problem: dict

    def __post_init__(self):
        if len(self.t) == 0:
            raise ValueError("empty series")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t grid must be strictly increasing")
        if not np.all(np.isfinite(self.value)):
            raise ValueError("series values must be finite")

    def __len__(self):
        return len(self.t)

    def to_json(self):
        return {"quantity": self.quantity, "problem": self.problem,
                "points": [{"t": float(t), "value": float(v), "err": float(e)}
                           for t, v, e in zip(self.t, self.value, self.err)]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "value", "err"])
        for t, v, e in zip(self.t, self.value, self.err):
            writer.writerow([f"{t:.17g}", f"{v:.17g}", f"{e:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, quantity="norm_sq", problem=None):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0][:2]] != ["t", "value"]:
            raise ValueError("series CSV must start with a 't,value[,err]' header")
        t, v, e = [], [], []
        for row in rows[1:]:
            if not row:
                continue
            t.append(float(row[0]))
            v.append(float(row[1]))
            e.append(float(row[2]) if len(row) > 2 else 0.0)
        return cls(t=np.asarray(t), value=np.asarray(v), err=np.asarray(e),
                   quantity=quantity, problem=problem or {})


def _max_workers():
    value = os.environ.get("DRL_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    workers = _max_workers()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def norm_series(problem: Problem, t_grid, quantity="norm_sq",
                cfg: QuadConfig = DEFAULT_CONFIG, delta0=DEFAULT_DELTA0) -> NormSeries:
    """Evaluate one functional on an increasing t grid.

    Points are independent, so evaluation parallelises over t; the worker
    count is capped by the DRL_THREADS environment variable (default 1).
    """
    t_grid = np.asarray(list(t_grid), dtype=float)
    if t_grid.size == 0:
        raise ValueError("empty time grid")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {QUANTITIES}")

    def evaluate(t):
        if quantity in ("norm_sq", "norm"):
            v, e = norm_sq_with_error(problem, t, cfg)
            if quantity == "norm":
                v = math.sqrt(max(v, 0.0))
                e = 0.5 * e / v if v > 0 else e
            return v, e
        if quantity == "energy":
            return total_energy(problem, t, cfg), 0.0
        low, high = frequency_split(problem, t, delta0, cfg)
        return (low, 0.0) if quantity == "I_low" else (high, 0.0)

    pairs = _parallel_map(evaluate, list(t_grid))
    values = np.array([p[0] for p in pairs])
    errs = np.array([p[1] for p in pairs])
    return NormSeries(t=t_grid, value=values, err=errs,
                      quantity=quantity, problem=problem.to_json())


# ---------------------------------------------------------------------------
# Fitting and classification


@dataclass(frozen=True)
class FitResult:
    model: str                     # "power" | "log" | "constant"
    exponent: float                # power exponent, or slope of a log fit
    amplitude: float
    max_relative_residual: float
    window: tuple

    def to_json(self):
        return {"model": self.model, "exponent": self.exponent,
                "amplitude": self.amplitude,
                "max_relative_residual": self.max_relative_residual,
                "window": list(self.window)}


class GrowthClassificationError(RuntimeError):
    """Neither growth model matched within tolerance."""


def fit_power(series: NormSeries) -> FitResult:
    """Least squares on (log t, log value): value ~ amplitude * t^exponent."""
    if len(series) < 4:
        raise ValueError("power fit needs at least 4 points")
    if np.any(series.value <= 0):
        raise ValueError("power fit needs positive values")
    lt, lv = np.log(series.t), np.log(series.value)
    design = np.vstack([lt, np.ones_like(lt)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, lv, rcond=None)
    fitted = np.exp(design @ np.array([slope, intercept]))
    resid = float(np.max(np.abs(fitted - series.value) / np.abs(series.value)))
    return FitResult(model="power", exponent=float(slope),
                     amplitude=float(math.exp(intercept)),
                     max_relative_residual=resid,
                     window=(float(series.t[0]), float(series.t[-1])))


def fit_log(series: NormSeries) -> FitResult:
    """Least squares of value on log t: value ~ exponent * log t + amplitude."""
    if len(series) < 4:
        raise ValueError("log fit needs at least 4 points")
    lt = np.log(series.t)
    design = np.vstack([lt, np.ones_like(lt)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, series.value, rcond=None)
    fitted = design @ np.array([slope, intercept])
    denom = np.maximum(np.abs(series.value), 1e-300)
    resid = float(np.max(np.abs(fitted - series.value) / denom))
    return FitResult(model="log", exponent=float(slope), amplitude=float(intercept),
                     max_relative_residual=resid,
                     window=(float(series.t[0]), float(series.t[-1])))


@dataclass(frozen=True)
class Classification:
    kind: str                       # "power" | "log" | "bounded"
    exponent: float | None = None   # power exponent (kind == "power")
    slope: float | None = None      # log-fit slope (kind == "log")
    power_fit: FitResult | None = None
    log_fit: FitResult | None = None
    last_decade_variation: float | None = None

    def to_json(self):
        return {"kind": self.kind, "exponent": self.exponent, "slope": self.slope,
                "last_decade_variation": self.last_decade_variation}


BOUNDED_ALPHA = 0.05     # |power exponent| below this reads as flat


def last_decade_variation(series: NormSeries) -> float:
    """(max - min)/mean over the top decade of the t window."""
    mask = series.t >= series.t[-1] / 10.0
    vals = series.value[mask]
    return float((vals.max() - vals.min()) / np.abs(vals.mean()))


def classify_growth(series: NormSeries, tol=0.05) -> Classification:
    """Classify a squared-norm trajectory as power, log, or bounded.

    Power growth needs a clean log-log line with a material exponent; log
    growth needs the a log t + b model to beat it with a material positive
    rise; bounded needs a flat exponent and a quiet last decade.  Anything
    else raises :class:`GrowthClassificationError`.
    """
    if series.t[-1] / series.t[0] < 1e3:
        raise ValueError("classification needs a t window of at least 3 decades")
    pf = fit_power(series)
    lf = fit_log(series)
    var = last_decade_variation(series)
    common = dict(power_fit=pf, log_fit=lf, last_decade_variation=var)

    if abs(pf.exponent) <= BOUNDED_ALPHA and var <= tol:
        return Classification(kind="bounded", **common)
    rise = lf.exponent * (math.log(series.t[-1]) - math.log(series.t[0]))
    mean = float(np.mean(series.value))
    log_material = lf.exponent > 0 and rise > 0.1 * abs(mean)
    if lf.max_relative_residual <= tol and lf.max_relative_residual < pf.max_relative_residual and log_material:
        return Classification(kind="log", slope=lf.exponent, **common)
    if pf.max_relative_residual <= tol and abs(pf.exponent) > BOUNDED_ALPHA:
        return Classification(kind="power", exponent=pf.exponent, **common)
    raise GrowthClassificationError(
        f"no growth model within tol={tol}: power(alpha={pf.exponent:.4f}, "
        f"resid={pf.max_relative_residual:.3e}), log(slope={lf.exponent:.4f}, "
        f"resid={lf.max_relative_residual:.3e}), last-decade var={var:.3e}")


# ---------------------------------------------------------------------------
# Explicit bounds


def low_freq_lower_bound(P, n, delta0, t) -> float:
    """Guaranteed floor P^2/(32 n) omega_n delta0^n t^(2 - n/2) for ||w(t)||^2.

    Valid for the plate dispersion (sigma = 2) once t exceeds a data-
    dependent threshold; the scenario reports the first sampled t where the
    measured norm clears it.
    """
    if not 0.0 < delta0 < 1.0:
        raise ValueError("delta0 must lie in (0, 1)")
    if t <= 0:
        raise ValueError("t must be positive")
    return P * P / (32.0 * n) * model.surface_area(n) * delta0 ** n * t ** (2.0 - n / 2.0)


def high_dim_upper_bound(n, l1_u1, wsq_u1, wsq_u0) -> float:
    """Uniform-in-time bound on ||w(t)||^2 for n >= 5.

    2 omega_n/(n-4) ||u1||_1^2  +  2 ||w1||^2  +  ||w0||^2, from bounding
    the sine kernel by |w1|_inf <= ||u1||_1 below |xi| = 1 and by |xi|^-2
    above it.  No such bound exists for n <= 4, which is the whole point of
    the growth theory.
    """
    if n <= 4:
        raise ValueError("the uniform bound requires n >= 5")
    return 2.0 * model.surface_area(n) / (n - 4.0) * l1_u1 ** 2 + 2.0 * wsq_u1 + wsq_u0


def fourier_data_norm_sq(combo, n) -> float:
    """||FT(d)||^2_{L2(xi)} = (2 pi)^n ||d||^2, exact."""
    return (2.0 * math.pi) ** n * model.l2_norm_data(combo, n) ** 2
