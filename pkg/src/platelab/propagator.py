"""Exact Fourier-space propagation of the Cauchy problem.

The transform of the solution factorises mode by mode:

    w(t, xi) = sin(t r^sigma)/r^sigma * w1(xi) + cos(t r^sigma) * w0(xi),
    r = |xi|,

and its time antiderivative V(t, xi) = int_0^t w(s, xi) ds is

    V(t, xi) = (1 - cos(t r^sigma))/r^(2 sigma) * w1 + sin(t r^sigma)/r^sigma * w0.

Both kernels have removable singularities at r = 0; they are evaluated in
sinc / half-angle form so no digits are lost when the phase t r^sigma is
small, no matter how large t is.  Squared magnitudes averaged over
directions reduce to combinations of the three radial profiles, which is
what the density functions below return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .spectra import SpectralProfiles


@dataclass(frozen=True)
class KernelPair:
    """Sine kernel s = sin(t r^sigma)/r^sigma, cosine kernel c, shared phase."""

    s: float
    c: float
    phase: float


def kernels(t, r, sigma):
    """Dispersion kernels at time t and radial frequency r (vectorised).

    s has the removable limit s -> t as r -> 0; |c| <= 1 and |s| <= t
    everywhere.  Scalar inputs give a KernelPair, arrays give arrays.
    """
    scalar = np.isscalar(r) and np.isscalar(t)
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** sigma
    s = t * np.sinc(phase / np.pi)        # sin(phase)/phase * t, stable at 0
    c = np.cos(phase)
    if scalar:
        return KernelPair(s=float(s), c=float(c), phase=float(phase))
    return s, c, phase


def _half_angle_kernel(t, r, sigma):
    """(1 - cos(t r^sigma)) / r^(2 sigma) = (t^2/2) sinc^2(phase/2), stable."""
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** sigma
    return 0.5 * t * t * np.sinc(0.5 * phase / np.pi) ** 2


def displacement_density(prof: SpectralProfiles, t, r):
    """Angular integral of |w(t, r w)|^2: s^2 S1 + c^2 S0 + 2 s c X."""
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** prof.sigma
    s = t * np.sinc(phase / np.pi)
    c = np.cos(phase)
    out = s * s * prof.S1(r_arr) + c * c * prof.S0(r_arr) + 2.0 * s * c * prof.X(r_arr)
    return out if not np.isscalar(r) else float(out)


def velocity_density(prof: SpectralProfiles, t, r):
    """Angular integral of |w_t(t, r w)|^2.

    w_t = cos(t r^sigma) w1 - r^sigma sin(t r^sigma) w0, hence
    c^2 S1 + r^(2 sigma) sin^2 S0 - 2 r^sigma c sin X.
    """
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** prof.sigma
    sn = np.sin(phase)
    c = np.cos(phase)
    rs = r_arr ** prof.sigma
    out = (c * c * prof.S1(r_arr) + rs * rs * sn * sn * prof.S0(r_arr)
           - 2.0 * rs * c * sn * prof.X(r_arr))
    return out if not np.isscalar(r) else float(out)


class AntiderivativeDensity(NamedTuple):
    rhoV: float
    rhoVt: float
    lapV_sq_density: float


def antiderivative_density(prof: SpectralProfiles, t, r):
    """Densities of the time antiderivative V: |V|^2, |V_t|^2, r^(2 sigma)|V|^2.

    V_t = w, so rhoVt coincides with the displacement density.  The
    (1 - cos)/r^(2 sigma) factor is evaluated in half-angle form with limit
    t^2/2 at r = 0.
    """
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** prof.sigma
    A = _half_angle_kernel(t, r_arr, prof.sigma)
    B = t * np.sinc(phase / np.pi)
    S0, S1, X = prof.S0(r_arr), prof.S1(r_arr), prof.X(r_arr)
    rhoV = A * A * S1 + B * B * S0 + 2.0 * A * B * X
    rhoVt = displacement_density(prof, t, r_arr)
    lap = r_arr ** (2.0 * prof.sigma) * rhoV
    if np.isscalar(r):
        return AntiderivativeDensity(float(rhoV), float(rhoVt), float(lap))
    return AntiderivativeDensity(rhoV, rhoVt, lap)


def source_cross_density(prof: SpectralProfiles, t, r):
    """Angular integral of Re[w1 conj(V)]: the u1-against-V pairing density."""
    r_arr = np.asarray(r, dtype=float)
    phase = t * r_arr ** prof.sigma
    A = _half_angle_kernel(t, r_arr, prof.sigma)
    B = t * np.sinc(phase / np.pi)
    out = A * prof.S1(r_arr) + B * prof.X(r_arr)
    return out if not np.isscalar(r) else float(out)


def energy_density(prof: SpectralProfiles, t, r):
    """rho_v + r^(2 sigma) rho_u; pointwise equal to S1 + r^(2 sigma) S0."""
    r_arr = np.asarray(r, dtype=float)
    out = (velocity_density(prof, t, r_arr)
           + r_arr ** (2.0 * prof.sigma) * displacement_density(prof, t, r_arr))
    return out if not np.isscalar(r) else float(out)
