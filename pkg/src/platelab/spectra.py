"""Fourier transforms of the data family and their angular-averaged profiles.

Convention: FT(f)(xi) = int exp(-i x.xi) f(x) dx, so d/dx_j maps to a
factor of i xi_j and the Gaussian exp(-a|x|^2) maps to
(pi/a)^(n/2) exp(-|xi|^2 / (4a)).

All L2(xi) quantities of the solution depend on the data only through
three radial profiles obtained by integrating over directions:

    S0(r) = int_{S^(n-1)} |FT(u0)(r w)|^2 dw
    S1(r) = int_{S^(n-1)} |FT(u1)(r w)|^2 dw
    X(r)  = int_{S^(n-1)} Re[FT(u1)(r w) conj(FT(u0)(r w))] dw

Products of monomials average over the sphere in closed form, so each
profile is again a polynomial-times-Gaussian sum, exactly representable
and evaluable at arbitrary radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .model import DataCombo, Dipole, Gaussian, LapGaussian, Problem, TensorDipole
from .quadrature import PowerGauss


# ---------------------------------------------------------------------------
# Sphere averages of monomials


def sphere_monomial_integral(alpha, n) -> float:
    """int_{S^(n-1)} w^alpha dw for a multi-index alpha.

    Zero when any entry of alpha is odd; otherwise
    2 prod Gamma((alpha_i + 1)/2) / Gamma((n + |alpha|)/2).
    """
    if len(alpha) != n:
        raise ValueError(f"multi-index length {len(alpha)} != n={n}")
    if any(a % 2 for a in alpha):
        return 0.0
    num = 2.0
    for a in alpha:
        num *= math.gamma((a + 1) / 2.0)
    return num / math.gamma((n + sum(alpha)) / 2.0)


def surface_area(n) -> float:
    """omega_n, the total measure of S^(n-1)."""
    return model.surface_area(n)


# ---------------------------------------------------------------------------
# Fourier-side representations


@dataclass(frozen=True)
class PolyGaussFourier:
    """Transform sum_alpha c_alpha xi^alpha exp(-width |xi|^2).

    ``monomials`` maps multi-indices (length n tuples) to complex
    coefficients.  Realness of the original datum shows up as the usual
    parity rule: even monomials carry real coefficients, odd ones purely
    imaginary.
    """

    monomials: dict
    width: float
    n: int

    def value(self, xi):
        """Evaluate at points of shape (..., n)."""
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.n:
            raise ValueError(f"points must have last dimension {self.n}")
        r_sq = np.sum(xi * xi, axis=-1)
        out = np.zeros(r_sq.shape, dtype=complex)
        for alpha, c in self.monomials.items():
            term = np.ones(r_sq.shape)
            for j, a in enumerate(alpha):
                if a:
                    term = term * xi[..., j] ** a
            out += c * term
        return out * np.exp(-self.width * r_sq)


@dataclass(frozen=True)
class PolyGaussRadial:
    """Radial sum_i c_i r^(2 k_i) exp(-b_i r^2), closed under + and *."""

    terms: tuple   # of (coeff, k, width)

    @classmethod
    def from_terms(cls, terms):
        merged = {}
        for c, k, b in terms:
            if c == 0.0:
                continue
            key = (int(k), float(b))
            merged[key] = merged.get(key, 0.0) + float(c)
        clean = tuple((c, k, b) for (k, b), c in sorted(merged.items()) if c != 0.0)
        return cls(terms=clean)

    @property
    def is_zero(self):
        return len(self.terms) == 0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        r2 = r * r
        out = np.zeros_like(r)
        for c, k, b in self.terms:
            out += c * r2 ** k * np.exp(-b * r2)
        return out

    def __add__(self, other):
        return PolyGaussRadial.from_terms(self.terms + other.terms)

    def scaled(self, factor):
        return PolyGaussRadial.from_terms(tuple((c * factor, k, b) for c, k, b in self.terms))

    def __mul__(self, other):
        prod = []
        for c1, k1, b1 in self.terms:
            for c2, k2, b2 in other.terms:
                prod.append((c1 * c2, k1 + k2, b1 + b2))
        return PolyGaussRadial.from_terms(prod)

    def value_at_zero(self):
        return sum(c for c, k, _ in self.terms if k == 0)

    def moment_integral(self, power) -> float:
        """Exact int_0^inf value(r) r^power dr; needs power + 2 min(k) > -1."""
        total = 0.0
        for c, k, b in self.terms:
            s = 0.5 * (2 * k + power + 1.0)
            if s <= 0:
                raise ValueError(f"divergent radial moment: power={power}, k={k}")
            total += c * 0.5 * math.gamma(s) * b ** -s
        return total

    def as_power_gauss(self, power=0.0) -> PowerGauss:
        return PowerGauss.from_terms(power, self.terms)


ZERO_RADIAL = PolyGaussRadial(terms=())


@dataclass(frozen=True)
class SpectralProfiles:
    """The three angular profiles of a problem plus its (n, sigma)."""

    S0: PolyGaussRadial
    S1: PolyGaussRadial
    X: PolyGaussRadial
    n: int
    sigma: float


# ---------------------------------------------------------------------------
# Transforms of the primitives


def fourier_profile(prim, n) -> PolyGaussFourier:
    """Closed-form transform of one primitive."""
    prim.validate(n)
    a = prim.a
    amp = (math.pi / a) ** (n / 2.0)
    width = 1.0 / (4.0 * a)
    zero = (0,) * n
    if isinstance(prim, Gaussian):
        monomials = {zero: complex(amp)}
    elif isinstance(prim, Dipole):
        alpha = tuple(1 if j == prim.axis - 1 else 0 for j in range(n))
        monomials = {alpha: 1j * amp}
    elif isinstance(prim, TensorDipole):
        monomials = {(1, 1): complex(-amp)}
    elif isinstance(prim, LapGaussian):
        monomials = {}
        for j in range(n):
            alpha = tuple(2 if i == j else 0 for i in range(n))
            monomials[alpha] = complex(-amp)
    else:
        raise model.DataError(f"unknown primitive {prim!r}")
    return PolyGaussFourier(monomials=monomials, width=width, n=n)


def combo_fourier(combo: DataCombo, n):
    """List of (real coefficient, PolyGaussFourier) pairs for a combo."""
    return [(coeff, fourier_profile(prim, n)) for coeff, prim in combo.terms]


# ---------------------------------------------------------------------------
# Angular averaging


def angular_cross(fA: PolyGaussFourier, fB: PolyGaussFourier, n) -> PolyGaussRadial:
    """int_{S^(n-1)} Re[fA(r w) conj(fB(r w))] dw as a radial profile.

    Odd monomial products drop out on the sphere; the surviving even ones
    contribute Re(c_alpha conj(d_beta)) times the closed-form sphere
    moment, at radial power (|alpha| + |beta|)/2 and combined width.
    """
    if fA.n != n or fB.n != n:
        raise ValueError("profiles live in a different dimension")
    width = fA.width + fB.width
    terms = []
    for alpha, ca in fA.monomials.items():
        for beta, cb in fB.monomials.items():
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            weight = sphere_monomial_integral(gamma, n)
            if weight == 0.0:
                continue
            coeff = (ca * cb.conjugate()).real * weight
            terms.append((coeff, sum(gamma) // 2, width))
    return PolyGaussRadial.from_terms(terms)


def cross_profile(comboA: DataCombo, comboB: DataCombo, n) -> PolyGaussRadial:
    """Angular cross profile of two combos, expanded over primitive pairs."""
    fa = combo_fourier(comboA, n)
    fb = combo_fourier(comboB, n)
    out = ZERO_RADIAL
    for cA, pA in fa:
        for cB, pB in fb:
            out = out + angular_cross(pA, pB, n).scaled(cA * cB)
    return out


def spectral_profiles(problem: Problem) -> SpectralProfiles:
    """Angular profiles S0, S1, X of a Cauchy problem."""
    n = problem.n
    return SpectralProfiles(
        S0=cross_profile(problem.data0, problem.data0, n),
        S1=cross_profile(problem.data1, problem.data1, n),
        X=cross_profile(problem.data1, problem.data0, n),
        n=n,
        sigma=problem.sigma,
    )


def sup_fourier_bound(combo: DataCombo, n) -> float:
    """L1 norm of the datum, a uniform bound on |FT(combo)| over all xi."""
    return model.l1_norm(combo, n)
