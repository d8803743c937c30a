"""Cauchy data for u_tt + (-Laplace)^sigma u = 0 and its physical-space functionals.

Initial data live in the closed polynomial-times-Gaussian family: plain
Gaussians, their first derivatives along an axis (dipoles), the mixed
second derivative in two dimensions, and the Laplacian of a Gaussian.
Every member has an explicit Fourier transform of the same shape, which is
what keeps the whole pipeline (spectral profiles, radial reductions,
moments) in closed form.

Moments of the initial velocity are what the growth theory dispatches on:
the zeroth moment P, the first-moment vector P1, and the resulting order
kappa in {0, 1, 2} of the small-frequency expansion of the transform.
These vanish *structurally* (by parity of the integrand), so they are
returned as exact zeros rather than tiny floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .quadrature import QuadConfig, DEFAULT_CONFIG


class DataError(ValueError):
    """Invalid initial-data description."""


# ---------------------------------------------------------------------------
# Primitives


@dataclass(frozen=True)
class Gaussian:
    """exp(-a |x|^2)."""

    a: float

    kind = "gaussian"

    def validate(self, n):
        if self.a <= 0:
            raise DataError(f"gaussian width must be positive, got a={self.a}")

    def to_json(self):
        return {"kind": self.kind, "a": self.a}


@dataclass(frozen=True)
class Dipole:
    """d/dx_axis exp(-a |x|^2); axis is 1-based."""

    a: float
    axis: int

    kind = "dipole"

    def validate(self, n):
        if self.a <= 0:
            raise DataError(f"dipole width must be positive, got a={self.a}")
        if not 1 <= self.axis <= n:
            raise DataError(f"dipole axis {self.axis} out of range for n={n}")

    def to_json(self):
        return {"kind": self.kind, "a": self.a, "axis": self.axis}


@dataclass(frozen=True)
class TensorDipole:
    """d^2/dx_1 dx_2 exp(-a |x|^2); only defined in two dimensions."""

    a: float

    kind = "tensor_dipole"

    def validate(self, n):
        if self.a <= 0:
            raise DataError(f"tensor dipole width must be positive, got a={self.a}")
        if n != 2:
            raise DataError(f"tensor dipole requires n=2, got n={n}")

    def to_json(self):
        return {"kind": self.kind, "a": self.a}


@dataclass(frozen=True)
class LapGaussian:
    """Laplace exp(-a |x|^2) = (4 a^2 |x|^2 - 2 a n) exp(-a |x|^2)."""

    a: float

    kind = "lap_gaussian"

    def validate(self, n):
        if self.a <= 0:
            raise DataError(f"width must be positive, got a={self.a}")

    def to_json(self):
        return {"kind": self.kind, "a": self.a}


PRIMITIVE_KINDS = {
    "gaussian": Gaussian,
    "dipole": Dipole,
    "tensor_dipole": TensorDipole,
    "lap_gaussian": LapGaussian,
}


def _primitive_from_json(obj):
    try:
        kind = obj["kind"]
    except (TypeError, KeyError):
        raise DataError(f"primitive description needs a 'kind': {obj!r}")
    if kind == "gaussian":
        return Gaussian(float(obj["a"]))
    if kind == "dipole":
        return Dipole(float(obj["a"]), int(obj["axis"]))
    if kind == "tensor_dipole":
        return TensorDipole(float(obj["a"]))
    if kind == "lap_gaussian":
        return LapGaussian(float(obj["a"]))
    raise DataError(f"unknown primitive kind {kind!r}")


# ---------------------------------------------------------------------------
# Combos and problems


@dataclass(frozen=True)
class DataCombo:
    """Finite linear combination of primitives; empty means the zero function."""

    terms: tuple

    @property
    def is_zero(self):
        return len(self.terms) == 0

    def to_json(self):
        return {"terms": [{"coeff": c, "prim": p.to_json()} for c, p in self.terms]}

    @classmethod
    def from_json(cls, obj, n):
        try:
            raw = obj["terms"]
        except (TypeError, KeyError):
            raise DataError(f"combo description needs 'terms': {obj!r}")
        terms = [(float(item["coeff"]), _primitive_from_json(item["prim"]))
                 for item in raw]
        return build_data(terms, n)


def build_data(terms, n) -> DataCombo:
    """Validate and freeze a coefficient/primitive list for dimension n."""
    if n < 1 or int(n) != n:
        raise DataError(f"dimension must be a positive integer, got {n}")
    out = []
    for coeff, prim in terms:
        prim.validate(n)
        coeff = float(coeff)
        if coeff != 0.0:
            out.append((coeff, prim))
    return DataCombo(terms=tuple(out))


ZERO = DataCombo(terms=())


@dataclass(frozen=True)
class Problem:
    """Cauchy problem: dimension, operator exponent, displacement/velocity data.

    sigma = 2 is the plate equation; the Fourier multiplier of the spatial
    operator is |xi|^(2 sigma) for any sigma > 0.
    """

    n: int
    sigma: float
    data0: DataCombo
    data1: DataCombo

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise DataError(f"dimension must be a positive integer, got {self.n}")
        if self.sigma <= 0:
            raise DataError(f"sigma must be positive, got {self.sigma}")
        for combo in (self.data0, self.data1):
            for _, prim in combo.terms:
                prim.validate(self.n)

    def to_json(self):
        return {"n": self.n, "sigma": self.sigma,
                "u0": self.data0.to_json(), "u1": self.data1.to_json()}

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["n"])
        except (TypeError, KeyError):
            raise DataError(f"problem description needs 'n': {obj!r}")
        sigma = float(obj.get("sigma", 2.0))
        u0 = DataCombo.from_json(obj["u0"], n) if "u0" in obj else ZERO
        u1 = DataCombo.from_json(obj["u1"], n) if "u1" in obj else ZERO
        return cls(n=n, sigma=sigma, data0=u0, data1=u1)

    @classmethod
    def from_json_str(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"problem JSON does not parse: {exc}") from exc
        return cls.from_json(obj)


# ---------------------------------------------------------------------------
# Moments


@dataclass(frozen=True)
class Moments:
    """Zeroth/first moments of a datum and the implied small-frequency order.

    decay_order is 0 when P != 0, 1 when P = 0 but P1 != 0, and 2 when both
    vanish; it equals the leading power of |xi| in the transform at xi = 0.
    """

    P: float
    P1: tuple
    decay_order: int


def moments(combo: DataCombo, n) -> Moments:
    """Exact moments from Gaussian integrals and integration by parts.

    int exp(-a|x|^2) = (pi/a)^(n/2);  int x_j d_j exp(-a|x|^2) = -(pi/a)^(n/2);
    every other primitive moment vanishes by parity.
    """
    P = 0.0
    P1 = [0.0] * n
    for coeff, prim in combo.terms:
        if isinstance(prim, Gaussian):
            P += coeff * (math.pi / prim.a) ** (n / 2.0)
        elif isinstance(prim, Dipole):
            P1[prim.axis - 1] -= coeff * (math.pi / prim.a) ** (n / 2.0)
        # TensorDipole and LapGaussian: all moments through first order vanish
    if P != 0.0:
        kappa = 0
    elif any(c != 0.0 for c in P1):
        kappa = 1
    else:
        kappa = 2
    return Moments(P=P, P1=tuple(P1), decay_order=kappa)


# ---------------------------------------------------------------------------
# L2 norm (closed form)

def _pair_inner(p1, p2, n):
    """<p1, p2> in L2(R^n) for two primitives, via Gaussian moment identities."""
    s = p1.a + p2.a
    base = (math.pi / s) ** (n / 2.0)
    ordered = tuple(sorted((p1.kind, p2.kind)))
    if ordered == ("gaussian", "gaussian"):
        return base
    if ordered == ("dipole", "dipole"):
        if p1.axis != p2.axis:
            return 0.0
        return 2.0 * p1.a * p2.a / s * base
    if ordered == ("gaussian", "lap_gaussian"):
        # int g Lap h = -int grad g . grad h
        return -2.0 * p1.a * p2.a * n / s * base
    if ordered == ("lap_gaussian", "lap_gaussian"):
        a, b = p1.a, p2.a
        m0 = base
        m2 = n / (2.0 * s) * base
        m4 = n * (n + 2) / (4.0 * s * s) * base
        return 16 * a * a * b * b * m4 - 8 * a * b * (a + b) * n * m2 + 4 * a * b * n * n * m0
    if ordered == ("tensor_dipole", "tensor_dipole"):
        return 4.0 * p1.a ** 2 * p2.a ** 2 / s ** 2 * base
    # every remaining pairing is odd in at least one coordinate
    return 0.0


def l2_norm_data(combo: DataCombo, n) -> float:
    """Exact L2(R^n) norm of the combo."""
    acc = 0.0
    for c1, p1 in combo.terms:
        for c2, p2 in combo.terms:
            acc += c1 * c2 * _pair_inner(p1, p2, n)
    return math.sqrt(max(acc, 0.0))


# ---------------------------------------------------------------------------
# Weighted L1 norms


def _angular_family(prim):
    """Tag identifying the angular factor of |primitive| on the sphere."""
    if isinstance(prim, (Gaussian, LapGaussian)):
        return "radial"
    if isinstance(prim, Dipole):
        return ("axis", prim.axis)
    return "tensor"


def _abs_angular_integral(prim, n):
    """int_{S^(n-1)} |angular factor| domega for one primitive family.

    Uses int |w_1|^p |w_2|^q domega
        = 2 Gamma((p+1)/2) Gamma((q+1)/2) Gamma(1/2)^(n-2) / Gamma((n+p+q)/2).
    """
    if isinstance(prim, (Gaussian, LapGaussian)):
        return surface_area(n)
    if isinstance(prim, Dipole):
        return (2.0 * math.gamma(1.0) * math.pi ** ((n - 1) / 2.0)
                / math.gamma((n + 1) / 2.0))
    # tensor dipole, n = 2: int |w1 w2| domega
    return 2.0


def _radial_factor(combo: DataCombo, n):
    """Signed radial profile g(r) with |d(r w)| = |g(r)| * |angular(w)|."""
    def g(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for coeff, prim in combo.terms:
            e = np.exp(-prim.a * r * r)
            if isinstance(prim, Gaussian):
                out += coeff * e
            elif isinstance(prim, LapGaussian):
                out += coeff * (4 * prim.a ** 2 * r * r - 2 * prim.a * n) * e
            elif isinstance(prim, Dipole):
                out += coeff * (-2.0 * prim.a) * r * e
            else:  # TensorDipole
                out += coeff * 4.0 * prim.a ** 2 * r * r * e
        return out

    return g


def _sign_change_edges(g, r_max, samples=600):
    """Roots of the radial factor inside (0, r_max), found by scan + bisection."""
    rs = np.linspace(0.0, r_max, samples + 1)[1:]
    vals = g(rs)
    edges = []
    for i in range(len(rs) - 1):
        if vals[i] == 0.0:
            edges.append(rs[i])
        elif vals[i] * vals[i + 1] < 0.0:
            edges.append(brentq(lambda x: float(g(np.array([x]))[0]), rs[i], rs[i + 1]))
    return edges


def l1_weighted_norm(combo: DataCombo, gamma, n, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Weighted L1 norm int (1 + |x|^gamma) |d(x)| dx, gamma >= 0.

    Works for combos whose terms share one angular family (all radial, all
    dipoles on a common axis, or tensor dipoles), where |d| factors into a
    signed radial profile and a fixed angular part.  Mixed-symmetry combos
    have no such factorisation and are rejected.
    """
    if gamma < 0:
        raise DataError(f"gamma must be nonnegative, got {gamma}")
    if combo.is_zero:
        return 0.0
    families = {_angular_family(p) for _, p in combo.terms}
    if len(families) > 1:
        raise DataError(
            "weighted L1 norm needs a single angular family; "
            f"combo mixes {sorted(map(str, families))}")
    angular = _abs_angular_integral(combo.terms[0][1], n)
    g = _radial_factor(combo, n)
    a_min = min(prim.a for _, prim in combo.terms)
    r_max = math.sqrt((math.log(1.0 / cfg.abs_tol) + (n + gamma) * 4.0) / a_min)
    edges = _sign_change_edges(g, r_max)

    def density(r):
        return np.abs(g(r)) * (1.0 + r ** gamma)

    total, err = 0.0, 0.0
    bounds = [0.0] + edges + [r_max]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        v, e = quadrature.integrate_radial(density, n, (lo, hi), cfg=cfg)
        total += v
        err += e
    return angular * total


def l1_norm(combo: DataCombo, n, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Plain L1 norm; equals half the gamma = 0 weighted norm."""
    return 0.5 * l1_weighted_norm(combo, 0.0, n, cfg=cfg)


def surface_area(n) -> float:
    """Surface area omega_n of the unit sphere in R^n (omega_1 = 2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
