"""Chain parametrization and the spectral-condition coefficients.

The spectrum of the periodic ring chain is governed, at energy k^2 (or
-kappa^2 on the negative side), by the condition

    a * cos(theta) + b * sin(theta) = c,

where theta is the quasimomentum of the Floquet fiber and (a, b, c) are
trigonometric (hyperbolic, for negative energy) expressions in the chain
geometry.  A point belongs to a spectral band iff a^2 + b^2 - c^2 >= 0;
a = b = c = 0 marks an infinitely degenerate eigenvalue (flat band).

Three variants are supported: the generic three-edge-vertex chain with a
connecting link (``loose``), the chain of directly touching rings
(``tight``, l1 = 0) and the chain with the two ring contacts merged
(``merged``, l3 = 2*pi, i.e. l2 = 0).  The ring circumference is fixed at
l2 + l3 = 2*pi; other sizes are reachable by scaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import kernels

TWO_PI = 2.0 * math.pi

#: relative tolerance of the flat-point test: a point is flat when
#: a^2 + b^2 < (FLAT_TOL * scale)^2 and |c| < FLAT_TOL * scale, with scale
#: the magnitude of the coefficient formulas at that momentum (the
#: coefficients grow like k^4 * ell^4, so an absolute test would misfire
#: at high energy).
FLAT_TOL = 1e-9


class Variant(str, Enum):
    LOOSE = "loose"
    TIGHT = "tight"
    MERGED = "merged"


class EnergySign(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class ChainSpec:
    """Geometry of one chain: vertex length scale ell, link length l1,
    lower-arc length l3 and magnetic potential A (flux / 2*pi).

    The upper arc l2 = 2*pi - l3 is always derived, never stored.
    """

    ell: float
    l1: float
    l3: float
    A: float
    variant: Variant

    def __post_init__(self):
        if not (self.ell > 0):
            raise ValueError("ell must be positive")
        if not (0 < self.l3 <= TWO_PI):
            raise ValueError("l3 must lie in (0, 2*pi]")
        if self.l1 < 0:
            raise ValueError("l1 must be nonnegative")
        if self.variant == Variant.TIGHT:
            if self.l1 != 0.0:
                raise ValueError("tight variant requires l1 = 0")
            if self.l3 >= TWO_PI:
                raise ValueError("tight variant requires l3 < 2*pi")
        elif self.variant == Variant.MERGED:
            if self.l3 != TWO_PI:
                raise ValueError("merged variant requires l3 = 2*pi")
            if self.l1 <= 0:
                raise ValueError("merged variant requires l1 > 0")
        else:
            if self.l1 <= 0 or self.l3 >= TWO_PI:
                raise ValueError("loose variant requires l1 > 0 and l3 < 2*pi")

    @property
    def l2(self) -> float:
        return TWO_PI - self.l3

    @property
    def symmetric(self) -> bool:
        return abs(self.l3 - math.pi) < 1e-12

    @classmethod
    def loose(cls, ell: float, l1: float, l3: float, A: float) -> "ChainSpec":
        return cls(ell, l1, l3, A, Variant.LOOSE)

    @classmethod
    def tight(cls, ell: float, l3: float, A: float) -> "ChainSpec":
        return cls(ell, 0.0, l3, A, Variant.TIGHT)

    @classmethod
    def merged(cls, ell: float, l1: float, A: float) -> "ChainSpec":
        return cls(ell, l1, TWO_PI, A, Variant.MERGED)

    def replace(self, **kw) -> "ChainSpec":
        fields = dict(ell=self.ell, l1=self.l1, l3=self.l3, A=self.A, variant=self.variant)
        fields.update(kw)
        return ChainSpec(**fields)


@dataclass(frozen=True)
class SpectralPoint:
    """A momentum: k for energy k^2, or kappa for energy -kappa^2."""

    momentum: float
    sign: EnergySign
    theta: Optional[float] = None

    def __post_init__(self):
        if not (self.momentum > 0):
            raise ValueError("momentum must be positive")
        if self.theta is not None and not (-math.pi <= self.theta < math.pi):
            raise ValueError("theta must lie in [-pi, pi)")

    @classmethod
    def positive(cls, k: float, theta: Optional[float] = None) -> "SpectralPoint":
        return cls(k, EnergySign.POSITIVE, theta)

    @classmethod
    def negative(cls, kappa: float, theta: Optional[float] = None) -> "SpectralPoint":
        return cls(kappa, EnergySign.NEGATIVE, theta)

    @property
    def energy(self) -> float:
        e = self.momentum ** 2
        return e if self.sign == EnergySign.POSITIVE else -e


@dataclass(frozen=True)
class SpectralCoefficients:
    """The triple (a, b, c) of one spectral-condition evaluation.

    ``scale`` is the magnitude of the defining formulas at the evaluation
    point; all tolerance tests on (a, b, c) are relative to it.
    """

    a: float
    b: float
    c: float
    scale: float = 1.0

    @property
    def discriminant(self) -> float:
        return self.a * self.a + self.b * self.b - self.c * self.c

    @property
    def phase(self) -> Optional[float]:
        """The angle with sin = a/sqrt(a^2+b^2), cos = b/sqrt(a^2+b^2);
        undefined (None) when a^2 + b^2 = 0."""
        r2 = self.a * self.a + self.b * self.b
        if r2 <= 0.0:
            return None
        return math.atan2(self.a, self.b)

    def is_flat(self, tol: float = FLAT_TOL) -> bool:
        s = max(1.0, self.scale)
        return (self.a * self.a + self.b * self.b) < (tol * s) ** 2 and abs(self.c) < tol * s


def discriminant(coeffs: SpectralCoefficients) -> float:
    """a^2 + b^2 - c^2; its sign is invariant under a common positive
    rescaling of (a, b, c)."""
    return coeffs.discriminant


def coefficient_arrays(spec: ChainSpec, momenta, sign: EnergySign = EnergySign.POSITIVE,
                       scaled: bool = True):
    """Vectorized coefficient evaluation.

    Returns ``(a, b, c, scale)`` arrays over ``momenta``.  On the negative
    side ``scaled=True`` (the default) keeps the common overflow-guard
    factor exp(-kappa*(2*pi + l1)) (exp(-2*kappa*pi) for the tight chain)
    in the output.
    """
    momenta = np.asarray(momenta, dtype=np.float64)
    if momenta.size and not np.all(momenta > 0):
        raise ValueError("momenta must be positive")
    if sign == EnergySign.POSITIVE:
        if spec.variant == Variant.LOOSE:
            return kernels.loose_pos_abc(momenta, spec.ell, spec.l1, spec.l3, spec.A)
        if spec.variant == Variant.TIGHT:
            return kernels.tight_pos_abc(momenta, spec.ell, spec.l3, spec.A)
        return kernels.merged_pos_abc(momenta, spec.ell, spec.l1, spec.A)
    if spec.variant == Variant.LOOSE:
        return kernels.loose_neg_abc(momenta, spec.ell, spec.l1, spec.l3, spec.A, scaled)
    if spec.variant == Variant.TIGHT:
        return kernels.tight_neg_abc(momenta, spec.ell, spec.l3, spec.A, scaled)
    return kernels.merged_neg_abc(momenta, spec.ell, spec.l1, spec.A, scaled)


def _coefficients(spec: ChainSpec, point: SpectralPoint, scaled: bool) -> SpectralCoefficients:
    a, b, c, s = coefficient_arrays(spec, np.array([point.momentum]), point.sign, scaled)
    return SpectralCoefficients(float(a[0]), float(b[0]), float(c[0]), float(s[0]))


def coefficients(spec: ChainSpec, point: SpectralPoint, scaled: bool = True) -> SpectralCoefficients:
    """Evaluate (a, b, c) for any variant at one spectral point."""
    return _coefficients(spec, point, scaled)


def coefficients_loose(spec: ChainSpec, point: SpectralPoint, scaled: bool = True) -> SpectralCoefficients:
    if spec.variant != Variant.LOOSE:
        raise ValueError("coefficients_loose requires a loose-variant spec")
    return _coefficients(spec, point, scaled)


def coefficients_tight(spec: ChainSpec, point: SpectralPoint, scaled: bool = True) -> SpectralCoefficients:
    if spec.variant != Variant.TIGHT:
        raise ValueError("coefficients_tight requires a tight-variant spec")
    return _coefficients(spec, point, scaled)


def coefficients_merged(spec: ChainSpec, point: SpectralPoint, scaled: bool = True) -> SpectralCoefficients:
    if spec.variant != Variant.MERGED:
        raise ValueError("coefficients_merged requires a merged-variant spec")
    return _coefficients(spec, point, scaled)


@dataclass(frozen=True)
class DispersionSolution:
    """Solution set of a*cos(theta) + b*sin(theta) = c over [-pi, pi).

    ``kind`` is "all" (flat point: every theta solves), "empty" (gap) or
    "points" with one or two theta values in ``thetas``.
    """

    kind: str
    thetas: tuple = ()

    @property
    def in_band(self) -> bool:
        return self.kind != "empty"


def _wrap(theta: float) -> float:
    return (theta + math.pi) % TWO_PI - math.pi


def dispersion_theta(coeffs: SpectralCoefficients, flat_tol: float = FLAT_TOL) -> DispersionSolution:
    """Classify and solve the spectral condition in theta.

    Both arcsine branches are reported; they merge to a single value at a
    band edge (|c| = sqrt(a^2+b^2)).
    """
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    if coeffs.is_flat(flat_tol):
        return DispersionSolution("all")
    r2 = a * a + b * b
    if r2 < c * c or r2 == 0.0:
        return DispersionSolution("empty")
    ratio = c / math.sqrt(r2)
    ratio = max(-1.0, min(1.0, ratio))
    vartheta = math.atan2(a, b)
    t1 = _wrap(math.asin(ratio) - vartheta)
    t2 = _wrap(math.pi - math.asin(ratio) - vartheta)
    if t1 > t2:
        t1, t2 = t2, t1
    if t2 - t1 < 1e-15 or TWO_PI - (t2 - t1) < 1e-15:
        return DispersionSolution("points", (t1,))
    return DispersionSolution("points", (t1, t2))


@dataclass(frozen=True)
class SpecialFunctions:
    """Named auxiliary functions of the band analysis.

    Fields outside their defining context are None (undefined), never 0:
    lambda_plus/lambda_minus, tau/rho and h are positive-energy objects;
    f governs the large-l1 shrink points of negative bands (loose and
    merged chains); g is the symmetric (l3 = pi) loose-chain negative
    dispersion at half-integer flux, cos(theta) = g(kappa).
    """

    lambda_plus: Optional[float] = None
    lambda_minus: Optional[float] = None
    tau: Optional[float] = None
    rho: Optional[float] = None
    f_value: Optional[float] = None
    g_value: Optional[float] = None
    h_value: Optional[float] = None
    cal_a: Optional[float] = None


def lambda_pm(k: float, ell: float, A: float) -> tuple:
    """Lambda_+/- = 4*(k*ell+1)^2*sin((A+k)*pi) +/- 4*(k*ell-1)^2*sin((A-k)*pi)."""
    t1 = 4.0 * (k * ell + 1.0) ** 2 * math.sin((A + k) * math.pi)
    t2 = 4.0 * (k * ell - 1.0) ** 2 * math.sin((A - k) * math.pi)
    return t1 + t2, t1 - t2


def tau_rho(k: float, ell: float, l1: float, l3: float) -> tuple:
    kl2 = (k * ell) ** 2
    tau = 2.0 * ((kl2 - 1.0) ** 2 * math.cos(2.0 * k * (math.pi - l3))
                 - 4.0 * (kl2 + 1.0)) * math.sin(k * l1)
    rho = ((kl2 - 1.0) ** 2 * math.sin(k * (TWO_PI - l1))
           - (kl2 + 3.0) ** 2 * math.sin(k * (l1 + TWO_PI)))
    return tau, rho


def shrink_point_function(ell: float, l3: float, A: float, kappa: float) -> float:
    """f(ell, l3, A; kappa): negative bands shrink to its roots as l1 grows.

    At l3 = 2*pi (merged chain) this reduces exactly to
    4*(kappa^2*ell^2 - 1)*(cos(2*A*pi) - e^{2*kappa*pi}) + 8*kappa*ell*sin(2*A*pi).
    """
    K2 = (kappa * ell) ** 2
    return (4.0 * (K2 - 1.0) * (math.cos(2.0 * A * math.pi) - math.sinh(2.0 * kappa * math.pi))
            + (K2 * K2 - 2.0 * K2 + 5.0) * math.cosh(2.0 * kappa * math.pi)
            + 8.0 * kappa * ell * math.sin(2.0 * A * math.pi)
            - (K2 + 1.0) ** 2 * math.cosh(2.0 * kappa * (math.pi - l3)))


def symmetric_negative_dispersion(ell: float, l1: float, m: int, kappa: float) -> float:
    """g(kappa) with cos(theta) = g for the symmetric loose chain at A = m - 1/2."""
    K2 = (kappa * ell) ** 2
    num = ((K2 - 3.0) ** 2 * math.sinh(kappa * (TWO_PI + l1))
           - (K2 + 1.0) ** 2 * math.sinh(kappa * (TWO_PI - l1))
           - 2.0 * (K2 * K2 + 6.0 * K2 - 3.0) * math.sinh(kappa * l1))
    return num / (32.0 * (-1.0) ** m * kappa * ell * math.cosh(kappa * math.pi))


def high_energy_h(k: float, A: float) -> float:
    """h(k) = sin((k-A)*pi) * sin((A+k)*pi), the symmetric tight-chain
    high-energy band indicator."""
    return math.sin((k - A) * math.pi) * math.sin((A + k) * math.pi)


def special_functions(spec: ChainSpec, point: SpectralPoint) -> SpecialFunctions:
    """Evaluate every auxiliary function defined in this spec/point context."""
    cal_a = math.cos(2.0 * spec.A * math.pi)
    if point.sign == EnergySign.POSITIVE:
        k = point.momentum
        lp, lm = lambda_pm(k, spec.ell, spec.A)
        tau, rho = tau_rho(k, spec.ell, spec.l1, spec.l3)
        return SpecialFunctions(lambda_plus=lp, lambda_minus=lm, tau=tau, rho=rho,
                                h_value=high_energy_h(k, spec.A), cal_a=cal_a)
    kappa = point.momentum
    f = None
    if spec.variant in (Variant.LOOSE, Variant.MERGED):
        f = shrink_point_function(spec.ell, spec.l3, spec.A, kappa)
    g = None
    half = (spec.A - 0.5) % 1.0
    if (spec.variant == Variant.LOOSE and spec.symmetric
            and min(half, 1.0 - half) < 1e-12):
        m = round(spec.A + 0.5)
        g = symmetric_negative_dispersion(spec.ell, spec.l1, m, kappa)
    return SpecialFunctions(f_value=f, g_value=g, cal_a=cal_a)
