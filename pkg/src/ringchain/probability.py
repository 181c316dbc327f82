"""The probability that a random positive energy lies in the spectrum.

Four routes with increasing amounts of structure:

* ``scan_probability`` - measure the band coverage of [0, K] with the full
  band condition and divide by K;
* ``periodic_probability`` - for commensurate lengths the high-energy band
  indicator is periodic in k: isolate its roots on one period exactly;
* ``torus_probability`` - for incommensurate lengths the indicator phases
  equidistribute, so the probability is the area fraction of a condition
  on the 2-torus (midpoint quadrature, cross-checked by seeded Monte
  Carlo);
* ``closed_form_probability`` - the exact expressions: 1/2 + 2A - 4A^2
  (A mod 1/2) for the tight chain, 1 - arccos(cos(2*A*pi))/pi for its
  symmetric version, 1/2 for the merged chain, 0 for the loose one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from . import kernels
from .bands import DEFAULT_EDGE_TOL, scan_bands
from .model import ChainSpec, Variant
from .rational import MAX_DENOMINATOR

TWO_PI = 2.0 * math.pi

DEFAULT_TORUS_RESOLUTION = 4000
DEFAULT_MC_SAMPLES = 10_000_000
#: documented fixed seed of the Monte Carlo cross-check
DEFAULT_MC_SEED = 20240817


class ProbabilityMethod(str, Enum):
    SCAN = "scan"
    PERIODIC = "periodic"
    TORUS = "torus"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    method: ProbabilityMethod
    error_bound: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (-1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError("probability must lie in [0, 1]")
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")

    def agrees_with(self, other: "ProbabilityEstimate") -> bool:
        return abs(self.value - other.value) <= self.error_bound + other.error_bound


def _geometry_get(geometry, key):
    if isinstance(geometry, ChainSpec):
        return getattr(geometry, key)
    return geometry[key]


def asymptotic_indicator(variant: Variant, A: float, geometry, point):
    """Leading-order band indicator.

    ``point`` is either a momentum k (indicator along the k axis) or an
    (x, y) pair (the same expression in torus coordinates x = k*l_free
    mod 2pi, y = k*pi mod 2pi).  Membership at high energy holds where the
    value is >= 0; for the loose chain the indicator is a negated product
    of squares, so it is nonpositive everywhere.
    """
    if isinstance(point, tuple):
        x, y = point
        return torus_condition_value(variant, A, x, y)
    k = np.asarray(point, dtype=np.float64)
    if variant == Variant.TIGHT:
        l3 = _geometry_get(geometry, "l3")
        return (np.sin((k - A) * np.pi) * np.sin((A + k) * np.pi)
                * np.sin(k * l3) * np.sin(k * (TWO_PI - l3)))
    if variant == Variant.MERGED:
        l1 = _geometry_get(geometry, "l1")
        return (np.sin(2 * k * np.pi) ** 2
                - (np.sin(k * (l1 + TWO_PI)) - math.cos(2 * A * math.pi) * np.sin(k * l1)) ** 2)
    ell = _geometry_get(geometry, "ell")
    l1 = _geometry_get(geometry, "l1")
    l3 = _geometry_get(geometry, "l3")
    return (-16.0 * (k * ell) ** 8 * np.sin(k * l1) ** 2
            * np.sin(k * (TWO_PI - l3)) ** 2 * np.sin(k * l3) ** 2)


def torus_condition_value(variant: Variant, A: float, x, y):
    """Pointwise value of the torus band condition (>= 0 means inside)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if variant == Variant.TIGHT:
        return (np.sin(y - A * np.pi) * np.sin(y + A * np.pi)
                * np.sin(x) * np.sin(2 * y - x))
    if variant == Variant.MERGED:
        return (np.sin(2 * y) ** 2
                - (np.sin(x + 2 * y) - math.cos(2 * A * math.pi) * np.sin(x)) ** 2)
    raise ValueError("the loose chain has no torus condition (probability 0)")


def scan_probability(spec: ChainSpec, K: float, grid_points: Optional[int] = None,
                     edge_tol: float = DEFAULT_EDGE_TOL) -> ProbabilityEstimate:
    """Fraction of [0, K] covered by bands of the full band condition.

    Partial bands at the K boundary are clipped (the scan never extends
    past K).  The error bound combines the grid step (bands narrower than
    one step may be missed, one per band/gap pair) with the bisection
    tolerance of every refined edge.
    """
    if not (K > 0):
        raise ValueError("K must be positive")
    if grid_points is None:
        # coverage work at large K only needs edges resolved to ~1e-3
        grid_points = int((20000 if K <= 100 else 400) * K)
    bands = scan_bands(spec, K, grid_points=grid_points, edge_tol=edge_tol,
                       detect_flats=False)
    lo = K / grid_points
    covered = sum(b.width for b in bands)
    span = K - lo
    step = span / max(grid_points - 1, 1)
    err = ((len(bands) + 1) * step + 2 * len(bands) * edge_tol) / span
    return ProbabilityEstimate(min(covered / span, 1.0), ProbabilityMethod.SCAN,
                               err, {"K": K, "grid_points": grid_points,
                                     "bands": len(bands)})


def _nonneg_measure(f, period: float, density: float, xtol: float) -> Tuple[float, int]:
    """Measure of {t in [0, period): f(t) >= 0} by sign-change isolation.

    Samples landing exactly on roots are used as roots directly; tangential
    zeros carry no measure and need no special treatment.
    """
    n = max(int(period * density), 800)
    ts = np.linspace(0.0, period, n, endpoint=False)
    v = f(ts)
    sgn = np.sign(v)
    zeros = ts[sgn == 0.0]
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    lo, hi = ts[idx], ts[idx] + period / n
    side = sgn[idx]
    for _ in range(60):
        if not len(lo) or float(np.max(hi - lo)) <= xtol:
            break
        mid = 0.5 * (lo + hi)
        same = np.sign(f(mid)) == side
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    roots = np.sort(np.concatenate([0.5 * (lo + hi), zeros]))
    pts = np.concatenate([[0.0], roots, [period]])
    lengths = pts[1:] - pts[:-1]
    # classify each interval at the probe with the largest |f|: a midpoint
    # alone can sit on a tangential root, where its sign is rounding noise
    probes = np.array([0.5, 0.25, 0.75, 0.125, 0.875])
    samples = pts[:-1, None] + lengths[:, None] * probes[None, :]
    vals = f(samples.ravel()).reshape(samples.shape)
    best = np.take_along_axis(vals, np.abs(vals).argmax(axis=1)[:, None], axis=1)[:, 0]
    keep = best >= 0.0
    return float(np.sum(lengths[keep])), len(roots)


def _ratio_parts(ratio) -> Tuple[int, int]:
    if isinstance(ratio, tuple):
        p, q = ratio
    else:  # Fraction or similar
        p, q = ratio.numerator, ratio.denominator
    p, q = int(p), int(q)
    if p <= 0 or q <= 0:
        raise ValueError("ratio must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError("ratio must be in lowest terms")
    return p, q


def periodic_probability(variant: Variant, A: float, ratio,
                         density: float = 400.0, xtol: float = 1e-12) -> ProbabilityEstimate:
    """Exact-period probability for commensurate lengths.

    Tight chain: ``ratio`` = (p, q) with l2 : l3 = p : q, so
    l3 = 2*pi*q/(p+q); merged chain: l1 = (p/q)*pi.  The high-energy
    indicator is then periodic in k and the probability is the fraction
    of one period where it is nonnegative, with roots isolated to
    ``xtol``.  Denominators beyond the rational-recognition bound are
    refused; use scan_probability for those.
    """
    p, q = _ratio_parts(ratio)
    if q > MAX_DENOMINATOR or p > MAX_DENOMINATOR:
        raise ValueError(
            f"ratio {p}/{q} beyond the recognition bound {MAX_DENOMINATOR}; "
            "use scan_probability instead")
    if variant == Variant.TIGHT:
        l3 = TWO_PI * q / (p + q)
        period = float(p + q) if (p + q) % 2 == 0 else 2.0 * (p + q)
        geometry = {"l3": l3}
    elif variant == Variant.MERGED:
        l1 = math.pi * p / q
        period = 2.0 * q
        geometry = {"l1": l1}
    else:
        raise ValueError("periodic probability applies to tight and merged chains")

    def f(ks):
        return asymptotic_indicator(variant, A, geometry, ks)

    measure, n_roots = _nonneg_measure(f, period, density, xtol)
    err = n_roots * xtol / period
    return ProbabilityEstimate(measure / period, ProbabilityMethod.PERIODIC, err,
                               {"ratio": f"{p}/{q}", "period": period,
                                "roots": n_roots, **geometry})


def _mc_fraction(variant: Variant, A: float, n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    count = 0
    chunk = 2_000_000
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        x = rng.uniform(0.0, TWO_PI, m)
        y = rng.uniform(0.0, TWO_PI, m)
        count += int(np.count_nonzero(torus_condition_value(variant, A, x, y) >= 0.0))
    return count / n


def torus_probability(variant: Variant, A: float,
                      resolution: int = DEFAULT_TORUS_RESOLUTION,
                      mc_samples: int = DEFAULT_MC_SAMPLES,
                      seed: int = DEFAULT_MC_SEED) -> ProbabilityEstimate:
    """Area fraction of the torus condition for incommensurate lengths.

    Midpoint-rule quadrature on resolution^2 cells gives the reported
    value; a seeded Monte Carlo run cross-checks it and the error bound is
    the larger of the two internal estimates (quadrature: half-resolution
    difference with a 1/resolution floor; Monte Carlo: three sigma).
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100 per axis")
    if variant == Variant.TIGHT:
        value = kernels.torus_fraction_tight(A, resolution)
        half = kernels.torus_fraction_tight(A, resolution // 2)
    elif variant == Variant.MERGED:
        cal_a = math.cos(2.0 * A * math.pi)
        value = kernels.torus_fraction_merged(cal_a, resolution)
        half = kernels.torus_fraction_merged(cal_a, resolution // 2)
    else:
        raise ValueError("the loose chain has no torus condition (probability 0)")
    err_quad = max(abs(value - half), 1.0 / resolution)
    mc = _mc_fraction(variant, A, mc_samples, seed)
    err_mc = 3.0 * math.sqrt(max(mc * (1.0 - mc), 1e-12) / mc_samples)
    return ProbabilityEstimate(value, ProbabilityMethod.TORUS,
                               max(err_quad, err_mc),
                               {"resolution": resolution, "mc_value": mc,
                                "mc_samples": mc_samples, "seed": seed,
                                "quad_vs_mc": abs(value - mc)})


def closed_form_probability(variant: Variant, A: float,
                            symmetric: bool = False) -> ProbabilityEstimate:
    """The exact probability expressions.

    The tight asymmetric and merged forms presuppose incommensurate
    lengths (an input declaration, not a floating-point property); the
    symmetric flag selects the l3 = pi tight form.
    """
    if variant == Variant.TIGHT:
        if symmetric:
            value = 1.0 - math.acos(math.cos(2.0 * A * math.pi)) / math.pi
            detail = "1 - arccos(cos(2*A*pi))/pi"
        else:
            am = A % 0.5
            value = 0.5 + 2.0 * am - 4.0 * am * am
            detail = "1/2 + 2*A - 4*A^2 with A mod 1/2"
    elif variant == Variant.MERGED:
        value = 0.5
        detail = "1/2, independent of A"
    else:
        value = 0.0
        detail = "0 (gap-dominated at high energy)"
    return ProbabilityEstimate(value, ProbabilityMethod.CLOSED_FORM, 0.0,
                               {"A": A, "formula": detail})


def merged_first_octant_integral(A: float) -> float:
    """Area between the two arccos curves bounding the merged-chain torus
    region in the first octant (x in [0, pi], y in [0, pi/2]); equals
    pi^2/4 for every A."""
    cal_a = math.cos(2.0 * A * math.pi)

    def integrand(x: float) -> float:
        y2 = (math.pi - x) / 4.0 + 0.5 * math.acos(
            max(-1.0, min(1.0, cal_a * math.sin(x / 2.0))))
        y1 = -x / 4.0 + 0.5 * math.acos(
            max(-1.0, min(1.0, cal_a * math.cos(x / 2.0))))
        return y2 - y1

    value, _ = quad(integrand, 0.0, math.pi, limit=200)
    return value


@dataclass
class UniversalityReport:
    """Agreement of scan, torus and closed-form probabilities across
    geometries that differ only in their (declared incommensurate)
    lengths and in ell."""

    A: float
    variant: Variant
    entries: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def universality_check(A: float, geometries: Sequence[ChainSpec], K: float = 2000.0,
                       resolution: int = 2000,
                       mc_samples: int = 1_000_000) -> UniversalityReport:
    """Assert scan, torus and closed-form values agree pairwise within
    combined error bounds for every supplied geometry."""
    if len(geometries) < 2:
        raise ValueError("universality needs at least two geometries")
    variants = {g.variant for g in geometries}
    if len(variants) != 1:
        raise ValueError("geometries must share one variant")
    variant = variants.pop()
    if variant == Variant.LOOSE:
        raise ValueError("universality check applies to tight and merged chains")
    report = UniversalityReport(A=A, variant=variant)
    torus = torus_probability(variant, A, resolution=resolution, mc_samples=mc_samples)
    closed = closed_form_probability(variant, A)
    for g in geometries:
        spec = g.replace(A=A)
        scan = scan_probability(spec, K)
        report.entries.append((spec, scan, torus, closed))
        for name1, e1 in (("scan", scan), ("torus", torus)):
            for name2, e2 in (("torus", torus), ("closed-form", closed)):
                if name1 == name2 or (name1, name2) == ("torus", "torus"):
                    continue
                if not e1.agrees_with(e2):
                    report.failures.append(
                        (spec, f"{name1} vs {name2}",
                         abs(e1.value - e2.value), e1.error_bound + e2.error_bound))
    return report
