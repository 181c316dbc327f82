"""Band extraction, flat-band detection/prediction and negative-spectrum
features, by grid scanning with bisection-refined edges.

Momentum grids are evaluated in chunks (optionally in parallel threads,
see ``CHAINCLI_THREADS``); chunk results are merged by a deterministic
sequential reduce, so output never depends on the thread count.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .model import (FLAT_TOL, ChainSpec, EnergySign, SpectralCoefficients, Variant,
                    coefficient_arrays, dispersion_theta, shrink_point_function)
from .rational import MAX_DENOMINATOR, recognize_rational

TWO_PI = 2.0 * math.pi

#: default grid density, points per unit momentum; band widths near the
#: high-energy sine roots scale like 1/k, so the default resolves features
#: down to ~5e-5 in k
DEFAULT_DENSITY = 20000.0

#: edge bisection stops at this bracket width (or after 80 iterations)
DEFAULT_EDGE_TOL = 1e-10
MAX_BISECT_ITER = 80

_CHUNK = 1 << 19


class ScanResolutionWarning(UserWarning):
    """A band or gap is close to the grid resolution; rerun with more
    grid points to be sure nothing narrower was merged away."""


class NegativeBandCountError(RuntimeError):
    """More negative bands than the vertex structure admits (2 for the
    loose chain, 1 for the degenerate ones); indicates an implementation
    defect, not a property of the model."""


class BandKind(str, Enum):
    CONTINUOUS = "continuous"
    FLAT_POINT = "flat-point"


@dataclass(frozen=True)
class Band:
    """Closed momentum interval [lo, hi] of spectrum (k on the positive
    side, kappa on the negative side); flat points have lo == hi."""

    lo: float
    hi: float
    kind: BandKind = BandKind.CONTINUOUS
    edge_tol: float = 0.0
    truncated_lo: bool = False
    truncated_hi: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("band must have lo <= hi")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack


class FlatMechanism(str, Enum):
    HALF_INTEGER_LADDER = "half-integer-ladder"
    RATIONAL_EDGE = "rational-edge"
    ELL_INVERSE = "ell-inverse"
    EXCEPTIONAL_FLUX = "exceptional-flux"


@dataclass(frozen=True)
class FlatBandPrediction:
    k_value: float
    mechanism: FlatMechanism
    provenance: str

    def __post_init__(self):
        if not (self.k_value > 0):
            raise ValueError("flat-band momentum must be positive")


@dataclass(frozen=True)
class FlatBandHit:
    """A grid point passing the flat tolerance test, with the coefficient
    magnitudes at the refined minimum."""

    k: float
    abs_a: float
    abs_b: float
    abs_c: float
    scale: float


def _thread_count() -> int:
    raw = os.environ.get("CHAINCLI_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _eval_chunked(fn: Callable[[np.ndarray], tuple], xs: np.ndarray) -> tuple:
    """Evaluate an array function in chunks, optionally on a thread pool;
    results are concatenated in chunk order."""
    chunks = [xs[i:i + _CHUNK] for i in range(0, len(xs), _CHUNK)]
    nthreads = _thread_count()
    if nthreads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(ch) for ch in chunks]
    return tuple(np.concatenate([p[j] for p in parts]) for j in range(len(parts[0])))


def _bisect_edges(disc: Callable[[np.ndarray], np.ndarray], lo: np.ndarray,
                  hi: np.ndarray, left_inside: np.ndarray, edge_tol: float) -> np.ndarray:
    for _ in range(MAX_BISECT_ITER):
        if not len(lo) or float(np.max(hi - lo)) <= edge_tol:
            break
        mid = 0.5 * (lo + hi)
        same = (disc(mid) >= 0.0) == left_inside
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _grid(lo: float, hi: float, n: int, extras: Optional[Sequence[float]] = None) -> np.ndarray:
    ks = np.linspace(lo, hi, n)
    if extras:
        pts = np.asarray([x for x in extras if lo < x < hi], dtype=np.float64)
        if pts.size:
            ks = np.unique(np.concatenate([ks, pts]))
            # merge near-coincident nodes; they would produce degenerate
            # refinement brackets
            keep = np.concatenate([[True], np.diff(ks) > 1e-12 * np.maximum(1.0, np.abs(ks[1:]))])
            ks = ks[keep]
    return ks


def _scan_intervals(spec: ChainSpec, sign: EnergySign, lo: float, hi: float,
                    n: int, edge_tol: float,
                    extras: Optional[Sequence[float]] = None) -> Tuple[list, float]:
    """Maximal intervals with nonnegative discriminant on [lo, hi].

    Returns (intervals, grid_step); each interval is (k_lo, k_hi,
    touches_lo_bound, touches_hi_bound).
    """
    def disc(ks):
        a, b, c, _ = coefficient_arrays(spec, ks, sign)
        return a * a + b * b - c * c

    ks = _grid(lo, hi, n, extras)
    step = (hi - lo) / max(n - 1, 1)
    (D,) = _eval_chunked(lambda x: (disc(x),), ks)
    inside = D >= 0.0
    flips = np.nonzero(inside[:-1] != inside[1:])[0]
    edges = _bisect_edges(disc, ks[flips], ks[flips + 1], inside[flips], edge_tol)

    intervals = []
    cur: Optional[float] = lo if inside[0] else None
    cur_from_bound = inside[0]
    for e, was_inside in zip(edges, inside[flips]):
        if was_inside:
            intervals.append((cur if cur is not None else lo, float(e),
                              cur_from_bound, False))
            cur = None
        else:
            cur = float(e)
            cur_from_bound = False
    if cur is not None:
        intervals.append((cur, hi, cur_from_bound, True))

    widths = [b - a for a, b, _, _ in intervals]
    gaps = [intervals[i + 1][0] - intervals[i][1] for i in range(len(intervals) - 1)]
    # zero-width entries are fully refined degenerate points, not unresolved
    narrow = [w for w in widths + gaps if 4.0 * edge_tol < w < 2.0 * step]
    if narrow:
        warnings.warn(
            f"{len(narrow)} band/gap feature(s) within 2 grid steps of the "
            f"resolution ({step:.3g}); rerun with more grid points to rule "
            f"out unresolved structure", ScanResolutionWarning, stacklevel=3)
    return intervals, step


def _flat_quality(spec: ChainSpec, sign: EnergySign, ks: np.ndarray) -> np.ndarray:
    a, b, c, s = coefficient_arrays(spec, ks, sign)
    return (a * a + b * b + c * c) / (s * s)


def _coeffs_at(spec: ChainSpec, sign: EnergySign, k: float) -> SpectralCoefficients:
    a, b, c, s = coefficient_arrays(spec, np.array([k]), sign)
    return SpectralCoefficients(float(a[0]), float(b[0]), float(c[0]), float(s[0]))


def detect_flat_bands(spec: ChainSpec, k_max: float, grid_points: Optional[int] = None,
                      k_min: Optional[float] = None, tol: float = FLAT_TOL) -> List[FlatBandHit]:
    """Locate all k <= k_max where the flat-point tolerance test fires.

    Grid local minima of (a^2+b^2+c^2)/scale^2 are refined by bounded
    scalar minimization and then subjected to the strict test
    sqrt(a^2+b^2) < tol*scale, |c| < tol*scale.
    """
    if not (k_max > 0):
        raise ValueError("k_max must be positive")
    n = grid_points or max(int(DEFAULT_DENSITY * k_max), 64)
    lo = k_min if k_min is not None else k_max / n
    step = (k_max - lo) / max(n - 1, 1)
    # seed exact ladder candidates so coincidences with grid nodes cannot hide
    seeds = [m * 0.5 for m in range(1, int(2 * k_max) + 1)]
    seeds.append(1.0 / spec.ell)
    ks = _grid(lo, k_max, n, seeds)
    (q,) = _eval_chunked(lambda x: (_flat_quality(spec, EnergySign.POSITIVE, x),), ks)

    cand = np.nonzero((q[1:-1] <= q[:-2]) & (q[1:-1] <= q[2:]) & (q[1:-1] < 1e-4))[0] + 1
    hits: List[FlatBandHit] = []
    for i in cand:
        co = _coeffs_at(spec, EnergySign.POSITIVE, float(ks[i]))
        if co.is_flat(tol):  # grid node (often a seeded ladder point) is flat itself
            hits.append(FlatBandHit(float(ks[i]), abs(co.a), abs(co.b), abs(co.c), co.scale))
            continue
        a_bound = ks[max(i - 1, 0)]
        b_bound = ks[min(i + 1, len(ks) - 1)]
        if b_bound - a_bound <= 0:
            continue
        res = minimize_scalar(lambda x: float(_flat_quality(spec, EnergySign.POSITIVE,
                                                            np.array([x]))[0]),
                              bounds=(a_bound, b_bound), method="bounded",
                              options={"xatol": 1e-13})
        k_star = float(res.x)
        co = _coeffs_at(spec, EnergySign.POSITIVE, k_star)
        if co.is_flat(tol):
            hits.append(FlatBandHit(k_star, abs(co.a), abs(co.b), abs(co.c), co.scale))
    hits.sort(key=lambda h: h.k)
    dedup: List[FlatBandHit] = []
    for h in hits:
        if not dedup or h.k - dedup[-1].k > 1e-8:
            dedup.append(h)
    return dedup


def scan_bands(spec: ChainSpec, k_max: float, grid_points: Optional[int] = None,
               edge_tol: float = DEFAULT_EDGE_TOL, k_min: Optional[float] = None,
               detect_flats: bool = True) -> List[Band]:
    """Band decomposition of (k_min, k_max] from the full band condition.

    Maximal intervals with a^2 + b^2 - c^2 >= 0 become continuous bands
    with bisected edges; isolated flat points inside gaps are reported as
    zero-width FlatPoint bands.  Output is sorted and disjoint.
    """
    if not (k_max > 0):
        raise ValueError("k_max must be positive")
    if grid_points is not None and grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    lo = k_min if k_min is not None else k_max / (grid_points or int(DEFAULT_DENSITY * k_max) or 2)
    if not (0 < lo < k_max):
        raise ValueError("k_min must lie in (0, k_max)")
    n = grid_points or max(int(DEFAULT_DENSITY * (k_max - lo)), 64)

    extras: List[float] = []
    flats: List[FlatBandHit] = []
    if detect_flats:
        try:
            preds = predict_flat_bands(spec, k_max)
        except Exception:
            preds = []
        step = (k_max - lo) / max(n - 1, 1)
        for p in preds:
            extras.extend(p.k_value + step * d for d in (-0.5, -0.1, -1e-3, 0.0, 1e-3, 0.1, 0.5))
        flats = detect_flat_bands(spec, k_max, grid_points=n, k_min=lo)

    intervals, step = _scan_intervals(spec, EnergySign.POSITIVE, lo, k_max, n,
                                      edge_tol, extras)
    bands: List[Band] = []
    for a, b, tl, th in intervals:
        kind = BandKind.CONTINUOUS
        if b - a <= 4.0 * edge_tol:
            co = _coeffs_at(spec, EnergySign.POSITIVE, 0.5 * (a + b))
            if co.is_flat():
                mid = 0.5 * (a + b)
                bands.append(Band(mid, mid, BandKind.FLAT_POINT, edge_tol))
                continue
        bands.append(Band(a, b, kind, edge_tol, truncated_lo=tl and k_min is not None,
                          truncated_hi=th))
    for h in flats:
        if any(bd.contains(h.k, slack=1e-9) for bd in bands):
            continue
        bands.append(Band(h.k, h.k, BandKind.FLAT_POINT, edge_tol))
    bands.sort(key=lambda bd: bd.lo)
    return bands


def find_negative_bands(spec: ChainSpec, kappa_max: float,
                        grid_points: Optional[int] = None,
                        edge_tol: float = DEFAULT_EDGE_TOL) -> List[Band]:
    """Negative-spectrum bands in kappa (energy -kappa^2) on (0, kappa_max].

    The vertex structure caps the count at 2 (loose) / 1 (tight, merged);
    exceeding the cap raises NegativeBandCountError.  Bands reaching
    kappa_max are flagged truncated.  Exponentially narrow bands in the
    large-l1 regime are caught by seeding the grid around the shrink
    points (roots of the asymptotic function f) and around kappa = 1/ell.
    """
    if not (kappa_max > 0):
        raise ValueError("kappa_max must be positive")
    n = grid_points or max(int(DEFAULT_DENSITY * kappa_max), 64)
    lo = kappa_max / n
    extras: List[float] = []
    centers = [1.0 / spec.ell]
    if spec.variant in (Variant.LOOSE, Variant.MERGED):
        try:
            centers.extend(asymptotic_negative_point(spec, kappa_max))
        except ValueError:
            pass
    offsets = np.concatenate([[0.0], np.logspace(-13, -1, 25), -np.logspace(-13, -1, 25)])
    for c0 in centers:
        extras.extend(c0 + offsets)

    intervals, _ = _scan_intervals(spec, EnergySign.NEGATIVE, lo, kappa_max, n,
                                   edge_tol, extras)
    bands = [Band(a, b, BandKind.CONTINUOUS, edge_tol,
                  truncated_lo=False, truncated_hi=th)
             for a, b, _, th in intervals]
    cap = 2 if spec.variant == Variant.LOOSE else 1
    if len(bands) > cap:
        raise NegativeBandCountError(
            f"{len(bands)} negative bands found for {spec.variant.value} chain "
            f"(cap {cap}); this falsifies the implementation, not the model")
    return bands


# -- flat-band predictions ---------------------------------------------------

def _near_integer(x: float, tol: float = 1e-12) -> bool:
    return abs(x - round(x)) < tol


def exceptional_flux(k: float, ell: float, parity: str) -> float:
    """Flux A in [0, 1) at which a band can shrink to the point k^2.

    ``parity`` is "odd" or "even" (parity of m in k = m*pi/(2*(pi - l3)));
    plugging the result back makes Lambda_+ (odd) or Lambda_- (even)
    vanish.  2k integer is outside the domain (the tangent pole).
    """
    if not (k > 0 and ell > 0):
        raise ValueError("k and ell must be positive")
    if _near_integer(2.0 * k):
        raise ValueError("2k integer is excluded (tan(k*pi) pole or zero)")
    t = math.tan(k * math.pi)
    kl2 = (k * ell) ** 2
    if parity == "odd":
        val = -math.atan(2.0 * k * ell / (kl2 + 1.0) * t) / math.pi
    elif parity == "even":
        val = -math.atan((kl2 + 1.0) / (2.0 * k * ell) * t) / math.pi
    else:
        raise ValueError("parity must be 'odd' or 'even'")
    return val % 1.0


def _flux_class(A: float, tol: float = 1e-12) -> str:
    r = A % 1.0
    if min(r, 1.0 - r) < tol:
        return "integer"
    if abs(r - 0.5) < tol:
        return "half-integer"
    return "generic"


def predict_flat_bands(spec: ChainSpec, k_max: float) -> List[FlatBandPrediction]:
    """Enumerate every flat-band mechanism applicable to the spec.

    Rational multiples of pi are recognized by continued fractions with
    denominators up to 10^6; an edge whose length/(2*pi) is not recognized
    is skipped with a notice (its mechanism simply cannot fire).
    """
    if not (k_max > 0):
        raise ValueError("k_max must be positive")
    preds: List[FlatBandPrediction] = []
    flux = _flux_class(spec.A)

    k_ell = 1.0 / spec.ell
    if k_ell <= k_max and _near_integer(spec.A + k_ell):
        preds.append(FlatBandPrediction(
            k_ell, FlatMechanism.ELL_INVERSE,
            f"A + 1/ell = {spec.A + k_ell:.12g} is an integer; k = 1/ell"))

    degenerate = spec.variant in (Variant.TIGHT, Variant.MERGED)
    if flux == "half-integer":
        if degenerate:
            n = 1
            while n - 0.5 <= k_max:
                preds.append(FlatBandPrediction(
                    n - 0.5, FlatMechanism.HALF_INTEGER_LADDER,
                    "A - 1/2 integer; degree-4 contact makes every k = n - 1/2 flat"))
                n += 1
        else:
            preds.extend(_rational_edge_ladder(spec, k_max, half=True))
    elif flux == "integer":
        if degenerate:
            n = 1
            while n <= k_max:
                preds.append(FlatBandPrediction(
                    float(n), FlatMechanism.RATIONAL_EDGE,
                    "A integer; the 2*pi ring makes every k = n flat"))
                n += 1
        else:
            preds.extend(_rational_edge_ladder(spec, k_max, half=False))
    else:
        preds.extend(_exceptional_flux_predictions(spec, k_max))

    preds.sort(key=lambda p: p.k_value)
    return preds


def _rational_edge_ladder(spec: ChainSpec, k_max: float, half: bool) -> List[FlatBandPrediction]:
    out: List[FlatBandPrediction] = []
    for name, length in (("l1", spec.l1), ("l3", spec.l3)):
        frac = recognize_rational(length / TWO_PI, MAX_DENOMINATOR)
        if frac is None:
            warnings.warn(
                f"{name}/(2*pi) not recognized as rational (denominator bound "
                f"{MAX_DENOMINATOR}); rational-edge predictions skipped for it",
                UserWarning, stacklevel=3)
            continue
        if frac == 0:
            continue
        q = frac.denominator
        if half:
            if q % 2 == 0:
                continue  # even q lands the ladder on integers where a, b stay nonzero
            k = q * 0.5
            n = 1
            while k <= k_max:
                out.append(FlatBandPrediction(
                    k, FlatMechanism.RATIONAL_EDGE,
                    f"A - 1/2 integer and {name} = 2*({frac})*pi with odd q={q}; "
                    f"k = q*(n - 1/2)"))
                n += 1
                k = q * (n - 0.5)
        else:
            stride = q if q % 2 == 1 else q // 2
            k = float(stride)
            n = 1
            while k <= k_max:
                out.append(FlatBandPrediction(
                    k, FlatMechanism.RATIONAL_EDGE,
                    f"A integer and {name} = 2*({frac})*pi; sin(k*{name}) = 0 at "
                    f"multiples of {stride}"))
                n += 1
                k = float(stride * n)
    # the ell-matching sub-case of the half-integer ladder: k*ell = 1 at a
    # half-integer k (covered by ELL_INVERSE when A + 1/ell is integer)
    return out


def _exceptional_flux_predictions(spec: ChainSpec, k_max: float) -> List[FlatBandPrediction]:
    if spec.variant != Variant.LOOSE:
        return []  # degenerate variants admit no band-shrink points
    out: List[FlatBandPrediction] = []
    if spec.symmetric:
        # b vanishes identically; flats need a(k) = 0 and c(k) = 0 together
        def a_fn(k):
            kl2 = (k * spec.ell) ** 2
            return ((kl2 + 1.0) * math.sin(k * math.pi) * math.cos(spec.A * math.pi)
                    + 2.0 * k * spec.ell * math.sin(spec.A * math.pi) * math.cos(k * math.pi))
        n = max(int(2000 * k_max), 1000)
        ks = np.linspace(k_max / n, k_max, n)
        vals = np.array([a_fn(k) for k in ks])
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        for i in idx:
            k_root = brentq(a_fn, ks[i], ks[i + 1], xtol=1e-14)
            co = _coeffs_at(spec, EnergySign.POSITIVE, k_root)
            if co.is_flat():
                out.append(FlatBandPrediction(
                    k_root, FlatMechanism.EXCEPTIONAL_FLUX,
                    "symmetric chain: a(k) = 0 at the even-parity flux and c "
                    "vanishes at this l1"))
        return out
    d = math.pi - spec.l3
    m = 0
    while True:
        m += 1
        k = m * math.pi / (2.0 * abs(d))
        if k > k_max:
            break
        if _near_integer(2.0 * k, 1e-9):
            continue  # excluded: 2k natural
        parity = "odd" if m % 2 == 1 else "even"
        a_exc = exceptional_flux(k, spec.ell, parity)
        da = (spec.A - a_exc) % 1.0
        if min(da, 1.0 - da) > 1e-10:
            continue
        co = _coeffs_at(spec, EnergySign.POSITIVE, k)
        if co.is_flat():
            out.append(FlatBandPrediction(
                k, FlatMechanism.EXCEPTIONAL_FLUX,
                f"k = m*pi/(2*(pi-l3)) with m={m} ({parity}); A matches the "
                f"arctan flux and c vanishes at this l1"))
    return out


# -- gap closings and negative-band asymptotics ------------------------------

@dataclass(frozen=True)
class GapClosing:
    """A parameter value where two neighboring band edges touch."""

    param: str
    value: float
    k: float
    gap_width: float
    d_delta_dtheta: float   # |dDelta/dtheta| / scale at the touch
    d_delta_dk: float       # |dDelta/dk| / scale at the touch
    note: str = ""


def _min_gap(spec: ChainSpec, k_window: Tuple[float, float], density: float,
             merged_is_zero: bool = False) -> Tuple[float, float]:
    """Width and center of the narrowest gap inside the window.

    With ``merged_is_zero`` a single remaining band counts as a fully
    closed gap (width 0): used while refining a candidate touch, where the
    gap can shrink below the grid resolution and disappear from view.
    """
    n = max(int(density * (k_window[1] - k_window[0])), 64)
    intervals, _ = _scan_intervals(spec, EnergySign.POSITIVE, k_window[0],
                                   k_window[1], n, 1e-12)
    if len(intervals) < 2:
        if merged_is_zero and len(intervals) == 1:
            return 0.0, math.nan
        return math.inf, math.nan
    gaps = [(intervals[i + 1][0] - intervals[i][1],
             0.5 * (intervals[i][1] + intervals[i + 1][0]))
            for i in range(len(intervals) - 1)]
    return min(gaps, key=lambda g: g[0])


def _touch_diagnostics(spec: ChainSpec, k: float) -> Tuple[float, float]:
    h = 1e-6 * max(1.0, k)
    am, bm, cm, _ = coefficient_arrays(spec, np.array([k - h]))
    ap, bp, cp, _ = coefficient_arrays(spec, np.array([k + h]))
    da, db, dc = (float(ap[0] - am[0]) / (2 * h), float(bp[0] - bm[0]) / (2 * h),
                  float(cp[0] - cm[0]) / (2 * h))
    co = _coeffs_at(spec, EnergySign.POSITIVE, k)
    sol = dispersion_theta(co)
    if sol.kind == "points":
        theta = sol.thetas[0]
    elif sol.kind == "all":
        # flat touch: pick theta cancelling the k-derivative, if possible
        r = math.hypot(da, db)
        ratio = max(-1.0, min(1.0, dc / r)) if r > 0 else 0.0
        theta = math.asin(ratio) - math.atan2(da, db)
    else:
        # inside the residual gap: theta of closest approach
        theta = math.atan2(co.b, co.a) if co.c >= 0 else math.atan2(-co.b, -co.a)
    s = max(1.0, co.scale)
    d_theta = abs(-co.a * math.sin(theta) + co.b * math.cos(theta)) / s
    d_k = abs(da * math.cos(theta) + db * math.sin(theta) - dc) / s
    return d_theta, d_k


def gap_closing_search(spec: ChainSpec, sweep_param: str, window: Tuple[float, float],
                       k_window: Tuple[float, float], sweep_samples: int = 41,
                       density: float = DEFAULT_DENSITY,
                       touch_tol: float = 1e-9) -> List[GapClosing]:
    """Sweep l1 or l3 over ``window`` and return parameter values where the
    narrowest gap inside ``k_window`` closes.

    The sweep minimizes gap width; a refined width below ``touch_tol`` is
    reported as touching (an unresolvable sub-tolerance gap is logged in
    the note).  Central-difference derivatives of the dispersion function
    at the touch are reported as a diagnostic.
    """
    if sweep_param not in ("l1", "l3"):
        raise ValueError("sweep_param must be 'l1' or 'l3'")
    if not (window[0] < window[1]):
        raise ValueError("window must be nonempty")

    def width_at(v: float) -> float:
        return _min_gap(spec.replace(**{sweep_param: v}), k_window, density)[0]

    values = np.linspace(window[0], window[1], sweep_samples)
    widths = np.array([width_at(v) for v in values])
    out: List[GapClosing] = []
    for i in range(1, sweep_samples - 1):
        if not (widths[i] <= widths[i - 1] and widths[i] <= widths[i + 1]):
            continue
        if not np.isfinite(widths[i]):
            continue
        res = minimize_scalar(width_at, bounds=(values[i - 1], values[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        v_star = float(res.x)
        gap, k_c = _min_gap(spec.replace(**{sweep_param: v_star}), k_window, density)
        if gap < touch_tol:
            d_theta, d_k = _touch_diagnostics(spec.replace(**{sweep_param: v_star}), k_c)
            out.append(GapClosing(
                sweep_param, v_star, k_c, gap, d_theta, d_k,
                note="touching (width below tolerance; an open gap narrower "
                     "than the tolerance is indistinguishable)"))
    return out


def asymptotic_negative_point(spec: ChainSpec, kappa_max: Optional[float] = None) -> List[float]:
    """Roots of f(ell, l3, A; kappa) on (0, kappa_max]: the points negative
    bands shrink to as l1 grows.

    Returns a list (the loose chain admits up to two bands, hence up to
    two shrink points); empty means no negative band survives the
    asymptotic regime.  For the merged chain at integer or half-integer
    flux the root is exactly 1/ell.
    """
    if spec.variant == Variant.TIGHT:
        raise ValueError("the tight chain has no l1 to send to infinity")
    if kappa_max is None:
        kappa_max = 2.0 / spec.ell + 2.0
    if spec.variant == Variant.MERGED and _flux_class(spec.A) != "generic":
        return [1.0 / spec.ell] if 1.0 / spec.ell <= kappa_max else []

    def f_scaled(kap: float) -> float:
        # exp(-2*kappa*pi) * f, same roots, no overflow
        K2 = (kap * spec.ell) ** 2
        e = math.exp(-2.0 * kap * math.pi)
        sinh_s = 0.5 * (1.0 - e * e)
        cosh_s = 0.5 * (1.0 + e * e)
        cosh_d = 0.5 * (math.exp(2.0 * kap * (abs(math.pi - spec.l3) - math.pi))
                        + math.exp(-2.0 * kap * (abs(math.pi - spec.l3) + math.pi)))
        return (4.0 * (K2 - 1.0) * (math.cos(2.0 * spec.A * math.pi) * e - sinh_s)
                + (K2 * K2 - 2.0 * K2 + 5.0) * cosh_s
                + 8.0 * kap * spec.ell * math.sin(2.0 * spec.A * math.pi) * e
                - (K2 + 1.0) ** 2 * cosh_d)

    ks = np.linspace(kappa_max / 2000.0, kappa_max, 2001)
    vals = np.array([f_scaled(k) for k in ks])
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        roots.append(float(brentq(f_scaled, ks[i], ks[i + 1], xtol=1e-14)))
    return roots


def bands_close(b1: Sequence[Band], b2: Sequence[Band], tol: float = 1e-8) -> bool:
    """Elementwise equality of two band lists within an edge tolerance."""
    if len(b1) != len(b2):
        return False
    return all(x.kind == y.kind and abs(x.lo - y.lo) <= tol and abs(x.hi - y.hi) <= tol
               for x, y in zip(b1, b2))
