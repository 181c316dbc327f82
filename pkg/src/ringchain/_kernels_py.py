"""Numpy implementation of the hot kernels.

Each ``*_abc`` function evaluates the spectral-condition coefficients
(a, b, c) of one chain variant on an array of momenta and returns them
together with a per-point magnitude scale of the defining formulas (used
for scale-free tolerance tests).  The negative-energy kernels evaluate
hyperbolic products as exponential sums factored by the largest exponent,
so they stay finite for arbitrarily large kappa * length; with
``scaled=True`` the common positive factor exp(-kappa*X) is kept in the
output (X = 2*pi + l1 for loose/merged, X = 2*pi for tight), which leaves
the sign of the band discriminant a^2 + b^2 - c^2 unchanged.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

TWO_PI = 2.0 * np.pi
PI = np.pi


def loose_pos_abc(k, ell, l1, l3, A):
    k = np.asarray(k, dtype=np.float64)
    kl = k * ell
    p = (kl + 1.0) ** 2
    m = (kl - 1.0) ** 2
    sp = np.sin((A + k) * PI)
    sm = np.sin((A - k) * PI)
    d = PI - l3
    a = 8.0 * (p * sp * np.cos((A - k) * d) - m * sm * np.cos((A + k) * d))
    b = 8.0 * (m * sm * np.sin((A + k) * d) - p * sp * np.sin((A - k) * d))
    c = (-m * (4.0 * np.sin(2.0 * PI * A + k * l1)
               + p * (np.sin(k * (TWO_PI - l1)) + 2.0 * np.sin(k * l1) * np.cos(2.0 * k * d)))
         + 4.0 * p * np.sin(2.0 * PI * A - k * l1)
         + (kl * kl + 3.0) ** 2 * np.sin(k * (l1 + TWO_PI)))
    scale = np.maximum(1.0, np.maximum(8.0 * (p + m),
                                       m * (4.0 + 3.0 * p) + 4.0 * p + (kl * kl + 3.0) ** 2))
    return a, b, c, scale


def tight_pos_abc(k, ell, l3, A):
    k = np.asarray(k, dtype=np.float64)
    kl = k * ell
    p = (kl + 1.0) ** 2
    m = (kl - 1.0) ** 2
    sp = np.sin((A + k) * PI)
    sm = np.sin((A - k) * PI)
    d = PI - l3
    a = p * sp * np.cos((A - k) * d) - m * sm * np.cos((A + k) * d)
    b = m * sm * np.sin((A + k) * d) - p * sp * np.sin((A - k) * d)
    c = 2.0 * kl * np.sin(2.0 * A * PI) + (kl * kl + 1.0) * np.sin(2.0 * k * PI)
    scale = np.maximum(1.0, np.maximum(p + m, 2.0 * np.abs(kl) + kl * kl + 1.0))
    return a, b, c, scale


def merged_pos_abc(k, ell, l1, A):
    k = np.asarray(k, dtype=np.float64)
    kl = k * ell
    s2a = np.sin(2.0 * A * PI)
    c2a = np.cos(2.0 * A * PI)
    a = 2.0 * kl * s2a + (kl * kl + 1.0) * np.sin(2.0 * k * PI)
    b = 2.0 * kl * (c2a - np.cos(2.0 * k * PI))
    c = (2.0 * kl * s2a * np.cos(k * l1)
         - (kl * kl + 1.0) * (c2a * np.sin(k * l1) - np.sin(k * (l1 + TWO_PI))))
    scale = np.maximum(1.0, 2.0 * np.abs(kl) + 2.0 * (kl * kl + 1.0))
    return a, b, c, scale


# -- negative branch -------------------------------------------------------

def _sh(u, X, kap):
    # sinh(kap*u) * exp(-kap*X); requires |u| <= X so exponents stay <= 0
    return 0.5 * (np.exp(kap * (u - X)) - np.exp(-kap * (u + X)))


def _ch(u, X, kap):
    u = abs(u)
    return 0.5 * (np.exp(kap * (u - X)) + np.exp(-kap * (u + X)))


def _shch(u, v, X, kap):
    # sinh(kap*u) * cosh(kap*v) * exp(-kap*X); u, v >= 0 and u + v <= X
    return 0.25 * (np.exp(kap * (u + v - X)) + np.exp(kap * (u - v - X))
                   - np.exp(kap * (v - u - X)) - np.exp(kap * (-u - v - X)))


def loose_neg_abc(kap, ell, l1, l3, A, scaled=True):
    kap = np.asarray(kap, dtype=np.float64)
    X = TWO_PI + l1
    K2 = (kap * ell) ** 2
    K4 = K2 * K2
    a = (-4.0 * (K2 - 1.0) * (np.cos(A * l3) * _sh(TWO_PI - l3, X, kap)
                              + np.cos(A * (TWO_PI - l3)) * _sh(l3, X, kap))
         + 8.0 * kap * ell * (np.sin(A * (TWO_PI - l3)) * _ch(l3, X, kap)
                              + np.sin(A * l3) * _ch(TWO_PI - l3, X, kap)))
    b = (4.0 * (K2 - 1.0) * (np.sin(A * (TWO_PI - l3)) * _sh(l3, X, kap)
                             - np.sin(A * l3) * _sh(TWO_PI - l3, X, kap))
         + 8.0 * kap * ell * (np.cos(A * (TWO_PI - l3)) * _ch(l3, X, kap)
                              - np.cos(A * l3) * _ch(TWO_PI - l3, X, kap)))
    d = PI - l3
    sgn = 1.0 if d > 0 else (-1.0 if d < 0 else 0.0)
    c = (4.0 * (K2 - 1.0) * np.cos(2.0 * A * PI) * _sh(l1, X, kap)
         + (K4 + 3.0) * (_shch(l1, TWO_PI, X, kap) - _shch(l1, 2.0 * abs(d), X, kap))
         + 8.0 * kap * ell * np.sin(2.0 * A * PI) * _ch(l1, X, kap)
         - 2.0 * (K2 - 1.0) * (sgn * _shch(2.0 * abs(d), l1, X, kap) + _shch(TWO_PI, l1, X, kap))
         - 4.0 * (K2 - 1.0) * _shch(l1 + l3, TWO_PI - l3, X, kap))
    scale = np.maximum(1.0, (K4 + 3.0) + 16.0 * np.abs(K2 - 1.0) + 16.0 * kap * ell)
    if not scaled:
        E = np.exp(kap * X)
        a, b, c, scale = a * E, b * E, c * E, scale * E
    return a, b, c, scale


def tight_neg_abc(kap, ell, l3, A, scaled=True):
    kap = np.asarray(kap, dtype=np.float64)
    X = TWO_PI
    K2 = (kap * ell) ** 2
    a = ((1.0 - K2) * (np.cos(A * l3) * _sh(TWO_PI - l3, X, kap)
                       + np.cos(A * (TWO_PI - l3)) * _sh(l3, X, kap))
         + 2.0 * kap * ell * (np.sin(A * (TWO_PI - l3)) * _ch(l3, X, kap)
                              + np.sin(A * l3) * _ch(TWO_PI - l3, X, kap)))
    b = ((K2 - 1.0) * (np.sin(A * (TWO_PI - l3)) * _sh(l3, X, kap)
                       - np.sin(A * l3) * _sh(TWO_PI - l3, X, kap))
         + 2.0 * kap * ell * (np.cos(A * (TWO_PI - l3)) * _ch(l3, X, kap)
                              - np.cos(A * l3) * _ch(TWO_PI - l3, X, kap)))
    c = (2.0 * kap * ell * np.sin(2.0 * A * PI) * np.exp(-kap * X)
         + (1.0 - K2) * _sh(TWO_PI, X, kap))
    scale = np.maximum(1.0, 2.0 * np.abs(1.0 - K2) + 4.0 * kap * ell)
    if not scaled:
        E = np.exp(kap * X)
        a, b, c, scale = a * E, b * E, c * E, scale * E
    return a, b, c, scale


def merged_neg_abc(kap, ell, l1, A, scaled=True):
    kap = np.asarray(kap, dtype=np.float64)
    X = TWO_PI + l1
    K2 = (kap * ell) ** 2
    s2a = np.sin(2.0 * A * PI)
    c2a = np.cos(2.0 * A * PI)
    a = 2.0 * kap * ell * s2a * np.exp(-kap * X) + (1.0 - K2) * _sh(TWO_PI, X, kap)
    b = 2.0 * kap * ell * (c2a * np.exp(-kap * X) - _ch(TWO_PI, X, kap))
    c = ((K2 - 1.0) * (c2a * _sh(l1, X, kap) - _sh(l1 + TWO_PI, X, kap))
         + 2.0 * kap * ell * s2a * _ch(l1, X, kap))
    scale = np.maximum(1.0, 4.0 * kap * ell + 2.0 * np.abs(K2 - 1.0))
    if not scaled:
        E = np.exp(kap * X)
        a, b, c, scale = a * E, b * E, c * E, scale * E
    return a, b, c, scale


# -- torus quadrature kernels ----------------------------------------------

def torus_fraction_tight(A, resolution):
    """Midpoint-rule fraction of [0,2pi)^2 with
    sin(y-A*pi)*sin(y+A*pi)*sin(x)*sin(2y-x) >= 0."""
    n = int(resolution)
    xs = (np.arange(n) + 0.5) * (TWO_PI / n)
    sinx = np.sin(xs)
    cosx = np.cos(xs)
    count = 0
    for y in xs:
        ty = np.sin(y - A * PI) * np.sin(y + A * PI)
        vals = ty * sinx * (np.sin(2.0 * y) * cosx - np.cos(2.0 * y) * sinx)
        count += int(np.count_nonzero(vals >= 0.0))
    return count / float(n * n)


def torus_fraction_merged(cal_a, resolution):
    """Midpoint-rule fraction of [0,2pi)^2 with
    sin(2y)^2 - (sin(x+2y) - cal_a*sin(x))^2 >= 0."""
    n = int(resolution)
    xs = (np.arange(n) + 0.5) * (TWO_PI / n)
    sinx = np.sin(xs)
    cosx = np.cos(xs)
    count = 0
    for y in xs:
        s2y = np.sin(2.0 * y)
        c2y = np.cos(2.0 * y)
        w = sinx * c2y + cosx * s2y - cal_a * sinx
        vals = s2y * s2y - w * w
        count += int(np.count_nonzero(vals >= 0.0))
    return count / float(n * n)
