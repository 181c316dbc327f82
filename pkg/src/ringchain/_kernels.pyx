# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the hot kernels.

Mirrors the API of ``_kernels_py`` exactly; selected at import time by
``ringchain.kernels`` when the extension built.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sin, cos, exp, fabs, fmax

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double TWO_PI = 6.283185307179586476925287
cdef double PI = 3.141592653589793238462643


def loose_pos_abc(object k, double ell, double l1, double l3, double A):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(k, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double kk, kl, p, m, sp, sm, d, kl2
    d = PI - l3
    for i in range(n):
        kk = ks[i]
        kl = kk * ell
        kl2 = kl * kl
        p = (kl + 1.0) * (kl + 1.0)
        m = (kl - 1.0) * (kl - 1.0)
        sp = sin((A + kk) * PI)
        sm = sin((A - kk) * PI)
        a[i] = 8.0 * (p * sp * cos((A - kk) * d) - m * sm * cos((A + kk) * d))
        b[i] = 8.0 * (m * sm * sin((A + kk) * d) - p * sp * sin((A - kk) * d))
        c[i] = (-m * (4.0 * sin(2.0 * PI * A + kk * l1)
                      + p * (sin(kk * (TWO_PI - l1)) + 2.0 * sin(kk * l1) * cos(2.0 * kk * d)))
                + 4.0 * p * sin(2.0 * PI * A - kk * l1)
                + (kl2 + 3.0) * (kl2 + 3.0) * sin(kk * (l1 + TWO_PI)))
        s[i] = fmax(1.0, fmax(8.0 * (p + m), m * (4.0 + 3.0 * p) + 4.0 * p + (kl2 + 3.0) * (kl2 + 3.0)))
    return a, b, c, s


def tight_pos_abc(object k, double ell, double l3, double A):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(k, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double kk, kl, p, m, sp, sm, d, kl2
    d = PI - l3
    for i in range(n):
        kk = ks[i]
        kl = kk * ell
        kl2 = kl * kl
        p = (kl + 1.0) * (kl + 1.0)
        m = (kl - 1.0) * (kl - 1.0)
        sp = sin((A + kk) * PI)
        sm = sin((A - kk) * PI)
        a[i] = p * sp * cos((A - kk) * d) - m * sm * cos((A + kk) * d)
        b[i] = m * sm * sin((A + kk) * d) - p * sp * sin((A - kk) * d)
        c[i] = 2.0 * kl * sin(2.0 * A * PI) + (kl2 + 1.0) * sin(2.0 * kk * PI)
        s[i] = fmax(1.0, fmax(p + m, 2.0 * fabs(kl) + kl2 + 1.0))
    return a, b, c, s


def merged_pos_abc(object k, double ell, double l1, double A):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(k, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double kk, kl, kl2, s2a, c2a
    s2a = sin(2.0 * A * PI)
    c2a = cos(2.0 * A * PI)
    for i in range(n):
        kk = ks[i]
        kl = kk * ell
        kl2 = kl * kl
        a[i] = 2.0 * kl * s2a + (kl2 + 1.0) * sin(2.0 * kk * PI)
        b[i] = 2.0 * kl * (c2a - cos(2.0 * kk * PI))
        c[i] = (2.0 * kl * s2a * cos(kk * l1)
                - (kl2 + 1.0) * (c2a * sin(kk * l1) - sin(kk * (l1 + TWO_PI))))
        s[i] = fmax(1.0, 2.0 * fabs(kl) + 2.0 * (kl2 + 1.0))
    return a, b, c, s


cdef inline double _sh(double u, double X, double kap) nogil:
    return 0.5 * (exp(kap * (u - X)) - exp(-kap * (u + X)))


cdef inline double _ch(double u, double X, double kap) nogil:
    u = fabs(u)
    return 0.5 * (exp(kap * (u - X)) + exp(-kap * (u + X)))


cdef inline double _shch(double u, double v, double X, double kap) nogil:
    return 0.25 * (exp(kap * (u + v - X)) + exp(kap * (u - v - X))
                   - exp(kap * (v - u - X)) - exp(kap * (-u - v - X)))


def loose_neg_abc(object kap, double ell, double l1, double l3, double A, bint scaled=True):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(kap, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double X = TWO_PI + l1
    cdef double d = PI - l3
    cdef double sgn = 1.0 if d > 0 else (-1.0 if d < 0 else 0.0)
    cdef double kp, K2, K4, E
    cdef double cal3 = cos(A * l3), cal2 = cos(A * (TWO_PI - l3))
    cdef double sal3 = sin(A * l3), sal2 = sin(A * (TWO_PI - l3))
    cdef double c2a = cos(2.0 * A * PI), s2a = sin(2.0 * A * PI)
    for i in range(n):
        kp = ks[i]
        K2 = (kp * ell) * (kp * ell)
        K4 = K2 * K2
        a[i] = (-4.0 * (K2 - 1.0) * (cal3 * _sh(TWO_PI - l3, X, kp) + cal2 * _sh(l3, X, kp))
                + 8.0 * kp * ell * (sal2 * _ch(l3, X, kp) + sal3 * _ch(TWO_PI - l3, X, kp)))
        b[i] = (4.0 * (K2 - 1.0) * (sal2 * _sh(l3, X, kp) - sal3 * _sh(TWO_PI - l3, X, kp))
                + 8.0 * kp * ell * (cal2 * _ch(l3, X, kp) - cal3 * _ch(TWO_PI - l3, X, kp)))
        c[i] = (4.0 * (K2 - 1.0) * c2a * _sh(l1, X, kp)
                + (K4 + 3.0) * (_shch(l1, TWO_PI, X, kp) - _shch(l1, 2.0 * fabs(d), X, kp))
                + 8.0 * kp * ell * s2a * _ch(l1, X, kp)
                - 2.0 * (K2 - 1.0) * (sgn * _shch(2.0 * fabs(d), l1, X, kp) + _shch(TWO_PI, l1, X, kp))
                - 4.0 * (K2 - 1.0) * _shch(l1 + l3, TWO_PI - l3, X, kp))
        s[i] = fmax(1.0, (K4 + 3.0) + 16.0 * fabs(K2 - 1.0) + 16.0 * kp * ell)
        if not scaled:
            E = exp(kp * X)
            a[i] *= E; b[i] *= E; c[i] *= E; s[i] *= E
    return a, b, c, s


def tight_neg_abc(object kap, double ell, double l3, double A, bint scaled=True):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(kap, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double X = TWO_PI
    cdef double kp, K2, E
    cdef double cal3 = cos(A * l3), cal2 = cos(A * (TWO_PI - l3))
    cdef double sal3 = sin(A * l3), sal2 = sin(A * (TWO_PI - l3))
    cdef double s2a = sin(2.0 * A * PI)
    for i in range(n):
        kp = ks[i]
        K2 = (kp * ell) * (kp * ell)
        a[i] = ((1.0 - K2) * (cal3 * _sh(TWO_PI - l3, X, kp) + cal2 * _sh(l3, X, kp))
                + 2.0 * kp * ell * (sal2 * _ch(l3, X, kp) + sal3 * _ch(TWO_PI - l3, X, kp)))
        b[i] = ((K2 - 1.0) * (sal2 * _sh(l3, X, kp) - sal3 * _sh(TWO_PI - l3, X, kp))
                + 2.0 * kp * ell * (cal2 * _ch(l3, X, kp) - cal3 * _ch(TWO_PI - l3, X, kp)))
        c[i] = 2.0 * kp * ell * s2a * exp(-kp * X) + (1.0 - K2) * _sh(TWO_PI, X, kp)
        s[i] = fmax(1.0, 2.0 * fabs(1.0 - K2) + 4.0 * kp * ell)
        if not scaled:
            E = exp(kp * X)
            a[i] *= E; b[i] *= E; c[i] *= E; s[i] *= E
    return a, b, c, s


def merged_neg_abc(object kap, double ell, double l1, double A, bint scaled=True):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ks = np.ascontiguousarray(kap, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ks.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.empty(n), b = np.empty(n), c = np.empty(n), s = np.empty(n)
    cdef double X = TWO_PI + l1
    cdef double kp, K2, E
    cdef double s2a = sin(2.0 * A * PI), c2a = cos(2.0 * A * PI)
    for i in range(n):
        kp = ks[i]
        K2 = (kp * ell) * (kp * ell)
        a[i] = 2.0 * kp * ell * s2a * exp(-kp * X) + (1.0 - K2) * _sh(TWO_PI, X, kp)
        b[i] = 2.0 * kp * ell * (c2a * exp(-kp * X) - _ch(TWO_PI, X, kp))
        c[i] = ((K2 - 1.0) * (c2a * _sh(l1, X, kp) - _sh(l1 + TWO_PI, X, kp))
                + 2.0 * kp * ell * s2a * _ch(l1, X, kp))
        s[i] = fmax(1.0, 4.0 * kp * ell + 2.0 * fabs(K2 - 1.0))
        if not scaled:
            E = exp(kp * X)
            a[i] *= E; b[i] *= E; c[i] *= E; s[i] *= E
    return a, b, c, s


def torus_fraction_tight(double A, int resolution):
    cdef Py_ssize_t n = resolution, i, j
    cdef double h = TWO_PI / n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sinx = np.empty(n), cosx = np.empty(n)
    cdef double x, y, ty, s2y, c2y
    cdef long count = 0
    for i in range(n):
        x = (i + 0.5) * h
        sinx[i] = sin(x)
        cosx[i] = cos(x)
    with nogil:
        for j in range(n):
            y = (j + 0.5) * h
            ty = sin(y - A * PI) * sin(y + A * PI)
            s2y = sin(2.0 * y)
            c2y = cos(2.0 * y)
            for i in range(n):
                if ty * sinx[i] * (s2y * cosx[i] - c2y * sinx[i]) >= 0.0:
                    count += 1
    return count / float(n) / float(n)


def torus_fraction_merged(double cal_a, int resolution):
    cdef Py_ssize_t n = resolution, i, j
    cdef double h = TWO_PI / n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sinx = np.empty(n), cosx = np.empty(n)
    cdef double x, y, s2y, c2y, w
    cdef long count = 0
    for i in range(n):
        x = (i + 0.5) * h
        sinx[i] = sin(x)
        cosx[i] = cos(x)
    with nogil:
        for j in range(n):
            y = (j + 0.5) * h
            s2y = sin(2.0 * y)
            c2y = cos(2.0 * y)
            for i in range(n):
                w = sinx[i] * c2y + cosx[i] * s2y - cal_a * sinx[i]
                if s2y * s2y - w * w >= 0.0:
                    count += 1
    return count / float(n) / float(n)
