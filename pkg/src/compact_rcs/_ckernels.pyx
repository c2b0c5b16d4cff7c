# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same signatures and semantics as ``_pykernels``."""
import numpy as np

from libc.math cimport log, exp, sin, cos, fabs, INFINITY

cdef double GEV_XI_EPS = 1e-12


cdef inline double complex _cexp_neg_i(double x) nogil:
    return cos(x) - 1j * sin(x)


def riccati_hankel2(double x, int n_max):
    cdef Py_ssize_t n
    h_arr = np.empty(n_max + 1, dtype=np.complex128)
    dh_arr = np.empty(n_max + 1, dtype=np.complex128)
    cdef double complex[::1] h = h_arr
    cdef double complex[::1] dh = dh_arr
    cdef double complex e = _cexp_neg_i(x)
    h[0] = 1j * e
    dh[0] = e
    if n_max >= 1:
        h[1] = (1j / x - 1.0) * e
    for n in range(1, n_max):
        h[n + 1] = (2 * n + 1) / x * h[n] - h[n - 1]
    for n in range(1, n_max + 1):
        dh[n] = h[n - 1] - n / x * h[n]
    return h_arr, dh_arr


cdef double complex _mie_sum(double x, long n_terms) nogil:
    cdef double complex e = _cexp_neg_i(x)
    cdef double complex h_prev = 1j * e
    cdef double complex h = (1j / x - 1.0) * e
    cdef double complex h_next, dh
    cdef double complex total = 0
    cdef double sign = -1.0
    cdef long n
    for n in range(1, n_terms + 1):
        dh = h_prev - n / x * h
        total = total + sign * (2 * n + 1) / (dh * h)
        sign = -sign
        h_next = (2 * n + 1) / x * h - h_prev
        h_prev = h
        h = h_next
    return total


def mie_backscatter_sum(double x, long n_terms):
    return complex(_mie_sum(x, n_terms))


def mie_backscatter_sums(xs, n_terms):
    xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
    nt_arr = np.ascontiguousarray(np.broadcast_to(np.asarray(n_terms, dtype=np.int64), xs_arr.shape))
    out_arr = np.empty(xs_arr.shape, dtype=np.complex128)
    cdef const double[::1] xv = xs_arr.reshape(-1)
    cdef const long long[::1] nv = nt_arr.reshape(-1)
    cdef double complex[::1] ov = out_arr.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _mie_sum(xv[i], nv[i])
    return out_arr


def coherent_field(amplitudes, ranges, wavenumbers):
    cdef const double[::1] a = np.ascontiguousarray(amplitudes, dtype=np.float64)
    cdef const double[::1] r = np.ascontiguousarray(ranges, dtype=np.float64)
    cdef const double[::1] k = np.ascontiguousarray(wavenumbers, dtype=np.float64)
    out_arr = np.empty(k.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, m
    cdef double re, im, ph
    with nogil:
        for m in range(k.shape[0]):
            re = 0.0
            im = 0.0
            for i in range(a.shape[0]):
                ph = -2.0 * k[m] * r[i]
                re = re + a[i] * cos(ph)
                im = im + a[i] * sin(ph)
            out[m] = re + 1j * im
    return out_arr


def gev_nll(double xi, double mu, double sigma, data):
    cdef const double[::1] x = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double z, t, logt, s1 = 0.0, s2 = 0.0
    if not sigma > 0.0:
        return INFINITY
    with nogil:
        if fabs(xi) < GEV_XI_EPS:
            for i in range(n):
                z = (x[i] - mu) / sigma
                s1 = s1 + z + exp(-z)
        else:
            for i in range(n):
                z = (x[i] - mu) / sigma
                t = 1.0 + xi * z
                if t <= 0.0:
                    s1 = INFINITY
                    break
                logt = log(t)
                s1 = s1 + logt
                s2 = s2 + exp(-logt / xi)
    if s1 == INFINITY:
        return INFINITY
    if fabs(xi) < GEV_XI_EPS:
        return n * log(sigma) + s1
    return n * log(sigma) + (1.0 + 1.0 / xi) * s1 + s2
