"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` function for function. Used when the compiled
extension is missing or when ``COMPACT_RCS_PURE_PYTHON`` is set.
"""
import cmath
import math

import numpy as np

# below this |xi| the GEV log-density is evaluated in its Gumbel limit
GEV_XI_EPS = 1e-12


def riccati_hankel2(x, n_max):
    """Riccati-Hankel functions of the second kind and derivatives, orders 0..n_max.

    Upward recurrence from the closed forms of orders 0 and 1::

        H[n+1] = (2n+1)/x * H[n] - H[n-1]
        H'[n]  = H[n-1] - n/x * H[n]
    """
    x = float(x)
    n_max = int(n_max)
    h = np.empty(n_max + 1, dtype=np.complex128)
    dh = np.empty(n_max + 1, dtype=np.complex128)
    e = cmath.exp(-1j * x)
    h[0] = 1j * e
    dh[0] = e
    if n_max >= 1:
        h[1] = (1j / x - 1.0) * e
    for n in range(1, n_max):
        h[n + 1] = (2 * n + 1) / x * h[n] - h[n - 1]
    for n in range(1, n_max + 1):
        dh[n] = h[n - 1] - n / x * h[n]
    return h, dh


def mie_backscatter_sum(x, n_terms):
    """sum_{n=1}^{n_terms} (-1)^n (2n+1) / (H'_n(x) H_n(x))."""
    x = float(x)
    e = cmath.exp(-1j * x)
    h_prev = 1j * e
    h = (1j / x - 1.0) * e
    total = 0j
    sign = -1.0
    for n in range(1, int(n_terms) + 1):
        dh = h_prev - n / x * h
        total += sign * (2 * n + 1) / (dh * h)
        sign = -sign
        h_prev, h = h, (2 * n + 1) / x * h - h_prev
    return total


def mie_backscatter_sums(xs, n_terms):
    xs = np.asarray(xs, dtype=np.float64)
    n_terms = np.broadcast_to(np.asarray(n_terms, dtype=np.int64), xs.shape)
    out = np.empty(xs.shape, dtype=np.complex128)
    for i in range(xs.size):
        out.flat[i] = mie_backscatter_sum(xs.flat[i], n_terms.flat[i])
    return out


def coherent_field(amplitudes, ranges, wavenumbers):
    """sum_i a_i exp(-j 2 k R_i) evaluated for every wavenumber k."""
    amplitudes = np.asarray(amplitudes, dtype=np.float64)
    ranges = np.asarray(ranges, dtype=np.float64)
    k = np.asarray(wavenumbers, dtype=np.float64)
    phase = -2.0 * np.outer(k, ranges)
    return (np.exp(1j * phase) * amplitudes).sum(axis=1)


def gev_nll(xi, mu, sigma, data):
    """Negative GEV log-likelihood; +inf outside the parameter or data support."""
    if not sigma > 0.0:
        return math.inf
    z = (np.asarray(data, dtype=np.float64) - mu) / sigma
    n = z.size
    if abs(xi) < GEV_XI_EPS:
        return n * math.log(sigma) + float(np.sum(z + np.exp(-z)))
    t = 1.0 + xi * z
    if np.any(t <= 0.0):
        return math.inf
    logt = np.log(t)
    return n * math.log(sigma) + (1.0 + 1.0 / xi) * float(logt.sum()) + float(np.exp(-logt / xi).sum())
