# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: squeeze-matrix recursion, pair-state grid, loss matrix,
detection series.

Semantics match sqcomp._kernels_py exactly; see that module for the
stability commentary (wedge-restricted recursions, peak-anchored series).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, cosh, exp, lgamma, log, sqrt, tanh

cnp.import_array()

BACKEND = "compiled"

cdef double _LOG_EPS = log(1e-300)


cdef inline void _wedge_row(double[:, ::1] m, Py_ssize_t h, double th,
                            double sech, Py_ssize_t ncols) noexcept nogil:
    """Strict-wedge part (k < h) of row h of the squeeze recursion."""
    cdef Py_ssize_t top = h - 1 if h - 1 < ncols - 1 else ncols - 1
    cdef Py_ssize_t k
    cdef double inv_rth = 1.0 / sqrt(<double>h)
    if h >= 2:
        m[h, 0] = th * sqrt(h - 1.0) * m[h - 2, 0] * inv_rth
    else:
        m[h, 0] = 0.0
    for k in range(1, top + 1):
        m[h, k] = (th * sqrt(h - 1.0) * m[h - 2, k] if h >= 2 else 0.0)
        m[h, k] = (m[h, k] + sech * sqrt(<double>k) * m[h - 1, k - 1]) * inv_rth


def squeeze_matrix_real(double r, Py_ssize_t rows, Py_ssize_t cols):
    """Matrix elements <h|S(r)|k> of the real-parameter squeezing operator."""
    cdef double th = tanh(r), sech = 1.0 / cosh(r)
    cdef double seed = sqrt(sech)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] plus_arr = np.zeros((rows, cols))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] minus_arr = np.zeros((cols, rows))
    cdef double[:, ::1] plus = plus_arr
    cdef double[:, ::1] minus = minus_arr
    cdef Py_ssize_t h, k, hmax = rows if rows > cols else cols
    cdef Py_ssize_t ndiag = rows if rows < cols else cols
    cdef double acc

    plus[0, 0] = seed
    minus[0, 0] = seed
    for h in range(1, hmax):
        if h < rows:
            _wedge_row(plus, h, th, sech, cols)
        if h < cols:
            _wedge_row(minus, h, -th, sech, rows)
        if h < ndiag:
            # the (h-2, h) source sits in the other grid's wedge
            acc = sech * sqrt(<double>h) * plus[h - 1, h - 1]
            if h >= 2:
                acc += th * sqrt(h - 1.0) * minus[h, h - 2]
            plus[h, h] = acc / sqrt(<double>h)
            acc = sech * sqrt(<double>h) * minus[h - 1, h - 1]
            if h >= 2:
                acc -= th * sqrt(h - 1.0) * plus[h, h - 2]
            minus[h, h] = acc / sqrt(<double>h)

    out = minus_arr.T.copy()
    low = np.tril_indices(rows, m=cols)
    out[low] = plus_arr[low]
    return out


def pair_state_real(double tanh_r, double tanh_s, Py_ssize_t dim):
    """Output-state amplitude grid for real (r, s); see the python twin."""
    cdef double a11 = 0.5 * (tanh_r - tanh_s)
    cdef double a12 = 0.5 * (tanh_r + tanh_s)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = \
        np.zeros((dim, dim))
    cdef double[:, ::1] d = out
    cdef Py_ssize_t h, k
    cdef double acc, rth1, inv_rth

    d[0, 0] = ((1.0 - tanh_r * tanh_r) * (1.0 - tanh_s * tanh_s)) ** 0.25
    for h in range(1, dim):
        rth1 = sqrt(h - 1.0)
        inv_rth = 1.0 / sqrt(<double>h)
        if h >= 2:
            d[h, 0] = a11 * rth1 * d[h - 2, 0] * inv_rth
        # parity: only k = h (mod 2) is populated
        for k in range(2 - (h & 1), h, 2):
            d[h, k] = (a11 * rth1 * d[h - 2, k]
                       + a12 * sqrt(<double>k) * d[h - 1, k - 1]) * inv_rth
        acc = a12 * sqrt(<double>h) * d[h - 1, h - 1]
        if h >= 2:
            acc += a11 * rth1 * d[h, h - 2]  # mirror of (h-2, h)
        d[h, h] = acc * inv_rth
    for h in range(1, dim):
        for k in range(h):
            d[k, h] = d[h, k]
    return out


def binomial_loss(double eta, Py_ssize_t dim):
    """B[k, n] = C(k, n) eta^n (1-eta)^(k-n) via the Pascal-type recurrence."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((dim, dim))
    cdef double[:, ::1] b = out
    cdef double one_m = 1.0 - eta
    cdef Py_ssize_t k, n

    b[0, 0] = 1.0
    for k in range(dim - 1):
        b[k + 1, 0] = one_m * b[k, 0]
        for n in range(1, k + 2):
            b[k + 1, n] = one_m * b[k, n] + eta * b[k, n - 1]
    return out


cdef double _scaled_diag_hyp(Py_ssize_t n, double log_a, double x):
    """a^n * 2F1(1+n, 1+n; 1; x), summed outward from the peak term."""
    cdef double sx, log_peak, peak, total, d, ratio, lt
    cdef Py_ssize_t jp, j

    if x == 0.0:
        lt = n * log_a
        return exp(lt) if lt > _LOG_EPS else 0.0

    sx = sqrt(x)
    jp = <Py_ssize_t>(n * sx / (1.0 - sx))
    log_peak = (n * log_a
                + 2.0 * (lgamma(1.0 + n + jp) - lgamma(1.0 + jp) - lgamma(1.0 + n))
                + jp * log(x))
    if log_peak < _LOG_EPS:
        return 0.0
    peak = exp(log_peak)

    total = peak
    d = peak
    j = jp
    while True:
        ratio = x * ((1.0 + n + j) / (1.0 + j)) ** 2
        d *= ratio
        j += 1
        total += d
        if ratio < 1.0 and d < 1e-16 * total:
            break
    d = peak
    j = jp
    while j > 0:
        d *= j * j / (x * (n + j) * (n + j))
        j -= 1
        total += d
        if d < 1e-16 * total:
            break
    return total


def same_state_zero_prob_series(double lam_sq, double eta, Py_ssize_t n_cap,
                                double term_tol):
    """Equal-input zero-difference probability series; see the python twin."""
    cdef double x, a, log_a, total, prev, t, rho, tail, pref
    cdef Py_ssize_t n, n_used, small_streak

    if lam_sq == 0.0:
        return 1.0, 1, 0.0
    x = (1.0 - eta) ** 2 * lam_sq
    if x >= 1.0:
        raise ValueError("series argument left its convergence region")

    a = eta * eta * lam_sq
    log_a = log(a)
    total = 1.0 / (1.0 - x)
    prev = total
    small_streak = 0
    n_used = 1
    tail = 0.0
    for n in range(1, n_cap + 1):
        t = _scaled_diag_hyp(n, log_a, x)
        total += t
        n_used = n + 1
        small_streak = small_streak + 1 if t < term_tol else 0
        if small_streak >= 2:
            break
        if n == n_cap and t >= term_tol:
            rho = t / prev if prev > 0.0 else 0.0
            tail = t * rho / (1.0 - rho) if rho < 1.0 else INFINITY
        prev = t

    pref = 1.0 - lam_sq
    return min(pref * total, 1.0), n_used, pref * tail


def hyp2f1_diag(Py_ssize_t n, double x):
    """2F1(1+n, 1+n; 1; x) by its power series; small-n reference helper."""
    return _scaled_diag_hyp(n, 0.0, x)
