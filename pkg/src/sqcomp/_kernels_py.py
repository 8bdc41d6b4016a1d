"""Numpy/pure-Python kernels.

Twin of the compiled extension ``sqcomp._kernels``: same function names,
signatures and semantics. Used automatically when the extension is not
built (see ``sqcomp._backend``).

Stability notes, shared by both backends:

* ``squeeze_matrix_real`` uses the nullifier relations of the squeezing
  operator's Bargmann kernel. In the wedge h >= k the row recursion

      sqrt(h) M[h, k] = tanh sqrt(h-1) M[h-2, k] + sech sqrt(k) M[h-1, k-1]

  has all multipliers below 1; in the opposite wedge the same relation
  amplifies roundoff by sqrt(k/h) per step (measured blow-up ~1e229 at
  dim ~2700), so the upper wedge is taken from the transpose identity
  <h|S(r)|k> = <k|S(-r)|h>, whose own recursion stays in a contractive
  wedge. The two wedge grids exchange their diagonals as they go. (The
  textbook column ladder built on S a+ = (a+ cosh r - a sinh r) S is far
  worse: ~(e^r sqrt(2))^k roundoff growth.)

* ``pair_state_real`` builds the interferometer output grid directly from
  its nullifiers: coefficients (tanh r +- tanh s)/2, whose absolute sum is
  max(tanh r, tanh s) < 1, and the grid is symmetric, so the recursion can
  stay in the h >= k wedge and is sup-norm stable at any cutoff.

* the detection series is summed outward from its peak term (log-gamma
  anchor); summing from j = 0 overflows once the outer index reaches a few
  hundred.
"""

import math

import numpy as np

BACKEND = "python"

_LOG_EPS = math.log(1e-300)


def _wedge_row(m, h, th, sech, rt, ncols):
    """Strict-wedge part (k < h) of row h of the squeeze recursion."""
    top = min(h - 1, ncols - 1)
    m[h, 0] = th * rt[h - 1] * m[h - 2, 0] / rt[h] if h >= 2 else 0.0
    if top >= 1:
        m[h, 1 : top + 1] = (
            th * rt[h - 1] * m[h - 2, 1 : top + 1]
            + sech * rt[1 : top + 1] * m[h - 1, :top]
        ) / rt[h]


def squeeze_matrix_real(r, rows, cols):
    """Matrix elements <h|S(r)|k> of the real-parameter squeezing operator."""
    th, sech = math.tanh(r), 1.0 / math.cosh(r)
    rt = np.sqrt(np.arange(max(rows, cols), dtype=float))
    seed = math.sqrt(sech)

    plus = np.zeros((rows, cols))   # wedge h >= k of S(r)
    minus = np.zeros((cols, rows))  # wedge h >= k of S(-r), transposes to k > h
    plus[0, 0] = seed
    minus[0, 0] = seed
    ndiag = min(rows, cols)
    for h in range(1, max(rows, cols)):
        if h < rows:
            _wedge_row(plus, h, th, sech, rt, cols)
        if h < cols:
            _wedge_row(minus, h, -th, sech, rt, rows)
        if h < ndiag:
            # the (h-2, h) source sits in the other grid's wedge
            acc = sech * rt[h] * plus[h - 1, h - 1]
            if h >= 2:
                acc += th * rt[h - 1] * minus[h, h - 2]
            plus[h, h] = acc / rt[h]
            acc = sech * rt[h] * minus[h - 1, h - 1]
            if h >= 2:
                acc -= th * rt[h - 1] * plus[h, h - 2]
            minus[h, h] = acc / rt[h]

    out = minus.T.copy()
    low = np.tril_indices(rows, m=cols)
    out[low] = plus[low]
    return out


def pair_state_real(tanh_r, tanh_s, dim):
    """Output-state amplitude grid for real parameters (r, s), unit phase.

    Symmetric grid with d[0, 0] = ((1-tanh_r^2)(1-tanh_s^2))^(1/4) and

        sqrt(h) d[h, k] = a11 sqrt(h-1) d[h-2, k] + a12 sqrt(k) d[h-1, k-1],

    a11 = (tanh_r - tanh_s)/2, a12 = (tanh_r + tanh_s)/2. Only the h >= k
    wedge is recursed (the (h-2, h) source folds back through symmetry);
    the rest is mirrored.
    """
    a11 = 0.5 * (tanh_r - tanh_s)
    a12 = 0.5 * (tanh_r + tanh_s)
    rt = np.sqrt(np.arange(dim, dtype=float))
    d = np.zeros((dim, dim))
    d[0, 0] = ((1.0 - tanh_r**2) * (1.0 - tanh_s**2)) ** 0.25
    for h in range(1, dim):
        if h >= 2:
            d[h, 0] = a11 * rt[h - 1] * d[h - 2, 0] / rt[h]
        d[h, 1:h] = (
            a11 * rt[h - 1] * d[h - 2, 1:h] + a12 * rt[1:h] * d[h - 1, : h - 1]
        ) / rt[h]
        acc = a12 * rt[h] * d[h - 1, h - 1]
        if h >= 2:
            acc += a11 * rt[h - 1] * d[h, h - 2]  # mirror of (h-2, h)
        d[h, h] = acc / rt[h]
    return d + np.tril(d, -1).T


def binomial_loss(eta, dim):
    """B[k, n] = C(k, n) eta^n (1-eta)^(k-n), the photon-loss smearing matrix.

    Built by the Pascal-type recurrence B[k+1, n] = (1-eta) B[k, n] + eta B[k, n-1],
    which is division-free and reduces to the identity exactly at eta = 1.
    """
    b = np.zeros((dim, dim))
    b[0, 0] = 1.0
    one_m = 1.0 - eta
    for k in range(dim - 1):
        row = b[k]
        nxt = b[k + 1]
        nxt[0] = one_m * row[0]
        nxt[1 : k + 2] = one_m * row[1 : k + 2] + eta * row[0 : k + 1]
    return b


def _scaled_diag_hyp(n, log_a, x):
    """a^n * 2F1(1+n, 1+n; 1; x) summed outward from its peak term."""
    if x == 0.0:
        lt = n * log_a
        return math.exp(lt) if lt > _LOG_EPS else 0.0

    sx = math.sqrt(x)
    jp = int(n * sx / (1.0 - sx))
    log_peak = (
        n * log_a
        + 2.0 * (math.lgamma(1.0 + n + jp) - math.lgamma(1.0 + jp) - math.lgamma(1.0 + n))
        + jp * math.log(x)
    )
    if log_peak < _LOG_EPS:
        return 0.0
    peak = math.exp(log_peak)

    total = peak
    # upward sweep
    d = peak
    j = jp
    while True:
        ratio = x * ((1.0 + n + j) / (1.0 + j)) ** 2
        d *= ratio
        j += 1
        total += d
        if ratio < 1.0 and d < 1e-16 * total:
            break
    # downward sweep
    d = peak
    j = jp
    while j > 0:
        d *= j * j / (x * (n + j) * (n + j))
        j -= 1
        total += d
        if d < 1e-16 * total:
            break
    return total


def same_state_zero_prob_series(lam_sq, eta, n_cap, term_tol):
    """Zero-difference probability for equal inputs under lossy detection.

    Accumulates (1 - lam_sq) * sum_n (eta^2 lam_sq)^n 2F1(1+n, 1+n; 1; x)
    with x = (1-eta)^2 lam_sq, stopping once two consecutive terms drop
    below ``term_tol`` or ``n_cap`` terms were used.

    Returns (probability, terms_used, tail_bound) where tail_bound is a
    geometric estimate of the un-summed remainder (0.0 when converged).
    """
    if lam_sq == 0.0:
        return 1.0, 1, 0.0
    x = (1.0 - eta) ** 2 * lam_sq
    if x >= 1.0:
        raise ValueError("series argument left its convergence region")

    a = eta * eta * lam_sq
    log_a = math.log(a)
    total = 1.0 / (1.0 - x)  # n = 0 term
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
            tail = t * rho / (1.0 - rho) if rho < 1.0 else math.inf
        prev = t

    pref = 1.0 - lam_sq
    return min(pref * total, 1.0), n_used, pref * tail


def hyp2f1_diag(n, x):
    """2F1(1+n, 1+n; 1; x) by its power series; small-n reference helper."""
    return _scaled_diag_hyp(n, 0.0, x)
