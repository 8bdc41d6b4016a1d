"""Detection POVMs, conditional probabilities, reliability, and baselines.

Two detection models: ideal photon-number projectors, and the same projectors
smeared by binomial photon loss at quantum efficiency eta. All probabilities
factor through the output-state amplitude grid; the efficiency enters only
via a weight grid that can be precomputed once per (eta, cutoff) and shared.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegenerateDenominator, SeriesDivergence, TruncationTooSmall
from .fock import SqueezeParam, _check_equal_phases, _output_grid

__all__ = [
    "Efficiency",
    "PovmElement",
    "ComparisonResult",
    "NoErrorReport",
    "ideal_povm",
    "single_detector_povm",
    "smeared_povm",
    "p_zero",
    "p_zero_eta",
    "p_eta_same",
    "small_r_approx",
    "overlap",
    "p_universal",
    "p_two_hypotheses",
    "reliability",
    "verify_no_error",
]

_SERIES_TERM_TOL = 1e-14


@dataclass(frozen=True)
class Efficiency:
    """Detector quantum efficiency, both detectors alike."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class PovmElement:
    """Positive operator diagonal in the joint number basis: weights[h, k]."""

    weights: np.ndarray

    @property
    def dim(self):
        return self.weights.shape[0]


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome probabilities of one comparison, plus the truncation bound."""

    p_zero: float
    p_diff: float
    truncation_bound: float


@dataclass(frozen=True)
class NoErrorReport:
    """Worst same-input difference-probability found on a grid."""

    eta: float
    max_p_diff: float
    worst_r: float
    threshold: float
    passed: bool


def _freeze(arr):
    arr.flags.writeable = False
    return arr


def ideal_povm(trunc):
    """Zero-difference projector and its complement for perfect detectors."""
    w0 = np.eye(trunc.dim)
    return PovmElement(_freeze(w0)), PovmElement(_freeze(1.0 - w0))


def single_detector_povm(n, eta, trunc):
    """Weights of the n-click operator of one lossy detector over |k><k|.

    Weight eta^n (1-eta)^(k-n) C(k, n) for k >= n; at eta = 1 this collapses
    to the bare projector on |n>.
    """
    if not 0 <= n <= trunc.n_max:
        raise IndexError(f"click count n = {n} outside 0..{trunc.n_max}")
    b = kernels.binomial_loss(eta.eta, trunc.dim)
    return _freeze(np.ascontiguousarray(b[:, n]))


def _zero_weights(eta, trunc):
    b = kernels.binomial_loss(eta.eta, trunc.dim)
    return b @ b.T


def smeared_povm(eta, trunc):
    """Loss-smeared zero-difference element and its complement.

    w0[h, k] = sum_n of the two detectors' n-click weights at photon numbers
    h and k; equals the ideal projector exactly at eta = 1.
    """
    w0 = _zero_weights(eta, trunc)
    return PovmElement(_freeze(w0)), PovmElement(_freeze(1.0 - w0))


def p_zero(xi, zeta, trunc):
    """Ideal-detector probabilities of equal vs different photon counts.

    p_zero sums |d[h, h]|^2 over the diagonal of the output state; p_diff is
    its complement. Identical inputs give p_zero = 1 up to the truncation
    bound.
    """
    # probabilities are phase-independent, so only magnitudes reach the grid
    _check_equal_phases(xi, zeta)
    grid, deficit = _output_grid(xi.magnitude, zeta.magnitude, trunc)
    p0 = float(np.sum(np.diag(grid) ** 2))
    return ComparisonResult(p0, 1.0 - p0, max(deficit, 0.0))


def p_zero_eta(xi, zeta, eta, trunc, e_zero=None):
    """Lossy-detector probabilities of equal vs different click counts.

    Contracts the smeared zero-difference weights with |d[h, k]|^2; pass a
    precomputed ``e_zero`` (from smeared_povm) to share the weight grid
    across many states. Reduces to p_zero at eta = 1.
    """
    _check_equal_phases(xi, zeta)
    grid, deficit = _output_grid(xi.magnitude, zeta.magnitude, trunc)
    if eta.eta == 1.0 and e_zero is None:
        p0 = float(np.sum(np.diag(grid) ** 2))
    else:
        w0 = e_zero.weights if e_zero is not None else _zero_weights(eta, trunc)
        if w0.shape[0] != trunc.dim:
            raise ValueError(
                f"weight grid dim {w0.shape[0]} does not match truncation {trunc.dim}"
            )
        p0 = float(np.einsum("hk,hk->", w0, grid * grid))
    return ComparisonResult(p0, 1.0 - p0, max(deficit, 0.0))


def p_eta_same(r, eta, trunc):
    """Zero-difference probability for identical inputs, closed series form.

    Geometric-weighted sum of diagonal hypergeometric terms in the
    pair-number index, truncated once terms fall below 1e-14 or after
    trunc.n_max terms. If the cap is hit while the geometric tail estimate
    still exceeds trunc.tail_tol the truncation is rejected loudly.
    """
    if r < 0.0:
        raise ValueError(f"squeezing magnitude must be >= 0, got {r}")
    lam_sq = math.tanh(r) ** 2
    if (1.0 - eta.eta) ** 2 * lam_sq >= 1.0:
        raise SeriesDivergence("hypergeometric argument reached 1")
    p, _, tail = kernels.same_state_zero_prob_series(
        lam_sq, eta.eta, trunc.n_max, _SERIES_TERM_TOL
    )
    if tail > trunc.tail_tol:
        raise TruncationTooSmall(tail, trunc.tail_tol, "p_eta_same series cap")
    return p


def small_r_approx(r, eta):
    """Quadratic small-squeezing approximation 1 - 2 eta (1-eta) r^2."""
    return 1.0 - 2.0 * eta.eta * (1.0 - eta.eta) * r * r


def overlap(delta_minus):
    """Overlap of two squeezed vacua whose parameters differ by delta_minus."""
    return 1.0 / math.sqrt(math.cosh(delta_minus))


def p_universal(omega):
    """Difference-detection probability of the any-pure-state comparator."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"overlap must be in [0, 1], got {omega}")
    return 0.5 * (1.0 - omega * omega)


def p_two_hypotheses(omega):
    """Upper bound when only two squeezing values are possible a priori."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"overlap must be in [0, 1], got {omega}")
    return (1.0 - omega * omega) / (1.0 + omega * omega)


def reliability(r, s, eta, trunc):
    """Probability that inputs really differed, given a difference outcome.

    Equal priors over {(r, r), (s, s)} vs {(r, s), (s, r)}. Raises
    DegenerateDenominator when all four conditional probabilities sit below
    the truncation noise floor (e.g. r = s with perfect detectors).
    """
    if r < 0.0 or s < 0.0:
        raise ValueError("squeezing magnitudes must be >= 0")
    e_zero = None
    if eta.eta < 1.0:
        e_zero, _ = smeared_povm(eta, trunc)
    pairs = [(r, s), (s, r), (r, r), (s, s)]
    p_diff = []
    bound = 0.0
    for u, v in pairs:
        res = p_zero_eta(SqueezeParam(u), SqueezeParam(v), eta, trunc, e_zero=e_zero)
        p_diff.append(res.p_diff)
        bound = max(bound, res.truncation_bound)
    denom = sum(p_diff)
    if denom <= 10.0 * bound or denom <= 0.0:
        raise DegenerateDenominator(
            f"difference probabilities ({denom:.3e}) below truncation noise "
            f"({bound:.3e}); reliability undefined"
        )
    return (p_diff[0] + p_diff[1]) / denom


def verify_no_error(r_grid, eta, trunc):
    """Largest same-input difference probability across a squeezing grid.

    At eta = 1 this certifies the no-error behaviour (threshold
    10 * tail_tol); below unit efficiency it documents how strongly the
    guarantee is lost.
    """
    worst_p = -1.0
    worst_r = 0.0
    e_zero = None
    if eta.eta < 1.0:
        e_zero, _ = smeared_povm(eta, trunc)
    for r in r_grid:
        res = p_zero_eta(SqueezeParam(r), SqueezeParam(r), eta, trunc, e_zero=e_zero)
        if res.p_diff > worst_p:
            worst_p, worst_r = res.p_diff, r
    threshold = 10.0 * trunc.tail_tol
    return NoErrorReport(eta.eta, worst_p, worst_r, threshold, worst_p <= threshold)
