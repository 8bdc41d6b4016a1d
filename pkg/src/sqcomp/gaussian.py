"""Covariance-matrix engine for the comparison interferometer.

Quadrature ordering (q1, p1, q2, p2), vacuum covariance = I/2, so pure
two-mode states built here have det sigma = 1/16. Squeezing parameters are
real in this picture; the phase-shifted input enters as a sign flip.
"""

from dataclasses import dataclass

import numpy as np

from .fock import SqueezeParam, output_state

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.block([[_J, np.zeros((2, 2))], [np.zeros((2, 2)), _J]])
VACUUM_COV = 0.5 * np.eye(4)


def sympl_squeeze(r):
    """Single-mode squeezing in phase space: diag(e^r, e^-r)."""
    return np.diag([np.exp(r), np.exp(-r)])


def local_squeeze(x, y):
    """Independent squeezers on the two modes, block diag(S(x), S(y))."""
    out = np.zeros((4, 4))
    out[:2, :2] = sympl_squeeze(x)
    out[2:, 2:] = sympl_squeeze(y)
    return out


def sympl_bs():
    """Balanced beam-splitter action on (q1, p1, q2, p2)."""
    eye2 = np.eye(2)
    return np.block([[eye2, -eye2], [eye2, eye2]]) / np.sqrt(2.0)


def sympl_twb(r):
    """Pair-squeezer symplectic: balanced mixing of +-r local squeezers."""
    return sympl_bs() @ local_squeeze(r, -r)


def sigma_out(r, s):
    """Output covariance of the comparison interferometer, explicit form.

    Entries are f(x, y) = (e^2x + e^2y)/2 and g(x, y) = (e^2x - e^2y)/2 at
    arguments (r, -s) and (-r, s); equals the composed evolution
    sympl_bs() @ local_squeeze(r, -s) @ VACUUM_COV @ ... exactly.
    """
    f_a = 0.5 * (np.exp(2.0 * r) + np.exp(-2.0 * s))
    g_a = 0.5 * (np.exp(2.0 * r) - np.exp(-2.0 * s))
    f_b = 0.5 * (np.exp(-2.0 * r) + np.exp(2.0 * s))
    g_b = 0.5 * (np.exp(-2.0 * r) - np.exp(2.0 * s))
    return 0.5 * np.array(
        [
            [f_a, 0.0, g_a, 0.0],
            [0.0, f_b, 0.0, g_b],
            [g_a, 0.0, f_a, 0.0],
            [0.0, g_b, 0.0, f_b],
        ]
    )


def sigma_out_composed(r, s):
    """Same covariance by composing the evolution step by step."""
    ls = local_squeeze(r, -s)
    bs = sympl_bs()
    chain = bs @ ls
    return chain @ VACUUM_COV @ chain.T


def sigma_prime(r, s):
    """Covariance of the equivalent half-sum/half-difference arrangement.

    Local squeezers at (r-s)/2 acting on the pair-squeezed vacuum at
    (r+s)/2; agrees with sigma_out elementwise.
    """
    r_plus = 0.5 * (r + s)
    r_minus = 0.5 * (r - s)
    ls = local_squeeze(r_minus, r_minus)
    s2 = sympl_twb(r_plus)
    chain = ls @ s2
    return chain @ VACUUM_COV @ chain.T


def is_symplectic(mat, tol=1e-12):
    """Whether mat preserves the symplectic form to the given tolerance."""
    if mat.shape == (2, 2):
        return abs(mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0] - 1.0) <= tol
    return bool(np.max(np.abs(mat @ OMEGA @ mat.T - OMEGA)) <= tol)


def uncertainty_min_eig(sigma):
    """Smallest eigenvalue of sigma + i Omega / 2 (>= 0 for physical states)."""
    return float(np.linalg.eigvalsh(sigma + 0.5j * OMEGA).min())


@dataclass(frozen=True)
class MomentReport:
    """Outcome of the Fock-vs-covariance second-moment cross-check."""

    sigma_fock: np.ndarray
    sigma_gauss: np.ndarray
    max_dev: float
    threshold: float
    passed: bool


def fock_second_moments(state):
    """4x4 quadrature covariance of a JointFockState (zero first moments)."""
    d = state.amps
    dim = d.shape[0]
    n = np.arange(dim)
    rt = np.sqrt(n.astype(float))
    prob = np.abs(d) ** 2

    n1 = float(np.sum(prob * n[:, None]))
    n2 = float(np.sum(prob * n[None, :]))
    # <a1^2>: couples (h, k) to (h+2, k)
    a1sq = complex(np.sum(d[:-2, :].conj() * (rt[1:-1] * rt[2:])[:, None] * d[2:, :]))
    a2sq = complex(np.sum(d[:, :-2].conj() * (rt[1:-1] * rt[2:])[None, :] * d[:, 2:]))
    # <a1 a2>: couples (h, k) to (h+1, k+1)
    a1a2 = complex(
        np.sum(d[:-1, :-1].conj() * np.outer(rt[1:], rt[1:]) * d[1:, 1:])
    )
    # <a1 a2+>: couples (h, k) to (h+1, k-1)
    a1a2d = complex(
        np.sum(d[:-1, 1:].conj() * np.outer(rt[1:], rt[1:]) * d[1:, :-1])
    )

    q1q1 = a1sq.real + n1 + 0.5
    p1p1 = -a1sq.real + n1 + 0.5
    q1p1 = a1sq.imag
    q2q2 = a2sq.real + n2 + 0.5
    p2p2 = -a2sq.real + n2 + 0.5
    q2p2 = a2sq.imag
    q1q2 = a1a2.real + a1a2d.real
    p1p2 = a1a2d.real - a1a2.real
    q1p2 = a1a2.imag - a1a2d.imag
    p1q2 = a1a2.imag + a1a2d.imag
    return np.array(
        [
            [q1q1, q1p1, q1q2, q1p2],
            [q1p1, p1p1, p1q2, p1p2],
            [q1q2, p1q2, q2q2, q2p2],
            [q1p2, p1p2, q2p2, p2p2],
        ]
    )


def crosscheck_fock(r, s, trunc):
    """Compare output-state quadrature moments against sigma_out.

    Bridges the photon-number picture to the covariance picture; passes when
    the largest deviation stays within 100 * tail_tol.
    """
    state = output_state(SqueezeParam(r), SqueezeParam(s), trunc)
    sf = fock_second_moments(state)
    sg = sigma_out(r, s)
    dev = float(np.max(np.abs(sf - sg)))
    threshold = 100.0 * trunc.tail_tol
    return MomentReport(sf, sg, dev, threshold, dev <= threshold)
