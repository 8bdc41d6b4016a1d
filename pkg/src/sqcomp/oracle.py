"""Brute-force validators, independent of the main construction.

These exponentiate truncated generators directly (scaling-and-squaring via
scipy) or sum the lossy-detection probability term by term with no
regrouping. They are deliberately slow and are trusted only through
internal convergence (dimension doubling) and analytic trivia, never
through the code they validate.
"""

import math

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

from .errors import CostGuardExceeded
from .fock import SqueezeParam, squeeze_tanh

_COST_GUARD = 16


def _ladder(dim):
    """Annihilation operator on the truncated basis."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def squeeze_generator(gamma, dim):
    """Anti-Hermitian exponent of the squeezing operator: g/2 (a+)^2 - g*/2 a^2."""
    a = _ladder(dim)
    ad = a.T
    g = gamma.value
    return 0.5 * g * (ad @ ad) - 0.5 * np.conj(g) * (a @ a)


def expm_squeeze(gamma, dim):
    """S(g) as the matrix exponential of the truncated generator.

    Elements with both indices at most dim/2 are trustworthy references;
    beyond that the generator truncation bites.
    """
    return expm(squeeze_generator(gamma, dim))


def _ladder_sparse(dim):
    return sparse.diags(np.sqrt(np.arange(1.0, dim)), 1, format="csr")


def two_mode_squeeze_generator(gamma, dim):
    """Exponent of the pair-creation operator g a+b+ - g* ab on the joint basis."""
    a = _ladder_sparse(dim)
    ad = a.T.tocsr()
    g = gamma.value
    return (g * sparse.kron(ad, ad) - np.conj(g) * sparse.kron(a, a)).tocsc()


def expm_twb(gamma, dim):
    """Two-mode squeezed vacuum from the exponentiated pair-creation generator."""
    v0 = np.zeros(dim * dim, dtype=complex)
    v0[0] = 1.0
    v = expm_multiply(two_mode_squeeze_generator(gamma, dim), v0)
    return v.reshape(dim, dim)


def beam_splitter_generator(dim):
    """Balanced-mixer exponent, oriented so S(g) x S(-g) |0,0> maps to the TWB."""
    a = _ladder_sparse(dim)
    ad = a.T.tocsr()
    return (0.25 * math.pi) * (sparse.kron(a, ad) - sparse.kron(ad, a)).tocsc()


def expm_output_state(xi, zeta, dim):
    """Comparator output amplitudes via the raw pipeline.

    Squeezed vacua from expm_squeeze, the pi/2 shift folded as a sign flip on
    the second input, then the exact balanced-mixer unitary applied in the
    joint basis by exponentiating its generator.
    """
    va = expm_squeeze(xi, dim)[:, 0]
    vb = expm_squeeze(SqueezeParam.from_complex(-zeta.value), dim)[:, 0]
    v = np.kron(va, vb)
    return expm_multiply(beam_splitter_generator(dim), v).reshape(dim, dim)


def direct_smeared_zero_prob(xi, zeta, eta, n_max_small):
    """Lossy-detection zero-difference probability, summed exactly as printed.

    Quintuple sum, term by term, no regrouping: the independent reference for
    the contracted implementation in sqcomp.comparator. Squeeze-operator
    elements come from expm_squeeze at doubled dimension so the oracle never
    touches the main recurrence.
    """
    if n_max_small > _COST_GUARD:
        raise CostGuardExceeded(
            f"n_max_small = {n_max_small} exceeds the cost guard ({_COST_GUARD})"
        )
    nn = n_max_small + 1
    plus = SqueezeParam.from_complex(0.5 * (xi.value + zeta.value))
    minus = SqueezeParam.from_complex(0.5 * (xi.value - zeta.value))
    lam = squeeze_tanh(plus)

    smat = expm_squeeze(minus, 2 * nn)[:nn, :nn]
    sdag = smat.conj().T

    pow_lam = [lam**l for l in range(nn)]
    pow_eta2 = [eta ** (2 * n) for n in range(nn)]
    pow_loss = [(1.0 - eta) ** j for j in range(2 * nn)]
    comb = [[math.comb(k, n) for n in range(nn)] for k in range(nn)]

    total = 0.0 + 0.0j
    for n in range(nn):
        for l in range(nn):
            for m in range(nn):
                pre = pow_eta2[n] * pow_lam[l] * pow_lam[m].conjugate()
                for h in range(n, nn):
                    ch = comb[h][n]
                    sh_l = smat[h, l]
                    sd_mh = sdag[m, h]
                    for k in range(n, nn):
                        total += (
                            pre
                            * pow_loss[h + k - 2 * n]
                            * ch
                            * comb[k][n]
                            * smat[k, l]
                            * sh_l
                            * sdag[m, k]
                            * sd_mh
                        )
    return float(((1.0 - abs(lam) ** 2) * total).real)
