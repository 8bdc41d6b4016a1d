"""Oracle self-consistency: convergence by dimension doubling and analytic trivia."""

import math

import numpy as np
import pytest

from sqcomp import oracle
from sqcomp.errors import CostGuardExceeded
from sqcomp.fock import SqueezeParam


def test_generator_antihermitian():
    g = oracle.squeeze_generator(SqueezeParam(0.7, 1.3), 40)
    assert np.max(np.abs(g + g.conj().T)) < 1e-12


def test_expm_squeeze_identity():
    np.testing.assert_allclose(
        oracle.expm_squeeze(SqueezeParam(0.0), 16), np.eye(16), atol=1e-14
    )


def test_expm_squeeze_dimension_doubling():
    a = oracle.expm_squeeze(SqueezeParam(0.5), 64)
    b = oracle.expm_squeeze(SqueezeParam(0.5), 128)
    # vacuum column converged at dim 64; the k = 32 column is not yet
    assert np.max(np.abs(a[:17, :17] - b[:17, :17])) < 1e-10


def test_expm_squeeze_parity_emergent():
    u = oracle.expm_squeeze(SqueezeParam(0.8), 48)
    h, k = np.indices(u.shape)
    assert np.max(np.abs(u[(h + k) % 2 == 1])) < 1e-14


def test_expm_squeeze_unitary():
    u = oracle.expm_squeeze(SqueezeParam(0.8), 48)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(48), atol=1e-12)


def test_expm_twb_vacuum():
    amps = oracle.expm_twb(SqueezeParam(0.0), 16)
    assert amps[0, 0] == pytest.approx(1.0, abs=1e-14)
    assert np.max(np.abs(amps.flatten()[1:])) < 1e-14


def test_expm_twb_geometric_ratio():
    amps = oracle.expm_twb(SqueezeParam(0.5), 32)
    assert (amps[1, 1] / amps[0, 0]).real == pytest.approx(math.tanh(0.5), abs=1e-8)
    off = amps - np.diag(np.diag(amps))
    assert np.max(np.abs(off)) < 1e-10


def test_expm_output_state_dimension_doubling():
    a = oracle.expm_output_state(SqueezeParam(0.3), SqueezeParam(0.7), 96)
    b = oracle.expm_output_state(SqueezeParam(0.3), SqueezeParam(0.7), 128)
    assert np.max(np.abs(a[:33, :33] - b[:33, :33])) < 1e-10


def test_expm_output_state_twb_when_equal():
    pipe = oracle.expm_output_state(SqueezeParam(0.4), SqueezeParam(0.4), 64)
    twb = oracle.expm_twb(SqueezeParam(0.4), 64)
    assert np.max(np.abs(pipe[:33, :33] - twb[:33, :33])) < 1e-10


def test_direct_sum_cost_guard():
    with pytest.raises(CostGuardExceeded):
        oracle.direct_smeared_zero_prob(SqueezeParam(0.1), SqueezeParam(0.1), 0.9, 17)


def test_direct_sum_eta_one_collapses_to_ideal():
    # at unit efficiency only the h = k = n terms survive
    val = oracle.direct_smeared_zero_prob(SqueezeParam(0.3), SqueezeParam(0.3), 1.0, 12)
    lam2 = math.tanh(0.3) ** 2
    ideal = (1 - lam2) * sum(lam2**n for n in range(13)) / 1.0
    assert val == pytest.approx(ideal, abs=1e-12)


def test_gaussian_pair_grid_matches_pipeline():
    # independent stable reference for big grids: same nullifier algebra as
    # the main path, but validated here against the expm pipeline alone
    from sqcomp._kernels_py import pair_state_real

    grid = pair_state_real(math.tanh(0.5), math.tanh(0.1), 64)
    pipe = oracle.expm_output_state(SqueezeParam(0.5), SqueezeParam(0.1), 96)
    assert np.max(np.abs(grid[:33, :33] - pipe[:33, :33].real)) < 1e-9
    assert np.max(np.abs(pipe[:33, :33].imag)) < 1e-9
