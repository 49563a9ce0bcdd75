import math

import numpy as np
import pytest

from boundent import circuit as qc
from boundent import states
from boundent.errors import BadParams
from boundent.qmat import eigvals, partial_trace, projector


def test_abls_params_validation():
    with pytest.raises(BadParams, match="ab≠c violated"):
        states.ABLSParams(1, 1, 1)
    with pytest.raises(BadParams):
        states.ABLSParams(-1, 1, 2)
    p = states.ABLSParams.symmetric(0.5)
    assert (p.a, p.b, p.c) == (0.5, 0.5, 2.0)


def test_abls_direct_is_state_with_seven_terms():
    rho = states.abls_direct(states.OPTIMAL_ABLS)
    assert abs(np.trace(rho) - 1) < 1e-14
    ev = eigvals(rho)
    assert ev.min() > -1e-14
    assert np.sum(ev > 1e-12) == 7


def test_abls_gate_constants_balance():
    for a in (0.2, 0.346, 3.0):
        k = states.ABLSParams(a, 1.3, 0.7).gate_constants()
        assert abs(k["alpha"] * k["N1"] * k["N2"] - k["beta"] * k["N3"] * k["N4"]) < 1e-14
        assert abs(k["alpha"] ** 2 + k["beta"] ** 2 - 1) < 1e-14


def test_abls_preparation_reaches_psi(rng):
    for _ in range(20):
        p = states.random_abls(rng)
        psi = qc.run(states.abls_preparation(p))
        assert abs(abs(np.vdot(states.abls_psi(p), psi)) - 1) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_abls_network_equals_direct(seed):
    p = states.random_abls(np.random.default_rng(seed))
    assert np.max(np.abs(states.abls_network(p) - states.abls_direct(p))) < 1e-10


def test_abls_network_insensitive_to_toffoli_phases(rng):
    # patterns 000 and 111 end on the same ancilla state, so only their
    # relative phase survives the ancilla trace; the other six are free
    p = states.OPTIMAL_ABLS
    for _ in range(10):
        phases = rng.uniform(0, 2 * np.pi, 8)
        phases[7] = phases[0]
        assert np.max(np.abs(states.abls_network(p, tuple(phases)) - states.abls_direct(p))) < 1e-10


def test_abls_network_toffoli_relative_phase_rotates_ghz_coherence():
    p = states.OPTIMAL_ABLS
    phi = 0.7
    phases = (0.0,) * 7 + (phi,)
    rho = states.abls_network(p, phases)
    ref = states.abls_direct(p)
    assert abs(rho[7, 0] - ref[7, 0] * np.exp(1j * phi)) < 1e-12
    mask = np.ones((8, 8), dtype=bool)
    mask[0, 7] = mask[7, 0] = False
    assert np.max(np.abs((rho - ref)[mask])) < 1e-12


def test_dct_params_validation():
    with pytest.raises(BadParams):
        states.DCTParams(0.5, 0.5, 0.5, 0.0, 0.0)
    with pytest.raises(BadParams):
        states.DCTParams(0.2, 0.4, 0.2, 0.1, 0.1)  # Delta < 0


def test_dct_direct_matches_spectral(rng):
    for _ in range(50):
        p = states.random_dct(rng)
        assert np.max(np.abs(states.dct_direct(p) - states.dct_spectral(p))) < 1e-14


def test_eq24_entries():
    rho = states.dct_direct(states.EQ24_DCT)
    assert math.isclose(rho[0, 0].real, 1 / 6)
    assert math.isclose(rho[0, 7].real, 1 / 6)
    assert math.isclose(rho[2, 2].real, 1 / 6)
    assert rho[3, 3] == 0 and rho[4, 4] == 0


def test_dct_schmidt_reconstructs_coefficients(rng):
    for _ in range(100):
        p = states.random_dct(rng)
        sd = states.schmidt(p)
        rebuilt = (sd["alpha_plus"] * np.outer(sd["V2"][:, 0], sd["U2"][:, 0])
                   + sd["alpha_minus"] * np.outer(sd["V2"][:, 1], sd["U2"][:, 1]))
        assert np.max(np.abs(rebuilt - sd["C"])) < 1e-10


def test_dct_preparation_reaches_psi(rng):
    for _ in range(50):
        p = states.random_dct(rng)
        psi = qc.run(states.dct_preparation(p))
        assert abs(abs(np.vdot(states.dct_psi(p), psi)) - 1) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_dct_network_equals_direct(seed):
    p = states.random_dct(np.random.default_rng(100 + seed))
    assert np.max(np.abs(states.dct_network(p) - states.dct_direct(p))) < 1e-10


def test_eq24_network_equals_direct():
    p = states.EQ24_DCT
    assert np.max(np.abs(states.dct_network(p) - states.dct_direct(p))) < 1e-10


def test_network_state_is_a_purification():
    psi = states.abls_network_state(states.OPTIMAL_ABLS)
    assert abs(np.linalg.norm(psi) - 1) < 1e-14
    ancilla = partial_trace(projector(psi), (3, 4, 5))
    system = partial_trace(projector(psi), (0, 1, 2))
    assert np.allclose(np.sort(eigvals(ancilla)), np.sort(eigvals(system)), atol=1e-12)
