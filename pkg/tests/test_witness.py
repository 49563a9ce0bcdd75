import math

import numpy as np
import pytest

from boundent import states, witness
from boundent.errors import BadParams
from boundent.settings import WITNESS_SETTINGS

PROBES = 20_000


def _sym(a):
    return states.ABLSParams.symmetric(a)


def test_generic_construction_matches_explicit(rng):
    for _ in range(50):
        p = states.random_abls(rng)
        gen = witness.wbar_generic(states.abls_direct(p))
        assert np.max(np.abs(gen - witness.wbar_explicit(p))) < 1e-10


def test_wbar_trace_and_kernel():
    p = states.OPTIMAL_ABLS
    w = witness.wbar_explicit(p)
    assert math.isclose(np.trace(w).real, 4.0, abs_tol=1e-12)
    # Wbar annihilates the state it is built from
    assert abs(np.trace(w @ states.abls_direct(p))) < 1e-12


def test_diagonal_entries():
    a, b, c = 0.5, 2.0, 3.0
    d = witness.wbar_diagonal(states.ABLSParams(a, b, c))
    expect = {
        0: 0.5, 7: 0.5,
        4: c**2 / (1 + c**2), 3: 1 / (1 + c**2),
        2: 1 / (1 + b**2), 5: b**2 / (1 + b**2),
        1: 1 / (1 + a**2), 6: a**2 / (1 + a**2),
    }
    for k, v in expect.items():
        assert math.isclose(d[k], v, rel_tol=1e-14)


def test_objective_matches_matrix_sandwich(rng):
    p = states.random_abls(rng)
    w = witness.wbar_explicit(p)
    for _ in range(20):
        ang = rng.uniform(0, math.pi, 3)
        v = witness.product_vector(ang)
        assert math.isclose(witness.epsilon_objective(p, ang), (v.conj() @ w @ v).real, abs_tol=1e-13)


def test_objective_vectorised(rng):
    p = states.OPTIMAL_ABLS
    pts = rng.uniform(0, math.pi, (3, 10))
    batch = witness.epsilon_objective(p, pts)
    single = [witness.epsilon_objective(p, pts[:, i]) for i in range(10)]
    assert np.allclose(batch, single, atol=1e-15)


@pytest.mark.parametrize("a", [0.1, 0.2, 0.3])
def test_corner_branch_formula(a):
    res = witness.epsilon_min(_sym(a), n_probes=PROBES)
    assert abs(res.epsilon - a**2 / (1 + a**2)) < 1e-4
    assert witness.branch(_sym(a)) == "corner"


def test_optimal_landmark():
    res = witness.epsilon_min(states.OPTIMAL_ABLS, n_probes=PROBES)
    assert abs(res.epsilon - 0.1069) < 1e-3


@pytest.mark.parametrize("a", [0.5, 0.7])
def test_symmetric_branch(a):
    p = _sym(a)
    assert witness.branch(p) == "symmetric"
    res = witness.epsilon_min(p, n_probes=PROBES)
    assert abs(res.epsilon - witness.symmetric_minimum(p)[0]) < 1e-8


def test_epsilon_min_deterministic():
    p = _sym(0.5)
    r1 = witness.epsilon_min(p, seed=3, n_probes=PROBES)
    r2 = witness.epsilon_min(p, seed=3, n_probes=PROBES)
    assert r1 == r2


def test_product_states_non_negative(rng):
    # W = Wbar - eps I must be non-negative on product states, including complex ones
    p = states.OPTIMAL_ABLS
    eps = witness.epsilon_min(p, n_probes=PROBES).epsilon
    w = witness.witness_operator(p, eps)
    for _ in range(1000):
        v = witness.product_vector(rng.uniform(0, math.pi, 3), rng.uniform(0, 2 * math.pi, 3))
        assert (v.conj() @ w @ v).real >= -1e-9


def test_phases_never_lower_the_objective(rng):
    # phases only shrink the coherence term, so the real minimum is the global one
    p = _sym(0.5)
    w = witness.wbar_explicit(p)
    for _ in range(200):
        ang = rng.uniform(0, math.pi, 3)
        v = witness.product_vector(ang, rng.uniform(0, 2 * math.pi, 3))
        # flipping one angle to pi - t flips the sign of the coherence term
        best = min(witness.epsilon_objective(p, ang), witness.epsilon_objective(p, [ang[0], ang[1], math.pi - ang[2]]))
        assert (v.conj() @ w @ v).real >= best - 1e-12


def test_canonical_angles_invariance(rng):
    p = _sym(0.4)
    for _ in range(20):
        ang = rng.uniform(-3, 3, 3)
        can = witness.canonical_angles(ang)
        assert all(0 <= x < math.pi for x in can)
        assert math.isclose(witness.epsilon_objective(p, can), witness.epsilon_objective(p, ang), abs_tol=1e-14)


def test_witness_value_is_minus_epsilon():
    p = states.OPTIMAL_ABLS
    eps = witness.epsilon_min(p, n_probes=PROBES).epsilon
    assert math.isclose(witness.witness_value(p, epsilon=eps), -eps, abs_tol=1e-12)


def test_witness_value_rejects_other_params():
    with pytest.raises(BadParams):
        witness.witness_value(states.EQ24_DCT)


def test_noise_threshold():
    p = states.OPTIMAL_ABLS
    eps = witness.epsilon_min(p, n_probes=PROBES).epsilon
    p_star = witness.noise_threshold(eps)
    assert abs(p_star - 0.786) < 2e-3
    assert abs(p_star - witness.noise_threshold_search(p, eps)) < 1e-9
    # maximally mixed state sits at 1/2 - eps
    assert math.isclose(witness.witness_value(p, np.eye(8) / 8, eps), 0.5 - eps, abs_tol=1e-12)


def test_coherence_pauli_identity():
    ghz = np.zeros((8, 8))
    ghz[0, 7] = ghz[7, 0] = 1
    assert np.max(np.abs(witness.coherence_from_pauli_strings() - ghz)) < 1e-12


def test_four_setting_reassembly(rng):
    for _ in range(10):
        p = states.random_abls(rng)
        eps = float(rng.uniform(0, 0.2))
        terms = witness.pauli_settings(p, eps)
        assert [t.setting for t in terms] == list(WITNESS_SETTINGS)
        assert np.max(np.abs(witness.reassemble(terms) - witness.witness_operator(p, eps))) < 1e-12


def test_witness_report():
    rep = witness.witness_report(states.OPTIMAL_ABLS, n_probes=PROBES)
    assert rep.witness_value < 0
    assert rep.n_settings == 4
    d = rep.to_dict()
    assert set(d) == {"params", "epsilon", "minimizer_angles", "witness_value", "noise_threshold", "n_settings"}
