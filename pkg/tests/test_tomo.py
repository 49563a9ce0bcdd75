import math

import numpy as np
import pytest

from boundent import states, tomo, witness
from boundent.errors import MissingSetting
from boundent.qmat import projector
from boundent.settings import (
    WITNESS_SETTINGS, MeasSetting, observable, outcome_projectors, parity_signs, tomography_settings,
)
from conftest import random_density


def test_setting_labels():
    assert MeasSetting(("x", "y", "z")).label == "xyz"
    s = MeasSetting(("x+y", "x+y", "x+y"))
    assert MeasSetting.parse(s.label) == s
    with pytest.raises(ValueError):
        MeasSetting(("x", "w", "z"))


@pytest.mark.parametrize("setting", list(WITNESS_SETTINGS) + tomography_settings()[:3])
def test_projectors_complete_and_match_observable(setting):
    projs = outcome_projectors(setting)
    assert np.max(np.abs(sum(projs) - np.eye(8))) < 1e-14
    obs = sum(s * p for s, p in zip(parity_signs(), projs))
    assert np.max(np.abs(obs - observable(setting))) < 1e-14


def test_zzz_outcome_is_basis_index():
    rho = projector(np.eye(8)[5])
    assert tomo.expectation(rho, MeasSetting(("z", "z", "z")))[5] == pytest.approx(1.0)


def test_parameter_count():
    moments = tomo.pauli_moments(tomo.exact_data(np.eye(8) / 8, tomography_settings()))
    assert len(tomography_settings()) == 27
    # 64 Pauli labels, one fixed by normalisation
    assert len(moments) - 1 == 63
    assert moments["000"] == pytest.approx(1.0)


def test_exact_reconstruction(rng):
    for _ in range(10):
        rho = random_density(rng)
        got = tomo.reconstruct(tomo.exact_data(rho, tomography_settings()))
        assert np.max(np.abs(got - rho)) < 1e-12


def test_missing_setting():
    data = tomo.exact_data(np.eye(8) / 8, tomography_settings()[:-1])
    with pytest.raises(MissingSetting):
        tomo.reconstruct(data)


def test_sampling_is_seeded():
    rho = states.abls_direct(states.OPTIMAL_ABLS)
    a = tomo.simulate(rho, WITNESS_SETTINGS, 1000, seed=5)
    b = tomo.simulate(rho, WITNESS_SETTINGS, 1000, seed=5)
    c = tomo.simulate(rho, WITNESS_SETTINGS, 1000, seed=6)
    assert a == b
    assert a != c
    assert [d.seed for d in a] == [5, 6, 7, 8]


def test_shot_data_validation():
    s = MeasSetting(("z", "z", "z"))
    with pytest.raises(ValueError):
        tomo.ShotData(s, 10, (1,) * 8, 0)
    with pytest.raises(ValueError):
        tomo.ShotData(s, 3, (4, -1, 0, 0, 0, 0, 0, 0), 0)


def test_jsonl_round_trip():
    data = tomo.simulate(np.eye(8) / 8, tomography_settings()[:4], 100, seed=0)
    assert tomo.load_shots(tomo.dump_shots(data)) == data


def test_witness_from_exact_frequencies():
    p = states.OPTIMAL_ABLS
    eps = 0.1069
    rho = states.abls_direct(p)
    assert tomo.witness_from_counts(tomo.exact_data(rho, WITNESS_SETTINGS), p, eps) == pytest.approx(-eps, abs=1e-12)
    mixed = tomo.exact_data(np.eye(8) / 8, WITNESS_SETTINGS)
    assert tomo.witness_from_counts(mixed, p, eps) == pytest.approx(0.5 - eps, abs=1e-12)


def test_witness_from_counts_missing():
    with pytest.raises(MissingSetting):
        tomo.witness_from_counts(tomo.exact_data(np.eye(8) / 8, WITNESS_SETTINGS[:3]), states.OPTIMAL_ABLS, 0.1)


def test_project_psd(rng):
    rho = random_density(rng) - 0.05 * np.eye(8)
    out = tomo.project_psd(rho / np.trace(rho).real)
    w = np.linalg.eigvalsh(out)
    assert w.min() >= -1e-14
    assert math.isclose(np.trace(out).real, 1.0)


def test_bootstrap_interval_brackets_point():
    rho = states.abls_direct(states.OPTIMAL_ABLS)
    data = tomo.simulate_tomography(rho, 20000, seed=1)
    lo, hi = tomo.bootstrap_pt_min(data, 0, n_resamples=40, seed=0)
    assert lo < hi
    assert lo < 0.02 and hi > -0.02
    assert (lo, hi) == tomo.bootstrap_pt_min(data, 0, n_resamples=40, seed=0)


def test_finite_shot_witness_detects():
    p = states.OPTIMAL_ABLS
    eps = witness.epsilon_min(p, n_probes=20_000).epsilon
    rho = states.abls_direct(p)
    vals = [tomo.witness_from_counts(tomo.simulate_witness(rho, 100_000, seed), p, eps) for seed in range(5)]
    assert all(v < 0 for v in vals)
