import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from boundent import pptlab, states
from boundent.qmat import eig_hermitian, partial_transpose
from boundent.serialize import fmt_float
from conftest import random_density

seeds = st.integers(0, 2**32 - 1)
positive = st.floats(0.05, 20.0)


@given(seeds, st.integers(0, 2))
def test_partial_transpose_involution_keeps_trace(seed, cut):
    rho = random_density(np.random.default_rng(seed))
    pt = partial_transpose(rho, cut)
    assert np.array_equal(partial_transpose(pt, cut), rho)
    assert math.isclose(np.trace(pt).real, 1.0, abs_tol=1e-12)


@settings(max_examples=50, deadline=None)
@given(positive, positive, positive)
def test_abls_ppt_and_network(a, b, c):
    if abs(a * b - c) < 1e-3:
        return
    p = states.ABLSParams(a, b, c)
    rho = states.abls_direct(p)
    assert all(r.is_ppt for r in pptlab.pt_reports(rho))
    assert np.max(np.abs(states.abls_network(p) - rho)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from(pptlab.CUTS))
def test_spa_recovers_pt_minimum(seed, cut):
    rho = random_density(np.random.default_rng(seed), rank=2)
    rep = pptlab.spa_report(rho, cut)
    true_min = eig_hermitian(partial_transpose(rho, pptlab.cut_index(cut)), vectors=False).min
    assert abs(rep.pt_min_recovered - true_min) < 1e-10


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_float_round_trips(x):
    assert float(fmt_float(x)) == x
