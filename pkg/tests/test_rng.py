import numpy as np
import pytest

from boundent.rng import MASK64, GOLDEN, SplitMix64, mix64


def test_reference_vector():
    # first outputs of the standard SplitMix64 with seed 1234567
    g = SplitMix64(1234567)
    out = [int(x) for x in g.next_uint64(3)]
    assert out[0] == 0x599ED017FB08FC85
    assert out == [mix64(1234567 + (i + 1) * GOLDEN) for i in range(3)]


def test_stream_continues_across_calls():
    a = SplitMix64(42)
    joined = np.concatenate([a.next_uint64(5), a.next_uint64(7)])
    assert np.array_equal(joined, SplitMix64(42).next_uint64(12))


def test_uniform_range_and_resolution():
    u = SplitMix64(7).uniform(10000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.01
    assert np.all(u * 2.0**53 == np.floor(u * 2.0**53))


def test_negative_seed_wraps():
    assert np.array_equal(SplitMix64(-1).next_uint64(2), SplitMix64(MASK64).next_uint64(2))


@pytest.mark.parametrize("seed", [0, 1, 99])
def test_multinomial(seed):
    probs = np.array([0.5, 0.0, 0.25, 0.25])
    counts = SplitMix64(seed).multinomial(20000, probs)
    assert counts.sum() == 20000
    assert counts[1] == 0
    assert np.max(np.abs(counts / 20000 - probs)) < 0.02
    assert np.array_equal(counts, SplitMix64(seed).multinomial(20000, probs))
