import numpy as np
import pytest

from nframes.rng import CounterRNG, fnv1a64, splitmix64


def test_reference_hashes():
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C


def test_same_key_same_stream():
    a, b = CounterRNG(7, "T3.5", 3), CounterRNG(7, "T3.5", 3)
    np.testing.assert_array_equal(a.raw(16), b.raw(16))
    assert not np.array_equal(CounterRNG(7, "T3.5", 4).raw(4), CounterRNG(7, "T3.5", 3).raw(4))
    assert not np.array_equal(CounterRNG(7, "T3.6", 3).raw(4), CounterRNG(7, "T3.5", 3).raw(4))
    assert not np.array_equal(CounterRNG(8, "T3.5", 3).raw(4), CounterRNG(7, "T3.5", 3).raw(4))


def test_uniform_from_raw():
    raw = CounterRNG(1, "x").raw(5)
    u = CounterRNG(1, "x").random(5)
    np.testing.assert_array_equal(u, (raw >> np.uint64(11)).astype(float) * 2.0**-53)
    assert isinstance(CounterRNG(1).random(), float)


def test_distribution_sanity():
    rng = CounterRNG(123, "stats")
    u = rng.random(20000)
    assert u.min() >= 0 and u.max() < 1 and abs(u.mean() - 0.5) < 0.01
    z = rng.standard_normal(20000)
    assert abs(z.mean()) < 0.03 and abs(z.std() - 1) < 0.03
    c = rng.complex_normal(20000)
    assert abs(np.mean(np.abs(c) ** 2) - 1) < 0.05
    k = rng.integers(2, 9, size=7000)
    assert k.min() == 2 and k.max() == 8
    assert set(np.bincount(k)[2:]) and np.all(np.bincount(k)[2:] > 800)
    assert rng.standard_normal((3, 4)).shape == (3, 4)
    assert 0 <= rng.integers(5) < 5


def test_integers_rejects_empty_range():
    with pytest.raises(ValueError):
        CounterRNG(0).integers(3, 3)
