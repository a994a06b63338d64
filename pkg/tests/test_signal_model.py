import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfnet.signal_model import (
    ArrayConfig,
    GainPattern,
    SourceConfig,
    antenna_gain,
    antenna_response,
    expected_power,
    sample_received,
    simulate_cycle,
    steering_phase,
    wrap_angle,
)

angles = st.floats(-20.0, 20.0, allow_nan=False)


@pytest.mark.parametrize("n, theta, expected", [(1, 0.0, 0.1), (2, np.pi / 2, 0.1), (3, 0.0, -0.1)])
def test_steering_phase(array4, n, theta, expected):
    assert steering_phase(n, theta, array4) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n", [0, 5, -1])
def test_index_out_of_range(array4, n):
    for fn in (steering_phase, antenna_gain, antenna_response):
        with pytest.raises(IndexError):
            fn(n, 0.0, array4)
    with pytest.raises(IndexError):
        expected_power(n, SourceConfig(0.0), array4)


@pytest.mark.parametrize("n, theta, expected", [(1, 0.0, 1.0), (1, np.pi, 0.1), (2, 0.0, 0.325)])
def test_antenna_gain_values(array4, n, theta, expected):
    assert antenna_gain(n, theta, array4) == pytest.approx(expected, abs=1e-15)


def test_response_phase(array4):
    cfg = ArrayConfig(4, 0.1, 0.125)
    a = antenna_response(1, 0.0, cfg)
    # 2*pi/0.125*0.1 reduced mod 2*pi, evaluated with mpmath
    assert np.mod(np.angle(a), 2 * np.pi) == pytest.approx(5.02654824574366918, abs=1e-12)
    far = antenna_response(2, 1.1, ArrayConfig(4, 0.1, 1e12))
    assert far.imag == pytest.approx(0.0, abs=1e-9)
    assert far.real > 0


@given(angles, st.integers(1, 4))
def test_response_modulus_is_gain(theta, n):
    cfg = ArrayConfig()
    a = antenna_response(n, theta, cfg)
    assert abs(a) ** 2 == pytest.approx(antenna_gain(n, theta, cfg) ** 2, rel=1e-13)


@given(angles, st.integers(2, 9), st.data())
def test_rotational_symmetry(theta, n_ant, data):
    cfg = ArrayConfig(n_antennas=n_ant)
    n = data.draw(st.integers(1, n_ant))
    shifted = theta + 2 * np.pi * (n - 1) / n_ant
    assert antenna_gain(n, shifted, cfg) == pytest.approx(antenna_gain(1, theta, cfg), abs=1e-12)


@given(angles, st.floats(0.0, 0.5), st.floats(0.51, 3.0), st.floats(1.0, 6.0))
def test_gain_within_bounds(theta, g_min, g_max, p):
    cfg = ArrayConfig(gain_pattern=GainPattern(g_min, g_max, p))
    for n in range(1, 5):
        g = antenna_gain(n, theta, cfg)
        assert g_min - 1e-12 <= g <= g_max + 1e-12


def test_expected_power_values(array4):
    assert expected_power(1, SourceConfig(0.3, 0.0, 0.02), array4) == 0.02
    assert expected_power(1, SourceConfig(0.0, 2.0, 0.0), array4) == pytest.approx(2.0)
    assert expected_power(2, SourceConfig(0.0, 1.0, 0.01), array4) == pytest.approx(0.115625, abs=1e-15)


def test_expected_power_periodic_and_argmin(array4):
    for theta in np.linspace(0, 2 * np.pi, 73, endpoint=False):
        src = SourceConfig(theta, 1.0, 0.01)
        src2 = SourceConfig(theta + 2 * np.pi, 1.0, 0.01)
        powers = [expected_power(n, src, array4) for n in range(1, 5)]
        assert powers == pytest.approx([expected_power(n, src2, array4) for n in range(1, 5)], abs=1e-12)
        # farthest boresight: largest wrapped angular distance
        dist = [abs((theta - array4.boresight(n) + np.pi) % (2 * np.pi) - np.pi) for n in range(1, 5)]
        assert powers[int(np.argmin(powers))] == pytest.approx(powers[int(np.argmax(dist))], abs=1e-12)


def test_source_wraps_azimuth():
    assert SourceConfig(-np.pi / 2).azimuth_rad == pytest.approx(1.5 * np.pi)
    assert 0.0 <= SourceConfig(-1e-18).azimuth_rad < 2 * np.pi
    assert wrap_angle(2 * np.pi) == 0.0


def test_invalid_configs():
    with pytest.raises(ValueError):
        ArrayConfig(n_antennas=1)
    with pytest.raises(ValueError):
        ArrayConfig(radius_m=0)
    with pytest.raises(ValueError):
        GainPattern(0.5, 0.4)
    with pytest.raises(ValueError):
        GainPattern(sharpness=0.5)
    with pytest.raises(ValueError):
        SourceConfig(0.0, noise_power=-1)


def test_sample_received_zero_power(array4):
    r = sample_received(1, SourceConfig(0.4, 0.0, 0.0), array4, 64, 3)
    assert np.all(r == 0)


def test_sample_received_deterministic(array4):
    src = SourceConfig(1.0, 1.0, 0.1)
    a = sample_received(2, src, array4, 100, 42)
    b = sample_received(2, src, array4, 100, 42)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_received(2, src, array4, 100, 43))
    with pytest.raises(ValueError):
        sample_received(2, src, array4, 0, 1)


def test_sample_received_mean_power(array4):
    src = SourceConfig(0.7, 1.3, 0.2)
    r = sample_received(3, src, array4, 10**6, 7)
    assert np.mean(np.abs(r) ** 2) == pytest.approx(expected_power(3, src, array4), rel=0.01)


def test_simulate_cycle_converges(array4):
    # |r|^2 of a circular Gaussian is exponential: std of the K-sample mean is P / sqrt(K)
    k = 10**5
    src = SourceConfig(2.2, 1.0, 0.05)
    p_hat = simulate_cycle(src, array4, k, 11)
    for n in range(1, 5):
        p = expected_power(n, src, array4)
        assert abs(p_hat[n - 1] - p) <= 3 * p / np.sqrt(k)


def test_simulate_cycle_positive_and_deterministic(array4):
    src = SourceConfig(0.1, 1.0, 1e-3)
    a = simulate_cycle(src, array4, 16, 5)
    assert np.all(a > 0)
    assert np.array_equal(a, simulate_cycle(src, array4, 16, 5))
    with pytest.raises(ValueError):
        simulate_cycle(src, array4, 0, 5)


def test_interference_raises_power(array4):
    src = SourceConfig(0.1, 1.0, 0.01)
    extra = np.array([0.0, 0.5, 0.0, 1.0])
    p = simulate_cycle(src, array4, 10**5, 5, extra)
    base = np.array([expected_power(n, src, array4) for n in range(1, 5)])
    np.testing.assert_allclose(p, base + extra, rtol=0.02)
    with pytest.raises(ValueError):
        simulate_cycle(src, array4, 8, 5, [0.0, -1.0, 0.0, 0.0])


@settings(max_examples=20, deadline=None, derandomize=True)
@given(st.integers(0, 2**32 - 1))
def test_monte_carlo_within_four_standard_errors(seed):
    rng = np.random.default_rng(seed)
    cfg = ArrayConfig()
    src = SourceConfig(rng.uniform(0, 2 * np.pi), rng.uniform(0.1, 5.0), rng.uniform(0.0, 1.0))
    n = int(rng.integers(1, 5))
    k = 20000
    r = sample_received(n, src, cfg, k, seed)
    p = expected_power(n, src, cfg)
    # exponential |r|^2: standard error of the mean is exactly p / sqrt(k)
    assert abs(np.mean(np.abs(r) ** 2) - p) <= 4 * p / np.sqrt(k)
