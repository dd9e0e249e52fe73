import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzorder.array import (ArrayConfig, FrequencyGrid, analytic_covariance, build_frequency_grid,
                            check_spatial_aliasing, draw_snapshots, element_delay, received_model,
                            sample_covariance, steering_vector, synthesize_snapshots, SnapshotMatrix)
from thzorder.channel import C0, ChannelParams, builtin_table, channel_response
from thzorder.errors import ConfigurationError
from thzorder.pulse import PulseSpec, pulse_spectrum

BAND = (1e12, 10e12)


@pytest.fixture(scope="module")
def table():
    return builtin_table("summer-air")


@pytest.fixture
def setup(table):
    spec = PulseSpec(4, 6e12)
    params = ChannelParams(0.5, 6e12)
    return spec, params, table, ArrayConfig(8)


def test_grid_sizes():
    assert build_frequency_grid(BAND, 2e-12).bin_count == 19
    assert build_frequency_grid(BAND, 8e-12).bin_count == 73
    grid = build_frequency_grid(BAND, 16e-12)
    assert grid.bin_count == 145
    assert grid.bins[0] == 1e12 and grid.bins[-1] <= 10e12
    assert np.allclose(np.diff(grid.bins), 1 / 16e-12)
    with pytest.raises(ConfigurationError):
        build_frequency_grid(BAND, 0.1e-12)
    with pytest.raises(ConfigurationError):
        build_frequency_grid((2e12, 1e12), 2e-12)


@settings(max_examples=50, deadline=None)
@given(dt=st.floats(0.2e-12, 60e-12))
def test_grid_doubling(dt):
    L1 = build_frequency_grid(BAND, dt).bin_count
    L2 = build_frequency_grid(BAND, 2 * dt).bin_count
    assert L2 in (2 * L1 - 1, 2 * L1)
    assert build_frequency_grid(BAND, dt).bins[-1] <= BAND[1]


def test_element_delay():
    assert element_delay(1, 15e-6, 33.0) == 0.0
    assert element_delay(5, 15e-6, 0.0) == 0.0
    assert element_delay(2, 15e-6, 90.0) == pytest.approx(5.0035e-14, rel=1e-4)


def test_steering_vector():
    config = ArrayConfig(6)
    assert np.allclose(steering_vector(4e12, 0.0, config), np.ones(6))
    a = steering_vector(7e12, 21.0, config)
    assert a[0] == 1
    assert np.allclose(np.abs(a), 1.0)
    assert np.allclose(steering_vector(7e12, -21.0, config), a.conj())
    stacked = steering_vector(np.array([1e12, 2e12]), 10.0, config)
    assert stacked.shape == (2, 6)


def test_aliasing_guard():
    check_spatial_aliasing(ArrayConfig(8, 15e-6), 10e12)
    with pytest.raises(ConfigurationError):
        check_spatial_aliasing(ArrayConfig(8, 16e-6), 10e12)
    with pytest.raises(ConfigurationError):
        ArrayConfig(1)


def test_noiseless_snapshots_are_rank_one(setup):
    spec, params, table, config = setup
    grid = build_frequency_grid(BAND, 8e-12)
    y = synthesize_snapshots(spec, params, table, config, 15.7125, grid, num_snapshots=3, noise=False)
    assert y.data.shape == (73, 8, 3)
    expected = (channel_response(grid.bins, params, table) * pulse_spectrum(spec, grid.bins)
                * math.sqrt(grid.bin_width))[:, None] * steering_vector(grid.bins, 15.7125, config)
    for k in range(3):
        assert np.allclose(y.data[:, :, k], expected, rtol=1e-12, atol=0)
    flat = synthesize_snapshots(spec, params, table, config, 0.0, grid, noise=False)
    assert np.allclose(flat.data, flat.data[:, :1, :])


def test_synthesis_is_deterministic(setup):
    spec, params, table, config = setup
    grid = build_frequency_grid(BAND, 4e-12)
    a = synthesize_snapshots(spec, params, table, config, 15.7125, grid, seed=42)
    b = synthesize_snapshots(spec, params, table, config, 15.7125, grid, seed=42)
    c = synthesize_snapshots(spec, params, table, config, 15.7125, grid, seed=43)
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)


def test_noise_variance_monte_carlo(setup):
    spec, params, table, config = setup
    grid = build_frequency_grid(BAND, 2e-12)
    model = received_model(spec, params, table, config, 15.7125, grid)
    draws = np.stack([draw_snapshots(model, 1, seed).data[..., 0] for seed in range(10_000)])
    noise = draws - model.signal
    empirical = np.mean(np.abs(noise) ** 2, axis=(0, 2))
    assert np.allclose(empirical, model.noise_variance, rtol=0.03)
    assert abs(np.mean(noise)) < 0.02 * math.sqrt(model.noise_variance.max())


def test_sample_covariance_examples():
    grid = build_frequency_grid(BAND, 2e-12)
    rng = np.random.default_rng(3)
    y = rng.standard_normal((19, 4, 1)) + 1j * rng.standard_normal((19, 4, 1))
    r = sample_covariance(SnapshotMatrix(y, grid)).matrices
    assert np.allclose(r[5], np.outer(y[5, :, 0], y[5, :, 0].conj()))
    zero = sample_covariance(SnapshotMatrix(np.zeros((19, 4, 2), complex), grid)).matrices
    assert not zero.any()
    y = rng.standard_normal((19, 4, 7)) + 1j * rng.standard_normal((19, 4, 7))
    r = sample_covariance(SnapshotMatrix(y, grid)).matrices
    assert np.allclose(np.trace(r, axis1=1, axis2=2).real, np.sum(np.abs(y) ** 2, axis=(1, 2)) / 7)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 10), k=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_sample_covariance_is_hermitian_psd(n, k, seed):
    grid = build_frequency_grid(BAND, 2e-12)
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((19, n, k)) + 1j * rng.standard_normal((19, n, k))
    r = sample_covariance(SnapshotMatrix(y * 1e-9, grid)).matrices
    assert np.allclose(r, np.conj(np.swapaxes(r, 1, 2)), rtol=1e-10, atol=0)
    eig = np.linalg.eigvalsh(r)
    trace = np.trace(r, axis1=1, axis2=2).real
    assert np.all(eig >= -1e-10 * trace[:, None])


def test_analytic_covariance_structure(setup):
    spec, params, table, config = setup
    width = 1 / 8e-12
    r0 = analytic_covariance(spec, params, table, config, 15.7125, 5.5e12, width, noise=False)
    power = abs(pulse_spectrum(spec, 5.5e12)) ** 2 * width * abs(channel_response(5.5e12, params, table)) ** 2
    assert np.linalg.matrix_rank(r0, tol=1e-9 * power) == 1
    assert np.trace(r0).real == pytest.approx(8 * power, rel=1e-12)

    r = analytic_covariance(spec, params, table, config, 15.7125, 5.5e12, width)
    sigma2 = r[0, 0].real - power
    eig = np.linalg.eigvalsh(r)
    assert eig[-1] == pytest.approx(8 * power + sigma2, rel=1e-9)
    assert np.allclose(eig[:-1], sigma2, rtol=1e-6)

    silent = PulseSpec(4, 6e12, power=1e-30)
    r_noise = analytic_covariance(silent, params, table, config, 15.7125, 5.5e12, width)
    assert np.allclose(r_noise, r_noise[0, 0] * np.eye(8), rtol=1e-9, atol=1e-40)


def test_covariance_converges(setup):
    spec, params, table, config = setup
    grid = FrequencyGrid(8e-12, BAND, np.array([4.875e12]))
    model = received_model(spec, params, table, config, 15.7125, grid)
    snr = np.abs(model.signal[0, 0]) ** 2 / model.noise_variance[0]
    assert 1.0 < snr < 3.0
    y = draw_snapshots(model, 1000, np.random.default_rng(0))
    r_hat = sample_covariance(y).matrices[0]
    r = analytic_covariance(spec, params, table, config, 15.7125, 4.875e12, grid.bin_width)
    assert np.linalg.norm(r_hat - r) / np.linalg.norm(r) <= 0.05
