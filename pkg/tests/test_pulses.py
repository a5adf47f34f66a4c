"""Tests for pulse shapes, the spectral grid and the discrete transform pair."""
import logging

import numpy as np
import pytest

from photon_tunneling.physics.pulses import (
    PulseShape,
    PulseSpec,
    SampledPulse,
    SpectralGrid,
    l2_norm,
    normalize,
    pulse_spectrum,
    pulse_time,
    samples_to_spectrum,
    time_norm,
    time_samples,
)

from conftest import CARRIER

logger = logging.getLogger("test_pulses")

GAUSSIAN = PulseSpec(PulseShape.GAUSSIAN)
TIME_LIMITED = PulseSpec(PulseShape.TIME_LIMITED)


@pytest.fixture
def grid() -> SpectralGrid:
    return SpectralGrid.around(CARRIER)


class TestPulseTime:
    def test_gaussian_peak(self):
        assert pulse_time(GAUSSIAN, 0.0) == pytest.approx(1.0)

    def test_time_limited_edges(self):
        assert pulse_time(TIME_LIMITED, 2 * TIME_LIMITED.t0) == 0.0
        assert pulse_time(TIME_LIMITED, -3 * TIME_LIMITED.t0) == 0.0

    def test_time_limited_center(self):
        assert abs(pulse_time(TIME_LIMITED, 0.0)) == pytest.approx(0.36788, abs=1e-5)

    def test_carrier_phase(self):
        t = 1e-15
        value = pulse_time(GAUSSIAN, t)
        assert np.angle(value) == pytest.approx(np.angle(np.exp(-1j * CARRIER * t)))

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            PulseSpec(t0=0.0)
        with pytest.raises(ValueError):
            PulseSpec(carrier=-1.0)


class TestSpectralGrid:
    def test_default_span(self, grid):
        assert grid.omega_min == pytest.approx(0.2 * CARRIER)
        assert grid.omega_max == pytest.approx(1.8 * CARRIER)
        assert grid.count == 4096

    @pytest.mark.parametrize("count", [128, 1000])
    def test_rejects_bad_sizes(self, count):
        with pytest.raises(ValueError):
            SpectralGrid(1e15, 2e15, count)

    def test_rejects_nonpositive_start(self):
        with pytest.raises(ValueError):
            SpectralGrid(0.0, 2e15, 1024)

    def test_conjugate_time_axis(self, grid):
        assert grid.time_step * grid.spacing * grid.count == pytest.approx(2 * np.pi)
        assert grid.times[grid.count // 2] == 0.0


class TestPulseSpectrum:
    def test_gaussian_matches_analytic_transform(self, grid):
        pulse = pulse_spectrum(GAUSSIAN, grid)
        analytic = np.exp(-((grid.omegas - CARRIER) * GAUSSIAN.t0) ** 2 / 4)
        analytic = analytic / np.sqrt(grid.spacing * np.sum(analytic ** 2))
        error = np.max(np.abs(pulse.amplitudes - analytic)) / np.max(analytic)
        logger.info(f"Gaussian spectrum deviation {error:.2e}")
        assert error < 1e-8

    def test_gaussian_half_width(self, grid):
        magnitude = np.abs(pulse_spectrum(GAUSSIAN, grid).amplitudes)
        edge = np.argmin(np.abs(grid.omegas - (CARRIER + GAUSSIAN.bandwidth)))
        center = np.argmin(np.abs(grid.omegas - CARRIER))
        offsets = (grid.omegas[[edge, center]] - CARRIER) * GAUSSIAN.t0 / 2
        expected = np.exp(-offsets[0] ** 2 + offsets[1] ** 2)
        assert magnitude[edge] / magnitude[center] == pytest.approx(expected, rel=1e-8)
        assert expected == pytest.approx(np.exp(-1), rel=2e-2)

    def test_time_limited_is_symmetric(self, grid):
        magnitude = np.abs(pulse_spectrum(TIME_LIMITED, grid).amplitudes)
        assert np.max(np.abs(magnitude - magnitude[::-1])) < 1e-10 * np.max(magnitude)

    def test_time_limited_wings_decay_slower(self, grid):
        index = np.argmin(np.abs(grid.omegas - (CARRIER + 10 * GAUSSIAN.bandwidth)))
        wing = {}
        for spec in (GAUSSIAN, TIME_LIMITED):
            magnitude = np.abs(pulse_spectrum(spec, grid).amplitudes)
            wing[spec.shape] = magnitude[index] / np.max(magnitude)
        assert wing[PulseShape.TIME_LIMITED] > wing[PulseShape.GAUSSIAN]

    def test_normalized(self, grid):
        for spec in (GAUSSIAN, TIME_LIMITED):
            pulse = pulse_spectrum(spec, grid)
            assert pulse.normalized
            assert l2_norm(pulse) == pytest.approx(1.0, abs=1e-12)

    def test_too_narrow_grid(self):
        with pytest.raises(ValueError):
            pulse_spectrum(GAUSSIAN, SpectralGrid(0.9 * CARRIER, 1.1 * CARRIER, 4096))


class TestTransformPair:
    @pytest.mark.parametrize("spec", [GAUSSIAN, TIME_LIMITED])
    def test_parseval(self, grid, spec):
        pulse = pulse_spectrum(spec, grid)
        times, samples = time_samples(pulse)
        assert time_norm(times, samples) == pytest.approx(l2_norm(pulse), abs=1e-10)

    def test_round_trip(self, grid):
        pulse = pulse_spectrum(TIME_LIMITED, grid)
        _, samples = time_samples(pulse)
        back = samples_to_spectrum(samples, grid)
        assert np.max(np.abs(back.amplitudes - pulse.amplitudes)) < 1e-10 * np.max(np.abs(pulse.amplitudes))

    def test_time_samples_reproduce_the_pulse(self, grid):
        pulse = pulse_spectrum(GAUSSIAN, grid)
        times, samples = time_samples(pulse)
        expected = pulse_time(GAUSSIAN, times)
        ratio = samples[grid.count // 2] / expected[grid.count // 2]
        np.testing.assert_allclose(samples, ratio * expected, atol=1e-8 * abs(samples).max())

    def test_carrier_shift(self, grid):
        shift_cells = 50
        shift = shift_cells * grid.spacing
        base = samples_to_spectrum(pulse_time(GAUSSIAN, grid.times), grid)
        shifted = samples_to_spectrum(pulse_time(GAUSSIAN, grid.times) * np.exp(-1j * shift * grid.times), grid)
        moved = np.argmax(np.abs(shifted.amplitudes)) - np.argmax(np.abs(base.amplitudes))
        assert abs(moved - shift_cells) <= 1


class TestNormalize:
    def test_idempotent(self, grid):
        pulse = pulse_spectrum(GAUSSIAN, grid)
        again = normalize(pulse)
        np.testing.assert_allclose(again.amplitudes, pulse.amplitudes, atol=1e-15 * np.max(np.abs(pulse.amplitudes)))

    def test_scale_invariant(self, grid):
        pulse = pulse_spectrum(GAUSSIAN, grid)
        scaled = normalize(SampledPulse(grid, 7 * pulse.amplitudes))
        np.testing.assert_allclose(scaled.amplitudes, pulse.amplitudes, rtol=1e-12)

    def test_zero_rejected(self, grid):
        with pytest.raises(ValueError):
            normalize(SampledPulse(grid, np.zeros(grid.count)))

    def test_shape_checked(self, grid):
        with pytest.raises(ValueError):
            SampledPulse(grid, np.ones(10))
