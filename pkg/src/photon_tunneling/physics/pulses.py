"""
Single-photon pulse shapes and the spectral grid they are sampled on.

Transform convention: f(t) = (2π)^{-1/2} ∫ dω e^{-iωt} f(ω), so a pulse
f(t) ∝ e^{-i·carrier·t} has its spectrum centered at +carrier.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

logger = logging.getLogger('photon_tunneling.pulses')

OMEGA0 = 5.37e15
DEFAULT_T0 = 20e-15
MIN_GRID_POINTS = 256
LEAKAGE_LIMIT = 1e-6
# outer 1/64 of the grid on each side counts as the boundary band
EDGE_FRACTION = 64


class PulseShape(str, enum.Enum):
    GAUSSIAN = "gaussian"
    TIME_LIMITED = "time_limited"


@dataclass(frozen=True)
class PulseSpec:
    """Pulse shape, duration parameter t0 (s) and carrier frequency (rad/s)."""

    shape: PulseShape = PulseShape.GAUSSIAN
    t0: float = DEFAULT_T0
    carrier: float = OMEGA0 / 2.0

    def __post_init__(self):
        object.__setattr__(self, "shape", PulseShape(self.shape))
        if self.t0 <= 0:
            raise ValueError(f"Pulse duration t0 must be positive, got {self.t0}")
        if self.carrier <= 0:
            raise ValueError(f"Carrier frequency must be positive, got {self.carrier}")

    @property
    def bandwidth(self) -> float:
        """1/e half-width 2/t0 of the Gaussian spectral amplitude."""
        return 2.0 / self.t0


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform grid of positive angular frequencies with a power-of-two size."""

    omega_min: float
    omega_max: float
    count: int = 4096

    def __post_init__(self):
        if not 0 < self.omega_min < self.omega_max:
            raise ValueError(f"Spectral grid needs 0 < omega_min < omega_max, got [{self.omega_min}, {self.omega_max}]")
        if self.count < MIN_GRID_POINTS or self.count & (self.count - 1):
            raise ValueError(f"Spectral grid size must be a power of two >= {MIN_GRID_POINTS}, got {self.count}")

    @classmethod
    def around(cls, carrier: float, count: int = 4096, lower: float = 0.2, upper: float = 1.8) -> "SpectralGrid":
        """Default grid spanning [lower, upper]·carrier."""
        return cls(lower * carrier, upper * carrier, count)

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.count - 1)

    @property
    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.count)

    @property
    def time_step(self) -> float:
        return 2.0 * np.pi / (self.count * self.spacing)

    @property
    def times(self) -> np.ndarray:
        """Centered time samples conjugate to the frequency grid."""
        return (np.arange(self.count) - self.count // 2) * self.time_step


@dataclass(frozen=True, eq=False)
class SampledPulse:
    """Complex spectral amplitude f(ω) on a spectral grid."""

    grid: SpectralGrid
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.grid.count,):
            raise ValueError(f"Expected {self.grid.count} amplitudes, got shape {amplitudes.shape}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def omegas(self) -> np.ndarray:
        return self.grid.omegas


def pulse_time(spec: PulseSpec, t) -> np.ndarray:
    """Evaluate the pulse in the time domain with unit peak envelope.

    Args:
        spec: Pulse specification
        t: Time in seconds (scalar or array)

    Returns:
        Complex amplitude; the time-limited shape is exactly 0 for |t| ≥ 2 t0
    """
    t = np.asarray(t, dtype=float)
    carrier = np.exp(-1j * spec.carrier * t)
    if spec.shape is PulseShape.GAUSSIAN:
        envelope = np.exp(-(t / spec.t0) ** 2)
    else:
        x = t / (2.0 * spec.t0)
        inside = np.abs(x) < 1.0
        with np.errstate(divide="ignore", over="ignore"):
            exponent = np.where(inside, -1.0 / (1.0 - np.where(inside, x, 0.0) ** 2), -np.inf)
        envelope = np.where(inside, np.exp(exponent), 0.0)
    return (envelope * carrier)[()]


def l2_norm(pulse: SampledPulse) -> float:
    """Discrete L² norm (Δω Σ|f|²)^{1/2}."""
    return float(np.sqrt(pulse.grid.spacing * np.sum(np.abs(pulse.amplitudes) ** 2)))


def time_norm(times: np.ndarray, samples: np.ndarray) -> float:
    """Discrete L² norm (Δt Σ|f(t)|²)^{1/2} of uniform time samples."""
    step = times[1] - times[0]
    return float(np.sqrt(step * np.sum(np.abs(samples) ** 2)))


def normalize(pulse: SampledPulse) -> SampledPulse:
    """Scale a pulse to unit discrete L² norm.

    Raises:
        ValueError: If all amplitudes are zero
    """
    norm = l2_norm(pulse)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("Cannot normalize an all-zero pulse")
    if pulse.normalized and norm == 1.0:
        return pulse
    return SampledPulse(pulse.grid, pulse.amplitudes / norm, normalized=True)


def samples_to_spectrum(samples: np.ndarray, grid: SpectralGrid) -> SampledPulse:
    """Transform time samples on grid.times to f(ω) on the grid frequencies.

    f(ω_j) = (2π)^{-1/2} Δt Σ_m e^{iω_j t_m} f(t_m), evaluated with one FFT.
    """
    samples = np.asarray(samples, dtype=complex)
    times = grid.times
    shifted = samples * np.exp(1j * grid.omega_min * times)
    sign = (-1.0) ** (np.arange(grid.count) % 2)
    spectrum = grid.time_step / np.sqrt(2.0 * np.pi) * sign * grid.count * np.fft.ifft(shifted)
    return SampledPulse(grid, spectrum)


def time_samples(pulse: SampledPulse) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse transform f(ω) back to the centered time grid.

    Returns:
        (times, f(t)) with f(t_m) = (2π)^{-1/2} Δω Σ_j e^{-iω_j t_m} f(ω_j)
    """
    grid = pulse.grid
    times = grid.times
    sign = (-1.0) ** (np.arange(grid.count) % 2)
    samples = grid.spacing / np.sqrt(2.0 * np.pi) * np.exp(-1j * grid.omega_min * times) * np.fft.fft(sign * pulse.amplitudes)
    return times, samples


def edge_leakage(pulse: SampledPulse) -> float:
    """Fraction of the squared L² norm carried by the outer grid cells."""
    power = np.abs(pulse.amplitudes) ** 2
    band = max(1, pulse.grid.count // EDGE_FRACTION)
    total = np.sum(power)
    if total == 0.0:
        return 0.0
    return float((np.sum(power[:band]) + np.sum(power[-band:])) / total)


def pulse_spectrum(spec: PulseSpec, grid: SpectralGrid) -> SampledPulse:
    """Sample a pulse spectrum f(ω) on a grid, normalized to unit L² norm.

    Args:
        spec: Pulse specification
        grid: Spectral grid; must cover carrier ± 20/t0

    Returns:
        Normalized sampled pulse

    Raises:
        ValueError: If the grid is too narrow or more than 1e-6 of the
            squared norm sits in the boundary bands
    """
    reach = 20.0 / spec.t0
    if grid.omega_min > spec.carrier - reach or grid.omega_max < spec.carrier + reach:
        raise ValueError(
            f"Spectral grid [{grid.omega_min:.3e}, {grid.omega_max:.3e}] does not cover carrier ± 20/t0"
        )
    pulse = samples_to_spectrum(pulse_time(spec, grid.times), grid)
    edge = edge_leakage(pulse)
    if edge > LEAKAGE_LIMIT:
        raise ValueError(f"Spectral leakage {edge:.2e} at grid edges exceeds {LEAKAGE_LIMIT:.0e}")
    logger.debug(f"Sampled {spec.shape.value} pulse on {grid.count} points, edge leakage {edge:.2e}")
    return normalize(pulse)
