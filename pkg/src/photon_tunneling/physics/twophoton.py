"""
Two-photon coincidence functional F(Ω; s), the normalized coincidence
curve R(s), dip location and the transmitted single-photon profiles.

Arm II of the interferometer carries the barrier, which replaces an equal
thickness of air; the transmittance entering R(s) is therefore
T12(ω)·e^{-iωl/c}, so that a positive dip position s0 means the photon
leaves the barrier earlier than it would have left the air it displaced.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.integrate import trapezoid

from ..core.error_handler import (
    FlatScanError,
    NumericalInvariantError,
    PlateauError,
    TotalExtinctionError,
)
from .materials import LayerStack
from .pulses import (
    OMEGA0,
    PulseSpec,
    SampledPulse,
    SpectralGrid,
    l2_norm,
    normalize,
    pulse_spectrum,
    time_samples,
)
from .transfer import scattering_matrices

logger = logging.getLogger('photon_tunneling.twophoton')

IMAGINARY_TOLERANCE = 1e-8
NEGATIVITY_TOLERANCE = 1e-10
DEFAULT_PLATEAU_TOLERANCE = 1e-3
# outer-band mean of F/P this far from 1 means the scan never reached the plateau
DEFAULT_PLATEAU_REACH = 0.05
DEFAULT_MINIMUM_THRESHOLD = 0.98
MIN_SCAN_SAMPLES = 64
EXTINCTION_FLOOR = 1e-30
CHUNK_SIZE = 256


class PumpMode(str, enum.Enum):
    NARROWBAND = "narrowband"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class PumpSpec:
    """Pump center frequency and, in tabulated mode, its line shape α²(Ω).

    Tabulated weights are normalized to unit trapezoid integral on
    construction.
    """

    omega0: float = OMEGA0
    mode: PumpMode = PumpMode.NARROWBAND
    frequencies: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    max_points: int = 33

    def __post_init__(self):
        object.__setattr__(self, "mode", PumpMode(self.mode))
        if self.omega0 <= 0:
            raise ValueError(f"Pump center frequency must be positive, got {self.omega0}")
        if self.max_points < 1:
            raise ValueError(f"Pump node limit must be at least 1, got {self.max_points}")
        if self.mode is PumpMode.NARROWBAND:
            return
        if self.frequencies is None or self.weights is None:
            raise ValueError("Tabulated pump needs frequencies and weights")
        frequencies = np.asarray(self.frequencies, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if frequencies.ndim != 1 or frequencies.shape != weights.shape or frequencies.size < 2:
            raise ValueError("Tabulated pump needs matching one-dimensional frequencies and weights (at least 2)")
        if np.any(np.diff(frequencies) <= 0) or frequencies[0] <= 0:
            raise ValueError("Tabulated pump frequencies must be positive and strictly increasing")
        if np.any(weights < 0):
            raise ValueError("Tabulated pump weights α² must be nonnegative")
        area = trapezoid(weights, frequencies)
        if area <= 0:
            raise ValueError("Tabulated pump weights α² integrate to zero")
        object.__setattr__(self, "frequencies", frequencies)
        object.__setattr__(self, "weights", weights / area)

    @classmethod
    def gaussian(cls, omega0: float = OMEGA0, bandwidth: float = 1e13, points: int = 33) -> "PumpSpec":
        """Tabulated Gaussian pump α²(Ω) ∝ exp(−((Ω − ω0)/bandwidth)²) over ω0 ± 3·bandwidth."""
        if bandwidth <= 0:
            raise ValueError(f"Pump bandwidth must be positive, got {bandwidth}")
        frequencies = np.linspace(omega0 - 3.0 * bandwidth, omega0 + 3.0 * bandwidth, points)
        weights = np.exp(-(((frequencies - omega0) / bandwidth) ** 2))
        return cls(omega0, PumpMode.TABULATED, frequencies, weights, max_points=points)


@dataclass(frozen=True, eq=False)
class CoincidenceScan:
    """Normalized coincidences R(s).

    Attributes:
        s_values: Translation lengths in meters
        r_values: R(s), large-|s| plateau normalized to 1
        normalization: Plateau constant the raw functional was divided by
        imaginary_fraction: Largest residual |Im F| relative to the integrand magnitude
        plateau_mean: Mean of R over the outer 10% of the s range
    """

    s_values: np.ndarray
    r_values: np.ndarray
    normalization: float
    imaginary_fraction: float = 0.0
    plateau_mean: float = 1.0


@dataclass(frozen=True)
class DipResult:
    """Location of the coincidence dip and the derived times (seconds)."""

    s0: float
    r_min: float
    delta_tau: float
    tau_t: float
    minima: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def fringe_count(self) -> int:
        return len(self.minima)


@dataclass(frozen=True, eq=False)
class TransmittedPulse:
    """Outgoing photon: renormalized spectrum f̄(ω) and peak-normalized intensity Ī(t)."""

    spectrum: SampledPulse
    times: np.ndarray
    intensity: np.ndarray


@dataclass(frozen=True)
class _KernelTerms:
    omega_sum: float
    nu: np.ndarray
    plateau_terms: np.ndarray
    cross_terms: np.ndarray


def _snap_pump(omega: float, grid: SpectralGrid) -> int:
    lower, upper = 2.0 * grid.omega_min, 2.0 * grid.omega_max
    if not lower <= omega <= upper:
        raise ValueError(f"Pump frequency {omega:.4e} outside twice the spectral grid [{lower:.4e}, {upper:.4e}]")
    return int(round((omega - lower) / grid.spacing))


def _kernel_terms(omega: float, pulse: SampledPulse, t12: np.ndarray) -> _KernelTerms:
    """Quadrature terms of F(Ω; s) on the pairs (ω_j, Ω − ω_j) of grid nodes."""
    grid = pulse.grid
    t12 = np.asarray(t12, dtype=complex)
    if t12.shape != (grid.count,):
        raise ValueError(f"Transmittance has shape {t12.shape}, expected ({grid.count},) on the pulse grid")
    p = _snap_pump(omega, grid)
    lo, hi = max(0, p - grid.count + 1), min(grid.count - 1, p)
    j = np.arange(lo, hi + 1)
    k = p - j
    omegas = grid.omegas
    power = np.abs(pulse.amplitudes) ** 2
    weight = power[j] * power[k] * omegas[j] * omegas[k]
    quadrature = np.full(j.size, grid.spacing)
    quadrature[0] *= 0.5
    quadrature[-1] *= 0.5
    weight = weight * quadrature
    return _KernelTerms(
        omega_sum=2.0 * grid.omega_min + p * grid.spacing,
        nu=(j - 0.5 * p) * grid.spacing,
        plateau_terms=weight * np.abs(t12[k]) ** 2,
        cross_terms=weight * np.conj(t12[k]) * t12[j],
    )


def _evaluate(terms: _KernelTerms, s_values: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Return (F(s), plateau, worst imaginary fraction) for one pump frequency.

    The integrand pairs ω ↔ Ω − ω are complex conjugates, so the real part
    of the sum equals the sum of the symmetrized integrand; its imaginary
    part is the residual that must vanish.
    """
    plateau = float(np.sum(terms.plateau_terms))
    magnitude = plateau + float(np.sum(np.abs(terms.cross_terms)))
    values = np.empty(s_values.size)
    worst = 0.0
    for start in range(0, s_values.size, CHUNK_SIZE):
        chunk = s_values[start:start + CHUNK_SIZE]
        phases = np.exp(4j * np.outer(chunk, terms.nu) / SPEED_OF_LIGHT)
        cross = phases @ terms.cross_terms
        values[start:start + chunk.size] = plateau - cross.real
        if magnitude > 0:
            worst = max(worst, float(np.max(np.abs(cross.imag))) / magnitude)
    if worst > IMAGINARY_TOLERANCE:
        raise NumericalInvariantError(
            f"Coincidence integrand has imaginary fraction {worst:.2e} above {IMAGINARY_TOLERANCE:.0e}"
        )
    return values, plateau, worst


def coincidence_kernel(omega: float, s: float, pulse: SampledPulse, t12: np.ndarray) -> float:
    """Evaluate the coincidence functional F(Ω; s).

    Args:
        omega: Pump frequency Ω in rad/s, snapped to the nearest node of 2ω_min + p·Δω
        s: Translation length in meters
        pulse: Sampled single-photon spectrum
        t12: Arm transmittance on the pulse grid

    Returns:
        Real part of the symmetrized quadrature

    Raises:
        NumericalInvariantError: If the residual imaginary part exceeds 1e-8 of the integrand magnitude
    """
    terms = _kernel_terms(omega, pulse, t12)
    values, _, residual = _evaluate(terms, np.array([float(s)]))
    logger.debug(f"F(Ω={terms.omega_sum:.6e}, s={s:.3e}) = {values[0]:.6e}, imaginary fraction {residual:.1e}")
    return float(values[0])


def _pump_nodes(pump: PumpSpec, grid: SpectralGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Pump frequencies on the commensurate grid and their quadrature weights."""
    if pump.mode is PumpMode.NARROWBAND:
        return np.array([pump.omega0]), np.array([1.0])
    frequencies = pump.frequencies
    first = _snap_pump(max(frequencies[0], 2.0 * grid.omega_min), grid)
    last = _snap_pump(min(frequencies[-1], 2.0 * grid.omega_max), grid)
    stride = max(1, int(np.ceil((last - first + 1) / pump.max_points)))
    indices = np.arange(first, last + 1, stride)
    nodes = 2.0 * grid.omega_min + indices * grid.spacing
    alpha2 = np.interp(nodes, frequencies, pump.weights, left=0.0, right=0.0)
    if nodes.size == 1:
        return nodes, np.array([1.0])
    area = trapezoid(alpha2, nodes)
    if area <= 0:
        raise ValueError("Pump line shape vanishes on the spectral grid")
    quadrature = np.full(nodes.size, stride * grid.spacing)
    quadrature[0] *= 0.5
    quadrature[-1] *= 0.5
    return nodes, alpha2 * quadrature / area


def _outer_band(s_values: np.ndarray) -> np.ndarray:
    low, high = s_values.min(), s_values.max()
    margin = 0.05 * (high - low)
    return (s_values <= low + margin) | (s_values >= high - margin)


def coincidence_scan_sampled(
    pulse: SampledPulse,
    t12: np.ndarray,
    pump: PumpSpec,
    s_grid: Sequence[float],
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    plateau_reach: float = DEFAULT_PLATEAU_REACH,
) -> CoincidenceScan:
    """Normalized coincidences R(s) for an already sampled arm transmittance.

    The functional is first divided by its analytic large-|s| limit; the
    outer band of that ratio must lie within `plateau_reach` of 1. R is then
    scaled by the measured outer-band mean, so slowly decaying fringes of
    deep stacks do not offset the plateau.

    Args:
        pulse: Sampled single-photon spectrum
        t12: Arm transmittance on the pulse grid
        pump: Pump specification
        s_grid: Translation lengths in meters
        plateau_tolerance: Largest accepted deviation of the emitted outer-band mean from 1
        plateau_reach: Largest accepted deviation of the outer band from the analytic limit

    Returns:
        Plateau-normalized coincidence scan

    Raises:
        NumericalInvariantError: On negative R or a complex functional
        PlateauError: If the outer 10% of the scan is not at the plateau
    """
    s_values = np.asarray(s_grid, dtype=float)
    if s_values.ndim != 1 or s_values.size < 3 or np.any(np.diff(s_values) <= 0):
        raise ValueError("Translation grid must be one-dimensional, strictly increasing, with at least 3 points")
    nodes, alpha2 = _pump_nodes(pump, pulse.grid)
    functional = np.zeros(s_values.size)
    plateau = 0.0
    worst = 0.0
    for omega, weight in zip(nodes, alpha2):
        if weight == 0.0:
            continue
        values, node_plateau, residual = _evaluate(_kernel_terms(omega, pulse, t12), s_values)
        functional += weight * values
        plateau += weight * node_plateau
        worst = max(worst, residual)
    if plateau <= 0.0:
        raise TotalExtinctionError("Coincidence plateau vanishes: no transmitted two-photon amplitude")
    ratio = functional / plateau
    if np.min(ratio) < -NEGATIVITY_TOLERANCE:
        raise NumericalInvariantError(f"Negative coincidence rate {float(np.min(ratio)):.3e}")
    ratio = np.maximum(ratio, 0.0)
    outer = _outer_band(s_values)
    reached = float(np.mean(ratio[outer]))
    if abs(reached - 1.0) > plateau_reach:
        raise PlateauError(
            f"Coincidence plateau not reached: outer mean {reached:.4f} deviates from 1 by more than {plateau_reach}"
        )
    if abs(reached - 1.0) > plateau_tolerance:
        logger.warning(f"Outer band sits at {reached:.5f} of the analytic plateau; rescaling R to it")
    r_values = ratio / reached
    plateau_mean = float(np.mean(r_values[outer]))
    if abs(plateau_mean - 1.0) > plateau_tolerance:
        raise PlateauError(f"Outer plateau mean {plateau_mean:.6f} deviates from 1 by more than {plateau_tolerance}")
    logger.debug(f"Coincidence scan over {s_values.size} points with {nodes.size} pump nodes, min R {float(r_values.min()):.3e}")
    return CoincidenceScan(s_values, r_values, plateau * reached, worst, plateau_mean)


def arm_transmittance(stack: LayerStack, grid: np.ndarray) -> np.ndarray:
    """T12(ω)·e^{−iωl/c}: the barrier transmittance relative to the air it replaces."""
    grid = np.asarray(grid, dtype=float)
    t12 = scattering_matrices(stack, grid).T12
    return t12 * np.exp(-1j * grid * stack.thickness / SPEED_OF_LIGHT)


def coincidence_scan(
    stack: LayerStack,
    pulse: PulseSpec,
    pump: PumpSpec,
    s_grid: Sequence[float],
    grid: Optional[SpectralGrid] = None,
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    plateau_reach: float = DEFAULT_PLATEAU_REACH,
) -> CoincidenceScan:
    """Normalized coincidences R(s) behind a layer stack.

    Args:
        stack: Barrier in arm II
        pulse: Single-photon pulse specification
        pump: Pump specification
        s_grid: Translation lengths in meters; must cover ±(l + 10 c t0)/2
        grid: Spectral grid (defaults to 4096 points over [0.2, 1.8]·carrier)
        plateau_tolerance: Largest accepted deviation of the emitted outer-band mean from 1
        plateau_reach: Largest accepted deviation of the outer band from the analytic limit

    Returns:
        Plateau-normalized coincidence scan
    """
    s_values = np.asarray(s_grid, dtype=float)
    reach = 0.5 * (stack.thickness + 10.0 * SPEED_OF_LIGHT * pulse.t0)
    if s_values.size == 0 or s_values.min() > -reach or s_values.max() < reach:
        raise ValueError(f"Translation grid must cover ±{reach * 1e6:.2f} μm for this stack and pulse")
    grid = grid or SpectralGrid.around(pulse.carrier)
    sampled = pulse_spectrum(pulse, grid)
    t12 = arm_transmittance(stack, grid.omegas)
    return coincidence_scan_sampled(sampled, t12, pump, s_values, plateau_tolerance, plateau_reach)


def _parabola_vertex(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """Vertex of the parabola through three points; falls back to the middle point."""
    (x0, x1, x2), (y0, y1, y2) = x, y
    denominator = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if denominator == 0.0:
        return float(x1), float(y1)
    numerator = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    vertex = x1 - 0.5 * numerator / denominator
    if not x0 <= vertex <= x2:
        return float(x1), float(y1)
    coefficients = np.polyfit(x - x1, y, 2)
    return float(vertex), float(np.polyval(coefficients, vertex - x1))


def find_dip(
    scan: CoincidenceScan,
    stack_thickness: float,
    threshold: float = DEFAULT_MINIMUM_THRESHOLD,
) -> DipResult:
    """Locate the coincidence dip and all fringe minima.

    Args:
        scan: Plateau-normalized coincidence scan
        stack_thickness: Barrier thickness l in meters
        threshold: Only strict local minima with R below this count

    Returns:
        Dip position s0, refined minimum, Δτ = 2 s0/c, τ_t = l/c − Δτ and all minima

    Raises:
        FlatScanError: If no interior local minimum lies below the threshold
    """
    s, r = scan.s_values, scan.r_values
    if s.size < MIN_SCAN_SAMPLES:
        raise ValueError(f"Dip search needs at least {MIN_SCAN_SAMPLES} samples, got {s.size}")
    interior = np.arange(1, s.size - 1)
    strict = (r[interior] < r[interior - 1]) & (r[interior] < r[interior + 1]) & (r[interior] < threshold)
    candidates = interior[strict]
    if candidates.size == 0:
        raise FlatScanError(f"No interior minimum of R(s) below {threshold}")
    minima = [_parabola_vertex(s[i - 1:i + 2], r[i - 1:i + 2]) for i in candidates]
    s0, r_min = min(minima, key=lambda item: item[1])
    delta_tau = 2.0 * s0 / SPEED_OF_LIGHT
    tau_t = stack_thickness / SPEED_OF_LIGHT - delta_tau
    logger.debug(f"Dip at s0 = {s0 * 1e6:.4f} μm, R = {r_min:.3e}, {len(minima)} minima")
    return DipResult(s0, r_min, delta_tau, tau_t, minima)


def transmitted_profiles(
    stack: LayerStack,
    pulse: PulseSpec,
    grid: Optional[SpectralGrid] = None,
) -> TransmittedPulse:
    """Spectrum f̄ ∝ f·T12 and intensity Ī(t) of the photon behind the barrier.

    Times are referenced to propagation through the displaced air, as in
    the coincidence scan.

    Raises:
        TotalExtinctionError: If the barrier transmits nothing across the pulse band
    """
    grid = grid or SpectralGrid.around(pulse.carrier)
    incoming = pulse_spectrum(pulse, grid)
    transmitted = SampledPulse(grid, incoming.amplitudes * arm_transmittance(stack, grid.omegas))
    if l2_norm(transmitted) < EXTINCTION_FLOOR:
        raise TotalExtinctionError("Transmittance vanishes across the pulse band")
    spectrum = normalize(transmitted)
    times, samples = time_samples(spectrum)
    intensity = np.abs(samples) ** 2
    return TransmittedPulse(spectrum, times, intensity / np.max(intensity))


def incoming_profile(pulse: PulseSpec, grid: Optional[SpectralGrid] = None) -> TransmittedPulse:
    """The undisturbed photon in the same representation as `transmitted_profiles`."""
    return transmitted_profiles(LayerStack(), pulse, grid)


def spectral_overlap(first: SampledPulse, second: SampledPulse) -> float:
    """|⟨first, second⟩|² for unit-norm pulses on the same grid."""
    if first.grid != second.grid:
        raise ValueError("Pulses must share a spectral grid")
    inner = first.grid.spacing * np.sum(np.conj(first.amplitudes) * second.amplitudes)
    return float(np.abs(inner) ** 2)


def intensity_peaks(profile: TransmittedPulse, fraction: float = 0.2) -> List[Tuple[float, float]]:
    """Strict local maxima (t, Ī) of the intensity above a fraction of the peak."""
    values = profile.intensity
    interior = np.arange(1, values.size - 1)
    peaks = (values[interior] > values[interior - 1]) & (values[interior] > values[interior + 1]) & (values[interior] >= fraction)
    return [(float(profile.times[i]), float(values[i])) for i in interior[peaks]]
