"""
Complex permittivity models, refractive-index extraction, quarter-wave
stack construction and Kramers-Kronig consistency diagnostics.

Time dependence is e^{-iωt} throughout, so a passive medium has
Im ε ≥ 0 and Im n ≥ 0.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.integrate import trapezoid

logger = logging.getLogger('photon_tunneling.materials')

GAIN_TOLERANCE = 1e-12

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ComplexIndex:
    """Complex refractive index n = beta + i gamma.

    Attributes:
        beta: Real part (phase index)
        gamma: Imaginary part (extinction)
    """

    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError(f"Refractive index real part must be nonnegative, got {self.beta}")
        if self.gamma < 0:
            raise ValueError(f"Refractive index imaginary part must be nonnegative (no gain), got {self.gamma}")

    @property
    def value(self) -> complex:
        return complex(self.beta, self.gamma)

    @classmethod
    def from_complex(cls, n: complex) -> "ComplexIndex":
        return cls(float(np.real(n)), float(np.imag(n)))


@dataclass(frozen=True)
class ConstantIndex:
    """Frequency-independent complex refractive index."""

    n: ComplexIndex

    def __post_init__(self):
        if self.n.beta <= 0:
            raise ValueError(f"Constant index needs a positive real part, got {self.n.beta}")

    @property
    def characteristic_frequency(self) -> Optional[float]:
        return None

    @property
    def high_frequency_permittivity(self) -> float:
        return float(np.real(self.n.value ** 2))

    @property
    def is_lossless(self) -> bool:
        return self.n.gamma == 0.0

    def permittivity(self, omega: ArrayLike) -> ArrayLike:
        omega = np.asarray(omega, dtype=float)
        return np.full(omega.shape, self.n.value ** 2, dtype=complex)[()]

    def without_losses(self) -> "ConstantIndex":
        return ConstantIndex(ComplexIndex(self.n.beta, 0.0))


@dataclass(frozen=True)
class LorentzOscillator:
    """Single Lorentz oscillator ε(ω) = 1 + ω_p² / (ω_T² − ω² − i·damping·ω).

    Attributes:
        omega_t: Resonance frequency (rad/s)
        omega_p: Coupling strength (rad/s)
        damping: Damping rate (rad/s)
    """

    omega_t: float
    omega_p: float
    damping: float

    def __post_init__(self):
        for name in ("omega_t", "omega_p", "damping"):
            if getattr(self, name) <= 0:
                raise ValueError(f"Lorentz oscillator parameter {name} must be positive, got {getattr(self, name)}")

    @property
    def characteristic_frequency(self) -> Optional[float]:
        return self.omega_t

    @property
    def high_frequency_permittivity(self) -> float:
        return 1.0

    @property
    def is_lossless(self) -> bool:
        return False

    def permittivity(self, omega: ArrayLike) -> ArrayLike:
        omega = np.asarray(omega, dtype=float)
        eps = 1.0 + self.omega_p ** 2 / (self.omega_t ** 2 - omega ** 2 - 1j * self.damping * omega)
        return eps[()]

    def without_losses(self) -> "LorentzOscillator":
        raise ValueError("A Lorentz oscillator cannot be made lossless without changing its dispersion")


MaterialModel = Union[ConstantIndex, LorentzOscillator]

VACUUM = ConstantIndex(ComplexIndex(1.0, 0.0))


@dataclass(frozen=True)
class Layer:
    """One homogeneous layer of a stack."""

    material: MaterialModel
    thickness: float

    def __post_init__(self):
        if not self.thickness >= 0:
            raise ValueError(f"Layer thickness must be nonnegative, got {self.thickness}")


@dataclass(frozen=True)
class LayerStack:
    """Ordered finite layers between two semi-infinite lossless ambients.

    The stack occupies 0 ≤ x ≤ thickness; layer j spans
    boundaries[j] ≤ x ≤ boundaries[j + 1].
    """

    layers: Tuple[Layer, ...] = ()
    ambient_left: MaterialModel = field(default=VACUUM)
    ambient_right: MaterialModel = field(default=VACUUM)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for side in (self.ambient_left, self.ambient_right):
            if not isinstance(side, ConstantIndex) or not side.is_lossless:
                raise ValueError(f"Ambient media must be lossless constant indices, got {side}")

    @property
    def layer_count(self) -> int:
        """Number of finite layers (N = 2k + 1 for an H(LH)^k stack)."""
        return len(self.layers)

    @property
    def thickness(self) -> float:
        """Total geometric thickness l."""
        return float(sum(layer.thickness for layer in self.layers))

    @property
    def boundaries(self) -> np.ndarray:
        """Interface positions x_j, starting at the entrance plane x = 0."""
        return np.concatenate([[0.0], np.cumsum([layer.thickness for layer in self.layers])])

    @property
    def is_lossless(self) -> bool:
        return all(getattr(layer.material, "is_lossless", False) for layer in self.layers)

    def __add__(self, other: "LayerStack") -> "LayerStack":
        return LayerStack(self.layers + other.layers, self.ambient_left, other.ambient_right)

    def without_losses(self) -> "LayerStack":
        return replace(self, layers=tuple(Layer(layer.material.without_losses(), layer.thickness)
                                          for layer in self.layers))


def _check_frequency(omega: ArrayLike) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise ValueError("Frequency must be positive")
    return omega


def permittivity_at(model: MaterialModel, omega: ArrayLike) -> ArrayLike:
    """Evaluate the complex permittivity ε(ω) of a material.

    Args:
        model: Material model
        omega: Angular frequency in rad/s (scalar or array)

    Returns:
        Complex permittivity with the shape of omega

    Raises:
        ValueError: If any frequency is not positive
    """
    _check_frequency(omega)
    return model.permittivity(omega)


def principal_index(epsilon: ArrayLike) -> np.ndarray:
    """Principal square root of ε with Re n ≥ 0 and Im n ≥ 0, elementwise.

    Raises:
        ValueError: If Im ε < 0 beyond tolerance (gain medium)
    """
    epsilon = np.asarray(epsilon, dtype=complex)
    if np.any(epsilon.imag < -GAIN_TOLERANCE):
        raise ValueError(f"Gain medium rejected: Im ε = {float(np.min(epsilon.imag))}")
    # -1 - 0j would otherwise land on the lower branch
    clamped = epsilon.real + 1j * np.maximum(epsilon.imag, 0.0)
    return np.sqrt(clamped)


def refractive_index(epsilon: complex) -> ComplexIndex:
    """Extract the refractive index n = √ε on the passive branch.

    Args:
        epsilon: Complex permittivity

    Returns:
        Complex index with beta ≥ 0 and gamma ≥ 0
    """
    return ComplexIndex.from_complex(complex(principal_index(epsilon)))


def index_at(model: MaterialModel, omega: ArrayLike) -> np.ndarray:
    """Complex refractive index of a material on a frequency grid."""
    if isinstance(model, ConstantIndex):
        return np.full(np.shape(_check_frequency(omega)), model.n.value, dtype=complex)
    return principal_index(permittivity_at(model, omega))


def quarter_wave_thickness(material: MaterialModel, design_omega: float) -> float:
    """Thickness whose optical path is a quarter wave at design_omega.

    Only the real index part enters, so lossy and lossless variants of a
    material share the same geometry.
    """
    beta = float(np.real(index_at(material, design_omega)))
    return float(np.pi * SPEED_OF_LIGHT / (2.0 * design_omega * beta))


def build_quarter_wave_stack(
    k: int,
    high: MaterialModel,
    low: MaterialModel,
    design_omega: float,
    ambient: MaterialModel = VACUUM,
) -> LayerStack:
    """Build an H(LH)^k stack of quarter-wave layers.

    Args:
        k: Number of (L, H) pairs after the first H layer
        high: High-index material H
        low: Low-index material L
        design_omega: Frequency at which every layer is a quarter wave (rad/s)
        ambient: Medium on both sides of the stack

    Returns:
        Stack with k + 1 H layers and k L layers

    Raises:
        ValueError: If k < 1 or design_omega is not positive
    """
    if k < 1:
        raise ValueError(f"Quarter-wave stack needs k >= 1, got {k}")
    _check_frequency(design_omega)
    h_layer = Layer(high, quarter_wave_thickness(high, design_omega))
    l_layer = Layer(low, quarter_wave_thickness(low, design_omega))
    layers = [h_layer]
    for _ in range(k):
        layers.extend([l_layer, h_layer])
    logger.debug(f"Built H(LH)^{k} stack: d_H={h_layer.thickness:.4e} m, d_L={l_layer.thickness:.4e} m")
    return LayerStack(tuple(layers), ambient, ambient)


def _check_kk_grid(grid: np.ndarray, center: Optional[float]) -> Tuple[np.ndarray, float]:
    grid = _check_frequency(grid)
    if grid.ndim != 1 or grid.size < 16:
        raise ValueError("Kramers-Kronig grid must be one-dimensional with at least 16 points")
    steps = np.diff(grid)
    spacing = (grid[-1] - grid[0]) / (grid.size - 1)
    if np.any(steps <= 0) or np.max(np.abs(steps - spacing)) > 1e-6 * spacing:
        raise ValueError("Kramers-Kronig grid must be uniform and increasing")
    if center is not None and (grid[0] > 0.1 * center * (1 + 1e-9) or grid[-1] < 10.0 * center * (1 - 1e-9)):
        raise ValueError(
            f"Kramers-Kronig grid [{grid[0]:.3e}, {grid[-1]:.3e}] too narrow around {center:.3e} rad/s"
        )
    return grid, spacing


def kk_window(grid: np.ndarray) -> np.ndarray:
    """Indices of the interior band [2 ω_min, ω_max / 2] where KK is compared."""
    grid = np.asarray(grid, dtype=float)
    inner = np.nonzero((grid >= 2.0 * grid[0]) & (grid <= grid[-1] / 2.0))[0]
    return inner[(inner > 0) & (inner < grid.size - 1)]


def _tail_terms(omega: float, low: float, high: float, eps_low: float, eps_high: float) -> float:
    """Contributions of the extrapolated tails ε_i ∝ ω below and ∝ ω⁻³ above the grid."""
    slope = eps_low / low
    below = slope * (low + 0.5 * omega * np.log((omega - low) / (omega + low)))
    strength = eps_high * high ** 3
    above = strength / omega ** 2 * (np.log((high + omega) / (high - omega)) / (2.0 * omega) - 1.0 / high)
    return below + above


def kramers_kronig_real(model: MaterialModel, grid: np.ndarray, center: Optional[float] = None) -> np.ndarray:
    """Reconstruct ε_r(ω) − ε_∞ from ε_i by a principal-value quadrature.

    Uses ε_r(ω) − ε_∞ = (2/π) P∫ ω' ε_i(ω') / (ω'² − ω²) dω'. The singular
    grid cell is handled by subtracting the pole residue (a logarithm) and
    replacing the integrand at the singular node by its central-difference
    limit; trapezoid weights elsewhere.

    Args:
        model: Material model
        grid: Uniform increasing frequency grid (rad/s)
        center: Characteristic frequency the grid must bracket by a decade
            on each side (defaults to the model's own, if any)

    Returns:
        Reconstructed values at the interior points given by kk_window(grid)
    """
    if center is None:
        center = model.characteristic_frequency
    grid, spacing = _check_kk_grid(grid, center)
    eps_i = np.imag(permittivity_at(model, grid))
    low, high = grid[0], grid[-1]
    window = kk_window(grid)
    result = np.empty(window.size)
    for out, k in enumerate(window):
        omega = grid[k]
        g = grid * eps_i / (grid + omega)
        g0 = g[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = (g - g0) / (grid - omega)
        integrand[k] = (g[k + 1] - g[k - 1]) / (2.0 * spacing)
        principal = trapezoid(integrand, dx=spacing) + g0 * np.log((high - omega) / (omega - low))
        tails = _tail_terms(omega, low, high, eps_i[0], eps_i[-1])
        result[out] = 2.0 / np.pi * (principal + tails)
    return result


def kk_residual(model: MaterialModel, grid: np.ndarray, center: Optional[float] = None) -> float:
    """Relative L² mismatch between the direct and KK-reconstructed ε_r.

    Args:
        model: Material model
        grid: Uniform increasing frequency grid (rad/s)
        center: Optional characteristic frequency for the coverage check

    Returns:
        ‖kk − direct‖ / max(‖kk‖, ‖direct‖), or 0 when both vanish
    """
    reconstructed = kramers_kronig_real(model, grid, center)
    window = kk_window(np.asarray(grid, dtype=float))
    direct = np.real(permittivity_at(model, np.asarray(grid, dtype=float)[window])) - model.high_frequency_permittivity
    scale = max(np.linalg.norm(reconstructed), np.linalg.norm(direct))
    if scale == 0.0:
        return 0.0
    residual = float(np.linalg.norm(reconstructed - direct) / scale)
    logger.debug(f"KK residual {residual:.3e} on {np.size(grid)} points")
    return residual
