"""
Characteristic matrices, transfer amplitudes and the quantum-optical
scattering matrices T̃(ω), Ã(ω) of a layer stack.

All functions broadcast over a frequency axis: a scalar omega gives 2×2
matrices, an array of F frequencies gives (F, 2, 2) stacks.
"""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from ..core.error_handler import NumericalInvariantError
from .materials import ArrayLike, ComplexIndex, LayerStack, index_at

logger = logging.getLogger('photon_tunneling.transfer')

PASSIVITY_TOLERANCE = 1e-10
# eigenvalues of I - TT† this small are roundoff of a unitary T
ROUNDOFF_FLOOR = 1e-12
DENOMINATOR_FLOOR = 1e-300


@dataclass(frozen=True)
class CharMatrix:
    """Unimodular 2×2 characteristic matrix (or a stack of them along axis 0)."""

    matrix: np.ndarray

    @property
    def m11(self) -> np.ndarray:
        return self.matrix[..., 0, 0]

    @property
    def m12(self) -> np.ndarray:
        return self.matrix[..., 0, 1]

    @property
    def m21(self) -> np.ndarray:
        return self.matrix[..., 1, 0]

    @property
    def m22(self) -> np.ndarray:
        return self.matrix[..., 1, 1]

    @property
    def determinant(self) -> np.ndarray:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "CharMatrix") -> "CharMatrix":
        return CharMatrix(np.matmul(self.matrix, other.matrix))

    @classmethod
    def identity(cls, shape: Tuple[int, ...] = ()) -> "CharMatrix":
        return cls(np.broadcast_to(np.eye(2, dtype=complex), shape + (2, 2)).copy())


@dataclass(frozen=True)
class TransferAmplitudes:
    """Field amplitudes referenced between the entrance and exit faces."""

    r_left: np.ndarray
    t_left: np.ndarray
    r_right: np.ndarray
    t_right: np.ndarray


@dataclass(frozen=True)
class ScatterMatrices:
    """Input-output matrices: outputs = T·inputs + A·noise.

    T rows: (left-going output on the left, right-going output on the right);
    T columns: (right-going input from the left, left-going input from the right).
    """

    T: np.ndarray
    A: np.ndarray
    omega: np.ndarray

    @property
    def T12(self) -> np.ndarray:
        return self.T[..., 0, 1]

    @property
    def T21(self) -> np.ndarray:
        return self.T[..., 1, 0]


def layer_char_matrix(
    index: Union[ComplexIndex, complex, np.ndarray],
    thickness: float,
    omega: ArrayLike,
) -> CharMatrix:
    """Characteristic matrix of one homogeneous layer at normal incidence.

    Args:
        index: Complex refractive index (scalar or per-frequency array)
        thickness: Layer thickness in meters
        omega: Angular frequency in rad/s

    Returns:
        [[cos δ, −(i/n) sin δ], [−i n sin δ, cos δ]] with δ = n ω d / c
    """
    if thickness < 0:
        raise ValueError(f"Layer thickness must be nonnegative, got {thickness}")
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise ValueError("Frequency must be positive")
    n = index.value if isinstance(index, ComplexIndex) else np.asarray(index, dtype=complex)
    n = np.broadcast_to(n, omega.shape) if np.ndim(n) < omega.ndim else np.asarray(n)
    delta = n * omega * thickness / SPEED_OF_LIGHT
    cos_d, sin_d = np.cos(delta), np.sin(delta)
    matrix = np.empty(np.shape(delta) + (2, 2), dtype=complex)
    matrix[..., 0, 0] = cos_d
    matrix[..., 0, 1] = -1j * sin_d / n
    matrix[..., 1, 0] = -1j * n * sin_d
    matrix[..., 1, 1] = cos_d
    return CharMatrix(matrix)


def stack_char_matrix(stack: LayerStack, omega: ArrayLike, reverse: bool = False) -> CharMatrix:
    """Product of the layer matrices in spatial order (or reversed order)."""
    omega = np.asarray(omega, dtype=float)
    product = CharMatrix.identity(omega.shape)
    layers = reversed(stack.layers) if reverse else stack.layers
    for layer in layers:
        n = index_at(layer.material, omega)
        product = product @ layer_char_matrix(n, layer.thickness, omega)
    return product


def _ambient_index(stack: LayerStack) -> Tuple[float, float]:
    return stack.ambient_left.n.beta, stack.ambient_right.n.beta


def _amplitudes(m: CharMatrix, q_in: float, q_out: float) -> Tuple[np.ndarray, np.ndarray]:
    forward = q_in * (m.m11 + m.m12 * q_out)
    backward = m.m21 + m.m22 * q_out
    denominator = forward + backward
    if np.any(np.abs(denominator) < DENOMINATOR_FLOOR):
        raise NumericalInvariantError("Vanishing transfer denominator (non-physical for a passive stack)")
    return (forward - backward) / denominator, 2.0 * q_in / denominator


def stack_transfer(stack: LayerStack, omega: ArrayLike) -> TransferAmplitudes:
    """Reflection and transmission amplitudes from both sides of a stack.

    Args:
        stack: Layer stack
        omega: Angular frequency in rad/s (scalar or array)

    Returns:
        Face-to-face amplitudes r_left, t_left (incidence from the left) and
        r_right, t_right (incidence from the right)
    """
    q_a, q_b = _ambient_index(stack)
    forward = stack_char_matrix(stack, omega)
    mirrored = stack_char_matrix(stack, omega, reverse=True)
    r_left, t_left = _amplitudes(forward, q_a, q_b)
    r_right, t_right = _amplitudes(mirrored, q_b, q_a)
    return TransferAmplitudes(r_left, t_left, r_right, t_right)


def absorption_matrix(T: np.ndarray, tol: float = PASSIVITY_TOLERANCE) -> np.ndarray:
    """Positive-semidefinite square root of I − T T†.

    Raises:
        NumericalInvariantError: If I − T T† has an eigenvalue below −tol
    """
    loss = np.eye(2) - T @ np.conj(np.swapaxes(T, -1, -2))
    loss = 0.5 * (loss + np.conj(np.swapaxes(loss, -1, -2)))
    eigenvalues, vectors = np.linalg.eigh(loss)
    if np.any(eigenvalues < -tol):
        raise NumericalInvariantError(
            f"Passivity violated: eigenvalue {float(np.min(eigenvalues)):.3e} of I - TT† below {-tol:.0e}"
        )
    eigenvalues = np.where(eigenvalues < ROUNDOFF_FLOOR, 0.0, eigenvalues)
    roots = np.sqrt(eigenvalues)
    return (vectors * roots[..., np.newaxis, :]) @ np.conj(np.swapaxes(vectors, -1, -2))


def scattering_matrices(stack: LayerStack, omega: ArrayLike) -> ScatterMatrices:
    """Assemble T̃(ω) and a compatible absorption matrix Ã(ω).

    Transmission entries are flux-normalized by the ambient indices so
    that reciprocity and the commutator identities hold for unequal
    ambients as well.

    Args:
        stack: Layer stack
        omega: Angular frequency in rad/s (scalar or array)

    Returns:
        Scatter matrices with rows of [T A] orthonormal
    """
    omega = np.asarray(omega, dtype=float)
    amplitudes = stack_transfer(stack, omega)
    q_a, q_b = _ambient_index(stack)
    T = np.empty(omega.shape + (2, 2), dtype=complex)
    T[..., 0, 0] = amplitudes.r_left
    T[..., 0, 1] = amplitudes.t_right * np.sqrt(q_a / q_b)
    T[..., 1, 0] = amplitudes.t_left * np.sqrt(q_b / q_a)
    T[..., 1, 1] = amplitudes.r_right
    A = absorption_matrix(T)
    return ScatterMatrices(T, A, omega)


def commutator_defect(scatter: ScatterMatrices) -> Tuple[float, float]:
    """Largest violations of row normalization and row orthogonality of [T A].

    Returns:
        (max |Σ|T_ik|² + |A_ik|² − 1|, max |Σ T_1k T*_2k + A_1k A*_2k|)
    """
    block = np.concatenate([scatter.T, scatter.A], axis=-1)
    gram = block @ np.conj(np.swapaxes(block, -1, -2))
    norm_error = np.max(np.abs(np.real(np.diagonal(gram, axis1=-2, axis2=-1)) - 1.0))
    overlap = np.max(np.abs(gram[..., 0, 1]))
    return float(norm_error), float(overlap)


def _check_scan_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(~(grid > 0)) or np.any(np.diff(grid) <= 0):
        raise ValueError("Frequency grid must be one-dimensional, positive and strictly increasing")
    return grid


def transmittance_scan(stack: LayerStack, grid: np.ndarray) -> np.ndarray:
    """Sample the transmittance T12(ω) on a frequency grid.

    Args:
        stack: Layer stack
        grid: Strictly increasing positive frequencies (rad/s)

    Returns:
        Complex T12 per grid point
    """
    grid = _check_scan_grid(grid)
    t12 = scattering_matrices(stack, grid).T12
    logger.debug(f"Transmittance scan over {grid.size} points, min |T12|^2 = {float(np.min(np.abs(t12) ** 2)):.3e}")
    return t12


def group_delay(stack: LayerStack, grid: np.ndarray) -> np.ndarray:
    """Phase time dφ/dω of the face-to-face T12 on a frequency grid."""
    grid = _check_scan_grid(grid)
    amplitudes = stack_transfer(stack, grid)
    phase = np.unwrap(np.angle(amplitudes.t_left))
    return np.gradient(phase, grid)
