"""Shared fixtures for the photon tunneling tests."""
import logging

import numpy as np
import pytest

from photon_tunneling.physics.materials import (
    ComplexIndex,
    ConstantIndex,
    LorentzOscillator,
    build_quarter_wave_stack,
)
from photon_tunneling.physics.pulses import OMEGA0

logging.basicConfig(
    level=logging.DEBUG,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

CARRIER = OMEGA0 / 2
TIO2 = ConstantIndex(ComplexIndex(2.22))
SIO2 = ConstantIndex(ComplexIndex(1.41))
SIO2_LOSSY = ConstantIndex(ComplexIndex(1.41, 0.0372))


@pytest.fixture
def carrier() -> float:
    return CARRIER


@pytest.fixture
def quarter_wave():
    """Factory for H(LH)^k stacks designed at the carrier."""
    def build(k: int, lossy: bool = False):
        return build_quarter_wave_stack(k, TIO2, SIO2_LOSSY if lossy else SIO2, CARRIER)
    return build


@pytest.fixture
def lorentz() -> LorentzOscillator:
    omega_t = CARRIER
    return LorentzOscillator(omega_t, 0.5 * omega_t, 0.05 * omega_t)


@pytest.fixture
def band_grid() -> np.ndarray:
    """512 frequencies spanning [0.5, 1.5]·carrier."""
    return np.linspace(0.5 * CARRIER, 1.5 * CARRIER, 512)
