"""
Experiment configuration: schema, loading with line-level diagnostics,
canonical serialization and environment overrides.
"""
import hashlib
import json
import logging
import os
import pathlib
from typing import Annotated, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pydantic as pd
from dotenv import load_dotenv

from .core.error_handler import ConfigError
from .physics.materials import (
    ComplexIndex,
    ConstantIndex,
    Layer,
    LayerStack,
    LorentzOscillator,
    MaterialModel,
    build_quarter_wave_stack,
)
from .physics.pulses import OMEGA0, PulseShape, PulseSpec, SpectralGrid
from .physics.twophoton import PumpMode, PumpSpec

logger = logging.getLogger('photon_tunneling.config')

OUTPUT_DIR_ENV = "PHOTON_TUNNELING_OUTPUT_DIR"


class _Section(pd.BaseModel):
    model_config = pd.ConfigDict(extra="forbid", frozen=True)


class ConstantMaterial(_Section):
    """Frequency-independent complex index n_real + i n_imag."""

    kind: Literal["constant"] = "constant"
    n_real: float = pd.Field(..., gt=0, title="Real index", description="Phase index beta.")
    n_imag: float = pd.Field(0.0, ge=0, title="Extinction", description="Imaginary index gamma (no gain).")

    def to_model(self) -> ConstantIndex:
        return ConstantIndex(ComplexIndex(self.n_real, self.n_imag))


class LorentzMaterial(_Section):
    """Single Lorentz oscillator, frequencies in rad/s."""

    kind: Literal["lorentz"] = "lorentz"
    omega_t: float = pd.Field(..., gt=0, title="Resonance frequency")
    omega_p: float = pd.Field(..., gt=0, title="Coupling strength")
    damping: float = pd.Field(..., gt=0, title="Damping rate")

    def to_model(self) -> LorentzOscillator:
        return LorentzOscillator(self.omega_t, self.omega_p, self.damping)


MaterialEntry = Annotated[Union[ConstantMaterial, LorentzMaterial], pd.Field(discriminator="kind")]


def _default_materials() -> Dict[str, MaterialEntry]:
    return {
        "vacuum": ConstantMaterial(n_real=1.0),
        "TiO2": ConstantMaterial(n_real=2.22),
        "SiO2": ConstantMaterial(n_real=1.41),
        "SiO2_lossy": ConstantMaterial(n_real=1.41, n_imag=0.0372),
        "lorentz_reference": LorentzMaterial(
            omega_t=OMEGA0 / 2, omega_p=0.25 * OMEGA0, damping=0.025 * OMEGA0
        ),
    }


class LayerEntry(_Section):
    material: str
    thickness_nm: float = pd.Field(..., ge=0, description="Layer thickness in nanometers.")


class StackSection(_Section):
    k: int = pd.Field(5, ge=1, description="Number of (L, H) pairs after the first H layer; N = 2k + 1.")
    design_omega: float = pd.Field(OMEGA0 / 2, gt=0, description="Quarter-wave design frequency in rad/s.")
    high: str = "TiO2"
    low: str = "SiO2_lossy"
    ambient: str = "vacuum"
    lossless: bool = pd.Field(False, description="Strip the imaginary part of every layer index.")
    layers: Optional[List[LayerEntry]] = pd.Field(
        None, description="Explicit layer list; overrides the quarter-wave construction when given."
    )


class GridSection(_Section):
    count: int = pd.Field(4096, ge=256)
    lower: float = pd.Field(0.2, gt=0, description="Lower grid edge as a multiple of the carrier.")
    upper: float = pd.Field(1.8, gt=0, description="Upper grid edge as a multiple of the carrier.")

    @pd.model_validator(mode="after")
    def _ordered(self):
        if self.count & (self.count - 1):
            raise ValueError(f"grid.count must be a power of two, got {self.count}")
        if self.lower >= self.upper:
            raise ValueError("grid.lower must be below grid.upper")
        return self


class PulseSection(_Section):
    shape: PulseShape = PulseShape.GAUSSIAN
    t0_fs: float = pd.Field(20.0, gt=0)
    carrier: Optional[float] = pd.Field(None, gt=0, description="Carrier in rad/s; defaults to pump.omega0 / 2.")


class PumpSection(_Section):
    omega0: float = pd.Field(OMEGA0, gt=0)
    mode: PumpMode = PumpMode.NARROWBAND
    bandwidth: float = pd.Field(1e13, gt=0, description="1/e half width of α² in tabulated mode (rad/s).")
    max_points: int = pd.Field(33, ge=1)


class ScanSection(_Section):
    s_min_um: float = -50.0
    s_max_um: float = 50.0
    count: int = pd.Field(4001, ge=64)

    @pd.model_validator(mode="after")
    def _ordered(self):
        if self.s_min_um >= self.s_max_um:
            raise ValueError("scan.s_min_um must be below scan.s_max_um")
        return self


class DipSection(_Section):
    threshold: float = pd.Field(0.98, gt=0, le=1)
    plateau_tolerance: float = pd.Field(1e-3, gt=0, description="Largest deviation of the emitted outer-band mean of R from 1.")
    plateau_reach: float = pd.Field(0.05, gt=0, description="Largest deviation of the outer band from the analytic plateau.")


class SweepSection(_Section):
    layer_counts: List[int] = [11, 15, 21, 25, 31, 35, 41, 49]
    losses: List[Literal["lossless", "lossy"]] = ["lossless", "lossy"]
    pulse_shapes: List[PulseShape] = [PulseShape.GAUSSIAN, PulseShape.TIME_LIMITED]

    @pd.field_validator("layer_counts")
    @classmethod
    def _odd_counts(cls, values: List[int]) -> List[int]:
        for n in values:
            if n < 3 or n % 2 == 0:
                raise ValueError(f"layer count N must be odd and >= 3, got {n}")
        return values


class KKSection(_Section):
    materials: List[str] = ["lorentz_reference", "SiO2_lossy"]
    count: int = pd.Field(4096, ge=16)
    lower: float = pd.Field(0.1, gt=0, description="Grid start as a multiple of the material's center frequency.")
    upper: float = pd.Field(10.0, gt=0, description="Grid end as a multiple of the material's center frequency.")


class OutputSection(_Section):
    directory: str = "results"
    formats: List[Literal["csv"]] = ["csv"]


class ExperimentConfig(_Section):
    """Complete description of one simulation run."""

    materials: Dict[str, MaterialEntry] = pd.Field(default_factory=_default_materials)
    stack: StackSection = StackSection()
    grid: GridSection = GridSection()
    pulse: PulseSection = PulseSection()
    pump: PumpSection = PumpSection()
    scan: ScanSection = ScanSection()
    dip: DipSection = DipSection()
    sweep: SweepSection = SweepSection()
    kk: KKSection = KKSection()
    output: OutputSection = OutputSection()

    @pd.model_validator(mode="after")
    def _names_resolve(self):
        names = [self.stack.high, self.stack.low, self.stack.ambient, *self.kk.materials]
        names += [layer.material for layer in self.stack.layers or []]
        for name in names:
            if name not in self.materials:
                raise ValueError(f"unknown material '{name}' (defined: {', '.join(sorted(self.materials))})")
        return self

    def material(self, name: str) -> MaterialModel:
        return self.materials[name].to_model()

    @property
    def carrier(self) -> float:
        return self.pulse.carrier or self.pump.omega0 / 2

    def build_stack(self, layer_count: Optional[int] = None, lossless: Optional[bool] = None) -> LayerStack:
        """Barrier described by the stack section, optionally with another N or loss setting."""
        lossless = self.stack.lossless if lossless is None else lossless
        ambient = self.material(self.stack.ambient)
        if self.stack.layers is not None and layer_count is None:
            stack = LayerStack(
                tuple(Layer(self.material(entry.material), entry.thickness_nm * 1e-9) for entry in self.stack.layers),
                ambient,
                ambient,
            )
        else:
            k = self.stack.k if layer_count is None else (layer_count - 1) // 2
            stack = build_quarter_wave_stack(
                k,
                self.material(self.stack.high),
                self.material(self.stack.low),
                self.stack.design_omega,
                ambient,
            )
        return stack.without_losses() if lossless else stack

    def pulse_spec(self, shape: Optional[PulseShape] = None) -> PulseSpec:
        return PulseSpec(shape or self.pulse.shape, self.pulse.t0_fs * 1e-15, self.carrier)

    def pump_spec(self) -> PumpSpec:
        if self.pump.mode is PumpMode.TABULATED:
            return PumpSpec.gaussian(self.pump.omega0, self.pump.bandwidth, self.pump.max_points)
        return PumpSpec(self.pump.omega0)

    def spectral_grid(self) -> SpectralGrid:
        return SpectralGrid.around(self.carrier, self.grid.count, self.grid.lower, self.grid.upper)

    def s_grid(self) -> np.ndarray:
        """Translation lengths in meters."""
        return np.linspace(self.scan.s_min_um, self.scan.s_max_um, self.scan.count) * 1e-6


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def dump_config(config: ExperimentConfig) -> str:
    """Canonical JSON text of a configuration (sorted keys, two-space indent)."""
    return json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(dump_config(config).encode("utf-8")).hexdigest()


def _line_of(text: str, location: Sequence[Union[int, str]]) -> Optional[int]:
    """Best-effort line number of a nested key, following the key path through the text."""
    position = 0
    found = None
    for part in location:
        if not isinstance(part, str):
            continue
        index = text.find(f'"{part}"', position)
        if index < 0:
            break
        position = index
        found = text.count("\n", 0, index) + 1
    return found


def parse_config(text: str) -> ExperimentConfig:
    """Parse configuration text.

    Args:
        text: JSON document; missing sections and keys take their defaults

    Returns:
        Validated configuration

    Raises:
        ConfigError: On malformed JSON or schema violations, with the line number when known
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed config (column {e.colno}): {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", line=1)
    try:
        return ExperimentConfig.model_validate(data)
    except pd.ValidationError as e:
        error = e.errors()[0]
        location: Tuple[Union[int, str], ...] = tuple(error["loc"])
        key = ".".join(str(part) for part in location) or "<root>"
        raise ConfigError(f"{key}: {error['msg']}", line=_line_of(text, location)) from e


def load_config(path: Union[str, pathlib.Path]) -> ExperimentConfig:
    """Load a configuration file and apply environment overrides.

    Args:
        path: Path to a JSON config file

    Returns:
        Validated configuration
    """
    path = pathlib.Path(path)
    text = path.read_text()
    config = apply_environment(parse_config(text))
    logger.info(f"Loaded config from {path} (sha256 {config_hash(config)[:12]})")
    return config


def apply_environment(config: ExperimentConfig) -> ExperimentConfig:
    """Apply overrides from the environment (and a .env file, if present)."""
    load_dotenv()
    directory = os.getenv(OUTPUT_DIR_ENV)
    if directory:
        logger.debug(f"Output directory from {OUTPUT_DIR_ENV}: {directory}")
        config = config.model_copy(update={"output": config.output.model_copy(update={"directory": directory})})
    return config
