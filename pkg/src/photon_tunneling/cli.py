"""
Command-line orchestration for the photon tunneling simulations.
Loads the experiment configuration, builds the subcommand handlers and
writes their result tables.
"""
import logging
import pathlib
from typing import Dict, Optional

from .config import ExperimentConfig, default_config, dump_config, load_config
from .core.error_handler import EXIT_OK, handle_simulation_errors
from .core.storage import ResultStorage
from .handlers import (
    BaseHandler,
    CoincidenceHandler,
    DelaySweepHandler,
    KramersKronigHandler,
    ProfilesHandler,
    TransmittanceHandler,
)
from .physics.twophoton import PumpMode

logger = logging.getLogger('photon_tunneling.cli')

SUBCOMMANDS = ("transmittance", "coincidence", "delay-sweep", "profiles", "kk-check")


@handle_simulation_errors
async def main(
    command: str,
    config_path: pathlib.Path,
    output_dir: Optional[str] = None,
    grid_points: Optional[int] = None,
    pump_mode: Optional[PumpMode] = None,
) -> int:
    """Run one subcommand and write its tables.

    Args:
        command: Subcommand name
        config_path: Path to the JSON experiment configuration
        output_dir: Output directory overriding config and environment
        grid_points: Spectral grid size overriding the config
        pump_mode: Pump mode overriding the config

    Returns:
        Process exit code
    """
    logger.info(f"Running {command} with {config_path}")
    config = initialize_config(config_path, output_dir, grid_points, pump_mode)
    storage = initialize_storage(config)
    handlers = create_handler_registry(config, storage)
    if command not in handlers:
        raise ValueError(f"Unknown subcommand: {command}")
    handler = handlers[command]
    tables = await handler.run()
    handler.save_tables(tables)
    logger.info(f"{command} finished, {len(tables)} table(s) in {storage.output_dir}")
    return EXIT_OK


def initialize_config(
    config_path: pathlib.Path,
    output_dir: Optional[str] = None,
    grid_points: Optional[int] = None,
    pump_mode: Optional[PumpMode] = None,
) -> ExperimentConfig:
    """Load the configuration and apply command-line overrides on top of it."""
    config = load_config(config_path)
    updates = {}
    if output_dir is not None:
        updates["output"] = {**config.output.model_dump(), "directory": output_dir}
    if grid_points is not None:
        updates["grid"] = {**config.grid.model_dump(), "count": grid_points}
    if pump_mode is not None:
        updates["pump"] = {**config.pump.model_dump(), "mode": pump_mode}
    if updates:
        # re-validate so overrides obey the same rules as the file
        config = ExperimentConfig.model_validate({**config.model_dump(), **updates})
    return config


def initialize_storage(config: ExperimentConfig) -> ResultStorage:
    """Initialize and return the result storage."""
    output_dir = pathlib.Path(config.output.directory)
    logger.info(f"Using output directory: {output_dir}")
    return ResultStorage(output_dir)


def create_handler_registry(config: ExperimentConfig, storage: ResultStorage) -> Dict[str, BaseHandler]:
    """Create the subcommand handlers keyed by subcommand name."""
    return {
        "transmittance": TransmittanceHandler(config, storage),
        "coincidence": CoincidenceHandler(config, storage),
        "delay-sweep": DelaySweepHandler(config, storage),
        "profiles": ProfilesHandler(config, storage),
        "kk-check": KramersKronigHandler(config, storage),
    }


@handle_simulation_errors
async def seed_config(path: Optional[pathlib.Path]) -> int:
    """Write the default configuration (the lossless/lossy layer-count sweep).

    Args:
        path: Destination file; printed to stdout when None

    Returns:
        Process exit code
    """
    text = dump_config(default_config())
    if path is None:
        print(text, end="")
    else:
        path.write_text(text)
        logger.info(f"Wrote default config to {path}")
    return EXIT_OK
