"""Photon tunneling through absorbing multilayer barriers: two-photon coincidence simulations."""

import asyncio
import logging
import os
import pathlib
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from . import cli
from .physics.twophoton import PumpMode

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)

logger = logging.getLogger('photon_tunneling')

LOG_LEVEL_ENV = "PHOTON_TUNNELING_LOG_LEVEL"


async def main(
    command: Optional[str],
    config_path: Optional[pathlib.Path],
    output_dir: Optional[str] = None,
    grid_points: Optional[int] = None,
    pump_mode: Optional[PumpMode] = None,
    seed_path: Optional[pathlib.Path] = None,
    seed: bool = False,
) -> int:
    """Run a subcommand, or write the default config when seeding."""
    if seed:
        return await cli.seed_config(seed_path)
    if command is None or config_path is None:
        logger.error("A subcommand and a config path are required")
        return 2
    return await cli.main(command, config_path, output_dir, grid_points, pump_mode)


def configure_logging(quiet: bool) -> None:
    """Apply the environment log level, then --quiet on top of it."""
    load_dotenv()
    level = os.getenv(LOG_LEVEL_ENV)
    if level:
        logging.getLogger().setLevel(level.upper())
    if quiet:
        logging.getLogger().setLevel(logging.WARNING)


def run_main(argv: Optional[Sequence[str]] = None) -> int:
    """Synchronous entry point for the package."""
    import argparse

    parser = argparse.ArgumentParser(description="Simulate photon tunneling through multilayer barriers")
    parser.add_argument(
        "--seed-config",
        nargs="?",
        const="-",
        metavar="PATH",
        help="Write the default configuration to PATH (stdout when omitted) and exit",
    )
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")

    subparsers = parser.add_subparsers(dest="command")
    for name in cli.SUBCOMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("config", type=pathlib.Path, help="Path to the JSON experiment configuration")
        sub.add_argument("--output-dir", help="Output directory (overrides PHOTON_TUNNELING_OUTPUT_DIR and the config)")
        sub.add_argument("--grid-points", type=int, help="Spectral grid size (power of two)")
        pump = sub.add_mutually_exclusive_group()
        pump.add_argument("--narrowband", dest="pump_mode", action="store_const", const=PumpMode.NARROWBAND)
        pump.add_argument("--tabulated-pump", dest="pump_mode", action="store_const", const=PumpMode.TABULATED)
        sub.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="Only log warnings and errors")

    args = parser.parse_args(argv)
    configure_logging(args.quiet)

    seed = args.seed_config is not None
    if not seed and args.command is None:
        parser.error("a subcommand is required unless --seed-config is given")

    # Run the main function through asyncio
    return asyncio.run(
        main(
            command=args.command,
            config_path=getattr(args, "config", None),
            output_dir=getattr(args, "output_dir", None),
            grid_points=getattr(args, "grid_points", None),
            pump_mode=getattr(args, "pump_mode", None),
            seed_path=None if not seed or args.seed_config == "-" else pathlib.Path(args.seed_config),
            seed=seed,
        )
    )


if __name__ == "__main__":
    sys.exit(run_main())

# Expose important items at package level
__all__ = ["main", "run_main", "cli"]
