"""
Base handler for simulation subcommands.
Provides common functionality for all specialized handlers.
"""
from typing import Any, Dict, List, Optional, Sequence
import logging

from ..config import ExperimentConfig, config_hash
from ..core.storage import ResultStorage, ResultTable
from ..physics.materials import LayerStack


class BaseHandler:
    """Base class for all subcommand handlers."""

    def __init__(
        self,
        config: ExperimentConfig,
        storage: ResultStorage,
        logger_name: str = "base_handler"
    ):
        """Initialize the base handler with common dependencies.

        Args:
            config: Validated experiment configuration
            storage: Result table storage
            logger_name: Name for this handler's logger
        """
        self.config = config
        self.storage = storage
        self.logger = logging.getLogger(f'photon_tunneling.cli.{logger_name}')

    async def run(self) -> List[ResultTable]:
        """Compute the subcommand's result tables."""
        raise NotImplementedError

    def create_table(
        self,
        name: str,
        columns: List[str],
        rows: List[Sequence[Any]],
        units: Dict[str, str],
        extras: Optional[Dict[str, Any]] = None
    ) -> ResultTable:
        """Create a result table with the standard metadata block.

        Args:
            name: Table name (file stem)
            columns: Column names
            rows: Table rows
            units: Unit per column
            extras: Additional metadata entries

        Returns:
            Table ready for storage
        """
        metadata: Dict[str, Any] = {
            "table": name,
            "config_sha256": config_hash(self.config),
            "units": ", ".join(f"{column} [{units.get(column, '1')}]" for column in columns),
        }
        if extras:
            metadata.update(extras)
        return ResultTable(name, columns, rows, metadata)

    def describe_stack(self, stack: LayerStack) -> Dict[str, Any]:
        """Metadata entries describing a barrier."""
        return {
            "layer_count": stack.layer_count,
            "thickness_um": stack.thickness * 1e6,
            "lossless": stack.is_lossless,
        }

    def save_tables(self, tables: List[ResultTable]) -> None:
        """Write tables one after another in the given order.

        Args:
            tables: Tables to write
        """
        for table in tables:
            self.logger.debug(f"Saving table {table.name}")
            self.storage.save_table(table)
