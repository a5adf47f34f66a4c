"""
Storage handling for simulation result tables.
"""
import csv
import io
import logging
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from .formatters import format_value

logger = logging.getLogger('photon_tunneling.storage')


@dataclass
class ResultTable:
    """A named table of results with its `#`-prefixed metadata block."""

    name: str
    columns: List[str]
    rows: List[Sequence[Any]]
    metadata: Dict[str, Any] = field(default_factory=dict)


class ResultStorage:
    """Storage handler writing result tables as CSV files."""

    def __init__(self, output_dir: pathlib.Path):
        """Initialize storage with directory path.

        Args:
            output_dir: Directory to store result tables
        """
        self.output_dir = output_dir
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, table: ResultTable) -> pathlib.Path:
        """Get the path a table is written to."""
        return self.output_dir / f"{table.name}.csv"

    def render(self, table: ResultTable) -> str:
        """Render a table to CSV text.

        Args:
            table: Table to render

        Returns:
            CSV text with metadata block and header row
        """
        lines = [f"# {key}: {format_value(value)}" for key, value in table.metadata.items()]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            if len(row) != len(table.columns):
                raise ValueError(
                    f"Row of width {len(row)} does not match {len(table.columns)} columns in {table.name}"
                )
            writer.writerow([format_value(value) for value in row])
        return "\n".join(lines) + ("\n" if lines else "") + buffer.getvalue()

    def save_table(self, table: ResultTable) -> pathlib.Path:
        """Write a table to its CSV file.

        Args:
            table: Table to write

        Returns:
            Path of the written file
        """
        path = self.path_for(table)
        with open(path, "w", newline="") as f:
            f.write(self.render(table))
        logger.info(f"Wrote {len(table.rows)} rows to {path}")
        return path

