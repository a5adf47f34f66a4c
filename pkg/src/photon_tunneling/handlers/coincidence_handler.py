"""
Handler for the coincidence subcommand.
"""
import asyncio
from typing import Any, Dict, List

from ..core.error_handler import FlatScanError
from ..core.formatters import to_micrometers
from ..core.storage import ResultTable
from ..physics.twophoton import coincidence_scan, find_dip
from .base_handler import BaseHandler


class CoincidenceHandler(BaseHandler):
    """Handler computing R(s) and the dip of the configured barrier."""

    def __init__(self, config, storage):
        super().__init__(config, storage, "coincidence_handler")

    async def run(self) -> List[ResultTable]:
        """Tabulate s and R(s); dip results go into the metadata block.

        Returns:
            One table with a row per translation length
        """
        config = self.config
        stack = config.build_stack()
        scan = await asyncio.to_thread(
            coincidence_scan,
            stack,
            config.pulse_spec(),
            config.pump_spec(),
            config.s_grid(),
            config.spectral_grid(),
            config.dip.plateau_tolerance,
            config.dip.plateau_reach,
        )
        extras: Dict[str, Any] = self.describe_stack(stack)
        extras.update({
            "pulse": config.pulse.shape.value,
            "pump": config.pump.mode.value,
            "plateau_mean": scan.plateau_mean,
            "imaginary_fraction": scan.imaginary_fraction,
        })
        try:
            dip = find_dip(scan, stack.thickness, config.dip.threshold)
            extras.update({
                "s0_um": dip.s0 * 1e6,
                "r_min": dip.r_min,
                "delta_tau_fs": dip.delta_tau * 1e15,
                "tau_t_fs": dip.tau_t * 1e15,
                "fringe_count": dip.fringe_count,
            })
            self.logger.info(f"Dip at s0 = {dip.s0 * 1e6:.4f} um with {dip.fringe_count} minima")
        except FlatScanError as e:
            self.logger.warning(f"No dip found: {str(e)}")
            extras["fringe_count"] = 0
        rows = [(float(s), float(r)) for s, r in zip(to_micrometers(scan.s_values), scan.r_values)]
        return [self.create_table("coincidence", ["s", "R"], rows, {"s": "um"}, extras)]
