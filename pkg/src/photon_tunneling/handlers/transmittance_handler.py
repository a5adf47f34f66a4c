"""
Handler for the transmittance subcommand.
"""
import asyncio
from typing import List

import numpy as np

from ..core.storage import ResultTable
from ..physics.transfer import transmittance_scan
from .base_handler import BaseHandler


class TransmittanceHandler(BaseHandler):
    """Handler sampling T12(ω) of the configured barrier."""

    def __init__(self, config, storage):
        super().__init__(config, storage, "transmittance_handler")

    async def run(self) -> List[ResultTable]:
        """Tabulate omega, Re T12, Im T12 and |T12|² on the spectral grid.

        Returns:
            One table with a row per grid frequency
        """
        stack = self.config.build_stack()
        omegas = self.config.spectral_grid().omegas
        t12 = await asyncio.to_thread(transmittance_scan, stack, omegas)
        power = np.abs(t12) ** 2
        self.logger.info(f"Transmittance of N={stack.layer_count}: min |T12|^2 = {float(power.min()):.3e}")
        rows = [
            (float(omega), float(value.real), float(value.imag), float(p))
            for omega, value, p in zip(omegas, t12, power)
        ]
        return [
            self.create_table(
                "transmittance",
                ["omega", "re_T12", "im_T12", "abs_T12_sq"],
                rows,
                {"omega": "rad/s"},
                self.describe_stack(stack),
            )
        ]
