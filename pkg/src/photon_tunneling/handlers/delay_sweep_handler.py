"""
Handler for the delay-sweep subcommand.
"""
from typing import List, Tuple

import numpy as np

from ..core.formatters import to_femtoseconds, to_micrometers
from ..core.storage import ResultTable
from ..physics.pulses import PulseShape
from ..physics.transfer import group_delay
from ..physics.twophoton import coincidence_scan, find_dip
from ..utils import gather_in_order
from .base_handler import BaseHandler

SweepPoint = Tuple[PulseShape, str, int]


class DelaySweepHandler(BaseHandler):
    """Handler sweeping the dip delay over layer counts, loss settings and pulse shapes."""

    def __init__(self, config, storage):
        super().__init__(config, storage, "delay_sweep_handler")

    def sweep_points(self) -> List[SweepPoint]:
        sweep = self.config.sweep
        return [
            (shape, loss, n)
            for shape in sweep.pulse_shapes
            for loss in sweep.losses
            for n in sweep.layer_counts
        ]

    def evaluate(self, point: SweepPoint) -> tuple:
        """Compute one sweep row.

        Args:
            point: (pulse shape, loss setting, layer count N)

        Returns:
            Row matching the delay_sweep columns
        """
        shape, loss, n = point
        config = self.config
        stack = config.build_stack(n, lossless=(loss == "lossless"))
        scan = coincidence_scan(
            stack,
            config.pulse_spec(shape),
            config.pump_spec(),
            config.s_grid(),
            config.spectral_grid(),
            config.dip.plateau_tolerance,
            config.dip.plateau_reach,
        )
        dip = find_dip(scan, stack.thickness, config.dip.threshold)
        carrier = config.carrier
        probe = carrier * (1.0 + np.linspace(-1e-3, 1e-3, 5))
        tau_group = float(group_delay(stack, probe)[2])
        self.logger.info(
            f"{shape.value}/{loss} N={n}: delta_tau = {dip.delta_tau * 1e15:.3f} fs, {dip.fringe_count} minima"
        )
        return (
            n,
            float(to_micrometers(stack.thickness)),
            *(float(value) for value in to_femtoseconds([dip.delta_tau, dip.tau_t])),
            dip.fringe_count,
            loss,
            shape.value,
            float(to_femtoseconds(tau_group)),
            dip.fringe_count == 1,
        )

    async def run(self) -> List[ResultTable]:
        """Tabulate one row per (pulse shape, loss setting, N).

        Returns:
            One table; rows with single_traversal false have several minima
        """
        rows = await gather_in_order(self.evaluate, self.sweep_points())
        return [
            self.create_table(
                "delay_sweep",
                ["N", "l", "delta_tau", "tau_t", "fringe_count", "loss", "pulse", "tau_group_fs", "single_traversal"],
                rows,
                {"l": "um", "delta_tau": "fs", "tau_t": "fs", "tau_group_fs": "fs"},
            )
        ]
