"""
Handler for the kk-check subcommand.
"""
from typing import List

import numpy as np

from ..core.storage import ResultTable
from ..physics.materials import kk_residual, kk_window, kramers_kronig_real, permittivity_at
from .base_handler import BaseHandler


class KramersKronigHandler(BaseHandler):
    """Handler checking the configured material models for causality."""

    def __init__(self, config, storage):
        super().__init__(config, storage, "kk_handler")

    async def run(self) -> List[ResultTable]:
        rows = []
        extras = {"reference": "eps_r columns are eps_r - eps_inf"}
        kk = self.config.kk
        for name in kk.materials:
            model = self.config.material(name)
            center = model.characteristic_frequency or self.config.carrier
            grid = np.linspace(kk.lower * center, kk.upper * center, kk.count)
            window = kk_window(grid)
            reconstructed = kramers_kronig_real(model, grid, center)
            direct = np.real(permittivity_at(model, grid[window])) - model.high_frequency_permittivity
            residual = kk_residual(model, grid, center)
            extras[f"residual_{name}"] = residual
            self.logger.info(f"KK residual of {name}: {residual:.3e}")
            rows.extend(
                (name, float(omega), float(d), float(r))
                for omega, d, r in zip(grid[window], direct, reconstructed)
            )
        return [
            self.create_table(
                "kk_check",
                ["material", "omega", "eps_r_direct", "eps_r_kk"],
                rows,
                {"omega": "rad/s"},
                extras,
            )
        ]
