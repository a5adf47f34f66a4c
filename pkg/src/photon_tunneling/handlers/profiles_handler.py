"""
Handler for the profiles subcommand.
"""
import asyncio
from typing import List

import numpy as np

from ..core.formatters import to_femtoseconds
from ..core.storage import ResultTable
from ..physics.twophoton import incoming_profile, intensity_peaks, spectral_overlap, transmitted_profiles
from .base_handler import BaseHandler


class ProfilesHandler(BaseHandler):
    """Handler producing the outgoing photon's line shape and intensity."""

    def __init__(self, config, storage):
        super().__init__(config, storage, "profiles_handler")

    async def run(self) -> List[ResultTable]:
        """Tabulate |f̄(ω)| and Ī(t) behind the configured barrier.

        Returns:
            Spectrum table and intensity table
        """
        config = self.config
        stack = config.build_stack()
        pulse = config.pulse_spec()
        grid = config.spectral_grid()
        outgoing, incoming = await asyncio.gather(
            asyncio.to_thread(transmitted_profiles, stack, pulse, grid),
            asyncio.to_thread(incoming_profile, pulse, grid),
        )
        peaks = intensity_peaks(outgoing)
        extras = self.describe_stack(stack)
        extras.update({
            "pulse": pulse.shape.value,
            "spectral_overlap": spectral_overlap(incoming.spectrum, outgoing.spectrum),
            "intensity_peaks": len(peaks),
        })
        self.logger.info(f"Outgoing intensity has {len(peaks)} peaks above 0.2, overlap {extras['spectral_overlap']:.4f}")
        spectrum_rows = [
            (float(omega), float(value))
            for omega, value in zip(grid.omegas, np.abs(outgoing.spectrum.amplitudes))
        ]
        intensity_rows = [
            (float(t), float(value)) for t, value in zip(to_femtoseconds(outgoing.times), outgoing.intensity)
        ]
        return [
            self.create_table("profile_spectrum", ["omega", "abs_f_bar"], spectrum_rows,
                              {"omega": "rad/s", "abs_f_bar": "s^1/2"}, extras),
            self.create_table("profile_intensity", ["t", "I_bar"], intensity_rows, {"t": "fs"}, extras),
        ]
