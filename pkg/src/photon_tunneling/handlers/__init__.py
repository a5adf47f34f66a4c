"""Subcommand handlers."""

from .base_handler import BaseHandler
from .coincidence_handler import CoincidenceHandler
from .delay_sweep_handler import DelaySweepHandler
from .kk_handler import KramersKronigHandler
from .profiles_handler import ProfilesHandler
from .transmittance_handler import TransmittanceHandler

__all__ = [
    "BaseHandler",
    "CoincidenceHandler",
    "DelaySweepHandler",
    "KramersKronigHandler",
    "ProfilesHandler",
    "TransmittanceHandler",
]
