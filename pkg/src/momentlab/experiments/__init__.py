"""The experiments behind the ``momentlab`` commands."""

from ..core import Lab
from .clt import CltMomentsExperiment, CltRootsExperiment
from .density import DensityExperiment
from .esd import EsdExperiment
from .selftest import SelftestExperiment

__all__ = [
    "CltMomentsExperiment",
    "CltRootsExperiment",
    "DensityExperiment",
    "EsdExperiment",
    "SelftestExperiment",
    "default_lab",
]


def default_lab() -> Lab:
    """Return a Lab with every built-in experiment registered."""
    return Lab(
        [
            EsdExperiment(),
            CltRootsExperiment(),
            CltMomentsExperiment(),
            DensityExperiment(),
            SelftestExperiment(),
        ]
    )
