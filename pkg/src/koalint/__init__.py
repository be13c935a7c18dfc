"""Numerical verification of superintegrable Smorodinsky-Winternitz-type chains.

Modules: :mod:`numkit` (dual numbers, brackets), :mod:`sl2_core`,
:mod:`sl2_deformed`, :mod:`stackel`, :mod:`comodule` (systems and
integrals), :mod:`verify` (random-point checks), :mod:`dynamics`
(integrators) and :mod:`cli`.
"""

from .errors import (
    BadTowerIndex,
    ConfigInvalid,
    DegenerateDenominator,
    DimensionMismatch,
    KoalintError,
    SamplingExhausted,
    SingularEncounter,
    SingularPoint,
    StepUnderflow,
)
from .numkit import Dual, Observable, PhasePoint, poisson_bracket

__version__ = "0.1.0"

__all__ = [
    "BadTowerIndex",
    "ConfigInvalid",
    "DegenerateDenominator",
    "DimensionMismatch",
    "Dual",
    "KoalintError",
    "Observable",
    "PhasePoint",
    "SamplingExhausted",
    "SingularEncounter",
    "SingularPoint",
    "StepUnderflow",
    "poisson_bracket",
]
