"""Exception types shared across the package."""


class KoalintError(Exception):
    """Base class for all package errors."""


class SingularPoint(KoalintError, ValueError):
    """An observable was evaluated where one of its terms diverges (q_i = 0)."""


class DimensionMismatch(KoalintError, ValueError):
    pass


class BadTowerIndex(KoalintError, ValueError):
    """A site or tower index lies outside its admissible window."""


class DegenerateDenominator(KoalintError, ValueError):
    """1 + sigma*lambda2*p2 vanished in a comodule observable."""


class SamplingExhausted(KoalintError, RuntimeError):
    """No regular phase-space point could be drawn within the retry budget."""


class SingularEncounter(KoalintError, RuntimeError):
    """A trajectory reached or crossed a centrifugal singularity q_i = 0."""

    def __init__(self, message, t=None, site=None):
        super().__init__(message)
        self.t = t
        self.site = site


class StepUnderflow(KoalintError, RuntimeError):
    pass


class ConfigInvalid(KoalintError, ValueError):
    """A system configuration failed validation; ``path`` names the field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
