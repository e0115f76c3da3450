"""Exception types shared across the toolkit."""


class AltkitError(Exception):
    """Base class for toolkit-specific failures."""


class DomainError(AltkitError, ValueError):
    """A point lies outside the domain it is required to be in."""


class BracketError(AltkitError, ValueError):
    """A bisection was started without a valid straddling bracket."""


class OrderingError(AltkitError, ValueError):
    """A strict-preference precondition does not hold."""


class ConstructionError(AltkitError, RuntimeError):
    """A constructed point failed its defining post-check."""


class ArchimedeanError(AltkitError, RuntimeError):
    """An equal-step walk exceeded its cap without reaching the target."""


class RangeError(AltkitError, ValueError):
    """A calibration target is not bracketed by the reference diagonal."""


class DegenerateFitError(AltkitError, RuntimeError):
    """An affine fit was attempted on samples with no utility variance."""


class ConfigError(AltkitError, ValueError):
    """Invalid run configuration."""
