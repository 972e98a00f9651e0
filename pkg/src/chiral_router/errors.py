"""Exception hierarchy for scattering calculations and CLI configuration."""


class ScatteringError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameters(ScatteringError, ValueError):
    """A physical parameter violates its domain (e.g. negative rate)."""


class UnequalAtomFrequencies(ScatteringError, ValueError):
    """The closed-form amplitudes need omega1 == omega2."""


class DegeneratePoint(ScatteringError, ArithmeticError):
    """The closed-form denominator vanishes; use the linear-system solver instead."""


class SingularSystem(ScatteringError, ArithmeticError):
    """A pivot fell below the singularity floor during elimination."""


class ConservationViolation(ScatteringError, ArithmeticError):
    """Output probabilities do not sum to one."""


class MissingInnerAmplitudes(ScatteringError, ValueError):
    """Wavefunction evaluation needs the inner-region amplitudes."""


class EmptyBox(ScatteringError, ValueError):
    """A search box has min >= max on some axis."""


class InvalidSpec(ScatteringError, ValueError):
    """A sweep specification is malformed."""


class ConfigError(ScatteringError, ValueError):
    """Base for configuration problems reported by the CLI (exit code 2)."""


class SchemaError(ConfigError):
    """A configuration document failed schema validation.

    ``path`` is the JSON path of the offending field, e.g. ``"G"`` or
    ``"sweep.x.n"``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ConflictError(ConfigError):
    """Mutually exclusive configuration keys were given together."""
