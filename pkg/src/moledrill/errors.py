"""Exception hierarchy shared by every moledrill module."""


class MoleDrillError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MoleDrillError):
    """The configuration document could not be parsed."""


class ValidationError(MoleDrillError, ValueError):
    """A record field violates its invariant.

    ``field`` names the offending field and ``bound`` the violated constraint.
    """

    def __init__(self, field: str, value, bound: str):
        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(f"{field} = {value!r} violates {bound}")


class DomainError(MoleDrillError, ValueError):
    """An argument lies outside the domain of an operation."""


class StallError(MoleDrillError):
    """Requested torque exceeds what the motor can deliver through the drivetrain."""


class InfeasibleRateError(MoleDrillError):
    """A zero or negative rate of penetration was used as a divisor."""


class CalibrationError(MoleDrillError):
    """Not enough usable data to fit a model parameter."""


class SequenceError(MoleDrillError):
    """An interlock guard of the digging sequence was violated."""
