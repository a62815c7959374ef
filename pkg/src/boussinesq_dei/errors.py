"""Exception hierarchy shared by all modules."""


class BoussinesqError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(BoussinesqError, ValueError):
    pass


class DomainError(BoussinesqError, ValueError):
    """A point was requested outside the periodic interval [a, b]."""


class DivergedError(BoussinesqError, ArithmeticError):
    """Input or state contains non-finite values (the simulation blew up)."""


class RealnessError(BoussinesqError, ArithmeticError):
    """A spectrum that should describe a real field has a large imaginary residue."""


class ObserverError(BoussinesqError, RuntimeError):
    def __init__(self, step, t, cause):
        self.step = step
        self.t = t
        self.cause = cause
        super().__init__(f"observer failed at step {step} (t={t!r}): {cause!r}")


class ConfigError(BoussinesqError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
