"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
status the command-line front-end uses for it.
"""


class LabError(Exception):
    code = "ERROR"
    exit_status = 1


class InputError(LabError, ValueError):
    """Malformed or unreadable input file."""

    code = "INPUT"
    exit_status = 3


class DomainError(LabError, ValueError):
    """A point that should lie in the open unit disk does not."""

    code = "DOMAIN"
    exit_status = 4


class RegimeError(LabError, ValueError):
    """Exponents routed to the wrong regime (p <= q versus q < p)."""

    code = "REGIME"
    exit_status = 5


class ContractError(LabError, ValueError):
    """A precondition on arguments was violated."""

    code = "CONTRACT"
    exit_status = 6


class ConfigurationError(LabError):
    """A configured cap (series degree, node budget) was exceeded."""

    code = "CONFIG"
    exit_status = 7


class ResolutionError(LabError):
    """The requested region cannot be resolved with the configured grid."""

    code = "RESOLUTION"
    exit_status = 8


class OutOfScopeError(LabError, ValueError):
    """Parameters outside the range where a criterion is known to hold."""

    code = "SCOPE"
    exit_status = 9
