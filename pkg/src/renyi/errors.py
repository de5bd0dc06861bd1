"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems exit 2, an exhausted
enumeration budget exits 3.
"""


class RenyiError(Exception):
    """Base class for all package errors."""


class InputError(RenyiError, ValueError):
    """Malformed or inconsistent user input (bad ids, off-simplex weights, ...)."""


class ContractError(RenyiError, ValueError):
    """An operation's precondition does not hold for otherwise well-formed input."""


class BudgetError(RenyiError, RuntimeError):
    """Exhaustive enumeration would exceed the configured assignment budget."""


class EstimationError(RenyiError, ValueError):
    """Not enough finite data points to fit a dimension estimate."""
