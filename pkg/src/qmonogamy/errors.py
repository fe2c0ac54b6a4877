"""Exception hierarchy shared by the library and the CLI."""


class MonogamyError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(MonogamyError, ValueError):
    """Operator dimensions do not match the declared subsystem layout."""


class ContractError(MonogamyError, ValueError):
    """An input violates a documented precondition (Hermiticity, normalization...)."""


class PositivityError(ContractError):
    """A supposedly positive semidefinite operator has a significantly negative eigenvalue."""


class DomainError(MonogamyError, ValueError):
    """A parameter lies outside its admissible range."""


class UnsupportedRankError(MonogamyError):
    """The convex-roof construction only handles states of rank at most two."""

    def __init__(self, rank: int):
        super().__init__(f"state has numerical rank {rank}; only rank <= 2 is supported")
        self.rank = rank


class InvariantError(MonogamyError, RuntimeError):
    """An internal consistency check failed; indicates a bug rather than bad input."""


class UsageError(MonogamyError, ValueError):
    """Malformed request, e.g. the wrong number of state coefficients."""
