"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class SpecError(ValueError):
    """A curve specification violates one of its invariants.

    ``invariant`` names the check that failed so callers (the CLI in
    particular) can report it verbatim.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        msg = f"invariant '{invariant}' violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotVisitedError(LookupError):
    """No curve sample lies within tolerance of the requested point."""


class UnderSampledError(LookupError):
    """A sampled curve does not cover a boundary point within tolerance."""

    def __init__(self, point, message: str = ""):
        self.point = point
        super().__init__(message or f"boundary point {point} is not covered")


class NoWitnessError(LookupError):
    """The antipode scan finished without finding a witness."""


class BudgetExhausted(RuntimeError):
    """A search ran out of budget before producing any valid bound."""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)
