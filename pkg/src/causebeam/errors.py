"""Exception types shared across the package."""


class CausebeamError(Exception):
    """Base class for all package errors."""


class CycleDetected(CausebeamError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"parent relation has a cycle through variable {variable!r}")


class UnknownVariable(CausebeamError):
    pass


class ValueOutsideDomain(CausebeamError):
    pass


class TargetNotActual(CausebeamError):
    """The target predicate is false under the empty intervention."""


class CandidateTooLarge(CausebeamError):
    """Minimality verification would exceed the enumeration budget."""


class InvalidConfig(CausebeamError):
    pass


class BudgetExceeded(CausebeamError):
    def __init__(self, size, budget):
        self.size = size
        self.budget = budget
        super().__init__(f"enumeration of {size} interventions exceeds budget {budget}")


class SamplingExhausted(CausebeamError):
    pass


class KTooLargeForSetDomains(CausebeamError):
    pass


class CauseTooLargeForExpansion(CausebeamError):
    pass


class ContextInconsistent(CausebeamError):
    pass


class IncompatibleHeuristic(CausebeamError):
    """Heuristic needs information the oracle cannot provide."""
