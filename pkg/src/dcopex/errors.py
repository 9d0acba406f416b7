"""Exception hierarchy shared across the package."""


class DcopError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(DcopError):
    """A structural invariant of an instance, assignment, or explanation is broken."""


class InstanceFormatError(DcopError):
    """A JSON document does not have the shape of an instance/solution/query."""


class UnboundVariable(DcopError):
    """A constraint was evaluated under an assignment missing a scope variable."""


class IncompleteSolution(DcopError):
    """An operation requiring a complete assignment received a partial one."""


class InconsistentExplanation(DcopError):
    """An explanation's cost fields do not match its constraint sides."""


class InvalidConfig(DcopError):
    """A generator or experiment configuration violates its constraints."""


class NoFeasibleSubset(DcopError):
    """No variable subset of the requested size satisfies the connectivity rule."""


class EmptyAlternativeDomain(DcopError):
    """A queried variable has no values left to serve as an alternative."""


class BudgetExhausted(DcopError):
    """The exact solver exceeded its node budget before proving optimality."""


class MalformedQuery(DcopError):
    """A contrastive query violates the query invariants."""


class ListTooLarge(DcopError):
    """The exhaustive subset oracle refuses lists it cannot enumerate."""


class EmptyInput(DcopError):
    """An aggregation was asked to summarize zero rows."""


class SimulationDeadlock(DcopError):
    """The message-passing simulation failed to reach quiescence; this is a defect."""
