"""Exception types raised across the package."""


class GraphError(ValueError):
    """Base class for invalid graph input or graph state."""


class SelfLoop(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class ConflictingDuplicateEdge(GraphError):
    pass


class EmptyResult(GraphError):
    pass


class WrongMode(GraphError):
    """Operation requires a cost-valued (or proximity-valued) graph."""


class Disconnected(GraphError):
    pass


class ProbabilityOverflow(ValueError):
    """Some block-pair edge probability B_ab * rho exceeds one."""


class DomainError(ValueError):
    pass


class NonPositiveProximity(ValueError):
    pass


class DuplicatePoints(ValueError):
    """A point's q-th nearest neighbour sits at distance zero."""


class BudgetUnreachable(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    pass


class LabelCountMismatch(ValueError):
    pass
