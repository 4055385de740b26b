"""Exception types raised across the toolkit."""


class RankDesignError(Exception):
    """Base class for all toolkit errors."""


class InvalidEdgeError(RankDesignError, ValueError):
    pass


class DimensionError(RankDesignError, ValueError):
    pass


class InvalidInputError(RankDesignError, ValueError):
    pass


class SizeError(RankDesignError, ValueError):
    """Problem too large for a dense or exhaustive routine."""


class InvalidSubsetError(RankDesignError, ValueError):
    pass


class HypothesisViolation(RankDesignError, ValueError):
    """Inputs outside the hypotheses under which a bound holds."""


class NotIdentifiableError(RankDesignError, ValueError):
    """The comparison graph is disconnected, so scores are not identifiable.

    ``components`` lists the vertex sets of the connected components.
    """

    def __init__(self, message, components=()):
        super().__init__(message)
        self.components = [sorted(c) for c in components]


class SolverFailure(RankDesignError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``best`` holds the best iterate found (an eigenpair or a score vector).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ExhaustedError(RankDesignError, ValueError):
    """No admissible pair is left to augment."""


class DegenerateDegreeError(RankDesignError, ValueError):
    pass


class DegenerateDatasetError(RankDesignError, ValueError):
    pass


class ParseError(RankDesignError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
