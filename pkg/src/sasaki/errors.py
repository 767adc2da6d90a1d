"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by this package."""


class DomainError(GeometryError):
    """A coordinate vector lies outside the chart (or too close to its edge)."""


class DimensionError(GeometryError):
    pass


class NonSPDError(GeometryError):
    """The metric failed the symmetric positive definite check."""


class SingularMetricError(GeometryError):
    """The metric is too badly conditioned to invert reliably."""


class BasepointMismatchError(GeometryError):
    pass


class CurveMismatchError(GeometryError):
    """Two curves in TM do not project to the same base curve."""


class RankError(GeometryError):
    """The Jacobian of an immersion is not of full column rank."""


class PreconditionError(GeometryError):
    """The isometric-immersion hypothesis does not hold for a scenario."""


class ScenarioNotFoundError(GeometryError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""
