"""Exception types shared across the package."""


class DiscretePLError(Exception):
    """Base class for all library errors."""


class NegativeMass(DiscretePLError):
    pass


class NotNormalized(DiscretePLError):
    """Masses do not sum to 1; carries the exact rational deficit 1 - sum."""

    def __init__(self, deficit):
        super().__init__(f"masses sum to 1 - ({deficit}); deficit {deficit}")
        self.deficit = deficit


class SupportNotBinary(DiscretePLError):
    pass


class LengthMismatch(DiscretePLError):
    pass


class DimensionMismatch(DiscretePLError):
    pass


class NotMonotone(DiscretePLError):
    pass


class PreconditionViolated(DiscretePLError):
    pass


class OutsidePositiveWindow(DiscretePLError):
    pass


class InfeasibleCost(DiscretePLError):
    pass


class ConstraintViolated(DiscretePLError):
    """Dual constraint u(x)+v(y) <= c(x,y) fails; carries a witness pair."""

    def __init__(self, x, y, excess):
        super().__init__(f"u({x})+v({y}) exceeds the cost by {excess}")
        self.witness = (x, y)
        self.excess = excess


class HypothesisFailedOnGrid(DiscretePLError):
    pass


class ConvexityWitnessFailed(DiscretePLError):
    pass


class SupportExceedsWindow(DiscretePLError):
    pass


class ParseError(DiscretePLError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ConfigError(DiscretePLError):
    pass
