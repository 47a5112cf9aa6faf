class TunnelkitError(Exception):
    pass


class NonFiniteResultError(TunnelkitError):
    pass


class IntegrationBlowUpError(TunnelkitError):
    def __init__(self, label: float, time: float):
        super().__init__(f"Non-finite state for label {label!r} at t={time!r}")
        self.label = label
        self.time = time


class CoverageGapError(TunnelkitError):
    def __init__(self, gaps):
        described = ", ".join(f"[{lo!r}, {hi!r}]" for lo, hi in gaps)
        super().__init__(f"Query points not covered by any branch: {described}")
        self.gaps = gaps


class ProperProjectionError(TunnelkitError):
    pass


class CrossingTrajectoriesError(TunnelkitError):
    def __init__(self, x: float, time: float):
        super().__init__(f"Trajectories cross at x={x!r}, t={time!r}")
        self.x = x
        self.time = time


class StratumTubeError(TunnelkitError):
    pass


class DegenerateStratumError(TunnelkitError):
    pass


class EnteringConditionError(TunnelkitError):
    pass


class NoIntersectionError(TunnelkitError):
    pass


class InsertionError(TunnelkitError):
    pass


class RootFindingError(TunnelkitError):
    pass


class NoFoldError(TunnelkitError):
    pass


class MultipleFoldsError(TunnelkitError):
    pass


class RefoldError(TunnelkitError):
    pass


class FloorViolationError(TunnelkitError):
    pass


class InstabilityError(TunnelkitError):
    pass


class NonPositiveFieldError(TunnelkitError):
    pass


class PreconditionError(TunnelkitError):
    pass


class StationaryPointError(TunnelkitError):
    pass


class ScenarioValidationError(TunnelkitError):
    pass
