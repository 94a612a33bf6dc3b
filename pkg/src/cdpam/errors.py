"""Exception hierarchy shared by every module."""


class CdpamError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(CdpamError, ValueError):
    pass


class DegenerateWeightsError(CdpamError):
    """An attachment weight came out nonpositive."""

    def __init__(self, node: int, weight: float):
        self.node = node
        self.weight = weight
        super().__init__(f"attachment weight of node {node} is {weight!r} (must be > 0)")


class UndefinedAssortativityError(CdpamError):
    pass


class NoConvergenceError(CdpamError):
    """An iterative eigensolver ran out of iterations.

    ``bracket`` holds the best (lower, upper) estimate reached.
    """

    def __init__(self, message: str, bracket: tuple[float, float]):
        self.bracket = bracket
        super().__init__(f"{message}; best bracket {bracket}")


class UnfittableDataError(CdpamError):
    pass


class EdgeListParseError(CdpamError):
    def __init__(self, path, lineno: int, reason: str):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {reason}")
