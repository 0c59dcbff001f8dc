"""
Exception hierarchy for the hubs package.

Every error raised on purpose by the library derives from HubsError so callers
(and the CLI) can tell contract violations apart from programming bugs.
"""


class HubsError(Exception):
    """Base class for all library errors."""


class ModeViolation(HubsError):
    """An update changes the graph in the direction its mode forbids."""


class UnknownEdge(HubsError):
    """An update refers to an edge that is not in the graph."""


class InvalidEdge(HubsError):
    """Endpoint out of range, self-loop, or weight outside [1, W]."""


class DynTreeError(HubsError):
    pass


class NotARoot(DynTreeError):
    pass


class SameTree(DynTreeError):
    pass


class IsRoot(DynTreeError):
    pass


class WeightedGraph(HubsError):
    """An exact (unweighted) structure was handed a weighted graph."""


class DepthExceeded(HubsError):
    """A tree deeper than the blocker parameter reached the greedy blocker."""


class OddD(HubsError):
    pass


class BadD(HubsError):
    pass


class TrialLimitExceeded(HubsError):
    """A Las Vegas loop hit its trial cap."""

    def __init__(self, message, trials):
        super().__init__(message)
        self.trials = trials


class ConfigError(HubsError):
    pass


class StreamParseError(HubsError):
    def __init__(self, message, line_no=None, line=None):
        if line_no is not None:
            message = f"line {line_no}: {message}: {line!r}"
        super().__init__(message)
        self.line_no = line_no
        self.line = line


class InvalidParameter(HubsError, ValueError):
    """A numeric parameter (eps, c, hop bound, edge count) outside its range."""


class UncoveredPath(HubsError):
    pass


class NotAHub(HubsError):
    """A tree handed to hub construction is rooted outside the hub set."""
