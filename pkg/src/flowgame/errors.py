"""Exception hierarchy for the flowgame package."""


class FlowGameError(Exception):
    """Base class for all errors raised by this package."""


def _at_line(line):
    return f" (line {line})" if line is not None else ""


class NetworkValidationError(FlowGameError):
    """A network violates a structural invariant.

    When raised by the instance parser, ``line`` holds the offending
    1-based line number; networks built programmatically leave it None.
    """

    line = None


class DuplicateArcLabel(NetworkValidationError):
    def __init__(self, label, line=None):
        self.label = label
        self.line = line
        super().__init__(f"duplicate arc label {label!r}" + _at_line(line))


class SelfLoop(NetworkValidationError):
    def __init__(self, label, vertex, line=None):
        self.label = label
        self.vertex = vertex
        self.line = line
        super().__init__(f"arc {label!r} is a self-loop at vertex {vertex!r}" + _at_line(line))


class UnknownVertex(NetworkValidationError):
    def __init__(self, vertex, context="", line=None):
        self.vertex = vertex
        self.line = line
        msg = f"unknown vertex {vertex!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg + _at_line(line))


class SourceEqualsSink(NetworkValidationError):
    def __init__(self, vertex, line=None):
        self.vertex = vertex
        self.line = line
        super().__init__(f"source and sink are both {vertex!r}" + _at_line(line))


class NegativeCapacity(NetworkValidationError):
    def __init__(self, label, value, line=None):
        self.label = label
        self.value = value
        self.line = line
        super().__init__(f"arc {label!r} has negative capacity {value}" + _at_line(line))


class NotAcyclic(FlowGameError):
    """Raised when an operation requires an acyclic network."""

    def __init__(self, cycle=()):
        self.cycle = tuple(cycle)
        detail = f": directed cycle {list(self.cycle)}" if self.cycle else ""
        super().__init__("network contains a directed cycle" + detail)


class NotUnique(FlowGameError):
    """An arc expected to lie on a single source-sink path lies on several (or none)."""

    def __init__(self, label, count):
        self.label = label
        self.count = count
        word = "no" if count == 0 else "more than one"
        super().__init__(f"arc {label!r} lies on {word} source-sink path")


class PathLimitExceeded(FlowGameError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"more than {limit} simple source-sink paths")


class UnknownArcId(FlowGameError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"unknown arc label {label!r}")


class TooManyPlayers(FlowGameError):
    def __init__(self, count, bound):
        self.count = count
        self.bound = bound
        super().__init__(f"{count} players exceeds the exhaustive bound of {bound}")


class NotAPermutation(FlowGameError):
    def __init__(self, order):
        self.order = tuple(order)
        super().__init__("order is not a permutation of the player set")


class NotEfficient(FlowGameError):
    """An allocation does not distribute exactly the grand-coalition value."""

    def __init__(self, total, expected):
        self.total = total
        self.expected = expected
        super().__init__(f"allocation sums to {total}, grand coalition is worth {expected}")


class IncompleteScheme(FlowGameError):
    def __init__(self, coalition):
        self.coalition = coalition
        super().__init__(f"scheme is missing an allocation for coalition {sorted(coalition)}")


class ParseError(FlowGameError):
    """Instance text could not be parsed; carries the offending line number."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")
