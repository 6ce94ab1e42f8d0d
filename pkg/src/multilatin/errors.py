"""Exception hierarchy shared by every module."""


class MultiLatinError(Exception):
    """Base class for all errors raised by :mod:`multilatin`."""


class InvalidInput(MultiLatinError, ValueError):
    pass


class UnsupportedParameters(InvalidInput):
    pass


class UnsupportedOrder(UnsupportedParameters):
    pass


class OrderMismatch(InvalidInput):
    pass


class ShapeMismatch(InvalidInput):
    pass


class NotSimple(InvalidInput):
    pass


class Incomplete(InvalidInput):
    pass


class InvalidRectangle(InvalidInput):
    pass


class InvalidQuasigroup(InvalidInput):
    pass


class NoIdempotentQuasigroup(UnsupportedParameters):
    pass


class InvalidSemiLatin(InvalidInput):
    pass


class UnbalancedMap(InvalidInput):
    pass


class NotASubset(InvalidInput):
    """Raised by :func:`multilatin.core.remove`; ``cell`` is the first offending (row, col)."""

    def __init__(self, cell):
        self.cell = cell
        super().__init__(f"cell {cell} of the sub-square is not contained in the square")


class NotStrength2(InvalidInput):
    """An orthogonal array whose pair counts are not all equal to its index."""

    def __init__(self, roles, pair, count, expected):
        self.roles = roles
        self.pair = pair
        self.count = count
        self.expected = expected
        super().__init__(
            f"roles {roles}: pair {pair} occurs {count} times, expected {expected}"
        )


class ValidationError(InvalidInput):
    """Carries the full :class:`~multilatin.core.ValidationReport`."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"invalid square: {report.summary()}")


class FormatError(InvalidInput):
    """Syntax error in one of the text formats; ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NoSystemOfRepresentatives(MultiLatinError, RuntimeError):
    """A pool family without a system of distinct representatives.

    Only reachable when the regularity precondition was broken, so it signals an
    internal-consistency failure rather than bad user input.
    """


class ResourceLimit(MultiLatinError):
    pass
