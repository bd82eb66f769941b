"""Exception types shared by the moprec modules.

Every failure the algorithms can detect has its own class so that callers
(and the CLI exit-code mapping) can react to the *kind* of breakdown:
bad input values, an index outside a table's stored range, a vanishing
denominator in a shift recursion, a singular inverse sweep, and so on.
"""

from __future__ import annotations


class MoprecError(Exception):
    """Base class for all moprec errors."""


class DomainError(MoprecError):
    """Input value outside the mathematical domain of an operation.

    Examples: square root of a negative rational, a non-positive weight in
    a discrete measure, a precision below one significant digit.
    """


class RangeError(MoprecError):
    """A table was asked for an index outside its stored range."""


class ParseError(MoprecError):
    """Malformed input file or literal."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InitError(MoprecError):
    """The starting value of a shift c-sequence is undefined.

    Raised when the gamma entry that seeds a level's c-sequence is zero,
    so the quotient defining c_0 does not exist.
    """

    def __init__(self, axis: str, level: int, index: int):
        self.axis = axis
        self.level = level
        self.index = index
        super().__init__(
            f"cannot start c-sequence for axis {axis} level {level}: "
            f"gamma[{index}] = 0"
        )


class NormalityError(MoprecError):
    """A recursion denominator vanished, signalling a non-normal system.

    Carries the axis and shift level where the breakdown happened, the step
    ``n`` of the c-sequence recursion, and the table index of the vanishing
    quantity (the new even-position delta entry at that level).
    """

    def __init__(self, axis: str, level: int, n: int, index: int):
        self.axis = axis
        self.level = level
        self.n = n
        self.index = index
        super().__init__(
            f"zero denominator in c-sequence recursion: axis {axis}, "
            f"level {level}, step n={n} (delta[{index}] at the new level is 0)"
        )


class SeedMismatch(MoprecError):
    """A caller-supplied c-sequence seed disagrees with the determined value."""

    def __init__(self, level: int, expected, got):
        self.level = level
        self.expected = expected
        self.got = got
        super().__init__(
            f"c0 seed at level {level} is determined to be {expected}, got {got}"
        )


class SingularSweepError(MoprecError):
    """Inverse sweep hit a point where two diagonal coefficients coincide.

    ``site`` is ``(n, m)`` for the two-measure sweep, or ``(nvec, i, j)``
    for the general one: the lattice point whose i-th and j-th diagonal
    recurrence coefficients are equal, making the divisor zero.
    """

    def __init__(self, site: tuple):
        self.site = site
        super().__init__(f"singular inverse sweep: coefficients coincide at {site}")


class NonNormalIndexError(MoprecError):
    """The moment linear system for a multi-index is singular."""

    def __init__(self, index: tuple):
        self.index = index
        super().__init__(f"moment system singular at multi-index {index}")


class InternalError(MoprecError):
    """Cross-check inside an algorithm failed; indicates a bug, not bad input."""
