"""Exception types shared across the package.

Each class carries the CLI exit code it maps to, so the dispatcher never has
to guess.
"""

from __future__ import annotations


class LocalChernError(Exception):
    exit_code = 1


class RingMismatchError(LocalChernError, ValueError):
    pass


class PolyParseError(LocalChernError, ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based column of the fault."""

    exit_code = 3

    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"col {pos + 1}")
        text = f"{message} ({', '.join(where)})" if where else message
        super().__init__(text)
        self.message = message


class InputFileError(PolyParseError):
    pass


class CapExceeded(LocalChernError, RuntimeError):
    exit_code = 4


class NotStabilized(CapExceeded):
    pass


class HypothesisViolation(LocalChernError, ValueError):
    """An input fails a precondition of the requested pipeline."""

    exit_code = 2


class InfiniteColength(HypothesisViolation):
    pass


class DegeneratePair(HypothesisViolation):
    pass


class RouteDisagreement(LocalChernError, RuntimeError):
    exit_code = 5


class RetryExhausted(LocalChernError, RuntimeError):
    exit_code = 2
