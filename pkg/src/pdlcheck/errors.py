"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PdlError(Exception):
    """Base class for every error raised by pdlcheck."""


class ParseError(PdlError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.col)


class EvalError(PdlError):
    pass


class UnboundVariable(EvalError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class TypeMismatch(EvalError):
    pass


class DivisionByZero(EvalError):
    pass


class StuckProgram(PdlError):
    """A non-final state with no applicable rule."""

    def __init__(self, state, reason: str):
        self.state = state
        self.reason = reason
        super().__init__(f"program stuck: {reason} in state {state}")


class RewardRangeError(PdlError):
    pass


class BoundRangeError(PdlError):
    pass


class InnerUnknown(PdlError):
    """A nested p-box could not be decided at a final state of an outer box."""

    def __init__(self, state, verdict):
        self.state = state
        self.verdict = verdict
        super().__init__(f"nested p-box undecided at final state {state}: {verdict.cause}")


class StepCapExceeded(PdlError):
    def __init__(self, trial: int, cap: int):
        self.trial = trial
        self.cap = cap
        super().__init__(f"trial {trial} did not terminate within {cap} steps")


class PolicyError(PdlError):
    pass
