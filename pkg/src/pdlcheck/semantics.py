"""Small-step MDP semantics of pGCL.

A state pairs a valuation with the program still to run. ``successors``
implements the transition rules (assignment, both composition rules, both
probabilistic-choice rules, demonic choice, conditionals and loops) and
returns one entry per enabled action.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import EvalError, StuckProgram
from .evaluate import Valuation, eval_expr, is_number
from .syntax import (
    SKIP,
    Assign,
    Demonic,
    If,
    ProbChoice,
    Seq,
    Skip,
    Stmt,
    While,
    cached_hash,
    format_program,
)

ONE = Fraction(1)


class Action(enum.Enum):
    ONLY = "only"
    LEFT = "left"
    RIGHT = "right"


@cached_hash
@dataclass(frozen=True)
class State:
    env: Valuation
    prog: Stmt

    def __str__(self):
        return f"<{self.env}, {format_program(self.prog)}>"


@dataclass(frozen=True)
class ActionChoice:
    label: Action
    distribution: tuple  # of (Fraction, State), probabilities sum to 1


def is_final(s: State) -> bool:
    return isinstance(s.prog, Skip)


def _det(label: Action, nxt: State) -> ActionChoice:
    return ActionChoice(label, ((ONE, nxt),))


def _eval(state: State, e):
    try:
        return eval_expr(state.env, e)
    except EvalError as exc:
        raise StuckProgram(state, str(exc)) from exc


def _guard(state: State, e) -> bool:
    v = _eval(state, e)
    if not isinstance(v, bool):
        raise StuckProgram(state, "guard does not evaluate to a boolean")
    return v


def successors(s: State) -> list[ActionChoice]:
    """Enabled actions of a non-final state with their successor distributions."""
    prog, env = s.prog, s.env
    if isinstance(prog, Skip):
        raise ValueError(f"final state has no successors: {s}")
    if isinstance(prog, Assign):
        return [_det(Action.ONLY, State(env.bind(prog.target, _eval(s, prog.rhs)), SKIP))]
    if isinstance(prog, Seq):
        if isinstance(prog.first, Skip):
            if isinstance(prog.second, Skip):
                # skip;skip would otherwise be a non-final state with no rule
                return [_det(Action.ONLY, State(env, SKIP))]
            return successors(State(env, prog.second))
        tail = prog.second
        return [
            ActionChoice(
                choice.label,
                tuple((p, State(nxt.env, Seq(nxt.prog, tail))) for p, nxt in choice.distribution),
            )
            for choice in successors(State(env, prog.first))
        ]
    if isinstance(prog, ProbChoice):
        p = _eval(s, prog.prob)
        if not is_number(p) or not 0 <= p <= 1:
            raise StuckProgram(s, "choice probability outside [0,1]")
        p = Fraction(p)
        left, right = State(env, prog.left), State(env, prog.right)
        if p == 1 or (p != 0 and left == right):
            return [_det(Action.ONLY, left)]
        if p == 0:
            return [_det(Action.ONLY, right)]
        return [ActionChoice(Action.ONLY, ((p, left), (1 - p, right)))]
    if isinstance(prog, Demonic):
        return [
            _det(Action.LEFT, State(env, prog.left)),
            _det(Action.RIGHT, State(env, prog.right)),
        ]
    if isinstance(prog, If):
        branch = prog.then if _guard(s, prog.guard) else prog.orelse
        return [_det(Action.ONLY, State(env, branch))]
    if isinstance(prog, While):
        if _guard(s, prog.guard):
            return [_det(Action.ONLY, State(env, Seq(prog.body, prog)))]
        return [_det(Action.ONLY, State(env, SKIP))]
    raise TypeError(f"not a statement: {prog!r}")


def reachable(start: State, limit: int = 1_000_000) -> Iterator[tuple[State, list[ActionChoice]]]:
    """Breadth-first walk of the reachable state graph.

    Yields each state once, in discovery order, with its actions (empty for
    final states). Stops after ``limit`` states.
    """
    seen = {start}
    queue = deque([start])
    count = 0
    while queue and count < limit:
        state = queue.popleft()
        count += 1
        choices = [] if is_final(state) else successors(state)
        yield state, choices
        for choice in choices:
            for _, nxt in choice.distribution:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)


def dump_mdp(start: State, limit: int = 1_000_000) -> list[str]:
    """Edge list ``src action prob dst`` with BFS state numbering."""
    ids: dict[State, int] = {start: 0}
    legend, edges = [], []
    for state, choices in reachable(start, limit):
        legend.append(f"# {ids[state]} {state}")
        for choice in choices:
            for p, nxt in choice.distribution:
                # BFS discovery order coincides with this first-sight order
                ids.setdefault(nxt, len(ids))
                edges.append(f"{ids[state]} {choice.label.value} {p} {ids[nxt]}")
    return legend + edges
