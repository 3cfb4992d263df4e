"""Three-valued satisfaction of pDL formulas.

A p-box ``[s]_p phi`` holds at a valuation when ``p`` does not exceed the
minimal probability that ``s`` ends in a state satisfying ``phi``. The
expectation engine only brackets that probability, so a box answers
Satisfied when ``p <= lo``, Violated when ``p > hi``, and Unknown in
between.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BoundRangeError, InnerUnknown, TypeMismatch, UnboundVariable
from .evaluate import Valuation, eval_expr, is_number, substitute
from .expectation import DEFAULT_BUDGET, Bounds, RewardFn, min_expectation
from .semantics import State
from .syntax import (
    And,
    Atf,
    Forall,
    Formula,
    Not,
    PBox,
    definitely_assigned,
    expr_vars,
    format_formula,
    format_value,
    read_before_write,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class Status(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``bounds`` and ``bound`` describe the p-box that decided the verdict,
    when there is one; ``witness`` is set by :func:`check_valid`.
    """

    status: Status
    bounds: Optional[Bounds] = None
    bound: Optional[Fraction] = None
    cause: str = ""
    witness: Optional[Valuation] = None

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status is Status.VIOLATED

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def negate(self) -> Verdict:
        flipped = {
            Status.SATISFIED: Status.VIOLATED,
            Status.VIOLATED: Status.SATISFIED,
            Status.UNKNOWN: Status.UNKNOWN,
        }[self.status]
        return Verdict(flipped, self.bounds, self.bound, self.cause, self.witness)


def _from_bool(b: bool, cause: str = "") -> Verdict:
    return Verdict(Status.SATISFIED if b else Status.VIOLATED, cause=cause)


def conjoin(first: Verdict, second: Verdict) -> Verdict:
    if first.violated:
        return first
    if second.violated:
        return second
    if first.unknown:
        return first
    if second.unknown:
        return second
    return second if second.bounds is not None else first


def required_names(phi: Formula) -> set[str]:
    """Variables a valuation must bind before ``phi`` can be checked.

    Names a box program assigns on every run are excused inside its body.
    """
    if isinstance(phi, Atf):
        return expr_vars(phi.expr)
    if isinstance(phi, Not):
        return required_names(phi.body)
    if isinstance(phi, And):
        return required_names(phi.left) | required_names(phi.right)
    if isinstance(phi, Forall):
        return required_names(phi.body) - {phi.var}
    if isinstance(phi, PBox):
        s = phi.program
        return (
            expr_vars(phi.bound)
            | read_before_write(s)
            | (required_names(phi.body) - definitely_assigned(s))
        )
    raise TypeError(f"not a formula: {phi!r}")


def eval_bound(env: Valuation, e) -> Fraction:
    p = eval_expr(env, e)
    if not is_number(p):
        raise BoundRangeError(f"p-box bound {format_value(p)} is not a number")
    if not 0 <= p <= 1:
        raise BoundRangeError(f"p-box bound {format_value(p)} outside [0,1]")
    return Fraction(p)


def box_bounds(env: Valuation, box: PBox, budget: int = DEFAULT_BUDGET) -> Bounds:
    """Bracket the minimal probability that the box program establishes its body."""
    missing = sorted(required_names(box) - set(env))
    if missing:
        raise UnboundVariable(missing[0])
    return min_expectation(State(env, box.program), embed_reward(box.body, budget), budget)


def satisfies(env: Valuation, phi: Formula, budget: int = DEFAULT_BUDGET) -> Verdict:
    if isinstance(phi, Atf):
        v = eval_expr(env, phi.expr)
        if not isinstance(v, bool):
            raise TypeMismatch(f"atomic formula evaluates to {format_value(v)}, not a boolean")
        return _from_bool(v)
    if isinstance(phi, Not):
        return satisfies(env, phi.body, budget).negate()
    if isinstance(phi, And):
        left = satisfies(env, phi.left, budget)
        if left.violated:
            return left
        return conjoin(left, satisfies(env, phi.right, budget))
    if isinstance(phi, Forall):
        result = Verdict(Status.SATISFIED)
        for v in phi.domain:
            result = conjoin(result, satisfies(env, substitute(phi.body, phi.var, v), budget))
            if result.violated:
                break
        return result
    if isinstance(phi, PBox):
        p = eval_bound(env, phi.bound)
        b = box_bounds(env, phi, budget)
        if p <= b.lo:
            return Verdict(Status.SATISFIED, b, p)
        if p > b.hi:
            return Verdict(Status.VIOLATED, b, p)
        cause = (
            f"{format_formula(phi)} at {env}: bound {p} lies in ({b.lo}, {b.hi}]"
            f" after {b.truncated_states} truncated states"
        )
        return Verdict(Status.UNKNOWN, b, p, cause)
    raise TypeError(f"not a formula: {phi!r}")


def embed_reward(phi: Formula, budget: int = DEFAULT_BUDGET) -> RewardFn:
    """Boolean embedding: 1 on final states satisfying ``phi``, else 0."""

    def reward(state: State) -> Fraction:
        v = satisfies(state.env, phi, budget)
        if v.unknown:
            raise InnerUnknown(state, v)
        return ONE if v.satisfied else ZERO

    return reward


def check_valid(phi: Formula, envs: Iterable[Valuation], budget: int = DEFAULT_BUDGET) -> Verdict:
    """Conjunction of :func:`satisfies` over a finite set of valuations."""
    envs = list(envs)
    if not envs:
        raise ValueError("check_valid needs at least one valuation")
    result = Verdict(Status.SATISFIED)
    for env in envs:
        v = satisfies(env, phi, budget)
        if v.violated:
            return Verdict(Status.VIOLATED, v.bounds, v.bound, v.cause, env)
        result = conjoin(result, v)
    return result
