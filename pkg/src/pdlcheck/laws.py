"""Derived probability bounds and reward transformers."""

from __future__ import annotations

from fractions import Fraction

from .errors import BoundRangeError, RewardRangeError
from .evaluate import Valuation, eval_expr, is_number
from .expectation import DEFAULT_BUDGET, RewardFn
from .logic import embed_reward
from .semantics import State
from .syntax import SKIP, Expr, Formula, format_value

ZERO = Fraction(0)
ONE = Fraction(1)


def _prob(name: str, v) -> Fraction:
    if not is_number(v) or not 0 <= v <= 1:
        raise BoundRangeError(f"{name} = {v!r} is not a probability")
    return Fraction(v)


def conj_bound(p1, p2) -> Fraction:
    """Lower bound for a conjunction from bounds on each conjunct."""
    return max(_prob("p1", p1) + _prob("p2", p2) - 1, ZERO)


def disj_bound(p1, p2) -> Fraction:
    return min(_prob("p1", p1), _prob("p2", p2))


def pchoice_bound(e_val, p1, p2) -> Fraction:
    """Bound for ``s1 [e] s2`` from bounds on the two branches."""
    e = _prob("e", e_val)
    return e * _prob("p1", p1) + (1 - e) * _prob("p2", p2)


def joni_interval(lo_phi, lo_not_phi) -> tuple[Fraction, Fraction]:
    """Range of any fixed policy's probability of ``phi``."""
    lo = _prob("lo_phi", lo_phi)
    hi = 1 - _prob("lo_not_phi", lo_not_phi)
    if lo > hi:
        raise BoundRangeError(f"empty interval [{lo}, {hi}]: inconsistent lower bounds")
    return lo, hi


def truncated_bound(p: Expr, phi: Formula, env: Valuation, budget: int = DEFAULT_BUDGET) -> Fraction:
    """``p`` at ``env`` if ``phi`` holds there, else 0."""
    v = eval_expr(env, p)
    if not is_number(v) or not 0 <= v <= 1:
        raise RewardRangeError(f"expectation {format_value(v)} outside [0,1] at {env}")
    return Fraction(v) * embed_reward(phi, budget)(State(env, SKIP))


def truncate(p: Expr, phi: Formula, budget: int = DEFAULT_BUDGET) -> RewardFn:
    """Reward ``p * [phi]`` evaluated at a state's valuation."""

    def reward(state: State) -> Fraction:
        return truncated_bound(p, phi, state.env, budget)

    return reward
