"""Minimal expected final-state reward of a program state.

The engine is a memoized depth-first Bellman recursion over the reachable
state graph. Final states are worth their reward; a non-final state is
worth the minimum over its actions of the probability-weighted successor
values. Two situations stop the descent: the expansion budget runs out, or
a state reappears on the current recursion path. The stopped state is then
bracketed by the whole reward range [0, 1].

Soundness of the bracketing: the exact value of every state lies in [0, 1],
and each combination step (convex sums, minimum over actions) is monotone
in every argument, so combining valid lower bounds yields a valid lower
bound and combining valid upper bounds yields a valid upper bound. Every
memo entry is therefore an interval containing the true value, whatever
brackets were used below it. When no bracket is used the recursion ranges
over a finite acyclic graph and both bounds equal the exact infimum.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import PolicyError, RewardRangeError, StepCapExceeded
from .semantics import Action, ActionChoice, State, is_final, successors

RewardFn = Callable[[State], Fraction]

DEFAULT_BUDGET = 1_000_000
ZERO = Fraction(0)
ONE = Fraction(1)


def constant(c) -> RewardFn:
    c = Fraction(c)

    def reward(state: State) -> Fraction:
        return c

    return reward


@dataclass(frozen=True)
class Bounds:
    lo: Fraction
    hi: Fraction
    exact: bool
    steps_used: int = 0
    truncated_states: int = 0


# --------------------------------------------------------------------------
# policies


class Policy:
    """Resolves demonic choices; ``weights`` gives each action's share."""

    def weights(self, state: State, choices: list[ActionChoice]) -> list[tuple[Fraction, ActionChoice]]:
        raise NotImplementedError

    def pick(self, state: State, choices: list[ActionChoice], rng: random.Random) -> ActionChoice:
        return self.weights(state, choices)[0][1]


def _by_label(choices, label: Action) -> ActionChoice:
    for c in choices:
        if c.label is label:
            return c
    raise PolicyError(f"no {label.value} action available")


class AlwaysLeft(Policy):
    def weights(self, state, choices):
        if len(choices) == 1:
            return [(ONE, choices[0])]
        return [(ONE, _by_label(choices, Action.LEFT))]

    def __repr__(self):
        return "AlwaysLeft()"


class AlwaysRight(Policy):
    def weights(self, state, choices):
        if len(choices) == 1:
            return [(ONE, choices[0])]
        return [(ONE, _by_label(choices, Action.RIGHT))]

    def __repr__(self):
        return "AlwaysRight()"


@dataclass(frozen=True)
class UniformRandom(Policy):
    """Each demonic branch with probability 1/2.

    Exact evaluation averages the branches; sampling flips a coin drawn
    from the trial's private stream.
    """

    seed: int = 0

    def weights(self, state, choices):
        if len(choices) == 1:
            return [(ONE, choices[0])]
        share = Fraction(1, len(choices))
        return [(share, c) for c in choices]

    def pick(self, state, choices, rng):
        if len(choices) == 1:
            return choices[0]
        return choices[rng.randrange(len(choices))]


@dataclass(frozen=True)
class ByTable(Policy):
    """Positional policy given as a table from demonic states to actions."""

    table: dict = field(hash=False)

    def weights(self, state, choices):
        if len(choices) == 1:
            return [(ONE, choices[0])]
        try:
            label = self.table[state]
        except KeyError:
            raise PolicyError(f"policy table has no entry for demonic state {state}") from None
        return [(ONE, _by_label(choices, label))]


# --------------------------------------------------------------------------
# engine


def _check_reward(reward: RewardFn, state: State) -> Fraction:
    v = reward(state)
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise RewardRangeError(f"reward {v!r} at {state} is not an exact number")
    if not 0 <= v <= 1:
        raise RewardRangeError(f"reward {v} at {state} outside [0,1]")
    return Fraction(v)


class _Frame:
    __slots__ = ("state", "groups", "targets", "index", "values")

    def __init__(self, state, groups, targets):
        self.state = state
        self.groups = groups  # list of (weight or None, ActionChoice)
        self.targets = targets
        self.index = 0
        self.values = {}


def _solve(start: State, reward: RewardFn, budget: int, policy: Optional[Policy]) -> Bounds:
    if budget < 1:
        raise ValueError("budget must be positive")
    memo: dict[State, tuple[Fraction, Fraction]] = {}
    on_path: set[State] = set()
    steps = 0
    truncated = 0

    def settled(state: State):
        """Value of ``state`` if known without expanding it, else None."""
        nonlocal truncated
        hit = memo.get(state)
        if hit is not None:
            return hit
        if is_final(state):
            v = _check_reward(reward, state)
            memo[state] = (v, v)
            return memo[state]
        if state in on_path or steps >= budget:
            truncated += 1
            return (ZERO, ONE)
        return None

    def open_frame(state: State) -> _Frame:
        nonlocal steps
        steps += 1
        choices = successors(state)
        if policy is None:
            groups = [(None, c) for c in choices]
        else:
            groups = policy.weights(state, choices)
        targets = []
        seen = set()
        for _, c in groups:
            for _, nxt in c.distribution:
                if nxt not in seen:
                    seen.add(nxt)
                    targets.append(nxt)
        on_path.add(state)
        return _Frame(state, groups, targets)

    def close_frame(frame: _Frame) -> tuple[Fraction, Fraction]:
        vals = frame.values
        per_action = []
        for _, c in frame.groups:
            lo = sum((p * vals[n][0] for p, n in c.distribution), ZERO)
            hi = sum((p * vals[n][1] for p, n in c.distribution), ZERO)
            per_action.append((lo, hi))
        if policy is None:
            result = (min(v[0] for v in per_action), min(v[1] for v in per_action))
        else:
            result = (
                sum((w * v[0] for (w, _), v in zip(frame.groups, per_action)), ZERO),
                sum((w * v[1] for (w, _), v in zip(frame.groups, per_action)), ZERO),
            )
        on_path.discard(frame.state)
        memo[frame.state] = result
        return result

    value = settled(start)
    if value is None:
        stack = [open_frame(start)]
        while stack:
            frame = stack[-1]
            pushed = False
            while frame.index < len(frame.targets):
                t = frame.targets[frame.index]
                v = settled(t)
                if v is None:
                    stack.append(open_frame(t))
                    pushed = True
                    break
                frame.values[t] = v
                frame.index += 1
            if pushed:
                continue
            result = close_frame(frame)
            stack.pop()
            if stack:
                parent = stack[-1]
                parent.values[frame.state] = result
                parent.index += 1
            else:
                value = result
    lo, hi = value
    return Bounds(lo, hi, truncated == 0, steps, truncated)


def min_expectation(start: State, reward: RewardFn, budget: int = DEFAULT_BUDGET) -> Bounds:
    """Bracket the infimum over policies of the expected final reward from ``start``."""
    return _solve(start, reward, budget, None)


def expected_value_under_policy(
    start: State, reward: RewardFn, policy: Policy, budget: int = DEFAULT_BUDGET
) -> Bounds:
    """Expected final reward when ``policy`` resolves every demonic choice."""
    return _solve(start, reward, budget, policy)


# --------------------------------------------------------------------------
# sampling


def _trial_rng(seed, trial: int, stream: str) -> random.Random:
    # str seeds are hashed deterministically; each trial owns its stream
    return random.Random(f"{seed}/{trial}/{stream}")


def _sample_next(distribution, rng: random.Random) -> State:
    if len(distribution) == 1:
        return distribution[0][1]
    den = math.lcm(*(p.denominator for p, _ in distribution))
    u = rng.randrange(den)
    acc = 0
    for p, nxt in distribution:
        acc += p.numerator * (den // p.denominator)
        if u < acc:
            return nxt
    return distribution[-1][1]


def sample_final(start: State, policy: Policy, rng: random.Random, policy_rng: random.Random, cap: int):
    state = start
    steps = 0
    while not is_final(state):
        if steps >= cap:
            return None
        choices = successors(state)
        choice = choices[0] if len(choices) == 1 else policy.pick(state, choices, policy_rng)
        state = _sample_next(choice.distribution, rng)
        steps += 1
    return state


def monte_carlo(
    start: State,
    reward: RewardFn,
    policy: Policy,
    trials: int,
    seed: int = 0,
    step_cap: int = 100_000,
) -> tuple[float, float]:
    """Sample mean of the final reward and its standard error.

    Probabilistic branches are drawn with their exact probabilities. Trial
    ``i`` depends only on ``(seed, i)``, so results do not depend on the
    order in which trials run.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    policy_seed = getattr(policy, "seed", 0)
    samples = []
    for i in range(trials):
        final = sample_final(
            start,
            policy,
            _trial_rng(seed, i, "prob"),
            _trial_rng(f"{seed}:{policy_seed}", i, "policy"),
            step_cap,
        )
        if final is None:
            raise StepCapExceeded(i, step_cap)
        samples.append(float(_check_reward(reward, final)))
    mean = math.fsum(samples) / trials
    if trials == 1:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in samples) / (trials - 1)
    return mean, math.sqrt(var / trials)
