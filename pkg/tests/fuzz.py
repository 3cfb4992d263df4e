"""Seeded generator of small terminating pGCL programs, valuations and formulas.

Programs have at most six statement nodes (sequencing not counted) over at
most three variables, integer constants in -3..6 and choice probabilities
in {1/4, 1/3, 1/2, 2/3}. Modulo only takes a constant modulus and every
loop runs a counter the body never touches, so all programs terminate and
none gets stuck.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from pdlcheck.evaluate import Valuation
from pdlcheck.syntax import (
    And,
    Assign,
    Atf,
    Binary,
    Const,
    Demonic,
    If,
    Not,
    Or,
    ProbChoice,
    SKIP,
    Seq,
    Unary,
    Var,
    While,
    seq,
)

VARS = ("x", "y", "z")
PROBS = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
CONSTS = range(-3, 7)
MAX_STMTS = 6


@dataclass(frozen=True)
class Case:
    program: object
    env: Valuation
    phi: object
    psi: object
    seed: int


class Fuzzer:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.vars = VARS[: self.rng.randint(1, 3)]

    # expressions

    def int_expr(self, depth: int = 2):
        r = self.rng.random()
        if depth == 0 or r < 0.35:
            return Const(self.rng.choice(CONSTS))
        if r < 0.65:
            return Var(self.rng.choice(self.vars))
        if r < 0.75:
            return Binary("%", self.int_expr(depth - 1), Const(self.rng.choice((2, 3))))
        if r < 0.8:
            return Unary("-", self.int_expr(depth - 1))
        op = self.rng.choice(("+", "-", "*"))
        return Binary(op, self.int_expr(depth - 1), self.int_expr(depth - 1))

    def comparison(self):
        op = self.rng.choice(("==", "!=", "<", "<=", ">", ">="))
        return Binary(op, self.int_expr(1), self.int_expr(1))

    def bool_expr(self, depth: int = 2):
        r = self.rng.random()
        if depth == 0 or r < 0.6:
            return self.comparison()
        if r < 0.7:
            return Const(self.rng.random() < 0.5)
        if r < 0.8:
            return Unary("!", self.bool_expr(depth - 1))
        return Binary(self.rng.choice(("&&", "||")), self.bool_expr(depth - 1), self.bool_expr(depth - 1))

    # statements

    def stmt(self, budget: int, protected: frozenset = frozenset()):
        """A statement with at most ``budget`` nodes; returns (stmt, nodes used)."""
        free = [v for v in self.vars if v not in protected]
        r = self.rng.random()
        if budget <= 1 or r < 0.25:
            if not free or self.rng.random() < 0.1:
                return SKIP, 1
            return Assign(self.rng.choice(free), self.int_expr()), 1
        if r < 0.45:
            first, used = self.stmt(budget - 1, protected)
            second, used2 = self.stmt(budget - used, protected)
            return Seq(first, second), used + used2
        if budget >= 3 and r < 0.85:
            left, used = self.stmt(budget - 2, protected)
            right, used2 = self.stmt(budget - 1 - used, protected)
            kind = self.rng.choice(("demonic", "demonic", "prob", "prob", "if"))
            if kind == "demonic":
                return Demonic(left, right), 1 + used + used2
            if kind == "prob":
                return ProbChoice(Const(self.rng.choice(PROBS)), left, right), 1 + used + used2
            return If(self.bool_expr(), left, right), 1 + used + used2
        if budget >= 4 and free:
            # counter := 0; while counter < k { body; counter := counter + 1 }
            v = self.rng.choice(free)
            body, used = self.stmt(budget - 3, protected | {v})
            step = Assign(v, Binary("+", Var(v), Const(1)))
            loop = While(Binary("<", Var(v), Const(self.rng.choice((1, 2)))), Seq(body, step))
            return Seq(Assign(v, Const(0)), loop), 3 + used
        return Assign(free[0], self.int_expr()) if free else SKIP, 1

    def program(self):
        pieces, remaining = [], MAX_STMTS
        while remaining > 0 and (not pieces or self.rng.random() < 0.85):
            s, used = self.stmt(remaining)
            pieces.append(s)
            remaining -= used
        return seq(*pieces)

    # valuations and formulas

    def env(self) -> Valuation:
        return Valuation({v: self.rng.choice(CONSTS) for v in VARS})

    def formula(self, depth: int = 2):
        r = self.rng.random()
        if depth == 0 or r < 0.55:
            # connectives live at formula level so atoms print canonically
            return Atf(self.comparison() if self.rng.random() < 0.9 else Const(self.rng.random() < 0.5))
        if r < 0.7:
            return Not(self.formula(depth - 1))
        if r < 0.85:
            return And(self.formula(depth - 1), self.formula(depth - 1))
        return Or(self.formula(depth - 1), self.formula(depth - 1))


def count_stmts(s) -> int:
    if isinstance(s, Seq):
        return count_stmts(s.first) + count_stmts(s.second)
    if isinstance(s, (Demonic, ProbChoice)):
        return 1 + count_stmts(s.left) + count_stmts(s.right)
    if isinstance(s, If):
        return 1 + count_stmts(s.then) + count_stmts(s.orelse)
    if isinstance(s, While):
        return 1 + count_stmts(s.body)
    return 1


def demonic_free(s) -> bool:
    if isinstance(s, Demonic):
        return False
    if isinstance(s, Seq):
        return demonic_free(s.first) and demonic_free(s.second)
    if isinstance(s, ProbChoice):
        return demonic_free(s.left) and demonic_free(s.right)
    if isinstance(s, If):
        return demonic_free(s.then) and demonic_free(s.orelse)
    if isinstance(s, While):
        return demonic_free(s.body)
    return True


def case(seed: int) -> Case:
    f = Fuzzer(seed)
    return Case(f.program(), f.env(), f.formula(), f.formula(), seed)


def corpus(n: int = 500, base_seed: int = 20260101) -> list[Case]:
    return [case(base_seed + i) for i in range(n)]


def demonic_free_corpus(n: int = 500, base_seed: int = 77000000) -> list[Case]:
    """``n`` cases whose programs contain no demonic choice."""
    out, i = [], 0
    while len(out) < n:
        c = case(base_seed + i)
        i += 1
        if demonic_free(c.program):
            out.append(c)
    return out
