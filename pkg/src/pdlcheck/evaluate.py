"""Exact expression evaluation and substitution of logical variables."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction

from .errors import DivisionByZero, TypeMismatch, UnboundVariable
from .syntax import (
    And,
    Atf,
    Binary,
    Const,
    Expr,
    Forall,
    Formula,
    Not,
    PBox,
    Unary,
    Value,
    Var,
    format_value,
    normalize_value,
    value_key,
)


class Valuation(Mapping):
    """Immutable finite map from variable names to values.

    Equality and hashing distinguish ``true`` from ``1`` but identify
    ``2`` with ``4/2``.
    """

    __slots__ = ("_data", "_key", "_hash")

    def __init__(self, bindings=None):
        data = {}
        if bindings:
            for name, v in dict(bindings).items():
                data[name] = normalize_value(v)
        self._data = data
        self._key = tuple(sorted((n, value_key(v)) for n, v in data.items()))
        self._hash = hash(self._key)

    def __getitem__(self, name):
        return self._data[name]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self._key == other._key
        return NotImplemented

    def __hash__(self):
        return self._hash

    def lookup(self, name: str) -> Value:
        try:
            return self._data[name]
        except KeyError:
            raise UnboundVariable(name) from None

    def bind(self, name: str, value: Value) -> Valuation:
        data = dict(self._data)
        data[name] = value
        return Valuation(data)

    def __repr__(self):
        return "{" + ", ".join(f"{n}={format_value(v)}" for n, v in sorted(self._data.items())) + "}"

    __str__ = __repr__


def is_number(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _num(v, op):
    if not is_number(v):
        raise TypeMismatch(f"operator {op!r} expects a number, got {format_value(v)}")
    return v


def _bool(v, op):
    if not isinstance(v, bool):
        raise TypeMismatch(f"operator {op!r} expects a boolean, got {format_value(v)}")
    return v


def eval_expr(env: Mapping, e: Expr) -> Value:
    """Evaluate ``e`` exactly; ``/`` is rational division, ``%`` integer modulo."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        if isinstance(env, Valuation):
            return env.lookup(e.name)
        if e.name not in env:
            raise UnboundVariable(e.name)
        return env[e.name]
    if isinstance(e, Unary):
        v = eval_expr(env, e.operand)
        if e.op == "!":
            return not _bool(v, "!")
        return -_num(v, "-")
    if isinstance(e, Binary):
        op = e.op
        if op in ("&&", "||", "=>"):
            a = _bool(eval_expr(env, e.left), op)
            if op == "&&" and not a:
                return False
            if op == "||" and a:
                return True
            if op == "=>" and not a:
                return True
            return _bool(eval_expr(env, e.right), op)
        a = eval_expr(env, e.left)
        b = eval_expr(env, e.right)
        if op in ("==", "!="):
            if isinstance(a, bool) != isinstance(b, bool):
                raise TypeMismatch(f"cannot compare {format_value(a)} with {format_value(b)}")
            return (a == b) == (op == "==")
        a, b = _num(a, op), _num(b, op)
        if op == "+":
            return normalize_value(a + b)
        if op == "-":
            return normalize_value(a - b)
        if op == "*":
            return normalize_value(a * b)
        if op == "/":
            if b == 0:
                raise DivisionByZero("division by zero")
            return normalize_value(Fraction(a) / b)
        if op == "%":
            if not (isinstance(a, int) and isinstance(b, int)):
                raise TypeMismatch("operator '%' expects integers")
            if b == 0:
                raise DivisionByZero("modulo by zero")
            return a % b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise TypeMismatch(f"unknown operator {op!r}")
    raise TypeError(f"not an expression: {e!r}")


def substitute_expr(e: Expr, name: str, v: Value) -> Expr:
    if isinstance(e, Var):
        return Const(v) if e.name == name else e
    if isinstance(e, Unary):
        return Unary(e.op, substitute_expr(e.operand, name, v))
    if isinstance(e, Binary):
        return Binary(e.op, substitute_expr(e.left, name, v), substitute_expr(e.right, name, v))
    return e


def substitute(phi: Formula, name: str, v: Value) -> Formula:
    """Replace free occurrences of logical variable ``name`` by the constant ``v``.

    Programs inside p-boxes are left untouched: they cannot mention logical
    variables, so only the bound and the body of a box are rewritten.
    """
    if isinstance(phi, Atf):
        return Atf(substitute_expr(phi.expr, name, v))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, name, v))
    if isinstance(phi, And):
        return And(substitute(phi.left, name, v), substitute(phi.right, name, v))
    if isinstance(phi, Forall):
        if phi.var == name:
            return phi
        return Forall(phi.var, phi.domain, substitute(phi.body, name, v))
    if isinstance(phi, PBox):
        return PBox(phi.program, substitute_expr(phi.bound, name, v), substitute(phi.body, name, v))
    raise TypeError(f"not a formula: {phi!r}")
