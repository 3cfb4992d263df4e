"""Exact model checking of probabilistic dynamic logic over pGCL programs."""

from importlib.resources import files

from .errors import (
    BoundRangeError,
    DivisionByZero,
    EvalError,
    InnerUnknown,
    ParseError,
    PdlError,
    PolicyError,
    RewardRangeError,
    StepCapExceeded,
    StuckProgram,
    TypeMismatch,
    UnboundVariable,
)
from .evaluate import Valuation, eval_expr, substitute
from .expectation import (
    AlwaysLeft,
    AlwaysRight,
    Bounds,
    ByTable,
    UniformRandom,
    constant,
    expected_value_under_policy,
    min_expectation,
    monte_carlo,
)
from .laws import conj_bound, disj_bound, joni_interval, pchoice_bound, truncate, truncated_bound
from .logic import Status, Verdict, check_valid, embed_reward, satisfies
from .semantics import Action, ActionChoice, State, dump_mdp, is_final, successors
from .syntax import (
    parse_expr,
    parse_formula,
    parse_program,
    parse_valuation,
    format_expr,
    format_formula,
    format_program,
)


def data_file(name: str):
    """Path of a bundled case-study file such as ``monty_hall.pgcl``."""
    return files(__name__) / "data" / name


__all__ = [name for name in dir() if not name.startswith("_") and name != "files"]
