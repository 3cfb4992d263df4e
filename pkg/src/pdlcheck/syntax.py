"""Abstract syntax, parsers and printers for pGCL programs and pDL formulas.

Concrete program grammar (EBNF)::

    program   = stmt { ";" stmt } [ ";" ]
    stmt      = "skip"
              | IDENT ":=" expr
              | "if" expr block [ "else" block ]
              | "while" expr block
              | choice
    choice    = block [ "[" [ expr ] "]" choice ]     (* "[]" demonic, "[e]" probabilistic *)
    block     = "{" program "}"

    expr      = disj [ "=>" expr ]
    disj      = conj { "||" conj }
    conj      = cmp { "&&" cmp }
    cmp       = sum [ ( "==" | "!=" | "<" | "<=" | ">" | ">=" ) sum ]
    sum       = term { ( "+" | "-" ) term }
    term      = unary { ( "*" | "/" | "%" ) unary }
    unary     = ( "!" | "-" ) unary | atom
    atom      = INT | RAT | DECIMAL | "true" | "false" | IDENT | "(" expr ")"

Concrete formula grammar::

    formula   = fdisj [ "->" formula ]
    fdisj     = fconj { "||" fconj }
    fconj     = funary { "&&" funary }
    funary    = "!" funary
              | ( "forall" | "exists" ) IDENT "in" "{" value { "," value } "}" "." formula
              | "[" ( program | "@" PATH ) "]_{" expr "}" funary
              | "(" formula ")"
              | cmp

``INT/INT`` written without blanks is a rational literal; ``0.25`` is an
exact decimal literal. ``#`` starts a comment running to the end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Optional, Union

from .errors import ParseError

Value = Union[bool, int, Fraction]

KEYWORDS = frozenset(
    {"skip", "if", "else", "while", "true", "false", "forall", "exists", "in"}
)
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

ARITH_OPS = ("+", "-", "*", "/", "%")
COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
BOOL_OPS = ("&&", "||", "=>")


def normalize_value(v: Value) -> Value:
    """Canonical form of a value: integral rationals become ints."""
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    raise TypeError(f"not a pGCL value: {v!r}")


def value_key(v: Value) -> tuple:
    # bool is an int subclass in Python; the tag keeps true and 1 apart
    return (isinstance(v, bool), v)


def format_value(v: Value) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return f"{v.numerator}/{v.denominator}"


# --------------------------------------------------------------------------
# expressions


def cached_hash(cls):
    """Memoize ``__hash__`` on an immutable node; trees are hashed often."""
    compute = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = compute(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


class Expr:
    __slots__ = ()


@cached_hash
@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: Value

    def __post_init__(self):
        object.__setattr__(self, "value", normalize_value(self.value))

    def __eq__(self, other):
        return isinstance(other, Const) and value_key(self.value) == value_key(other.value)

    def __hash__(self):
        return hash(("Const", value_key(self.value)))


@cached_hash
@dataclass(frozen=True)
class Var(Expr):
    name: str


@cached_hash
@dataclass(frozen=True)
class Unary(Expr):
    op: str  # "!" or "-"
    operand: Expr


@cached_hash
@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


# --------------------------------------------------------------------------
# statements


class Stmt:
    __slots__ = ()


@cached_hash
@dataclass(frozen=True)
class Skip(Stmt):
    pass


@cached_hash
@dataclass(frozen=True)
class Assign(Stmt):
    target: str
    rhs: Expr


@cached_hash
@dataclass(frozen=True)
class Seq(Stmt):
    first: Stmt
    second: Stmt


@cached_hash
@dataclass(frozen=True)
class Demonic(Stmt):
    left: Stmt
    right: Stmt


@cached_hash
@dataclass(frozen=True)
class ProbChoice(Stmt):
    prob: Expr
    left: Stmt
    right: Stmt


@cached_hash
@dataclass(frozen=True)
class If(Stmt):
    guard: Expr
    then: Stmt
    orelse: Stmt


@cached_hash
@dataclass(frozen=True)
class While(Stmt):
    guard: Expr
    body: Stmt


SKIP = Skip()


def seq(*stmts: Stmt) -> Stmt:
    """Right-associated sequence, as the parser builds it."""
    if not stmts:
        return SKIP
    result = stmts[-1]
    for s in reversed(stmts[:-1]):
        result = Seq(s, result)
    return result


# --------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@cached_hash
@dataclass(frozen=True)
class Atf(Formula):
    expr: Expr


@cached_hash
@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@cached_hash
@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@cached_hash
@dataclass(frozen=True, eq=False)
class Forall(Formula):
    var: str
    domain: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(normalize_value(v) for v in self.domain))

    def _key(self):
        return (self.var, tuple(value_key(v) for v in self.domain), self.body)

    def __eq__(self, other):
        return isinstance(other, Forall) and self._key() == other._key()

    def __hash__(self):
        return hash(("Forall",) + self._key())


@cached_hash
@dataclass(frozen=True)
class PBox(Formula):
    program: Stmt
    bound: Expr
    body: Formula


TRUE = Atf(Const(True))
FALSE = Atf(Const(False))


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Exists(var: str, domain, body: Formula) -> Formula:
    return Not(Forall(var, tuple(domain), Not(body)))


# --------------------------------------------------------------------------
# variable scans


def expr_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return expr_vars(e.operand)
    if isinstance(e, Binary):
        return expr_vars(e.left) | expr_vars(e.right)
    return set()


def program_vars(s: Stmt) -> set[str]:
    """Every variable a program assigns or reads."""
    if isinstance(s, Assign):
        return {s.target} | expr_vars(s.rhs)
    if isinstance(s, (Seq,)):
        return program_vars(s.first) | program_vars(s.second)
    if isinstance(s, Demonic):
        return program_vars(s.left) | program_vars(s.right)
    if isinstance(s, ProbChoice):
        return expr_vars(s.prob) | program_vars(s.left) | program_vars(s.right)
    if isinstance(s, If):
        return expr_vars(s.guard) | program_vars(s.then) | program_vars(s.orelse)
    if isinstance(s, While):
        return expr_vars(s.guard) | program_vars(s.body)
    return set()


def definitely_assigned(s: Stmt) -> set[str]:
    """Variables assigned on every terminating run of ``s``."""
    if isinstance(s, Assign):
        return {s.target}
    if isinstance(s, Seq):
        return definitely_assigned(s.first) | definitely_assigned(s.second)
    if isinstance(s, (Demonic, ProbChoice)):
        return definitely_assigned(s.left) & definitely_assigned(s.right)
    if isinstance(s, If):
        return definitely_assigned(s.then) & definitely_assigned(s.orelse)
    return set()


def read_before_write(s: Stmt) -> set[str]:
    """Conservative set of variables that may be read before being assigned."""
    if isinstance(s, Assign):
        return expr_vars(s.rhs)
    if isinstance(s, Seq):
        return read_before_write(s.first) | (
            read_before_write(s.second) - definitely_assigned(s.first)
        )
    if isinstance(s, Demonic):
        return read_before_write(s.left) | read_before_write(s.right)
    if isinstance(s, ProbChoice):
        return expr_vars(s.prob) | read_before_write(s.left) | read_before_write(s.right)
    if isinstance(s, If):
        return expr_vars(s.guard) | read_before_write(s.then) | read_before_write(s.orelse)
    if isinstance(s, While):
        return expr_vars(s.guard) | read_before_write(s.body)
    return set()


def formula_free_names(phi: Formula, bound: frozenset = frozenset()) -> set[str]:
    """Identifiers of atoms and box bounds not bound by a quantifier."""
    if isinstance(phi, Atf):
        return expr_vars(phi.expr) - bound
    if isinstance(phi, Not):
        return formula_free_names(phi.body, bound)
    if isinstance(phi, And):
        return formula_free_names(phi.left, bound) | formula_free_names(phi.right, bound)
    if isinstance(phi, Forall):
        return formula_free_names(phi.body, bound | {phi.var})
    if isinstance(phi, PBox):
        return (expr_vars(phi.bound) - bound) | formula_free_names(phi.body, bound)
    raise TypeError(phi)


def formula_programs(phi: Formula) -> Iterator[Stmt]:
    if isinstance(phi, (Not,)):
        yield from formula_programs(phi.body)
    elif isinstance(phi, And):
        yield from formula_programs(phi.left)
        yield from formula_programs(phi.right)
    elif isinstance(phi, Forall):
        yield from formula_programs(phi.body)
    elif isinstance(phi, PBox):
        yield phi.program
        yield from formula_programs(phi.body)


# --------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT INT RAT DEC AT EOF, keywords and symbols stand for themselves
    text: str
    line: int
    col: int


_SYMBOLS = sorted(
    [
        "]_{", ":=", "==", "!=", "<=", ">=", "&&", "||", "=>", "->",
        "{", "}", "[", "]", "(", ")", ";", ",", ".",
        "+", "-", "*", "/", "%", "<", ">", "!",
    ],
    key=len,
    reverse=True,
)
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<DEC>\d+\.\d+)"
    r"|(?P<RAT>\d+/\d+)"
    r"|(?P<INT>\d+)"
    r"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<AT>@[^\s\]]*)"
    r"|(?P<sym>" + "|".join(re.escape(s) for s in _SYMBOLS) + ")"
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "sym":
            tokens.append(Token(lexeme, lexeme, line, col))
        elif kind == "IDENT" and lexeme in KEYWORDS:
            tokens.append(Token(lexeme, lexeme, line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


def _literal_value(tok: Token) -> Value:
    if tok.kind == "INT":
        return int(tok.text)
    if tok.kind == "RAT":
        num, den = tok.text.split("/")
        if int(den) == 0:
            raise ParseError("zero denominator in rational literal", tok.line, tok.col)
        return normalize_value(Fraction(int(num), int(den)))
    if tok.kind == "DEC":
        return normalize_value(Fraction(tok.text))
    if tok.kind == "true":
        return True
    if tok.kind == "false":
        return False
    raise AssertionError(tok)


# --------------------------------------------------------------------------
# parser

_NUMERIC = ("INT", "RAT", "DEC")
_EXPR_CONTINUATION = set(COMPARE_OPS) | set(ARITH_OPS)

Resolver = Callable[[str], Stmt]


class _Parser:
    def __init__(self, text: str, resolver: Optional[Resolver] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.resolver = resolver

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, expected) -> ParseError:
        tok = self.tok
        where = "end of input" if tok.kind == "EOF" else repr(tok.text)
        expected = sorted(set(expected))
        return ParseError(
            f"syntax error at {where}; expected one of: {', '.join(expected)}",
            tok.line,
            tok.col,
            expected,
        )

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise self.error([kind])
        return self.advance()

    def ident(self) -> str:
        tok = self.tok
        if tok.kind in KEYWORDS:
            raise ParseError(
                f"reserved word {tok.text!r} used as identifier", tok.line, tok.col, ["IDENT"]
            )
        return self.expect("IDENT").text

    def finish(self):
        if self.tok.kind != "EOF":
            raise self.error(["EOF"])

    # programs

    def program(self) -> Stmt:
        stmts = [self.stmt()]
        while self.tok.kind == ";":
            self.advance()
            if self.tok.kind in ("}", "]_{", "EOF"):
                break
            stmts.append(self.stmt())
        return seq(*stmts)

    def stmt(self) -> Stmt:
        tok = self.tok
        if tok.kind == "skip":
            self.advance()
            return SKIP
        if tok.kind == "if":
            self.advance()
            guard = self.expr()
            then = self.block()
            orelse = SKIP
            if self.tok.kind == "else":
                self.advance()
                orelse = self.block()
            return If(guard, then, orelse)
        if tok.kind == "while":
            self.advance()
            guard = self.expr()
            return While(guard, self.block())
        if tok.kind == "{":
            return self.choice()
        if tok.kind == "IDENT" or tok.kind in KEYWORDS:
            target = self.ident()
            self.expect(":=")
            return Assign(target, self.expr())
        raise self.error(["skip", "if", "while", "{", "IDENT"])

    def block(self) -> Stmt:
        self.expect("{")
        body = self.program()
        self.expect("}")
        return body

    def choice(self) -> Stmt:
        left = self.block()
        if self.tok.kind != "[":
            return left
        self.advance()
        if self.tok.kind == "]":
            self.advance()
            return Demonic(left, self.choice_operand())
        prob = self.expr()
        self.expect("]")
        return ProbChoice(prob, left, self.choice_operand())

    def choice_operand(self) -> Stmt:
        if self.tok.kind != "{":
            raise self.error(["{"])
        return self.choice()

    # expressions

    def expr(self) -> Expr:
        left = self.disj()
        if self.tok.kind == "=>":
            self.advance()
            return Binary("=>", left, self.expr())
        return left

    def disj(self) -> Expr:
        left = self.conj()
        while self.tok.kind == "||":
            self.advance()
            left = Binary("||", left, self.conj())
        return left

    def conj(self) -> Expr:
        left = self.cmp()
        while self.tok.kind == "&&":
            self.advance()
            left = Binary("&&", left, self.cmp())
        return left

    def cmp(self) -> Expr:
        left = self.sum()
        if self.tok.kind in COMPARE_OPS:
            op = self.advance().kind
            return Binary(op, left, self.sum())
        return left

    def sum(self) -> Expr:
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind in ("*", "/", "%"):
            op = self.advance().kind
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "!":
            self.advance()
            return Unary("!", self.unary())
        if self.tok.kind == "-":
            self.advance()
            if self.tok.kind in _NUMERIC:
                # "-3" is a negative literal, "-(3)" a negation
                return Const(-_literal_value(self.advance()))
            return Unary("-", self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind in _NUMERIC or tok.kind in ("true", "false"):
            self.advance()
            return Const(_literal_value(tok))
        if tok.kind == "IDENT":
            self.advance()
            return Var(tok.text)
        if tok.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind in KEYWORDS:
            self.ident()
        raise self.error(["INT", "RAT", "true", "false", "IDENT", "(", "!", "-"])

    # formulas

    def formula(self) -> Formula:
        left = self.fdisj()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def fdisj(self) -> Formula:
        left = self.fconj()
        while self.tok.kind == "||":
            self.advance()
            left = Or(left, self.fconj())
        return left

    def fconj(self) -> Formula:
        left = self.funary()
        while self.tok.kind == "&&":
            self.advance()
            left = And(left, self.funary())
        return left

    def funary(self) -> Formula:
        tok = self.tok
        if tok.kind == "!":
            self.advance()
            return Not(self.funary())
        if tok.kind in ("forall", "exists"):
            self.advance()
            var = self.ident()
            self.expect("in")
            domain = self.domain()
            self.expect(".")
            body = self.formula()
            if tok.kind == "forall":
                return Forall(var, domain, body)
            return Exists(var, domain, body)
        if tok.kind == "[":
            self.advance()
            if self.tok.kind == "AT":
                ref = self.advance()
                if self.resolver is None:
                    raise ParseError(
                        f"program reference {ref.text!r} but no resolver", ref.line, ref.col
                    )
                try:
                    program = self.resolver(ref.text[1:])
                except ParseError as exc:
                    raise ParseError(exc.message, ref.line, ref.col) from exc
            else:
                program = self.program()
            self.expect("]_{")
            bound = self.expr()
            self.expect("}")
            return PBox(program, bound, self.funary())
        if tok.kind == "(":
            # formula parentheses first; fall back to an arithmetic atom
            start = self.pos
            first_error = None
            try:
                self.advance()
                inner = self.formula()
                self.expect(")")
                if self.tok.kind not in _EXPR_CONTINUATION:
                    return inner
            except ParseError as exc:
                first_error = exc
            self.pos = start
            try:
                return Atf(self.cmp())
            except ParseError as exc:
                if first_error is not None and first_error.position > exc.position:
                    raise first_error from None
                raise
        return Atf(self.cmp())

    def domain(self) -> tuple:
        start = self.expect("{")
        values = [self.domain_value()]
        while self.tok.kind == ",":
            self.advance()
            values.append(self.domain_value())
        self.expect("}")
        keys = [value_key(normalize_value(v)) for v in values]
        if len(set(keys)) != len(keys):
            raise ParseError("duplicate value in quantifier domain", start.line, start.col)
        return tuple(values)

    def domain_value(self) -> Value:
        negative = False
        if self.tok.kind == "-":
            self.advance()
            negative = True
            if self.tok.kind not in _NUMERIC:
                raise self.error(_NUMERIC)
        tok = self.tok
        if tok.kind in _NUMERIC or (not negative and tok.kind in ("true", "false")):
            self.advance()
            v = _literal_value(tok)
            return -v if negative else v
        if tok.kind == "}":
            raise ParseError("empty quantifier domain", tok.line, tok.col, ["value"])
        raise self.error(["INT", "RAT", "true", "false"])


def parse_program(text: str) -> Stmt:
    """Parse pGCL source text into a statement tree."""
    p = _Parser(text)
    s = p.program()
    p.finish()
    return s


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    p.finish()
    return e


def file_resolver(base_dir, default: Optional[Stmt] = None) -> Resolver:
    """Resolve ``@path`` references against ``base_dir``.

    A bare ``@`` stands for ``default``; a path without a suffix falls back
    to ``path.pgcl``.
    """
    base = Path(base_dir)

    def resolve(ref: str) -> Stmt:
        if ref == "":
            if default is None:
                raise ParseError("bare '@' used but no default program given", 0, 0)
            return default
        path = base / ref
        if not path.exists() and not path.suffix:
            path = path.with_suffix(".pgcl")
        try:
            return parse_program(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"cannot read program {ref!r}: {exc.strerror}", 0, 0) from exc

    return resolve


def parse_formula(
    text: str,
    *,
    resolver: Optional[Resolver] = None,
    base_dir=None,
    default_program: Optional[Stmt] = None,
    program_vars: Optional[set] = None,
) -> Formula:
    """Parse a pDL formula, desugaring ``||``, ``->`` and ``exists``.

    ``@path`` program references go through ``resolver`` (or a file resolver
    rooted at ``base_dir``). When ``program_vars`` is given, every free
    identifier must be a program variable (declared there or occurring in an
    embedded program); anything else is reported as an unbound logical
    variable.
    """
    if resolver is None and (base_dir is not None or default_program is not None):
        resolver = file_resolver(base_dir if base_dir is not None else ".", default_program)
    p = _Parser(text, resolver)
    phi = p.formula()
    p.finish()
    check_well_formed(phi, program_vars)
    return phi


def check_well_formed(phi: Formula, declared_vars: Optional[set] = None) -> None:
    """Scope checks: no shadowing binders, no logical names inside programs,
    and (given ``declared_vars``) no free logical variables."""
    prog_names: set[str] = set()
    for s in formula_programs(phi):
        prog_names |= program_vars(s)

    def walk(f: Formula, bound: frozenset):
        if isinstance(f, Forall):
            if f.var in bound:
                raise ParseError(f"logical variable {f.var!r} is bound twice", 0, 0)
            if f.var in prog_names or (declared_vars and f.var in declared_vars):
                raise ParseError(
                    f"logical variable {f.var!r} clashes with a program variable", 0, 0
                )
            if not f.domain:
                raise ParseError(f"empty quantifier domain for {f.var!r}", 0, 0)
            walk(f.body, bound | {f.var})
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, And):
            walk(f.left, bound)
            walk(f.right, bound)
        elif isinstance(f, PBox):
            walk(f.body, bound)

    walk(phi, frozenset())
    if declared_vars is not None:
        free = formula_free_names(phi) - prog_names - set(declared_vars)
        if free:
            name = sorted(free)[0]
            raise ParseError(f"unbound logical variable {name!r}", 0, 0)


def parse_valuation(text: str):
    """Parse ``name=value,...`` into a :class:`~pdlcheck.evaluate.Valuation`."""
    from .evaluate import Valuation

    bindings: dict[str, Value] = {}
    if text.strip() == "":
        return Valuation()
    for item in text.split(","):
        name, sep, raw = item.partition("=")
        name, raw = name.strip(), raw.strip()
        if not sep or not IDENT_RE.fullmatch(name) or name in KEYWORDS:
            raise ParseError(f"malformed binding {item.strip()!r}", 0, 0)
        if name in bindings:
            raise ParseError(f"duplicate binding for {name!r}", 0, 0)
        bindings[name] = parse_value(raw)
    return Valuation(bindings)


_VALUE_RE = re.compile(r"-?\d+(/\d+|\.\d+)?")


def parse_value(raw: str) -> Value:
    raw = raw.strip()
    if raw == "true":
        return True
    if raw == "false":
        return False
    if not _VALUE_RE.fullmatch(raw):
        raise ParseError(f"malformed value {raw!r}", 0, 0)
    try:
        return normalize_value(Fraction(raw))
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {raw!r}", 0, 0) from None


# --------------------------------------------------------------------------
# printers


def format_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return format_value(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "!":
            # parenthesised so a formula parser cannot read it as negation
            return f"(!({format_expr(e.operand)}))"
        return f"-({format_expr(e.operand)})"
    if isinstance(e, Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    raise TypeError(e)


def format_program(s: Stmt) -> str:
    if isinstance(s, Skip):
        return "skip"
    if isinstance(s, Assign):
        return f"{s.target} := {format_expr(s.rhs)}"
    if isinstance(s, Seq):
        first = format_program(s.first)
        if isinstance(s.first, Seq):
            first = "{" + first + "}"
        return f"{first}; {format_program(s.second)}"
    if isinstance(s, Demonic):
        return f"{{{format_program(s.left)}}} [] {{{format_program(s.right)}}}"
    if isinstance(s, ProbChoice):
        return (
            f"{{{format_program(s.left)}}} [{format_expr(s.prob)}] "
            f"{{{format_program(s.right)}}}"
        )
    if isinstance(s, If):
        return (
            f"if {format_expr(s.guard)} {{{format_program(s.then)}}} "
            f"else {{{format_program(s.orelse)}}}"
        )
    if isinstance(s, While):
        return f"while {format_expr(s.guard)} {{{format_program(s.body)}}}"
    raise TypeError(s)


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Atf):
        return f"({format_expr(phi.expr)})"
    if isinstance(phi, Not):
        return f"!({format_formula(phi.body)})"
    if isinstance(phi, And):
        return f"({format_formula(phi.left)} && {format_formula(phi.right)})"
    if isinstance(phi, Forall):
        dom = ", ".join(format_value(v) for v in phi.domain)
        return f"(forall {phi.var} in {{{dom}}}. {format_formula(phi.body)})"
    if isinstance(phi, PBox):
        return (
            # every printed formula is already a unary-level phrase
            f"[{format_program(phi.program)}]_{{{format_expr(phi.bound)}}} "
            f"{format_formula(phi.body)}"
        )
    raise TypeError(phi)
