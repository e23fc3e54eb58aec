"""A small arithmetic expression language over the variables ``t`` and ``y``.

Grammar (whitespace is ignored)::

    expr    = term { ("+" | "-") term }
    term    = unary { ("*" | "/") unary }
    unary   = "-" unary | power
    power   = atom [ "^" unary ]
    atom    = number | "t" | "y" | "pi" | "e" | call | "(" expr ")"
    call    = name "(" expr { "," expr } ")"

``^`` binds tighter than unary minus and is right-associative, so ``-2^2`` is
``-4`` and ``2^3^2`` is ``512``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ExprAst",
    "parse",
    "evaluate",
    "compile_expr",
    "to_source",
    "FUNCTIONS",
    "CONSTANTS",
]


class ParseError(ValueError):
    """Raised for malformed expression text; ``pos`` is a 0-based column."""

    def __init__(self, message: str, pos: int, source: str = "") -> None:
        self.message = message
        self.pos = pos
        self.source = source
        super().__init__(f"{message} at position {pos}")

    def pretty(self) -> str:
        if not self.source:
            return str(self)
        return f"{self}\n  {self.source}\n  {' ' * self.pos}^"


# {{{ ast


@dataclass(frozen=True)
class Num:
    value: float
    #: set for the named constants ``pi`` and ``e`` so they print by name
    name: str | None = None


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: ExprAst


@dataclass(frozen=True)
class BinOp:
    op: str
    left: ExprAst
    right: ExprAst


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple[ExprAst, ...]


ExprAst = Union[Num, Var, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLES = ("t", "y")

# }}}


# {{{ IEEE-754 style primitives
#
# Python's math module raises on domain errors and overflow; the expression
# language instead returns inf/nan so the solver can flag divergence.


def _div(a: float, b: float) -> float:
    try:
        return a / b
    except ZeroDivisionError:
        if a == 0.0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)


def _is_odd_integer(x: float) -> bool:
    return math.isfinite(x) and x == math.floor(x) and math.fmod(x, 2.0) != 0.0


def _pow(a: float, b: float) -> float:
    try:
        return math.pow(a, b)
    except ValueError:
        if a == 0.0 and b < 0.0:
            if _is_odd_integer(b):
                return math.copysign(math.inf, a)
            return math.inf
        return math.nan
    except OverflowError:
        if a < 0.0 and _is_odd_integer(b):
            return -math.inf
        return math.inf


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _log(x: float) -> float:
    if x == 0.0:
        return -math.inf
    if x < 0.0:
        return math.nan
    return math.log(x)


def _sqrt(x: float) -> float:
    return math.nan if x < 0.0 else math.sqrt(x)


def _trig(fn: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        try:
            return fn(x)
        except ValueError:
            return math.nan

    return wrapped


FUNCTIONS: dict[str, tuple[int, Callable[..., float]]] = {
    "exp": (1, _exp),
    "log": (1, _log),
    "sin": (1, _trig(math.sin)),
    "cos": (1, _trig(math.cos)),
    "sqrt": (1, _sqrt),
    "abs": (1, abs),
    "pow": (2, _pow),
}

_BINARY: dict[str, Callable[[float, float], float]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
}

# }}}


# {{{ tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos, source)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


# }}}


# {{{ parser


class _Parser:
    def __init__(self, source: str) -> None:
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.pos, self.source)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> ExprAst:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> ExprAst:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> ExprAst:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> ExprAst:
        base = self.atom()
        if self.accept("^"):
            # the exponent may itself be negated: 2^-1
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> ExprAst:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(float(tok.text))

        if tok.kind == "name":
            self.i += 1
            if tok.text in FUNCTIONS:
                return self.call(tok)
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Num(CONSTANTS[tok.text], tok.text)
            raise self.error(f"unknown identifier {tok.text!r}", tok)

        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node

        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def call(self, name: _Token) -> ExprAst:
        arity, _ = FUNCTIONS[name.text]
        if not (self.tok.kind == "op" and self.tok.text == "("):
            raise self.error(f"function {name.text!r} must be called", name)
        self.i += 1

        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")

        if len(args) != arity:
            raise self.error(
                f"{name.text!r} takes {arity} argument(s), got {len(args)}", name
            )
        return Call(name.text, tuple(args))


def parse(source: str) -> ExprAst:
    """Parse *source* into an expression tree.

    :raises ParseError: on a syntax error, an unknown identifier or a function
        called with the wrong number of arguments.
    """
    return _Parser(source).parse()


# }}}


# {{{ evaluation


@lru_cache(maxsize=256)
def compile_expr(ast: ExprAst) -> Callable[[float, float], float]:
    """Turn *ast* into a closure ``fn(t, y)`` with IEEE-754 semantics."""
    if isinstance(ast, Num):
        value = ast.value
        return lambda t, y: value
    if isinstance(ast, Var):
        if ast.name == "t":
            return lambda t, y: t
        return lambda t, y: y
    if isinstance(ast, Neg):
        inner = compile_expr(ast.operand)
        return lambda t, y: -inner(t, y)
    if isinstance(ast, BinOp):
        op = _BINARY[ast.op]
        left = compile_expr(ast.left)
        right = compile_expr(ast.right)
        return lambda t, y: op(left(t, y), right(t, y))
    if isinstance(ast, Call):
        _, fn = FUNCTIONS[ast.func]
        args = tuple(compile_expr(a) for a in ast.args)
        if len(args) == 1:
            (arg,) = args
            return lambda t, y: fn(arg(t, y))
        return lambda t, y: fn(*(a(t, y) for a in args))

    raise TypeError(f"not an expression node: {ast!r}")


def evaluate(ast: ExprAst, t: float, y: float) -> float:
    """Evaluate *ast* at ``(t, y)``.

    Domain violations never raise: ``log(-1)`` is ``nan``, ``0^-1`` is ``inf``.
    """
    return compile_expr(ast)(float(t), float(y))


# }}}


# {{{ printing


def _format_number(x: float) -> str:
    if math.isinf(x):
        # only reachable from overflowing literals such as 1e999
        return "1e999"
    return repr(x)


def to_source(ast: ExprAst) -> str:
    """Print *ast* fully parenthesized; ``parse(to_source(a)) == a``."""
    if isinstance(ast, Num):
        return ast.name or _format_number(ast.value)
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Neg):
        return f"(-{to_source(ast.operand)})"
    if isinstance(ast, BinOp):
        return f"({to_source(ast.left)} {ast.op} {to_source(ast.right)})"
    if isinstance(ast, Call):
        args = ", ".join(to_source(a) for a in ast.args)
        return f"{ast.func}({args})"

    raise TypeError(f"not an expression node: {ast!r}")


# }}}
