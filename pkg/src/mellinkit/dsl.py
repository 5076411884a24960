"""A small expression language for user-supplied f(s) and g(x).

Grammar (lowest precedence first)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?          # right-associative
    primary := NUMBER | IDENT | IDENT '(' [expr (',' expr)*] ')' | '(' expr ')'

Numbers are decimal with optional fraction and exponent; a number directly
followed by ``i`` (or ``j``) is imaginary, so ``2+3i`` is a complex literal.
Constants ``pi``, ``e`` and ``i`` are predefined. ``^`` is the principal-branch
power exp(b log a), with the branch cut of log on the negative real axis.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

from .errors import DomainError, MellinError, ParseError, UnboundVariable
from .numerics import gamma
from .special import alt_hurwitz_eta, euler_L, exp_poly, hermite, hurwitz_zeta

__all__ = [
    "GRAMMAR_VERSION",
    "Token",
    "Literal",
    "Variable",
    "Neg",
    "Binary",
    "Call",
    "BUILTINS",
    "CONSTANTS",
    "tokenize",
    "parse",
    "parse_expr",
    "evaluate",
    "to_source",
    "compile_function",
]

GRAMMAR_VERSION = "1"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?(?:[ij](?![A-Za-z0-9_]))?)
  | (?P<identifier>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_OP_KINDS = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
    ",": "comma",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens; raises ParseError at the first bad character."""
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "op":
            tokens.append(Token(_OP_KINDS[m.group()], m.group(), pos))
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    return tokens


# AST. Positions are carried for error messages but ignored by ==.


@dataclass(frozen=True)
class Literal:
    value: complex
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Variable:
    name: str
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    child: "Expr"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    position: int = field(default=0, compare=False)


Expr = Union[Literal, Variable, Neg, Binary, Call]


def _nonneg_int(v: complex, what: str) -> int:
    if v.imag != 0 or not float(v.real).is_integer() or v.real < 0:
        raise DomainError(f"{what} must be a nonnegative integer, got {v}")
    return int(v.real)


def _infinite(phase: float) -> complex:
    # infinity in direction e^(i phase); exact zeros stay zero so 1/result is 0
    c, s = math.cos(phase), math.sin(phase)
    return complex(math.copysign(math.inf, c) if c else 0.0, math.copysign(math.inf, s) if s else 0.0)


def _exp(z: complex) -> complex:
    try:
        return cmath.exp(z)
    except OverflowError:
        return _infinite(z.imag)


def _cosh(z: complex) -> complex:
    try:
        return cmath.cosh(z)
    except OverflowError:
        return _infinite(math.copysign(z.imag, z.real))


# name -> (arity, implementation on complex arguments). exp and cosh overflow
# to a signed infinity rather than raising, so decaying forms like 1/cosh(x)
# stay usable at the far nodes of half-line quadrature.
BUILTINS: dict[str, tuple[int, Callable[..., complex]]] = {
    "gamma": (1, gamma),
    "sin": (1, cmath.sin),
    "cos": (1, cmath.cos),
    "exp": (1, _exp),
    "log": (1, cmath.log),
    "cosh": (1, _cosh),
    "sqrt": (1, cmath.sqrt),
    "abs": (1, lambda z: complex(abs(z))),
    "re": (1, lambda z: complex(z.real)),
    "im": (1, lambda z: complex(z.imag)),
    "zeta": (2, hurwitz_zeta),
    "eta": (2, alt_hurwitz_eta),
    "L": (1, euler_L),
    "hermite": (2, lambda n, z: hermite(_nonneg_int(n, "hermite degree"), z)),
    "bell": (2, lambda n, z: exp_poly(_nonneg_int(n, "bell index"), z)),
}

CONSTANTS: dict[str, complex] = {"pi": complex(math.pi), "e": complex(math.e), "i": 1j}


class _Parser:
    def __init__(self, tokens: list[Token], length: int):
        self.tokens = tokens
        self.i = 0
        self.end = length

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def here(self) -> int:
        tok = self.peek()
        return tok.position if tok else self.end

    def take(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {kind}, got end of input", self.end)
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, got {tok.text!r}", tok.position)
        self.i += 1
        return tok

    def expr(self) -> Expr:
        left = self.term()
        while (tok := self.peek()) is not None and tok.kind in ("plus", "minus"):
            self.i += 1
            left = Binary(tok.text, left, self.term(), tok.position)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while (tok := self.peek()) is not None and tok.kind in ("star", "slash"):
            self.i += 1
            left = Binary(tok.text, left, self.unary(), tok.position)
        return left

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is not None and tok.kind == "minus":
            self.i += 1
            return Neg(self.unary(), tok.position)
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        tok = self.peek()
        if tok is not None and tok.kind == "caret":
            self.i += 1
            return Binary("^", base, self.unary(), tok.position)
        return base

    def primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        if tok.kind == "number":
            self.i += 1
            return Literal(_number_value(tok.text), tok.position)
        if tok.kind == "identifier":
            self.i += 1
            nxt = self.peek()
            if nxt is not None and nxt.kind == "lparen":
                return self.call(tok)
            return Variable(tok.text, tok.position)
        if tok.kind == "lparen":
            self.i += 1
            inner = self.expr()
            self.take("rparen")
            return inner
        raise ParseError(f"unexpected {tok.text!r}", tok.position)

    def call(self, name: Token) -> Expr:
        if name.text not in BUILTINS:
            raise ParseError(f"unknown function {name.text!r}", name.position)
        self.take("lparen")
        args = []
        if (tok := self.peek()) is not None and tok.kind == "rparen":
            self.i += 1
        else:
            args.append(self.expr())
            while (tok := self.peek()) is not None and tok.kind == "comma":
                self.i += 1
                args.append(self.expr())
            self.take("rparen")
        arity = BUILTINS[name.text][0]
        if len(args) != arity:
            raise ParseError(f"{name.text} takes {arity} argument(s), got {len(args)}", name.position)
        return Call(name.text, tuple(args), name.position)


def _number_value(text: str) -> complex:
    if text[-1] in "ij":
        return complex(0.0, float(text[:-1]))
    return complex(float(text))


def parse(tokens: list[Token], source_length: int | None = None) -> Expr:
    """Build an AST from a token list; ParseError carries the offending column."""
    if source_length is None:
        source_length = tokens[-1].position + len(tokens[-1].text) if tokens else 0
    p = _Parser(tokens, source_length)
    tree = p.expr()
    if (tok := p.peek()) is not None:
        raise ParseError(f"unexpected {tok.text!r}", tok.position)
    return tree


def parse_expr(source: str) -> Expr:
    return parse(tokenize(source), len(source))


def evaluate(ast: Expr, bindings: Mapping[str, complex] | None = None) -> complex:
    """Evaluate ``ast`` in complex arithmetic.

    Errors raised inside builtins or arithmetic are re-raised as MellinError
    subclasses with ``position`` set to the responsible node.
    """
    env = bindings or {}
    return _eval(ast, env)


def _eval(node: Expr, env) -> complex:
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Variable):
        if node.name in env:
            return complex(env[node.name])
        if node.name in CONSTANTS:
            return CONSTANTS[node.name]
        raise UnboundVariable(node.name, node.position)
    if isinstance(node, Neg):
        # 0 - v rather than -v: negation would turn a zero imaginary part into -0.0
        # and move -1 onto the other side of the log branch cut
        return 0j - _eval(node.child, env)
    if isinstance(node, Binary):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        try:
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                return a / b
            return a**b
        except (ZeroDivisionError, OverflowError) as exc:
            raise _located(DomainError(f"{node.op}: {exc}"), node.position) from exc
    args = [_eval(a, env) for a in node.args]
    try:
        return complex(BUILTINS[node.name][1](*args))
    except MellinError as exc:
        if exc.position is None:
            exc.position = node.position
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise _located(DomainError(f"{node.name}: {exc}"), node.position) from exc


def _located(exc: MellinError, position: int) -> MellinError:
    exc.position = position
    return exc


_PRECEDENCE_FREE = (Literal, Variable, Call)


def _literal_source(v: complex) -> str:
    if v.imag == 0:
        return repr(v.real)
    if v.real == 0:
        return repr(v.imag) + "i"
    return f"({v.real!r}+{v.imag!r}i)"


def to_source(node: Expr) -> str:
    """Print ``node`` with every compound subexpression parenthesized."""
    if isinstance(node, Literal):
        return _literal_source(node.value)
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.child)})"
    if isinstance(node, Binary):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    return f"{node.name}({', '.join(to_source(a) for a in node.args)})"


def compile_function(source: str, variable: str) -> Callable[[complex], complex]:
    """Parse ``source`` once and return a one-argument function of ``variable``."""
    tree = parse_expr(source)

    def fn(value) -> complex:
        return _eval(tree, {variable: value})

    fn.__doc__ = f"{variable} -> {source}"
    fn.ast = tree  # type: ignore[attr-defined]
    return fn
