"""Coordinate-expression language: AST, recursive-descent parser, printer.

Grammar (whitespace insensitive)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := number | 's' | func '(' expr ')' | '(' expr ')' | '-' base
    func   := sin | cos | sinh | cosh | exp | sqrt

Numbers accept decimal and scientific notation.  '^' takes a literal
(optionally negative) integer exponent.  Note that per this grammar the
exponent binds to the parsed base, so "-s^2" is (-s)^2.

Expressions are compiled to a flat postfix tape (see :func:`compile_tape`)
which the numeric backends interpret over whole sample grids.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "sqrt")


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    """The curve parameter s."""


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


_NUMBER_START = set("0123456789.")


class _Scanner:
    """Character-level scanner; tracks byte offsets for error reporting."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            raise ParseError(f"expected {ch!r}", self.pos, expected=(ch,))
        self.pos += 1

    def number(self) -> float:
        self.skip_ws()
        start = self.pos
        text = self.text
        n = len(text)
        while self.pos < n and text[self.pos].isdigit():
            self.pos += 1
        if self.pos < n and text[self.pos] == ".":
            self.pos += 1
            while self.pos < n and text[self.pos].isdigit():
                self.pos += 1
        if self.pos < n and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < n and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < n and text[self.pos].isdigit():
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark  # lone 'e' is not part of the number
        lexeme = text[start : self.pos]
        try:
            return float(lexeme)
        except ValueError:
            raise ParseError(f"bad number {lexeme!r}", start, expected=("number",)) from None

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        text = self.text
        while self.pos < len(text) and text[self.pos].isalpha():
            self.pos += 1
        return text[start : self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        text = self.text
        if self.pos < len(text) and text[self.pos] == "-":
            self.pos += 1
        digits0 = self.pos
        while self.pos < len(text) and text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits0:
            raise ParseError("expected integer exponent", start, expected=("integer",))
        return int(text[start : self.pos])


class _Parser:
    def __init__(self, text: str):
        self.sc = _Scanner(text)

    def parse(self) -> Expr:
        node = self.expr()
        self.sc.skip_ws()
        if self.sc.pos != len(self.sc.text):
            raise ParseError(
                f"unexpected {self.sc.text[self.sc.pos]!r}", self.sc.pos,
                expected=("end of input", "+", "-", "*", "/"),
            )
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            ch = self.sc.peek()
            if ch == "+":
                self.sc.take()
                node = Add(node, self.term())
            elif ch == "-":
                self.sc.take()
                node = Sub(node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            ch = self.sc.peek()
            if ch == "*":
                self.sc.take()
                node = Mul(node, self.factor())
            elif ch == "/":
                self.sc.take()
                node = Div(node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        node = self.base()
        if self.sc.peek() == "^":
            self.sc.take()
            node = Pow(node, self.sc.integer())
        return node

    def base(self) -> Expr:
        ch = self.sc.peek()
        if ch == "-":
            self.sc.take()
            return Neg(self.base())
        if ch == "(":
            self.sc.take()
            node = self.expr()
            self.sc.expect(")")
            return node
        if ch in _NUMBER_START:
            return Num(self.sc.number())
        if ch.isalpha():
            name = self.sc.ident()
            if name == "s":
                return Var()
            if name in FUNCTIONS:
                self.sc.expect("(")
                arg = self.expr()
                self.sc.expect(")")
                return Call(name, arg)
            raise ParseError(
                f"unknown identifier {name!r}", self.sc.pos - len(name),
                expected=("s",) + FUNCTIONS,
            )
        raise ParseError(
            "expected a value", self.sc.pos,
            expected=("number", "s", "function", "(", "-"),
        )


def parse_expr(text: str) -> Expr:
    """Parse expression text into an AST; raises ParseError on bad input."""
    return _Parser(text).parse()


def pretty(node: Expr) -> str:
    """Render an AST to text that reparses to an identical tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "s"
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, Add):
        return f"({pretty(node.left)} + {pretty(node.right)})"
    if isinstance(node, Sub):
        return f"({pretty(node.left)} - {pretty(node.right)})"
    if isinstance(node, Mul):
        return f"({pretty(node.left)} * {pretty(node.right)})"
    if isinstance(node, Div):
        return f"({pretty(node.left)} / {pretty(node.right)})"
    if isinstance(node, Pow):
        return f"({pretty(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# Tape opcodes, shared with the numeric backends.
OP_CONST = 0
OP_VAR = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_POW = 7
OP_SIN = 8
OP_COS = 9
OP_SINH = 10
OP_COSH = 11
OP_EXP = 12
OP_SQRT = 13

_FUNC_OPS = {
    "sin": OP_SIN,
    "cos": OP_COS,
    "sinh": OP_SINH,
    "cosh": OP_COSH,
    "exp": OP_EXP,
    "sqrt": OP_SQRT,
}


@dataclass(frozen=True)
class Tape:
    """Postfix program over jets: opcode stream plus literal operands."""

    ops: np.ndarray     # int64
    fargs: np.ndarray   # float64, used by OP_CONST
    iargs: np.ndarray   # int64, used by OP_POW
    max_depth: int


@functools.lru_cache(maxsize=512)
def compile_tape(node: Expr) -> Tape:
    ops: list[int] = []
    fargs: list[float] = []
    iargs: list[int] = []

    def emit(op: int, f: float = 0.0, i: int = 0):
        ops.append(op)
        fargs.append(f)
        iargs.append(i)

    def walk(e: Expr):
        if isinstance(e, Num):
            emit(OP_CONST, f=float(e.value))
        elif isinstance(e, Var):
            emit(OP_VAR)
        elif isinstance(e, Neg):
            walk(e.operand)
            emit(OP_NEG)
        elif isinstance(e, (Add, Sub, Mul, Div)):
            walk(e.left)
            walk(e.right)
            emit({Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL, Div: OP_DIV}[type(e)])
        elif isinstance(e, Pow):
            walk(e.base)
            emit(OP_POW, i=int(e.exponent))
        elif isinstance(e, Call):
            walk(e.arg)
            emit(_FUNC_OPS[e.func])
        else:
            raise TypeError(f"not an expression node: {e!r}")

    walk(node)

    depth = 0
    max_depth = 0
    for op in ops:
        if op in (OP_CONST, OP_VAR):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV):
            depth -= 1
        max_depth = max(max_depth, depth)

    return Tape(
        ops=np.asarray(ops, dtype=np.int64),
        fargs=np.asarray(fargs, dtype=np.float64),
        iargs=np.asarray(iargs, dtype=np.int64),
        max_depth=max_depth,
    )
