"""
Expression grammar for total reductions and decidable sets.

    spec    := table | expr
    table   := "[" nat ("," nat)* "]" "then" expr
    expr    := term ("+" term)*
    term    := factor ("*" factor | "/" nat+ | "%" nat+)*
    factor  := "x" | nat | "(" expr ")"
             | "min(" expr "," expr ")" | "max(" expr "," expr ")"
             | "compose(" expr ";" expr ")"

compose(f; g) is f after g. Every construct is total on the naturals, so a parsed
expression evaluates everywhere; malformed text is rejected at parse time with the
character position of the offending token.
"""
from collections.abc import Callable
from dataclasses import dataclass
import re
from typing import Protocol

import numpy as np

from src.utils.errors import SpecParseError

Bounds = tuple[int, int | None]  # (low, high); high None means unbounded

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")
_KEYWORDS = {"x", "min", "max", "compose", "then"}


class Node(Protocol):
    def bind(self) -> Callable[[int], int]: ...

    def vector(self, xs: np.ndarray) -> np.ndarray: ...

    def bounds(self, lo: int, hi: int | None) -> Bounds: ...


def _upper_max(a: int | None, b: int | None) -> int | None:
    return None if a is None or b is None else max(a, b)


def _upper_min(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, slots=True)
class Var:
    def bind(self) -> Callable[[int], int]:
        return lambda x: x

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return xs

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        return lo, hi

    def __str__(self) -> str:
        return "x"


@dataclass(frozen=True, slots=True)
class Const:
    value: int

    def bind(self) -> Callable[[int], int]:
        value = self.value
        return lambda x: value

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return np.full(xs.shape, self.value, dtype=object)

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        return self.value, self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Add:
    left: Node
    right: Node

    def bind(self) -> Callable[[int], int]:
        f, g = self.left.bind(), self.right.bind()
        return lambda x: f(x) + g(x)

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return self.left.vector(xs) + self.right.vector(xs)

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        (a_lo, a_hi), (b_lo, b_hi) = self.left.bounds(lo, hi), self.right.bounds(lo, hi)
        return a_lo + b_lo, None if a_hi is None or b_hi is None else a_hi + b_hi

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, slots=True)
class Mul:
    left: Node
    right: Node

    def bind(self) -> Callable[[int], int]:
        f, g = self.left.bind(), self.right.bind()
        return lambda x: f(x) * g(x)

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return self.left.vector(xs) * self.right.vector(xs)

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        (a_lo, a_hi), (b_lo, b_hi) = self.left.bounds(lo, hi), self.right.bounds(lo, hi)
        if a_hi == 0 or b_hi == 0:
            return 0, 0
        return a_lo * b_lo, None if a_hi is None or b_hi is None else a_hi * b_hi

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True, slots=True)
class FloorDiv:
    operand: Node
    divisor: int

    def bind(self) -> Callable[[int], int]:
        f, d = self.operand.bind(), self.divisor
        return lambda x: f(x) // d

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return self.operand.vector(xs) // self.divisor

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        a_lo, a_hi = self.operand.bounds(lo, hi)
        return a_lo // self.divisor, None if a_hi is None else a_hi // self.divisor

    def __str__(self) -> str:
        return f"({self.operand} / {self.divisor})"


@dataclass(frozen=True, slots=True)
class Mod:
    operand: Node
    modulus: int

    def bind(self) -> Callable[[int], int]:
        f, m = self.operand.bind(), self.modulus
        return lambda x: f(x) % m

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return self.operand.vector(xs) % self.modulus

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        a_lo, a_hi = self.operand.bounds(lo, hi)
        if a_hi is not None and a_hi < self.modulus:
            return a_lo, a_hi
        return 0, self.modulus - 1

    def __str__(self) -> str:
        return f"({self.operand} % {self.modulus})"


@dataclass(frozen=True, slots=True)
class Min:
    left: Node
    right: Node

    def bind(self) -> Callable[[int], int]:
        f, g = self.left.bind(), self.right.bind()
        return lambda x: min(f(x), g(x))

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return np.minimum(self.left.vector(xs), self.right.vector(xs))

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        (a_lo, a_hi), (b_lo, b_hi) = self.left.bounds(lo, hi), self.right.bounds(lo, hi)
        return min(a_lo, b_lo), _upper_min(a_hi, b_hi)

    def __str__(self) -> str:
        return f"min({self.left}, {self.right})"


@dataclass(frozen=True, slots=True)
class Max:
    left: Node
    right: Node

    def bind(self) -> Callable[[int], int]:
        f, g = self.left.bind(), self.right.bind()
        return lambda x: max(f(x), g(x))

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return np.maximum(self.left.vector(xs), self.right.vector(xs))

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        (a_lo, a_hi), (b_lo, b_hi) = self.left.bounds(lo, hi), self.right.bounds(lo, hi)
        return max(a_lo, b_lo), _upper_max(a_hi, b_hi)

    def __str__(self) -> str:
        return f"max({self.left}, {self.right})"


@dataclass(frozen=True, slots=True)
class Compose:
    outer: Node
    inner: Node

    def bind(self) -> Callable[[int], int]:
        f, g = self.outer.bind(), self.inner.bind()
        return lambda x: f(g(x))

    def vector(self, xs: np.ndarray) -> np.ndarray:
        return self.outer.vector(self.inner.vector(xs))

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        return self.outer.bounds(*self.inner.bounds(lo, hi))

    def __str__(self) -> str:
        return f"compose({self.outer}; {self.inner})"


@dataclass(frozen=True, slots=True)
class Table:
    values: tuple[int, ...]
    tail: Node

    def bind(self) -> Callable[[int], int]:
        values, size, g = self.values, len(self.values), self.tail.bind()
        return lambda x: values[x] if x < size else g(x)

    def vector(self, xs: np.ndarray) -> np.ndarray:
        size = len(self.values)
        table = np.array(self.values, dtype=object)
        head = table[np.minimum(xs, size - 1).astype(np.int64)]
        return np.where(xs < size, head, self.tail.vector(xs))

    def bounds(self, lo: int, hi: int | None) -> Bounds:
        size = len(self.values)
        parts: list[Bounds] = []
        if lo < size:
            last = size - 1 if hi is None else min(hi, size - 1)
            seen = self.values[lo:last + 1]
            parts.append((min(seen), max(seen)))
        if hi is None or hi >= size:
            parts.append(self.tail.bounds(max(lo, size), hi))
        low = min(part[0] for part in parts)
        high: int | None = parts[0][1]
        for part in parts[1:]:
            high = _upper_max(high, part[1])
        return low, high

    def __str__(self) -> str:
        return f"[{', '.join(map(str, self.values))}] then {self.tail}"


class _Parser:
    """Recursive descent over the token list; one instance per parse."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            match = _TOKEN.match(text, position)
            if match is None or match.end() == position:
                break
            number, word, symbol = match.groups()
            start = match.start(match.lastindex or 0)
            if number is not None:
                self.tokens.append(("nat", number, start))
            elif word is not None:
                if word not in _KEYWORDS:
                    raise SpecParseError(f"unknown identifier {word!r}", text, start)
                self.tokens.append((word, word, start))
            elif symbol is not None:
                if symbol not in "+*/%(),;[]":
                    raise SpecParseError(f"unknown operator {symbol!r}", text, start)
                self.tokens.append((symbol, symbol, start))
            position = match.end()
        self.index = 0

    def _peek(self) -> str | None:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        return self.tokens[self.index][2] if self.index < len(self.tokens) else len(self.text)

    def _expect(self, kind: str) -> tuple[str, str, int]:
        if self._peek() != kind:
            found = "end of input" if self._peek() is None else repr(self.tokens[self.index][1])
            raise SpecParseError(f"expected {kind!r}, found {found}", self.text, self._position())
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _positive_literal(self, role: str) -> int:
        if self._peek() != "nat":
            raise SpecParseError(f"{role} must be a positive integer literal", self.text, self._position())
        _, digits, start = self._expect("nat")
        value = int(digits)
        if value == 0:
            raise SpecParseError(f"{role} must be positive", self.text, start)
        return value

    def parse(self) -> Node:
        if not self.tokens:
            raise SpecParseError("empty expression", self.text, 0)
        node = self._table() if self._peek() == "[" else self._expr()
        if self._peek() is not None:
            raise SpecParseError(f"unexpected {self.tokens[self.index][1]!r}", self.text, self._position())
        return node

    def _table(self) -> Node:
        self._expect("[")
        values = [int(self._expect("nat")[1])]
        while self._peek() == ",":
            self.index += 1
            values.append(int(self._expect("nat")[1]))
        self._expect("]")
        self._expect("then")
        return Table(tuple(values), self._expr())

    def _expr(self) -> Node:
        node = self._term()
        while self._peek() == "+":
            self.index += 1
            node = Add(node, self._term())
        return node

    def _term(self) -> Node:
        node = self._factor()
        while self._peek() in ("*", "/", "%"):
            operator = self._expect(self._peek() or "")[0]
            if operator == "*":
                node = Mul(node, self._factor())
            elif operator == "/":
                node = FloorDiv(node, self._positive_literal("divisor"))
            else:
                node = Mod(node, self._positive_literal("modulus"))
        return node

    def _factor(self) -> Node:
        kind = self._peek()
        if kind == "x":
            self.index += 1
            return Var()
        if kind == "nat":
            return Const(int(self._expect("nat")[1]))
        if kind == "(":
            self.index += 1
            node = self._expr()
            self._expect(")")
            return node
        if kind in ("min", "max", "compose"):
            self.index += 1
            self._expect("(")
            first = self._expr()
            self._expect(";" if kind == "compose" else ",")
            second = self._expr()
            self._expect(")")
            if kind == "min":
                return Min(first, second)
            if kind == "max":
                return Max(first, second)
            return Compose(first, second)
        found = "end of input" if kind is None else repr(self.tokens[self.index][1])
        raise SpecParseError(f"expected an expression, found {found}", self.text, self._position())


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()
