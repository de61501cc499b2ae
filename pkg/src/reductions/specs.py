"""
Parsed reduction and set expressions.

A ReductionSpec is a total function from the naturals to the naturals; a SetSpec is a
total 0/1-valued function, i.e. the characteristic function of a decidable set. Both
compare and hash by their canonical text, so equivalent spellings ("x+1", " x + 1 ")
share partition memo entries.
"""
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import PlainSerializer, PlainValidator

from src.numeric.prefix import SetPrefix
from src.reductions.grammar import Node, Var, parse_expression
from src.utils.errors import SpecParseError

SpecKind = Literal["reduction", "set"]


@dataclass(frozen=True, slots=True)
class ReductionSpec:
    text: str
    root: Node = field(compare=False, repr=False)
    _fn: Callable[[int], int] = field(compare=False, repr=False)

    @classmethod
    def parse(cls, text: str) -> "ReductionSpec":
        root = parse_expression(text)
        return cls(text=str(root), root=root, _fn=root.bind())

    def __call__(self, x: int) -> int:
        return self._fn(x)

    def images(self, start: int, stop: int) -> list[int]:
        """[f(start), ..., f(stop - 1)], evaluated column-wise."""
        if stop <= start:
            return []
        xs = np.arange(start, stop).astype(object)
        return [int(v) for v in self.root.vector(xs)]

    @property
    def is_identity(self) -> bool:
        return isinstance(self.root, Var)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True, slots=True)
class SetSpec:
    text: str
    root: Node = field(compare=False, repr=False)
    _fn: Callable[[int], int] = field(compare=False, repr=False)

    @classmethod
    def parse(cls, text: str) -> "SetSpec":
        """
        Accepts expressions whose static range is within [0, 1]. The range analysis
        bounds each node independently, so some expressions that are 0/1-valued in
        fact, such as x % 2 + (x + 1) % 2, are rejected; rewrite them (here as 1).
        """
        root = parse_expression(text)
        low, high = root.bounds(0, None)
        if high is None or high > 1:
            upper = "unbounded" if high is None else high
            raise SpecParseError(
                f"set expressions must be provably 0/1-valued, static range of {root} is [{low}, {upper}] "
                f"(subexpressions are bounded separately)",
                text,
                0,
            )
        return cls(text=str(root), root=root, _fn=root.bind())

    def __call__(self, x: int) -> int:
        return self._fn(x)

    def contains(self, x: int) -> bool:
        return self._fn(x) == 1

    def segment(self, start: int, stop: int) -> np.ndarray:
        """Writable uint8 array of the characteristic bits on [start, stop)."""
        if stop <= start:
            return np.zeros(0, dtype=np.uint8)
        xs = np.arange(start, stop).astype(object)
        return self.root.vector(xs).astype(np.uint8)

    def prefix(self, length: int) -> SetPrefix:
        """Characteristic bits of the set on [0, length)."""
        return SetPrefix(self.segment(0, length))

    def __str__(self) -> str:
        return self.text


def eval_reduction(f: ReductionSpec, x: int) -> int:
    return f(x)


def parse_specs(text: str, kind: SpecKind = "reduction") -> ReductionSpec | SetSpec:
    """Parses text as a reduction or, with kind="set", as a 0/1-valued set expression."""
    if kind == "set":
        return SetSpec.parse(text)
    return ReductionSpec.parse(text)


def _reduction_input(value: Any) -> ReductionSpec:
    if isinstance(value, ReductionSpec):
        return value
    if not isinstance(value, str):
        raise ValueError(f"reductions are written as expressions, got {type(value).__name__}")
    return ReductionSpec.parse(value)


def _set_input(value: Any) -> SetSpec:
    if isinstance(value, SetSpec):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        value = str(value)
    if not isinstance(value, str):
        raise ValueError(f"sets are written as expressions, got {type(value).__name__}")
    return SetSpec.parse(value)


ReductionField = Annotated[
    ReductionSpec,
    PlainValidator(_reduction_input),
    PlainSerializer(lambda spec: spec.text, return_type=str),
]
SetField = Annotated[
    SetSpec,
    PlainValidator(_set_input),
    PlainSerializer(lambda spec: spec.text, return_type=str),
]
