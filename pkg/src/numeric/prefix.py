"""
Finite initial segments of characteristic functions.

A SetPrefix stores the bits A(0), ..., A(length - 1) of a set A as a read-only
numpy uint8 array. It is immutable and safe to share across threads.
"""
from collections.abc import Iterable
from typing import overload

import numpy as np

from src.utils.errors import PrefixRangeError


class SetPrefix:
    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        values = np.array(bits if isinstance(bits, np.ndarray) else list(bits), dtype=np.int64)
        if values.ndim != 1:
            raise ValueError("a prefix is a one-dimensional bit sequence")
        if values.size and (values.min() < 0 or values.max() > 1):
            raise ValueError("prefix bits must be 0 or 1")
        array = values.astype(np.uint8)
        array.setflags(write=False)
        self._bits = array

    @classmethod
    def _wrap(cls, array: np.ndarray) -> "SetPrefix":
        """Wraps an already validated uint8 array without copying twice."""
        prefix = cls.__new__(cls)
        frozen = np.ascontiguousarray(array, dtype=np.uint8).copy()
        frozen.setflags(write=False)
        prefix._bits = frozen
        return prefix

    @classmethod
    def from_string(cls, text: str) -> "SetPrefix":
        """'1010' -> A(0)=1, A(1)=0, ..."""
        if any(ch not in "01" for ch in text):
            raise ValueError(f"bit strings contain only 0 and 1: {text!r}")
        return cls._wrap(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_positions(cls, positions: Iterable[int], length: int) -> "SetPrefix":
        array = np.zeros(length, dtype=np.uint8)
        members = np.fromiter(positions, dtype=np.int64)
        if members.size:
            if members.min() < 0 or members.max() >= length:
                raise PrefixRangeError(f"positions must lie in [0, {length})")
            array[members] = 1
        return cls._wrap(array)

    @classmethod
    def zeros(cls, length: int) -> "SetPrefix":
        return cls._wrap(np.zeros(length, dtype=np.uint8))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def length(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return self.length

    @overload
    def __getitem__(self, index: int) -> int: ...

    @overload
    def __getitem__(self, index: slice) -> "SetPrefix": ...

    def __getitem__(self, index: int | slice) -> "int | SetPrefix":
        if isinstance(index, slice):
            return SetPrefix._wrap(self._bits[index])
        if not 0 <= index < self.length:
            raise PrefixRangeError(f"position {index} outside prefix of length {self.length}")
        return int(self._bits[index])

    def count(self, start: int = 0, stop: int | None = None) -> int:
        """Number of members in [start, stop)."""
        stop = self.length if stop is None else stop
        if start < 0 or stop > self.length or start > stop:
            raise PrefixRangeError(f"range [{start}, {stop}) outside prefix of length {self.length}")
        return int(np.count_nonzero(self._bits[start:stop]))

    def positions(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self._bits).tolist())

    def complement(self) -> "SetPrefix":
        return SetPrefix._wrap(1 - self._bits)

    def concat(self, *others: "SetPrefix") -> "SetPrefix":
        return SetPrefix._wrap(np.concatenate([self._bits, *(other.bits for other in others)]))

    def to_string(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetPrefix):
            return NotImplemented
        return bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __repr__(self) -> str:
        shown = self[:64].to_string()
        return f"SetPrefix({shown}{'...' if self.length > 64 else ''}, length={self.length})"
