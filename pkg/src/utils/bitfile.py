"""
Run-length encoded bit files.

Layout:
    magic    b"GMA1"
    version  unsigned LEB128 (currently 1)
    length   unsigned LEB128, number of bits
    body     unsigned LEB128 run lengths, alternating values and starting with the
             run of 0s (which is empty when the first bit is 1)

The raw dump is numpy.packbits output (big-endian bit order, zero padded).
"""
from pathlib import Path

import numpy as np

from src.numeric.prefix import SetPrefix
from src.utils.errors import BitFileError

MAGIC = b"GMA1"
VERSION = 1


def encode_uleb128(value: int) -> bytes:
    if value < 0:
        raise ValueError(f"LEB128 encodes non-negative integers, got {value}")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_uleb128(data: bytes, offset: int) -> tuple[int, int]:
    """(value, next offset)."""
    result, shift = 0, 0
    while True:
        if offset >= len(data):
            raise BitFileError("truncated LEB128 value")
        byte = data[offset]
        offset += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, offset
        shift += 7


def run_lengths(prefix: SetPrefix) -> list[int]:
    """Alternating run lengths starting with the (possibly empty) run of 0s."""
    bits = prefix.bits
    if bits.size == 0:
        return []
    boundaries = np.flatnonzero(np.diff(bits)) + 1
    edges = np.concatenate([[0], boundaries, [bits.size]])
    runs = np.diff(edges).tolist()
    return ([0] + runs) if bits[0] == 1 else runs


def to_bytes(prefix: SetPrefix) -> bytes:
    body = b"".join(encode_uleb128(run) for run in run_lengths(prefix))
    return MAGIC + encode_uleb128(VERSION) + encode_uleb128(prefix.length) + body


def from_bytes(data: bytes) -> SetPrefix:
    if not data.startswith(MAGIC):
        raise BitFileError("missing GMA1 magic")
    version, offset = decode_uleb128(data, len(MAGIC))
    if version != VERSION:
        raise BitFileError(f"unsupported bit file version {version}")
    length, offset = decode_uleb128(data, offset)

    runs: list[int] = []
    covered = 0
    while offset < len(data):
        run, offset = decode_uleb128(data, offset)
        # only the leading run of 0s may be empty
        if run == 0 and runs:
            raise BitFileError(f"empty run at index {len(runs)}")
        covered += run
        if covered > length:
            raise BitFileError(f"runs cover more than the {length} bits the header declares")
        runs.append(run)
    if covered != length:
        raise BitFileError(f"runs cover {covered} bits but the header declares {length}")
    values = np.arange(len(runs), dtype=np.uint8) % 2
    return SetPrefix(np.repeat(values, runs))


def write_bitfile(prefix: SetPrefix, path: Path) -> None:
    path.write_bytes(to_bytes(prefix))


def read_bitfile(path: Path) -> SetPrefix:
    return from_bytes(path.read_bytes())


def write_raw(prefix: SetPrefix, path: Path) -> None:
    path.write_bytes(np.packbits(prefix.bits).tobytes())


def read_raw(path: Path, length: int) -> SetPrefix:
    unpacked = np.unpackbits(np.frombuffer(path.read_bytes(), dtype=np.uint8))
    if unpacked.size < length:
        raise BitFileError(f"raw dump holds {unpacked.size} bits, {length} requested")
    return SetPrefix(unpacked[:length])
