"""Binary codeword files and raw per-block files.

Codeword file: b"EPMD", one version byte, little-endian u32 n, ell, w, then
n*ell symbols of w/8 bytes each, block-major. A block file is just the ell
symbols of one block in the same symbol encoding.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..codec import Codeword
from ..construction import CodeParams
from ..errors import FormatError

MAGIC = b"EPMD"
VERSION = 1
_HEADER = struct.Struct("<4sBIII")


def pack_codeword(cw: Codeword) -> bytes:
    p = cw.params
    header = _HEADER.pack(MAGIC, VERSION, p.n, p.ell, p.spec.w)
    return header + p.spec.to_bytes(cw.blocks.reshape(-1))


def unpack_codeword(data: bytes, params: CodeParams) -> Codeword:
    if len(data) < _HEADER.size:
        raise FormatError("codeword file is truncated")
    magic, version, n, ell, w = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported codeword version {version}")
    if (n, ell, w) != (params.n, params.ell, params.spec.w):
        raise FormatError(f"file holds n={n}, ell={ell}, w={w}; code has "
                          f"n={params.n}, ell={params.ell}, w={params.spec.w}")
    payload = data[_HEADER.size:]
    if len(payload) != n * ell * (w // 8):
        raise FormatError(f"payload is {len(payload)} bytes, expected {n * ell * (w // 8)}")
    return Codeword(params, params.spec.from_bytes(payload))


def write_codeword(path, cw: Codeword) -> None:
    Path(path).write_bytes(pack_codeword(cw))


def read_codeword(path, params: CodeParams) -> Codeword:
    return unpack_codeword(Path(path).read_bytes(), params)


def block_path(directory, i: int) -> Path:
    return Path(directory) / f"block_{i:03d}.bin"


def write_block(path, params: CodeParams, block) -> None:
    Path(path).write_bytes(params.spec.to_bytes(block))


def read_block(path, params: CodeParams) -> np.ndarray:
    data = Path(path).read_bytes()
    expected = params.ell * params.spec.nbytes
    if len(data) != expected:
        raise FormatError(f"{path}: {len(data)} bytes, expected {expected}")
    return params.spec.from_bytes(data)


def message_from_bytes(data: bytes, params: CodeParams) -> np.ndarray:
    expected = params.k * params.ell * params.spec.nbytes
    if len(data) != expected:
        raise FormatError(f"input is {len(data)} bytes; this code takes exactly "
                          f"k*ell*(w/8) = {expected}")
    return params.spec.from_bytes(data)
