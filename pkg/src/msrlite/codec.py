"""Systematic encoding and erasure decoding by solving against P."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .construction import CodeParams, ParityCheckMatrix, build_parity_matrix
from .errors import InconsistentInput, ValidationError
from .linalg import FieldMatrix, left_solver, matmul_array, mat_inv


@dataclass(eq=False)
class Codeword:
    params: CodeParams
    blocks: np.ndarray  # shape (n, ell); block i lives in row i-1

    def __post_init__(self):
        self.blocks = np.array(self.blocks, dtype=np.int64).reshape(self.params.n, self.params.ell)

    def block(self, i: int) -> np.ndarray:
        self.params.block(i)
        return self.blocks[i - 1]

    def flat(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    def message(self) -> np.ndarray:
        """The k*ell systematic symbols."""
        return self.blocks[:self.params.k].reshape(-1).copy()

    def erase(self, erased) -> "Codeword":
        out = self.blocks.copy()
        for i in erased:
            out[i - 1] = 0
        return Codeword(self.params, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codeword):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.blocks, other.blocks)


@dataclass(frozen=True)
class ErasurePattern:
    erased: frozenset[int]

    def __init__(self, erased):
        object.__setattr__(self, "erased", frozenset(erased))

    def check(self, params: CodeParams) -> None:
        if len(self.erased) > params.r:
            raise ValidationError(f"{len(self.erased)} erasures exceed r = {params.r}")
        for i in self.erased:
            params.block(i)


@lru_cache(maxsize=64)
def parity_matrix(params: CodeParams) -> ParityCheckMatrix:
    return build_parity_matrix(params)


def _block_cols(params: CodeParams, blocks) -> np.ndarray:
    ell = params.ell
    if not blocks:
        return np.array([], dtype=int)
    return np.concatenate([np.arange((i - 1) * ell, i * ell) for i in blocks])


@lru_cache(maxsize=64)
def _encoder(params: CodeParams) -> np.ndarray:
    """Map from message symbols to parity symbols, (r*ell) x (k*ell)."""
    P = parity_matrix(params)
    parity = _block_cols(params, range(params.k + 1, params.n + 1))
    data = _block_cols(params, range(1, params.k + 1))
    inv = mat_inv(FieldMatrix(params.spec, P.data[:, parity]))
    return matmul_array(params.spec, inv.data, P.data[:, data])


def encode(params: CodeParams, message) -> Codeword:
    """Blocks 1..k carry the message verbatim, blocks k+1..n are parity."""
    msg = np.asarray(message, dtype=np.int64).reshape(-1)
    if msg.size != params.k * params.ell:
        raise ValidationError(f"message has {msg.size} symbols, expected {params.k * params.ell}")
    if msg.size and (msg.min() < 0 or msg.max() >= params.spec.order):
        raise ValidationError("message symbol outside the field")
    parity = matmul_array(params.spec, _encoder(params), msg)
    return Codeword(params, np.concatenate([msg, parity]))


@lru_cache(maxsize=1024)
def _decoder(params: CodeParams, erased: tuple[int, ...]):
    P = parity_matrix(params)
    known = [i for i in range(1, params.n + 1) if i not in erased]
    t, check = left_solver(FieldMatrix(params.spec, P.data[:, _block_cols(params, erased)]))
    return t, check, P.data[:, _block_cols(params, known)], known


def decode_erasures(params: CodeParams, partial: Codeword, pattern: ErasurePattern) -> Codeword:
    """Fill in the erased blocks of ``partial`` from the survivors.

    Solves P_E x = P_K c_K (signs vanish in characteristic 2). With fewer than
    r erasures the system is overdetermined and the leftover equations must
    hold, otherwise InconsistentInput.
    """
    pattern.check(params)
    if partial.params != params:
        raise ValidationError("codeword belongs to a different code")
    if not pattern.erased:
        return Codeword(params, partial.blocks.copy())
    erased = tuple(sorted(pattern.erased))
    t, check, p_known, known = _decoder(params, erased)
    syndrome = matmul_array(params.spec, p_known, partial.blocks[[i - 1 for i in known]].reshape(-1))
    if check.size and matmul_array(params.spec, check, syndrome).any():
        raise InconsistentInput("surviving blocks do not extend to a codeword")
    solved = matmul_array(params.spec, t, syndrome).reshape(len(erased), params.ell)
    out = partial.blocks.copy()
    out[[i - 1 for i in erased]] = solved
    return Codeword(params, out)


def is_codeword(params: CodeParams, blocks) -> bool:
    P = parity_matrix(params)
    c = np.asarray(blocks, dtype=np.int64).reshape(-1)
    return not matmul_array(params.spec, P.data, c).any()
