"""Parity-check matrices P = H + E^rho for the (n, k, t) code family.

Blocks are numbered 1..n and also addressed as (u, v) in [r] x [s] with
i = (u-1)*s + v. Symbols inside a block are indexed by vectors x in [r]^t
and linearised big-endian: flat = sum_j (x_j - 1) * r^(t-j), 0-based.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import InvalidBlock, InvalidParams
from .field import FieldSpec, get_field
from .linalg import FieldMatrix


class BlockId(NamedTuple):
    u: int
    v: int
    flat: int


class SymbolId(NamedTuple):
    x: tuple[int, ...]
    flat: int


def wrap(l: int, m: int) -> int:
    """l mod m, but landing in 1..m instead of 0..m-1."""
    if l < 1 or m < 1:
        raise ValueError(f"wrap needs positive arguments, got ({l}, {m})")
    rem = l % m
    return m if rem == 0 else rem


def modify_vector(x: tuple[int, ...], v: int, p: int, r: int) -> tuple[int, ...]:
    """Shift coordinate wrap(v, t) of x by p, cyclically inside [r]."""
    a = wrap(v, len(x))
    out = list(x)
    out[a - 1] = wrap(x[a - 1] + p, r)
    return tuple(out)


def symbol_flat(x: tuple[int, ...], r: int) -> int:
    flat = 0
    for xj in x:
        flat = flat * r + (xj - 1)
    return flat


def symbol_vector(flat: int, r: int, t: int) -> tuple[int, ...]:
    out = []
    for _ in range(t):
        flat, digit = divmod(flat, r)
        out.append(digit + 1)
    return tuple(reversed(out))


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    t: int
    lambdas: tuple[int, ...]
    rho: int | None
    spec: FieldSpec = field(default_factory=get_field)

    def __post_init__(self):
        n, k, t = self.n, self.k, self.t
        object.__setattr__(self, "lambdas", tuple(int(x) for x in self.lambdas))
        if not 1 <= k <= n - 1:
            raise InvalidParams(f"need 1 <= k <= n-1, got n={n}, k={k}")
        r = n - k
        if n % r:
            raise InvalidParams(f"r = n-k = {r} does not divide n = {n}")
        if not 1 <= t <= n // r:
            raise InvalidParams(f"need 1 <= t <= s = {n // r}, got t={t}")
        if len(self.lambdas) != n:
            raise InvalidParams(f"expected {n} lambdas, got {len(self.lambdas)}")
        if self.spec.order < n + 1:
            raise InvalidParams(f"GF(2^{self.spec.w}) is too small for n={n}")
        q = self.spec.order
        if any(not 0 <= lam < q for lam in self.lambdas):
            raise InvalidParams("lambda outside the field")
        if self.rho is not None and not 0 <= self.rho < q:
            raise InvalidParams("rho outside the field")

    def validate(self, require_rho: bool = True) -> None:
        """Value-level invariants: distinct nonzero lambdas, nonzero rho."""
        if 0 in self.lambdas:
            raise InvalidParams("lambdas must be nonzero")
        if len(set(self.lambdas)) != self.n:
            raise InvalidParams("lambdas must be pairwise distinct")
        if not require_rho:
            return
        if self.rho is None:
            raise InvalidParams("rho has not been chosen")
        if self.rho == 0:
            raise InvalidParams("rho must be nonzero")

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def s(self) -> int:
        return self.n // self.r

    @property
    def ell(self) -> int:
        return self.r ** self.t

    def with_rho(self, rho: int | None) -> "CodeParams":
        return CodeParams(self.n, self.k, self.t, self.lambdas, rho, self.spec)

    # ---- indexing ----

    def block(self, i: int) -> BlockId:
        if not 1 <= i <= self.n:
            raise InvalidBlock(f"block {i} outside 1..{self.n}")
        u, v = divmod(i - 1, self.s)
        return BlockId(u + 1, v + 1, i)

    def block_at(self, u: int, v: int) -> BlockId:
        if not (1 <= u <= self.r and 1 <= v <= self.s):
            raise InvalidBlock(f"block ({u}, {v}) outside [{self.r}] x [{self.s}]")
        return BlockId(u, v, (u - 1) * self.s + v)

    def symbol(self, flat: int) -> SymbolId:
        if not 0 <= flat < self.ell:
            raise IndexError(f"symbol {flat} outside 0..{self.ell - 1}")
        return SymbolId(symbol_vector(flat, self.r, self.t), flat)

    def symbol_at(self, x) -> SymbolId:
        x = tuple(x)
        if len(x) != self.t or any(not 1 <= xj <= self.r for xj in x):
            raise IndexError(f"{x} is not a vector in [{self.r}]^{self.t}")
        return SymbolId(x, symbol_flat(x, self.r))

    @cached_property
    def symbols(self) -> tuple[SymbolId, ...]:
        vectors = itertools.product(range(1, self.r + 1), repeat=self.t)
        return tuple(SymbolId(x, i) for i, x in enumerate(vectors))

    @cached_property
    def lambda_powers(self) -> tuple[tuple[int, ...], ...]:
        """lambda_powers[p][i-1] = lambda_i ** p for p in 0..r-1."""
        f = self.spec
        return tuple(tuple(f.pow(lam, p) for lam in self.lambdas) for p in range(self.r))


def default_lambdas(n: int, spec: FieldSpec) -> tuple[int, ...]:
    """lambda_i = g^i for the field's smallest generator g."""
    g = spec.generator
    return tuple(spec.pow(g, i) for i in range(1, n + 1))


def make_params(n: int, k: int, t: int = 1, w: int = 16, rho: int | None = None,
                lambdas=None, poly: int | None = None) -> CodeParams:
    spec = get_field(w, poly)
    if k < 1 or k >= n:
        raise InvalidParams(f"need 1 <= k <= n-1, got n={n}, k={k}")
    if lambdas is None:
        lambdas = default_lambdas(n, spec)
    return CodeParams(n, k, t, tuple(lambdas), rho, spec)


# ---- constraint terms ----
# A term is (block, symbol, coefficient) with block in 1..n, symbol 0-based.

def type1_terms(params: CodeParams, x: SymbolId) -> list[tuple[int, int, int]]:
    return [(i, x.flat, 1) for i in range(1, params.n + 1)]


def type2_terms(params: CodeParams, p: int, x: SymbolId,
                rho: int | None = None) -> list[tuple[int, int, int]]:
    """Terms of the Type II constraint for shift p and profile x.

    Part (a) puts lambda_i^p on symbol x of every block; part (b) puts rho on
    symbol modify_vector(x, v, p) of block (x_{wrap(v,t)}, v) for each v.
    """
    if not 1 <= p <= params.r - 1:
        raise ValueError(f"p={p} outside 1..{params.r - 1}")
    rho = params.rho if rho is None else rho
    lam_p = params.lambda_powers[p]
    terms = [(i, x.flat, lam_p[i - 1]) for i in range(1, params.n + 1)]
    t, r, s = params.t, params.r, params.s
    for v in range(1, s + 1):
        u = x.x[wrap(v, t) - 1]
        target = modify_vector(x.x, v, p, r)
        terms.append(((u - 1) * s + v, symbol_flat(target, r), rho))
    return terms


def _row_from_terms(params: CodeParams, terms) -> np.ndarray:
    row = np.zeros(params.n * params.ell, dtype=np.int64)
    for block, sym, coef in terms:
        row[(block - 1) * params.ell + sym] ^= coef
    return row


def type1_row(params: CodeParams, x: SymbolId) -> np.ndarray:
    return _row_from_terms(params, type1_terms(params, x))


def type2_row(params: CodeParams, p: int, x: SymbolId, rho: int | None = None) -> np.ndarray:
    return _row_from_terms(params, type2_terms(params, p, x, rho))


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix(FieldMatrix):
    """An r*ell x n*ell parity-check matrix with its block layout."""

    n: int
    ell: int

    @property
    def r(self) -> int:
        return self.rows // self.ell

    def block_columns(self, i: int) -> np.ndarray:
        return self.data[:, (i - 1) * self.ell:i * self.ell]

    def row_group(self, p: int) -> np.ndarray:
        """Rows of Type I constraints (p = 0) or Type II group p."""
        return self.data[p * self.ell:(p + 1) * self.ell]


def build_parity_matrix(params: CodeParams, rho: int | None = None,
                        check: bool = True) -> ParityCheckMatrix:
    """Assemble P. Rows 0..ell-1 are Type I, then one band of ell rows per p.

    ``rho`` overrides params.rho (``rho=0`` gives the unperturbed H).
    """
    if check:
        params.validate(require_rho=rho is None)
    if rho is None:
        rho = params.rho
    if rho is None:
        raise InvalidParams("rho has not been chosen")
    rows = [type1_row(params, x) for x in params.symbols]
    for p in range(1, params.r):
        rows.extend(type2_row(params, p, x, rho) for x in params.symbols)
    data = np.vstack(rows)
    return ParityCheckMatrix(params.spec, data, params.n, params.ell)


def build_parity_matrix_t1(params: CodeParams, rho: int | None = None,
                           check: bool = True) -> ParityCheckMatrix:
    """Direct builder for t = 1 (ell = r), written out constraint by constraint."""
    if params.t != 1:
        raise InvalidParams("build_parity_matrix_t1 only handles t = 1")
    if check:
        params.validate()
    rho = params.rho if rho is None else rho
    f = params.spec
    n, r, s = params.n, params.r, params.s
    data = np.zeros((r * r, n * r), dtype=np.int64)
    for x in range(1, r + 1):
        for u in range(1, r + 1):
            for v in range(1, s + 1):
                data[x - 1, ((u - 1) * s + v - 1) * r + x - 1] = 1
    for p in range(1, r):
        for x in range(1, r + 1):
            row = p * r + x - 1
            for u in range(1, r + 1):
                for v in range(1, s + 1):
                    i = (u - 1) * s + v
                    data[row, (i - 1) * r + x - 1] ^= f.pow(params.lambdas[i - 1], p)
            for v in range(1, s + 1):
                i = (x - 1) * s + v
                data[row, (i - 1) * r + wrap(x + p, r) - 1] ^= rho
    return ParityCheckMatrix(f, data, n, r)


def split_matrix(params: CodeParams) -> tuple[ParityCheckMatrix, ParityCheckMatrix]:
    """(H, E) with H the rho = 0 matrix and E holding only the rho entries."""
    p = build_parity_matrix(params)
    h = build_parity_matrix(params, rho=0)
    e = ParityCheckMatrix(params.spec, p.data ^ h.data, params.n, params.ell)
    return h, e
