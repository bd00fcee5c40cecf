"""Arithmetic in GF(2^w) for w in {8, 16, 32}.

Scalars are plain ints; bulk work goes through numpy int64 arrays. Fields
with w <= 16 multiply through log/antilog tables, GF(2^32) uses a vectorised
shift-and-reduce.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import InvalidParams, ZeroInverse

DEFAULT_POLYS = {8: 0x11B, 16: 0x1002D, 32: 0x100400007}

# degree-32 polynomials accepted without a trial-division check
# x^32 + x^22 + x^2 + x + 1
WHITELIST_32 = frozenset({0x100400007})


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    w = poly.bit_length() - 1
    if w < 1:
        return False
    for d in range(2, 1 << (w // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


def _prime_factors(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^w) with reduction polynomial ``poly`` (the x^w bit included)."""

    w: int
    poly: int

    def __post_init__(self):
        if self.w not in (8, 16, 32):
            raise InvalidParams(f"unsupported field width w={self.w}")
        if self.poly.bit_length() - 1 != self.w:
            raise InvalidParams(f"poly {self.poly:#x} does not have degree {self.w}")
        if self.w == 32:
            if self.poly not in WHITELIST_32:
                raise InvalidParams(f"degree-32 poly {self.poly:#x} is not whitelisted")
        elif not is_irreducible(self.poly):
            raise InvalidParams(f"poly {self.poly:#x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.w

    @property
    def nbytes(self) -> int:
        return self.w // 8

    @property
    def uses_tables(self) -> bool:
        return self.w <= 16

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    # ---- scalar arithmetic ----

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def _mul_slow(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.w:
                a ^= self.poly
        return r

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.uses_tables:
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return self._mul_slow(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.uses_tables:
            return self._exp_list[(self._log_list[a] * e) % (self.order - 1)]
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self.uses_tables:
            return self._exp_list[(self.order - 1 - self._log_list[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    @cached_property
    def generator(self) -> int:
        """Smallest element of multiplicative order 2^w - 1."""
        m = self.order - 1
        factors = _prime_factors(m)
        for g in range(2, self.order):
            if all(self._pow_slow(g, m // p) != 1 for p in factors):
                return g
        raise AssertionError("no generator found")

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    # ---- tables ----

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q1 = self.order - 1
        g = self.generator
        exp = np.zeros(4 * q1 + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(q1):
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        exp[q1:2 * q1] = exp[:q1]
        # log(0) points into the zero tail, so any product with 0 reads 0
        log[0] = 2 * q1
        return exp, log

    @cached_property
    def _exp_list(self) -> list[int]:
        return self._tables[0].tolist()

    @cached_property
    def _log_list(self) -> list[int]:
        return self._tables[1].tolist()

    # ---- array arithmetic (broadcasting) ----

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.uses_tables:
            exp, log = self._tables
            return exp[log[a] + log[b]]
        return self._clmul_reduce(a, b)

    def _clmul_reduce(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        acc = np.zeros(a.shape, dtype=np.int64)
        for bit in range(self.w):
            acc ^= np.where((b >> bit) & 1, a << bit, 0)
        for bit in range(2 * self.w - 2, self.w - 1, -1):
            acc ^= np.where((acc >> bit) & 1, self.poly << (bit - self.w), 0)
        return acc

    def outer(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return self.mul_array(a[:, None], b[None, :])

    def inv_array(self, a) -> np.ndarray:
        """Elementwise inverse; zeros map to zero."""
        a = np.asarray(a, dtype=np.int64)
        if self.uses_tables:
            exp, log = self._tables
            q1 = self.order - 1
            return np.where(a == 0, 0, exp[(q1 - log[a]) % q1])
        # a^(q-2) by square-and-multiply
        result = np.ones_like(a)
        base = a.copy()
        e = self.order - 2
        while e:
            if e & 1:
                result = self.mul_array(result, base)
            base = self.mul_array(base, base)
            e >>= 1
        return result

    def pow_array(self, a, e: int) -> np.ndarray:
        return np.array([self.pow(int(x), e) for x in np.ravel(a)], dtype=np.int64).reshape(np.shape(a))

    def random_array(self, rng: np.random.Generator, shape, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=shape, dtype=np.int64)

    # ---- serialization ----

    def to_bytes(self, values) -> bytes:
        dtype = {8: "<u1", 16: "<u2", 32: "<u4"}[self.w]
        return np.asarray(values, dtype=np.int64).astype(dtype).tobytes()

    def from_bytes(self, data: bytes) -> np.ndarray:
        dtype = {8: "<u1", 16: "<u2", 32: "<u4"}[self.w]
        if len(data) % self.nbytes:
            raise ValueError(f"{len(data)} bytes is not a whole number of {self.w}-bit symbols")
        return np.frombuffer(data, dtype=dtype).astype(np.int64)


@lru_cache(maxsize=None)
def get_field(w: int = 16, poly: int | None = None) -> FieldSpec:
    if poly is None:
        if w not in DEFAULT_POLYS:
            raise InvalidParams(f"unsupported field width w={w}")
        poly = DEFAULT_POLYS[w]
    return FieldSpec(w, poly)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.order:
            raise ValueError(f"{self.value} is not a symbol of GF(2^{self.spec.w})")

    def _check(self, other: "FieldElement") -> None:
        if other.spec != self.spec:
            raise ValueError("operands come from different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return fe_add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return fe_mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return fe_mul(self, fe_inv(other))

    def __pow__(self, e: int) -> "FieldElement":
        return fe_pow(self, e)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"GF{self.spec.w}({self.value:#x})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.spec, a.value ^ b.value)


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.spec, a.spec.mul(a.value, b.value))


def fe_inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec.inv(a.value))


def fe_pow(a: FieldElement, e: int) -> FieldElement:
    return FieldElement(a.spec, a.spec.pow(a.value, e))
