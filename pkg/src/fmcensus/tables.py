"""Vectorised arithmetic on whole arrays of field elements.

Elements are encoded as integer codes ``sum(c_i * p**i)`` (see
:meth:`FieldContext.code`).  Multiplication goes through discrete log/exp
tables built from a primitive element, addition through Zech logarithms
(a + b = a * (1 + b/a)).  This is what makes exhaustive point scans over
fields of ~10^6 elements feasible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import FieldContext, FieldElement, prime_factors

# Largest field for which tables (and therefore exhaustive scans) are built.
SCAN_LIMIT = 1_000_000


def primitive_element(ctx: FieldContext) -> FieldElement:
    order = ctx.size - 1
    ells = prime_factors(order)
    for a in ctx.elements():
        if a and all(a ** (order // ell) != ctx.one for ell in ells):
            return a
    raise AssertionError("field has no primitive element")  # pragma: no cover


def _mult_matrix(c: FieldElement) -> np.ndarray:
    """Matrix of multiplication by ``c`` acting on row coefficient vectors."""
    ctx = c.ctx
    rows = []
    basis = ctx.one
    x = ctx([0, 1]) if ctx.k > 1 else ctx.one
    for _ in range(ctx.k):
        rows.append((basis * c).coeffs)
        basis = basis * x
    return np.array(rows, dtype=np.int64)


class FieldTables:
    def __init__(self, ctx: FieldContext):
        if ctx.size > SCAN_LIMIT:
            raise ValueError(f"{ctx} is too large for table arithmetic")
        self.ctx = ctx
        p, k, q = ctx.p, ctx.k, ctx.size
        self.p, self.q = p, q
        self.powers = p ** np.arange(k, dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        self.digits = (codes[:, None] // self.powers) % p
        # canonical order is lexicographic with the constant term first
        self.sort_key = self.digits @ (p ** np.arange(k - 1, -1, -1, dtype=np.int64))

        g = primitive_element(ctx)
        exp_digits = np.zeros((q - 1, k), dtype=np.int64)
        exp_digits[0, 0] = 1
        filled, g_n = 1, g
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            exp_digits[filled:filled + take] = (exp_digits[:take] @ _mult_matrix(g_n)) % p
            filled += take
            g_n = g_n * g_n
        self.exp = exp_digits @ self.powers
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1, dtype=np.int64)
        assert (self.log[1:] >= 0).all(), "generator is not primitive"
        one_plus = ((self.digits[self.exp] + self.digits[1]) % p) @ self.powers
        self.zech = self.log[one_plus]  # -1 where 1 + g^n = 0
        self.log_minus_one = 0 if p == 2 else (q - 1) // 2

    def const(self, c) -> int:
        if isinstance(c, FieldElement):
            return self.ctx.code(c)
        return int(c) % self.p

    def add(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        n = self.q - 1
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % n]
        out = np.where(z < 0, 0, self.exp[(la + z) % n])
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def neg(self, a):
        a = np.asarray(a)
        out = self.exp[(self.log[a] + self.log_minus_one) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        """Inverse of nonzero codes; zero entries map to zero."""
        a = np.asarray(a)
        out = self.exp[(-self.log[a]) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def square(self, a):
        return self.mul(a, a)

    def is_square(self, a):
        """Elementwise: is a nonzero square (odd characteristic)."""
        la = self.log[a]
        return (la >= 0) & (la % 2 == 0)

    def sqrt_nonzero(self, a):
        """A square root of each entry known to be a nonzero square."""
        if self.p == 2:
            half = self.q // 2  # inverse of 2 modulo the odd number q - 1
            return self.exp[(self.log[a] * half) % (self.q - 1)]
        return self.exp[self.log[a] // 2]

    def to_elements(self, codes) -> list[FieldElement]:
        return [self.ctx.from_code(int(c)) for c in codes]

    def sqrt_any(self, a):
        """Char 2 only: every element has a unique square root."""
        a = np.asarray(a)
        return np.where(a == 0, 0, self.sqrt_nonzero(np.where(a == 0, 1, a)))

    def artin_schreier_roots(self):
        """Char 2 only: table ``z0[c]`` with z0^2 + z0 = c, or -1 if none."""
        z = np.arange(self.q, dtype=np.int64)
        w = self.add(self.square(z), z)
        table = np.full(self.q, -1, dtype=np.int64)
        table[w] = z
        return table


@lru_cache(maxsize=8)
def tables_for(ctx: FieldContext) -> FieldTables:
    return FieldTables(ctx)
