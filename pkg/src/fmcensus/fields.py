"""Exact arithmetic in F_p and F_{p^k}.

Elements of F_{p^k} are residues of F_p[x] modulo a fixed monic irreducible
polynomial of degree k, stored as little-endian coefficient tuples.  The
canonical element order used throughout the package is lexicographic on
those tuples.
"""

from __future__ import annotations

import itertools
import os
from functools import lru_cache
from math import gcd

from . import poly
from .errors import ContextMismatch, DegreeTooLarge, DivisionByZero, NotPrime

P_MAX = 97
K_MAX = 12

# Largest field scanned element by element when looking for polynomial roots.
ROOT_SCAN_LIMIT = 4096


def k_max() -> int:
    """The extension-degree cap, optionally lowered through ``FMC_KMAX``."""
    env = os.environ.get("FMC_KMAX")
    if env:
        return max(1, min(K_MAX, int(env)))
    return K_MAX


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldElement:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"cannot combine elements of {self.ctx} and {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if not self:
            raise DivisionByZero(f"inverse of zero in {self.ctx}")
        return FieldElement(self.ctx, self.ctx._inv(self.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.ctx(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and self.ctx == other.ctx

    def __hash__(self):
        return hash((self.ctx.p, self.coeffs))

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def sort_key(self) -> tuple[int, ...]:
        return self.coeffs

    def is_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.is_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.coeffs[0]

    def __repr__(self):
        if self.ctx.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


class FieldContext:
    """The field F_{p^k} = F_p[x]/(modulus).

    Contexts compare by value; :func:`field_make` caches them so that in
    practice every element of a given field points at the same object.
    """

    __slots__ = ("p", "k", "modulus", "size", "zero", "one", "_hash")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.size = p**k
        self._hash = hash((p, k, self.modulus))
        self.zero = FieldElement(self, (0,) * k)
        self.one = FieldElement(self, (1,) + (0,) * (k - 1))

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextMismatch(f"{value!r} does not belong to {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            coeffs = list(self._reduce(coeffs))
        return FieldElement(self, tuple(coeffs) + (0,) * (self.k - len(coeffs)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldContext):
            return NotImplemented
        return self.p == other.p and self.k == other.k and self.modulus == other.modulus

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def gen(self) -> FieldElement:
        return self([0, 1])

    def elements(self):
        """All elements in canonical order."""
        for c in itertools.product(range(self.p), repeat=self.k):
            yield FieldElement(self, c)

    def from_code(self, code: int) -> FieldElement:
        """Inverse of :meth:`code`: base-p digits, least significant first."""
        digits = []
        for _ in range(self.k):
            code, d = divmod(code, self.p)
            digits.append(d)
        return FieldElement(self, tuple(digits))

    def code(self, a: FieldElement) -> int:
        out = 0
        for c in reversed(a.coeffs):
            out = out * self.p + c
        return out

    # raw coefficient arithmetic

    def _reduce(self, prod):
        p, k, m = self.p, self.k, self.modulus
        prod = list(prod)
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i] % p
            if c:
                base = i - k
                for j in range(k):
                    prod[base + j] -= c * m[j]
        return tuple(c % p for c in prod[:k])

    def _mul(self, a, b):
        p = self.p
        if self.k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def _inv(self, a):
        p = self.p
        if self.k == 1:
            return (pow(a[0], p - 2, p),)
        # extended Euclid in F_p[x] on (modulus, a)
        r0, r1 = list(self.modulus), _itrim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _idivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _isub(s0, _imul(q, s1, p), p)
        c = pow(r0[0], p - 2, p)
        s = [(x * c) % p for x in s0]
        return tuple(s) + (0,) * (self.k - len(s))


def _itrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _imul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _itrim([c % p for c in out])


def _isub(f, g, p):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _itrim([(a - b) % p for a, b in zip(f, g)])


def _idivmod(f, g, p):
    f = [c % p for c in f]
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    if len(f) <= dg:
        return [], _itrim(f)
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = (f[i] * inv) % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return _itrim(q), _itrim(f[:dg])


def is_irreducible(p: int, coeffs) -> bool:
    """Rabin's test for a monic polynomial over F_p (constant term first)."""
    fp = field_make(p, 1)
    f = poly.lift(fp, coeffs)
    k = poly.degree(f)
    if k < 1:
        return False
    if k == 1:
        return True
    x = poly.lift(fp, [0, 1])
    frob = [x]  # frob[i] = x^(p^i) mod f
    for _ in range(k):
        frob.append(poly.powmod(frob[-1], p, f))
    if poly.sub(frob[k], x):
        return False
    for ell in prime_factors(k):
        g = poly.gcd(poly.sub(frob[k // ell], x), f)
        if poly.degree(g) > 0:
            return False
    return True


def field_make(p: int, k: int = 1) -> FieldContext:
    """The field with p^k elements.

    The modulus is the lexicographically smallest (constant term first)
    monic irreducible polynomial of degree k, so equal arguments always give
    equal contexts.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be positive")
    if k > k_max():
        raise DegreeTooLarge(f"degree {k} exceeds the cap {k_max()}")
    return _build_field(p, k)


@lru_cache(maxsize=None)
def _build_field(p: int, k: int) -> FieldContext:
    if k == 1:
        return FieldContext(p, 1, (0, 1))
    # a zero constant term means x divides the candidate
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=k - 1):
            candidate = (c0,) + rest + (1,)
            if is_irreducible(p, candidate):
                return FieldContext(p, k, candidate)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def prime_field(ctx: FieldContext) -> FieldContext:
    return field_make(ctx.p, 1)


# ---------------------------------------------------------------- roots


def _roots_by_scan(ctx, f):
    return [x for x in ctx.elements() if not poly.evaluate(f, x)]


def _split_distinct(ctx, g):
    """Roots of a squarefree polynomial that splits into distinct linear
    factors (Cantor-Zassenhaus equal-degree splitting for degree one)."""
    g = poly.monic(g)
    d = poly.degree(g)
    if d <= 0:
        return []
    if d == 1:
        return [-g[0]]
    x = poly.lift(ctx, [0, 1])
    q = ctx.size
    for idx in itertools.count(1):
        delta = ctx.from_code(idx % q)
        lin = poly.add(x, [delta]) if ctx.p != 2 else poly.scale(x, delta)
        if ctx.p != 2:
            h = poly.sub(poly.powmod(lin, (q - 1) // 2, g), [ctx.one])
        else:
            # absolute trace of delta*x modulo g
            h, term = [], poly.mod(lin, g)
            for _ in range(ctx.k):
                h = poly.add(h, term)
                term = poly.mod(poly.mul(term, term), g)
        u = poly.gcd(h, g)
        if 0 < poly.degree(u) < d:
            v = poly.divmod_(g, u)[0]
            return _split_distinct(ctx, u) + _split_distinct(ctx, v)
        if idx > 64 * q:  # pragma: no cover
            raise AssertionError("root splitting did not converge")


def _roots_by_splitting(ctx, f):
    x = poly.lift(ctx, [0, 1])
    xq = poly.powmod(x, ctx.size, f)
    g = poly.gcd(poly.sub(xq, x), f)
    return _split_distinct(ctx, g)


def polynomial_roots(ctx: FieldContext, coeffs) -> list[FieldElement]:
    """Distinct roots in ``ctx`` of a nonzero polynomial, canonically sorted."""
    f = poly.lift(ctx, coeffs)
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    d = poly.degree(f)
    if d == 0:
        return []
    if d == 1:
        return [-f[0] / f[1]]
    if ctx.size <= ROOT_SCAN_LIMIT:
        roots = _roots_by_scan(ctx, f)
    else:
        roots = _roots_by_splitting(ctx, poly.monic(f))
    return sorted(set(roots), key=FieldElement.sort_key)


def split_roots(ctx: FieldContext, coeffs) -> tuple[list[FieldElement], bool]:
    """Distinct roots plus whether the polynomial splits completely."""
    f = poly.lift(ctx, coeffs)
    roots = polynomial_roots(ctx, f)
    rest = f
    for r in roots:
        lin = [-r, ctx.one]
        while True:
            q, rem = poly.divmod_(rest, lin)
            if rem:
                break
            rest = q
    return roots, poly.degree(rest) == 0


def roots_of_unity(ctx: FieldContext, n: int) -> list[FieldElement]:
    """All x in ctx with x^n = 1, canonically sorted."""
    if n < 1:
        raise ValueError("n must be positive")
    order = ctx.size - 1
    d = gcd(n, order)
    if d == 1:
        return [ctx.one]
    ells = prime_factors(d)
    for a in ctx.elements():
        if not a:
            continue
        y = a ** (order // d)
        if all(y ** (d // ell) != ctx.one for ell in ells):
            break
    out, z = [], ctx.one
    for _ in range(d):
        out.append(z)
        z = z * y
    return sorted(out, key=FieldElement.sort_key)


@lru_cache(maxsize=None)
def _embedding_root(small: FieldContext, big: FieldContext) -> FieldElement:
    if big.k % small.k or big.p != small.p:
        raise ValueError(f"{small} does not embed in {big}")
    return polynomial_roots(big, small.modulus)[0]


def embed(a: FieldElement, big: FieldContext) -> FieldElement:
    """Image of ``a`` under the canonical embedding into ``big``.

    The generator of ``a.ctx`` is sent to the least root (canonical order)
    of its modulus inside ``big``.
    """
    small = a.ctx
    if small == big:
        return a
    if small.k == 1:
        return big(a.coeffs[0])
    theta = _embedding_root(small, big)
    acc = big.zero
    for c in reversed(a.coeffs):
        acc = acc * theta + c
    return acc
