"""Elliptic curves y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6 over F_p.

The coefficients live in the prime field; points may have coordinates in
any F_{p^k}.  The group law is the chord-tangent law for the long model, so
characteristics 2 and 3 need no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import tables as _tables
from .errors import DegreeTooLarge, NotPrime, NotFoundWithinTower, PointNotOnCurve, SingularModel
from .fields import (
    P_MAX,
    FieldContext,
    FieldElement,
    field_make,
    is_prime,
    k_max,
    prime_factors,
)


@dataclass(frozen=True)
class CurvePoint:
    x: FieldElement | None
    y: FieldElement | None
    ctx: FieldContext = field(compare=False, hash=False)

    @classmethod
    def infinity(cls, ctx: FieldContext) -> CurvePoint:
        return cls(None, None, ctx)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def degree(self) -> int:
        return self.ctx.k

    def sort_key(self):
        if self.x is None:
            return (0,)
        return (1, self.x.coeffs, self.y.coeffs)

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.x!r}, {self.y!r})"


@dataclass(frozen=True)
class WeierstrassCurve:
    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False, compare=False)
    b4: int = field(init=False, compare=False)
    b6: int = field(init=False, compare=False)
    b8: int = field(init=False, compare=False)
    c4: int = field(init=False, compare=False)
    c6: int = field(init=False, compare=False)
    discriminant: int = field(init=False, compare=False)
    j: int = field(init=False, compare=False)

    def __post_init__(self):
        p = self.p
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p > P_MAX:
            raise ValueError(f"characteristic {p} exceeds P_MAX={P_MAX}")
        a1, a2, a3, a4, a6 = (c % p for c in (self.a1, self.a2, self.a3, self.a4, self.a6))
        for name, v in zip(("a1", "a2", "a3", "a4", "a6"), (a1, a2, a3, a4, a6)):
            object.__setattr__(self, name, v)
        # integer identities first, reduction mod p afterwards
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc % p == 0:
            raise SingularModel(
                f"y^2 + {a1}xy + {a3}y = x^3 + {a2}x^2 + {a4}x + {a6} is singular mod {p}"
            )
        vals = dict(b2=b2, b4=b4, b6=b6, b8=b8, c4=c4, c6=c6, discriminant=disc)
        for name, v in vals.items():
            object.__setattr__(self, name, v % p)
        object.__setattr__(self, "j", (c4 % p) ** 3 * pow(disc % p, p - 2, p) % p)

    @property
    def a_invariants(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self):
        return f"[{','.join(map(str, self.a_invariants))}] over GF({self.p})"

    # -- points

    def coeffs_in(self, ctx: FieldContext) -> tuple[FieldElement, ...]:
        return _coeffs_in(self, ctx)

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        a1, a2, a3, a4, a6 = self.coeffs_in(P.x.ctx)
        x, y = P.x, P.y
        return y * y + a1 * x * y + a3 * y == ((x + a2) * x + a4) * x + a6

    def point(self, x, y, ctx: FieldContext | None = None) -> CurvePoint:
        if ctx is None:
            ctx = x.ctx if isinstance(x, FieldElement) else field_make(self.p, 1)
        P = CurvePoint(ctx(x), ctx(y), ctx)
        if not self.contains(P):
            raise PointNotOnCurve(f"{P} is not on {self}")
        return P

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        a1, _, a3, _, _ = self.coeffs_in(P.ctx)
        return CurvePoint(P.x, -P.y - a1 * P.x - a3, P.ctx)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        """Unchecked group law; see :func:`point_add` for the checked one."""
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.coeffs_in(P.ctx)
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            den = y1 + y2 + a1 * x2 + a3
            if not den:
                return CurvePoint.infinity(P.ctx)
            # doubling: den = 2y1 + a1x1 + a3 here
            inv = den.inverse()
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * inv
            nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) * inv
        else:
            inv = (x2 - x1).inverse()
            lam = (y2 - y1) * inv
            nu = (y1 * x2 - y2 * x1) * inv
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3, P.ctx)

    def mul(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.mul(-n, self.neg(P))
        result = CurvePoint.infinity(P.ctx)
        addend = P
        while n:
            if n & 1:
                result = self.add(result, addend)
            n >>= 1
            if n:
                addend = self.add(addend, addend)
        return result

    # -- counting

    @property
    def trace(self) -> int:
        return _trace(self)

    def count_points(self, k: int = 1) -> int:
        """#E(F_{p^k}) from the F_p trace via s_k = t*s_{k-1} - p*s_{k-2}."""
        t, p = self.trace, self.p
        s_prev, s = 2, t
        for _ in range(k - 1):
            s_prev, s = s, t * s - p * s_prev
        return p**k + 1 - s

    def is_supersingular(self) -> bool:
        return self.trace % self.p == 0


def curve_new(p: int, a1: int, a2: int, a3: int, a4: int, a6: int) -> WeierstrassCurve:
    return WeierstrassCurve(p, a1, a2, a3, a4, a6)


@lru_cache(maxsize=4096)
def _coeffs_in(curve: WeierstrassCurve, ctx: FieldContext):
    return tuple(ctx(c) for c in curve.a_invariants)


@lru_cache(maxsize=4096)
def _trace(curve: WeierstrassCurve) -> int:
    n = len(_enumerate_prime_field(curve))
    return curve.p + 1 - n


def _enumerate_prime_field(curve: WeierstrassCurve) -> list[CurvePoint]:
    p = curve.p
    ctx = field_make(p, 1)
    a1, a2, a3, a4, a6 = curve.a_invariants
    # y -> y^2 + (a1 x + a3) y, tabulated per x; p <= 97 keeps this tiny
    pts = [CurvePoint.infinity(ctx)]
    for x in range(p):
        h = (a1 * x + a3) % p
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + h * y - rhs) % p == 0:
                pts.append(CurvePoint(ctx(x), ctx(y), ctx))
    return pts


def point_add(curve: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    for R in (P, Q):
        if not curve.contains(R):
            raise PointNotOnCurve(f"{R} is not on {curve}")
    if not P.is_infinity and not Q.is_infinity and P.ctx != Q.ctx:
        raise ValueError("points live in different fields")
    return curve.add(P, Q)


def scalar_mul(curve: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    if not curve.contains(P):
        raise PointNotOnCurve(f"{P} is not on {curve}")
    return curve.mul(n, P)


def point_order(curve: WeierstrassCurve, P: CurvePoint) -> int:
    """Least n >= 1 with nP = O, found by stripping primes off #E(F_{p^k})."""
    if P.is_infinity:
        return 1
    n = curve.count_points(P.ctx.k)
    for ell in prime_factors(n):
        while n % ell == 0 and curve.mul(n // ell, P).is_infinity:
            n //= ell
    return n


def is_supersingular(curve: WeierstrassCurve) -> bool:
    return curve.is_supersingular()


# ---------------------------------------------------------------- bulk scans


@dataclass
class PointArrays:
    """Affine points as parallel code arrays, plus an infinity mask."""

    x: np.ndarray
    y: np.ndarray
    inf: np.ndarray

    def __len__(self):
        return len(self.x)

    def take(self, idx) -> PointArrays:
        return PointArrays(self.x[idx], self.y[idx], self.inf[idx])


def _bulk_affine(curve: WeierstrassCurve, T: _tables.FieldTables) -> tuple[np.ndarray, np.ndarray]:
    a1, a2, a3, a4, a6 = curve.a_invariants
    x = np.arange(T.q, dtype=np.int64)
    x2 = T.square(x)
    f = T.add(T.add(T.mul(x2, x), T.mul(x2, a2)), T.add(T.mul(x, a4), a6))
    h = T.add(T.mul(x, a1), a3)
    xs, ys = [], []
    if T.p != 2:
        disc = T.add(T.square(h), T.mul(f, 4 % T.p))
        half = pow(2, T.p - 2, T.p)
        zero = disc == 0
        xs.append(x[zero])
        ys.append(T.mul(T.neg(h[zero]), half))
        sq = T.is_square(disc)
        s = T.sqrt_nonzero(disc[sq])
        hn = T.neg(h[sq])
        for root in (s, T.neg(s)):
            xs.append(x[sq])
            ys.append(T.mul(T.add(hn, root), half))
    else:
        flat = h == 0
        xs.append(x[flat])
        ys.append(T.sqrt_any(f[flat]))
        hh = h[~flat]
        c = T.mul(f[~flat], T.inv(T.square(hh)))
        z0 = T.artin_schreier_roots()[c]
        ok = z0 >= 0
        for z in (z0[ok], T.add(z0[ok], 1)):
            xs.append(x[~flat][ok])
            ys.append(T.mul(hh[ok], z))
    return np.concatenate(xs), np.concatenate(ys)


@lru_cache(maxsize=6)
def bulk_points(curve: WeierstrassCurve, k: int) -> PointArrays:
    """Every F_{p^k}-rational point (infinity first, then canonical order)."""
    ctx = field_make(curve.p, k)
    if ctx.size > _tables.SCAN_LIMIT:
        raise NotFoundWithinTower(f"{ctx} exceeds the scan limit of {_tables.SCAN_LIMIT} elements")
    T = _tables.tables_for(ctx)
    xs, ys = _bulk_affine(curve, T)
    order = np.lexsort((T.sort_key[ys], T.sort_key[xs]))
    xs, ys = xs[order], ys[order]
    expected = curve.count_points(k)
    if len(xs) + 1 != expected:  # pragma: no cover - consistency guard
        raise AssertionError(f"scan found {len(xs) + 1} points, trace predicts {expected}")
    inf = np.zeros(len(xs) + 1, dtype=bool)
    inf[0] = True
    return PointArrays(np.concatenate(([0], xs)), np.concatenate(([0], ys)), inf)


def bulk_add(curve: WeierstrassCurve, T, P: PointArrays, Q: PointArrays) -> PointArrays:
    a1, a2, a3, a4, a6 = curve.a_invariants
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    same_x = x1 == x2
    sum_y = T.add(T.add(y1, y2), T.add(T.mul(x2, a1), a3))
    opposite = same_x & (sum_y == 0)
    dbl = same_x & ~opposite
    # chord
    den_c = T.sub(x2, x1)
    inv_c = T.inv(den_c)
    lam_c = T.mul(T.sub(y2, y1), inv_c)
    nu_c = T.mul(T.sub(T.mul(y1, x2), T.mul(y2, x1)), inv_c)
    # tangent
    inv_t = T.inv(sum_y)
    x1sq = T.square(x1)
    p = T.p
    num_t = T.add(T.add(T.mul(x1sq, 3 % p), T.mul(x1, 2 * a2 % p)), T.sub(a4, T.mul(y1, a1)))
    lam_t = T.mul(num_t, inv_t)
    num_nu = T.add(T.neg(T.mul(x1sq, x1)), T.add(T.mul(x1, a4), T.sub(2 * a6 % p, T.mul(y1, a3))))
    nu_t = T.mul(num_nu, inv_t)
    lam = np.where(dbl, lam_t, lam_c)
    nu = np.where(dbl, nu_t, nu_c)
    x3 = T.sub(T.sub(T.add(T.square(lam), T.mul(lam, a1)), a2), T.add(x1, x2))
    y3 = T.sub(T.neg(T.mul(T.add(lam, a1), x3)), T.add(nu, a3))
    inf3 = opposite & ~P.inf & ~Q.inf
    x3 = np.where(P.inf, x2, np.where(Q.inf, x1, x3))
    y3 = np.where(P.inf, y2, np.where(Q.inf, y1, y3))
    inf3 = np.where(P.inf, Q.inf, np.where(Q.inf, P.inf, inf3))
    x3 = np.where(inf3, 0, x3)
    y3 = np.where(inf3, 0, y3)
    return PointArrays(x3, y3, inf3)


def bulk_mul(curve: WeierstrassCurve, T, n: int, P: PointArrays) -> PointArrays:
    if n < 0:
        raise ValueError("bulk_mul expects n >= 0")
    zeros = np.zeros(len(P), dtype=np.int64)
    result = PointArrays(zeros, zeros.copy(), np.ones(len(P), dtype=bool))
    for bit in bin(n)[2:]:
        result = bulk_add(curve, T, result, result)
        if bit == "1":
            result = bulk_add(curve, T, result, P)
    return result


def arrays_to_points(ctx: FieldContext, A: PointArrays) -> list[CurvePoint]:
    out = []
    for x, y, inf in zip(A.x.tolist(), A.y.tolist(), A.inf.tolist()):
        if inf:
            out.append(CurvePoint.infinity(ctx))
        else:
            out.append(CurvePoint(ctx.from_code(x), ctx.from_code(y), ctx))
    return out


def enumerate_points(curve: WeierstrassCurve, k: int = 1) -> list[CurvePoint]:
    """All F_{p^k}-rational points, infinity first, then by (x, y)."""
    if k < 1:
        raise ValueError("extension degree must be positive")
    if k > k_max():
        raise DegreeTooLarge(f"degree {k} exceeds the cap {k_max()}")
    if k == 1:
        return _enumerate_prime_field(curve)
    ctx = field_make(curve.p, k)
    return arrays_to_points(ctx, bulk_points(curve, k))
