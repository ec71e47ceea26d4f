"""Torsion subgroups E[m] and the automorphism group Aut_0(E).

Automorphisms are Weierstrass coordinate changes
``x = u^2 x' + r,  y = u^3 y' + u^2 s x' + t`` that map the curve to itself.
The map acting on points is the inverse change, so that composition of
:class:`Automorphism` objects matches composition of point maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import poly
from . import tables as _tables
from .curves import (
    CurvePoint,
    PointArrays,
    WeierstrassCurve,
    arrays_to_points,
    bulk_add,
    bulk_mul,
    bulk_points,
    point_order,
)
from .errors import NotFoundWithinTower, TableMismatch, UnsupportedMixedOrder
from .fields import (
    FieldContext,
    FieldElement,
    embed,
    field_make,
    k_max,
    roots_of_unity,
    split_roots,
)

M_MAX = 30

LABELS = {
    2: "Z/2Z",
    4: "Z/4Z",
    6: "Z/6Z",
    12: "Z/3Z ⋊ Z/4Z",
    24: "Q ⋊ Z/3Z",
}


# ---------------------------------------------------------------- torsion


@dataclass(frozen=True)
class TorsionData:
    m: int
    structure: str  # "rank2", "cyclic", "mixed" or "trivial"
    basis: tuple[CurvePoint, ...]
    field_degree: int
    size: int

    @property
    def generator(self) -> CurvePoint:
        """The first basis point; it has exact order m unless trivial."""
        return self.basis[0]


def _p_split(m: int, p: int) -> tuple[int, int]:
    pe = 1
    while m % p == 0:
        m //= p
        pe *= p
    return pe, m


def _multiples(curve, T, A: PointArrays, upto: int) -> list[PointArrays]:
    """[A, 2A, ..., upto*A] elementwise."""
    out = [A]
    for _ in range(upto - 1):
        out.append(bulk_add(curve, T, out[-1], A))
    return out


def _orders(multiples: list[PointArrays]) -> np.ndarray:
    n = len(multiples[0])
    order = np.zeros(n, dtype=np.int64)
    for j, M in enumerate(multiples, start=1):
        order = np.where((order == 0) & M.inf, j, order)
    return order


def _key(A: PointArrays, i: int):
    return (bool(A.inf[i]), int(A.x[i]), int(A.y[i]))


def _rank2_basis(mults, orders, n: int, candidates) -> tuple[int, int]:
    """Canonical basis of an (n, n)-group given by candidate indices."""
    first = next(i for i in candidates if orders[i] == n)
    span = {_key(M, first) for M in mults[: n - 1]}
    for i in candidates:
        if orders[i] != n or i == first:
            continue
        if all(_key(M, i) not in span for M in mults[: n - 1]):
            return first, i
    raise AssertionError("torsion group is not of rank two")  # pragma: no cover


def _candidate_degrees(curve: WeierstrassCurve, m: int):
    p = curve.p
    pe, n = _p_split(m, p)
    for k in range(1, k_max() + 1):
        q = p**k
        N = curve.count_points(k)
        if (q - 1) % n or N % (n * n) or N % pe:
            continue
        yield k


def torsion_subgroup(curve: WeierstrassCurve, m: int) -> TorsionData:
    """E[m] over the least F_{p^k} containing all of it, with a canonical basis.

    Points killed by m are counted exhaustively among the rational points of
    each candidate field; degrees whose point count already rules out full
    m-torsion are skipped.
    """
    if not 1 <= m <= M_MAX:
        raise ValueError(f"m must lie in [1, {M_MAX}]")
    p = curve.p
    pe, n = _p_split(m, p)
    supersingular = curve.is_supersingular()
    if supersingular and pe > 1:
        if n > 1:
            raise UnsupportedMixedOrder(
                f"E[{m}] = E[{n}] on a supersingular curve: no point of order {m} exists"
            )
        return TorsionData(m, "trivial", (), 1, 1)
    if m == 1:
        return TorsionData(1, "trivial", (), 1, 1)
    expected = pe * n * n
    for k in _candidate_degrees(curve, m):
        if p**k > _tables.SCAN_LIMIT:
            break
        ctx = field_make(p, k)
        T = _tables.tables_for(ctx)
        pts = bulk_points(curve, k)
        killed = bulk_mul(curve, T, m, pts).inf
        if int(killed.sum()) != expected:
            continue
        sub = pts.take(np.flatnonzero(killed))  # still in canonical order
        mults = _multiples(curve, T, sub, m)
        orders = _orders(mults)
        idx = range(len(sub))
        if n == 1:
            first = next(i for i in idx if orders[i] == pe)
            chosen, structure = [first], "cyclic"
        else:
            n_part = [i for i in idx if n % orders[i] == 0]
            b1, b2 = _rank2_basis(mults, orders, n, n_part)
            if pe == 1:
                chosen, structure = [b1, b2], "rank2"
            else:
                g = next(i for i in idx if orders[i] == pe)
                chosen, structure = [g, b1, b2], "mixed"
        basis = arrays_to_points(ctx, sub.take(np.array(chosen)))
        if structure == "mixed":
            basis = [curve.add(basis[0], basis[1]), basis[2]]
        return TorsionData(m, structure, tuple(basis), k, expected)
    raise NotFoundWithinTower(
        f"E[{m}] of {curve} is not rational over any scannable F_{p}^k with k <= {k_max()}"
    )


def torsion_points(curve: WeierstrassCurve, m: int, k: int) -> list[CurvePoint]:
    """All F_{p^k}-rational points killed by m, canonically ordered."""
    ctx = field_make(curve.p, k)
    T = _tables.tables_for(ctx)
    pts = bulk_points(curve, k)
    killed = bulk_mul(curve, T, m, pts).inf
    return arrays_to_points(ctx, pts.take(np.flatnonzero(killed)))


# ---------------------------------------------------------------- automorphisms


@dataclass(frozen=True)
class Automorphism:
    u: FieldElement
    r: FieldElement
    s: FieldElement
    t: FieldElement

    @property
    def ctx(self) -> FieldContext:
        return self.u.ctx

    @property
    def field_degree(self) -> int:
        return self.u.ctx.k

    def sort_key(self):
        return (self.u.coeffs, self.r.coeffs, self.s.coeffs, self.t.coeffs)

    def is_identity(self) -> bool:
        return self.u == 1 and not (self.r or self.s or self.t)

    def lift(self, ctx: FieldContext) -> Automorphism:
        if ctx == self.ctx:
            return self
        return Automorphism(*(embed(c, ctx) for c in (self.u, self.r, self.s, self.t)))

    def __repr__(self):
        return f"[u={self.u!r}, r={self.r!r}, s={self.s!r}, t={self.t!r}]"


def identity_automorphism(ctx: FieldContext) -> Automorphism:
    return Automorphism(ctx.one, ctx.zero, ctx.zero, ctx.zero)


def negation_automorphism(curve: WeierstrassCurve, ctx: FieldContext) -> Automorphism:
    a1, _, a3, _, _ = curve.coeffs_in(ctx)
    return Automorphism(-ctx.one, ctx.zero, -a1, -a3)


def transform_coefficients(a, u, r, s, t):
    """a-invariants of the model obtained by the change (u, r, s, t)."""
    a1, a2, a3, a4, a6 = a
    ui = u.inverse()
    return (
        (a1 + 2 * s) * ui,
        (a2 - s * a1 + 3 * r - s * s) * ui**2,
        (a3 + r * a1 + 2 * t) * ui**3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) * ui**4,
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) * ui**6,
    )


def compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """The automorphism P -> f(g(P))."""
    # point maps invert coordinate changes, so compose the changes as g then f
    u = g.u * f.u
    r = g.r + g.u**2 * f.r
    s = g.s + g.u * f.s
    t = g.t + g.u**3 * f.t + g.u**2 * g.s * f.r
    return Automorphism(u, r, s, t)


def invert(f: Automorphism) -> Automorphism:
    ui = f.u.inverse()
    return Automorphism(ui, -f.r * ui**2, -f.s * ui, (f.r * f.s - f.t) * ui**3)


def _common_field(a: FieldContext, b: FieldContext) -> FieldContext:
    if a.k % b.k == 0:
        return a
    if b.k % a.k == 0:
        return b
    K = a.k * b.k // gcd(a.k, b.k)
    if K > k_max():
        raise NotFoundWithinTower(f"compositum of degree {K} exceeds the cap {k_max()}")
    return field_make(a.p, K)


def _lift_point(P: CurvePoint, ctx: FieldContext) -> CurvePoint:
    if P.ctx == ctx:
        return P
    if P.is_infinity:
        return CurvePoint.infinity(ctx)
    return CurvePoint(embed(P.x, ctx), embed(P.y, ctx), ctx)


def apply_automorphism(curve: WeierstrassCurve, aut: Automorphism, P: CurvePoint) -> CurvePoint:
    ctx = _common_field(aut.ctx, P.ctx)
    aut, P = aut.lift(ctx), _lift_point(P, ctx)
    if P.is_infinity:
        return P
    ui = aut.u.inverse()
    dx = P.x - aut.r
    x = dx * ui**2
    y = (P.y - aut.s * dx - aut.t) * ui**3
    return CurvePoint(x, y, ctx)


@dataclass(frozen=True)
class AutGroup:
    curve: WeierstrassCurve
    elements: tuple[Automorphism, ...]
    structure_label: str
    field_degree: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def ctx(self) -> FieldContext:
        return self.elements[0].ctx

    def lifted(self, ctx: FieldContext) -> tuple[Automorphism, ...]:
        return tuple(f.lift(ctx) for f in self.elements)


def expected_aut_order(curve: WeierstrassCurve) -> int:
    """Order of Aut_0 over the algebraic closure, from (j, p)."""
    p, j = curve.p, curve.j
    if p in (2, 3):
        if j == 0:
            return 24 if p == 2 else 12
        return 2
    if j == 1728 % p:
        return 4
    if j == 0:
        return 6
    return 2


def _prime_to_p(n: int, p: int) -> int:
    while n % p == 0:
        n //= p
    return n


def _gcd_all(polys):
    g = []
    for f in polys:
        g = poly.gcd(g, f)
    return g


def _solve_at(curve: WeierstrassCurve, ctx: FieldContext):
    """All (u, r, s, t) over ctx, or None if some constraint fails to split."""
    a1, a2, a3, a4, a6 = a = curve.coeffs_in(ctx)
    b2, b4, b6, b8 = (ctx(c) for c in (curve.b2, curve.b4, curve.b6, curve.b8))
    found = []
    for u in roots_of_unity(ctx, 24):
        u2, u3 = u * u, u**3
        u4, u6, u8 = u2 * u2, u3 * u3, u**8
        # r is a common root of the b-invariant relations
        r_polys = [
            poly.lift(ctx, [-(u2 - 1) * b2, 12]),
            poly.lift(ctx, [-(u4 - 1) * b4, b2, 6]),
            poly.lift(ctx, [-(u6 - 1) * b6, 2 * b4, b2, 4]),
            poly.lift(ctx, [-(u8 - 1) * b8, 3 * b6, 3 * b4, b2, 3]),
        ]
        rs, ok = split_roots(ctx, _gcd_all(r_polys))
        if not ok:
            return None
        for r in rs:
            s_polys = [
                poly.lift(ctx, [-(u - 1) * a1, 2]),
                poly.lift(ctx, [u2 * a2 - a2 - 3 * r, a1, 1]),
            ]
            ss, ok = split_roots(ctx, _gcd_all(s_polys))
            if not ok:
                return None
            for s in ss:
                t_polys = [
                    poly.lift(ctx, [r * a1 + a3 - u3 * a3, 2]),
                    poly.lift(
                        ctx,
                        [-(a4 - u4 * a4 - s * a3 + 2 * r * a2 - r * s * a1 + 3 * r * r), a1 + 2 * s],
                    ),
                    poly.lift(ctx, [u6 * a6 - a6 - r * a4 - r * r * a2 - r**3, a3 + r * a1, 1]),
                ]
                ts, ok = split_roots(ctx, _gcd_all(t_polys))
                if not ok:
                    return None
                for t in ts:
                    if transform_coefficients(a, u, r, s, t) == a:
                        found.append(Automorphism(u, r, s, t))
    return found


def random_points(curve: WeierstrassCurve, ctx: FieldContext, count: int, seed: int = 0):
    """``count`` affine points over ctx drawn with a seeded generator."""
    rng = random.Random(seed)
    if ctx.size <= _tables.SCAN_LIMIT:
        pts = bulk_points(curve, ctx.k)
        affine = np.flatnonzero(~pts.inf)
        if not len(affine):
            return []
        picks = [int(affine[rng.randrange(len(affine))]) for _ in range(count)]
        return arrays_to_points(ctx, pts.take(np.array(picks, dtype=np.int64)))
    a1, a2, a3, a4, a6 = curve.coeffs_in(ctx)
    out = []
    for _ in range(count * 200):
        if len(out) == count:
            break
        x = ctx.from_code(rng.randrange(ctx.size))
        ys = split_roots(ctx, [-(((x + a2) * x + a4) * x + a6), a1 * x + a3, ctx.one])[0]
        if ys:
            out.append(CurvePoint(x, rng.choice(ys), ctx))
    return out


def _validate(curve: WeierstrassCurve, auts, ctx: FieldContext) -> None:
    pts = random_points(curve, ctx, 20)
    for f in auts:
        images = [apply_automorphism(curve, f, P) for P in pts]
        for P, fP in zip(pts, images):
            if not curve.contains(fP):
                raise AssertionError(f"{f} sends {P} off the curve")
        for i in range(len(pts) - 1):
            lhs = apply_automorphism(curve, f, curve.add(pts[i], pts[i + 1]))
            if lhs != curve.add(images[i], images[i + 1]):
                raise AssertionError(f"{f} is not additive")


def automorphism_group(curve: WeierstrassCurve) -> AutGroup:
    """Aut_0(E) over the algebraic closure, realised over the least F_{p^k}
    containing the prime-to-p 24th roots of unity and every solution of the
    coordinate-change constraints."""
    p = curve.p
    n24 = _prime_to_p(24, p)
    k0 = next(k for k in range(1, 25) if (p**k - 1) % n24 == 0)
    k = k0
    while k <= k_max():
        ctx = field_make(p, k)
        auts = _solve_at(curve, ctx)
        if auts is not None:
            break
        k += k0
    else:
        raise NotFoundWithinTower(f"automorphisms of {curve} need degree > {k_max()}")
    auts = sorted(auts, key=Automorphism.sort_key)
    _validate(curve, auts, ctx)
    order = len(auts)
    expected = expected_aut_order(curve)
    if order != expected:
        raise TableMismatch(f"{curve}: enumerated {order} automorphisms, table row says {expected}")
    return AutGroup(curve, tuple(auts), LABELS[order], k)


# ---------------------------------------------------------------- verification


@dataclass
class GroupReport:
    order: int
    expected_order: int
    closure: bool
    inverses: bool
    identity: bool
    negation: bool
    abelian: bool
    cyclic: bool
    stabilizer_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _element_order(f: Automorphism) -> int:
    g, n = f, 1
    while not g.is_identity():
        g = compose(f, g)
        n += 1
    return n


def group_structure_check(g: AutGroup, points=()) -> GroupReport:
    """Check the group axioms, the advertised order, and that no nontrivial
    automorphism fixes a point of order at least 4 among ``points``."""
    elems = g.elements
    keys = {f.sort_key() for f in elems}
    violations = []
    closure = all(compose(f, h).sort_key() in keys for f in elems for h in elems)
    if not closure:
        violations.append("not closed under composition")
    inverses = all(invert(f).sort_key() in keys for f in elems)
    if not inverses:
        violations.append("not closed under inverses")
    ctx = g.ctx
    identity = identity_automorphism(ctx).sort_key() in keys
    if not identity:
        violations.append("identity missing")
    negation = negation_automorphism(g.curve, ctx).sort_key() in keys
    if not negation:
        violations.append("negation missing")
    expected = expected_aut_order(g.curve)
    if len(elems) != expected:
        violations.append(f"order {len(elems)} but table row says {expected}")
    if LABELS.get(len(elems)) != g.structure_label:
        violations.append(f"label {g.structure_label!r} does not match order {len(elems)}")
    abelian = all(
        compose(f, h).sort_key() == compose(h, f).sort_key() for f in elems for h in elems
    )
    cyclic = any(_element_order(f) == len(elems) for f in elems)
    checked = 0
    for P in points:
        if point_order(g.curve, P) < 4:
            continue
        checked += 1
        for f in elems:
            if not f.is_identity() and apply_automorphism(g.curve, f, P) == _lift_point(
                P, _common_field(f.ctx, P.ctx)
            ):
                violations.append(f"{f} fixes {P}")
    return GroupReport(
        order=len(elems),
        expected_order=expected,
        closure=closure,
        inverses=inverses,
        identity=identity,
        negation=negation,
        abelian=abelian,
        cyclic=cyclic,
        stabilizer_checked=checked,
        violations=violations,
    )
