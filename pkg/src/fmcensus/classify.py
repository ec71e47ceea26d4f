"""Fourier-Mukai partner counts for P(O_E + L) and the fibre tables.

A degree-zero line bundle L of order m on E is identified with the point
a of order m for which L = O_E(a - O).  The surfaces P(O_E + L^i), i a unit
mod m, are isomorphic exactly when the exponents lie in one coset of

    H = {i in (Z/mZ)* : phi(a) = i*a for some phi in Aut_0(E)},

so the partners are counted by phi(m)/|H|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .curves import CurvePoint, WeierstrassCurve, point_order
from .errors import InconsistentDescriptor, NoEllipticFibration, OrderTooSmall
from .fields import is_prime
from .structure import (
    AutGroup,
    Automorphism,
    _common_field,
    _lift_point,
    apply_automorphism,
    automorphism_group,
)


@dataclass(frozen=True)
class UnitGroup:
    m: int
    elements: tuple[int, ...]

    @property
    def phi(self) -> int:
        return len(self.elements)


def unit_group(m: int) -> UnitGroup:
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return UnitGroup(1, (0,))
    return UnitGroup(m, tuple(i for i in range(1, m) if gcd(i, m) == 1))


def euler_phi(m: int) -> int:
    return unit_group(m).phi


@dataclass(frozen=True)
class HSubgroup:
    m: int
    members: tuple[int, ...]
    witness: dict[int, Automorphism] = field(compare=False, repr=False)

    def __len__(self):
        return len(self.members)


def _prepare(curve: WeierstrassCurve, a: CurvePoint, aut_group: AutGroup | None):
    m = point_order(curve, a)
    if m < 2:
        raise OrderTooSmall(f"{a} has order {m}; need at least 2")
    G = aut_group or automorphism_group(curve)
    ctx = _common_field(G.ctx, a.ctx)
    return m, G.lifted(ctx), _lift_point(a, ctx)


def h_group(curve: WeierstrassCurve, a: CurvePoint, aut_group: AutGroup | None = None) -> HSubgroup:
    m, auts, a = _prepare(curve, a, aut_group)
    index, P = {}, a
    for i in range(1, m):
        index[P] = i
        P = curve.add(P, a)
    witness: dict[int, Automorphism] = {}
    for f in auts:
        i = index.get(apply_automorphism(curve, f, a))
        if i is not None:
            witness.setdefault(i, f)
    return HSubgroup(m, tuple(sorted(witness)), witness)


@dataclass(frozen=True)
class PartnerReport:
    m: int
    h: HSubgroup
    representatives: tuple[int, ...]
    count: int
    bound_ok: bool
    oracle_count: int | None = None


def coset_representatives(m: int, members) -> list[int]:
    """Least positive representative of each coset of ``members`` in (Z/mZ)*."""
    seen, reps = set(), []
    for i in unit_group(m).elements:
        if i in seen:
            continue
        reps.append(i)
        seen.update((i * h) % m if m > 1 else 0 for h in members)
    return reps


def fm_partners(
    curve: WeierstrassCurve,
    a: CurvePoint,
    aut_group: AutGroup | None = None,
    verify_oracle: bool = False,
) -> PartnerReport:
    G = aut_group or automorphism_group(curve)
    h = h_group(curve, a, G)
    m = h.m
    phi = euler_phi(m)
    reps = tuple(coset_representatives(m, h.members))
    count, rem = divmod(phi, len(h))
    if rem:  # pragma: no cover - H is a subgroup, so this cannot happen
        raise AssertionError(f"|H|={len(h)} does not divide phi({m})={phi}")
    bound_ok = m < 3 or 2 * count <= phi
    oracle = fm_oracle(curve, a, G) if verify_oracle else None
    return PartnerReport(m, h, reps, count, bound_ok, oracle)


def fm_oracle(curve: WeierstrassCurve, a: CurvePoint, aut_group: AutGroup | None = None) -> int:
    """Count classes of units i under i ~ j iff phi(i*a) = j*a for some phi.

    Works on points directly and never forms H.
    """
    m, auts, a = _prepare(curve, a, aut_group)
    units = unit_group(m).elements
    multiple = {i: curve.mul(i, a) for i in units}
    lookup = {P: i for i, P in multiple.items()}
    parent = {i: i for i in units}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in units:
        for f in auts:
            j = lookup.get(apply_automorphism(curve, f, multiple[i]))
            if j is not None:
                parent[find(i)] = find(j)
    return len({find(i) for i in units})


# ---------------------------------------------------------------- surfaces

BUNDLE_KINDS = ("trivial_sum", "line_sum", "line_sum_infinite", "indecomposable")


@dataclass(frozen=True)
class SurfaceDescriptor:
    """A ruled surface P(E) over an elliptic curve, with e = -deg E."""

    e: int
    bundle_kind: str | None = None
    p: int = 0
    order: int | None = None
    base_ordinary: bool | None = None
    base_supersingular: bool | None = None


@dataclass(frozen=True)
class FiberRow:
    label: str
    pattern: str
    multiplicities: tuple[tuple[int, int | None], ...]
    wild_flags: tuple[bool, ...]
    has_elliptic_fibration: bool

    def render(self) -> str:
        if not self.has_elliptic_fibration:
            return "no elliptic fibrations"
        if not self.multiplicities:
            return "no multiple fibers"
        parts = []
        for (mult, exponent), wild in zip(self.multiplicities, self.wild_flags):
            s = str(mult) if exponent is None else f"{exponent}/{mult}"
            parts.append(s + ("*" if wild else ""))
        sep = ", " if any(self.wild_flags) else ","
        return "(" + sep.join(parts) + ")"


def _row_label(d: SurfaceDescriptor) -> str:
    if d.p < 0 or (d.p > 0 and not is_prime(d.p)):
        raise InconsistentDescriptor(f"characteristic {d.p} is neither 0 nor prime")
    if d.e == 0:
        kind = d.bundle_kind
        if kind == "trivial_sum":
            return "i-1"
        if kind == "line_sum":
            if d.order is None or d.order <= 1:
                raise InconsistentDescriptor("line_sum needs a finite order m > 1")
            return "i-2"
        if kind == "line_sum_infinite":
            return "i-3"
        if kind == "indecomposable":
            return "i-4" if d.p == 0 else "i-5"
        raise InconsistentDescriptor(f"unknown bundle kind {kind!r} for e = 0")
    if d.e == -1:
        if d.p != 2:
            return "ii-1"
        ordinary, supersingular = d.base_ordinary, d.base_supersingular
        if ordinary is None and supersingular is not None:
            ordinary = not supersingular
        if ordinary is None or (supersingular is not None and supersingular == ordinary):
            raise InconsistentDescriptor("e = -1, p = 2 needs the base curve to be ordinary or supersingular")
        return "ii-3" if ordinary else "ii-2"
    raise InconsistentDescriptor(f"e must be 0 or -1, got {d.e}")


# label -> (pattern, has fibration, tame/wild layout)
_ROWS = {
    "i-1": ("no multiple fibers", True),
    "i-2": ("(m,m)", True),
    "i-3": ("no elliptic fibrations", False),
    "i-4": ("no elliptic fibrations", False),
    "i-5": ("(p-2/p*)", True),
    "ii-1": ("(2,2,2)", True),
    "ii-2": ("(1/2*)", True),
    "ii-3": ("(2, 0/2*)", True),
}


def fiber_table(d: SurfaceDescriptor) -> FiberRow:
    label = _row_label(d)
    pattern, fibred = _ROWS[label]
    mults: tuple = ()
    if label == "i-2":
        mults = ((d.order, None), (d.order, None))
    elif label == "i-5":
        mults = ((d.p, d.p - 2),)
    elif label == "ii-1":
        mults = ((2, None),) * 3
    elif label == "ii-2":
        mults = ((2, 1),)
    elif label == "ii-3":
        mults = ((2, None), (2, 0))
    wild = {"i-5": (True,), "ii-2": (True,), "ii-3": (False, True)}.get(label, (False,) * len(mults))
    return FiberRow(label, pattern, mults, wild, fibred)


def lambda_multisection(d: SurfaceDescriptor) -> int:
    """Least degree of a multisection of the elliptic fibration.

    Every multiple fibre in a given row has the same multiplicity, and the
    index equals it; with no multiple fibres there is a section.
    """
    row = fiber_table(d)
    if not row.has_elliptic_fibration:
        raise NoEllipticFibration(f"row ({row.label}) has no elliptic fibration")
    if not row.multiplicities:
        return 1
    return row.multiplicities[0][0]


def nontriviality_gate(d: SurfaceDescriptor) -> bool:
    """True iff the surface can have a nontrivial Fourier-Mukai partner at all."""
    try:
        row = fiber_table(d)
    except InconsistentDescriptor:
        return False
    return row.label == "i-2" and d.order >= 5
