"""Dense univariate polynomials over a :class:`~fmcensus.fields.FieldContext`.

A polynomial is a list of field elements, constant term first, with no
trailing zeros (the zero polynomial is ``[]``).  These helpers are only as
general as the root finder and the irreducibility test need.
"""

from __future__ import annotations


def trim(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def lift(ctx, coeffs):
    return trim(ctx(c) for c in coeffs)


def degree(f) -> int:
    return len(f) - 1


def add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = out[i] + c
    return trim(out)


def sub(f, g):
    return add(f, [-c for c in g])


def scale(f, c):
    return trim(a * c for a in f)


def mul(f, g):
    if not f or not g:
        return []
    zero = f[0] - f[0]
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_(f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    lead_inv = g[-1].inverse()
    if len(f) <= dg:
        return [], trim(f)
    q = [g[0] - g[0]] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * lead_inv
        if not c:
            continue
        q[i - dg] = c
        for j in range(dg + 1):
            f[i - dg + j] = f[i - dg + j] - c * g[j]
    return trim(q), trim(f[:dg])


def mod(f, g):
    return divmod_(f, g)[1]


def monic(f):
    if not f:
        return f
    return scale(f, f[-1].inverse())


def gcd(f, g):
    """Monic gcd; ``gcd([], [])`` is ``[]``."""
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(f, g)
    return monic(f)


def powmod(f, n: int, m):
    one = [m[0] ** 0] if m else None
    result = mod(one, m)
    base = mod(f, m)
    while n:
        if n & 1:
            result = mod(mul(result, base), m)
        n >>= 1
        if n:
            base = mod(mul(base, base), m)
    return result


def evaluate(f, x):
    acc = x - x
    for c in reversed(f):
        acc = acc * x + c
    return acc
