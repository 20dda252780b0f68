"""Dense integer polynomial arithmetic on ascending coefficient tuples.

Everything here is exact.  Polynomials are trimmed: the last entry is the
nonzero leading coefficient, and the zero polynomial is the empty tuple.
"""

from __future__ import annotations

import math
from typing import Sequence

Poly = tuple[int, ...]


def trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def derivative(p: Poly) -> Poly:
    return trim(k * p[k] for k in range(1, len(p)))


def content(p: Poly) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return g


def primitive(p: Poly) -> Poly:
    """Divide out the content and make the leading coefficient positive."""
    if not p:
        return p
    g = content(p)
    if p[-1] < 0:
        g = -g
    return tuple(c // g for c in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def prem_abs(a: Poly, b: Poly) -> Poly:
    """Remainder of ``|lc(b)|^k * a`` modulo ``b`` with ``k = deg a - deg b + 1``.

    Using ``|lc(b)|`` keeps the multiplier positive, so signs survive; that
    matters for Sturm chains.
    """
    db = degree(b)
    k = degree(a) - db + 1
    if k <= 0:
        return a
    lcb = b[-1]
    r = list(a)
    steps = 0
    while len(r) - 1 >= db and r:
        lead = r[-1]
        shift = len(r) - 1 - db
        r = [lcb * c for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= lead * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        steps += 1
    r = tuple(r)
    if steps < k:
        f = lcb ** (k - steps)
        r = tuple(f * c for c in r)
    if lcb < 0 and k % 2 == 1:
        r = tuple(-c for c in r)
    return r


def divmod_monic(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of ``a`` by ``b``; ``b`` must have leading coefficient +-1."""
    lcb = b[-1]
    if lcb not in (1, -1):
        raise ValueError("divisor must be monic up to sign")
    db = degree(b)
    r = list(a)
    if len(r) - 1 < db:
        return (), trim(r)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * lcb
        q[i - db] = c
        if c:
            for j, bc in enumerate(b):
                r[i - db + j] -= c * bc
    return trim(q), trim(r[:db])


def gcd(a: Poly, b: Poly) -> Poly:
    """Primitive gcd via the primitive remainder sequence."""
    a, b = primitive(trim(a)), primitive(trim(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = primitive(prem_abs(a, b))
        a, b = b, r
    return primitive(a)


def exact_div(a: Poly, b: Poly) -> Poly:
    """``a / b`` when ``b`` divides ``a`` over the integers."""
    db = degree(b)
    lcb = b[-1]
    r = list(a)
    q = [0] * max(len(r) - db, 0)
    for i in range(len(r) - 1, db - 1, -1):
        c, m = divmod(r[i], lcb)
        if m:
            raise ValueError("division is not exact")
        q[i - db] = c
        if c:
            for j, bc in enumerate(b):
                r[i - db + j] -= c * bc
    if any(r[:db]):
        raise ValueError("division is not exact")
    return trim(q)


def evaluate(p: Poly, x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def hom_eval(p: Poly, a: int, b: int) -> int:
    """``b^deg(p) * p(a/b)`` by Horner's rule."""
    d = len(p) - 1
    acc = p[d]
    bp = 1
    for k in range(d - 1, -1, -1):
        bp *= b
        acc = acc * a + p[k] * bp
    return acc
