"""Exact univariate polynomial arithmetic and Sturm real-root counting.

Polynomials are coefficient lists in *descending* degree order with
integer or Fraction entries, e.g. ``[1, 0, -2]`` is ``t^2 - 2``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def strip(p) -> list:
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return list(p[i:])


def degree(p) -> int:
    return len(strip(p)) - 1


def derivative(p) -> list:
    p = strip(p)
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def evaluate(p, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def to_integer(p) -> list[int]:
    """Positive rational multiple of ``p`` with coprime integer coefficients."""
    p = strip(p)
    den = 1
    for c in p:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _signed_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b, scaled by a *positive* constant."""
    a = list(a)
    lb = b[0]
    scale = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(a) >= len(b) and a:
        la = a[0]
        # a <- |lb| * a - sgn(lb) * la * t^k * b  (kills the leading term)
        a = [scale * x for x in a]
        for i, c in enumerate(b):
            a[i] -= sgn * la * c
        a = strip(a)
    return to_integer(a) if a else []


def poly_gcd(p, q) -> list[int]:
    """Primitive integer gcd (positive leading coefficient)."""
    a, b = to_integer(p), to_integer(q)
    if not a:
        return _normalize_sign(b)
    while b:
        a, b = b, _signed_prem(a, b)
    return _normalize_sign(a)


def _normalize_sign(p):
    return [-c for c in p] if p and p[0] < 0 else p


def is_square_free(p) -> bool:
    p = strip(p)
    if len(p) <= 2:
        return bool(p)
    return degree(poly_gcd(p, derivative(p))) == 0


def sturm_chain(p) -> list[list[int]]:
    p = to_integer(p)
    chain = [p, to_integer(derivative(p))]
    while chain[-1] and degree(chain[-1]) > 0:
        r = _signed_prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _signs_at_infinity(chain, positive: bool) -> list[int]:
    out = []
    for q in chain:
        s = 1 if q[0] > 0 else -1
        if not positive and (len(q) - 1) % 2 == 1:
            s = -s
        out.append(s)
    return out


def count_real_roots(p, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]`` (whole line by default)."""
    p = strip(p)
    if len(p) <= 1:
        return 0
    chain = sturm_chain(p)
    v_lo = _sign_changes(_signs_at_infinity(chain, False) if lo is None else [evaluate(q, lo) for q in chain])
    v_hi = _sign_changes(_signs_at_infinity(chain, True) if hi is None else [evaluate(q, hi) for q in chain])
    return v_lo - v_hi


def root_bound(p) -> Fraction:
    """Cauchy bound: every root has absolute value below this."""
    p = strip(p)
    lead = abs(Fraction(p[0]))
    return 1 + max((abs(Fraction(c)) / lead for c in p[1:]), default=Fraction(0))


def isolate_real_roots(p, width=Fraction(1, 2**20)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals ``(a, b]``, each holding exactly one real root.

    ``p`` must be square-free.  Intervals are bisected down to ``width``.
    """
    p = strip(p)
    if len(p) <= 1:
        return []
    chain = sturm_chain(p)

    def changes(x):
        return _sign_changes([evaluate(q, x) for q in chain])

    B = root_bound(p)
    out = []
    stack = [(-B, B, changes(-B), changes(B))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        m = (a + b) / 2
        vm = changes(m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    return sorted(out)
