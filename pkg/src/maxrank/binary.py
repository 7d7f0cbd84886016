"""Exact Waring rank of binary forms (Sylvester's algorithm), over C and R.

A binary d-form ``F = sum_i f_i x^(d-i) y^i`` is stored by its plain
monomial coefficients ``f_0..f_d``.  With the apolarity normalization
``a_i = f_i / binom(d, i)`` the r-th catalecticant is the Hankel matrix
``(a_{i+j})`` of shape ``(d-r+1) x (r+1)``.  A kernel vector ``c`` is read
as the binary r-form ``q = sum_j c_j x^(r-j) y^j``; a root ``(alpha:beta)``
of ``q`` corresponds to the linear form ``alpha*x + beta*y``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import sturm
from .exact import nullspace, primitive, solve
from .rng import substream
from .variety import Decomposition, Term, VarietySpec


class BinaryFormError(ValueError):
    pass


@dataclass(frozen=True)
class BinaryForm:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise BinaryFormError("a binary form needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> BinaryForm:
        return parse_form(text, degree)

    def __str__(self) -> str:
        return format_form(self.coeffs)

    def substitute(self, A) -> BinaryForm:
        """F(a*x + b*y, c*x + e*y) for ``A = [[a, b], [c, e]]``."""
        (a, b), (c, e) = A
        d = self.d
        out = [Fraction(0)] * (d + 1)
        # (a x + b y)^(d-i) (c x + e y)^i
        for i, f in enumerate(self.coeffs):
            if not f:
                continue
            p = _binom_expand(a, b, d - i)
            q = _binom_expand(c, e, i)
            for u, pu in enumerate(p):
                for v, qv in enumerate(q):
                    out[u + v] += f * pu * qv
        return BinaryForm(out)

    def scaled(self, c) -> BinaryForm:
        return BinaryForm([c * f for f in self.coeffs])


def _binom_expand(a, b, n) -> list:
    return [math.comb(n, j) * a ** (n - j) * b**j for j in range(n + 1)]


_TOKEN = re.compile(r"\s*(?:(\d+)|([xy])|(\*\*|\^)|([-+*]))")


def parse_form(text: str, degree: int | None = None) -> BinaryForm:
    """Parse a homogeneous polynomial in x, y such as ``"x^3 - 3*x*y^2"``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise BinaryFormError(f"cannot parse {text!r} at position {pos}")
        tokens.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    if not tokens:
        raise BinaryFormError("empty form")
    terms: dict[tuple[int, int], int] = {}
    i = 0

    def expect_int() -> int:
        nonlocal i
        if i >= len(tokens) or not tokens[i].isdigit():
            raise BinaryFormError(f"expected an exponent in {text!r}")
        i += 1
        return int(tokens[i - 1])

    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        coef, ex, ey = sign, 0, 0
        seen_factor = False
        while i < len(tokens):
            tok = tokens[i]
            if tok.isdigit():
                i += 1
                base = int(tok)
                if i < len(tokens) and tokens[i] in ("^", "**"):
                    i += 1
                    base = base ** expect_int()
                coef *= base
            elif tok in ("x", "y"):
                i += 1
                power = 1
                if i < len(tokens) and tokens[i] in ("^", "**"):
                    i += 1
                    power = expect_int()
                if tok == "x":
                    ex += power
                else:
                    ey += power
            else:
                raise BinaryFormError(f"unexpected {tok!r} in {text!r}")
            seen_factor = True
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                if i >= len(tokens) or tokens[i] in "+-*":
                    raise BinaryFormError(f"dangling operator in {text!r}")
                continue
            break
        if not seen_factor:
            raise BinaryFormError(f"dangling operator in {text!r}")
        terms[(ex, ey)] = terms.get((ex, ey), 0) + coef
    degrees = {ex + ey for (ex, ey), c in terms.items() if c}
    if len(degrees) > 1:
        raise BinaryFormError(f"{text!r} is not homogeneous")
    d = degree if degree is not None else (degrees.pop() if degrees else 0)
    if degrees and d not in degrees and terms:
        raise BinaryFormError(f"{text!r} does not have degree {d}")
    coeffs = [Fraction(0)] * (d + 1)
    for (ex, ey), c in terms.items():
        if c:
            coeffs[ey] += c
    return BinaryForm(coeffs)


def format_form(coeffs) -> str:
    d = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = []
        if d - i:
            mono.append("x" if d - i == 1 else f"x^{d - i}")
        if i:
            mono.append("y" if i == 1 else f"y^{i}")
        body = "*".join(mono)
        mag = abs(c)
        if not body:
            term = str(mag)
        elif mag == 1:
            term = body
        else:
            term = f"{mag}*{body}"
        parts.append(("-" if c < 0 else "+", term))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {t}" for s, t in parts[1:])


# --- catalecticants and apolar forms -----------------------------------------


def normalized(F: BinaryForm) -> list[Fraction]:
    d = F.d
    return [c / math.comb(d, i) for i, c in enumerate(F.coeffs)]


def catalecticant(F: BinaryForm, r: int) -> list[list[Fraction]]:
    """Hankel matrix ``(a_{i+j})`` of shape ``(d-r+1) x (r+1)``."""
    d = F.d
    if not 0 <= r <= d:
        raise BinaryFormError(f"need 0 <= r <= {d}")
    a = normalized(F)
    return [[a[i + j] for j in range(r + 1)] for i in range(d - r + 1)]


def apolar_kernel(F: BinaryForm, r: int) -> list[list[int]]:
    """Integer basis of the degree-r forms apolar to F."""
    return nullspace(catalecticant(F, r), r + 1)


def _infinite_multiplicity(q) -> int:
    """Multiplicity of the root (1:0), i.e. number of leading zero coefficients."""
    k = 0
    while k < len(q) and q[k] == 0:
        k += 1
    return k


def is_square_free_form(q) -> bool:
    if not any(q):
        return False
    if _infinite_multiplicity(q) > 1:
        return False
    return sturm.is_square_free(q)


def is_real_rooted_form(q) -> bool:
    """Square-free with every projective root real (certified by Sturm)."""
    if not is_square_free_form(q):
        return False
    p = sturm.strip(q)
    return sturm.count_real_roots(p) == len(p) - 1


def _forms_gcd(basis) -> tuple[int, list[int]]:
    """(multiplicity at infinity, finite part) of the gcd of binary forms."""
    inf = min(_infinite_multiplicity(q) for q in basis)
    g: list[int] = []
    for q in basis:
        g = sturm.poly_gcd(g, q) if g else sturm.to_integer(q)
        if len(g) == 1:
            break
    return inf, g


def _fixed_part_ok(basis, real: bool) -> bool:
    inf, g = _forms_gcd(basis)
    if inf > 1 or not sturm.is_square_free(g):
        return False
    if real and sturm.count_real_roots(g) != len(g) - 1:
        return False
    return True


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    apolar_form: BinaryForm
    field: str

    def verify(self, F: BinaryForm) -> bool:
        q = self.apolar_form
        if q.d != self.rank:
            return False
        if not apolar(F, q):
            return False
        c = q.coeffs
        return is_real_rooted_form(c) if self.field == "real" else is_square_free_form(c)


def apolar(F: BinaryForm, q: BinaryForm) -> bool:
    r = q.d
    if r > F.d:
        return True
    M = catalecticant(F, r)
    return all(sum(m * c for m, c in zip(row, q.coeffs)) == 0 for row in M)


def _combine(basis, weights) -> list[int]:
    out = [0] * len(basis[0])
    for w, v in zip(weights, basis):
        if w:
            for i, x in enumerate(v):
                out[i] += w * x
    return out


def _weight_sequence(m: int, seed: int):
    """Deterministic small-integer combinations, then seeded random ones."""
    for k in range(m):
        yield [int(i == k) for i in range(m)]
    for t in range(1, 64):
        yield [t**i for i in range(m)]
    rng = substream(seed, m)
    for _ in range(2000):
        yield [int(v) for v in rng.integers(-50, 51, size=m)]


def complex_rank(F: BinaryForm, seed: int = 0) -> RankCertificate:
    """Complex Waring rank with a square-free apolar witness."""
    if F.is_zero():
        raise BinaryFormError("the zero form has no rank")
    for r in range(1, F.d + 1):
        K = apolar_kernel(F, r)
        if not K or not _fixed_part_ok(K, real=False):
            continue
        # a square-free member exists: the moving part of the kernel is
        # base-point free and the fixed part is square-free
        for w in _weight_sequence(len(K), seed):
            q = _combine(K, w)
            if is_square_free_form(q):
                return RankCertificate(r, BinaryForm(primitive(q)), "complex")
        raise RuntimeError(f"no square-free apolar form found at r={r}")  # pragma: no cover
    raise RuntimeError("rank search exceeded the degree")  # pragma: no cover


# --- real rank ----------------------------------------------------------------


def _dehom_float(q) -> np.ndarray:
    return np.array([float(c) for c in sturm.strip(q)])


def _looks_real_rooted(q) -> bool:
    p = _dehom_float(q)
    if len(p) <= 2:
        return len(p) >= 1 and _infinite_multiplicity(q) <= 1 and any(p)
    if _infinite_multiplicity(q) > 1:
        return False
    roots = np.roots(p)
    scale = 1.0 + np.abs(roots)
    return bool(np.all(np.abs(roots.imag) <= 1e-7 * scale))


def _rational(x: float, bits: int = 30) -> Fraction:
    return Fraction(round(x * 2**bits), 2**bits)


def _simple_between(lo: float, hi: float) -> Fraction:
    """A rational with small denominator strictly inside (lo, hi)."""
    mid = (lo + hi) / 2
    for limit in (1, 4, 16, 256, 2**16, 2**32):
        f = Fraction(mid).limit_denominator(limit)
        if lo < f < hi:
            return f
    return _rational(mid)


def _divide_exact(p, g) -> list[Fraction]:
    """Quotient of p by g (descending coefficients); g must divide p."""
    p = [Fraction(c) for c in sturm.strip(p)]
    g = [Fraction(c) for c in sturm.strip(g)]
    out = []
    while len(p) >= len(g):
        c = p[0] / g[0]
        out.append(c)
        for i, gi in enumerate(g):
            p[i] -= c * gi
        p.pop(0)
    return out


def _pencil_angles(A: np.ndarray, B: np.ndarray, fixed_roots) -> list[float]:
    """Angles theta in [0, pi) where cos(theta) A + sin(theta) B may gain a double root."""
    angles = [math.atan2(-A[0], B[0]) % math.pi]  # the member with a root at infinity
    W = np.trim_zeros(np.polysub(np.polymul(A, np.polyder(B)), np.polymul(B, np.polyder(A))), "f")
    points = list(fixed_roots)
    if len(W) > 1:
        points += [t.real for t in np.roots(W) if abs(t.imag) <= 1e-8 * (1 + abs(t))]
    for t in points:
        a, b = np.polyval(A, t), np.polyval(B, t)
        if a or b:
            angles.append(math.atan2(-a, b) % math.pi)
    return sorted(set(angles))


def _pencil_candidates(q1, q2):
    """Rational members of the pencil spanned by q1, q2, several per arc between breakpoints.

    The number of distinct real roots is constant on each open arc between
    members with a double root, so sampling every arc finds a real-rooted
    square-free member whenever one exists.
    """
    inf, g = _forms_gcd([q1, q2])
    p1, p2 = sturm.strip(q1), sturm.strip(q2)
    # dehomogenized moving parts, padded so both have the same length
    a = _divide_exact(p1, g) if p1 else []
    b = _divide_exact(p2, g) if p2 else []
    width = max(len(a), len(b))
    A = np.array([0.0] * (width - len(a)) + [float(c) for c in a])
    B = np.array([0.0] * (width - len(b)) + [float(c) for c in b])
    fixed = [t.real for t in (np.roots([float(c) for c in g]) if len(g) > 1 else [])]
    angles = _pencil_angles(A, B, fixed)
    arcs = list(zip(angles, angles[1:] + [angles[0] + math.pi]))
    arcs.sort(key=lambda arc: arc[0] - arc[1])  # widest first
    for lo, hi in arcs:
        if lo < math.pi < hi:
            lo, hi = lo - math.pi, hi - math.pi
        for frac in (0.5, 0.25, 0.75):
            # half-angle substitution u = tan(theta/2) is monotone on (-pi, pi)
            theta, slack = lo + frac * (hi - lo), 0.1 * (hi - lo)
            u = _simple_between(math.tan((theta - slack) / 2), math.tan((theta + slack) / 2))
            yield (1 - u * u, 2 * u)


_SMALL = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2),
          Fraction(-1, 2), Fraction(3), Fraction(-3), Fraction(1, 3), Fraction(-1, 3),
          Fraction(3, 2), Fraction(-3, 2), Fraction(5), Fraction(-5), Fraction(1, 5), Fraction(-1, 5)]


def _root_tuples(m: int, seed: int, tries: int, small_only: bool = False):
    yield from itertools.islice(itertools.combinations(_SMALL, m - 1), tries // 3)
    if small_only:
        return
    rng = substream(seed, 1, m)
    for _ in range(tries):
        ts = tuple(_rational(math.tan(math.pi * (x - 0.5)), 12) for x in rng.random(m - 1))
        if len(set(ts)) == m - 1:
            yield ts


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def _radical_inverse(k: int, base: int) -> float:
    out, denom = 0.0, 1.0
    while k:
        denom *= base
        k, digit = divmod(k, base)
        out += digit / denom
    return out


def _point_tuples(size: int, seed: int, tries: int):
    """Tuples of real points: small rationals, then a Halton sequence in angle space."""
    yield from itertools.islice(itertools.combinations([float(t) for t in _SMALL], size), tries // 4)
    shift = substream(seed, 2, size).random(size) if seed else np.zeros(size)
    # the search region grows with the number of points
    for k in range(1, tries if size == 1 else 10 * tries):
        u = [(_radical_inverse(k, _PRIMES[j]) + shift[j]) % 1.0 for j in range(size)]
        yield tuple(math.tan(math.pi * (x - 0.5)) for x in u)


def _screen_real_rooted(coeffs: np.ndarray) -> np.ndarray:
    """Indices of rows (descending coefficients) whose roots all look real."""
    lead = coeffs[:, 0]
    scale = np.abs(coeffs).max(axis=1)
    ok = np.abs(lead) > 1e-9 * scale
    idx = np.nonzero(ok)[0]
    if not len(idx):
        return idx
    c = coeffs[idx] / lead[idx, None]
    deg = c.shape[1] - 1
    comp = np.zeros((len(idx), deg, deg))
    comp[:, 0, :] = -c[:, 1:]
    comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    real = np.all(np.abs(roots.imag) <= 1e-7 * (1 + np.abs(roots)), axis=1)
    return idx[real]


def _batched_roots(P: np.ndarray) -> np.ndarray:
    """Roots of each row of P (descending, nonzero leading coefficient) via companion matrices."""
    c = P[:, 1:] / P[:, :1]
    deg = c.shape[1]
    if deg == 0:
        return np.zeros((len(P), 0), dtype=complex)
    comp = np.zeros((len(P), deg, deg))
    comp[:, 0, :] = -c
    comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
    return np.linalg.eigvals(comp)


def _batched_polyval(P: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Row i of P evaluated at every entry of row i of t."""
    acc = np.zeros(t.shape, dtype=np.result_type(P, t))
    for k in range(P.shape[1]):
        acc = acc * t + P[:, k : k + 1]
    return acc


def _deflate(P: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Quotient of each row of P by (x - t_i) (synthetic division)."""
    Q = np.empty((P.shape[0], P.shape[1] - 1))
    Q[:, 0] = P[:, 0]
    for k in range(1, P.shape[1] - 1):
        Q[:, k] = P[:, k] + t * Q[:, k - 1]
    return Q


def _wronskian(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    L = A.shape[1]
    powers = np.arange(L - 1, 0, -1)
    dA, dB = A[:, :-1] * powers, B[:, :-1] * powers
    W = np.zeros((A.shape[0], 2 * L - 2))
    for i in range(L):
        W[:, i : i + L - 1] += A[:, i : i + 1] * dB - B[:, i : i + 1] * dA
    return W


def _sweep_subpencils(Kf: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Weights of sample members on every arc of every sub-pencil.

    Row i of T holds m-2 real points; the kernel members vanishing there form
    a pencil whose real-root count only changes at members with a double
    root. Returns an array (n, arcs * 3, m) of kernel weights.
    """
    n, m = T.shape[0], Kf.shape[0]
    exponents = np.arange(Kf.shape[1] - 1, -1, -1)
    V = (T[..., None] ** exponents) @ Kf.T  # (n, m-2, m)
    Wt = np.linalg.svd(V)[2][:, -2:, :]  # (n, 2, m)
    A, B = Wt[:, 0, :] @ Kf, Wt[:, 1, :] @ Kf
    for j in range(T.shape[1]):
        A, B = _deflate(A, T[:, j]), _deflate(B, T[:, j])
    W = _wronskian(A, B)
    W = W[:, np.argmax(np.abs(W) > 1e-12 * np.abs(W).max(axis=1, keepdims=True), axis=1).min():]
    lead_ok = np.abs(W[:, 0]) > 1e-12 * np.abs(W).max(axis=1)
    W[~lead_ok, 0] = 1e-12 * np.abs(W[~lead_ok]).max(axis=1)  # root pushed near infinity
    roots = _batched_roots(W)
    real = np.abs(roots.imag) <= 1e-8 * (1 + np.abs(roots))
    pts = np.concatenate([np.where(real, roots.real, np.nan), T], axis=1)
    a, b = _batched_polyval(A, np.nan_to_num(pts)), _batched_polyval(B, np.nan_to_num(pts))
    angles = np.arctan2(-a, b) % np.pi
    angles[np.isnan(pts)] = np.nan
    inf_angle = (np.arctan2(-A[:, 0], B[:, 0]) % np.pi)[:, None]
    angles = np.sort(np.concatenate([angles, inf_angle], axis=1), axis=1)
    first = angles[:, :1]
    angles = np.where(np.isnan(angles), first + np.pi, angles)
    angles = np.concatenate([angles, first + np.pi], axis=1)
    lo, hi = angles[:, :-1], angles[:, 1:]
    theta = np.concatenate([lo + f * (hi - lo) for f in (0.5, 0.25, 0.75)], axis=1)  # (n, k)
    return np.cos(theta)[..., None] * Wt[:, None, 0, :] + np.sin(theta)[..., None] * Wt[:, None, 1, :]


def _subpencil_candidates(K, seed: int, tries: int):
    """Kernel weights found by sweeping pencils through m-2 fixed real points.

    Candidates are screened in floating point in batches; members that look
    real-rooted are rounded to rational weights for exact certification.
    """
    m = len(K)
    Kf = np.array([[float(c) for c in q] for q in K])  # (m, r+1)
    norms = np.abs(Kf).max(axis=1)
    Kf /= norms[:, None]
    tuples = (ts for ts in _point_tuples(m - 2, seed, tries) if len(set(ts)) == len(ts))
    seen = set()
    size = 8
    while batch := list(itertools.islice(tuples, size)):
        size *= 4
        weights = _sweep_subpencils(Kf, np.array(batch, dtype=float)).reshape(-1, m)
        weights = weights[np.all(np.isfinite(weights), axis=1)]
        for i in _screen_real_rooted(weights @ Kf):
            w = weights[i] / norms
            w /= np.abs(w).max()
            key = tuple(np.round(w, 6))
            if key in seen:
                continue
            seen.add(key)
            yield [_rational(x, 40) for x in w]


def _prescribed_root_candidates(K, seed: int, tries: int, small_only: bool = False):
    """Kernel members forced to vanish at m-1 rational points.

    Candidates are screened in floating point in one batch; only those that
    look real-rooted are rebuilt exactly.
    """
    m = len(K)
    tuples = _root_tuples(m, seed, tries, small_only)
    Kf = np.array([[float(c) for c in q] for q in K])  # (m, r+1)
    exponents = np.arange(Kf.shape[1] - 1, -1, -1)
    size = 8
    while batch := list(itertools.islice(tuples, size)):
        size *= 4
        T = np.array([[float(t) for t in ts] for ts in batch])  # (n, m-1)
        V = (T[..., None] ** exponents) @ Kf.T  # (n, m-1, m)
        w = np.linalg.svd(V)[2][:, -1, :]  # (n, m)
        for i in _screen_real_rooted(w @ Kf):
            exact = [[sturm.evaluate(q, t) for q in K] for t in batch[i]]
            null = nullspace(exact, m)
            if len(null) == 1:
                yield null[0]


def real_rank(F: BinaryForm, seed: int = 0, tries: int = 300) -> RankCertificate:
    """Real Waring rank with an apolar witness having distinct real roots.

    Kernels of dimension 2 are swept exactly arc by arc. Larger kernels are
    searched through pencils pinned at a low-discrepancy family of real
    points; a miss there can only overestimate the rank, never underestimate
    it, since every returned witness is certified exactly.
    """
    if F.is_zero():
        raise BinaryFormError("the zero form has no rank")
    d = F.d
    for r in range(1, d + 1):
        K = apolar_kernel(F, r)
        if not K or not _fixed_part_ok(K, real=True):
            continue
        m = len(K)
        if m == 1:
            cands = iter([[1]])
        elif m == 2:
            cands = _pencil_candidates(K[0], K[1])
        else:
            # small rational roots first: they give exact decompositions
            cands = itertools.chain(
                _prescribed_root_candidates(K, seed, tries, small_only=True),
                _subpencil_candidates(K, seed, tries),
            )
        for w in cands:
            q = _combine(K, w)
            if _looks_real_rooted(q) and is_real_rooted_form(q):
                return RankCertificate(r, BinaryForm(primitive(q)), "real")
        if r == d:
            # every kernel member through d-1 distinct real points is real-rooted
            for w in _prescribed_root_candidates(K, seed + 1, 10 * tries):
                q = _combine(K, w)
                if is_real_rooted_form(q):
                    return RankCertificate(r, BinaryForm(primitive(q)), "real")
    raise RuntimeError("real rank search failed")  # pragma: no cover


# --- explicit decompositions ----------------------------------------------------


def _exact_rational_roots(p) -> list[Fraction] | None:
    """All roots of p if they are rational, else None (verified exactly)."""
    p = sturm.strip(p)
    deg = len(p) - 1
    if deg == 0:
        return []
    roots = mpmath.polyroots([mpmath.mpf(int(c)) if isinstance(c, int) else mpmath.mpf(c.numerator) / c.denominator for c in p],
                             maxsteps=200, extraprec=200)
    out = []
    for z in roots:
        if abs(mpmath.im(z)) > mpmath.mpf(10) ** -20:
            return None
        f = Fraction(str(mpmath.nstr(mpmath.re(z), 30))).limit_denominator(10**12)
        if sturm.evaluate(p, f) != 0:
            return None
        out.append(f)
    return out


def _linear_forms(q, roots):
    """Parameters (alpha, beta) of the linear forms, one per projective root."""
    params = [(t, 1) for t in roots]
    if _infinite_multiplicity(q) == 1:
        params.append((1, 0))
    return params


def sylvester_decompose(cert: RankCertificate, F: BinaryForm, precision_bits: int = 128) -> Decomposition:
    """Explicit Waring decomposition of F from a square-free apolar form.

    Rational roots give an exact decomposition; otherwise roots are found
    at ``precision_bits`` and coefficients solved at that precision, with
    precision doubled until the relative residual is below 1e-10.
    """
    q = list(cert.apolar_form.coeffs)
    d = F.d
    spec = VarietySpec.veronese(2, d)
    a = normalized(F)
    roots = _exact_rational_roots(q)
    if roots is not None:
        params = _linear_forms(q, roots)
        A = [[al ** (d - i) * be**i for (al, be) in params] for i in range(d + 1)]
        lam = solve(A, a)
        terms = [Term(c, (Fraction(al), Fraction(be))) for c, (al, be) in zip(lam, params) if c]
        return Decomposition(spec, cert.field, terms, None)
    bits = precision_bits
    while bits <= 2048:
        dec, res = _numeric_decompose(q, a, d, spec, cert.field, bits)
        if res < 1e-10:
            return dec
        bits *= 2
    raise RuntimeError("Sylvester decomposition did not reach the residual target")


def _numeric_decompose(q, a, d, spec, field, bits):
    with mpmath.workprec(bits):
        p = [mpmath.mpf(c.numerator) / c.denominator for c in map(Fraction, sturm.strip(q))]
        roots = mpmath.polyroots(p, maxsteps=400, extraprec=bits) if len(p) > 1 else []
        if field == "real":
            roots = [mpmath.re(z) for z in roots]
        params = _linear_forms(q, list(roots))
        A = mpmath.matrix([[al ** (d - i) * be**i for (al, be) in params] for i in range(d + 1)])
        b = mpmath.matrix([mpmath.mpf(x.numerator) / x.denominator for x in a])
        lam, _ = mpmath.qr_solve(A, b) if field == "real" else _complex_lstsq(A, b)
        fit = A * lam
        res = mpmath.norm(fit - b) / mpmath.norm(b)
        cast = float if field == "real" else complex
        terms = [Term(cast(lam[i]), (cast(al), cast(be))) for i, (al, be) in enumerate(params)]
    dec = Decomposition(spec, field, terms, float(res))
    return dec, float(res)


def _complex_lstsq(A, b):
    AH = A.H
    return mpmath.lu_solve(AH * A, AH * b), None
