"""Exact linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def integer_rows(M) -> list[list[int]]:
    """Scale each row of a rational matrix to integers (rank-preserving)."""
    out = []
    for row in M:
        den = 1
        for v in row:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def bareiss_rank(M, stop_at: int | None = None) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination.

    Rows are scaled to integers first. ``stop_at`` returns early once the
    rank reaches that value.
    """
    A = integer_rows(M)
    if not A or not A[0]:
        return 0
    nrows, ncols = len(A), len(A[0])
    if nrows > ncols:
        A = [list(col) for col in zip(*A)]
        nrows, ncols = ncols, nrows
    prev = 1
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((i for i in range(rank, nrows) if A[i][col]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        prow = A[rank]
        pv = prow[col]
        tail = prow[col + 1:]
        for i in range(rank + 1, nrows):
            row = A[i]
            f = row[col]
            if f:
                row[col + 1:] = [(a * pv - f * b) // prev for a, b in zip(row[col + 1:], tail)]
            else:
                row[col + 1:] = [(a * pv) // prev for a in row[col + 1:]]
            row[col] = 0
        prev = pv
        rank += 1
        if stop_at is not None and rank >= stop_at:
            return rank
    return rank


def rref(M):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(v) for v in row] for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A[:r], pivots


def primitive(v) -> list[int]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def nullspace(M, ncols: int | None = None) -> list[list[int]]:
    """Integer basis of the right kernel of a rational matrix."""
    if ncols is None:
        ncols = len(M[0])
    if not M:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def solve(A, b):
    """Exact solution of a consistent system ``A x = b`` (least-norm not implied).

    Raises ``ValueError`` when the system is inconsistent.
    """
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    ncols = len(A[0])
    R, pivots = rref(aug)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[-1]
    return x
