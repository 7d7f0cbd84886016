"""Secant dimensions by Terracini stacking, and closed-form generic ranks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exact import bareiss_rank
from .rng import nonzero_int_vector, substream
from .variety import VarietySpec, cone_jacobian

MODES = ("exact", "float")
SVD_RTOL = 1e-8

# (n, d) in number-of-variables convention, d >= 3
AH_EXCEPTIONS = frozenset({(3, 4), (4, 4), (5, 4), (5, 3)})


class DegenerateVarietyError(ValueError):
    """The secant varieties never fill the ambient space."""


@dataclass(frozen=True)
class TerraciniEstimate:
    spec: VarietySpec
    r: int
    observed_rank: int
    trials: int
    mode: str

    @property
    def fills_ambient(self) -> bool:
        return self.observed_rank == self.spec.ambient_affine_dim


@dataclass(frozen=True)
class GenericRankResult:
    spec: VarietySpec
    r_gen: int
    method: str
    exceptional: bool
    hypersurface_below: bool
    observed: dict = field(default_factory=dict, compare=False)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _float_rank(M: np.ndarray) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    if not len(s) or s[0] == 0:
        return 0
    return int(np.sum(s > SVD_RTOL * s[0]))


def _trial_rank(spec: VarietySpec, r: int, mode: str, rng, cap: int | None) -> int:
    P = spec.param_dim
    if mode == "exact":
        blocks = [cone_jacobian(spec, nonzero_int_vector(rng, P)) for _ in range(r)]
        stacked = [sum((b[i] for b in blocks), []) for i in range(spec.ambient_affine_dim)]
        return bareiss_rank(stacked, stop_at=cap)
    params = rng.standard_normal((r, P))
    J = spec.polymap().jacobian(params)  # (r, N, P)
    stacked = np.concatenate(list(J), axis=1)
    return _float_rank(stacked)


@lru_cache(maxsize=None)
def tangent_dimension(spec: VarietySpec, mode: str = "exact", trials: int = 5, seed: int = 0) -> int:
    """Affine dimension of the cone, as the Jacobian rank at random points."""
    _check_mode(mode)
    best = 0
    for t in range(trials):
        best = max(best, _trial_rank(spec, 1, mode, substream(seed, 0, t), spec.param_dim))
    return best


def terracini_dimension(
    spec: VarietySpec, r: int, trials: int = 5, mode: str = "exact", seed: int = 0
) -> TerraciniEstimate:
    """Affine dimension of the r-th secant variety (max over random trials)."""
    if r < 1 or trials < 1:
        raise ValueError("r and trials must be positive")
    _check_mode(mode)
    N = spec.ambient_affine_dim
    cap = min(r * tangent_dimension(spec, mode, trials, seed), N)
    best = 0
    for t in range(trials):
        best = max(best, _trial_rank(spec, r, mode, substream(seed, r, t), cap))
        if best >= cap:
            break
    return TerraciniEstimate(spec, r, best, trials, mode)


def generic_rank_terracini(
    spec: VarietySpec, trials: int = 5, mode: str = "exact", seed: int = 0
) -> GenericRankResult:
    """Least r whose secant variety fills the ambient space."""
    N = spec.ambient_affine_dim
    tdim = tangent_dimension(spec, mode, trials, seed)
    expected = math.ceil(N / tdim)
    observed: dict[int, int] = {}

    def rank_at(r: int) -> int:
        if r not in observed:
            observed[r] = terracini_dimension(spec, r, trials, mode, seed).observed_rank
        return observed[r]

    r = expected
    if rank_at(r) == N:
        while r > 1 and rank_at(r - 1) == N:
            r -= 1
    else:
        while rank_at(r) < N:
            r += 1
            if r > N:
                raise DegenerateVarietyError(f"{spec.label()} is degenerate: no secant variety fills")
    below = rank_at(r - 1) if r > 1 else 0
    return GenericRankResult(
        spec,
        r,
        "terracini",
        exceptional=r > expected,
        hypersurface_below=below == N - 1,
        observed=dict(sorted(observed.items())),
    )


def hypersurface_condition(n: int, d: int) -> bool:
    """Whether binom(n+d-1, n-1) is 1 mod n."""
    return math.comb(n + d - 1, n - 1) % n == 1


def waring_generic_rank(n: int, d: int) -> GenericRankResult:
    """Alexander-Hirschowitz generic Waring rank of n-variate d-forms."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    base = math.ceil(math.comb(n + d - 1, n - 1) / n)
    spec = VarietySpec.veronese(n, d)
    if d == 2:
        # rank-deficient symmetric matrices form the determinant hypersurface
        return GenericRankResult(spec, n, "closed_form", True, True)
    if (n, d) in AH_EXCEPTIONS:
        return GenericRankResult(spec, base + 1, "closed_form", True, True)
    return GenericRankResult(spec, base, "closed_form", False, hypersurface_condition(n, d))


def segre_generic_rank(formats, trials: int = 5, mode: str = "exact", seed: int = 0) -> GenericRankResult:
    """Generic tensor rank: closed form for 2x..x2 and nxnxn, else Terracini."""
    formats = tuple(formats)
    spec = VarietySpec.segre(formats)
    if all(f == 2 for f in formats):
        m = len(formats)
        return GenericRankResult(spec, math.ceil(2**m / (m + 1)), "closed_form", False, False)
    if len(formats) == 3 and len(set(formats)) == 1:
        n = formats[0]
        value = 5 if n == 3 else math.ceil(n**3 / (3 * n - 2))
        return GenericRankResult(spec, value, "closed_form", n == 3, n == 3)
    return generic_rank_terracini(spec, trials, mode, seed)


def power_forms_generic_count(n_vars: int, d: int, k: int) -> int:
    """Upper bound k^(n_vars-1) on the generic number of k-th powers of d-forms."""
    if n_vars < 1 or d < 1 or k < 1:
        raise ValueError("inputs must be positive")
    return k ** (n_vars - 1)
