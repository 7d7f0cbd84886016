"""Real typical ranks by seeded sampling with exact rank oracles."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .binary import BinaryForm, complex_rank, real_rank
from .decompose import FitFailure, FitOptions, two_point_split_real
from .rng import derive_seed, substream
from .variety import AmbientPoint, VarietySpec

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.01
BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class TypicalRankReport:
    spec: VarietySpec
    samples: int
    seed: int
    histogram: dict
    r_gen_complex: int
    threshold: float = DEFAULT_THRESHOLD
    rejected: int = 0

    @property
    def accepted(self) -> int:
        return sum(self.histogram.values())

    @property
    def observed_typical(self) -> list[int]:
        n = self.accepted
        return sorted(r for r, c in self.histogram.items() if n and c / n > self.threshold)

    @property
    def min_typical(self) -> int | None:
        typ = self.observed_typical
        return typ[0] if typ else None

    def frequency(self, r: int) -> float:
        return self.histogram.get(r, 0) / self.accepted if self.accepted else 0.0

    def as_dict(self) -> dict:
        return {
            "spec": {"family": self.spec.family, "params": self.spec.params},
            "samples": self.samples,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "rejected": self.rejected,
            "threshold": self.threshold,
            "observed_typical": self.observed_typical,
            "min_typical": self.min_typical,
            "r_gen_complex": self.r_gen_complex,
        }


def random_binary_form(d: int, rng, denominator_bits: int = 10) -> BinaryForm:
    """Standard normal monomial coefficients rounded to dyadic rationals."""
    scale = 2**denominator_bits
    while True:
        coeffs = [Fraction(int(round(x * scale)), scale) for x in rng.standard_normal(d + 1)]
        if any(coeffs):
            return BinaryForm(coeffs)


def sample_binary_typical(
    d: int, samples: int = 10_000, seed: int = 0, threshold: float = DEFAULT_THRESHOLD
) -> TypicalRankReport:
    """Histogram of exact real Waring ranks of random binary d-forms."""
    if d < 2:
        raise ValueError("need d >= 2")
    hist: Counter = Counter()
    for i in range(samples):
        F = random_binary_form(d, substream(seed, i))
        hist[real_rank(F).rank] += 1
    return TypicalRankReport(
        VarietySpec.veronese(2, d), samples, seed, dict(sorted(hist.items())),
        math.ceil((d + 1) / 2), threshold,
    )


# --- 2x2x2 tensors -----------------------------------------------------------------


def hyperdeterminant_222(T):
    """Cayley's hyperdeterminant of a 2x2x2 tensor given row-major (index 4i+2j+k).

    Exact for int / Fraction entries.
    """
    if len(T) != 8:
        raise ValueError("a 2x2x2 tensor has 8 coefficients")
    a000, a001, a010, a011, a100, a101, a110, a111 = T
    return (
        a000**2 * a111**2 + a001**2 * a110**2 + a010**2 * a101**2 + a100**2 * a011**2
        - 2 * (a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111 + a000 * a100 * a011 * a111
               + a001 * a010 * a101 * a110 + a001 * a100 * a011 * a110 + a010 * a100 * a011 * a101)
        + 4 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111)
    )


def real_rank_222(T) -> int | None:
    """2 if the hyperdeterminant is positive, 3 if negative, None on the boundary."""
    delta = hyperdeterminant_222(T)
    scale = float(np.linalg.norm(np.asarray(T, dtype=float))) ** 4
    if abs(float(delta)) <= BOUNDARY_RTOL * scale:
        return None
    return 2 if delta > 0 else 3


def sample_222_typical(
    samples: int = 10_000, seed: int = 0, threshold: float = DEFAULT_THRESHOLD
) -> TypicalRankReport:
    """Real rank histogram of standard normal 2x2x2 tensors."""
    hist: Counter = Counter()
    rejected = 0
    for i in range(samples):
        T = substream(seed, i).standard_normal(8)
        r = real_rank_222(T)
        if r is None:
            rejected += 1
        else:
            hist[r] += 1
    return TypicalRankReport(
        VarietySpec.segre([2, 2, 2]), samples, seed, dict(sorted(hist.items())), 2, threshold, rejected
    )


def sample_negative_hyperdeterminant(rng) -> np.ndarray:
    while True:
        T = rng.standard_normal(8)
        if real_rank_222(T) == 3:
            return T


# --- r_max <= 2 r0 check ---------------------------------------------------------


@dataclass(frozen=True)
class R0BoundReport:
    spec: VarietySpec
    r0: int
    seed: int
    lengths: tuple[int, ...]
    failures: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def attempted(self) -> int:
        return len(self.lengths) + len(self.failures)

    @property
    def successes(self) -> int:
        return sum(1 for n in self.lengths if n <= 2 * self.r0)

    @property
    def success_rate(self) -> float:
        return self.successes / self.attempted if self.attempted else 0.0

    @property
    def max_length(self) -> int:
        return max(self.lengths, default=0)

    def as_dict(self) -> dict:
        return {
            "spec": {"family": self.spec.family, "params": self.spec.params},
            "r0": self.r0,
            "seed": self.seed,
            "attempted": self.attempted,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "max_length": self.max_length,
            "failures": list(self.failures),
        }


def default_witnesses(spec: VarietySpec) -> list[AmbientPoint]:
    """Adversarial real targets: x^(d-1) y for binary forms."""
    if spec.family == "veronese" and spec.shape[0] == 2 and spec.shape[1] >= 2:
        d = spec.shape[1]
        coeffs = [0.0] * (d + 1)
        coeffs[1] = 1.0
        return [AmbientPoint(spec, tuple(coeffs), "real")]
    return []


def _sample_target(spec: VarietySpec, sampler: str, rng) -> AmbientPoint:
    if sampler == "negative_hyperdeterminant":
        if spec != VarietySpec.segre([2, 2, 2]):
            raise ValueError("negative_hyperdeterminant sampling needs format 2x2x2")
        vec = sample_negative_hyperdeterminant(rng)
    elif sampler == "gaussian":
        vec = rng.standard_normal(spec.ambient_affine_dim)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    return AmbientPoint(spec, tuple(vec.tolist()), "real")


def verify_r0_bound(
    spec: VarietySpec,
    r0: int,
    samples: int = 100,
    seed: int = 0,
    opts: FitOptions = FitOptions(),
    sampler: str = "gaussian",
    witnesses: list[AmbientPoint] | None = None,
) -> R0BoundReport:
    """Real-split witnesses and random targets; check each length is <= 2 r0."""
    targets = list(default_witnesses(spec) if witnesses is None else witnesses)
    for i in range(samples):
        targets.append(_sample_target(spec, sampler, substream(seed, i)))
    lengths, failures = [], []
    for i, target in enumerate(targets):
        fit_seed = derive_seed(seed, 1, i)
        try:
            rep = two_point_split_real(spec, target, r0, replace(opts, seed=fit_seed))
        except FitFailure as exc:
            log.warning("optimizer failure on target %d (fit seed %d): %s", i, fit_seed, exc)
            failures.append({"index": i, "fit_seed": fit_seed, "best_residual": exc.best_residual})
            continue
        lengths.append(rep.length)
    return R0BoundReport(spec, r0, seed, tuple(lengths), tuple(failures))


def complex_rank_histogram(d: int, samples: int, seed: int = 0) -> Counter:
    """Complex Waring ranks of random binary d-forms (the generic rank check)."""
    hist: Counter = Counter()
    for i in range(samples):
        hist[complex_rank(random_binary_form(d, substream(seed, i))).rank] += 1
    return hist
