"""Upper bounds on maximum rank and the Waring comparison tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dimension import AH_EXCEPTIONS, hypersurface_condition, waring_generic_rank

LABELS = (
    "TwiceGeneric",
    "TwiceGenericMinusOne",
    "AmbientMinusDim",
    "Proposition",
    "Jelisiejew",
    "BallicoDeParis",
    "Trivial",
)

# Exact maximum Waring ranks over C known in the literature, (n, d) -> r_max.
KNOWN_MAX_RANK = {
    (3, 3): (5, "plane cubics"),
    (3, 4): (7, "plane quartics"),
    (4, 3): (7, "cubic surfaces"),
}


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero when a < b or a < 0 (and binom(a, 0) = 1 for a >= 0)."""
    if a < 0 or b < 0 or a < b:
        return 0
    return math.comb(a, b)


def bound_twice_generic(r_gen: int) -> int:
    if r_gen < 1:
        raise ValueError("r_gen must be positive")
    return 2 * r_gen


def bound_hypersurface_refinement(r_gen: int) -> int:
    """Bound when the (r_gen - 1)-th secant variety is a hypersurface."""
    if r_gen < 1:
        raise ValueError("r_gen must be positive")
    return 2 * r_gen - 1


def bound_ambient_minus_dim(ambient_projective_dim: int, variety_dim: int) -> int:
    if not 0 <= variety_dim <= ambient_projective_dim:
        raise ValueError("need 0 <= dim X <= n")
    return ambient_projective_dim + 1 - variety_dim


def bound_proposition(k: int, c: int, s: int) -> int:
    """max(s, (c+1)k); ``s`` is the maximum rank on the k-th secant variety,
    supplied by the caller."""
    if k < 1 or c < 0 or s < 1:
        raise ValueError("need k >= 1, c >= 0, s >= 1")
    return max(s, (c + 1) * k)


def bound_jelisiejew(n: int, d: int) -> int:
    return binom(n + d - 2, n - 1) - binom(n + d - 6, n - 3)


def bound_ballico_deparis(n: int, d: int) -> int:
    return binom(n + d - 2, n - 1) - binom(n + d - 6, n - 3) - binom(n + d - 7, n - 3)


def waring_max_bound(n: int, d: int) -> int:
    """Max Waring rank bound for d >= 3, refined on the exceptional cases."""
    if d < 3:
        raise ValueError("waring_max_bound needs d >= 3; r_max(n, 2) = n classically")
    r_gen = waring_generic_rank(n, d).r_gen
    if (n, d) in AH_EXCEPTIONS:
        return bound_hypersurface_refinement(r_gen)
    return bound_twice_generic(r_gen)


@dataclass(frozen=True)
class BoundEntry:
    label: str
    value: int
    source: str


@dataclass(frozen=True)
class BoundReport:
    subject: str
    r_gen: int
    entries: tuple[BoundEntry, ...] = field(default_factory=tuple)

    @property
    def best(self) -> int:
        return min(e.value for e in self.entries)

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "r_gen": self.r_gen,
            "entries": [{"label": e.label, "value": e.value, "source": e.source} for e in self.entries],
            "best": self.best,
        }


def waring_bound_report(n: int, d: int) -> BoundReport:
    """Every applicable bound for n-variate d-forms."""
    gen = waring_generic_rank(n, d)
    N = math.comb(n + d - 1, n - 1)
    entries = [
        BoundEntry("TwiceGeneric", bound_twice_generic(gen.r_gen), "max rank <= 2 * generic rank"),
        BoundEntry(
            "AmbientMinusDim",
            bound_ambient_minus_dim(N - 1, n - 1),
            "max rank <= n + 1 - dim X",
        ),
        BoundEntry("Trivial", N, "dimension of the space of forms"),
    ]
    if gen.hypersurface_below and gen.r_gen > 1:
        entries.append(
            BoundEntry(
                "TwiceGenericMinusOne",
                bound_hypersurface_refinement(gen.r_gen),
                "secant variety below generic rank is a hypersurface",
            )
        )
    if d >= 3:
        entries.append(BoundEntry("Jelisiejew", bound_jelisiejew(n, d), "Jelisiejew 2013"))
        entries.append(BoundEntry("BallicoDeParis", bound_ballico_deparis(n, d), "Ballico-De Paris 2013"))
    return BoundReport(f"veronese({n},{d})", gen.r_gen, tuple(entries))


def variety_bound_report(spec, r_gen: int, hypersurface_below: bool = False) -> BoundReport:
    """Bounds for an arbitrary catalog variety given its generic rank."""
    from .dimension import tangent_dimension

    N = spec.ambient_affine_dim
    dim_x = tangent_dimension(spec) - 1
    entries = [
        BoundEntry("TwiceGeneric", bound_twice_generic(r_gen), "max rank <= 2 * generic rank"),
        BoundEntry("AmbientMinusDim", bound_ambient_minus_dim(N - 1, dim_x), "max rank <= n + 1 - dim X"),
        BoundEntry("Trivial", N, "ambient dimension"),
    ]
    if hypersurface_below and r_gen > 1:
        entries.append(
            BoundEntry(
                "TwiceGenericMinusOne",
                bound_hypersurface_refinement(r_gen),
                "secant variety below generic rank is a hypersurface",
            )
        )
    return BoundReport(spec.label(), r_gen, tuple(entries))


@dataclass(frozen=True)
class WaringRow:
    n: int
    d: int
    r_gen: int
    r_max_J: int
    r_max_BDP: int
    r_max_star: int
    r_max_known: int | None

    def cells(self) -> tuple:
        return (self.r_gen, self.r_max_J, self.r_max_BDP, self.r_max_star, self.r_max_known)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "r_gen": self.r_gen,
            "r_max_J": self.r_max_J,
            "r_max_BDP": self.r_max_BDP,
            "r_max_star": self.r_max_star,
            "r_max_known": self.r_max_known,
        }


def waring_row(n: int, d: int) -> WaringRow:
    known = KNOWN_MAX_RANK.get((n, d))
    return WaringRow(
        n,
        d,
        waring_generic_rank(n, d).r_gen,
        bound_jelisiejew(n, d),
        bound_ballico_deparis(n, d),
        waring_max_bound(n, d),
        known[0] if known else None,
    )


def emit_waring_table(n_range=(3, 4), d_range=range(3, 9)) -> list[WaringRow]:
    return [waring_row(n, d) for n in n_range for d in d_range]


def format_table(rows: list[WaringRow]) -> str:
    header = ("n", "d", "r_gen", "r_max^J", "r_max^BDP", "r_max^*", "r_max")
    body = [
        (str(r.n), str(r.d), str(r.r_gen), str(r.r_max_J), str(r.r_max_BDP), str(r.r_max_star),
         "" if r.r_max_known is None else str(r.r_max_known))
        for r in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines)


def congruence_refined_bound(n: int, d: int) -> int | None:
    """2 r_gen - 1 when the congruence criterion holds off the exceptional list.

    Reported separately from the table column, which prints 2 r_gen.
    """
    if d < 3 or (n, d) in AH_EXCEPTIONS or not hypersurface_condition(n, d):
        return None
    return bound_hypersurface_refinement(waring_generic_rank(n, d).r_gen)


@dataclass(frozen=True)
class BinaryFormFacts:
    d: int
    r_max: int
    r_gen: int
    sharp_bound: int


def binary_form_facts(d: int) -> BinaryFormFacts:
    """Maximum and generic Waring rank of binary d-forms."""
    if d < 1:
        raise ValueError("d must be positive")
    r_gen = math.ceil((d + 1) / 2)
    sharp = 2 * r_gen - 2 if d % 2 == 0 else 2 * r_gen - 1
    return BinaryFormFacts(d, d, r_gen, sharp)
