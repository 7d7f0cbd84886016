"""Catalog of projective varieties given by affine-cone parameterizations.

Every family in the catalog is the image of a homogeneous polynomial map
``param -> coordinates``.  The map is stored once per spec as a sparse list
of monomial terms, which gives one code path for evaluation and
differentiation in both exact (int / Fraction) and floating arithmetic.

Basis conventions
-----------------
* Veronese / power-of-forms: plain monomial coefficients, monomials ordered
  by exponent tuple in lexicographically decreasing order
  (``x^2, xy, y^2`` for two variables in degree 2).
* Segre: row-major flattening of the outer product.
* Grassmannian: Plücker coordinates indexed by increasing k-subsets of
  ``range(m)`` in lexicographic order.  The parameter is the k spanning
  vectors concatenated (vector ``i`` occupies ``i*m .. i*m+m-1``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Rational

import numpy as np

FAMILIES = ("veronese", "segre", "grassmannian", "power_of_forms")
FIELDS = ("real", "complex")


class VarietyError(ValueError):
    """Invalid variety parameters or a dimension mismatch."""


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of degree ``degree``, lexicographically decreasing."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        out.append(tuple(exps))
    out.sort(reverse=True)
    return out


def multinomial(exps) -> int:
    total = 0
    result = 1
    for e in exps:
        total += e
        result *= math.comb(total, e)
    return result


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class VarietySpec:
    """A variety family with its shape parameters.

    Use the named constructors; ``shape`` holds ``(n, d)`` for Veronese,
    the formats for Segre, ``(k, m)`` for Grassmannian and ``(n, d, k)``
    for power-of-forms.
    """

    family: str
    shape: tuple[int, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise VarietyError(f"unknown family {self.family!r}")
        shape = tuple(int(s) for s in self.shape)
        object.__setattr__(self, "shape", shape)
        if self.family == "veronese":
            if len(shape) != 2 or shape[0] < 2 or shape[1] < 1:
                raise VarietyError("veronese needs n >= 2, d >= 1")
        elif self.family == "segre":
            if len(shape) < 2 or any(f < 2 for f in shape):
                raise VarietyError("segre needs >= 2 formats, each >= 2")
        elif self.family == "grassmannian":
            if len(shape) != 2 or shape[0] < 2 or shape[1] <= shape[0]:
                raise VarietyError("grassmannian needs k >= 2 and m > k")
        else:
            if len(shape) != 3 or shape[0] < 2 or shape[1] < 1 or shape[2] < 2:
                raise VarietyError("power_of_forms needs n >= 2, d >= 1, k >= 2")

    @classmethod
    def veronese(cls, n: int, d: int) -> VarietySpec:
        return cls("veronese", (n, d))

    @classmethod
    def segre(cls, formats) -> VarietySpec:
        return cls("segre", tuple(formats))

    @classmethod
    def grassmannian(cls, k: int, m: int) -> VarietySpec:
        return cls("grassmannian", (k, m))

    @classmethod
    def power_of_forms(cls, n: int, d: int, k: int) -> VarietySpec:
        return cls("power_of_forms", (n, d, k))

    @property
    def params(self) -> dict:
        if self.family == "veronese":
            return {"n": self.shape[0], "d": self.shape[1]}
        if self.family == "segre":
            return {"formats": list(self.shape)}
        if self.family == "grassmannian":
            return {"k": self.shape[0], "m": self.shape[1]}
        return {"n": self.shape[0], "d": self.shape[1], "k": self.shape[2]}

    @classmethod
    def from_params(cls, family: str, params: dict) -> VarietySpec:
        if family == "veronese":
            return cls.veronese(params["n"], params["d"])
        if family == "segre":
            return cls.segre(params["formats"])
        if family == "grassmannian":
            return cls.grassmannian(params["k"], params["m"])
        if family == "power_of_forms":
            return cls.power_of_forms(params["n"], params["d"], params["k"])
        raise VarietyError(f"unknown family {family!r}")

    @property
    def ambient_affine_dim(self) -> int:
        s = self.shape
        if self.family == "veronese":
            return math.comb(s[0] + s[1] - 1, s[0] - 1)
        if self.family == "segre":
            return math.prod(s)
        if self.family == "grassmannian":
            return math.comb(s[1], s[0])
        return math.comb(s[0] + s[2] * s[1] - 1, s[0] - 1)

    @property
    def param_dim(self) -> int:
        s = self.shape
        if self.family == "veronese":
            return s[0]
        if self.family == "segre":
            return sum(s)
        if self.family == "grassmannian":
            return s[0] * s[1]
        return math.comb(s[0] + s[1] - 1, s[0] - 1)

    @property
    def weight(self) -> int:
        """Total degree of the cone parameterization."""
        if self.family == "veronese":
            return self.shape[1]
        if self.family == "segre":
            return len(self.shape)
        if self.family == "grassmannian":
            return self.shape[0]
        return self.shape[2]

    def label(self) -> str:
        return f"{self.family}({','.join(map(str, self.shape))})"

    def polymap(self) -> PolyMap:
        return _polymap(self)


@dataclass(frozen=True, eq=False)
class PolyMap:
    """Sparse homogeneous polynomial map ``C^P -> C^N``.

    Term ``t`` contributes ``coef[t] * prod_j x_j**exps[t, j]`` to output
    coordinate ``coord[t]``.
    """

    n_out: int
    n_in: int
    coord: np.ndarray
    coef: np.ndarray
    exps: np.ndarray
    # derived tables
    _sparse: list = field(init=False, repr=False)

    def __post_init__(self):
        sparse = []
        for t in range(len(self.coord)):
            nz = [(int(j), int(e)) for j, e in enumerate(self.exps[t]) if e]
            sparse.append((int(self.coord[t]), int(self.coef[t]), nz))
        object.__setattr__(self, "_sparse", sparse)

    @cached_property
    def _value_scatter(self) -> np.ndarray:
        S = np.zeros((len(self.coord), self.n_out))
        S[np.arange(len(self.coord)), self.coord] = self.coef
        return S

    @cached_property
    def _jac_tables(self):
        rows, cols, vals, reduced = [], [], [], []
        for t in range(len(self.coord)):
            for j in np.nonzero(self.exps[t])[0]:
                e = self.exps[t, j]
                red = self.exps[t].copy()
                red[j] -= 1
                rows.append(self.coord[t])
                cols.append(j)
                vals.append(self.coef[t] * e)
                reduced.append(red)
        reduced = np.array(reduced, dtype=np.int64).reshape(-1, self.n_in)
        S = np.zeros((len(rows), self.n_out * self.n_in))
        S[np.arange(len(rows)), np.array(rows) * self.n_in + np.array(cols)] = vals
        return reduced, S

    # exact arithmetic -----------------------------------------------------

    def value_exact(self, x) -> list:
        out = [0] * self.n_out
        for c, k, nz in self._sparse:
            term = k
            for j, e in nz:
                term *= x[j] ** e
            out[c] += term
        return out

    def jacobian_exact(self, x) -> list[list]:
        J = [[0] * self.n_in for _ in range(self.n_out)]
        for c, k, nz in self._sparse:
            for a, (j, e) in enumerate(nz):
                term = k * e * x[j] ** (e - 1)
                for b, (jj, ee) in enumerate(nz):
                    if b != a:
                        term *= x[jj] ** ee
                J[c][j] += term
        return J

    # floating point, batched over leading axes ----------------------------

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        mon = np.prod(x[..., None, :] ** self.exps, axis=-1)
        return mon @ self._value_scatter

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        reduced, S = self._jac_tables
        mon = np.prod(x[..., None, :] ** reduced, axis=-1)
        J = mon @ S
        return J.reshape(x.shape[:-1] + (self.n_out, self.n_in))


@lru_cache(maxsize=None)
def _polymap(spec: VarietySpec) -> PolyMap:
    fam, s = spec.family, spec.shape
    terms: list[tuple[int, int, tuple[int, ...]]] = []
    if fam == "veronese" or fam == "power_of_forms":
        if fam == "veronese":
            n, d, k = s[0], 1, s[1]
        else:
            n, d, k = s
        inner = monomials(n, d)
        outer_index = {m: i for i, m in enumerate(monomials(n, k * d))}
        # g^k = sum over size-k multisets of inner monomials
        for beta in monomials(len(inner), k):
            target = [0] * n
            for m, b in zip(inner, beta):
                for v in range(n):
                    target[v] += b * m[v]
            terms.append((outer_index[tuple(target)], multinomial(beta), beta))
    elif fam == "segre":
        offsets = np.cumsum((0,) + s[:-1])
        P = sum(s)
        for flat, idx in enumerate(itertools.product(*(range(f) for f in s))):
            e = [0] * P
            for off, i in zip(offsets, idx):
                e[off + i] = 1
            terms.append((flat, 1, tuple(e)))
    else:
        k, m = s
        for flat, subset in enumerate(itertools.combinations(range(m), k)):
            for perm in itertools.permutations(range(k)):
                e = [0] * (k * m)
                for i in range(k):
                    e[i * m + subset[perm[i]]] = 1
                terms.append((flat, _perm_sign(perm), tuple(e)))
    coord = np.array([t[0] for t in terms], dtype=np.int64)
    coef = np.array([t[1] for t in terms], dtype=np.int64)
    exps = np.array([t[2] for t in terms], dtype=np.int64)
    return PolyMap(spec.ambient_affine_dim, spec.param_dim, coord, coef, exps)


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _check_len(spec: VarietySpec, param) -> None:
    if len(param) != spec.param_dim:
        raise VarietyError(
            f"{spec.label()} expects a parameter of length {spec.param_dim}, got {len(param)}"
        )


def cone_point(spec: VarietySpec, param):
    """Point of the affine cone over ``spec`` with the given parameter.

    Integer / Fraction parameters give an exact list; anything else goes
    through numpy and returns an array (complex if the input is complex).
    """
    if isinstance(param, np.ndarray) and param.dtype != object:
        _check_len(spec, param)
        return spec.polymap().value(param)
    param = list(param)
    _check_len(spec, param)
    if _is_exact(param):
        return spec.polymap().value_exact(param)
    return spec.polymap().value(np.asarray(param))


def cone_jacobian(spec: VarietySpec, param):
    """``ambient_affine_dim x param_dim`` derivative of :func:`cone_point`."""
    if isinstance(param, np.ndarray) and param.dtype != object:
        _check_len(spec, param)
        return spec.polymap().jacobian(param)
    param = list(param)
    _check_len(spec, param)
    if _is_exact(param):
        return spec.polymap().jacobian_exact(param)
    return spec.polymap().jacobian(np.asarray(param))


@dataclass(frozen=True)
class AmbientPoint:
    spec: VarietySpec
    coeffs: tuple
    field: str = "complex"

    def __post_init__(self):
        if self.field not in FIELDS:
            raise VarietyError(f"field must be one of {FIELDS}")
        coeffs = tuple(self.coeffs)
        if len(coeffs) != self.spec.ambient_affine_dim:
            raise VarietyError(
                f"{self.spec.label()} has ambient dimension {self.spec.ambient_affine_dim}, "
                f"got {len(coeffs)} coefficients"
            )
        if self.field == "real" and any(isinstance(c, complex) and c.imag for c in coeffs):
            raise VarietyError("real point with nonzero imaginary part")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.coeffs)

    def to_array(self) -> np.ndarray:
        dtype = float if self.field == "real" else complex
        return np.array([complex(c) if dtype is complex else float(c) for c in self.coeffs], dtype=dtype)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))


@dataclass(frozen=True)
class Term:
    coeff: object
    param: tuple

    def __post_init__(self):
        object.__setattr__(self, "param", tuple(self.param))


@dataclass(frozen=True)
class Decomposition:
    """``sum(coeff * cone_point(param))`` with an optional residual.

    ``residual`` is relative to whatever target produced the decomposition;
    ``None`` means the decomposition is exact.
    """

    spec: VarietySpec
    field: str
    terms: tuple[Term, ...] = ()
    residual: float | None = None

    def __post_init__(self):
        if self.field not in FIELDS:
            raise VarietyError(f"field must be one of {FIELDS}")
        terms = tuple(self.terms)
        for t in terms:
            _check_len(self.spec, t.param)
            if all(v == 0 for v in t.param):
                raise VarietyError("decomposition terms must have nonzero parameters")
            if self.field == "real":
                vals = (t.coeff,) + tuple(t.param)
                if any(isinstance(v, complex) or np.iscomplexobj(v) for v in vals):
                    raise VarietyError("real decomposition with complex entries")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)


def evaluate(dec: Decomposition) -> AmbientPoint:
    """Sum of the weighted cone points of ``dec``."""
    spec = dec.spec
    exact = all(_is_exact((t.coeff,) + t.param) for t in dec.terms)
    if exact:
        total = [0] * spec.ambient_affine_dim
        for t in dec.terms:
            pt = cone_point(spec, t.param)
            total = [a + t.coeff * b for a, b in zip(total, pt)]
        return AmbientPoint(spec, total, dec.field)
    dtype = float if dec.field == "real" else complex
    total = np.zeros(spec.ambient_affine_dim, dtype=dtype)
    for t in dec.terms:
        param = np.array([complex(v) if dtype is complex else float(v) for v in t.param], dtype=dtype)
        total = total + (complex(t.coeff) if dtype is complex else float(t.coeff)) * cone_point(spec, param)
    return AmbientPoint(spec, tuple(total.tolist()), dec.field)


def combine(*decs: Decomposition, residual=None) -> Decomposition:
    """Concatenate decompositions over the same spec and field."""
    if not decs:
        raise VarietyError("nothing to combine")
    spec, fld = decs[0].spec, decs[0].field
    for d in decs[1:]:
        if d.spec != spec or d.field != fld:
            raise VarietyError("cannot combine decompositions over different specs or fields")
    terms = tuple(t for d in decs for t in d.terms)
    return Decomposition(spec, fld, terms, residual)


def relative_residual(dec: Decomposition, target: AmbientPoint) -> float:
    """``||evaluate(dec) - target|| / ||target||`` recomputed from scratch."""
    if dec.spec != target.spec:
        raise VarietyError("decomposition and target live over different specs")
    diff = evaluate(dec).to_array().astype(complex) - target.to_array().astype(complex)
    denom = target.norm()
    return float(np.linalg.norm(diff) / denom) if denom else float(np.linalg.norm(diff))


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)
