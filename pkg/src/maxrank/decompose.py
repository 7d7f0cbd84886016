"""Numerical rank-r fitting and two-point split decompositions.

The split algorithms write any point as (generic point) + (generic point):

* complex: ``q = (q - p) + p`` with ``p`` a random point of rank ``r_gen``
  whose decomposition is known and ``q - p`` fitted at rank ``r_gen``;
* real: ``q = ((eps*q + p) - p) / eps`` with ``p`` a random real point of
  rank ``r0`` and ``eps*q + p`` fitted at real rank ``r0`` starting from the
  decomposition of ``p``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .rng import complex_normal, substream
from .variety import (
    AmbientPoint,
    Decomposition,
    Term,
    VarietySpec,
    combine,
    relative_residual,
)

log = logging.getLogger(__name__)


class FitFailure(RuntimeError):
    """No rank-r fit reached the residual target.

    This reports an optimizer outcome, not a rank lower bound.
    """

    def __init__(self, message: str, best_residual: float, attempts: int):
        super().__init__(message)
        self.best_residual = best_residual
        self.attempts = attempts


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 500
    restarts: int = 10
    target_relative_residual: float = 1e-8
    lambda_init: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 10.0
    anchors: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1 or self.anchors < 1:
            raise ValueError("iteration, restart and anchor counts must be positive")
        if not 0 < self.target_relative_residual < 1:
            raise ValueError("target_relative_residual must lie in (0, 1)")
        if self.lambda_init <= 0 or self.lambda_up <= 1 or self.lambda_down <= 1:
            raise ValueError("damping parameters must be positive (factors > 1)")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


# --- model ------------------------------------------------------------------------


class _Model:
    """Sum of r weighted cone points as a function of a flat parameter vector.

    Complex mode: ``x = vec(Z)``, Z of shape (r, P), all weights 1.
    Real mode: ``x = [vec(Theta), w]``, Theta (r, P) real, weights w real.
    """

    def __init__(self, spec: VarietySpec, r: int, real: bool):
        self.pm = spec.polymap()
        self.spec = spec
        self.r = r
        self.real = real
        self.P = spec.param_dim

    def unpack(self, x):
        r, P = self.r, self.P
        Z = x[: r * P].reshape(r, P)
        w = x[r * P:] if self.real else np.ones(r)
        return Z, w

    def pack(self, Z, w=None):
        if self.real:
            return np.concatenate([Z.ravel(), w])
        return Z.ravel().astype(complex)

    def value(self, x):
        Z, w = self.unpack(x)
        return w @ self.pm.value(Z)

    def residual_and_jacobian(self, x, target):
        Z, w = self.unpack(x)
        pts = self.pm.value(Z)  # (r, N)
        J = self.pm.jacobian(Z)  # (r, N, P)
        f = w @ pts - target
        blocks = [w[i] * J[i] for i in range(self.r)]
        if self.real:
            blocks.append(pts.T)
        return f, np.concatenate(blocks, axis=1)

    def decomposition(self, x, residual) -> Decomposition:
        Z, w = self.unpack(x)
        fld = "real" if self.real else "complex"
        cast = float if self.real else complex
        terms = [
            Term(cast(w[i]), tuple(cast(v) for v in Z[i]))
            for i in range(self.r)
            if np.any(Z[i]) and w[i] != 0
        ]
        return Decomposition(self.spec, fld, terms, residual)


def levenberg_marquardt(model: _Model, target: np.ndarray, x0: np.ndarray, tol: float, opts: FitOptions):
    """Damped Gauss-Newton on ``||model(x) - target||``; returns (x, ||f||, iterations)."""
    x = x0.copy()
    f, J = model.residual_and_jacobian(x, target)
    cost = np.linalg.norm(f)
    lam = opts.lambda_init
    it = 0
    for it in range(1, opts.max_iterations + 1):
        if cost <= tol:
            break
        JH = J.conj().T
        A = JH @ J
        g = JH @ f
        scale = np.real(np.diag(A)).max() or 1.0
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * scale * np.eye(len(x)), -g)
            except np.linalg.LinAlgError:
                lam *= opts.lambda_up
                continue
            x_new = x + step
            f_new, J_new = model.residual_and_jacobian(x_new, target)
            cost_new = np.linalg.norm(f_new)
            if np.isfinite(cost_new) and cost_new < cost:
                x, f, J, cost = x_new, f_new, J_new, cost_new
                lam = max(lam / opts.lambda_down, 1e-15)
                accepted = True
                break
            lam *= opts.lambda_up
        if not accepted:
            break
    return x, cost, it


def _random_start(model: _Model, target: np.ndarray, rng) -> np.ndarray:
    r, P = model.r, model.P
    if model.real:
        Z = rng.standard_normal((r, P))
        w = rng.standard_normal(r)
    else:
        Z = complex_normal(rng, (r, P))
        w = np.ones(r)
    # match the target's scale; the map is homogeneous of degree `weight`
    val = np.linalg.norm(w @ model.pm.value(Z))
    tn = np.linalg.norm(target)
    if val > 0 and tn > 0:
        Z = Z * (tn / val) ** (1.0 / model.spec.weight)
    return model.pack(Z, w)


def fit_rank(
    spec: VarietySpec,
    target: AmbientPoint,
    r: int,
    field: str = "complex",
    opts: FitOptions = FitOptions(),
    init: Decomposition | None = None,
    tol: float | None = None,
    stream: tuple = (),
) -> Decomposition:
    """Least-squares fit of ``target`` by r cone points (multi-start LM).

    ``tol`` is an absolute residual threshold; by default it is
    ``opts.target_relative_residual * ||target||``.  An ``init``
    decomposition is tried first, then ``opts.restarts`` random starts.
    Raises :class:`FitFailure` if every start misses the target.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if target.spec != spec:
        raise ValueError("target lives over a different variety")
    real = field == "real"
    if real and target.field != "real":
        raise ValueError("a real fit needs a real target")
    model = _Model(spec, r, real)
    y = target.to_array() if real else target.to_array().astype(complex)
    tn = np.linalg.norm(y)
    if tol is None:
        tol = opts.target_relative_residual * tn
    starts = []
    if init is not None:
        if len(init.terms) != r:
            raise ValueError("init must have exactly r terms")
        Z = np.array([t.param for t in init.terms], dtype=float if real else complex)
        w = np.array([t.coeff for t in init.terms], dtype=float if real else complex)
        if real:
            starts.append(model.pack(Z, w))
        else:
            # fold weights into parameters via a weight-th root
            starts.append(model.pack(Z * (w[:, None] ** (1.0 / spec.weight))))
    best = np.inf
    attempts = 0
    for k in range(opts.restarts + len(starts)):
        attempts += 1
        if k < len(starts):
            x0 = starts[k]
        else:
            x0 = _random_start(model, y, substream(opts.seed, *stream, k))
        x, cost, iters = levenberg_marquardt(model, y, x0, tol, opts)
        best = min(best, cost)
        if cost <= tol:
            dec = model.decomposition(x, None)
            res = relative_residual(dec, target)
            return replace(dec, residual=res)
    raise FitFailure(
        f"rank-{r} fit of {spec.label()} missed the target after {attempts} starts",
        best_residual=float(best / tn) if tn else float(best),
        attempts=attempts,
    )


# --- two-point splits ----------------------------------------------------------------


@dataclass(frozen=True)
class SplitReport:
    input: AmbientPoint
    anchor: Decomposition
    remainder: Decomposition
    combined: Decomposition
    relative_residual: float
    attempts: int
    mode: str
    rank_bound: int
    extras: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.combined.terms)


def random_anchor(spec: VarietySpec, r: int, field: str, rng) -> Decomposition:
    """A generic point of rank <= r with its decomposition."""
    P = spec.param_dim
    if field == "real":
        Z = rng.standard_normal((r, P))
        w = rng.choice([-1.0, 1.0], size=r)
        terms = [Term(float(w[i]), tuple(float(v) for v in Z[i])) for i in range(r)]
    else:
        Z = complex_normal(rng, (r, P))
        terms = [Term(1 + 0j, tuple(complex(v) for v in Z[i])) for i in range(r)]
    return Decomposition(spec, field, terms)


def _point_from(dec: Decomposition) -> AmbientPoint:
    from .variety import evaluate

    return evaluate(dec)


def two_point_split_complex(
    spec: VarietySpec, target: AmbientPoint, r_gen: int, opts: FitOptions = FitOptions()
) -> SplitReport:
    """Write ``target`` as a sum of at most ``2*r_gen`` cone points."""
    q = target.to_array().astype(complex)
    qn = np.linalg.norm(q)
    goal = opts.target_relative_residual
    attempts = 0
    best = np.inf
    for a in range(opts.anchors):
        rng = substream(opts.seed, 1, a)
        anchor = random_anchor(spec, r_gen, "complex", rng)
        p = _point_from(anchor).to_array()
        # rescale the anchor to the target's size so cancellation stays benign
        pn = np.linalg.norm(p)
        if qn > 0 and pn > 0:
            s = (qn / pn) ** (1.0 / spec.weight)
            anchor = Decomposition(spec, "complex", [Term(t.coeff, tuple(s * v for v in t.param)) for t in anchor.terms])
            p = _point_from(anchor).to_array()
        rest = AmbientPoint(spec, tuple((q - p).tolist()), "complex")
        try:
            rem = fit_rank(spec, rest, r_gen, "complex", opts, tol=0.1 * goal * max(qn, 1e-300), stream=(2, a))
        except FitFailure as exc:
            attempts += exc.attempts
            best = min(best, exc.best_residual)
            log.info("anchor %d failed (best residual %.3g)", a, exc.best_residual)
            continue
        attempts += 1
        combined = combine(rem, anchor)
        res = relative_residual(combined, target)
        if res <= goal:
            combined = replace(combined, residual=res)
            return SplitReport(target, anchor, rem, combined, res, attempts, "complex", 2 * r_gen)
        best = min(best, res)
    raise FitFailure("complex two-point split exhausted its anchors", best, attempts)


def two_point_split_real(
    spec: VarietySpec,
    target: AmbientPoint,
    r0: int,
    opts: FitOptions = FitOptions(),
    eps_floor: float = 1e-8,
) -> SplitReport:
    """Write a real ``target`` as a real combination of at most ``2*r0`` cone points."""
    if target.field != "real":
        raise ValueError("two_point_split_real needs a real target")
    q = target.to_array()
    qn = np.linalg.norm(q)
    goal = opts.target_relative_residual
    attempts = 0
    best = np.inf
    for a in range(opts.anchors):
        rng = substream(opts.seed, 3, a)
        anchor = random_anchor(spec, r0, "real", rng)
        p = _point_from(anchor).to_array()
        pn = np.linalg.norm(p)
        if qn == 0:
            eps = 1.0
        else:
            eps = 0.1 * pn / qn
        while eps >= eps_floor * (pn / qn if qn else 1.0):
            shifted = AmbientPoint(spec, tuple((eps * q + p).tolist()), "real")
            try:
                rem = fit_rank(
                    spec, shifted, r0, "real", opts, init=anchor,
                    tol=0.1 * goal * eps * max(qn, 1e-300), stream=(4, a),
                )
            except FitFailure as exc:
                attempts += exc.attempts
                best = min(best, exc.best_residual)
                eps /= 2
                continue
            attempts += 1
            scaled_rem = Decomposition(spec, "real", [Term(t.coeff / eps, t.param) for t in rem.terms])
            neg_anchor = Decomposition(spec, "real", [Term(-t.coeff / eps, t.param) for t in anchor.terms])
            combined = combine(scaled_rem, neg_anchor)
            res = relative_residual(combined, target)
            if res <= goal:
                combined = replace(combined, residual=res)
                return SplitReport(
                    target, anchor, scaled_rem, combined, res, attempts, "real", 2 * r0, {"eps": float(eps)}
                )
            best = min(best, res)
            eps /= 2
    raise FitFailure("real two-point split exhausted its anchors", best, attempts)
