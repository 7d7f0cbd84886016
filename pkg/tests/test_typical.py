import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from maxrank.binary import parse_form
from maxrank.decompose import FitOptions
from maxrank.rng import substream
from maxrank.typical import (
    complex_rank_histogram,
    default_witnesses,
    hyperdeterminant_222,
    real_rank_222,
    sample_222_typical,
    sample_binary_typical,
    sample_negative_hyperdeterminant,
    verify_r0_bound,
)
from maxrank.variety import AmbientPoint, VarietySpec


def slice_discriminant(T):
    """Discriminant of det(x A + y B) for the slices A = T[0], B = T[1]."""
    x, y = sympy.symbols("x y")
    A = sympy.Matrix(2, 2, [sympy.nsimplify(v) for v in T[:4]])
    B = sympy.Matrix(2, 2, [sympy.nsimplify(v) for v in T[4:]])
    q = sympy.Poly((x * A + y * B).det(), x, y)
    a, b, c = (q.coeff_monomial(m) for m in (x**2, x * y, y**2))
    return b**2 - 4 * a * c


def outer(a, b, c):
    return np.einsum("i,j,k->ijk", a, b, c).ravel()


@given(st.lists(st.integers(-6, 6), min_size=8, max_size=8))
def test_hyperdeterminant_matches_slice_discriminant(T):
    assert hyperdeterminant_222(T) == slice_discriminant(T)


def test_hyperdeterminant_examples():
    e0, e1 = np.array([1, 0]), np.array([0, 1])
    diag = [int(v) for v in outer(e0, e0, e0) + outer(e1, e1, e1)]
    assert hyperdeterminant_222(diag) > 0 and real_rank_222(diag) == 2
    w = [int(v) for v in outer(e0, e0, e1) + outer(e0, e1, e0) + outer(e1, e0, e0)]
    assert hyperdeterminant_222(w) == 0 and real_rank_222(w) is None
    r1 = [int(v) for v in outer(np.array([1, 2]), np.array([3, -1]), np.array([2, 5]))]
    assert hyperdeterminant_222(r1) == 0
    with pytest.raises(ValueError):
        hyperdeterminant_222([1, 2, 3])


def test_hyperdeterminant_exact_with_fractions():
    T = [Fraction(1, 2), 0, 0, 0, 0, 0, 0, Fraction(1, 3)]
    assert hyperdeterminant_222(T) == Fraction(1, 36)


def test_hyperdeterminant_sign_invariance():
    rng = np.random.default_rng(0)
    for _ in range(200):
        T = rng.standard_normal((2, 2, 2))
        A, B, C = (rng.standard_normal((2, 2)) for _ in range(3))
        S = np.einsum("ia,jb,kc,abc->ijk", A, B, C, T)
        d0, d1 = hyperdeterminant_222(T.ravel()), hyperdeterminant_222(S.ravel())
        factor = (np.linalg.det(A) * np.linalg.det(B) * np.linalg.det(C)) ** 2
        assert math.isclose(d1, factor * d0, rel_tol=1e-8, abs_tol=1e-10)
        assert np.sign(d0) == np.sign(d1)


def test_negative_hyperdeterminant_sampler():
    for i in range(20):
        T = sample_negative_hyperdeterminant(substream(1, i))
        assert hyperdeterminant_222(T) < 0


def test_binary_typical_small_degrees():
    r2 = sample_binary_typical(2, 300, seed=1)
    assert set(r2.histogram) == {2} and r2.min_typical == 2
    r3 = sample_binary_typical(3, 1000, seed=0)
    assert r3.observed_typical == [2, 3] and r3.min_typical == 2 == r3.r_gen_complex
    r4 = sample_binary_typical(4, 1000, seed=0)
    assert r4.observed_typical == [3, 4] and r4.min_typical == 3
    assert r3.accepted == 1000


@pytest.mark.parametrize("d", [5, 6])
def test_binary_ranks_lie_between_generic_and_degree(d):
    rep = sample_binary_typical(d, 400, seed=2)
    assert min(rep.histogram) == math.ceil((d + 1) / 2)
    assert max(rep.histogram) <= d


def test_222_typical():
    rep = sample_222_typical(2000, seed=0)
    assert set(rep.histogram) == {2, 3}
    assert rep.frequency(2) >= 0.1 and rep.frequency(3) >= 0.1
    assert rep.min_typical == 2 == rep.r_gen_complex
    assert rep.accepted + rep.rejected == 2000


def test_report_serialization():
    rep = sample_binary_typical(3, 50, seed=0)
    d = rep.as_dict()
    assert d["samples"] == 50 and sum(d["histogram"].values()) == 50
    assert d["min_typical"] == rep.min_typical


def test_sampling_is_deterministic():
    assert sample_binary_typical(5, 100, seed=3).histogram == sample_binary_typical(5, 100, seed=3).histogram
    assert sample_222_typical(500, seed=3).histogram == sample_222_typical(500, seed=3).histogram


def test_complex_rank_histogram_is_generic():
    for d in (3, 4, 7):
        assert complex_rank_histogram(d, 50, seed=4) == {math.ceil((d + 1) / 2): 50}


def test_default_witnesses():
    (w,) = default_witnesses(VarietySpec.veronese(2, 6))
    assert w.coeffs == tuple(float(c) for c in parse_form("x^5*y").coeffs)
    assert default_witnesses(VarietySpec.segre([2, 2, 2])) == []


def test_verify_r0_bound_binary_sextic():
    spec = VarietySpec.veronese(2, 6)
    rep = verify_r0_bound(spec, 4, samples=5, seed=0)
    assert rep.attempted == 6
    assert rep.success_rate == 1.0 and rep.max_length <= 8


def test_verify_r0_bound_222():
    spec = VarietySpec.segre([2, 2, 2])
    rep = verify_r0_bound(spec, 2, samples=10, seed=0, sampler="negative_hyperdeterminant")
    assert rep.successes == 10 and rep.max_length <= 4


def test_verify_r0_bound_rank_one_witness():
    spec = VarietySpec.veronese(2, 4)
    point = AmbientPoint(spec, (1.0, 4.0, 6.0, 4.0, 1.0), "real")  # (x + y)^4
    rep = verify_r0_bound(spec, 3, samples=0, witnesses=[point])
    assert rep.successes == 1


def test_verify_r0_bound_rejects_bad_sampler():
    with pytest.raises(ValueError):
        verify_r0_bound(VarietySpec.veronese(2, 4), 3, samples=1, witnesses=[], sampler="uniform")
    with pytest.raises(ValueError):
        verify_r0_bound(VarietySpec.veronese(2, 4), 3, samples=1, witnesses=[], sampler="negative_hyperdeterminant")
