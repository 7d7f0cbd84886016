from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxrank.variety import (
    AmbientPoint,
    Decomposition,
    Term,
    VarietyError,
    VarietySpec,
    combine,
    cone_jacobian,
    cone_point,
    evaluate,
    monomials,
)

SMALL_SPECS = [
    VarietySpec.veronese(2, 3),
    VarietySpec.veronese(3, 4),
    VarietySpec.segre([2, 3]),
    VarietySpec.segre([2, 2, 2]),
    VarietySpec.grassmannian(2, 4),
    VarietySpec.grassmannian(3, 6),
    VarietySpec.power_of_forms(2, 2, 3),
    VarietySpec.power_of_forms(3, 2, 2),
]


def central_differences(spec, x, h=1e-5):
    J = np.zeros((spec.ambient_affine_dim, spec.param_dim))
    for j in range(spec.param_dim):
        e = np.zeros_like(x)
        e[j] = h
        J[:, j] = (cone_point(spec, x + e) - cone_point(spec, x - e)) / (2 * h)
    return J


@pytest.mark.parametrize(
    "spec, ambient, param",
    [
        (VarietySpec.veronese(3, 4), 15, 3),
        (VarietySpec.veronese(2, 6), 7, 2),
        (VarietySpec.segre([3, 3, 3]), 27, 9),
        (VarietySpec.segre([2, 3, 4]), 24, 9),
        (VarietySpec.grassmannian(3, 6), 20, 18),
        (VarietySpec.power_of_forms(3, 2, 2), 15, 6),
        (VarietySpec.power_of_forms(2, 3, 2), 7, 4),
    ],
)
def test_dimensions(spec, ambient, param):
    assert spec.ambient_affine_dim == ambient
    assert spec.param_dim == param
    assert len(cone_point(spec, [1] * param)) == ambient
    assert len(spec.polymap().coord) > 0


def test_rejects_bad_shapes():
    with pytest.raises(VarietyError):
        VarietySpec.veronese(1, 3)
    with pytest.raises(VarietyError):
        VarietySpec.segre([3])
    with pytest.raises(VarietyError):
        VarietySpec.grassmannian(3, 3)
    with pytest.raises(VarietyError):
        VarietySpec.power_of_forms(2, 2, 1)
    with pytest.raises(VarietyError):
        cone_point(VarietySpec.veronese(2, 2), [1, 2, 3])


def test_monomial_order_is_lex_decreasing():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomials(3, 2) == [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def test_veronese_binomial_expansion():
    v = VarietySpec.veronese(2, 2)
    assert cone_point(v, [1, 1]) == [1, 2, 1]
    assert cone_point(v, [1, -1]) == [1, -2, 1]
    diff = [a - b for a, b in zip(cone_point(v, [1, 1]), cone_point(v, [1, -1]))]
    assert diff == [0, 4, 0]


def test_segre_outer_product_row_major():
    s = VarietySpec.segre([2, 2])
    assert cone_point(s, [1, 0, 0, 1]) == [0, 1, 0, 0]
    s3 = VarietySpec.segre([2, 3])
    a, b = np.array([2.0, -1.0]), np.array([1.0, 3.0, 5.0])
    np.testing.assert_allclose(cone_point(s3, np.concatenate([a, b])), np.outer(a, b).ravel())


def test_grassmannian_plucker_are_minors():
    g = VarietySpec.grassmannian(2, 4)
    rows = [[1, 2, 3, 4], [5, 6, 7, 9]]
    p = cone_point(g, rows[0] + rows[1])
    expected = [rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i] for i in range(4) for j in range(i + 1, 4)]
    assert p == expected


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=8, max_size=8))
def test_plucker_relation_exact(vals):
    p = cone_point(VarietySpec.grassmannian(2, 4), vals)
    p01, p02, p03, p12, p13, p23 = p
    assert p01 * p23 - p02 * p13 + p03 * p12 == 0


def test_power_of_forms_with_linear_forms_is_veronese():
    for n, k in [(2, 3), (3, 4), (4, 2)]:
        pf, ve = VarietySpec.power_of_forms(n, 1, k), VarietySpec.veronese(n, k)
        assert pf.ambient_affine_dim == ve.ambient_affine_dim
        rng = np.random.default_rng(n * 10 + k)
        for _ in range(5):
            x = [int(v) for v in rng.integers(-9, 10, size=n)]
            assert cone_point(pf, x) == cone_point(ve, x)


def test_power_of_forms_squares_a_quadric():
    # (x^2 + y^2)^2 = x^4 + 2 x^2 y^2 + y^4
    pf = VarietySpec.power_of_forms(2, 2, 2)
    assert cone_point(pf, [1, 0, 1]) == [1, 0, 2, 0, 1]


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label())
def test_homogeneity(spec):
    rng = np.random.default_rng(7)
    for _ in range(5):
        x = rng.standard_normal(spec.param_dim)
        t = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
        np.testing.assert_allclose(cone_point(spec, t * x), t**spec.weight * cone_point(spec, x), rtol=1e-10, atol=1e-12)


def test_homogeneity_weights():
    assert VarietySpec.veronese(3, 4).weight == 4
    assert VarietySpec.segre([2, 3, 4]).weight == 3
    assert VarietySpec.grassmannian(3, 6).weight == 3
    assert VarietySpec.power_of_forms(3, 2, 5).weight == 5


def test_jacobian_small_cases():
    assert cone_jacobian(VarietySpec.veronese(2, 1), [3, 7]) == [[1, 0], [0, 1]]
    assert cone_jacobian(VarietySpec.veronese(2, 2), [1, 0]) == [[2, 0], [0, 2], [0, 0]]


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label())
def test_jacobian_matches_finite_differences(spec):
    rng = np.random.default_rng(11)
    x = rng.standard_normal(spec.param_dim)
    J = cone_jacobian(spec, x)
    fd = central_differences(spec, x)
    assert np.max(np.abs(J - fd)) <= 1e-6 * max(1.0, np.max(np.abs(J)))


def test_jacobian_veronese_34_finite_differences():
    spec = VarietySpec.veronese(3, 4)
    x = np.random.default_rng(3).standard_normal(3)
    assert np.max(np.abs(cone_jacobian(spec, x) - central_differences(spec, x))) <= 1e-6


def test_exact_and_float_paths_agree():
    for spec in SMALL_SPECS:
        x = [int(v) for v in np.random.default_rng(5).integers(-5, 6, size=spec.param_dim)]
        np.testing.assert_allclose(np.array(cone_point(spec, x), dtype=float), cone_point(spec, np.array(x, float)))
        np.testing.assert_allclose(
            np.array(cone_jacobian(spec, x), dtype=float), cone_jacobian(spec, np.array(x, float))
        )


def test_complex_parameters():
    v = VarietySpec.veronese(2, 2)
    out = cone_point(v, np.array([1j, 1.0]))
    np.testing.assert_allclose(out, [-1, 2j, 1])


def test_zero_parameter_evaluates_but_is_not_a_term():
    v = VarietySpec.veronese(2, 3)
    assert cone_point(v, [0, 0]) == [0, 0, 0, 0]
    with pytest.raises(VarietyError):
        Decomposition(v, "complex", [Term(1, (0, 0))])


def test_evaluate_examples():
    v = VarietySpec.veronese(2, 2)
    assert evaluate(Decomposition(v, "real", [])).coeffs == (0, 0, 0)
    assert evaluate(Decomposition(v, "real", [Term(1, (2, 3))])).coeffs == tuple(cone_point(v, [2, 3]))
    xy = Decomposition(v, "real", [Term(Fraction(1, 4), (1, 1)), Term(Fraction(-1, 4), (1, -1))])
    assert evaluate(xy).coeffs == (0, 1, 0)


def test_combine_rejects_mixed_specs_and_fields():
    a = Decomposition(VarietySpec.veronese(2, 2), "real", [Term(1, (1, 0))])
    b = Decomposition(VarietySpec.veronese(2, 3), "real", [Term(1, (1, 0))])
    c = Decomposition(VarietySpec.veronese(2, 2), "complex", [Term(1, (1, 0))])
    with pytest.raises(VarietyError):
        combine(a, b)
    with pytest.raises(VarietyError):
        combine(a, c)
    assert len(combine(a, a)) == 2


def test_point_length_checked():
    with pytest.raises(VarietyError):
        AmbientPoint(VarietySpec.veronese(2, 2), (1, 2), "real")
    with pytest.raises(VarietyError):
        AmbientPoint(VarietySpec.veronese(2, 2), (1, 2, 1j), "real")


def test_real_decomposition_rejects_complex_entries():
    with pytest.raises(VarietyError):
        Decomposition(VarietySpec.veronese(2, 2), "real", [Term(1j, (1.0, 0.0))])


def test_ambient_closed_forms():
    for n in range(2, 5):
        for d in range(1, 6):
            assert VarietySpec.veronese(n, d).ambient_affine_dim == math.comb(n + d - 1, n - 1)
            assert VarietySpec.veronese(n, d).ambient_affine_dim == len(monomials(n, d))
