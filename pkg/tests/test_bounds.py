import math

import pytest

from maxrank.bounds import (
    KNOWN_MAX_RANK,
    binary_form_facts,
    binom,
    bound_ambient_minus_dim,
    bound_ballico_deparis,
    bound_hypersurface_refinement,
    bound_jelisiejew,
    bound_proposition,
    bound_twice_generic,
    congruence_refined_bound,
    emit_waring_table,
    format_table,
    variety_bound_report,
    waring_bound_report,
    waring_max_bound,
)
from maxrank.dimension import AH_EXCEPTIONS, segre_generic_rank, waring_generic_rank
from maxrank.variety import VarietySpec

# (n, d): (r_gen, J, BDP, r*_max, known r_max)
EXPECTED_TABLE = {
    (3, 3): (4, 5, 5, 8, 5),
    (3, 4): (6, 9, 8, 11, 7),
    (3, 5): (7, 14, 13, 14, None),
    (3, 6): (10, 20, 19, 20, None),
    (3, 7): (12, 27, 26, 24, None),
    (3, 8): (15, 35, 34, 30, None),
    (4, 3): (5, 9, 9, 10, 7),
    (4, 4): (10, 18, 17, 19, None),
    (4, 5): (14, 32, 30, 28, None),
    (4, 6): (21, 52, 49, 42, None),
    (4, 7): (30, 79, 75, 60, None),
    (4, 8): (42, 114, 109, 84, None),
}


def test_table_cell_for_cell():
    rows = emit_waring_table((3, 4), range(3, 9))
    assert [(r.n, r.d) for r in rows] == list(EXPECTED_TABLE)
    for row in rows:
        assert row.cells() == EXPECTED_TABLE[(row.n, row.d)]


def test_table_text_and_json_rows():
    rows = emit_waring_table((3,), range(3, 4))
    assert rows[0].as_dict() == {
        "n": 3, "d": 3, "r_gen": 4, "r_max_J": 5, "r_max_BDP": 5, "r_max_star": 8, "r_max_known": 5,
    }
    text = format_table(emit_waring_table())
    assert len(text.splitlines()) == 14
    assert text.splitlines()[-1].split() == ["4", "8", "42", "114", "109", "84"]


def test_binomial_convention():
    assert binom(5, 2) == 10
    assert binom(2, 5) == 0
    assert binom(-1, 0) == 0
    assert binom(0, 0) == 1
    assert binom(3, -1) == 0


def test_twice_generic_examples():
    assert bound_twice_generic(waring_generic_rank(3, 7).r_gen) == 24
    assert bound_twice_generic(1) == 2
    r = segre_generic_rank([2] * 9).r_gen
    assert r == 52 and bound_twice_generic(r) == 104 < 2**7


def test_hypersurface_refinement_examples():
    assert bound_hypersurface_refinement(waring_generic_rank(3, 4).r_gen) == 11
    assert bound_hypersurface_refinement(waring_generic_rank(5, 4).r_gen) == 29
    for d in range(2, 12, 2):
        assert bound_hypersurface_refinement((d + 2) // 2) == d + 1


def test_ambient_minus_dim_examples():
    assert bound_ambient_minus_dim(9, 2) == 8
    assert bound_ambient_minus_dim(5, 5) == 1
    assert bound_ambient_minus_dim(7, 3) == 5
    with pytest.raises(ValueError):
        bound_ambient_minus_dim(3, 4)


def test_proposition_examples():
    for n, dim_x in [(9, 2), (7, 3), (14, 2)]:
        assert bound_proposition(1, n - dim_x, 1) == bound_ambient_minus_dim(n, dim_x)
    for r_gen in range(2, 20):
        k = r_gen - 1
        assert bound_proposition(k, 1, 2 * k + 1) == bound_hypersurface_refinement(r_gen)
    assert bound_proposition(2, 3, 5) == 8
    with pytest.raises(ValueError):
        bound_proposition(0, 1, 1)


def test_jelisiejew_and_bdp_examples():
    assert bound_jelisiejew(3, 5) == 14
    assert bound_ballico_deparis(4, 3) == 9
    assert bound_ballico_deparis(3, 8) == 34


def test_waring_max_bound_examples():
    assert waring_max_bound(3, 6) == 20
    assert waring_max_bound(4, 4) == 19
    assert waring_max_bound(5, 3) == 15
    assert waring_max_bound(3, 4) == 11
    assert waring_max_bound(5, 4) == 29
    with pytest.raises(ValueError):
        waring_max_bound(3, 2)


def test_waring_max_bound_structure():
    for n in range(2, 7):
        for d in range(3, 10):
            r = waring_generic_rank(n, d).r_gen
            expected = 2 * r - 1 if (n, d) in AH_EXCEPTIONS else 2 * r
            assert waring_max_bound(n, d) == expected


def test_bound_ordering_invariants():
    for (n, d), (r_gen, J, BDP, star, known) in EXPECTED_TABLE.items():
        assert r_gen <= min(J, BDP, 2 * r_gen)
        if known is not None:
            assert known <= min(J, BDP, star, 2 * r_gen)
            assert KNOWN_MAX_RANK[(n, d)][0] == known


def test_crossover_for_plane_curves():
    for d in range(3, 9):
        twice = 2 * waring_generic_rank(3, d).r_gen
        bdp = bound_ballico_deparis(3, d)
        if d >= 7:
            assert twice < bdp
        if d <= 4:
            assert twice > bdp


def test_congruence_refinement_reported_separately():
    assert congruence_refined_bound(3, 6) == 19
    assert waring_max_bound(3, 6) == 20
    assert congruence_refined_bound(3, 5) is None
    assert congruence_refined_bound(3, 4) is None


def test_reports():
    rep = waring_bound_report(3, 4)
    labels = {e.label: e.value for e in rep.entries}
    assert labels["TwiceGeneric"] == 12
    assert labels["TwiceGenericMinusOne"] == 11
    assert labels["Jelisiejew"] == 9 and labels["BallicoDeParis"] == 8
    assert rep.best == 8
    assert all(e.value >= rep.r_gen for e in rep.entries)
    vrep = variety_bound_report(VarietySpec.segre([2, 2, 2]), 2)
    assert {e.label: e.value for e in vrep.entries}["AmbientMinusDim"] == 5
    assert vrep.as_dict()["best"] == vrep.best


def test_binary_form_facts():
    f6, f7, f1 = binary_form_facts(6), binary_form_facts(7), binary_form_facts(1)
    assert (f6.r_max, f6.r_gen, f6.sharp_bound) == (6, 4, 6)
    assert (f7.r_max, f7.r_gen, f7.sharp_bound) == (7, 4, 7)
    assert (f1.r_max, f1.r_gen) == (1, 1)
    for d in range(1, 20):
        f = binary_form_facts(d)
        assert f.sharp_bound == d and f.r_gen == math.ceil((d + 1) / 2)
