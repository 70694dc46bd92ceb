from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gram_det
from pforge import invariants as inv
from pforge.invariants import PfaffianTypeParams
from pforge.steiner import Kind

TABLE2 = [
    (0, 14, 5, 13),
    (1, 18, 15, 81),
    (2, 20, 31, 327),
    (3, 20, 53, 943),
    (4, 18, 81, 2193),
    (5, 14, 115, 4413),
    (6, 8, 155, 8011),
    (7, 0, 201, 13467),
]


# -- instantons ------------------------------------------------------------------------------


def test_instanton_c1():
    assert inv.instanton_c1(2, 3) == 2
    assert inv.instanton_c1(2, 2) == 1
    assert inv.instanton_c1(4, 3) == 4


def test_chi_twist_examples():
    assert inv.chi_twist(2, 1, 4, 0, 3) == 3
    assert inv.chi_twist(2, 2, 4, 1, 3) == 18
    for r in range(1, 6):
        assert inv.chi_twist(r, 0, 4, -1, 3) == 0


def test_rational_values_stay_exact():
    assert inv.instanton_c1(1, 2) == Fraction(1, 2)
    assert inv.surface_degree(3, 0, 0) == 5
    assert isinstance(inv.surface_chi(3, 1, 1), Fraction)


def test_nonintegral_table_entry_is_an_error():
    with pytest.raises(inv.NonIntegralResult):
        inv.table1_tsv([(2, Fraction(29, 2), 0)])


def test_binomial_negative_top():
    assert inv.binomial(-1, 3) == -1
    assert inv.binomial(5, 2) == 10
    assert inv.binomial(3, -1) == 0


# -- surfaces -------------------------------------------------------------------------------------


def test_surface_examples():
    assert inv.surface_invariants(3, 0, 0).deg_Y == 5
    assert inv.surface_invariants(4, 0, 0).deg_Y == 14
    s = inv.surface_invariants(3, 2, 2)
    assert (s.deg_Y, s.Y_squared) == (31, 327)


@pytest.mark.parametrize("k,delta,h2y,y2", TABLE2)
def test_table2_rows(k, delta, h2y, y2):
    s = inv.surface_invariants(3, k, k)
    assert (s.deg_Y, s.Y_squared, s.gram_discriminant) == (h2y, y2, delta)


def test_integrality_grid():
    for d in range(2, 7):
        for s in range(11):
            for k in range(11):
                out = inv.surface_invariants(d, s, k)
                assert all(isinstance(v, int) for v in (out.deg_Y, out.chi_O_Y, out.Y_squared))


def test_degree_must_be_at_least_two():
    with pytest.raises(ValueError):
        inv.surface_invariants(1, 0, 0)


@settings(max_examples=60)
@given(st.integers(2, 6), st.integers(0, 12))
def test_charge_route_matches_gram(d, k):
    s = inv.surface_invariants(d, k, k)
    assert Fraction(inv.charge_discriminant(d, k), 180) == gram_det(d, s.deg_Y, s.Y_squared)


# -- charge bound -------------------------------------------------------------------------------


def test_charge_examples():
    assert inv.charge_discriminant(3, 7) == 0
    assert inv.charge_discriminant(3, 0) == 2520
    assert inv.charge_discriminant(2, 1) >= 0 > inv.charge_discriminant(2, 2)
    assert inv.charge_bound(3) == 7
    assert inv.charge_bound(2) == 1


@pytest.mark.parametrize("d", range(2, 12))
def test_charge_bound_brackets_root(d):
    k = inv.charge_bound(d)
    assert inv.charge_discriminant(d, k) >= 0
    assert inv.charge_discriminant(d, k + 1) < 0


@pytest.mark.parametrize("d", range(2, 8))
def test_charge_discriminant_concave(d):
    vals = [inv.charge_discriminant(d, k) for k in range(30)]
    seconds = [vals[i + 2] - 2 * vals[i + 1] + vals[i] for i in range(28)]
    assert all(x < 0 for x in seconds)


def test_ci_check():
    c7 = inv.ci_class_check(7)
    assert c7.lam == 67 and c7.is_ci_compatible
    c0 = inv.ci_class_check(0)
    assert c0.lam == Fraction(5, 3) and not c0.is_ci_compatible
    assert not inv.ci_class_check(2).is_ci_compatible


# -- Pfaffian discriminant ---------------------------------------------------------------------


def test_linear_pfaffian_closed_form():
    for d in range(2, 7):
        res = inv.pfaffian_discriminant(PfaffianTypeParams(d, 1, (0, 0, 0, 0, 0), d))
        assert res.delta == Fraction(d * d * (d * d - 1) * (4 * d * d - 1), 180)


def test_steiner_kinds():
    assert inv.chern_of_steiner(Kind.COBLE_RESTRICTION) == (1, 1, 1, 1, 1)
    assert inv.chern_of_steiner(Kind.TWO_TANGENT) == (2, 3, 4, 5, 6)
    assert inv.pfaffian_discriminant(inv.steiner_params(Kind.COBLE_RESTRICTION)).delta == 18
    assert inv.pfaffian_discriminant(inv.steiner_params(Kind.TWO_TANGENT)).delta == 20


def test_tangent_chern():
    assert inv.tangent_p5_chern() == [1, 6, 15, 20, 15, 6]


def test_unsupported_kind():
    with pytest.raises(inv.UnsupportedKind):
        inv.chern_of_steiner(Kind.COBLE_FULL)


@settings(max_examples=200)
@given(
    st.integers(1, 6),
    st.integers(1, 4),
    st.tuples(*[st.integers(-5, 8)] * 5),
)
def test_gram_identity_random(r, l, e):
    d = r * l - e[0]
    if d < 1:
        return
    res = inv.pfaffian_discriminant(PfaffianTypeParams(r, l, e, d))
    assert res.delta == d * res.c2_sq - res.c2_h2**2


def test_cross_formula_rank_two_ulrich():
    trivial = inv.pfaffian_discriminant(PfaffianTypeParams(3, 1, (0, 0, 0, 0, 0), 3))
    assert inv.ulrich_numerics(2, 13).delta == trivial.delta == 14


# -- Ulrich numerics and tables ---------------------------------------------------------------


def test_ulrich_examples():
    u2 = inv.ulrich_numerics(2, 13)
    assert (u2.m, u2.delta) == (0, 14)
    u3 = inv.ulrich_numerics(3, 54)
    assert (u3.m, u3.delta) == (2, 18)
    assert inv.ulrich_numerics(1, 0).r == 1


def test_table1_cells():
    rows = inv.enumerate_table1()
    by_rank = {}
    for r, delta, m in rows:
        by_rank.setdefault(r, []).append((delta, m))
    assert by_rank[2] == [(14, 0)]
    assert by_rank[3] == [(18, 2)]
    assert by_rank[4] == [(8, 10), (14, 8), (20, 6), (26, 4), (32, 2), (38, 0)]
    assert by_rank[5] == [(8 + 6 * i, 16 - 2 * i) for i in range(9)]


def test_table2():
    assert inv.table2() == TABLE2


def test_golden_tsv(golden):
    assert inv.table1_tsv() == (golden / "table1.tsv").read_text()
    assert inv.table2_tsv() == (golden / "table2.tsv").read_text()


def test_locus_dimension():
    assert inv.pfaffian_locus_dimension(3) == {"matrix_space": 90, "locus": 54, "cubics": 55}
    assert inv.pfaffian_locus_dimension(4)["locus"] == 104
    d5 = inv.pfaffian_locus_dimension(5)
    assert d5["locus"] == 170 < d5["cubics"] == 251
    with pytest.raises(ValueError):
        inv.pfaffian_locus_dimension(2)


def test_lattice_report():
    rep = inv.lattice_report(3, 1, 1)
    assert rep.delta == 18
