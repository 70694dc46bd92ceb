import itertools
import random

import pytest

from conftest import validate
from oracles import naive_eval, projective_points
from pforge.fields import finite_field
from pforge.poly import Polynomial, parse
from pforge.smooth import (
    BudgetExceeded,
    UnsupportedCharacteristic,
    ZeroPolynomial,
    count_points,
    enumerate_points,
    projective_count,
    singular_points,
)

F5, F7 = finite_field(5), finite_field(7)
FERMAT = "x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3"


def brute_singular(f: Polynomial, p: int):
    polys = [f] + [f.partial(i) for i in range(f.num_vars)]
    terms = [g.terms for g in polys]
    return sorted(pt for pt in projective_points(p, f.num_vars - 1) if all(naive_eval(t, pt, p) == 0 for t in terms))


# -- enumeration ---------------------------------------------------------------------------


def test_point_counts():
    assert sum(1 for _ in enumerate_points(5, 1, 5)) == 3906
    assert sum(1 for _ in enumerate_points(7, 1, 5)) == 19608


def test_projective_line_over_f3():
    assert list(enumerate_points(3, 1, 1)) == [(1, 0), (1, 1), (1, 2), (0, 1)]


@pytest.mark.parametrize("p,e,n", [(3, 1, 3), (5, 1, 2), (3, 2, 2), (5, 2, 1)])
def test_enumeration_is_a_bijection(p, e, n):
    pts = list(enumerate_points(p, e, n))
    assert len(pts) == len(set(pts)) == projective_count(p**e, n)
    field = finite_field(p, e)
    for pt in pts:
        first = next(c for c in pt if not field.is_zero(c))
        assert first == field.one


def test_enumeration_matches_nested_loop():
    assert sorted(enumerate_points(5, 1, 2)) == sorted(projective_points(5, 2))


def test_characteristic_two_rejected():
    with pytest.raises(UnsupportedCharacteristic):
        list(enumerate_points(2, 1, 2))


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_points(101, 1, 5))
    f = parse(FERMAT, F7, 6)
    with pytest.raises(BudgetExceeded):
        singular_points(f, budget=1000)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("PFORGE_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        singular_points(parse("x0^3 + x1^3 + x2^3", F7, 3))


# -- singular search --------------------------------------------------------------------------


def test_fermat_cubic_clean():
    rep = singular_points(parse(FERMAT, F7, 6))
    assert rep.clean
    assert rep.points_scanned == 19608
    assert rep.verdict == "no singular rational points found"


def test_degenerate_plane_cubic():
    f = parse("x0^2*x1", F5, 3)
    rep = singular_points(f)
    assert rep.singular_points
    assert all(pt[0] == 0 for pt in rep.singular_points)
    assert rep.singular_points == brute_singular(f, 5)


def test_constructed_singular_control():
    f = parse("x0^2*x1 + x2^3 + x3^3 + x4^3 + x5^3", F7, 6)
    rep = singular_points(f)
    assert (0, 1, 0, 0, 0, 0) in rep.singular_points


def test_reported_points_reverify():
    f = parse("x0^2*x1 + x2^3 + x3*x4^2", F5, 6)
    rep = singular_points(f)
    assert rep.singular_points
    for pt in rep.singular_points:
        for g in [f] + [f.partial(i) for i in range(6)]:
            assert naive_eval(g.terms, pt, 5) == 0


@pytest.mark.parametrize("seed", range(8))
def test_matches_brute_force(seed):
    rng = random.Random(seed)
    monos = [m for m in itertools.product(range(4), repeat=4) if sum(m) == 3]
    # sparse cubics tend to be singular, dense ones clean; alternate to see both
    terms = {m: rng.randrange(1, 5) for m in rng.sample(monos, 5 if seed % 2 == 0 else 16)}
    f = Polynomial(F5, 4, terms)
    assert singular_points(f).singular_points == brute_singular(f, 5)


def test_worker_count_does_not_change_report():
    f = parse("x0^2*x1 + x2^3 + x3*x4^2 + x5^3", F7, 6)
    one = singular_points(f, workers=1)
    many = singular_points(f, workers=4)
    assert one.to_json() == many.to_json()


def test_guards():
    with pytest.raises(ZeroPolynomial):
        singular_points(Polynomial.zero(F5, 3))
    with pytest.raises(UnsupportedCharacteristic):
        singular_points(parse("x0^3 + x1^3", finite_field(3), 2))
    with pytest.raises(ValueError):
        singular_points(parse("x0^3 + x1", F5, 2))


def test_extension_scan():
    f = parse("x0^3 + x1^3 + x2^3", F5, 3)
    rep = singular_points(f, ext=2)
    assert rep.field == "F_5^2"
    assert rep.points_scanned == projective_count(25, 2)
    assert rep.clean
    # smooth plane cubic: Hasse bound
    assert abs(rep.point_count_on_X - 26) <= 10


def test_report_schema():
    rep = singular_points(parse("x0^2*x1", F5, 3))
    doc = rep.to_json(F5.format)
    validate(doc, "scan.schema.json")
    assert doc["singular"][0] == ["0", "0", "1"]


# -- counting -----------------------------------------------------------------------------------


def test_hyperplane_count():
    assert count_points(parse("x0", F5, 6), 5, 1) == 781


@pytest.mark.parametrize(
    "text,n,expected",
    [
        ("x0^2 + x1^2 + x2^2", 3, 6),  # conic: q + 1
        ("x0*x1 + x2*x3", 4, 36),  # hyperbolic quadric surface: (q + 1)^2
        ("x0^2 + x1^2 + x2^2 + x3^2 + x4^2", 5, 156),  # smooth quadric in P^4: (q^4 - 1)/(q - 1)
    ],
)
def test_quadric_counts(text, n, expected):
    assert count_points(parse(text, F5, n), 5, 1) == expected


def test_cubic_fourfold_weil_window():
    for field, q in ((F5, 5), (F7, 7)):
        count = count_points(parse(FERMAT, field, 6))
        base = (q**5 - 1) // (q - 1)
        assert abs(count - base) <= 22 * q * q


def test_count_over_extension():
    # the hyperplane x0 = 0 in P^2 over GF(25)
    assert count_points(parse("x0", F5, 3), 5, 2) == 26
