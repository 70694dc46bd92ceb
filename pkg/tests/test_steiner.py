import random

import pytest

from oracles import bareiss_det
from pforge.fields import finite_field, rank
from pforge.pfaffian import pfaffian, sub_pfaffian
from pforge.poly import Polynomial, parse
from pforge.rng import InstanceRNG
from pforge.steiner import (
    AlternatingThreeForm,
    DegenerateInstance,
    Kind,
    RankDeficient,
    ShapeMismatch,
    assemble,
    cofactor_form,
    contraction_matrix,
    coordinate_embedding,
    extract_cubic,
    index_choices,
    lift_to_coble,
    linear_section,
    random_data,
    random_presentation,
)

F101 = finite_field(101)


def numeric(m, pt, field):
    return [[m.entry(i, j)(pt) for j in range(m.size)] for i in range(m.size)]


def point_on(form, rng, field):
    """A rational point of ``form = 0``: random first coordinates, then
    search the last one."""
    n = form.num_vars
    while True:
        head = [rng.randrange(field.p) for _ in range(n - 1)]
        for t in range(field.p):
            pt = head + [t]
            if any(pt) and form(pt) == 0:
                return pt


def forged(kind, seed, field=F101):
    for attempt in range(10):
        p = random_presentation(kind, field, InstanceRNG(seed, attempt))
        try:
            return p, extract_cubic(p)
        except DegenerateInstance:
            continue
    raise AssertionError("no usable instance")


# -- contraction ------------------------------------------------------------------------


def test_contraction_cross_product():
    f = finite_field(7)
    omega = AlternatingThreeForm(f, 3, {(0, 1, 2): 1})
    m = contraction_matrix(omega)
    x = Polynomial.gens(f, 3)
    assert m.rows() == [[0 * x[0], x[2], -x[1]], [-x[2], 0 * x[0], x[0]], [x[1], -x[0], 0 * x[0]]]
    assert all(e.is_zero() for e in m.apply(x))


def test_contraction_of_zero_form():
    m = contraction_matrix(AlternatingThreeForm(F101, 6, {}))
    assert m.size == 6 and not m.upper


def test_three_form_is_alternating():
    omega = AlternatingThreeForm.random(F101, 6, InstanceRNG(3))
    assert omega.value(0, 1, 2) == (-omega.value(1, 0, 2)) % 101 == omega.value(1, 2, 0)
    assert omega.value(2, 2, 4) == 0
    assert AlternatingThreeForm.from_json(omega.to_json()) == omega


# -- assembly ---------------------------------------------------------------------------


def test_two_tangent_zero_blocks_degenerate():
    rng = InstanceRNG(4)
    w1 = AlternatingThreeForm.random(F101, 6, rng)
    zero = AlternatingThreeForm(F101, 6, {})
    p = assemble(Kind.TWO_TANGENT, [w1, zero, zero])
    m = p.matrix
    assert all(m.entry(i, j).is_zero() for i in range(12) for j in range(12) if i >= 6 or j >= 6)
    assert p.is_block_degenerate()
    with pytest.raises(DegenerateInstance):
        extract_cubic(p)


def test_two_tangent_kernels():
    p = random_presentation(Kind.TWO_TANGENT, F101, InstanceRNG(11))
    assert p.matrix.size == 12
    assert len(p.kernels) == 2
    assert p.kernels_annihilated()


def test_linear_pfaffian_shape():
    p = random_presentation(Kind.LINEAR_PFAFFIAN, F101, InstanceRNG(5))
    assert p.matrix.size == 6 and p.kernels == ()
    assert len(p.matrix.upper) == 15


def test_shape_mismatch():
    omega6 = AlternatingThreeForm.random(F101, 6, InstanceRNG(1))
    with pytest.raises(ShapeMismatch):
        assemble(Kind.COBLE_FULL, omega6)
    with pytest.raises(ShapeMismatch):
        assemble(Kind.TWO_TANGENT, [omega6, omega6])
    sq = parse("x0^2", F101, 6)
    with pytest.raises(ShapeMismatch):
        assemble(Kind.LINEAR_PFAFFIAN, {(0, 1): sq}, degree=1)


# -- extraction --------------------------------------------------------------------------------


@pytest.mark.parametrize("kind", list(Kind))
def test_extracted_degree(kind):
    p, c = forged(kind, 21)
    assert c.form.is_homogeneous()
    assert c.form.degree() == kind.expected_degree(3)
    assert c.form.num_vars == kind.num_vars
    assert c.form.leading_coefficient() == 1


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_linear_pfaffian_square_is_det(degree):
    p = random_presentation(Kind.LINEAR_PFAFFIAN, F101, InstanceRNG(degree), degree)
    c = extract_cubic(p)
    assert c.form.degree() == degree
    raw = pfaffian(p.matrix)
    rng = random.Random(degree)
    for _ in range(5):
        pt = [rng.randrange(101) for _ in range(6)]
        assert raw(pt) ** 2 % 101 == bareiss_det(numeric(p.matrix, pt, F101), 101)


def test_coble_restriction_two_indices_agree():
    p = random_presentation(Kind.COBLE_RESTRICTION, F101, InstanceRNG(8))
    a = extract_cubic(p, index=[0], check=False).form
    b = extract_cubic(p, index=[1], check=False).form
    assert a == b


@pytest.mark.parametrize("kind", [Kind.COBLE_FULL, Kind.COBLE_RESTRICTION, Kind.TWO_TANGENT])
def test_every_index_choice_agrees(kind):
    p, c = forged(kind, 2)
    choices = index_choices(p)
    rng = random.Random(0)
    for idx in rng.sample(choices, min(4, len(choices))):
        assert extract_cubic(p, index=idx, check=False).form == c.form


@pytest.mark.parametrize("kind", [Kind.COBLE_FULL, Kind.COBLE_RESTRICTION, Kind.TWO_TANGENT])
def test_cofactor_identity_at_points(kind):
    # Pf(M without idx) = sign * cofactor * C, with the raw (unnormalized) C
    p, _ = forged(kind, 6)
    idx = index_choices(p)[0]
    raw = cofactor_form(p, idx)
    sub = sub_pfaffian(p.matrix, idx)
    if len(idx) == 1:
        sign, cof = (-1) ** idx[0], p.kernels[0][idx[0]]
    else:
        (a, b), (u, v) = idx, p.kernels
        sign, cof = (-1) ** (a + b + 1), u[a] * v[b] - u[b] * v[a]
    rng = random.Random(1)
    for _ in range(5):
        pt = [rng.randrange(101) for _ in range(p.num_vars)]
        assert sub(pt) == sign * cof(pt) * raw(pt) % 101


@pytest.mark.parametrize(
    "kind,generic_rank",
    [(Kind.LINEAR_PFAFFIAN, 6), (Kind.COBLE_RESTRICTION, 8), (Kind.COBLE_FULL, 8), (Kind.TWO_TANGENT, 10)],
)
def test_rank_drops_exactly_on_hypersurface(kind, generic_rank):
    p, c = forged(kind, 13)
    rng = random.Random(2)
    for _ in range(3):
        pt = [rng.randrange(101) for _ in range(p.num_vars)]
        if c.form(pt) != 0:
            assert rank(F101, numeric(p.matrix, pt, F101)) == generic_rank
        on = point_on(c.form, rng, F101)
        assert rank(F101, numeric(p.matrix, on, F101)) <= generic_rank - 2


def test_degenerate_extraction_reported():
    zero = AlternatingThreeForm(F101, 9, {})
    with pytest.raises(DegenerateInstance):
        extract_cubic(assemble(Kind.COBLE_FULL, zero))


def test_provenance_records_indices():
    _, c = forged(Kind.TWO_TANGENT, 42)
    assert c.provenance["field"] == "GF(101)"
    assert c.provenance["index"] != c.provenance["check_index"]


# -- lift and sections ---------------------------------------------------------------------


def test_lift_round_trip():
    p = random_presentation(Kind.COBLE_RESTRICTION, F101, InstanceRNG(17))
    omega = lift_to_coble(p, 0)
    assert contraction_matrix(omega, num_vars=6) == p.matrix
    source = p.components[0]
    for a, b, c in AlternatingThreeForm.triples(9):
        if a < 6:
            assert omega.value(a, b, c) == source.value(a, b, c)


def test_lift_rejects_foreign_matrix():
    p = random_presentation(Kind.COBLE_RESTRICTION, F101, InstanceRNG(17))
    bad = p.matrix.map(lambda e: e * e, p.matrix.ring)
    with pytest.raises(ShapeMismatch):
        lift_to_coble(type(p)(p.kind, bad, p.kernels), 1)


def test_lift_lambda_invisible_on_section():
    p = random_presentation(Kind.COBLE_RESTRICTION, F101, InstanceRNG(19))
    direct = extract_cubic(p).form
    emb = coordinate_embedding(F101)
    sections = []
    for lam in (0, 5, 77):
        full = extract_cubic(assemble(Kind.COBLE_FULL, lift_to_coble(p, lam)))
        sections.append(linear_section(full, emb))
    assert sections[0] == sections[1] == sections[2] == direct


def test_linear_section_identity_and_zero():
    emb = coordinate_embedding(F101)
    c = parse("x0^3 + 4*x1*x2*x5", F101, 9)
    assert linear_section(c, emb) == parse("x0^3 + 4*x1*x2*x5", F101, 6)
    assert linear_section(Polynomial.zero(F101, 9), emb).is_zero()


def test_linear_section_rank_checked():
    emb = coordinate_embedding(F101)
    emb[5] = [0] * 6
    with pytest.raises(RankDeficient):
        linear_section(parse("x0^3", F101, 9), emb)


def test_linear_section_general_embedding_commutes_with_evaluation():
    rng = random.Random(4)
    c = parse("x0^3 + x3*x7*x8 + 6*x2^2*x6", F101, 9)
    emb = [[rng.randrange(101) for _ in range(6)] for _ in range(9)]
    sec = linear_section(c, emb)
    pt = [rng.randrange(101) for _ in range(6)]
    image = [sum(r[j] * pt[j] for j in range(6)) % 101 for r in emb]
    scale = c.substitute([Polynomial.linear(F101, r) for r in emb]).leading_coefficient()
    assert sec(pt) * scale % 101 == c(image)


def test_random_data_is_seeded():
    a = random_data(Kind.TWO_TANGENT, F101, InstanceRNG(5, 1))
    b = random_data(Kind.TWO_TANGENT, F101, InstanceRNG(5, 1))
    c = random_data(Kind.TWO_TANGENT, F101, InstanceRNG(5, 2))
    assert a == b and a != c
