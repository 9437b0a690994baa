import random

import pytest

from sll.base_rings import FiniteField, WittRing
from sll.errors import DomainError, PreconditionError
from sll.jsonio import series_from_json, series_to_json
from sll.series import SeriesRing

from .oracles import naive_compose, naive_mul, series_equals_dict


def ring_W(p, m, n):
    return WittRing(FiniteField(p, m), n)


def random_series(sring, rng, max_terms=10, min_degree=0):
    terms = []
    for _ in range(rng.randrange(1, max_terms)):
        e = tuple(rng.randrange(0, sring.degree) for _ in range(sring.nvars))
        if not min_degree <= sum(e) < sring.degree:
            continue
        terms.append((e, sring.coeff_ring.random_element(rng)))
    return sring.from_terms(terms)


def test_mul_by_one_is_identity():
    S = SeriesRing(ring_W(3, 1, 2), 2, 4)
    rng = random.Random(0)
    for _ in range(20):
        f = random_series(S, rng)
        assert f * S.one() == f


def test_binomial_square_W2F3():
    S = SeriesRing(ring_W(3, 1, 2), 2, 4)
    x1, x2 = S.variables()
    got = (x1 + x2) * (x1 + x2)
    want = S.from_terms([((2, 0), 1), ((1, 1), 2), ((0, 2), 1)])
    assert got == want


def test_distributivity_and_convolution_oracle():
    S = SeriesRing(ring_W(2, 2, 2), 3, 5)
    rng = random.Random(1)
    for _ in range(200):
        f, g, h = (random_series(S, rng) for _ in range(3))
        assert f * (g + h) == f * g + f * h
        assert series_equals_dict(f * g, naive_mul(f, g))


def test_substitute_identity_variables():
    S = SeriesRing(ring_W(3, 1, 3), 3, 5)
    rng = random.Random(2)
    for _ in range(10):
        f = random_series(S, rng)
        assert f.substitute(S.variables()) == f


def test_substitute_completing_the_rectangle():
    # f = x1 x2 + p x1; shifting x2 by -p kills the linear term exactly
    ring = ring_W(2, 1, 2)
    S = SeriesRing(ring, 2, 4)
    x1, x2 = S.variables()
    f = x1 * x2 + x1.scalar_mul(ring.p_element())
    shifted = f.substitute([x1, x2 - S.constant(ring.p_element())])
    assert shifted == x1 * x2


def test_substitute_matches_naive_composition():
    ring = ring_W(3, 1, 2)
    S = SeriesRing(ring, 3, 5)
    rng = random.Random(3)
    p = ring.p_element()
    for _ in range(40):
        f = random_series(S, rng)
        images = []
        for _ in range(3):
            phi = random_series(S, rng, min_degree=1)
            # constant terms must sit in the maximal ideal
            images.append(phi + S.constant(p * ring.random_element(rng)))
        assert series_equals_dict(f.substitute(images), naive_compose(f, images))


def test_substitution_associativity_up_to_truncation():
    ring = ring_W(2, 1, 3)
    S = SeriesRing(ring, 2, 5)
    rng = random.Random(4)
    for _ in range(20):
        f = random_series(S, rng)
        phi = [random_series(S, rng, min_degree=1) for _ in range(2)]
        psi = [random_series(S, rng, min_degree=1) for _ in range(2)]
        left = f.substitute(phi).substitute(psi)
        right = f.substitute([c.substitute(psi) for c in phi])
        assert left == right


def test_substitute_rejects_unit_constant_term():
    S = SeriesRing(ring_W(2, 1, 2), 2, 4)
    with pytest.raises(PreconditionError):
        S.variable(0).substitute([S.one(), S.variable(1)])


def test_invert_unit_one():
    S = SeriesRing(ring_W(3, 1, 2), 2, 4)
    assert S.one().invert_unit() == S.one()


def test_invert_unit_geometric_series():
    S = SeriesRing(ring_W(3, 1, 2), 1, 5)
    x = S.variable(0)
    inv = (S.one() + x).invert_unit()
    want = S.from_terms([((0,), 1), ((1,), -1), ((2,), 1), ((3,), -1), ((4,), 1)])
    assert inv == want


def test_invert_unit_random_units():
    S = SeriesRing(ring_W(3, 2, 2), 2, 5)
    rng = random.Random(5)
    count = 0
    while count < 100:
        f = random_series(S, rng)
        if not S.coeff_ring.is_unit(f.constant_term()):
            continue
        count += 1
        assert f * f.invert_unit() == S.one()


def test_invert_nonunit_rejected():
    S = SeriesRing(ring_W(2, 1, 2), 1, 4)
    with pytest.raises(PreconditionError):
        S.variable(0).invert_unit()


def test_graded_part_of_the_standard_quadric():
    ring = ring_W(2, 1, 3)
    S = SeriesRing(ring, 4, 4)
    x = S.variables()
    f = S.constant(ring.p_element()) + x[0] * x[3] - x[1] * x[2]
    assert f.graded_part(2) == x[0] * x[3] - x[1] * x[2]
    assert f.graded_part(1) == S.zero()
    assert f.constant_term() == ring.p_element()


def test_constant_term_of_zero():
    S = SeriesRing(ring_W(2, 1, 2), 2, 4)
    assert S.zero().constant_term() == S.coeff_ring.zero()


def test_graded_reconstruction_identity():
    S = SeriesRing(ring_W(3, 1, 2), 3, 5)
    rng = random.Random(6)
    for _ in range(100):
        f = random_series(S, rng)
        acc = S.zero()
        for d in range(S.degree):
            acc = acc + f.graded_part(d)
        assert acc == f


def test_graded_part_beyond_truncation_rejected():
    S = SeriesRing(ring_W(2, 1, 2), 2, 4)
    with pytest.raises(PreconditionError):
        S.zero().graded_part(4)


def test_truncation_coherence():
    ring = ring_W(3, 1, 2)
    big = SeriesRing(ring, 2, 6)
    rng = random.Random(7)
    for _ in range(30):
        f = random_series(big, rng)
        g = random_series(big, rng)
        assert (f * g).truncate(4) == f.truncate(4) * g.truncate(4)
        assert (f + g).truncate(4) == f.truncate(4) + g.truncate(4)
        phi = [random_series(big, rng, min_degree=1) for _ in range(2)]
        assert f.substitute(phi).truncate(4) == f.truncate(4).substitute(
            [c.truncate(4) for c in phi]
        )


def test_linear_part_of_composition_chain_rule():
    ring = ring_W(3, 1, 2)
    S = SeriesRing(ring, 2, 5)
    rng = random.Random(8)
    for _ in range(30):
        f = random_series(S, rng)
        phi = [random_series(S, rng, min_degree=1) for _ in range(2)]
        got = f.substitute(phi).graded_part(1)
        oracle = naive_compose(f, phi)
        want = {e: c for e, c in oracle.items() if sum(e) == 1 and c}
        assert dict(got.coeffs) == want


def test_linear_coefficients_order():
    S = SeriesRing(ring_W(2, 1, 2), 3, 4)
    x = S.variables()
    f = x[1].scalar_mul(3) + x[2]
    lin = f.linear_coefficients()
    assert lin[0] == S.coeff_ring.zero()
    assert lin[1] == S.coeff_ring.from_int(3)
    assert lin[2] == S.coeff_ring.one()


def test_text_rendering():
    ring = ring_W(2, 1, 3)
    S = SeriesRing(ring, 4, 4, ("t11", "t12", "t21", "t22"))
    t = S.variables()
    f = S.constant(ring.p_element()) + t[0] * t[3] - t[1] * t[2]
    assert f.to_text() == "2 + t11*t22 - t12*t21"


def test_json_roundtrip():
    ring = ring_W(3, 2, 2)
    S = SeriesRing(ring, 2, 5)
    rng = random.Random(9)
    for _ in range(20):
        f = random_series(S, rng)
        assert series_from_json(series_to_json(f)) == f


def test_parent_mismatch_rejected():
    S1 = SeriesRing(ring_W(2, 1, 2), 2, 4)
    S2 = SeriesRing(ring_W(2, 1, 2), 2, 5)
    with pytest.raises(DomainError):
        S1.one() + S2.one()
