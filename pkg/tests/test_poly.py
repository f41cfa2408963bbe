import random
from fractions import Fraction

import pytest

from polaris.poly import DegreeOverflowError, MAX_EXPONENT, Polynomial

# dim-3 scratch space: v0, v1, v2 with v2 playing the leaf role
X = Polynomial.variable(3, 0)
Y = Polynomial.variable(3, 1)
Z = Polynomial.variable(3, 2)
ONE = Polynomial.constant(3, 1)


def rand_poly(rng, dim=3, max_degree=2, span=3):
    terms = {}
    for _ in range(rng.randint(0, 6)):
        exps = tuple(rng.randint(0, max_degree) for _ in range(dim))
        terms[exps] = terms.get(exps, 0) + rng.randint(-span, span)
    return Polynomial(dim, terms)


def test_additive_inverse():
    assert (X + (-X)).is_zero
    assert X - X == Polynomial.zero(3)


def test_product_identity():
    assert (X + ONE) * (X - ONE) == X * X - ONE


def test_rational_coefficient_product():
    lhs = (Z * Fraction(2, 3)) * (Z * 3)
    assert lhs == Z * Z * 2


def test_coefficients_stay_normalized():
    p = Polynomial(3, {(1, 0, 0): Fraction(2, 4)})
    coeff = p.coefficient((1, 0, 0))
    assert coeff == Fraction(1, 2)
    assert coeff.denominator > 0
    assert Fraction(0) == Polynomial.zero(3).constant_value()


def test_zero_terms_dropped():
    p = Polynomial(3, {(1, 0, 0): 0, (0, 1, 0): 2})
    assert list(p.terms) == [(0, 1, 0)]


def test_partial_examples():
    assert (Z * X).partial(0) == Z
    assert (Z * Z).partial(0).is_zero
    assert (X ** 3).partial(0) == 3 * X * X


def test_partial_index_out_of_range():
    with pytest.raises(ValueError):
        X.partial(3)


def test_evaluate_examples():
    assert (X * X).evaluate((2.0, 0.0, 0.0)) == 4.0
    assert Polynomial.zero(3).evaluate((5.0, 5.0, 5.0)) == 0.0
    assert (Z * X).evaluate((3.0, 0.0, 0.5)) == 1.5


def test_evaluate_length_mismatch():
    with pytest.raises(ValueError):
        X.evaluate((1.0, 2.0))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        X + Polynomial.variable(2, 0)
    with pytest.raises(ValueError):
        X * Polynomial.variable(4, 0)


def test_degree_cap():
    X ** MAX_EXPONENT  # at the cap: fine
    with pytest.raises(DegreeOverflowError):
        X ** (MAX_EXPONENT + 1)
    with pytest.raises(DegreeOverflowError):
        (X ** MAX_EXPONENT) * X
    with pytest.raises(ValueError):
        X ** -1


def test_canonical_string():
    p = X * X + 3 * Y - Fraction(1, 2)
    assert p.to_string(("x", "y", "z")) == "x^2 + 3*y - 1/2"
    assert Polynomial.zero(3).to_string() == "0"
    assert (-X).to_string(("x", "y", "z")) == "-x"


def test_string_is_deterministic():
    a = X * Y + Z * 2 - ONE
    b = -ONE + Z * 2 + Y * X
    assert a == b
    assert a.to_string() == b.to_string()


def test_ring_axioms_randomized():
    rng = random.Random(42)
    for _ in range(200):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_partial_derivatives_commute():
    rng = random.Random(7)
    for _ in range(100):
        p = rand_poly(rng)
        for u in range(3):
            for v in range(3):
                assert p.partial(u).partial(v) == p.partial(v).partial(u)


def test_evaluate_compatible_with_ring_ops():
    rng = random.Random(11)
    for _ in range(200):
        a, b = rand_poly(rng, span=1000), rand_poly(rng, span=1000)
        point = tuple(rng.uniform(-10, 10) for _ in range(3))
        direct = (a * b).evaluate(point)
        split = a.evaluate(point) * b.evaluate(point)
        assert abs(direct - split) <= 1e-12 * (1.0 + abs(split))


def test_hash_matches_equality():
    a = X * Y + ONE
    b = ONE + Y * X
    assert a == b and hash(a) == hash(b)
    assert a != a + X
