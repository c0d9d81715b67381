from fractions import Fraction
import itertools
import math
import random

import pytest
import sympy

from hilbert_workbench.catalog import hypersurface_w_sequence, multiproj_chi
from hilbert_workbench.ratpoly import LinearTwist, N, ONE, proj_space_chi, RatPoly, ZERO


def random_poly(rng: random.Random, max_degree: int = 5) -> RatPoly:
    return RatPoly(
        Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        for _ in range(rng.randint(0, max_degree + 1))
    )


def to_sympy(poly: RatPoly, n: sympy.Symbol) -> sympy.Poly:
    coefficients = [
        sympy.Rational(c.numerator, c.denominator) for c in poly.coefficients
    ]
    return sympy.Poly(list(reversed(coefficients)) or [0], n, domain="QQ")


def from_sympy(poly: sympy.Poly) -> RatPoly:
    return RatPoly(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def test_ring_laws() -> None:
    rng = random.Random(2015)
    for _ in range(200):
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)

        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ZERO
        assert a * ONE == a
        assert a * ZERO == ZERO


def test_evaluation_is_a_homomorphism() -> None:
    rng = random.Random(3)
    for _ in range(200):
        a, b = random_poly(rng), random_poly(rng)
        t = Fraction(rng.randint(-30, 30), rng.randint(1, 4))

        assert (a + b)(t) == a(t) + b(t)
        assert (a * b)(t) == a(t) * b(t)


def test_products_agree_with_sympy() -> None:
    n = sympy.Symbol("n")
    rng = random.Random(88)
    for _ in range(50):
        a, b = random_poly(rng), random_poly(rng)
        assert a * b == from_sympy(to_sympy(a, n) * to_sympy(b, n))
        assert a + b == from_sympy(to_sympy(a, n) + to_sympy(b, n))


def test_normalization() -> None:
    assert RatPoly([1, 2, 0, 0]).coefficients == (1, 2)
    assert RatPoly([Fraction(2, 4)]).coefficients == (Fraction(1, 2),)
    assert RatPoly(["3/6", "-1"]).coefficients == (Fraction(1, 2), -1)
    assert RatPoly([0, 0]).is_zero()

    assert ZERO.degree == -1
    assert ZERO.leading_coefficient == 0
    assert RatPoly([1, 0, 2]).degree == 2
    assert RatPoly.monomial(3, 5) == RatPoly([0, 0, 0, 5])
    assert N**2 == RatPoly.monomial(2)


def test_scalar_multiplication() -> None:
    p = RatPoly([1, 0, 2])
    assert p * 2 == RatPoly([2, 0, 4])
    assert 2 * p == p * 2
    assert p * Fraction(1, 2) == RatPoly([Fraction(1, 2), 0, 1])
    assert p * 0 == ZERO


def test_negative_power() -> None:
    with pytest.raises(ValueError):
        N ** (-1)


def test_keys() -> None:
    w = RatPoly([2, 0, Fraction(25, 2), 0, Fraction(7, 2)])
    assert w.key() == "2,0,25/2,0,7/2"
    assert RatPoly.from_key(w.key()) == w

    assert ZERO.key() == ""
    assert RatPoly.from_key("") == ZERO

    # Distinct polynomials never share a key
    assert RatPoly([1, 2]).key() != RatPoly([12]).key()
    assert RatPoly([Fraction(1, 2)]).key() != RatPoly([1, 2]).key()


def test_json() -> None:
    p = RatPoly([2, 0, Fraction(-25, 2)])
    assert p.to_json() == [
        {"num": "2", "den": "1"},
        {"num": "0", "den": "1"},
        {"num": "-25", "den": "2"},
    ]
    assert RatPoly.from_json(p.to_json()) == p


@pytest.mark.parametrize(
    "coefficients, text",
    [
        ([], "0"),
        ([5], "5"),
        ([0, 1], "n"),
        ([0, -1], "-n"),
        ([-1, 0, 1], "n^2 - 1"),
        ([0, 2, 0, 4], "4n^3 + 2n"),
        ([0, Fraction(1, 2)], "1/2 n"),
        ([Fraction(-3, 2), 0, -2], "-2n^2 - 3/2"),
    ],
)
def test_render(coefficients: list[Fraction], text: str) -> None:
    assert RatPoly(coefficients).render() == text


def test_integrality() -> None:
    # C(n, 2) is numerical but not integral
    binomial = RatPoly([0, Fraction(-1, 2), Fraction(1, 2)])
    assert binomial.is_numerical()
    assert binomial.is_integer_valued()

    half = RatPoly([Fraction(1, 2)])
    assert not half.is_numerical()
    assert not half.is_integer_valued(range(-3, 4))

    # Integer at n = 0 only
    assert RatPoly([0, Fraction(1, 3)]).is_integer_valued([0])
    assert not RatPoly([0, Fraction(1, 3)]).is_numerical()


def count_monomials(dim: int, degree: int) -> int:
    """Count the degree `degree` monomials in `dim + 1` variables one by one."""
    monomials = itertools.combinations_with_replacement(range(dim + 1), degree)
    return sum(1 for _ in monomials)


def test_proj_space_chi_counts_monomials() -> None:
    for dim in range(4):
        chi = proj_space_chi(dim, LinearTwist(1))
        for t in range(31):
            assert chi(t) == count_monomials(dim, t) == math.comb(t + dim, dim)


def test_proj_space_chi_with_twists() -> None:
    for dim, slope, intercept in itertools.product(range(4), range(1, 4), range(-3, 1)):
        chi = proj_space_chi(dim, LinearTwist(slope, intercept))
        for n in range(11):
            t = slope * n + intercept
            if t >= 0:
                assert chi(n) == math.comb(t + dim, dim)

    # Serre duality on P^1: chi(O(-1)) = 0 and chi(O(-2)) = -1
    assert proj_space_chi(1, LinearTwist(1, -1))(0) == 0
    assert proj_space_chi(1, LinearTwist(1, -2))(0) == -1


def test_negative_dimension() -> None:
    with pytest.raises(ValueError):
        proj_space_chi(-1, LinearTwist(1))


def test_multiproj_chi_counts_monomials() -> None:
    for dims in itertools.product(range(4), repeat=2):
        twists = [LinearTwist(1), LinearTwist(2, 1)]
        chi = multiproj_chi(dims, twists)
        for n in range(11):
            expected = count_monomials(dims[0], n) * count_monomials(dims[1], 2 * n + 1)
            assert chi(n) == expected


def test_hypersurface_sequence_agrees_with_sympy() -> None:
    n = sympy.Symbol("n")

    def chi(dim: int, t: sympy.Expr) -> sympy.Expr:
        return sympy.prod([t + i for i in range(1, dim + 1)]) / math.factorial(dim)

    for x, y, z in [(1, 1, 1), (2, 4, 2), (3, 1, 5)]:
        ambient = chi(2, x * n) * chi(2, y * n) * chi(1, z * n)
        twisted = chi(2, x * n - 3) * chi(2, y * n - 3) * chi(1, z * n - 2)
        difference = sympy.expand(ambient - twisted)
        expected = from_sympy(sympy.Poly(difference, n, domain="QQ"))
        assert hypersurface_w_sequence(x, y, z) == expected
