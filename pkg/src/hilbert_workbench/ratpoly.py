"""
### Exact polynomials in the twist variable

Every Hilbert polynomial in this workbench is a polynomial in a single
variable `n`, the multiple of the polarization being twisted by. The
coefficients are rational (surface Riemann-Roch halves the self-intersection,
threefold Riemann-Roch divides by 6 and 12) but the arithmetic has to stay
exact: two families only sit in one flat family when their polynomials agree
*exactly*.

Python already has everything needed for this. `int` is arbitrary precision
and `fractions.Fraction` keeps every rational reduced with a positive
denominator, so the only thing left to build is the polynomial itself.
"""


from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Iterable, NamedTuple, Union

# Rationals are plain fractions. They are always stored reduced with a
# positive denominator.
Rational = Fraction

# Anything that can be turned into an exact coefficient
Coefficient = Union[int, Fraction, str]


# === Polynomials ===

"""
### Representation

A polynomial is a dense tuple of coefficients in ascending degree, so
`(1, 0, 2)` is `2n^2 + 1`. Trailing zeros are stripped on construction, which
makes the zero polynomial the empty tuple and lets the dataclass equality and
hash be plain tuple comparisons.
"""


@dataclass(eq=True, frozen=True, init=False)
class RatPoly:
    """
    An immutable univariate polynomial with rational coefficients.

        >>> RatPoly([1, 0, 2])
        RatPoly(coefficients=(Fraction(1, 1), Fraction(0, 1), Fraction(2, 1)))
        >>> RatPoly([0, 0]) == RatPoly()
        True
    """

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable[Coefficient] = ()) -> None:
        normalized = [Fraction(c) for c in coefficients]
        while normalized and normalized[-1] == 0:
            normalized.pop()

        # Frozen dataclasses need this to set a field
        object.__setattr__(self, "coefficients", tuple(normalized))

    @classmethod
    def constant(cls, value: Coefficient) -> "RatPoly":
        return cls((Fraction(value),))

    @classmethod
    def monomial(cls, power: int, coefficient: Coefficient = 1) -> "RatPoly":
        """Representation of `coefficient * n**power`."""
        return cls((0,) * power + (Fraction(coefficient),))

    @property
    def degree(self) -> int:
        """Degree of the polynomial. The zero polynomial has degree `-1`."""
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, power: int) -> Fraction:
        """
        Return the coefficient of `n**power`, which is zero past the degree.

            >>> RatPoly([1, 0, 2]).coefficient(2)
            Fraction(2, 1)
            >>> RatPoly([1, 0, 2]).coefficient(7)
            Fraction(0, 1)
        """
        if 0 <= power < len(self.coefficients):
            return self.coefficients[power]
        return Fraction(0)

    # --- Ring operations ---

    def __add__(self, other: "RatPoly") -> "RatPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        return RatPoly(self.coefficient(i) + other.coefficient(i) for i in range(size))

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coefficients)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: Union["RatPoly", int, Fraction]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return RatPoly(c * other for c in self.coefficients)

        if self.is_zero() or other.is_zero():
            return RatPoly()

        # Plain convolution of the two coefficient lists
        product = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b

        return RatPoly(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "RatPoly":
        if exponent < 0:
            raise ValueError(f"Negative power {exponent} of a polynomial")

        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def __call__(self, t: Union[int, Fraction]) -> Fraction:
        """
        Evaluate exactly with Horner's rule.

            >>> RatPoly([2, 0, 1])(0)
            Fraction(2, 1)
        """
        value = Fraction(0)
        for c in reversed(self.coefficients):
            value = value * t + c
        return value

    # --- Integrality ---

    def is_integer_valued(self, points: Iterable[int] = range(-10, 11)) -> bool:
        """Return True iff the polynomial takes integer values at all `points`."""
        return all(self(t).denominator == 1 for t in points)

    def is_numerical(self) -> bool:
        """
        Return True iff the polynomial takes integer values at *every* integer.

        A polynomial of degree `d` does so exactly when it is integer valued at
        `d + 1` consecutive integers (it is then an integer combination of the
        binomials `C(n, i)`), so checking `0..d` is enough.

            >>> RatPoly([0, Fraction(1, 2), Fraction(1, 2)]).is_numerical()
            True
            >>> RatPoly([0, Fraction(1, 2)]).is_numerical()
            False
        """
        return self.is_integer_valued(range(self.degree + 1))

    # --- Serialization ---

    def key(self) -> str:
        """
        Canonical match key: the reduced coefficients in ascending degree.

            >>> RatPoly([2, 0, 88]).key()
            '2,0,88'
            >>> RatPoly([2, 0, Fraction(25, 2), 0, Fraction(7, 2)]).key()
            '2,0,25/2,0,7/2'
        """
        return ",".join(str(c) for c in self.coefficients)

    @classmethod
    def from_key(cls, key: str) -> "RatPoly":
        if not key:
            return cls()
        return cls(Fraction(part) for part in key.split(","))

    def to_json(self) -> list[dict[str, str]]:
        return [
            {"num": str(c.numerator), "den": str(c.denominator)}
            for c in self.coefficients
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict[str, str]]) -> "RatPoly":
        return cls(Fraction(int(item["num"]), int(item["den"])) for item in data)

    def render(self) -> str:
        """
        Human readable form in descending powers.

            >>> RatPoly([1, 0, 2]).render()
            '2n^2 + 1'
            >>> RatPoly([2, 0, Fraction(25, 2), 0, Fraction(7, 2)]).render()
            '7/2 n^4 + 25/2 n^2 + 2'
            >>> RatPoly([0, -1, 0, 1]).render()
            'n^3 - n'
        """
        if self.is_zero():
            return "0"

        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue

            sign = "-" if c < 0 else "+"
            terms.append((sign, _render_term(abs(c), power)))

        first_sign, first_term = terms[0]
        text = ("-" if first_sign == "-" else "") + first_term
        for sign, term in terms[1:]:
            text += f" {sign} {term}"

        return text

    def __str__(self) -> str:
        return self.render()


def _render_term(c: Fraction, power: int) -> str:
    """Render one nonnegative term, gluing integer coefficients to `n`."""
    if power == 0:
        return str(c)

    variable = "n" if power == 1 else f"n^{power}"
    if c == 1:
        return variable
    if c.denominator == 1:
        return f"{c}{variable}"
    return f"{c} {variable}"


ZERO = RatPoly()
ONE = RatPoly.constant(1)
N = RatPoly.monomial(1)


def test_ring_operations() -> None:
    """For example:"""
    # > `(n^2 + 1) + (2n)` is `n^2 + 2n + 1`.
    assert RatPoly([1, 0, 1]) + RatPoly([0, 2]) == RatPoly([1, 2, 1])

    # > `n^3 + (-n^3)` cancels to the zero polynomial.
    assert RatPoly([0, 0, 0, 1]) + RatPoly([0, 0, 0, -1]) == ZERO
    assert (RatPoly([0, 0, 0, 1]) - RatPoly([0, 0, 0, 1])).coefficients == ()

    # > `(n + 2) - (n + 1)` is `1`.
    assert RatPoly([2, 1]) - RatPoly([1, 1]) == ONE

    # > `(2n^2 + 1) * (2n)` is `4n^3 + 2n`.
    assert RatPoly([1, 0, 2]) * RatPoly([0, 2]) == RatPoly([0, 2, 0, 4])

    # > `(88n^2 + 2) * (2n^2 + 1)` is `176n^4 + 92n^2 + 2`.
    assert RatPoly([2, 0, 88]) * RatPoly([1, 0, 2]) == RatPoly([2, 0, 92, 0, 176])

    # > `p * 1` is `p`.
    p = RatPoly([3, Fraction(1, 2), 7])
    assert p * ONE == p
    assert p + ZERO == p


def test_evaluation() -> None:
    """For example:"""
    # > `n^2 + 2` at `0` is `2`.
    assert RatPoly([2, 0, 1])(0) == 2

    # > `2n^3 + 2n` at `1` is `4`.
    assert RatPoly([0, 2, 0, 2])(1) == 4

    # > The zero polynomial is zero everywhere.
    assert ZERO(Fraction(7, 3)) == 0


# === Euler characteristics of projective spaces ===

"""
### Twists

The twists that show up in the exact sequences are all affine in `n`, like
`O(nx - 3)`. A twist is kept as a slope and an intercept and turned into a
degree one polynomial when needed.
"""


class LinearTwist(NamedTuple):
    """The affine twist `t(n) = slope * n + intercept`."""

    slope: int
    intercept: int = 0

    def as_poly(self) -> RatPoly:
        return RatPoly((self.intercept, self.slope))


"""
### Line bundles on projective space

`chi(P^d, O(t))` is the binomial coefficient `C(t + d, d)`, which is the
polynomial `(t + 1)(t + 2)...(t + d) / d!` in `t`. Substituting the twist
polynomial for `t` gives it as a polynomial in `n`.
"""


def proj_space_chi(dim: int, twist: LinearTwist) -> RatPoly:
    """
    Return `chi(P^dim, O(t(n)))` as a polynomial in `n`.

        >>> proj_space_chi(2, LinearTwist(2, 0)).render()
        '2n^2 + 3n + 1'
    """
    if dim < 0:
        raise ValueError(f"Projective space dimension must be nonnegative, got {dim}")

    t = twist.as_poly()
    numerator = ONE
    for i in range(1, dim + 1):
        numerator = numerator * (t + RatPoly.constant(i))

    return numerator * Fraction(1, math.factorial(dim))


def test_proj_space_chi() -> None:
    """For example:"""
    # > `P^2` twisted by `2n` gives `(2n + 1)(2n + 2) / 2`.
    assert proj_space_chi(2, LinearTwist(2, 0)) == RatPoly([1, 3, 2])

    # > `P^1` twisted by `n - 2` gives `n - 1`.
    assert proj_space_chi(1, LinearTwist(1, -2)) == RatPoly([-1, 1])

    # > A point has Euler characteristic `1` whatever the twist.
    assert proj_space_chi(0, LinearTwist(5, -3)) == ONE
