"""
### Looking for coincidences

Two smooth polarized varieties with the same Hilbert polynomial are fibers of
one flat projective morphism over a connected base: embed both by a common high
multiple of the polarization and they land in the same, connected, Hilbert
scheme. So to connect a Calabi-Yau manifold to something that is not one, it is
enough to find *any* polarization on each side with equal Hilbert polynomials.

This module sweeps boxes of catalog parameters, buckets the resulting
polynomials by their canonical key and reports every cross pair that shares a
bucket. It also solves the integer system that a Calabi-Yau fourfold / rational
product coincidence has to satisfy, and lifts the threefold coincidence to every
dimension `d >= 5`.
"""


from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import logging
import math
from typing import Any, Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from hilbert_workbench.catalog import (
    AmplenessViolation,
    blownup_plane,
    build,
    cy3_fiber_product,
    elliptic_curve,
    EmptyProduct,
    Family,
    FamilyDescriptor,
    hypersurface_w,
    InternalInconsistency,
    k3_polarized,
    PARAMETERS,
    PolarizedFamily,
    product_family,
    UnsupportedFamily,
    WorkbenchError,
)
from hilbert_workbench.ratpoly import RatPoly


class InvalidRange(WorkbenchError):
    pass


class NoLiftedPair(WorkbenchError):
    pass


# === Parameter boxes ===


@dataclass(eq=True, frozen=True)
class ParamRange:
    """
    Inclusive integer bounds `(name, lo, hi)` for every parameter of one family.
    The bounds are kept in the family's own parameter order.

        >>> box = ParamRange.of(Family.blownup_plane, k=(8, 9), p=(3, 4))
        >>> box.bounds
        (('p', 3, 4), ('k', 8, 9))
        >>> box.size
        4
    """

    family: Family
    bounds: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self) -> None:
        expected = PARAMETERS[self.family]
        names = [name for name, _, _ in self.bounds]

        if len(set(names)) != len(names):
            raise InvalidRange(f"{self.family.value}: repeated parameter in {names}")

        unknown = set(names) - set(expected)
        if unknown:
            raise InvalidRange(
                f"{self.family.value} has no parameter(s) {', '.join(sorted(unknown))}"
            )

        missing = [name for name in expected if name not in names]
        if missing:
            needed = ", ".join(missing)
            raise InvalidRange(f"{self.family.value} needs bounds for {needed}")

        for name, lo, hi in self.bounds:
            if lo > hi:
                raise InvalidRange(
                    f"{self.family.value}: empty range {name}={lo}..{hi}"
                )

        ordered = tuple(sorted(self.bounds, key=lambda bound: expected.index(bound[0])))
        object.__setattr__(self, "bounds", ordered)

    @classmethod
    def of(cls, family: Family, **bounds: tuple[int, int]) -> "ParamRange":
        return cls(family, tuple((name, lo, hi) for name, (lo, hi) in bounds.items()))

    @property
    def size(self) -> int:
        return math.prod(hi - lo + 1 for _, lo, hi in self.bounds)

    def points(self) -> Iterator[dict[str, int]]:
        """Every parameter assignment in the box, in lexicographic order."""
        names = [name for name, _, _ in self.bounds]
        ranges = [range(lo, hi + 1) for _, lo, hi in self.bounds]
        for values in itertools.product(*ranges):
            yield dict(zip(names, values))


# === Enumeration ===

"""
### Parallel sweeps

A sweep is split into chunks of parameter points. With a single worker the
chunks are built in process; with more, a process pool builds them and
`Executor.map` hands them back in submission order, so the output is the same
either way.
"""

CHUNK_SIZE = 256


def _chunked(
    points: Iterable[dict[str, int]], size: int
) -> Iterator[list[dict[str, int]]]:
    iterator = iter(points)
    while chunk := list(itertools.islice(iterator, size)):
        yield chunk


def _build_chunk(family: Family, points: list[dict[str, int]]) -> list[PolarizedFamily]:
    built = []
    for params in points:
        try:
            built.append(build(family, params))
        except AmplenessViolation as error:
            logging.debug(f"Skipping {family.value} {params}: needs {error.condition}")
    return built


def enumerate_family(
    param_range: ParamRange, workers: int = 1, chunk_size: int = CHUNK_SIZE
) -> Iterator[PolarizedFamily]:
    """
    Yield every guard-satisfying family in the box with its Hilbert polynomial,
    in lexicographic parameter order.
    """
    if param_range.family is Family.product:
        raise UnsupportedFamily("Products are composed from factor ranges")

    return _enumerate(param_range, workers, chunk_size)


def _enumerate(
    param_range: ParamRange, workers: int, chunk_size: int
) -> Iterator[PolarizedFamily]:
    family = param_range.family
    chunks = _chunked(param_range.points(), chunk_size)

    if workers <= 1:
        for chunk in chunks:
            yield from _build_chunk(family, chunk)
        return

    logging.debug(
        f"Sweeping {param_range.size} {family.value} points on {workers} workers"
    )
    with ProcessPoolExecutor(max_workers=workers) as executor:
        for built in executor.map(_build_chunk, itertools.repeat(family), chunks):
            yield from built


def enumerate_products(
    factors: Sequence[ParamRange], workers: int = 1
) -> Iterator[PolarizedFamily]:
    """Every product of one family from each factor box, in lexicographic order."""
    if not factors:
        raise EmptyProduct("A product needs at least one factor range")

    enumerations = [list(enumerate_family(factor, workers)) for factor in factors]
    combinations = itertools.product(*enumerations)
    return (product_family(combination) for combination in combinations)


def test_enumerate_family() -> None:
    """For example:"""
    # > `p` in `3..4` and `k` in `8..9` on the blown-up plane: `p = 3` only
    # > admits `k = 8` since `k < 9`, so 3 of the 4 points survive.
    box = ParamRange.of(Family.blownup_plane, p=(3, 4), k=(8, 9))
    assert [f.descriptor.params for f in enumerate_family(box)] == [
        (("p", 3), ("k", 8)),
        (("p", 4), ("k", 8)),
        (("p", 4), ("k", 9)),
    ]

    # > `r` in `1..3` on K3 surfaces gives `n^2 + 2`, `2n^2 + 2`, `3n^2 + 2`.
    k3s = list(enumerate_family(ParamRange.of(Family.k3, r=(1, 3))))
    assert [f.polynomial for f in k3s] == [RatPoly([2, 0, r]) for r in (1, 2, 3)]

    # > `m = 0` on Enriques surfaces gives nothing.
    assert list(enumerate_family(ParamRange.of(Family.enriques, m=(0, 0)))) == []


# === Matching ===

FLAT_FAMILY = "fibers of a flat projective morphism over a connected base"


@dataclass(eq=True, frozen=True)
class MatchRecord:
    """Two polarized families with the same Hilbert polynomial."""

    left: FamilyDescriptor
    right: FamilyDescriptor
    polynomial: RatPoly
    interpretation: str = FLAT_FAMILY

    @property
    def is_counterexample(self) -> bool:
        """
        True when one side is Calabi-Yau and the other has Kodaira dimension
        minus infinity, so Calabi-Yau-ness is not preserved in the flat family.
        """
        pairs = ((self.left, self.right), (self.right, self.left))
        return any(cy.is_calabi_yau and other.kodaira is None for cy, other in pairs)

    def to_json(self) -> dict[str, Any]:
        return {
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "polynomial": self.polynomial.key(),
            "interpretation": self.interpretation,
        }


def match_polarized(
    left_items: Iterable[PolarizedFamily], right_items: Iterable[PolarizedFamily]
) -> list[MatchRecord]:
    """
    Bucket the right side by polynomial key, then look every left family up.
    Keys are canonical, so a shared key means equal polynomials; that is
    re-checked for every emitted pair anyway.
    """
    buckets: defaultdict[str, list[PolarizedFamily]] = defaultdict(list)
    for item in right_items:
        buckets[item.polynomial.key()].append(item)
    logging.debug(f"Bucketed right side into {len(buckets)} distinct polynomials")

    matches = []
    for left in left_items:
        for right in buckets.get(left.polynomial.key(), ()):
            if left.polynomial != right.polynomial:
                logging.error(f"{left.polynomial} and {right.polynomial} share a key")
                raise InternalInconsistency("Distinct polynomials share a match key")
            record = MatchRecord(left.descriptor, right.descriptor, left.polynomial)
            matches.append(record)

    matches.sort(key=lambda match: (match.left.sort_key(), match.right.sort_key()))
    return matches


def find_matches(
    left: ParamRange, right: ParamRange, workers: int = 1
) -> list[MatchRecord]:
    return match_polarized(
        enumerate_family(left, workers), enumerate_family(right, workers)
    )


def compose_and_match(
    left_factors: Sequence[ParamRange],
    right_factors: Sequence[ParamRange],
    workers: int = 1,
) -> list[MatchRecord]:
    return match_polarized(
        enumerate_products(left_factors, workers),
        enumerate_products(right_factors, workers),
    )


# One side of a match: a single family box or a product of factor boxes
Side = Union[ParamRange, Sequence[ParamRange]]


def enumerate_side(side: Side, workers: int = 1) -> Iterator[PolarizedFamily]:
    if isinstance(side, ParamRange):
        return enumerate_family(side, workers)
    return enumerate_products(side, workers)


def match_sides(left: Side, right: Side, workers: int = 1) -> list[MatchRecord]:
    return match_polarized(
        enumerate_side(left, workers), enumerate_side(right, workers)
    )


def test_find_matches() -> None:
    """For example:"""
    # > Enriques `m` in `1..10` against the blown-up plane with `p` in `3..6`,
    # > `k` in `1..35` includes `f_2` against `l_{4,12}`, sharing `2n^2 + 1`.
    matches = find_matches(
        ParamRange.of(Family.enriques, m=(1, 10)),
        ParamRange.of(Family.blownup_plane, p=(3, 6), k=(1, 35)),
    )
    pairs = {(m.left.label(), m.right.label()): m.polynomial for m in matches}
    assert pairs[("enriques(m=2)", "blownup-plane(p=4,k=12)")] == RatPoly([1, 0, 2])

    # > K3 against Enriques never matches: the constant terms are 2 and 1.
    assert (
        find_matches(
            ParamRange.of(Family.k3, r=(1, 2)), ParamRange.of(Family.enriques, m=(1, 2))
        )
        == []
    )


# === The fourfold system ===

"""
### Calabi-Yau fourfold against a rational product

With `k = 3p` the product `T = S x S_k` of a K3 surface of degree `2r` and the
blown-up plane has Hilbert polynomial `(p^2-3p)r/2 n^4 + (p^2-3p+r) n^2 + 2`,
and the hypersurface `W` has `(A n^4 + B n^2 + 4) / 2` where
`A = 3xy(x+y)z + x^2y^2` and `B = 6(x+y)z + 2x^2 + 9xy + 2y^2`. They agree
exactly when

- `(p^2 - 3p) r = A`
- `p^2 - 3p + r = B / 2`

Both equations are symmetric in `x` and `y`, so solutions come in mirrored
pairs unless `x = y`.
"""

"""
### Initial Thoughts

My first attempt looped over all five unknowns, which crawled once `r` went
past a few hundred. Then I noticed the second equation hands me `r` outright
once `p, x, y, z` are fixed, so the `r` loop disappears. I kept the slow nested
scan around in the tests to make sure the shortcut finds the same tuples.

I also expected exactly one solution in the usual box, and got two. It took me a
minute to see that the second one is just the first with `x` and `y` swapped.
"""


class CY4Solution(NamedTuple):
    p: int
    r: int
    x: int
    y: int
    z: int

    def to_json(self) -> dict[str, int]:
        return dict(self._asdict())


def cy4_quartic(x: int, y: int, z: int) -> int:
    return 3 * x * y * (x + y) * z + x * x * y * y


def cy4_quadratic(x: int, y: int, z: int) -> int:
    """Twice the `n^2` coefficient of `W`'s polynomial."""
    return 6 * (x + y) * z + 2 * x * x + 9 * x * y + 2 * y * y


def is_cy4_solution(solution: CY4Solution) -> bool:
    p, r, x, y, z = solution
    if p < 4 or min(r, x, y, z) < 1:
        return False

    a = p * p - 3 * p
    quadratic = cy4_quadratic(x, y, z)
    return all(
        [
            a * r == cy4_quartic(x, y, z),
            quadratic % 2 == 0,
            2 * (a + r) == quadratic,
        ]
    )


def solve_cy4_system(p_max: int, r_max: int, xyz_max: int) -> list[CY4Solution]:
    """
    Every solution with `4 <= p <= p_max`, `1 <= r <= r_max` and
    `1 <= x, y, z <= xyz_max`, in lexicographic order.

    For fixed `p, x, y, z` the second equation pins down `r`, so only that one
    value of `r` needs checking against the first.
    """
    if min(p_max, r_max, xyz_max) < 1:
        raise InvalidRange("Search bounds must be positive")

    solutions = []
    for p in range(4, p_max + 1):
        a = p * p - 3 * p
        for x, y, z in itertools.product(range(1, xyz_max + 1), repeat=3):
            quadratic = cy4_quadratic(x, y, z)
            if quadratic % 2:
                continue

            r = quadratic // 2 - a
            if not 1 <= r <= r_max:
                continue

            solution = CY4Solution(p, r, x, y, z)
            if a * r == cy4_quartic(x, y, z):
                if not is_cy4_solution(solution):
                    raise InternalInconsistency(f"{solution} fails its own check")
                logging.debug(f"Found {solution}")
                solutions.append(solution)

    return sorted(solutions)


"""
### A special slice

Putting `y = 2x` and `z = x` turns the two sides into `22x^4` and `23x^2`, so the
system becomes `(p^2 - 3p) r = 22x^4`, `(p^2 - 3p) + r = 23x^2`. One way to
split that is `p^2 - 3p = x^2` and `r = 22x^2`, which only needs an integer
root of a quadratic in `p`.

> The discriminant is `9 + 4x^2`, and I was hoping for a whole family here. But
> `(s - 2x)(s + 2x) = 9` leaves only `x = 2`, so this slice gives one tuple.
"""


def solve_cy4_reduced(x_max: int) -> list[CY4Solution]:
    """
    Solutions with `y = 2x`, `z = x`, `p^2 - 3p = x^2`, `r = 22x^2`.

        >>> solve_cy4_reduced(2)
        [CY4Solution(p=4, r=88, x=2, y=4, z=2)]
    """
    if x_max < 1:
        raise InvalidRange("Search bound must be positive")

    solutions = []
    for x in range(1, x_max + 1):
        # p = (3 + sqrt(9 + 4x^2)) / 2; the discriminant is odd, so the root is too
        discriminant = 9 + 4 * x * x
        root = math.isqrt(discriminant)
        if root * root != discriminant:
            continue

        p = (3 + root) // 2
        if p < 4:
            continue

        solution = CY4Solution(p=p, r=22 * x * x, x=x, y=2 * x, z=x)
        if not is_cy4_solution(solution):
            raise InternalInconsistency(f"{solution} fails the full system")
        solutions.append(solution)

    return solutions


def cy4_pair(solution: CY4Solution) -> tuple[PolarizedFamily, PolarizedFamily]:
    """The hypersurface `W` and the product `S x S_{3p}` a solution connects."""
    p, r, x, y, z = solution
    return (
        hypersurface_w(x, y, z),
        product_family([k3_polarized(r), blownup_plane(p, 3 * p)]),
    )


def test_solve_cy4() -> None:
    """For example:"""
    # > `p = 4, r = 88, x = 2, y = 4, z = 2` solves the system.
    assert CY4Solution(4, 88, 2, 4, 2) in solve_cy4_system(10, 100, 5)

    # > `x = 1` on the slice needs `p^2 - 3p = 1`, which has no integer root.
    assert solve_cy4_reduced(1) == []

    # > Both sides of the pair share `176n^4 + 92n^2 + 2`.
    w, t = cy4_pair(CY4Solution(4, 88, 2, 4, 2))
    assert w.polynomial == t.polynomial == RatPoly([2, 0, 92, 0, 176])


# === Calabi-Yau shape of a polynomial ===

"""
On a Calabi-Yau `d`-fold the canonical class is trivial, so Riemann-Roch has no
`n^(d-1)` term. Any other fiber of a flat family with a Calabi-Yau fiber
shares that polynomial, so its `(L^(d-1).K)` vanishes as well.
"""


def cy_coefficient_check(poly: RatPoly, d: int) -> bool:
    if d < 1:
        raise ValueError(f"Dimension must be positive, got {d}")
    return poly.degree == d and poly.coefficient(d - 1) == 0


def test_cy_coefficient_check() -> None:
    """For example:"""
    # > `4n^3 + 2n` in dimension 3 has no `n^2` term.
    assert cy_coefficient_check(RatPoly([0, 2, 0, 4]), 3)

    # > `2n^2 + 1` in dimension 2 has no `n` term.
    assert cy_coefficient_check(RatPoly([1, 0, 2]), 2)

    # > `n^2 + n + 1` does.
    assert not cy_coefficient_check(RatPoly([1, 1, 1]), 2)


# === Higher dimensions ===

"""
### Lifting the threefold coincidence

The threefold coincidence is `M` with `H_m`, `m = p(p-3) + 1`, against
`V = S_{3p} x E`. Multiplying both fibers of the flat family by the same
polarized variety keeps the polynomials equal:

- odd `d >= 5`: multiply by `S^((d-3)/2)` for a K3 surface `S`
- even `d >= 6`: multiply by `M x S^((d-6)/2)`

Dimension 4 is not reachable this way; the hypersurface pair covers it.
"""


def lift_pair(
    d: int, p: int, r: int = 1, m: Optional[int] = None
) -> tuple[PolarizedFamily, PolarizedFamily]:
    """The (Calabi-Yau, Kodaira dimension minus infinity) pair in dimension `d`."""
    if d < 3 or d == 4:
        raise NoLiftedPair(
            f"No lifted pair in dimension {d}; it needs d = 3 or d >= 5"
        )
    if p < 4:
        raise AmplenessViolation(Family.blownup_plane, "p >= 4 when k = 3p")

    cy_side = cy3_fiber_product(p * (p - 3) + 1)
    other_side = product_family([blownup_plane(p, 3 * p), elliptic_curve(2)])
    if d == 3:
        return cy_side, other_side

    if d % 2:
        extra = [k3_polarized(r)] * ((d - 3) // 2)
    else:
        threefold = cy3_fiber_product(m if m is not None else p * (p - 3) + 1)
        extra = [threefold] + [k3_polarized(r)] * ((d - 6) // 2)

    return product_family([cy_side, *extra]), product_family([other_side, *extra])


def test_lift_pair() -> None:
    """For example:"""
    # > In dimension 3, `H_5` and `S_12 x E` share `4n^3 + 2n`.
    cy, other = lift_pair(3, 4)
    assert cy.polynomial == other.polynomial == RatPoly([0, 2, 0, 4])

    # > In dimension 5, multiplying by a K3 surface keeps them equal.
    cy, other = lift_pair(5, 4, r=2)
    assert cy.polynomial == other.polynomial
    assert cy.descriptor.dimension == other.descriptor.dimension == 5
