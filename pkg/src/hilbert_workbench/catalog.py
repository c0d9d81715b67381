"""
### The catalog of polarized families

Each polarized family that takes part in a counterexample gets a constructor
here. A constructor checks the numeric conditions under which the polarization
is known to be ample, then computes the Hilbert polynomial `chi(M, nH)` from
intersection numbers with the appropriate Riemann-Roch formula:

- curves: `chi(nL) = deg(L) n + 1 - g`
- surfaces: `chi(nL) = (L^2)/2 n^2 - (L.K)/2 n + chi(O)`
- Calabi-Yau threefolds: `chi(nH) = (H^3)/6 n^3 + (H.c_2)/12 n`
- the hypersurface `W` of multidegree `(3, 3, 2)` in `P^2 x P^2 x P^1`, through
  the restriction sequence `0 -> O(nx-3, ny-3, nz-2) -> O(nx, ny, nz) -> L^n -> 0`

Products of polarized families are polarized by the external tensor product
and, by Kunneth, their Hilbert polynomial is the product of the factors'.

Nothing here constructs a variety. The genericity conditions behind the
ampleness statements cannot be checked by a computer, so they travel along
with each descriptor as free-text assumptions.
"""


from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import itertools
import logging
from typing import Any, Mapping, NamedTuple, Optional, Sequence

from hilbert_workbench.ratpoly import LinearTwist, ONE, proj_space_chi, RatPoly


# === Errors ===


class WorkbenchError(ValueError):
    """Base class of every domain failure in the workbench."""


class AmplenessViolation(WorkbenchError):
    """
    The parameters fall outside the range where the polarization is known to be
    ample. `condition` names the inequality that failed.
    """

    def __init__(self, family: "Family", condition: str) -> None:
        super().__init__(f"{family.value}: requires {condition}")
        self.family = family
        self.condition = condition


class DimensionMismatch(WorkbenchError):
    pass


class EmptyProduct(WorkbenchError):
    pass


class InternalInconsistency(WorkbenchError):
    """Two computations of the same quantity disagree."""


class UnsupportedFamily(WorkbenchError):
    pass


# === Families ===


class Family(Enum):
    blownup_plane = "blownup-plane"
    enriques = "enriques"
    k3 = "k3"
    elliptic_curve = "elliptic-curve"
    cy3_fiber_product = "cy3-fiber-product"
    hypersurface_w = "hypersurface-w"
    product = "product"


# The ordered integer parameters of each family
PARAMETERS: dict[Family, tuple[str, ...]] = {
    Family.blownup_plane: ("p", "k"),
    Family.enriques: ("m",),
    Family.k3: ("r",),
    Family.elliptic_curve: ("deg",),
    Family.cy3_fiber_product: ("m",),
    Family.hypersurface_w: ("x", "y", "z"),
    Family.product: (),
}


class Traits(NamedTuple):
    """
    Numerical invariants of the underlying variety. A Kodaira dimension of
    `None` stands for minus infinity.
    """

    dimension: int
    kodaira: Optional[int]
    irregularity: int
    calabi_yau: bool
    assumptions: tuple[str, ...] = ()


TRAITS: dict[Family, Traits] = {
    Family.blownup_plane: Traits(
        2, None, 0, False, ("blown-up points are in general position",)
    ),
    Family.enriques: Traits(
        2, 0, 0, False, ("generic Enriques surface with no smooth rational curve",)
    ),
    Family.k3: Traits(2, 0, 0, True, ("polarized K3 surface with (l^2) = 2r",)),
    Family.elliptic_curve: Traits(1, 0, 1, False),
    Family.cy3_fiber_product: Traits(
        3,
        0,
        0,
        True,
        ("generic relatively minimal rational elliptic surfaces with section",),
    ),
    Family.hypersurface_w: Traits(
        4, 0, 0, True, ("smooth hypersurface of multidegree (3, 3, 2)",)
    ),
}


@dataclass(eq=True, frozen=True)
class FamilyDescriptor:
    """
    Identifies one polarized variety: which construction and its integer
    parameters. Product descriptors carry their factors in `children`.
    """

    family: Family
    params: tuple[tuple[str, int], ...] = ()
    children: tuple["FamilyDescriptor", ...] = ()
    assumptions: tuple[str, ...] = ()

    def param(self, name: str) -> int:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(f"{self.family.value} has no parameter '{name}'")

    @property
    def dimension(self) -> int:
        if self.family is Family.product:
            return sum(child.dimension for child in self.children)
        return TRAITS[self.family].dimension

    @property
    def kodaira(self) -> Optional[int]:
        """Kodaira dimension, `None` for minus infinity. It is additive on products."""
        if self.family is not Family.product:
            return TRAITS[self.family].kodaira

        total = 0
        for child in self.children:
            child_kodaira = child.kodaira
            if child_kodaira is None:
                return None
            total += child_kodaira
        return total

    @property
    def irregularity(self) -> int:
        """`h^1(O)`, additive on products by Kunneth."""
        if self.family is Family.product:
            return sum(child.irregularity for child in self.children)
        return TRAITS[self.family].irregularity

    @property
    def is_calabi_yau(self) -> bool:
        if self.family is Family.product:
            return all(child.is_calabi_yau for child in self.children)
        return TRAITS[self.family].calabi_yau

    def sort_key(self) -> tuple[Any, ...]:
        return (
            self.family.value,
            tuple(value for _, value in self.params),
            tuple(child.sort_key() for child in self.children),
        )

    def label(self) -> str:
        """
        Short text form.

            >>> FamilyDescriptor(Family.blownup_plane, (("p", 4), ("k", 12))).label()
            'blownup-plane(p=4,k=12)'
        """
        if self.family is Family.product:
            factors = ", ".join(child.label() for child in self.children)
            return f"product[{factors}]"

        params = ",".join(f"{name}={value}" for name, value in self.params)
        return f"{self.family.value}({params})"

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "family": self.family.value,
            "params": dict(self.params),
            "assumptions": list(self.assumptions),
        }
        if self.family is Family.product:
            data["children"] = [child.to_json() for child in self.children]
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "FamilyDescriptor":
        family = Family(data["family"])
        params = data.get("params", {})
        return cls(
            family=family,
            params=tuple((name, int(params[name])) for name in PARAMETERS[family]),
            children=tuple(cls.from_json(child) for child in data.get("children", [])),
            assumptions=tuple(data.get("assumptions", [])),
        )


class PolarizedFamily(NamedTuple):
    """A descriptor together with its Hilbert polynomial."""

    descriptor: FamilyDescriptor
    polynomial: RatPoly


def describe(family: Family, **params: int) -> FamilyDescriptor:
    return FamilyDescriptor(
        family=family,
        params=tuple((name, params[name]) for name in PARAMETERS[family]),
        assumptions=TRAITS[family].assumptions,
    )


def certify(polarized: PolarizedFamily) -> PolarizedFamily:
    """
    Every Hilbert polynomial is a numerical polynomial. Anything else means an
    intersection number was mistyped.
    """
    if not polarized.polynomial.is_numerical():
        logging.error(f"{polarized.descriptor.label()}: {polarized.polynomial}")
        raise InternalInconsistency(
            f"{polarized.descriptor.label()} has a non integer valued polynomial"
        )
    return polarized


# === Riemann-Roch ===

"""
### Intersection data

Each Riemann-Roch formula only needs a handful of intersection numbers. They
are bundled up so the constructors read like the computations they come from.
"""


class CurveRRData(NamedTuple):
    degree: int
    genus: int


class SurfaceRRData(NamedTuple):
    """`(L^2)`, `(L.K_S)` and `chi(O_S)` of a line bundle on a surface."""

    L2: int
    LK: int
    chiO: int


class CY3RRData(NamedTuple):
    """`(L^3)` and `(L.c_2)` of a line bundle on a Calabi-Yau threefold."""

    L3: int
    Lc2: int


def hilbert_curve(data: CurveRRData) -> RatPoly:
    return RatPoly((1 - data.genus, data.degree))


def hilbert_surface(data: SurfaceRRData) -> RatPoly:
    """
    Surface Riemann-Roch, `(L^2)/2 n^2 - (L.K)/2 n + chi(O)`.

        >>> hilbert_surface(SurfaceRRData(L2=4, LK=0, chiO=1)).render()
        '2n^2 + 1'
    """
    return RatPoly(
        (data.chiO, Fraction(-data.LK, 2), Fraction(data.L2, 2)),
    )


def hilbert_cy3(data: CY3RRData) -> RatPoly:
    """
    Riemann-Roch on a Calabi-Yau threefold, `(L^3)/6 n^3 + (L.c_2)/12 n`.

    Nothing forces the inputs to be divisible by 6 and 12; the constructors
    check integrality of the result instead.
    """
    return RatPoly((0, Fraction(data.Lc2, 12), 0, Fraction(data.L3, 6)))


def test_hilbert_surface() -> None:
    """For example:"""
    # > `(L^2) = 4`, `(L.K) = 0`, `chi(O) = 1` gives `2n^2 + 1`.
    assert hilbert_surface(SurfaceRRData(4, 0, 1)) == RatPoly([1, 0, 2])

    # > The trivial bundle on a K3 gives the constant `2`.
    assert hilbert_surface(SurfaceRRData(0, 0, 2)) == RatPoly([2])


def test_hilbert_cy3() -> None:
    """For example:"""
    # > `(L^3) = 24`, `(L.c_2) = 24` gives `4n^3 + 2n`.
    assert hilbert_cy3(CY3RRData(24, 24)) == RatPoly([0, 2, 0, 4])

    # > `(L^3) = 0`, `(L.c_2) = 0` gives zero.
    assert hilbert_cy3(CY3RRData(0, 0)).is_zero()

    # > `(L^3) = 6`, `(L.c_2) = 12` gives `n^3 + n`.
    assert hilbert_cy3(CY3RRData(6, 12)) == RatPoly([0, 1, 0, 1])


# === Surfaces ===

"""
### The blown-up plane

`S_k` is the plane blown up at `k` general points with hyperplane class `h` and
exceptional curves `e_i`, polarized by `l = ph - sum(e_i)`. This is known to be
ample when `p > 2` and `p^2 > k > 0`. With `(h^2) = 1`, `(e_i^2) = -1`,
`(h.e_i) = 0` and `K = -3h + sum(e_i)`:

- `(l^2) = p^2 - k`
- `(l.K) = -3p + k`
"""

RATIONAL_SURFACE_CHI = 1


def blownup_plane(p: int, k: int) -> PolarizedFamily:
    if p <= 2:
        raise AmplenessViolation(Family.blownup_plane, "p > 2")
    if k <= 0:
        raise AmplenessViolation(Family.blownup_plane, "k > 0")
    if k >= p * p:
        raise AmplenessViolation(Family.blownup_plane, "p^2 > k")

    data = SurfaceRRData(L2=p * p - k, LK=-3 * p + k, chiO=RATIONAL_SURFACE_CHI)
    return certify(
        PolarizedFamily(describe(Family.blownup_plane, p=p, k=k), hilbert_surface(data))
    )


"""
### Enriques surfaces

A generic Enriques surface has an elliptic fibration with half fibers `F` and
`F'` and a bisection `C` with `(F^2) = (C^2) = 0` and `(F.C) = 1`. The bundle
`f_m = F + mC` is ample for `m >= 1`, the canonical class is numerically
trivial and `chi(O) = 1`.
"""

ENRIQUES_F2 = 0
ENRIQUES_C2 = 0
ENRIQUES_FC = 1
ENRIQUES_CHI = 1


def enriques_fm(m: int) -> PolarizedFamily:
    if m < 1:
        raise AmplenessViolation(Family.enriques, "m >= 1")

    # (F + mC)^2
    self_intersection = ENRIQUES_F2 + 2 * m * ENRIQUES_FC + m * m * ENRIQUES_C2
    data = SurfaceRRData(L2=self_intersection, LK=0, chiO=ENRIQUES_CHI)
    descriptor = describe(Family.enriques, m=m)
    return certify(PolarizedFamily(descriptor, hilbert_surface(data)))


"""
### K3 surfaces

For every `r > 0` there is a polarized K3 surface `(S, l)` with `(l^2) = 2r`.
The canonical class is trivial and `chi(O) = 2`.
"""

K3_CHI = 2


def k3_polarized(r: int) -> PolarizedFamily:
    if r < 1:
        raise AmplenessViolation(Family.k3, "r >= 1")

    data = SurfaceRRData(L2=2 * r, LK=0, chiO=K3_CHI)
    return certify(PolarizedFamily(describe(Family.k3, r=r), hilbert_surface(data)))


def test_surfaces() -> None:
    """For example:"""
    # > `p = 4`, `k = 12` on the blown-up plane gives `2n^2 + 1`.
    assert blownup_plane(4, 12).polynomial == RatPoly([1, 0, 2])

    # > `p = 5`, `k = 15` gives `5n^2 + 1`.
    assert blownup_plane(5, 15).polynomial == RatPoly([1, 0, 5])

    # > `f_2` and `f_1` on an Enriques surface give `2n^2 + 1` and `n^2 + 1`.
    assert enriques_fm(2).polynomial == RatPoly([1, 0, 2])
    assert enriques_fm(1).polynomial == RatPoly([1, 0, 1])

    # > K3 surfaces of degree `2r` give `rn^2 + 2`.
    assert k3_polarized(88).polynomial == RatPoly([2, 0, 88])
    assert k3_polarized(1).polynomial == RatPoly([2, 0, 1])


# === Curves and threefolds ===


def elliptic_curve(deg: int) -> PolarizedFamily:
    """An elliptic curve with a line bundle of degree `deg`."""
    if deg < 1:
        raise AmplenessViolation(Family.elliptic_curve, "deg >= 1")

    data = CurveRRData(degree=deg, genus=1)
    return certify(
        PolarizedFamily(describe(Family.elliptic_curve, deg=deg), hilbert_curve(data))
    )


"""
### The fiber product of rational elliptic surfaces

`M = R_1 x_{P^1} R_2` for two generic rational elliptic surfaces with section
is a Calabi-Yau threefold. `R_1` and `R_2` sit inside `M` as pullbacks of the
sections and `F` is a fiber over `P^1`. The bundle `H_m = R_1 + R_2 + mF` is
ample for `m >= 3`.

The triple intersections on the span of `R_1, R_2, F` follow from adjunction:
`R_i` restricted to itself is `K_{R_i}`, which is minus an elliptic fiber, and
`R_1 . R_2` is the common section curve. Only three (unordered) products are
nonzero:

- `R_1^2 . R_2 = R_1 . R_2^2 = -1`
- `R_1 . R_2 . F = 1`

For `c_2`, `c_2(M) . D = c_2(D) - (K_D^2)` on a divisor `D`. Each `R_i` has
Euler number 12 and `K^2 = 0`, and `F` is an abelian surface, so the degrees are
`12, 12, 0`. Together these give `(H_m^3) = 6(m - 1)` and `(H_m.c_2) = 24`.
"""

# Unordered triple intersections in the basis R_1, R_2, F; the rest vanish
FIBER_PRODUCT_TRIPLE: dict[tuple[int, int, int], int] = {
    (0, 0, 1): -1,
    (0, 1, 1): -1,
    (0, 1, 2): 1,
}

# c_2(M) . R_1, c_2(M) . R_2, c_2(M) . F
CY3_C2_DEGREES = (12, 12, 0)


def cy3_intersection_data(m: int) -> CY3RRData:
    """
    `(H_m^3)` and `(H_m.c_2)` from the intersection table.

        >>> cy3_intersection_data(5)
        CY3RRData(L3=24, Lc2=24)
    """
    h = (1, 1, m)
    cube = 0
    for indices in itertools.product(range(3), repeat=3):
        i, j, k = sorted(indices)
        cube += h[i] * h[j] * h[k] * FIBER_PRODUCT_TRIPLE.get((i, j, k), 0)

    c2_degree = sum(a * b for a, b in zip(h, CY3_C2_DEGREES))
    return CY3RRData(L3=cube, Lc2=c2_degree)


def cy3_fiber_product(m: int) -> PolarizedFamily:
    if m < 3:
        raise AmplenessViolation(Family.cy3_fiber_product, "m >= 3")

    polynomial = hilbert_cy3(cy3_intersection_data(m))
    return certify(PolarizedFamily(describe(Family.cy3_fiber_product, m=m), polynomial))


def test_curves_and_threefolds() -> None:
    """For example:"""
    # > A degree 2 bundle on an elliptic curve gives `2n`.
    assert elliptic_curve(2).polynomial == RatPoly([0, 2])
    assert elliptic_curve(1).polynomial == RatPoly([0, 1])

    # > `H_5` gives `4n^3 + 2n` and `H_3` gives `2n^3 + 2n`.
    assert cy3_fiber_product(5).polynomial == RatPoly([0, 2, 0, 4])
    assert cy3_fiber_product(3).polynomial == RatPoly([0, 2, 0, 2])


# === The Calabi-Yau fourfold W ===

"""
### Products of projective spaces

On `P^a x P^b x ...` the Euler characteristic of `O(t_1, t_2, ...)` factors as
the product of the single factor Euler characteristics.
"""


def multiproj_chi(dims: Sequence[int], twists: Sequence[LinearTwist]) -> RatPoly:
    """
    Return `chi(P^dims[0] x P^dims[1] x ..., O(twists[0], twists[1], ...))`.

        >>> multiproj_chi([1], [LinearTwist(1)]).render()
        'n + 1'
    """
    if len(dims) != len(twists):
        raise DimensionMismatch(
            f"Got {len(dims)} projective factors but {len(twists)} twists"
        )

    result = ONE
    for dim, twist in zip(dims, twists):
        result = result * proj_space_chi(dim, twist)
    return result


"""
### Two ways to the Hilbert polynomial of W

`W` is a smooth hypersurface of multidegree `(3, 3, 2)` in
`P = P^2 x P^2 x P^1`, polarized by the restriction of `O(x, y, z)`. The
restriction sequence gives the polynomial as a difference of two Euler
characteristics on `P`. Expanding that difference by hand gives a closed form
with only even powers of `n`. Both are computed here and they must agree.

> I got the closed form wrong twice by hand before it matched the sequence, so
> now the two paths check each other every time `W` is built.
"""

W_AMBIENT_DIMS = (2, 2, 1)
W_MULTIDEGREE = (3, 3, 2)


def hypersurface_w_sequence(x: int, y: int, z: int) -> RatPoly:
    """`chi(O_P(nx, ny, nz)) - chi(O_P(nx - 3, ny - 3, nz - 2))`"""
    degrees = (x, y, z)
    ambient = multiproj_chi(W_AMBIENT_DIMS, [LinearTwist(d) for d in degrees])
    twisted = multiproj_chi(
        W_AMBIENT_DIMS,
        [LinearTwist(d, -shift) for d, shift in zip(degrees, W_MULTIDEGREE)],
    )
    return ambient - twisted


def hypersurface_w_closed_form(x: int, y: int, z: int) -> RatPoly:
    """
    The expanded polynomial
    `((3xy(x+y)z + x^2y^2) n^4 + (6(x+y)z + 2x^2 + 9xy + 2y^2) n^2 + 4) / 2`.
    """
    quartic = 3 * x * y * (x + y) * z + x * x * y * y
    quadratic = 6 * (x + y) * z + 2 * x * x + 9 * x * y + 2 * y * y
    return RatPoly((4, 0, quadratic, 0, quartic)) * Fraction(1, 2)


def hypersurface_w(x: int, y: int, z: int) -> PolarizedFamily:
    for name, value in (("x", x), ("y", y), ("z", z)):
        if value < 1:
            raise AmplenessViolation(Family.hypersurface_w, f"{name} >= 1")

    from_sequence = hypersurface_w_sequence(x, y, z)
    closed_form = hypersurface_w_closed_form(x, y, z)
    if from_sequence != closed_form:
        logging.error(f"W({x}, {y}, {z}): {from_sequence} != {closed_form}")
        raise InternalInconsistency(
            f"hypersurface-w({x}, {y}, {z}): exact sequence and closed form disagree"
        )

    return certify(
        PolarizedFamily(describe(Family.hypersurface_w, x=x, y=y, z=z), from_sequence)
    )


def test_hypersurface_w() -> None:
    """For example:"""
    # > `x = 2`, `y = 4`, `z = 2` gives `176n^4 + 92n^2 + 2`.
    assert hypersurface_w(2, 4, 2).polynomial == RatPoly([2, 0, 92, 0, 176])

    # > `x = y = z = 1` gives `7/2 n^4 + 25/2 n^2 + 2`.
    assert hypersurface_w(1, 1, 1).polynomial.render() == "7/2 n^4 + 25/2 n^2 + 2"

    # > The empty product of projective spaces is a point.
    assert multiproj_chi([], []) == ONE


# === Products ===


def product_family(children: Sequence[PolarizedFamily]) -> PolarizedFamily:
    """
    The product of polarized varieties with the external tensor product of the
    polarizations. By Kunneth its Hilbert polynomial is the product of the
    factors' polynomials.
    """
    if not children:
        raise EmptyProduct("A product needs at least one factor")

    polynomial = ONE
    for child in children:
        polynomial = polynomial * child.polynomial

    descriptor = FamilyDescriptor(
        family=Family.product,
        children=tuple(child.descriptor for child in children),
    )
    return PolarizedFamily(descriptor, polynomial)


def test_product_family() -> None:
    """For example:"""
    # > `S_12 x E` with `p = 4` and a degree 2 bundle on `E` gives `4n^3 + 2n`.
    v = product_family([blownup_plane(4, 12), elliptic_curve(2)])
    assert v.polynomial == RatPoly([0, 2, 0, 4])
    assert v.descriptor.kodaira is None
    assert v.descriptor.irregularity == 1

    # > A K3 of degree 176 times `S_12` gives `176n^4 + 92n^2 + 2`.
    t = product_family([k3_polarized(88), blownup_plane(4, 12)])
    assert t.polynomial == RatPoly([2, 0, 92, 0, 176])

    # > A single factor keeps its polynomial.
    assert product_family([k3_polarized(1)]).polynomial == RatPoly([2, 0, 1])


# === Dispatch ===

"""
The matcher and the command line both need to go from a family tag and a
bag of named integers to a polarized family, and back from a descriptor to its
polynomial.
"""


def build(family: Family, params: Mapping[str, int]) -> PolarizedFamily:
    """Construct the family with the given named parameters."""
    missing = [name for name in PARAMETERS[family] if name not in params]
    if missing:
        raise UnsupportedFamily(
            f"{family.value} is missing parameter(s) {', '.join(missing)}"
        )

    match family:
        case Family.blownup_plane:
            return blownup_plane(params["p"], params["k"])
        case Family.enriques:
            return enriques_fm(params["m"])
        case Family.k3:
            return k3_polarized(params["r"])
        case Family.elliptic_curve:
            return elliptic_curve(params["deg"])
        case Family.cy3_fiber_product:
            return cy3_fiber_product(params["m"])
        case Family.hypersurface_w:
            return hypersurface_w(params["x"], params["y"], params["z"])

    raise UnsupportedFamily(f"{family.value} cannot be built from parameters alone")


def recompute(descriptor: FamilyDescriptor) -> PolarizedFamily:
    """Rebuild a family, recursively for products, from its descriptor alone."""
    if descriptor.family is Family.product:
        return product_family([recompute(child) for child in descriptor.children])
    return build(descriptor.family, dict(descriptor.params))
