"""
### Regression suite for the counterexamples

Each check below recomputes one of the coincidences that the counterexamples
rest on, over a range of parameters, and reports the first place it breaks.
`verify-paper` on the command line runs all of them.
"""


from fractions import Fraction
import itertools
import logging
from typing import Callable, NamedTuple, Optional

from hilbert_workbench.catalog import (
    blownup_plane,
    cy3_fiber_product,
    elliptic_curve,
    enriques_fm,
    hypersurface_w,
    hypersurface_w_closed_form,
    hypersurface_w_sequence,
    k3_polarized,
    product_family,
    WorkbenchError,
)
from hilbert_workbench.matcher import (
    cy4_pair,
    CY4Solution,
    cy_coefficient_check,
    lift_pair,
    solve_cy4_reduced,
    solve_cy4_system,
)
from hilbert_workbench.ratpoly import RatPoly


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict[str, object]:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


# A check returns None when it holds, otherwise a description of the failure
CheckFunction = Callable[[], Optional[str]]

P_RANGE = range(4, 13)

# Everything `solve_cy4_system(10, 100, 5)` finds: one solution and its x, y swap
CY4_BOX_SOLUTIONS = [CY4Solution(4, 88, 2, 4, 2), CY4Solution(4, 88, 4, 2, 2)]


def enriques_matches_rational_surface() -> Optional[str]:
    """`f_{p(p-3)/2}` on an Enriques surface against `l_{p,3p}` on `S_{3p}`."""
    for p in P_RANGE:
        m = p * (p - 3) // 2
        expected = RatPoly([1, 0, m])
        enriques = enriques_fm(m).polynomial
        rational = blownup_plane(p, 3 * p).polynomial
        if not enriques == rational == expected:
            return f"p={p}: {enriques} / {rational} / expected {expected}"
    return None


def cy3_matches_rational_times_elliptic() -> Optional[str]:
    """`H_{p(p-3)+1}` on the fiber product against `S_{3p} x E`."""
    for p in P_RANGE:
        cy, other = lift_pair(3, p)
        if cy.polynomial != other.polynomial:
            return f"p={p}: {cy.polynomial} != {other.polynomial}"
        if other.descriptor.kodaira is not None or other.descriptor.irregularity != 1:
            return f"p={p}: {other.descriptor.label()} needs kappa = -inf, q = 1"

    if cy3_fiber_product(5).polynomial != RatPoly([0, 2, 0, 4]):
        return f"m=5 gives {cy3_fiber_product(5).polynomial}, expected 4n^3 + 2n"
    return None


def cy4_matches_k3_times_rational() -> Optional[str]:
    """`W` with `(2, 4, 2)` against a degree 176 K3 surface times `S_12`."""
    expected = RatPoly([2, 0, 92, 0, 176])
    w = hypersurface_w(2, 4, 2).polynomial
    t = product_family([k3_polarized(88), blownup_plane(4, 12)]).polynomial
    if not w == t == expected:
        return f"{w} / {t} / expected {expected}"

    solutions = solve_cy4_system(10, 100, 5)
    if solutions != CY4_BOX_SOLUTIONS:
        return f"box 10, 100, 5 holds {solutions}, expected {CY4_BOX_SOLUTIONS}"

    for solution in solutions + solve_cy4_reduced(10):
        w_side, t_side = cy4_pair(solution)
        if w_side.polynomial != t_side.polynomial:
            return f"{solution}: {w_side.polynomial} != {t_side.polynomial}"
    return None


def hypersurface_paths_agree() -> Optional[str]:
    """The exact sequence and the closed form for `W` on `1 <= x, y, z <= 20`."""
    for x, y, z in itertools.product(range(1, 21), repeat=3):
        from_sequence = hypersurface_w_sequence(x, y, z)
        closed_form = hypersurface_w_closed_form(x, y, z)
        if from_sequence != closed_form:
            return f"({x}, {y}, {z}): {from_sequence} != {closed_form}"
    return None


def lifted_pairs_match() -> Optional[str]:
    """Products with K3 surfaces and the fiber product keep the coincidence."""
    for d, p, r in itertools.product(range(5, 9), range(4, 7), range(1, 3)):
        cy, other = lift_pair(d, p, r=r)
        if cy.polynomial != other.polynomial:
            return f"d={d}, p={p}, r={r}: {cy.polynomial} != {other.polynomial}"
        if cy.descriptor.dimension != d or not cy.descriptor.is_calabi_yau:
            return f"d={d}: {cy.descriptor.label()} is not a Calabi-Yau {d}-fold"
        if other.descriptor.kodaira is not None:
            return f"d={d}: {other.descriptor.label()} has kappa != -inf"
    return None


def calabi_yau_coefficient_vanishes() -> Optional[str]:
    """No `n^(d-1)` term for the Calabi-Yau families nor their partners."""
    for m in range(3, 51):
        polynomial = cy3_fiber_product(m).polynomial
        if not cy_coefficient_check(polynomial, 3):
            return f"cy3-fiber-product(m={m}): {polynomial}"

    for x, y, z in itertools.product(range(1, 6), repeat=3):
        polynomial = hypersurface_w(x, y, z).polynomial
        if not cy_coefficient_check(polynomial, 4):
            return f"hypersurface-w({x}, {y}, {z}): {polynomial}"

    for p in P_RANGE:
        v = product_family([blownup_plane(p, 3 * p), elliptic_curve(2)])
        polynomial = v.polynomial
        if not cy_coefficient_check(polynomial, 3):
            return f"blownup-plane(p={p}) x elliptic-curve: {polynomial}"
    return None


def integer_valued_catalog() -> Optional[str]:
    """Every Hilbert polynomial is integer valued on `-10..10`."""
    families = itertools.chain(
        (blownup_plane(p, k) for p in range(3, 8) for k in range(1, p * p)),
        (enriques_fm(m) for m in range(1, 21)),
        (k3_polarized(r) for r in range(1, 21)),
        (elliptic_curve(deg) for deg in range(1, 11)),
        (cy3_fiber_product(m) for m in range(3, 21)),
        itertools.starmap(hypersurface_w, itertools.product(range(1, 5), repeat=3)),
    )
    for family in families:
        if not family.polynomial.is_integer_valued():
            return f"{family.descriptor.label()}: {family.polynomial}"

    if RatPoly([0, Fraction(1, 2)]).is_integer_valued():
        return "n/2 was reported as integer valued"
    return None


CHECKS: list[tuple[str, CheckFunction]] = [
    ("enriques-rational-surface", enriques_matches_rational_surface),
    ("cy3-counterexample", cy3_matches_rational_times_elliptic),
    ("cy4-counterexample", cy4_matches_k3_times_rational),
    ("hypersurface-dual-path", hypersurface_paths_agree),
    ("lifting-d5-to-d8", lifted_pairs_match),
    ("cy-coefficient-vanishes", calabi_yau_coefficient_vanishes),
    ("integer-valued", integer_valued_catalog),
]


def run_checks() -> list[Check]:
    results = []
    for name, check in CHECKS:
        try:
            failure = check()
        except WorkbenchError as error:
            failure = f"{type(error).__name__}: {error}"

        logging.info(f"{name}: {'FAIL ' + failure if failure else 'PASS'}")
        results.append(Check(name, failure is None, failure or ""))

    return results
