import itertools
import random

import pytest

from hilbert_workbench.catalog import (
    AmplenessViolation,
    blownup_plane,
    cy3_fiber_product,
    elliptic_curve,
    EmptyProduct,
    enriques_fm,
    Family,
    k3_polarized,
    PolarizedFamily,
    product_family,
    recompute,
    UnsupportedFamily,
)
from hilbert_workbench.matcher import (
    compose_and_match,
    cy4_pair,
    CY4Solution,
    cy_coefficient_check,
    enumerate_family,
    enumerate_products,
    find_matches,
    FLAT_FAMILY,
    InvalidRange,
    is_cy4_solution,
    lift_pair,
    match_polarized,
    MatchRecord,
    NoLiftedPair,
    ParamRange,
    solve_cy4_reduced,
    solve_cy4_system,
)
from hilbert_workbench.ratpoly import RatPoly


# === Parameter boxes ===


def test_range_validation() -> None:
    with pytest.raises(InvalidRange):
        ParamRange.of(Family.k3, r=(5, 4))
    with pytest.raises(InvalidRange):
        ParamRange.of(Family.k3, m=(1, 2))
    with pytest.raises(InvalidRange):
        ParamRange.of(Family.blownup_plane, p=(3, 4))
    with pytest.raises(InvalidRange):
        ParamRange(Family.k3, (("r", 1, 2), ("r", 3, 4)))


def test_range_points() -> None:
    box = ParamRange.of(Family.hypersurface_w, z=(1, 2), x=(1, 1), y=(3, 4))
    assert box.size == 4
    assert list(box.points()) == [
        {"x": 1, "y": 3, "z": 1},
        {"x": 1, "y": 3, "z": 2},
        {"x": 1, "y": 4, "z": 1},
        {"x": 1, "y": 4, "z": 2},
    ]


# === Enumeration ===


def test_enumerate_skips_guard_failures() -> None:
    box = ParamRange.of(Family.blownup_plane, p=(1, 5), k=(0, 30))
    families = list(enumerate_family(box))

    expected = [(p, k) for p in range(3, 6) for k in range(1, min(p * p, 31))]
    found = [(f.descriptor.param("p"), f.descriptor.param("k")) for f in families]
    assert found == expected


def test_enumerate_product_range() -> None:
    with pytest.raises(UnsupportedFamily):
        enumerate_family(ParamRange(Family.product))


def test_enumerate_products() -> None:
    products = list(
        enumerate_products(
            [
                ParamRange.of(Family.k3, r=(1, 2)),
                ParamRange.of(Family.elliptic_curve, deg=(1, 3)),
            ]
        )
    )
    assert len(products) == 6
    assert products[0].descriptor.label() == "product[k3(r=1), elliptic-curve(deg=1)]"
    last = k3_polarized(2).polynomial * elliptic_curve(3).polynomial
    assert products[-1].polynomial == last

    with pytest.raises(EmptyProduct):
        enumerate_products([])


def test_workers_do_not_change_results() -> None:
    box = ParamRange.of(Family.blownup_plane, p=(3, 9), k=(1, 60))
    serial = list(enumerate_family(box))
    parallel = list(enumerate_family(box, workers=2, chunk_size=7))
    assert parallel == serial

    left = ParamRange.of(Family.enriques, m=(1, 40))
    assert find_matches(left, box, workers=2) == find_matches(left, box)


# === Matching ===


def random_box(rng: random.Random) -> ParamRange:
    family = rng.choice(
        [
            Family.blownup_plane,
            Family.enriques,
            Family.k3,
            Family.elliptic_curve,
            Family.cy3_fiber_product,
        ]
    )
    if family is Family.blownup_plane:
        p = rng.randint(3, 8)
        k = rng.randint(1, 40)
        return ParamRange.of(
            family, p=(p, p + rng.randint(0, 4)), k=(k, k + rng.randint(0, 40))
        )

    lo = rng.randint(0, 40)
    hi = lo + rng.randint(0, 200)
    return ParamRange(family, ((family_parameter(family), lo, hi),))


def family_parameter(family: Family) -> str:
    return {
        Family.enriques: "m",
        Family.k3: "r",
        Family.elliptic_curve: "deg",
        Family.cy3_fiber_product: "m",
    }[family]


def naive_matches(
    left: list[PolarizedFamily], right: list[PolarizedFamily]
) -> list[MatchRecord]:
    matches = [
        MatchRecord(a.descriptor, b.descriptor, a.polynomial)
        for a in left
        for b in right
        if a.polynomial == b.polynomial
    ]
    return sorted(matches, key=lambda m: (m.left.sort_key(), m.right.sort_key()))


def test_matcher_agrees_with_all_pairs() -> None:
    rng = random.Random(1999)
    for _ in range(100):
        left_box, right_box = random_box(rng), random_box(rng)
        assert left_box.size <= 500 and right_box.size <= 500

        left = list(enumerate_family(left_box))
        right = list(enumerate_family(right_box))
        assert find_matches(left_box, right_box) == naive_matches(left, right)


def test_match_keys_stay_exact() -> None:
    # 2/4 reduces to 1/2
    a = PolarizedFamily(k3_polarized(1).descriptor, RatPoly(["1/2", "2/4"]))
    b = PolarizedFamily(k3_polarized(2).descriptor, RatPoly(["2/4", "1/2"]))
    c = PolarizedFamily(k3_polarized(3).descriptor, RatPoly(["1/2", "1/3"]))
    assert len(match_polarized([a], [b, c])) == 1


def test_enriques_rational_matches() -> None:
    matches = find_matches(
        ParamRange.of(Family.enriques, m=(1, 10)),
        ParamRange.of(Family.blownup_plane, p=(3, 6), k=(1, 35)),
    )
    for match in matches:
        assert match.polynomial == enriques_fm(match.left.param("m")).polynomial
        assert match.interpretation == FLAT_FAMILY
        assert not match.is_counterexample

    pairs = {
        (m.left.param("m"), m.right.param("p"), m.right.param("k")) for m in matches
    }
    assert {(2, 4, 12), (5, 5, 15), (9, 6, 18)} <= pairs


def test_cy3_compose_and_match() -> None:
    matches = compose_and_match(
        [ParamRange.of(Family.cy3_fiber_product, m=(3, 10))],
        [
            ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
            ParamRange.of(Family.elliptic_curve, deg=(2, 2)),
        ],
    )
    assert len(matches) == 1
    assert matches[0].left.children[0].label() == "cy3-fiber-product(m=5)"
    assert matches[0].polynomial == RatPoly([0, 2, 0, 4])
    assert matches[0].is_counterexample


def test_cy4_compose_and_match() -> None:
    matches = compose_and_match(
        [
            ParamRange.of(Family.k3, r=(80, 90)),
            ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
        ],
        [ParamRange.of(Family.hypersurface_w, x=(1, 3), y=(1, 5), z=(1, 3))],
    )
    found = {
        (m.left.children[0].param("r"), m.right.children[0].label()): m.polynomial
        for m in matches
    }
    assert found[(88, "hypersurface-w(x=2,y=4,z=2)")] == RatPoly([2, 0, 92, 0, 176])
    assert all(m.is_counterexample for m in matches)


def test_match_records_recompute() -> None:
    # Both descriptors of every record rebuild to the polynomial it reports
    records = [
        *find_matches(
            ParamRange.of(Family.enriques, m=(1, 10)),
            ParamRange.of(Family.blownup_plane, p=(3, 6), k=(1, 35)),
        ),
        *compose_and_match(
            [ParamRange.of(Family.cy3_fiber_product, m=(3, 10))],
            [
                ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
                ParamRange.of(Family.elliptic_curve, deg=(2, 2)),
            ],
        ),
        *compose_and_match(
            [
                ParamRange.of(Family.k3, r=(80, 90)),
                ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
            ],
            [ParamRange.of(Family.hypersurface_w, x=(1, 3), y=(1, 5), z=(1, 3))],
        ),
    ]
    assert len(records) >= 5

    for record in records:
        left = recompute(record.left).polynomial
        right = recompute(record.right).polynomial
        assert left == right == record.polynomial, record.to_json()


def test_compose_and_match_small_cases() -> None:
    matches = compose_and_match(
        [
            ParamRange.of(Family.enriques, m=(2, 2)),
            ParamRange.of(Family.elliptic_curve, deg=(2, 2)),
        ],
        [
            ParamRange.of(Family.blownup_plane, p=(4, 4), k=(12, 12)),
            ParamRange.of(Family.elliptic_curve, deg=(2, 2)),
        ],
    )
    assert [m.polynomial for m in matches] == [RatPoly([0, 2, 0, 4])]

    assert (
        compose_and_match(
            [ParamRange.of(Family.k3, r=(1, 1))], [ParamRange.of(Family.k3, r=(2, 2))]
        )
        == []
    )

    with pytest.raises(EmptyProduct):
        compose_and_match([], [ParamRange.of(Family.k3, r=(1, 1))])


def test_match_record_json() -> None:
    cy = cy3_fiber_product(5)
    v = product_family([blownup_plane(4, 12), elliptic_curve(2)])
    record = MatchRecord(cy.descriptor, v.descriptor, cy.polynomial)

    data = record.to_json()
    assert data["polynomial"] == "0,2,0,4"
    assert data["left"]["family"] == "cy3-fiber-product"
    assert data["right"]["family"] == "product"
    assert data["interpretation"] == FLAT_FAMILY

    # Either side may be the Calabi-Yau one
    assert MatchRecord(v.descriptor, cy.descriptor, cy.polynomial).is_counterexample


# === The fourfold system ===


def test_solve_cy4_box() -> None:
    solutions = solve_cy4_system(10, 100, 5)

    assert solutions == [CY4Solution(4, 88, 2, 4, 2), CY4Solution(4, 88, 4, 2, 2)]
    assert solutions == sorted(solutions)
    assert all(is_cy4_solution(s) for s in solutions)

    mirrored = {s._replace(x=s.y, y=s.x) for s in solutions}
    assert mirrored == set(solutions)


def test_solve_cy4_matches_nested_scan() -> None:
    expected = [
        CY4Solution(p, r, x, y, z)
        for p in range(4, 11)
        for r in range(1, 101)
        for x, y, z in itertools.product(range(1, 6), repeat=3)
        if is_cy4_solution(CY4Solution(p, r, x, y, z))
    ]
    assert solve_cy4_system(10, 100, 5) == expected


def test_solve_cy4_small_boxes() -> None:
    assert solve_cy4_system(4, 1, 1) == []
    assert solve_cy4_reduced(1) == []

    with pytest.raises(InvalidRange):
        solve_cy4_system(0, 100, 5)
    with pytest.raises(InvalidRange):
        solve_cy4_reduced(0)


def test_reduced_solutions_are_solutions() -> None:
    full = set(solve_cy4_system(10, 100, 5))
    reduced = solve_cy4_reduced(10)

    assert reduced == [CY4Solution(4, 88, 2, 4, 2)]
    for solution in reduced:
        assert solution.y == 2 * solution.x and solution.z == solution.x
        assert solution in full


def test_cy4_pairs_match() -> None:
    for solution in solve_cy4_system(10, 100, 5):
        w, t = cy4_pair(solution)
        assert w.polynomial == t.polynomial
        assert w.descriptor.is_calabi_yau
        assert t.descriptor.kodaira is None
        assert MatchRecord(w.descriptor, t.descriptor, w.polynomial).is_counterexample


def test_is_cy4_solution() -> None:
    assert is_cy4_solution(CY4Solution(4, 88, 2, 4, 2))
    assert not is_cy4_solution(CY4Solution(4, 87, 2, 4, 2))
    assert not is_cy4_solution(CY4Solution(3, 88, 2, 4, 2))


# === Calabi-Yau shape ===


def test_cy_coefficient_check_on_catalog() -> None:
    for m in range(3, 20):
        assert cy_coefficient_check(cy3_fiber_product(m).polynomial, 3)

    # A rational surface with k != 3p has an n term
    assert not cy_coefficient_check(blownup_plane(4, 11).polynomial, 2)
    # Wrong dimension
    assert not cy_coefficient_check(RatPoly([0, 2, 0, 4]), 4)

    with pytest.raises(ValueError):
        cy_coefficient_check(RatPoly([1]), 0)


# === Lifting ===


@pytest.mark.parametrize("d", [3, 5, 6, 7, 8])
def test_lift_pair(d: int) -> None:
    for p in range(4, 8):
        cy, other = lift_pair(d, p, r=2)

        assert cy.polynomial == other.polynomial
        assert cy_coefficient_check(cy.polynomial, d)
        assert cy.descriptor.dimension == other.descriptor.dimension == d
        assert cy.descriptor.is_calabi_yau
        assert other.descriptor.kodaira is None
        record = MatchRecord(cy.descriptor, other.descriptor, cy.polynomial)
        assert record.is_counterexample


def test_lift_pair_even_dimension_threefold() -> None:
    cy, other = lift_pair(6, 4, m=7)
    assert cy.descriptor.children[1].label() == "cy3-fiber-product(m=7)"
    assert cy.polynomial == other.polynomial


@pytest.mark.parametrize("d", [0, 2, 4])
def test_lift_pair_unreachable_dimensions(d: int) -> None:
    with pytest.raises(NoLiftedPair):
        lift_pair(d, 4)


@pytest.mark.parametrize("p", [0, 3])
def test_lift_pair_needs_ample_rational_side(p: int) -> None:
    # S_3p is only ample for p >= 4, whatever the dimension
    for d in [3, 5, 6]:
        with pytest.raises(AmplenessViolation, match="p >= 4 when k = 3p"):
            lift_pair(d, p)
