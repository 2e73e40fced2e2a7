import math
import random

import pytest

from chenciner.classify import TABLE_ROWS
from chenciner.normal_form import (
    SEMI_INNER_STABLE, STABLE, UNSTABLE, DegenerateQuadraticError, InvalidModulusError, MapValues,
    NormalFormSystem, census_from_values, expected_circles, from_complex_data, invariant_circles,
    map_step, origin_stability, example_system, sign, validate,
)


def test_from_complex_data():
    b1, b2, l2 = from_complex_data(1.0, 0.7j, 0.3 + 0.2j)
    assert (b1, b2) == (0.0, 0.0)
    assert l2 == pytest.approx((0.49 + 0.6) / 2)
    assert from_complex_data(1.0, 0j, 0j) == (0.0, 0.0, 0.0)
    b1, b2, l2 = from_complex_data(1.01, 0.02 + 0.1j, -0.5 + 0j)
    assert b1 == pytest.approx(0.01)
    assert b2 == pytest.approx(0.02)
    assert l2 == pytest.approx((0.01 + 2 * 1.01 * -0.5) / (2 * 1.01))
    assert l2 == pytest.approx(-0.4950495, abs=1e-7)
    with pytest.raises(InvalidModulusError):
        from_complex_data(0.0, 0j, 0j)


def test_validate_example(example):
    rep = validate(example)
    assert rep.chenciner_ok and rep.degenerate and rep.new_regular
    assert rep.L0 == 1 and rep.classical_det == 0 and rep.new_det == 1
    assert (rep.c1, rep.c2, rep.d1, rep.d2, rep.l1, rep.l2) == (1, 1, 1, 1, 1, 2)


def test_validate_generic_and_irregular():
    rep = validate(NormalFormSystem.from_strings("a1 + a2", "a1 - a2", "1 + a1 + 2*a2"))
    assert not rep.degenerate and rep.classical_det == -2
    rep = validate(NormalFormSystem.from_strings("a1 + a2 + a1^2", "a1 + a2", "1 + a1 + a2"))
    assert rep.degenerate and not rep.new_regular


def test_validate_flags_chenciner_failure():
    rep = validate(NormalFormSystem.from_strings("1/10 + a1 + a2", "a1 + a2", "1 + a1 + 2*a2"))
    assert not rep.chenciner_ok


def test_theta0_range():
    with pytest.raises(ValueError):
        example_system(theta0=4.0)
    with pytest.raises(ValueError):
        example_system(theta0=0.0)


def test_map_step_origin(example):
    assert map_step(example, (-0.017, 0.015), 0.0, 1.0) == (0.0, pytest.approx(1.05))


def test_map_step_wraps_phi(example):
    _, phi = map_step(example, (0.0, 0.0), 0.1, 2 * math.pi - 0.01)
    assert 0 <= phi < 2 * math.pi
    assert phi == pytest.approx(0.04)


@pytest.mark.parametrize("alpha, theta0, rho", [((-0.5, 0.05), 0.03, 0.6718), ((-0.017, 0.015), 0.05, 0.18876)])
def test_map_step_published_fixed_points(example, alpha, theta0, rho):
    rho_next, _ = map_step(example.replace(theta0=theta0), alpha, rho, 0.0)
    assert abs(rho_next - rho) < 1e-4


def test_census_region8(example):
    c = invariant_circles(example, (-0.5, 0.05))
    assert [round(r, 4) for r in c.radii] == [0.3699, 0.6718]
    assert [x.stability for x in c.circles] == [STABLE, UNSTABLE]
    # y2 < y1 for L0 > 0: the stable circle is the inner one
    assert c.circles[0].y < c.circles[1].y


def test_census_double_root(example):
    c = invariant_circles(example, (-0.015719, 0.015), delta_tol=1e-5)
    assert c.double_root
    assert len(c.circles) == 1
    assert abs(c.circles[0].radius - 0.0242) / 0.0242 < 1e-3
    assert c.circles[0].stability == SEMI_INNER_STABLE
    assert c.note


def test_census_no_circles(example):
    v = example.values((0.015, 0.015))
    assert v.beta1 > 0 and v.beta2 > 0
    assert invariant_circles(example, (0.015, 0.015)).circles == ()


def test_census_degenerate_quadratic():
    with pytest.raises(DegenerateQuadraticError):
        census_from_values(MapValues(0.1, 0.2, 0.0))


def test_origin_stability(example):
    assert origin_stability(example, (-0.017, 0.015)).label == STABLE
    o = origin_stability(example, (0.0, 0.0))
    assert (o.label, o.tier) == (UNSTABLE, "nonlinear-L0")
    sys = NormalFormSystem.from_strings("a1", "-1/2 + a2", "1")
    o = origin_stability(sys, (0.0, 0.0))
    assert (o.label, o.tier) == (STABLE, "nonlinear-beta2")


# -- properties -------------------------------------------------------------------

def _root_residual_ok(v, c):
    f = v.l2 * c.y ** 2 + v.beta2 * c.y + v.beta1
    return abs(f) < 1e-12 * max(1.0, abs(v.l2) * c.y ** 2)


def test_root_residual_and_fixed_point(example):
    rng = random.Random(7)
    seen = 0
    for _ in range(400):
        alpha = (rng.uniform(-0.6, 0.6), rng.uniform(-0.2, 0.2))
        v = example.values(alpha)
        census = invariant_circles(example, alpha)
        for c in census.circles:
            seen += 1
            assert _root_residual_ok(v, c)
            rho_next, _ = map_step(example, alpha, c.radius, 0.3)
            assert abs(rho_next - c.radius) <= 1e-10 * c.radius
    assert seen > 50


def test_stability_matches_case_table(example):
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        alpha = (rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02))
        v = example.values(alpha)
        if min(abs(v.beta1), abs(v.beta2), abs(v.delta)) < 1e-8:
            continue
        census = invariant_circles(example, alpha)
        want = expected_circles(sign(float(example.L0)), sign(v.delta), sign(v.beta1), sign(v.beta2))
        assert tuple(c.stability for c in census.circles) == want, alpha
        for c in census.circles:
            slope = 1 + 2 * v.beta2 * c.y + 4 * v.l2 * c.y ** 2
            assert (abs(slope) < 1) == (c.stability == STABLE)
        checked += 1


def _instance(l0, d, b1, b2):
    """Concrete (beta1, beta2, L2) realising a sign pattern, or None."""
    for mb1 in (0.0,) if b1 == 0 else (0.01 * b1, 0.04 * b1):
        for mb2 in (0.0,) if b2 == 0 else (0.1 * b2, 0.5 * b2, 0.02 * b2):
            if d == 0:
                if mb1 == 0 and mb2 == 0:
                    return MapValues(0.0, 0.0, float(l0))
                if mb2 == 0 or mb1 * l0 <= 0:
                    continue
                return MapValues(mb1, mb2, mb2 * mb2 / (4 * mb1))
            v = MapValues(mb1, mb2, float(l0))
            if sign(v.delta) == d:
                return v
    return None


def test_circle_count_for_every_table_row():
    for (l0, d, b1, b2), region in TABLE_ROWS:
        for b2v in ((-1, 0, 1) if b2 is None else (b2,)):
            v = _instance(l0, d, b1, b2v)
            assert v is not None, (l0, d, b1, b2v)
            census = census_from_values(v, l0, 1e-12, 1e-12)
            want = expected_circles(l0, d, b1, b2v)
            assert len(census.circles) == len(want), (l0, d, b1, b2v, region)
