import random
from fractions import Fraction as F

import pytest

from chenciner.normal_form import GenericityError, NormalFormSystem
from chenciner.series import BivariateSeries, parse_series, series_compose
from chenciner.transform import (
    boundary_curves, build_forward, build_transform, hat_functions, invert_series, inversion_residual,
    linear_inverse_closed_form, linear_matrix, m2_closed_form, newton_inverse, quadratic_mu2_closed_form,
)

MU1 = BivariateSeries.variable(1)
MU2 = BivariateSeries.variable(2)


def test_forward_linear_part(example):
    A = linear_matrix(build_forward(example))
    assert A == ((-4, -4), (2, 3))
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    assert det == -4 * 1 * (1 * 2 - 1 * 1)


def test_forward_trivial():
    sys = NormalFormSystem.from_strings("0", "0", "1")
    f1, f2 = build_forward(sys)
    assert f1.is_zero() and f2.is_zero()


def test_forward_value_at_r1(example_t):
    assert example_t.mu((-0.017, 0.015))[0] == pytest.approx(4.8579e-3, abs=5e-8)


def test_inverse_linear_and_quadratic(example):
    s, p = invert_series(build_forward(example), 1)
    assert s == parse_series("-3/4*mu1 - mu2") and p == parse_series("1/2*mu1 + mu2")
    s, p = invert_series(build_forward(example), 2)
    assert (s[(2, 0)], s[(1, 1)], s[(0, 2)]) == (F(-261, 64), F(-49, 4), F(-10))
    assert (p[(2, 0)], p[(1, 1)], p[(0, 2)]) == (F(89, 32), F(17, 2), F(7))


def test_inverse_of_identity():
    for k in range(1, 5):
        s, p = invert_series((MU1, MU2), k)
        assert s.same_terms(MU1) and p.same_terms(MU2)


def test_inverse_singular_cites_newt():
    sys = NormalFormSystem.from_strings("a1 + a2", "a1 + a2", "1 + a1 + a2")
    with pytest.raises(GenericityError) as exc:
        invert_series(build_forward(sys), 2)
    assert exc.value.condition == "(newt)"


def test_build_transform_rejects_zero_l0():
    sys = NormalFormSystem.from_strings("a1 + a2", "a1 + a2", "a1 + 2*a2")
    with pytest.raises(GenericityError):
        build_transform(sys)


def test_hat_functions_lowest_terms(example_t):
    h = example_t.hat
    assert (h.l2[(0, 0)], h.l2[(1, 0)], h.l2[(0, 1)], h.l2[(0, 2)]) == (1, F(1, 4), 1, 5)
    assert h.beta2[(1, 0)] == F(-1, 4) and h.beta2[(0, 1)] == 0 and h.beta2[(0, 2)] == -5
    # beta2_hat linear part is -d1/(4 L0 c1) mu1
    c = example_t.constants
    assert h.beta2[(1, 0)] == -c["d1"] / (4 * c["L0"] * c["c1"])
    assert h.beta1[(1, 0)] == F(-1, 4)
    # (be1) with m2 = -5 gives m2^2/(4 L0) = 25/4 for the mu2^4 coefficient
    assert h.beta1[(0, 4)] == example_t.m2 ** 2 / (4 * example_t.L0) == F(25, 4)


def test_beta1_hat_direct_route(example):
    """beta1 o S^-1 (inverse to order 4) equals the identity route at order 4."""
    t4 = build_transform(example, 4)
    direct = series_compose(example.beta1, *t4.inverse)
    assert direct == t4.hat.beta1


def test_m2_example(example_t, example):
    assert example_t.m2 == -5 == m2_closed_form(example)
    assert example_t.k1 == -20
    assert example_t.jacobian_det0 == -4


def test_m2_zero_when_no_quadratic_terms():
    sys = NormalFormSystem.from_strings("a1 + a2", "a1 + a2", "1 + a1 + 2*a2")
    assert m2_closed_form(sys) == 0
    assert build_transform(sys).m2 == 0


def test_report_checks(example_t):
    rep = example_t.report()
    assert rep["checks"] == {"roundtrip_residual_zero": True, "delta_hat_equals_mu1": True}
    assert rep["constants"]["m2"] == "-5"


# -- random degenerate systems ------------------------------------------------

def test_random_systems_round_trip(degenerate_systems):
    for sys in degenerate_systems:
        fwd = build_forward(sys)
        for k in (1, 2, 3):
            inv = invert_series(fwd, k)
            r1, r2 = inversion_residual(fwd, inv, k)
            assert r1.is_zero() and r2.is_zero()


def test_random_systems_m2_dual_route(degenerate_systems):
    for sys in degenerate_systems:
        t = build_transform(sys, 2)
        assert t.m2 == m2_closed_form(sys)


def test_random_systems_closed_form_inverse(degenerate_systems):
    for sys in degenerate_systems:
        s, p = build_transform(sys, 2).inverse
        lin = linear_inverse_closed_form(sys)
        assert (s[(1, 0)], s[(0, 1)], p[(1, 0)], p[(0, 1)]) == (lin["s10"], lin["s01"], lin["p10"], lin["p01"])
        quad = quadratic_mu2_closed_form(sys)
        assert (s[(0, 2)], p[(0, 2)]) == (quad["s02"], quad["p02"])


def test_random_systems_delta_hat_identity(degenerate_systems):
    for sys in degenerate_systems[:20]:
        t = build_transform(sys, 2)
        h = t.hat
        assert (h.beta2 * h.beta2 - 4 * h.beta1 * h.l2 - MU1).is_zero()


def test_hat_functions_consistency_with_inverse(example):
    t = build_transform(example, 3)
    h = hat_functions(example, t.inverse)
    assert h.l2 == t.hat.l2


def test_newton_oracle(example_t):
    rng = random.Random(3)
    for _ in range(20):
        mu = (rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3))
        a_newton = newton_inverse(example_t, mu)
        a_series = example_t.alpha(mu)
        assert abs(a_newton[0] - a_series[0]) <= 1e-6
        assert abs(a_newton[1] - a_series[1]) <= 1e-6


# -- boundary curves ------------------------------------------------------------

def test_boundary_curves_example(example_t):
    bc = boundary_curves(example_t, (-0.1, 0.1), 21)
    assert bc.k1 == -20
    assert all(m1 >= 0 for _, m1 in bc.b1) and all(m1 <= 0 for _, m1 in bc.b2)
    assert bc.b1[10] == (0.0, 0.0) and bc.b2[10] == (0.0, 0.0)
    mu2, mu1 = bc.b1[0]
    assert mu1 == pytest.approx(25 * mu2 ** 4)
    assert bc.facts["B2_side"] == "mu1<0"


def test_boundary_curves_l0_negative():
    # L0 = -1, c1 = d1 = 1, quadratic terms chosen so m2 < 0
    sys = NormalFormSystem.from_strings("a1 + a2 + a2^2", "a1 + a2", "-1 + a1 + 2*a2")
    t = build_transform(sys)
    assert t.L0 < 0 and t.m2 < 0 and t.k1 > 0
    bc = boundary_curves(t)
    assert bc.facts["B2_side"] == "mu1>0" and bc.facts["B2_inside_B1"]


def test_boundary_curves_refuse_zero_m2():
    sys = NormalFormSystem.from_strings("a1 + a2", "a1 + a2", "1 + a1 + 2*a2")
    with pytest.raises(GenericityError):
        boundary_curves(build_transform(sys))
