import math
import random

import numpy as np
import pytest

from chenciner.normal_form import NormalFormSystem, invariant_circles, map_step
from chenciner.reproduce import DELTA_TOL, PUBLISHED_POINTS
from chenciner.simulate import (
    ESCAPE, TO_CIRCLE, TO_ORIGIN, UNDECIDED, Probe, Thresholds, default_probe_plan, expected_outcomes,
    iterate_orbit, verify_portrait,
)

TH = Thresholds(delta_tol=DELTA_TOL)
R1 = (-0.017, 0.015)


@pytest.mark.parametrize("rho1, n, kind", [(0.17, 800, TO_ORIGIN), (0.195, 800, ESCAPE), (0.18876, 400, TO_CIRCLE)])
def test_region1_orbits(example, rho1, n, kind):
    rec = iterate_orbit(example, R1, rho1, 0.0, n, TH)
    assert rec.outcome.kind == kind
    if kind == TO_CIRCLE:
        assert rec.outcome.radius == pytest.approx(0.18876, rel=1e-4)


def test_region2_escape(example):
    rec = iterate_orbit(example.replace(theta0=0.03), (-0.015, 0.015), 0.001, 0.0, 700, TH)
    assert rec.outcome.kind == ESCAPE


def test_threshold_outcomes(example):
    rec = iterate_orbit(example, R1, 0.17, 0.0, 100000, TH)
    assert rec.outcome.kind == TO_ORIGIN and rec.outcome.decided_by == "threshold"
    assert rec.rho[-1] < TH.origin_eps
    rec = iterate_orbit(example, R1, 0.195, 0.0, 100000, TH)
    assert rec.outcome.kind == ESCAPE and rec.outcome.decided_by == "threshold"
    assert rec.rho[-1] > TH.escape_radius or rec.rho[-1] <= 0


def test_start_at_origin(example):
    rec = iterate_orbit(example, R1, 0.0, 0.0, 10, TH)
    assert rec.outcome.kind == TO_ORIGIN and rec.n_steps == 0


def test_negative_start_rejected(example):
    with pytest.raises(ValueError):
        iterate_orbit(example, R1, -0.1)


def test_replay_matches_map_step(example):
    rec = iterate_orbit(example, R1, 0.18, 0.4, 300, TH)
    r, p = 0.18, 0.4
    for n in range(1, rec.n_steps + 1):
        r, p = map_step(example, R1, r, p)
        assert rec.rho[n] == r and rec.phi[n] == p
    assert np.array_equal(rec.x, rec.rho * np.cos(rec.phi))


def test_replay_determinism(example):
    a = iterate_orbit(example, R1, 0.19, 1.0, 500, TH)
    b = iterate_orbit(example, R1, 0.19, 1.0, 500, TH)
    assert a.rho.tobytes() == b.rho.tobytes() and a.phi.tobytes() == b.phi.tobytes()
    assert a.outcome == b.outcome


@pytest.mark.parametrize("point", PUBLISHED_POINTS, ids=lambda p: p.name)
def test_phi_decoupling(example, point):
    rng = random.Random(point.name)
    sys = example.replace(theta0=point.theta0)
    probes = point.probes or tuple(default_probe_plan(invariant_circles(sys, point.alpha, TH.sign_tol, TH.delta_tol)))
    for pr in probes:
        base = iterate_orbit(sys, point.alpha, pr.rho, 0.0, pr.n_max, TH)
        for _ in range(5):
            phi1, theta0 = rng.uniform(0, 2 * math.pi), rng.uniform(0.01, 3.1)
            other = iterate_orbit(sys.replace(theta0=theta0), point.alpha, pr.rho, phi1, pr.n_max, TH)
            assert other.outcome == base.outcome
            assert np.array_equal(other.rho, base.rho)


@pytest.mark.parametrize("point", PUBLISHED_POINTS, ids=lambda p: p.name)
def test_verify_portrait_published_points(example, example_t, point):
    sys = example.replace(theta0=point.theta0)
    rep = verify_portrait(sys, example_t, point.alpha, point.probes, TH)
    assert rep.region == point.region
    assert rep.status == "pass", [(str(p.probe), str(p.observed)) for p in rep.probes]
    census = invariant_circles(sys, point.alpha, TH.sign_tol, TH.delta_tol)
    for pr in rep.probes:
        if pr.observed.kind == TO_CIRCLE:
            near = census.nearest(pr.observed.radius)
            assert abs(pr.observed.radius - near.radius) / pr.observed.radius < 1e-3


def test_region8_structure(example, example_t):
    sys = example.replace(theta0=0.03)
    rep = verify_portrait(sys, example_t, (-0.5, 0.05), None, TH)
    inner = [pr.observed for pr in rep.probes if pr.probe.rho < 0.6]
    outer = [pr.observed for pr in rep.probes if pr.probe.rho > 0.7]
    assert inner and all(o.kind == TO_CIRCLE and abs(o.radius - 0.3699) < 1e-4 for o in inner)
    assert outer and all(o.kind == ESCAPE for o in outer)


def test_region6_slow_interior_is_not_a_failure(example, example_t):
    sys = example.replace(theta0=0.02)
    rep = verify_portrait(sys, example_t, (-0.015719, 0.015), [Probe(0.02, 0.0, 1000)], TH)
    assert rep.probes[0].observed.kind == UNDECIDED
    assert rep.status == "inconclusive"


def test_monotone_trap_region4():
    sys = NormalFormSystem.from_strings("a1", "a2", "-1")
    alpha = (-0.01, 0.0)
    rng = random.Random(1)
    for _ in range(5):
        rec = iterate_orbit(sys, alpha, rng.uniform(1e-3, 0.05), 0.0, 5000, TH)
        assert rec.outcome.kind == TO_ORIGIN
        assert np.all(np.diff(rec.rho) < 0)
        assert rec.rho[-1] < TH.origin_eps


def test_expected_outcomes_region1():
    assert [o.kind for o in expected_outcomes(1, (0.2,), 1, 0.1)] == [TO_ORIGIN]
    assert [o.kind for o in expected_outcomes(1, (0.2,), 1, 0.3)] == [ESCAPE]
