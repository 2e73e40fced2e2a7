"""
Orbit iteration of the truncated map and phase-portrait verification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .classify import classify_alpha_point
from .normal_form import (
    SEMI_INNER_STABLE, SEMI_INNER_UNSTABLE, SIGN_TOL, STABLE, UNSTABLE,
    ChencinerError, CircleCensus, MapValues, NormalFormSystem, census_from_values,
)
from .transform import ParameterTransform

TO_ORIGIN = "ToOrigin"
TO_CIRCLE = "ToCircle"
ESCAPE = "Escape"
UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Thresholds:
    origin_eps: float = 1e-6
    escape_radius: float = 10.0
    window: int = 50
    circle_rel_range: float = 1e-4
    match_rtol: float = 1e-3
    n_max: int = 5000
    sign_tol: float = SIGN_TOL
    delta_tol: Optional[float] = None


@dataclass(frozen=True)
class Outcome:
    kind: str
    radius: Optional[float] = None
    # "threshold", "window" or "certificate"
    decided_by: Optional[str] = None

    def __str__(self):
        if self.kind == TO_CIRCLE:
            return f"{self.kind}{{radius={self.radius:.6g}}}"
        return self.kind


@dataclass(frozen=True)
class OrbitRecord:
    alpha: tuple[float, float]
    start: tuple[float, float]
    theta0: float
    rho: np.ndarray
    phi: np.ndarray
    outcome: Outcome

    @property
    def n_steps(self) -> int:
        return len(self.rho) - 1

    @property
    def x(self) -> np.ndarray:
        return self.rho * np.cos(self.phi)

    @property
    def y(self) -> np.ndarray:
        return self.rho * np.sin(self.phi)

    def rows(self):
        """(n, rho, phi, x, y) with n counted from 1 at the start point."""
        xs, ys = self.x, self.y
        for n in range(len(self.rho)):
            yield n + 1, float(self.rho[n]), float(self.phi[n]), float(xs[n]), float(ys[n])


def _real_roots(v: MapValues) -> list[float]:
    a, b, c = v.l2, v.beta2, v.beta1
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    return sorted(((-b - sq) / (2 * a), (-b + sq) / (2 * a)))


def _origin_certificate(v: MapValues, y: float) -> bool:
    """f < 0 on (0, y] and rho' stays positive: rho decreases to 0."""
    if v.growth(y) >= 0 or any(0 < r < y for r in _real_roots(v)):
        return False
    candidates = [0.0, y]
    vertex = -v.beta2 / (2 * v.l2)
    if 0 < vertex < y:
        candidates.append(vertex)
    return min(1.0 + v.growth(c) for c in candidates) > 0


def _escape_certificate(v: MapValues, y: float) -> bool:
    """f > 0 on [y, inf) with L2 > 0: rho increases without bound."""
    return v.l2 > 0 and v.growth(y) > 0 and not any(r > y for r in _real_roots(v))


def _safe_census(v: MapValues, L0, th: Thresholds) -> CircleCensus:
    try:
        return census_from_values(v, L0, th.sign_tol, th.delta_tol)
    except ChencinerError:
        return CircleCensus(v.delta, ())


def iterate_orbit(sys: NormalFormSystem, alpha, rho1: float, phi1: float = 0.0,
                  n_max: Optional[int] = None, thresholds: Thresholds = Thresholds()) -> OrbitRecord:
    """Iterate the truncated map from (rho1, phi1) for at most ``n_max`` steps.

    ToOrigin / Escape stop the run as soon as rho leaves (eps0, R_max) or
    rho' <= 0.  Otherwise the run goes to ``n_max`` and is judged at the end:
    ToCircle if the trailing window is flat and sits on a circle of the
    census; else ToOrigin / Escape when the sign of the growth polynomial
    over the remaining range forces that fate; else Undecided.
    """
    if rho1 < 0:
        raise ValueError("rho1 must be nonnegative")
    th = thresholds
    n_max = th.n_max if n_max is None else n_max
    a = (float(alpha[0]), float(alpha[1]))
    v = sys.values(a)
    theta0 = sys.theta0
    two_pi = 2.0 * math.pi
    rho = np.empty(n_max + 1)
    phi = np.empty(n_max + 1)
    rho[0], phi[0] = rho1, phi1
    r, p = float(rho1), float(phi1)
    outcome = None
    n = 0
    b1, b2, l2 = v.beta1, v.beta2, v.l2
    while n < n_max:
        if r < th.origin_eps:
            outcome = Outcome(TO_ORIGIN, decided_by="threshold")
            break
        if r > th.escape_radius:
            outcome = Outcome(ESCAPE, decided_by="threshold")
            break
        y = r * r
        r_next = r * (1.0 + (b1 + y * (b2 + y * l2)))  # same rounding as map_step
        p = math.fmod(p + theta0, two_pi)
        n += 1
        rho[n], phi[n] = r_next, p
        r = r_next
        if r <= 0.0:
            outcome = Outcome(ESCAPE, decided_by="threshold")
            break
    rho, phi = rho[: n + 1].copy(), phi[: n + 1].copy()
    if outcome is None:
        if r < th.origin_eps:
            outcome = Outcome(TO_ORIGIN, decided_by="threshold")
        elif r > th.escape_radius:
            outcome = Outcome(ESCAPE, decided_by="threshold")
        else:
            outcome = _judge_tail(v, sys.L0, rho, th)
    return OrbitRecord(a, (float(rho1), float(phi1)), theta0, rho, phi, outcome)


def _judge_tail(v: MapValues, L0, rho: np.ndarray, th: Thresholds) -> Outcome:
    tail = rho[-th.window:] if len(rho) >= th.window else rho
    mean = float(tail.mean())
    if len(tail) >= 2 and mean > 0 and (tail.max() - tail.min()) / mean < th.circle_rel_range:
        circle = _safe_census(v, L0, th).nearest(mean)
        if circle is not None and abs(mean - circle.radius) / circle.radius < th.match_rtol:
            return Outcome(TO_CIRCLE, circle.radius, "window")
    y = float(rho[-1]) ** 2
    if _origin_certificate(v, y):
        return Outcome(TO_ORIGIN, decided_by="certificate")
    if _escape_certificate(v, y):
        return Outcome(ESCAPE, decided_by="certificate")
    return Outcome(UNDECIDED)


# -- portrait verification --------------------------------------------------------

# origin stability and circle stabilities (ascending radius) per region
REGION_PORTRAITS: dict[int, tuple[str, tuple[str, ...]]] = {
    1: (STABLE, (UNSTABLE,)),
    2: (UNSTABLE, ()),
    3: (UNSTABLE, (STABLE,)),
    4: (STABLE, ()),
    5: (STABLE, (SEMI_INNER_UNSTABLE,)),
    6: (UNSTABLE, (SEMI_INNER_STABLE,)),
    7: (STABLE, (UNSTABLE, STABLE)),
    8: (UNSTABLE, (STABLE, UNSTABLE)),
}


@dataclass(frozen=True)
class Probe:
    rho: float
    phi: float = 0.0
    n_max: Optional[int] = None


@dataclass(frozen=True)
class ProbeResult:
    probe: Probe
    expected: tuple[Outcome, ...]
    observed: Outcome
    ok: Optional[bool]  # None when undecided


@dataclass
class PortraitReport:
    alpha: tuple[float, float]
    mu: tuple[float, float]
    region: Optional[int]
    expected_origin: Optional[str]
    expected_circles: tuple[str, ...]
    census: CircleCensus
    census_ok: bool
    probes: list[ProbeResult] = field(default_factory=list)
    status: str = "inconclusive"

    def as_dict(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "mu": list(self.mu),
            "region": self.region,
            "expected_origin": self.expected_origin,
            "expected_circles": list(self.expected_circles),
            "census": [{"radius": c.radius, "stability": c.stability} for c in self.census.circles],
            "census_ok": self.census_ok,
            "probes": [{
                "rho1": pr.probe.rho, "phi1": pr.probe.phi, "n_max": pr.probe.n_max,
                "expected": [str(e) for e in pr.expected],
                "observed": str(pr.observed),
                "decided_by": pr.observed.decided_by,
                "ok": pr.ok,
            } for pr in self.probes],
            "status": self.status,
        }


def _attracts_from_above(stab: str) -> bool:
    return stab in (STABLE, SEMI_INNER_UNSTABLE)


def _attracts_from_below(stab: str) -> bool:
    return stab in (STABLE, SEMI_INNER_STABLE)


def _interval_fate(i: int, origin: str, radii, stabs, L0) -> Optional[Outcome]:
    """Fate of a start strictly between node i and node i+1 (node 0 = origin)."""
    lower_attracts = (origin == STABLE) if i == 0 else _attracts_from_above(stabs[i - 1])
    if lower_attracts:
        return Outcome(TO_ORIGIN) if i == 0 else Outcome(TO_CIRCLE, radii[i - 1])
    if i < len(radii):
        if _attracts_from_below(stabs[i]):
            return Outcome(TO_CIRCLE, radii[i])
        return None
    return Outcome(ESCAPE) if L0 > 0 else None


def expected_outcomes(region: int, radii: Sequence[float], L0, rho: float,
                      match_rtol: float = 1e-3) -> tuple[Outcome, ...]:
    """Acceptable outcomes for a start at ``rho`` under the region's portrait.

    A start on an unstable side of a circle may go either way; we never
    insist on convergence to a circle that is not attracting from that side.
    """
    origin, stabs = REGION_PORTRAITS[region]
    radii = list(radii)
    for idx, r in enumerate(radii):
        if abs(rho - r) / r < match_rtol:
            out = [Outcome(TO_CIRCLE, r)]
            for fate in (_interval_fate(idx, origin, radii, stabs, L0),
                         _interval_fate(idx + 1, origin, radii, stabs, L0)):
                if fate is not None and fate not in out:
                    out.append(fate)
            return tuple(out)
    i = sum(1 for r in radii if r < rho)
    fate = _interval_fate(i, origin, radii, stabs, L0)
    return (fate,) if fate is not None else ()


def _matches(observed: Outcome, expected: Outcome, rtol: float) -> bool:
    if observed.kind != expected.kind:
        return False
    if observed.kind == TO_CIRCLE:
        return abs(observed.radius - expected.radius) / expected.radius < rtol
    return True


def default_probe_plan(census: CircleCensus) -> list[Probe]:
    radii = census.radii
    if not radii:
        return [Probe(1e-3)]
    starts: list[float] = []
    for r in radii:
        starts += [0.5 * r, 0.99 * r, 1.01 * r]
    starts.append(1.5 * max(radii))
    seen = []
    for s in starts:
        if all(abs(s - t) > 1e-15 for t in seen):
            seen.append(s)
    return [Probe(s) for s in seen]


def verify_portrait(sys: NormalFormSystem, t: ParameterTransform, alpha,
                    probes: Optional[Sequence[Probe]] = None,
                    thresholds: Thresholds = Thresholds(),
                    undecided_quota: float = 0.5) -> PortraitReport:
    """Simulate probe orbits and compare them with the region's portrait.

    status is "fail" on any decided mismatch or a circle census that does
    not fit the region, "inconclusive" when more than ``undecided_quota`` of
    the probes are Undecided (or the point is unclassified), else "pass".
    """
    th = thresholds
    cls = classify_alpha_point(sys, t, alpha, th.sign_tol, th.delta_tol)
    v = sys.values(cls.alpha)
    census = _safe_census(v, sys.L0, th)
    region = cls.label.region
    report = PortraitReport(cls.alpha, cls.mu, region, None, (), census, False)
    if region is None:
        report.status = "inconclusive"
        return report
    origin, stabs = REGION_PORTRAITS[region]
    report.expected_origin = origin
    report.expected_circles = stabs
    report.census_ok = tuple(c.stability for c in census.circles) == stabs
    plan = list(probes) if probes is not None else default_probe_plan(census)
    radii = census.radii if report.census_ok else ()
    undecided = 0
    mismatch = False
    for pr in plan:
        rec = iterate_orbit(sys, cls.alpha, pr.rho, pr.phi, pr.n_max, th)
        expected = expected_outcomes(region, radii, sys.L0, pr.rho, th.match_rtol) if report.census_ok else ()
        if rec.outcome.kind == UNDECIDED:
            ok = None
            undecided += 1
        else:
            ok = any(_matches(rec.outcome, e, th.match_rtol) for e in expected)
            mismatch |= not ok
        report.probes.append(ProbeResult(pr, expected, rec.outcome, ok))
    if mismatch or not report.census_ok:
        report.status = "fail"
    elif plan and undecided > undecided_quota * len(plan):
        report.status = "inconclusive"
    else:
        report.status = "pass"
    return report
