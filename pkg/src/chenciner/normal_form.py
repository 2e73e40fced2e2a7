"""
Truncated normal form of the Chenciner bifurcation and its invariant circles.

The rho-map is ``rho -> rho * (1 + beta1 + beta2*rho^2 + L2*rho^4)`` and the
angle advances by a fixed ``theta0``.  Positive roots ``y = rho^2`` of the
growth polynomial ``f(y) = L2*y^2 + beta2*y + beta1`` are invariant circles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .series import BivariateSeries, parse_series

SIGN_TOL = 1e-9
ROOT_TOL = 1e-12

STABLE = "stable"
UNSTABLE = "unstable"
SEMI_INNER_STABLE = "semi-stable(inner-stable/outer-unstable)"
SEMI_INNER_UNSTABLE = "semi-stable(inner-unstable/outer-stable)"


class ChencinerError(Exception):
    """Base class for analysis errors."""


class InvalidModulusError(ChencinerError, ValueError):
    pass


class DegenerateQuadraticError(ChencinerError, ValueError):
    pass


class GenericityError(ChencinerError):
    """A standing genericity assumption fails; ``condition`` names it."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


def sign(value: float, tol: float = 0.0) -> int:
    if value > tol:
        return 1
    if value < -tol:
        return -1
    return 0


@dataclass(frozen=True)
class NormalFormSystem:
    beta1: BivariateSeries
    beta2: BivariateSeries
    l2: BivariateSeries
    theta0: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.theta0 < math.pi:
            raise ValueError(f"theta0 must lie in (0, pi), got {self.theta0}")

    @classmethod
    def from_strings(cls, beta1: str, beta2: str, l2: str, theta0: float = 0.05,
                     order: int = 4) -> "NormalFormSystem":
        return cls(parse_series(beta1, order), parse_series(beta2, order),
                   parse_series(l2, order), theta0)

    @property
    def order(self) -> int:
        return min(self.beta1.order, self.beta2.order, self.l2.order)

    @property
    def L0(self) -> Fraction:
        return self.l2.const

    # linear and quadratic coefficients in the naming used throughout:
    # beta1 -> c, beta2 -> d, L2 -> l
    def c(self, i: int, j: int) -> Fraction:
        return self.beta1[(i, j)]

    def d(self, i: int, j: int) -> Fraction:
        return self.beta2[(i, j)]

    def l(self, i: int, j: int) -> Fraction:  # noqa: E743
        return self.l2[(i, j)]

    def values(self, alpha) -> "MapValues":
        a1, a2 = alpha
        return MapValues(self.beta1(a1, a2), self.beta2(a1, a2), self.l2(a1, a2))

    def replace(self, **changes) -> "NormalFormSystem":
        data = dict(beta1=self.beta1, beta2=self.beta2, l2=self.l2, theta0=self.theta0)
        data.update(changes)
        return NormalFormSystem(**data)


@dataclass(frozen=True)
class MapValues:
    """beta1, beta2, L2 evaluated at one parameter point."""

    beta1: float
    beta2: float
    l2: float

    @property
    def delta(self) -> float:
        return self.beta2 * self.beta2 - 4.0 * self.beta1 * self.l2

    def growth(self, y: float) -> float:
        """f(y) = beta1 + beta2*y + L2*y^2, so rho' = rho*(1 + f(rho^2))."""
        return self.beta1 + y * (self.beta2 + y * self.l2)


def from_complex_data(r: float, b1: complex, b2: complex) -> tuple[float, float, float]:
    """(beta1, beta2, L2) from the modulus r and the complex coefficients b1, b2."""
    if not r > 0:
        raise InvalidModulusError(f"modulus r must be positive, got {r}")
    beta1 = r - 1.0
    beta2 = complex(b1).real
    l2 = (complex(b1).imag ** 2 + 2.0 * (1.0 + beta1) * complex(b2).real) / (2.0 * (beta1 + 1.0))
    return beta1, beta2, l2


# -- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    chenciner_ok: bool
    degenerate: bool
    new_regular: bool
    L0: Fraction
    c1: Fraction
    c2: Fraction
    d1: Fraction
    d2: Fraction
    l1: Fraction
    l2: Fraction
    c_nonzero: bool
    d_nonzero: bool
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def classical_det(self) -> Fraction:
        return self.c1 * self.d2 - self.c2 * self.d1

    @property
    def new_det(self) -> Fraction:
        return self.c1 * self.l2 - self.c2 * self.l1

    def as_dict(self) -> dict:
        from .series import format_fraction
        out = {
            "chenciner_ok": self.chenciner_ok,
            "degenerate": self.degenerate,
            "new_regular": self.new_regular,
            "c_nonzero": self.c_nonzero,
            "d_nonzero": self.d_nonzero,
        }
        for name in ("L0", "c1", "c2", "d1", "d2", "l1", "l2"):
            out[name] = format_fraction(getattr(self, name))
        out["c1d2-c2d1"] = format_fraction(self.classical_det)
        out["c1l2-c2l1"] = format_fraction(self.new_det)
        out["notes"] = list(self.notes)
        return out


def validate(sys: NormalFormSystem) -> ValidationReport:
    c1, c2 = sys.c(1, 0), sys.c(0, 1)
    d1, d2 = sys.d(1, 0), sys.d(0, 1)
    l1, l2 = sys.l(1, 0), sys.l(0, 1)
    L0 = sys.L0
    notes = []
    chenciner_ok = sys.beta1.const == 0 and sys.beta2.const == 0 and L0 != 0
    if sys.beta1.const != 0:
        notes.append("beta1(0) != 0: modulus is not 1 at the origin")
    if sys.beta2.const != 0:
        notes.append("beta2(0) != 0: Re b1(0) does not vanish")
    if L0 == 0:
        notes.append("L0 = 0: Chenciner non-degeneracy fails")
    degenerate = c1 * d2 - c2 * d1 == 0
    new_regular = c1 * l2 - c2 * l1 != 0
    if not degenerate:
        notes.append("c1*d2 - c2*d1 != 0: classical parameter change is regular")
    if not new_regular:
        notes.append("c1*l2 - c2*l1 = 0: new transformation is singular at the origin")
    c_nonzero = c1 != 0 and c2 != 0
    d_nonzero = d1 != 0 and d2 != 0
    if not c_nonzero:
        notes.append("some c_i = 0")
    if not d_nonzero:
        notes.append("some d_i = 0")
    return ValidationReport(chenciner_ok, degenerate, new_regular, L0,
                            c1, c2, d1, d2, l1, l2, c_nonzero, d_nonzero, tuple(notes))


# -- map -----------------------------------------------------------------------

def map_step(sys: NormalFormSystem, alpha, rho: float, phi: float) -> tuple[float, float]:
    """One iterate of the truncated map.  A negative rho' is returned as is."""
    return step_values(sys.values(alpha), sys.theta0, rho, phi)


def step_values(v: MapValues, theta0: float, rho: float, phi: float) -> tuple[float, float]:
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    y = rho * rho
    return rho * (1.0 + v.growth(y)), math.fmod(phi + theta0, 2.0 * math.pi)


# -- invariant circles -----------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    y: float
    stability: str

    @property
    def radius(self) -> float:
        return math.sqrt(self.y)


@dataclass(frozen=True)
class CircleCensus:
    delta: float
    circles: tuple[Circle, ...]
    double_root: bool = False
    note: str = ""

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(c.radius for c in self.circles)

    def nearest(self, radius: float) -> Optional[Circle]:
        if not self.circles:
            return None
        return min(self.circles, key=lambda c: abs(c.radius - radius))


def _rho_map_derivative(v: MapValues, y: float) -> float:
    # d/drho of rho*(1 + f(rho^2)) at a root of f, with beta1 eliminated
    return 1.0 + 2.0 * v.beta2 * y + 4.0 * v.l2 * y * y


def _quadratic_roots(a: float, b: float, c: float) -> tuple[float, float]:
    disc = b * b - 4.0 * a * c
    sq = math.sqrt(max(disc, 0.0))
    q = -0.5 * (b + math.copysign(sq, b if b != 0 else 1.0))
    if q == 0.0:
        return 0.0, 0.0
    return q / a, c / q


def invariant_circles(sys: NormalFormSystem, alpha, tol: float = SIGN_TOL,
                      delta_tol: Optional[float] = None,
                      root_tol: float = ROOT_TOL) -> CircleCensus:
    """Positive roots of L2*y^2 + beta2*y + beta1 with their stability.

    ``|beta1| <= tol`` is snapped to zero (the origin root is then dropped)
    and ``|Delta| <= delta_tol`` (default ``tol``) is snapped to a double
    root ``y = -beta2/(2 L2)``, whose circle is semi-stable; the attracting
    side follows the sign of L2.
    """
    return census_from_values(sys.values(alpha), sys.L0, tol, delta_tol, root_tol)


def census_from_values(v: MapValues, L0=None, tol: float = SIGN_TOL,
                       delta_tol: Optional[float] = None,
                       root_tol: float = ROOT_TOL) -> CircleCensus:
    if delta_tol is None:
        delta_tol = tol
    if abs(v.l2) <= tol:
        raise DegenerateQuadraticError(f"L2(alpha) = {v.l2:g} is within tolerance of zero")
    delta = v.delta
    note = ""
    if abs(delta) <= delta_tol:
        y = -v.beta2 / (2.0 * v.l2)
        circles = ()
        if y > root_tol:
            side = SEMI_INNER_STABLE if v.l2 > 0 else SEMI_INNER_UNSTABLE
            circles = (Circle(y, side),)
            note = "the Delta = 0 circle is labelled 'unstable' by the coarse case table; two-sided label reported"
        return CircleCensus(delta, circles, True, note)
    if delta < 0:
        return CircleCensus(delta, ())
    b1 = 0.0 if abs(v.beta1) <= tol else v.beta1
    roots = sorted(y for y in _quadratic_roots(v.l2, v.beta2, b1) if y > root_tol)
    circles = []
    for y in roots:
        slope = _rho_map_derivative(v, y)
        circles.append(Circle(y, STABLE if abs(slope) < 1.0 else UNSTABLE))
    return CircleCensus(delta, tuple(circles))


def expected_circles(l0: int, delta: int, beta1: int, beta2: int) -> Optional[tuple[str, ...]]:
    """Circle stabilities (ascending radius) predicted from the sign pattern.

    Returns None for sign patterns the case analysis does not settle.
    """
    if l0 == 0:
        return None
    if beta1 == 0:
        if delta < 0:
            return ()
        if l0 * beta2 < 0:
            return (STABLE,) if l0 < 0 else (UNSTABLE,)
        if beta2 == 0:
            return ()
        return ()
    if delta < 0:
        return ()
    if delta == 0:
        if l0 * beta2 < 0:
            return (SEMI_INNER_STABLE,) if l0 > 0 else (SEMI_INNER_UNSTABLE,)
        return ()
    if l0 > 0 and beta1 < 0:
        return (UNSTABLE,)
    if l0 < 0 and beta1 > 0:
        return (STABLE,)
    if l0 > 0 and beta1 > 0:
        return (STABLE, UNSTABLE) if beta2 < 0 else ()
    # l0 < 0, beta1 < 0
    return (UNSTABLE, STABLE) if beta2 > 0 else ()


# -- origin ------------------------------------------------------------------------

@dataclass(frozen=True)
class OriginStability:
    label: str
    tier: str


def origin_stability(sys: NormalFormSystem, alpha, tol: float = SIGN_TOL) -> OriginStability:
    v = sys.values(alpha)
    s1 = sign(v.beta1, tol)
    if s1:
        return OriginStability(STABLE if s1 < 0 else UNSTABLE, "linear")
    s2 = sign(v.beta2, tol)
    if s2:
        return OriginStability(STABLE if s2 < 0 else UNSTABLE, "nonlinear-beta2")
    return OriginStability(STABLE if sys.L0 < 0 else UNSTABLE, "nonlinear-L0")


def example_system(theta0: float = 0.05, order: int = 4) -> NormalFormSystem:
    """The degenerate example map used throughout the docs and tests."""
    return NormalFormSystem.from_strings(
        "a1 + a2 + 2*a1^2 + a2^2",
        "a1 + a2 + 2*a1*a2",
        "1 + a1 + 2*a2 + a1^2 + a2^3",
        theta0=theta0, order=order,
    )
