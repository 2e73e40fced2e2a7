"""
The discriminant-based parameter change and its series inverse.

Forward map::

    mu1 = beta2^2 - 4*beta1*L2        (the discriminant Delta)
    mu2 = beta2 + L2 - L0

Its linearisation at the origin is invertible exactly when
``c1*l2 - c2*l1 != 0`` (given the degeneracy ``c1*d2 = c2*d1``), which is
what makes it usable where the classical change ``alpha -> (beta1, beta2)``
is singular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .normal_form import GenericityError, NormalFormSystem, validate
from .series import BivariateSeries, format_fraction, series_compose, series_to_records

SeriesPair = tuple[BivariateSeries, BivariateSeries]


def build_forward(sys: NormalFormSystem) -> SeriesPair:
    b1, b2, L = sys.beta1, sys.beta2, sys.l2
    mu1 = b2 * b2 - 4 * b1 * L
    mu2 = b2 + L - sys.L0
    return mu1, mu2


def linear_matrix(pair: SeriesPair) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    f1, f2 = pair
    return ((f1[(1, 0)], f1[(0, 1)]), (f2[(1, 0)], f2[(0, 1)]))


def _solve2(A, rhs):
    """Exact solution of the 2x2 system ``A x = rhs``."""
    (a, b), (c, d) = A
    det = a * d - b * c
    r1, r2 = rhs
    return (d * r1 - b * r2) / det, (a * r2 - c * r1) / det


def invert_series(forward: SeriesPair, k: int = 2) -> SeriesPair:
    """Series inverse of ``forward`` through total degree ``k``.

    Undetermined coefficients, one degree at a time: with the inverse known
    through degree d-1, the degree-d coefficients (s_ij, p_ij), i+j = d,
    enter the degree-d part of ``forward(inverse)`` only through the
    Jacobian ``A0``, so they solve ``A0 @ (s_ij, p_ij) = -[forward(inv_{<d})]_ij``.
    """
    f1, f2 = forward
    if f1.const or f2.const:
        raise ValueError("forward map must fix the origin")
    if k < 1 or k > min(f1.order, f2.order):
        raise ValueError(f"inversion order must be in [1, {min(f1.order, f2.order)}], got {k}")
    A0 = linear_matrix(forward)
    det = A0[0][0] * A0[1][1] - A0[0][1] * A0[1][0]
    if det == 0:
        raise GenericityError("(newt)", "det A0 = 0; the parameter change is not invertible "
                                        "(c1*l2 - c2*l1 = 0)")
    # degree 1: (alpha1, alpha2) = A0^{-1} (mu1, mu2)
    col_mu1 = _solve2(A0, (Fraction(1), Fraction(0)))
    col_mu2 = _solve2(A0, (Fraction(0), Fraction(1)))
    a1 = {(1, 0): col_mu1[0], (0, 1): col_mu2[0]}
    a2 = {(1, 0): col_mu1[1], (0, 1): col_mu2[1]}
    for deg in range(2, k + 1):
        inv1 = BivariateSeries(a1, deg)
        inv2 = BivariateSeries(a2, deg)
        g1 = series_compose(f1.truncate(deg), inv1, inv2)
        g2 = series_compose(f2.truncate(deg), inv1, inv2)
        for i in range(deg, -1, -1):
            key = (i, deg - i)
            s, p = _solve2(A0, (-g1[key], -g2[key]))
            a1[key] = s
            a2[key] = p
    order = min(f1.order, f2.order)
    return BivariateSeries(a1, order), BivariateSeries(a2, order)


def compose_pair(forward: SeriesPair, inner: SeriesPair, order: Optional[int] = None) -> SeriesPair:
    f1, f2 = forward
    i1, i2 = inner
    if order is not None:
        f1, f2, i1, i2 = (s.truncate(order) for s in (f1, f2, i1, i2))
    return series_compose(f1, i1, i2), series_compose(f2, i1, i2)


def inversion_residual(forward: SeriesPair, inverse: SeriesPair, k: int) -> SeriesPair:
    """``forward(inverse(mu)) - mu`` truncated at degree ``k``; exactly zero when correct."""
    g1, g2 = compose_pair(forward, inverse, k)
    mu1 = BivariateSeries.variable(1, k)
    mu2 = BivariateSeries.variable(2, k)
    return g1 - mu1, g2 - mu2


@dataclass(frozen=True)
class HatFunctions:
    beta1: BivariateSeries
    beta2: BivariateSeries
    l2: BivariateSeries
    m2: Fraction

    def values(self, mu1: float, mu2: float) -> tuple[float, float, float]:
        return self.beta1(mu1, mu2), self.beta2(mu1, mu2), self.l2(mu1, mu2)


def hat_functions(sys: NormalFormSystem, inverse: SeriesPair) -> HatFunctions:
    """beta1, beta2, L2 expressed in the new parameters.

    L2_hat is a direct substitution; beta2_hat = mu2 - L2_hat + L0 and
    beta1_hat = (beta2_hat^2 - mu1) / (4 L2_hat) follow from the forward map.
    Coefficients of degree above the inversion order are only as complete
    as the inverse they come from.
    """
    inv1, inv2 = inverse
    order = min(sys.order, inv1.order, inv2.order)
    L0 = sys.L0
    l2_hat = series_compose(sys.l2.truncate(order), inv1, inv2)
    mu1 = BivariateSeries.variable(1, order)
    mu2 = BivariateSeries.variable(2, order)
    beta2_hat = mu2 - l2_hat + L0
    beta1_hat = (beta2_hat * beta2_hat - mu1) * (4 * l2_hat).reciprocal()
    return HatFunctions(beta1_hat, beta2_hat, l2_hat, -l2_hat[(0, 2)])


def m2_closed_form(sys: NormalFormSystem) -> Fraction:
    """m2 from the linear and quadratic coefficients of beta1, beta2, L2."""
    c1, c2 = sys.c(1, 0), sys.c(0, 1)
    d1, d2 = sys.d(1, 0), sys.d(0, 1)
    l1, l2 = sys.l(1, 0), sys.l(0, 1)
    c20, c11, c02 = sys.c(2, 0), sys.c(1, 1), sys.c(0, 2)
    d20, d11, d02 = sys.d(2, 0), sys.d(1, 1), sys.d(0, 2)
    if c1 == 0:
        raise GenericityError("c1 != 0", "closed form for m2 divides by c1")
    if d1 * l2 - d2 * l1 == 0:
        raise GenericityError("d1*l2 - d2*l1 != 0", "closed form for m2 divides by d1*l2 - d2*l1")
    num = (c02 * d1 ** 3 - c11 * d1 ** 2 * d2 - c1 * d02 * d1 ** 2
           + c20 * d1 * d2 ** 2 + c1 * d11 * d1 * d2 - c1 * d20 * d2 ** 2)
    return -num / (c1 * (d1 * l2 - d2 * l1) ** 2)


def linear_inverse_closed_form(sys: NormalFormSystem) -> dict[str, Fraction]:
    """s10, s01, p10, p01 written out for a degenerate system."""
    c1, c2 = sys.c(1, 0), sys.c(0, 1)
    d1, d2 = sys.d(1, 0), sys.d(0, 1)
    l1, l2 = sys.l(1, 0), sys.l(0, 1)
    L0 = sys.L0
    n0 = c1 * d2 - c2 * d1 + c1 * l2 - c2 * l1
    return {
        "s10": -(d2 + l2) / (4 * L0 * n0),
        "s01": -c2 / n0,
        "p10": (d1 + l1) / (4 * L0 * n0),
        "p01": c1 / n0,
    }


def quadratic_mu2_closed_form(sys: NormalFormSystem) -> dict[str, Fraction]:
    """s02 and p02 written out for a degenerate system."""
    c1 = sys.c(1, 0)
    d1, d2 = sys.d(1, 0), sys.d(0, 1)
    l1, l2 = sys.l(1, 0), sys.l(0, 1)
    c20, c11, c02 = sys.c(2, 0), sys.c(1, 1), sys.c(0, 2)
    d20, d11, d02 = sys.d(2, 0), sys.d(1, 1), sys.d(0, 2)
    l20, l11, l02 = sys.l(2, 0), sys.l(1, 1), sys.l(0, 2)
    den = c1 * (d1 * l2 - d2 * l1) ** 3
    p02 = d1 * (d1 ** 3 * c02
                - d1 ** 2 * (c1 * d02 + c1 * l02 - l1 * c02)
                - d2 ** 2 * (c1 * d20 + c1 * l20 - l1 * c20)
                + d1 * d2 * (c1 * d11 - d1 * c11 + d2 * c20 + c1 * l11 - l1 * c11)) / den
    s02 = (-(d2 * c02 + l2 * c02) * d1 ** 3
           + (c1 * d02 + d2 * c11 + c1 * l02 + l2 * c11) * d1 ** 2 * d2
           - (c1 * d11 + d2 * c20 + c1 * l11 + l2 * c20) * d1 * d2 ** 2
           + c1 * d2 ** 3 * (d20 + l20)) / den
    return {"s02": s02, "p02": p02}


@dataclass(frozen=True)
class ParameterTransform:
    system: NormalFormSystem
    forward: SeriesPair
    inverse: SeriesPair
    k: int
    jacobian_det0: Fraction
    hat: HatFunctions
    constants: dict
    degenerate: bool

    @property
    def m2(self) -> Fraction:
        return self.constants["m2"]

    @property
    def k1(self) -> Optional[Fraction]:
        return self.constants["k1"]

    @property
    def L0(self) -> Fraction:
        return self.constants["L0"]

    def mu(self, alpha) -> tuple[float, float]:
        """(Delta(alpha), beta2 + L2 - L0) from the untruncated system series.

        The stored forward series is truncated at the working order, which
        visibly shifts mu1 once |alpha| is not small.
        """
        v = self.system.values(alpha)
        return v.delta, v.beta2 + v.l2 - float(self.L0)

    def alpha(self, mu) -> tuple[float, float]:
        m1, m2 = mu
        return self.inverse[0](m1, m2), self.inverse[1](m1, m2)

    def report(self) -> dict:
        """JSON-ready description with exact fractions as ``num/den`` strings."""
        def ser(s):
            return {"order": s.order, "terms": [
                {"i": r["i"], "j": r["j"], "coeff": format_fraction(Fraction(r["num"], r["den"]))}
                for r in series_to_records(s)]}

        res = inversion_residual(self.forward, self.inverse, self.k)
        dhat = (self.hat.beta2 * self.hat.beta2 - 4 * self.hat.beta1 * self.hat.l2
                - BivariateSeries.variable(1, self.hat.l2.order))
        return {
            "k": self.k,
            "degenerate": self.degenerate,
            "jacobian_det0": format_fraction(self.jacobian_det0),
            "constants": {name: (None if v is None else format_fraction(v))
                          for name, v in self.constants.items()},
            "forward": {"mu1": ser(self.forward[0]), "mu2": ser(self.forward[1])},
            "inverse": {"alpha1": ser(self.inverse[0]), "alpha2": ser(self.inverse[1])},
            "hat": {"beta1": ser(self.hat.beta1), "beta2": ser(self.hat.beta2),
                    "l2": ser(self.hat.l2)},
            "checks": {
                "roundtrip_residual_zero": res[0].is_zero() and res[1].is_zero(),
                "delta_hat_equals_mu1": dhat.is_zero(),
            },
        }


def build_transform(sys: NormalFormSystem, k: int = 2) -> ParameterTransform:
    """Forward map, inverse to order ``k``, hat functions and derived constants.

    Raises GenericityError when L0 = 0 or the linearisation is singular.
    A non-degenerate system is still transformed but flagged.
    """
    rep = validate(sys)
    if rep.L0 == 0:
        raise GenericityError("L0 != 0", "L2(0) vanishes")
    forward = build_forward(sys)
    (a, b), (c, d) = linear_matrix(forward)
    det0 = a * d - b * c
    inverse = invert_series(forward, k)
    hat = hat_functions(sys, inverse)
    m2 = hat.m2 if k >= 2 else None
    k1 = None
    if m2 is not None and rep.d1 != 0:
        k1 = 4 * rep.L0 * rep.c1 / rep.d1 * m2
    constants = {"L0": rep.L0, "c1": rep.c1, "c2": rep.c2, "d1": rep.d1, "d2": rep.d2,
                 "l1": rep.l1, "l2": rep.l2, "m2": m2, "k1": k1}
    return ParameterTransform(sys, forward, inverse, k, det0, hat, constants, rep.degenerate)


@dataclass(frozen=True)
class BoundaryCurves:
    b1: tuple[tuple[float, float], ...]  # (mu2, mu1)
    b2: tuple[tuple[float, float], ...]
    m2: Fraction
    k1: Fraction
    facts: dict


def boundary_curves(t: ParameterTransform, mu2_range=(-0.1, 0.1), samples: int = 201) -> BoundaryCurves:
    """Leading-order curves B1: mu1 = m2^2 mu2^4 and B2: mu1 = k1 mu2^2."""
    m2, k1 = t.m2, t.k1
    if m2 is None:
        raise GenericityError("m2 != 0", "m2 needs an inverse of order >= 2")
    if m2 == 0:
        raise GenericityError("m2 != 0", "m2 = 0, boundary curves degenerate")
    if k1 is None:
        raise GenericityError("d1 != 0", "k1 = 4 L0 c1/d1 m2 is undefined")
    lo, hi = mu2_range
    if samples < 1:
        raise ValueError("samples must be positive")
    grid = [lo] if samples == 1 else [lo + (hi - lo) * n / (samples - 1) for n in range(samples)]
    fm2, fk1 = float(m2), float(k1)
    b1 = tuple((x, fm2 * fm2 * x ** 4) for x in grid)
    b2 = tuple((x, fk1 * x * x) for x in grid)
    c1d1 = t.constants["c1"] * t.constants["d1"]
    facts = {
        "B1_side": "mu1>0",
        "B2_side": "mu1>0" if k1 > 0 else "mu1<0",
        # near the origin mu1 on B2 minus mu1 on B1 ~ k1 mu2^2
        "B2_inside_B1": bool(k1 > 0),
        "c1d1_sign": 1 if c1d1 > 0 else (-1 if c1d1 < 0 else 0),
    }
    return BoundaryCurves(b1, b2, m2, k1, facts)


def newton_inverse(t: ParameterTransform, mu, tol: float = 1e-14, max_iter: int = 50):
    """Solve forward(alpha) = mu numerically by damped Newton from alpha = 0."""
    f1, f2 = t.forward
    # partial derivatives as exact series
    def partial(s, axis):
        out = {}
        for (i, j), c in s.items():
            if axis == 0 and i:
                out[(i - 1, j)] = c * i
            elif axis == 1 and j:
                out[(i, j - 1)] = c * j
        return BivariateSeries(out, s.order)

    J = [[partial(f1, 0), partial(f1, 1)], [partial(f2, 0), partial(f2, 1)]]
    x = [0.0, 0.0]
    target = (float(mu[0]), float(mu[1]))

    def resid(p):
        return (f1(*p) - target[0], f2(*p) - target[1])

    r = resid(x)
    for _ in range(max_iter):
        norm = math.hypot(*r)
        if norm < tol:
            break
        a, b = J[0][0](*x), J[0][1](*x)
        c, d = J[1][0](*x), J[1][1](*x)
        det = a * d - b * c
        dx = ((d * r[0] - b * r[1]) / det, (a * r[1] - c * r[0]) / det)
        step = 1.0
        while step > 1e-6:
            trial = [x[0] - step * dx[0], x[1] - step * dx[1]]
            rt = resid(trial)
            if math.hypot(*rt) < norm:
                break
            step *= 0.5
        x, r = trial, rt
    return tuple(x)
