"""
Sign-pattern regions of the (mu1, mu2) plane and bifurcation diagram choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .normal_form import SIGN_TOL, GenericityError, NormalFormSystem, sign
from .transform import BoundaryCurves, ParameterTransform, boundary_curves

PM0 = None  # row entry meaning "any sign, zero included"

# (L0, Delta, beta1, beta2) -> region; left half of the table then right half.
TABLE_ROWS: tuple[tuple[tuple[int, int, int, Optional[int]], int], ...] = (
    ((-1, -1, -1, PM0), 4),
    ((-1, +1, -1, -1), 4),
    ((-1, 0, -1, -1), 4),
    ((-1, +1, 0, -1), 4),
    ((-1, 0, 0, 0), 4),
    ((-1, +1, +1, PM0), 3),
    ((-1, +1, 0, +1), 3),
    ((-1, +1, -1, +1), 7),
    ((-1, 0, -1, +1), 5),
    ((+1, +1, -1, PM0), 1),
    ((+1, +1, 0, -1), 1),
    ((+1, -1, +1, PM0), 2),
    ((+1, +1, +1, +1), 2),
    ((+1, 0, +1, +1), 2),
    ((+1, +1, 0, +1), 2),
    ((+1, 0, 0, 0), 2),
    ((+1, 0, +1, -1), 6),
    ((+1, +1, +1, -1), 8),
)

_LOOKUP: dict[tuple[int, int, int, int], int] = {}
for _pattern, _region in TABLE_ROWS:
    _b2s = (-1, 0, 1) if _pattern[3] is PM0 else (_pattern[3],)
    for _b2 in _b2s:
        _LOOKUP[(_pattern[0], _pattern[1], _pattern[2], _b2)] = _region


@dataclass(frozen=True)
class RegionLabel:
    region: Optional[int]
    signs: tuple[int, int, int, int]

    @property
    def classified(self) -> bool:
        return self.region is not None

    def __str__(self):
        return str(self.region) if self.region is not None else "unclassified"


def region_classify(l0: float, delta: float, beta1: float, beta2: float,
                    tol: float = SIGN_TOL, delta_tol: Optional[float] = None) -> RegionLabel:
    """Region number for a sign pattern; ``region=None`` if the table has no row.

    Values within ``tol`` of zero count as zero.  ``delta_tol`` overrides the
    band for Delta alone, whose natural scale is the square of the others.
    """
    if abs(l0) <= tol:
        raise GenericityError("L0 != 0", "region table requires a nonzero L0")
    dt = tol if delta_tol is None else delta_tol
    signs = (sign(l0), sign(delta, dt), sign(beta1, tol), sign(beta2, tol))
    return RegionLabel(_LOOKUP.get(signs), signs)


DIAGRAMS = {(-1, -1): "D1", (-1, 1): "D2", (1, -1): "D3", (1, 1): "D4"}


@dataclass(frozen=True)
class DiagramLabel:
    diagram: str
    c1d1_sign: int


def diagram_select(l0, m2, c1d1_sign) -> DiagramLabel:
    if l0 == 0:
        raise GenericityError("L0 != 0", "diagram selection needs L0 != 0")
    if m2 is None or m2 == 0:
        raise GenericityError("m2 != 0", "diagram selection needs m2 != 0")
    if c1d1_sign == 0:
        raise GenericityError("c1*d1 != 0", "diagram selection needs c1*d1 != 0")
    key = (1 if l0 > 0 else -1, 1 if m2 > 0 else -1)
    return DiagramLabel(DIAGRAMS[key], 1 if c1d1_sign > 0 else -1)


def diagram_for(t: ParameterTransform) -> DiagramLabel:
    c = t.constants
    prod = c["c1"] * c["d1"]
    return diagram_select(t.L0, t.m2, (prod > 0) - (prod < 0))


@dataclass(frozen=True)
class AlphaClassification:
    alpha: tuple[float, float]
    mu: tuple[float, float]
    beta1: float
    beta2: float
    l2: float
    delta: float
    hat_beta1: float
    hat_beta2: float
    label: RegionLabel
    hat_label: Optional[RegionLabel]


def classify_alpha_point(sys: NormalFormSystem, t: ParameterTransform, alpha,
                         tol: float = SIGN_TOL, delta_tol: Optional[float] = None) -> AlphaClassification:
    """Region of a parameter point, decided by signs evaluated at alpha.

    The hat-series route is evaluated alongside for comparison only.
    """
    a = (float(alpha[0]), float(alpha[1]))
    v = sys.values(a)
    mu = t.mu(a)
    hb1, hb2, _ = t.hat.values(*mu)
    label = region_classify(float(sys.L0), v.delta, v.beta1, v.beta2, tol, delta_tol)
    hat_label = region_classify(float(sys.L0), mu[0], hb1, hb2, tol, delta_tol)
    return AlphaClassification(a, mu, v.beta1, v.beta2, v.l2, v.delta, hb1, hb2, label, hat_label)


@dataclass(frozen=True)
class RegionRaster:
    mu1: np.ndarray  # (nx,)
    mu2: np.ndarray  # (ny,)
    regions: np.ndarray  # (ny, nx) int, 0 = unclassified
    curves: Optional[BoundaryCurves]

    def labels_present(self) -> set[int]:
        return {int(r) for r in np.unique(self.regions) if r}

    def rows(self):
        """(mu1, mu2, region) triples, mu2-major."""
        for iy, m2 in enumerate(self.mu2):
            for ix, m1 in enumerate(self.mu1):
                yield float(m1), float(m2), int(self.regions[iy, ix])


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("resolution must be positive")
    if n == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, n)


def diagram_raster(t: ParameterTransform, window=((-0.01, 0.01), (-0.1, 0.1)),
                   resolution=(41, 41), tol: float = SIGN_TOL,
                   curve_samples: int = 201) -> RegionRaster:
    """Classify a grid of mu points with the truncated hat series.

    ``window`` is ``((mu1_lo, mu1_hi), (mu2_lo, mu2_hi))``.  Delta_hat is mu1
    itself, so an odd mu1 resolution over a symmetric window puts a column
    exactly on Delta = 0.
    """
    (x0, x1), (y0, y1) = window
    nx, ny = resolution
    mu1 = _axis(x0, x1, nx)
    mu2 = _axis(y0, y1, ny)
    L0 = float(t.L0)
    regions = np.zeros((ny, nx), dtype=int)
    for iy, m2 in enumerate(mu2):
        for ix, m1 in enumerate(mu1):
            b1, b2, _ = t.hat.values(float(m1), float(m2))
            lab = region_classify(L0, float(m1), b1, b2, tol)
            regions[iy, ix] = lab.region or 0
    curves = None
    if t.m2 and t.k1 is not None:
        curves = boundary_curves(t, (y0, y1), curve_samples)
    return RegionRaster(mu1, mu2, regions, curves)
