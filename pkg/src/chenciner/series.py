"""
Truncated bivariate power series with exact rational coefficients.

A series is a sparse map ``(i, j) -> Fraction`` standing for
``sum c_ij * x1**i * x2**j`` with every retained monomial of total degree
``i + j <= order``.  Binary operations truncate to the smaller order of
the two operands.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Union

DEFAULT_ORDER = 4
MAX_ORDER = 8

Exponent = tuple[int, int]
Scalar = Union[int, Fraction]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"series coefficients must be exact rationals, got {type(value).__name__}")


def _check_order(order: int) -> int:
    if not isinstance(order, int) or order < 0 or order > MAX_ORDER:
        raise ValueError(f"series order must be an integer in [0, {MAX_ORDER}], got {order!r}")
    return order


@dataclass(frozen=True, eq=False)
class BivariateSeries:
    """Immutable truncated series in two variables.

    Coefficients are normalised on construction: converted to ``Fraction``,
    zero entries dropped, and monomials above ``order`` discarded.
    """

    coeffs: Mapping[Exponent, Fraction] = field(default_factory=dict)
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        order = _check_order(self.order)
        clean = {}
        for key, value in dict(self.coeffs).items():
            i, j = key
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent {key!r}")
            if i + j > order:
                continue
            c = _as_fraction(value)
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(clean.items()))))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "BivariateSeries":
        return cls({}, order)

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER) -> "BivariateSeries":
        return cls({(0, 0): value}, order)

    @classmethod
    def variable(cls, index: int, order: int = DEFAULT_ORDER) -> "BivariateSeries":
        """The coordinate series x1 (index=1) or x2 (index=2)."""
        if index not in (1, 2):
            raise ValueError("variable index must be 1 or 2")
        return cls({(1, 0) if index == 1 else (0, 1): 1}, order)

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Scalar = 1,
                 order: int = DEFAULT_ORDER) -> "BivariateSeries":
        return cls({(i, j): coeff}, order)

    # -- access -----------------------------------------------------------

    def __getitem__(self, key: Exponent) -> Fraction:
        return self.coeffs.get(key, Fraction(0))

    def coefficient(self, i: int, j: int) -> Fraction:
        return self[(i, j)]

    @property
    def const(self) -> Fraction:
        return self[(0, 0)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, d: int) -> "BivariateSeries":
        """Homogeneous part of total degree ``d``."""
        return BivariateSeries({k: v for k, v in self.coeffs.items() if sum(k) == d}, self.order)

    def truncate(self, order: int) -> "BivariateSeries":
        return BivariateSeries(self.coeffs, min(order, self.order))

    def with_order(self, order: int) -> "BivariateSeries":
        """Re-truncate explicitly; raising the order keeps the stored terms."""
        return BivariateSeries(self.coeffs, order)

    def items(self):
        return self.coeffs.items()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "BivariateSeries":
        if isinstance(other, BivariateSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return BivariateSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, BivariateSeries):
            return series_mul(self, other.reciprocal())
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = BivariateSeries.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor: Scalar) -> "BivariateSeries":
        factor = _as_fraction(factor)
        return BivariateSeries({k: v * factor for k, v in self.coeffs.items()}, self.order)

    def reciprocal(self) -> "BivariateSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.const
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        # 1/(c0 (1 + u)) = (1/c0) sum (-u)^n, and u has no constant term so
        # u^n vanishes once n exceeds the order.
        u = (self - c0).scale(1 / c0)
        acc = BivariateSeries.constant(1, self.order)
        term = acc
        for _ in range(self.order):
            term = term * (-u)
            acc = acc + term
        return acc.scale(1 / c0)

    # -- comparison / display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivariateSeries.constant(other, self.order)
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.order == other.order and dict(self.coeffs) == dict(other.coeffs)

    def same_terms(self, other: "BivariateSeries") -> bool:
        """Coefficient equality ignoring the truncation order."""
        return dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"BivariateSeries({format_series(self)!r}, order={self.order})"

    def __call__(self, x1: float, x2: float) -> float:
        return series_eval(self, x1, x2)


def series_add(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    order = min(a.order, b.order)
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        out[k] = out.get(k, 0) + v
    return BivariateSeries(out, order)


def series_mul(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    """Cauchy product, dropping every term above ``min(a.order, b.order)``."""
    order = min(a.order, b.order)
    out: dict[Exponent, Fraction] = {}
    for (i1, j1), v1 in a.coeffs.items():
        d1 = i1 + j1
        if d1 > order:
            continue
        for (i2, j2), v2 in b.coeffs.items():
            if d1 + i2 + j2 > order:
                continue
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + v1 * v2
    return BivariateSeries(out, order)


def series_compose(outer: BivariateSeries, sub1: BivariateSeries,
                   sub2: BivariateSeries) -> BivariateSeries:
    """Substitute ``x1 -> sub1``, ``x2 -> sub2`` in ``outer``.

    Both substitutions must vanish at the origin; the result is truncated
    to the smallest order among the three inputs.
    """
    if sub1.const or sub2.const:
        raise ValueError("substituted series must have zero constant term")
    order = min(outer.order, sub1.order, sub2.order)
    s1, s2 = sub1.truncate(order), sub2.truncate(order)
    max_i = max((i for i, _ in outer.coeffs), default=0)
    max_j = max((j for _, j in outer.coeffs), default=0)
    one = BivariateSeries.constant(1, order)
    pow1, pow2 = [one], [one]
    for _ in range(max_i):
        pow1.append(pow1[-1] * s1)
    for _ in range(max_j):
        pow2.append(pow2[-1] * s2)
    acc = BivariateSeries.zero(order)
    for (i, j), c in outer.coeffs.items():
        # s1, s2 have no constant term, so x1^i x2^j lands in degree >= i + j.
        if i + j > order:
            continue
        acc = acc + (pow1[i] * pow2[j]).scale(c)
    return acc


def series_eval(s: BivariateSeries, x1: float, x2: float) -> float:
    """Float value by direct monomial summation in sorted exponent order."""
    total = 0.0
    for (i, j), c in s.coeffs.items():
        total += float(c) * (x1 ** i) * (x2 ** j)
    return total


# -- literal forms -----------------------------------------------------------

_VAR_NAMES = {
    "a1": 1, "a2": 2, "alpha1": 1, "alpha2": 2,
    "mu1": 1, "mu2": 2, "m1": 1, "m2": 2, "x1": 1, "x2": 2,
}
_FACTOR = re.compile(r"^([A-Za-z]+[12])(?:\^(\d+))?$")


def _split_terms(src: str) -> list[str]:
    terms, cur = [], ""
    for n, ch in enumerate(src):
        exp_sign = n > 1 and src[n - 1] in "eE" and src[n - 2].isdigit()
        if ch in "+-" and cur and not exp_sign:
            terms.append(cur)
            cur = ""
        cur += ch
    terms.append(cur)
    return terms


def parse_series(text: str, order: int = DEFAULT_ORDER) -> BivariateSeries:
    """Parse a compact polynomial such as ``"1 + a1 + 2*a2 - 3/4*a1^2"``.

    Coefficients may be integers, fractions ``p/q`` or decimals (read
    exactly).  Variable names: a1/a2, alpha1/alpha2, mu1/mu2, x1/x2.
    Terms above ``order`` are dropped.
    """
    src = text.replace(" ", "").replace("**", "^")
    if not src:
        raise ValueError("empty series literal")
    coeffs: dict[Exponent, Fraction] = {}
    for term in _split_terms(src):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if not body or len(term) - len(body) > 1:
            raise ValueError(f"bad sign in series literal {text!r}")
        coeff = Fraction(sign)
        i = j = 0
        for f in body.split("*"):
            m = _FACTOR.match(f)
            if m and m.group(1) in _VAR_NAMES:
                power = int(m.group(2) or 1)
                if _VAR_NAMES[m.group(1)] == 1:
                    i += power
                else:
                    j += power
                continue
            try:
                coeff *= Fraction(f)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad factor {f!r} in series literal {text!r}") from None
        coeffs[(i, j)] = coeffs.get((i, j), 0) + coeff
    return BivariateSeries(coeffs, order)


def series_from_records(records: Iterable[Mapping], order: int = DEFAULT_ORDER) -> BivariateSeries:
    """Build a series from ``[{"i":.., "j":.., "num":.., "den":..}, ...]``."""
    coeffs: dict[Exponent, Fraction] = {}
    for n, rec in enumerate(records):
        try:
            i, j = int(rec["i"]), int(rec["j"])
            num, den = int(rec["num"]), int(rec.get("den", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"series record #{n} malformed: {rec!r}") from exc
        if den == 0:
            raise ValueError(f"series record #{n} has zero denominator")
        coeffs[(i, j)] = coeffs.get((i, j), 0) + Fraction(num, den)
    return BivariateSeries(coeffs, order)


def series_to_records(s: BivariateSeries) -> list[dict]:
    return [{"i": i, "j": j, "num": c.numerator, "den": c.denominator}
            for (i, j), c in s.coeffs.items()]


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_series(s: BivariateSeries, names: tuple[str, str] = ("a1", "a2")) -> str:
    """Render as a compact literal that :func:`parse_series` reads back."""
    if s.is_zero():
        return "0"
    parts = []
    for (i, j), c in sorted(s.coeffs.items(), key=lambda kv: (sum(kv[0]), -kv[0][0])):
        mono = []
        if i:
            mono.append(names[0] if i == 1 else f"{names[0]}^{i}")
        if j:
            mono.append(names[1] if j == 1 else f"{names[1]}^{j}")
        mag = abs(c)
        if mono and mag == 1:
            text = "*".join(mono)
        else:
            text = "*".join([format_fraction(mag)] + mono)
        sign = "-" if c < 0 else "+"
        parts.append((sign, text))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out
