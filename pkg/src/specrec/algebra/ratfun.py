"""Rational functions in one named variable, normalized num/gcd-den form.

A ``RationalFunction`` over ``Fraction`` is itself a valid scalar for every
series/polynomial container in this package, which is how symbolic rescaling
parameters (``lam``), flow times (``t``) and similar one-parameter families
are handled exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional, Tuple

from .poly import Poly, gcd
from .scalars import is_zero


def _scalarize(v: Any) -> Any:
    """Coerce python ints to Fraction, pass through domain scalars unchanged."""
    return Fraction(v) if isinstance(v, int) else v


class RationalFunction:
    __slots__ = ("num", "den", "var")

    def __init__(self, num: Any, den: Any = None, var: str = "z"):
        num = num if isinstance(num, Poly) else Poly.const(_scalarize(num))
        den = Poly.const(Fraction(1)) if den is None else (
            den if isinstance(den, Poly) else Poly.const(_scalarize(den)))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = gcd(num, den)
        if not g.is_zero() and g.degree >= 1:
            num, den = num // g, den // g
        lead = den.lead()
        if lead != 1:
            num = Poly([a / lead for a in num.c])
            den = den.monic()
        self.num, self.den, self.var = num, den, var

    # -- constructors ------------------------------------------------------
    @staticmethod
    def variable(var: str = "z") -> "RationalFunction":
        return RationalFunction(Poly.x(), None, var)

    @staticmethod
    def const(v: Any, var: str = "z") -> "RationalFunction":
        return RationalFunction(Poly.const(_scalarize(v)), None, var)

    @staticmethod
    def from_roots(roots, var: str = "z") -> "RationalFunction":
        p = Poly.const(Fraction(1))
        for r in roots:
            p = p * Poly([-_scalarize(r), Fraction(1)])
        return RationalFunction(p, None, var)

    # -- ring/field structure ---------------------------------------------
    def _coerce(self, other: Any) -> "RationalFunction":
        if isinstance(other, RationalFunction) and other.var == self.var:
            return other
        return RationalFunction(Poly.const(_scalarize(other)), None, self.var)

    def __add__(self, other: Any) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, self.var)

    def __sub__(self, other: Any) -> "RationalFunction":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other: Any) -> "RationalFunction":
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RationalFunction":
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num, self.var)

    def __rtruediv__(self, other: Any) -> "RationalFunction":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return (RationalFunction.const(1, self.var) / self) ** (-n)
        out = RationalFunction.const(1, self.var)
        b = self
        while n:
            if n & 1:
                out = out * b
            n >>= 1
            if n:
                b = b * b
        return out

    def __eq__(self, other: Any) -> bool:
        if other is None:
            return False
        o = self._coerce(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    # -- calculus ----------------------------------------------------------
    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den, self.var)

    def eval(self, v: Any) -> Any:
        dv = self.den.eval(v)
        if is_zero(dv):
            raise ZeroDivisionError(f"pole of rational function at {v}")
        return self.num.eval(v) / dv

    def compose(self, other: "RationalFunction") -> "RationalFunction":
        """Substitute ``other`` for the variable."""
        return _poly_at(self.num, other) / _poly_at(self.den, other)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def const_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        if self.num.is_zero():
            return Fraction(0)
        return self.num[0] / self.den[0]

    def monomial_split(self) -> Tuple[Optional[Fraction], str, int]:
        """Write self as ``c * var**k`` if possible; else ``(None, var, 0)``.

        Used by :class:`LogScalar` to split log arguments of parametric values.
        """
        if self.num.is_zero():
            return Fraction(0), self.var, 0
        nz = 0
        while nz < len(self.num.c) and is_zero(self.num[nz]):
            nz += 1
        dz = 0
        while dz < len(self.den.c) and is_zero(self.den[dz]):
            dz += 1
        if self.num.degree == nz and self.den.degree == dz:
            return Fraction(self.num[nz]) / Fraction(self.den[dz]), self.var, nz - dz
        return None, self.var, 0

    def __repr__(self) -> str:
        n = _pretty(self.num, self.var)
        if self.den.degree <= 0 and self.den[0] == 1:
            return n
        return f"({n})/({_pretty(self.den, self.var)})"


def _poly_at(p: Poly, v: RationalFunction) -> RationalFunction:
    out = RationalFunction.const(0, v.var)
    for a in reversed(p.c if p.c else [Fraction(0)]):
        out = out * v + a
    return out


def _pretty(p: Poly, var: str) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k, a in enumerate(p.c):
        if is_zero(a):
            continue
        if k == 0:
            terms.append(f"{a}")
        elif k == 1:
            terms.append(f"{a}*{var}" if a != 1 else var)
        else:
            terms.append(f"{a}*{var}^{k}" if a != 1 else f"{var}^{k}")
    return " + ".join(terms)
