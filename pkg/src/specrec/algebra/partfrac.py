"""Partial fraction decomposition of rational 1-forms over Q.

Denominators must factor into linear factors over Q (rational roots); this
is the exact-mode contract shared by the whole package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from .poly import Poly, rational_roots
from .ratfun import RationalFunction
from .scalars import is_zero
from .series import LaurentSeries


@dataclass
class PartialFractions:
    """``f = poly + sum over (a, k) of coeff/(z - a)**k``."""

    poly: Poly
    parts: Dict[Tuple[Fraction, int], Any]
    var: str = "z"

    def recompose(self) -> RationalFunction:
        out = RationalFunction(self.poly, None, self.var)
        z = RationalFunction.variable(self.var)
        for (a, k), c in self.parts.items():
            out = out + RationalFunction.const(c, self.var) / (z - a) ** k
        return out

    def residue(self, a: Fraction) -> Any:
        return self.parts.get((a, 1), Fraction(0))

    def pole_orders(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for (a, k) in self.parts:
            out[a] = max(out.get(a, 0), k)
        return out


def partial_fractions(f: RationalFunction) -> PartialFractions:
    """Exact decomposition; raises ValueError on irrational denominator roots."""
    num, den = f.num, f.den
    polypart, rem = num.divmod(den)
    roots = rational_roots(den) if den.degree >= 1 else []
    mult: Dict[Fraction, int] = {}
    for r in roots:
        mult[r] = mult.get(r, 0) + 1
    parts: Dict[Tuple[Fraction, int], Any] = {}
    frac = RationalFunction(rem, den, f.var)
    for a, m in mult.items():
        loc = ratfunc_series(frac, a, 1)
        for k in range(1, m + 1):
            c = loc.coeff(-k)
            if not is_zero(c):
                parts[(a, k)] = c
    return PartialFractions(polypart, parts, f.var)


def ratfunc_series(f: RationalFunction, center: Any, order: int) -> LaurentSeries:
    """Laurent expansion of ``f`` at ``z = center + u`` to ``O(u**order)``."""
    num = f.num.shift(center)
    den = f.den.shift(center)
    # give the denominator enough relative precision to survive the division
    v = 0
    while v <= den.degree and is_zero(den[v]):
        v += 1
    pad = order + 2 * v + 1
    n = LaurentSeries(0, list(num.c), pad)
    d = LaurentSeries(0, list(den.c), pad)
    return (n / d).truncate(order)


def ratfunc_series_at_inf(f: RationalFunction, order: int) -> LaurentSeries:
    """Expansion in the local coordinate ``u = 1/z`` at infinity."""
    n = f.num.degree
    m = f.den.degree
    if f.num.is_zero():
        return LaurentSeries.zero(order)
    # f(1/u) = u^(m-n) * rev(num)(u)/rev(den)(u)
    rnum = Poly(list(reversed(f.num.c)))
    rden = Poly(list(reversed(f.den.c)))
    shift = m - n
    v = 0
    while v <= rden.degree and is_zero(rden[v]):
        v += 1
    nn = LaurentSeries(0, list(rnum.c), order - shift + v + 1)
    dd = LaurentSeries(0, list(rden.c), order - shift + v + 1)
    return ((nn / dd).shift(shift)).truncate(order)


def residue_at(form: RationalFunction, point: Any) -> Any:
    """Residue of the 1-form ``form * dz`` at a finite point or at infinity.

    Pass ``point="inf"`` for the residue at infinity (computed in the local
    chart u = 1/z, so Res_inf dz/z = -1).
    """
    if isinstance(point, str) and point == "inf":
        # pullback: f(z) dz -> -f(1/u)/u^2 du
        g = ratfunc_series_at_inf(form, 2)
        ser = -(g.shift(-2))
        return ser.coeff(-1)
    ser = ratfunc_series(form, point, 1)
    return ser.coeff(-1)
