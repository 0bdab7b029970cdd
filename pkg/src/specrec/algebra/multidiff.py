"""Pole-sum representation of symmetric multidifferentials.

A stable invariant is a finite sum of product terms

    coeff * prod_i dz_i / (z_i - a_i)**k_i

with every pole location ``a_i`` a (finite, rational) ramification point and
every order ``k_i >= 2`` (residue-freeness).  Terms are stored as a dict
keyed by the ordered tuple of per-variable ``(a_i, k_i)`` pairs, which is a
canonical form: partial-fraction decompositions in each variable are unique,
so two representations of the same differential produce identical dicts.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Any, Dict, Iterable, List, Tuple

from .scalars import is_zero
from .series import LaurentSeries

LegKey = Tuple[Fraction, int]
TermKey = Tuple[LegKey, ...]


class MultiDifferential:
    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Dict[TermKey, Any] | None = None):
        self.arity = arity
        self.terms: Dict[TermKey, Any] = {}
        if terms:
            for key, c in terms.items():
                if not is_zero(c):
                    if len(key) != arity:
                        raise ValueError("term key arity mismatch")
                    self.terms[key] = c

    @staticmethod
    def zero(arity: int) -> "MultiDifferential":
        return MultiDifferential(arity, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "MultiDifferential") -> "MultiDifferential":
        if not isinstance(other, MultiDifferential):
            if is_zero(other):
                return self
            raise TypeError("can only add MultiDifferential")
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return MultiDifferential(self.arity, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiDifferential":
        return MultiDifferential(self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MultiDifferential") -> "MultiDifferential":
        return self + (-other)

    def __mul__(self, scalar: Any) -> "MultiDifferential":
        if is_zero(scalar):
            return MultiDifferential.zero(self.arity)
        return MultiDifferential(self.arity, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: Any) -> "MultiDifferential":
        inv = Fraction(1) / scalar if isinstance(scalar, (int, Fraction)) else 1 / scalar
        return self * inv

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MultiDifferential):
            return self.is_zero() and is_zero(other)
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, tuple(sorted((k, str(c)) for k, c in self.terms.items()))))

    # -- structure ---------------------------------------------------------
    def permuted(self, perm: Iterable[int]) -> "MultiDifferential":
        perm = tuple(perm)
        out: Dict[TermKey, Any] = {}
        for key, c in self.terms.items():
            nk = tuple(key[i] for i in perm)
            out[nk] = out.get(nk, Fraction(0)) + c
        return MultiDifferential(self.arity, out)

    def is_symmetric(self) -> bool:
        for perm in permutations(range(self.arity)):
            if self.permuted(perm) != self:
                return False
        return True

    def pole_points(self) -> List[Fraction]:
        pts = {a for key in self.terms for (a, _) in key}
        return sorted(pts)

    def max_order(self) -> int:
        return max((k for key in self.terms for (_, k) in key), default=0)

    def residues_vanish(self) -> bool:
        """No simple-pole part in any variable at any pole location."""
        groups: Dict[Tuple[int, Fraction, TermKey], Any] = {}
        for key, c in self.terms.items():
            for i, (a, k) in enumerate(key):
                if k == 1:
                    rest = key[:i] + key[i + 1:]
                    g = (i, a, rest)
                    groups[g] = groups.get(g, Fraction(0)) + c
        return all(is_zero(v) for v in groups.values())

    # -- evaluation ---------------------------------------------------------
    def eval_legs(self, values: List[Any]) -> Any:
        """Value of the coefficient function at sample points (dz factors stripped)."""
        if len(values) != self.arity:
            raise ValueError("sample arity mismatch")
        total = Fraction(0)
        for key, c in self.terms.items():
            f = c
            for v, (a, k) in zip(values, key):
                f = f / (v - a) ** k
            total = total + f
        return total

    def leg_series(self, index: int, center: Any, order: int,
                   shift: LaurentSeries | None = None) -> "TensorSeries":
        """Expand leg ``index`` around ``z = center + u`` (or ``center + s(u)``).

        Returns a :class:`TensorSeries`: a Laurent series in ``u`` whose
        coefficients are multidifferentials in the remaining variables.  The
        series includes the jacobian ``d z/d u`` of the substituted leg, so it
        represents the 1-form content of that leg.
        """
        out = TensorSeries(self.arity - 1, order)
        if shift is None:
            jac = LaurentSeries.const(Fraction(1), order)
        else:
            jac = shift.derivative()
        for key, c in self.terms.items():
            a, k = key[index]
            rest = key[:index] + key[index + 1:]
            base = _expand_pole(center, a, k, order, shift)
            out.add(rest, base * jac * c)
        return out

    def integrate_leg(self, index: int, upper: Any, lower: Any) -> "MultiDifferential":
        """Exact chain integral of one leg from ``lower`` to ``upper``.

        Requires every pole order in that leg to be >= 2 (no logs), which is
        automatic for stable invariants.
        """
        out: Dict[TermKey, Any] = {}
        for key, c in self.terms.items():
            a, k = key[index]
            if k < 2:
                raise ValueError("chain integral of a simple pole needs regularization")
            prim = lambda v: Fraction(-1, k - 1) * (v - a) ** (-(k - 1))
            val = (prim(upper) - prim(lower)) * c
            rest = key[:index] + key[index + 1:]
            if not is_zero(val):
                out[rest] = out.get(rest, Fraction(0)) + val
        return MultiDifferential(self.arity - 1, out)

    def scalar(self) -> Any:
        """The value of an arity-0 differential."""
        if self.arity != 0:
            raise ValueError("not a scalar")
        return self.terms.get((), Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 (arity {self.arity})"
        parts = []
        for key in sorted(self.terms, key=lambda k: tuple((str(a), o) for a, o in k)):
            c = self.terms[key]
            legs = " ".join(f"dz{i + 1}/(z{i + 1}-{a})^{k}" for i, (a, k) in enumerate(key))
            parts.append(f"({c}) {legs}")
        return " + ".join(parts)


class TensorSeries:
    """Laurent series in a local variable with multidifferential coefficients.

    Stored as a map ``rest-term-key -> LaurentSeries`` so products against
    scalar series stay cheap.
    """

    __slots__ = ("rest_arity", "order", "data")

    def __init__(self, rest_arity: int, order: int):
        self.rest_arity = rest_arity
        self.order = order
        self.data: Dict[TermKey, LaurentSeries] = {}

    def add(self, rest_key: TermKey, series: LaurentSeries) -> None:
        cur = self.data.get(rest_key)
        self.data[rest_key] = series if cur is None else cur + series

    def mul_series(self, s: LaurentSeries) -> "TensorSeries":
        out = TensorSeries(self.rest_arity, self.order)
        for k, v in self.data.items():
            out.add(k, v * s)
        return out

    def mul_tensor(self, other: "TensorSeries") -> "TensorSeries":
        out = TensorSeries(self.rest_arity + other.rest_arity, self.order)
        for k1, v1 in self.data.items():
            for k2, v2 in other.data.items():
                out.add(k1 + k2, v1 * v2)
        return out

    def iadd(self, other: "TensorSeries") -> None:
        if other.rest_arity != self.rest_arity:
            raise ValueError("tensor arity mismatch")
        for k, v in other.data.items():
            self.add(k, v)


def _expand_pole(center: Any, a: Any, k: int, order: int,
                 shift: LaurentSeries | None) -> LaurentSeries:
    """Series of 1/(z - a)**k at z = center + u (or center + s(u))."""
    if shift is None:
        if center == a:
            return LaurentSeries.u(order, -k)
        base = LaurentSeries(0, [center - a, Fraction(1)], order + k)
        return base.inverse() ** k
    w = shift + (center - a)  # z - a with z = center + s(u)
    return w.inverse() ** k
