"""Truncated Laurent series and graded eps-series with explicit truncation.

Every series carries its truncation order explicitly: ``LaurentSeries``
represents ``sum(c[k] u**k, lo <= k < order) + O(u**order)`` and raises when
an operation needs coefficients beyond what the operands can provide, rather
than silently producing wrong tails.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from .poly import Poly
from .ratfun import RationalFunction
from .scalars import is_zero


class TruncationError(ArithmeticError):
    """An operation required series coefficients beyond the truncation."""


class LaurentSeries:
    """Laurent series in a local variable ``u`` truncated at ``O(u**order)``."""

    __slots__ = ("lo", "c", "order")

    def __init__(self, lo: int, coeffs: List[Any], order: int):
        # normalize: drop leading stored zeros, clamp to the window [lo, order)
        c = list(coeffs)
        if lo + len(c) > order:
            c = c[: order - lo]
        while c and is_zero(c[0]):
            c.pop(0)
            lo += 1
        while c and is_zero(c[-1]):
            c.pop()
        if not c:
            lo = order
        self.lo, self.c, self.order = lo, c, order

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero(order: int) -> "LaurentSeries":
        return LaurentSeries(order, [], order)

    @staticmethod
    def const(v: Any, order: int) -> "LaurentSeries":
        return LaurentSeries(0, [v], order)

    @staticmethod
    def u(order: int, exponent: int = 1, coeff: Any = Fraction(1)) -> "LaurentSeries":
        return LaurentSeries(exponent, [coeff], order)

    @staticmethod
    def from_coeff_fn(lo: int, order: int, fn: Callable[[int], Any]) -> "LaurentSeries":
        return LaurentSeries(lo, [fn(k) for k in range(lo, order)], order)

    # -- access -------------------------------------------------------------
    def coeff(self, k: int) -> Any:
        if k >= self.order:
            raise TruncationError(f"coefficient u^{k} beyond truncation O(u^{self.order})")
        if k < self.lo or k >= self.lo + len(self.c):
            return Fraction(0)
        return self.c[k - self.lo]

    def valuation(self) -> int:
        """Exponent of the lowest nonzero coefficient (order if zero to truncation)."""
        return self.lo if self.c else self.order

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other, self.order)
        n = min(self.order, other.order)
        lo = min(self.lo, other.lo)
        return all(self.coeff(k) == other.coeff(k) for k in range(lo, n))

    def __hash__(self):
        return hash((self.lo, self.order, tuple(str(x) for x in self.c)))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other, self.order)
        order = min(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        lo = min(self.lo, other.lo)
        hi = min(order, max(self.lo + len(self.c), other.lo + len(other.c)))
        coeffs = [self.coeff(k) + other.coeff(k) for k in range(lo, hi)]
        return LaurentSeries(lo, coeffs, order)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lo, [-a for a in self.c], self.order)

    def __sub__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other, self.order)
        return self + (-other)

    def __rsub__(self, other: Any) -> "LaurentSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.lo, [a * other for a in self.c], self.order)
        if self.is_zero() or other.is_zero():
            # truncation of a product with a zero-to-truncation factor
            return LaurentSeries.zero(min(self.order + other.lo_bound(), other.order + self.lo_bound()))
        order = min(self.order + other.lo, other.order + self.lo)
        lo = self.lo + other.lo
        n = order - lo
        out = [Fraction(0)] * n
        for i, a in enumerate(self.c):
            if is_zero(a):
                continue
            jmax = min(len(other.c), n - i)
            for j in range(jmax):
                b = other.c[j]
                if not is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(lo, out, order)

    __rmul__ = __mul__

    def lo_bound(self) -> int:
        return self.lo if self.c else self.order

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse; requires a nonzero series."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero-to-truncation series")
        v = self.lo
        n = self.order - v  # relative precision
        a = self.c
        a0 = a[0]
        inv0 = 1 / a0 if not isinstance(a0, Fraction) else Fraction(1) / a0
        out = [inv0] + [Fraction(0)] * (n - 1)
        for m in range(1, n):
            s = Fraction(0)
            for k in range(1, min(m, len(a) - 1) + 1):
                s = s + a[k] * out[m - k]
            out[m] = -s * inv0
        return LaurentSeries(-v, out, n - v)

    def __truediv__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            inv = 1 / other if not isinstance(other, Fraction) else Fraction(1) / other
            return self * inv
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "LaurentSeries":
        return self.inverse() * other

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.const(Fraction(1), self.order - self.lo)
        acc = None
        b = self
        m = n
        while m:
            if m & 1:
                acc = b if acc is None else acc * b
            m >>= 1
            if m:
                b = b * b
        return acc

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.order:
            return self
        return LaurentSeries(self.lo, self.c[: max(0, order - self.lo)], order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u**k."""
        return LaurentSeries(self.lo + k, list(self.c), self.order + k)

    def derivative(self) -> "LaurentSeries":
        coeffs = [(self.lo + i) * a for i, a in enumerate(self.c)]
        return LaurentSeries(self.lo - 1, coeffs, self.order - 1)

    def integrate(self) -> "LaurentSeries":
        """Termwise antiderivative; fails on a u^-1 term."""
        coeffs = []
        for i, a in enumerate(self.c):
            k = self.lo + i
            if k == -1:
                if is_zero(a):
                    coeffs.append(Fraction(0))
                    continue
                raise ValueError("residue obstruction: cannot integrate u^-1 term")
            coeffs.append(a * Fraction(1, k + 1))
        return LaurentSeries(self.lo + 1, coeffs, self.order + 1)

    def residue(self) -> Any:
        """Coefficient of u^-1 (exact; requires the window to cover it)."""
        if self.order <= -1:
            raise TruncationError("series truncated before u^-1")
        return self.coeff(-1)

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """Substitute ``inner`` (valuation >= 1) for the variable."""
        if inner.valuation() < 1:
            raise ValueError("composition requires positive valuation")
        if self.lo < 0:
            # split off the pole part: compose it via the inverse of inner
            inv = inner.inverse()
            out = None
            for k in range(self.lo, 0):
                a = self.coeff(k)
                if is_zero(a):
                    continue
                term = (inv ** (-k)) * a
                out = term if out is None else out + term
            if self.lo + len(self.c) > 0:
                tail = LaurentSeries(0, self.c[-self.lo:], self.order)
            else:
                tail = LaurentSeries.zero(self.order)
            rest = tail.compose(inner)
            return rest if out is None else out + rest
        # Horner over the truncated window, down to the constant term
        out = LaurentSeries.zero(self.order * max(1, inner.valuation()))
        top = min(self.order, self.lo + len(self.c))
        for k in range(top - 1, -1, -1):
            out = out * inner + self.coeff(k)
        return out

    def reverse(self) -> "LaurentSeries":
        """Compositional inverse of a series with valuation exactly 1."""
        if self.valuation() != 1:
            raise ValueError("series reversion requires valuation exactly 1")
        n = self.order
        c1 = self.coeff(1)
        one = Fraction(1)
        g = LaurentSeries(1, [one / c1 if isinstance(c1, Fraction) else 1 / c1], 2)
        # Newton iteration: g <- g - (f(g) - u)/f'(g)
        prec = 2
        fp = self.derivative()
        while prec < n:
            prec = min(2 * prec, n)
            gw = LaurentSeries(g.lo, list(g.c), prec)
            fg = self.truncate(prec).compose(gw) - LaurentSeries.u(prec)
            fpg = fp.truncate(prec - 1).compose(gw)
            g = gw - fg / fpg
            g = g.truncate(prec)
        return g.truncate(n)

    def sqrt(self) -> "LaurentSeries":
        """Square root with even valuation; leading coefficient must have an
        exact square root in the scalar domain (rational squares only)."""
        if self.is_zero():
            raise ValueError("sqrt of zero-to-truncation series")
        if self.lo % 2:
            raise ValueError("sqrt needs even valuation")
        a0 = self.c[0]
        r0 = _exact_sqrt(a0)
        unit = self.shift(-self.lo) * (1 / a0 if not isinstance(a0, Fraction) else Fraction(1) / a0)
        # Newton for sqrt of 1 + h
        n = unit.order
        s = LaurentSeries.const(Fraction(1), 1)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            sw = LaurentSeries(s.lo, list(s.c), prec)
            s = (sw + unit.truncate(prec) / sw) * Fraction(1, 2)
        return s.truncate(n).shift(self.lo // 2) * r0

    def map_coeffs(self, fn: Callable[[Any], Any]) -> "LaurentSeries":
        return LaurentSeries(self.lo, [fn(a) for a in self.c], self.order)

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O(u^{self.order})"
        terms = [f"{a}*u^{self.lo + i}" for i, a in enumerate(self.c) if not is_zero(a)]
        return " + ".join(terms) + f" + O(u^{self.order})"


def _exact_sqrt(a: Any):
    if isinstance(a, Fraction):
        import math

        rn = math.isqrt(a.numerator)
        rd = math.isqrt(a.denominator)
        if rn * rn == a.numerator and rd * rd == a.denominator:
            return Fraction(rn, rd)
        raise ValueError(f"no exact rational square root of {a}")
    raise ValueError(f"no exact square root in domain for {a!r}")


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str) -> LaurentSeries:
    """Dispatch helper mirroring the library surface: add/mul/div/compose."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown series operation {op!r}")


def series_reverse(s: LaurentSeries) -> LaurentSeries:
    return s.reverse()


def exp_series(s: LaurentSeries) -> LaurentSeries:
    """exp of a series with positive valuation."""
    if s.valuation() < 1:
        raise ValueError("exp needs positive valuation")
    order = s.order
    out = LaurentSeries.const(Fraction(1), order)
    term = LaurentSeries.const(Fraction(1), order)
    k = 1
    while True:
        term = (term * s) * Fraction(1, k)
        if term.is_zero() or term.valuation() >= order:
            break
        out = out + term
        k += 1
    return out


def log1p_series(s: LaurentSeries) -> LaurentSeries:
    """log(1 + s) for a series with positive valuation."""
    if s.valuation() < 1:
        raise ValueError("log1p needs positive valuation")
    order = s.order
    out = LaurentSeries.zero(order)
    term = LaurentSeries.const(Fraction(-1), order)
    for k in range(1, order + 1):
        term = -(term * s)
        if term.is_zero() or term.valuation() >= order:
            break
        out = out + term * Fraction(1, k)
    return out


class EpsSeries:
    """Graded series in the dispersion parameter with arbitrary coefficient
    objects (scalars, rational functions, multidifferentials, ...).

    Represents ``sum(c[k] eps**k, k <= order)`` with the tail ``O(eps**(order+1))``.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Dict[int, Any], order: int):
        self.coeffs = {k: v for k, v in coeffs.items() if k <= order and not _eps_zero(v)}
        self.order = order

    @staticmethod
    def zero(order: int) -> "EpsSeries":
        return EpsSeries({}, order)

    @staticmethod
    def const(v: Any, order: int) -> "EpsSeries":
        return EpsSeries({0: v}, order)

    @staticmethod
    def term(v: Any, k: int, order: int) -> "EpsSeries":
        return EpsSeries({k: v}, order)

    def coeff(self, k: int) -> Any:
        if k > self.order:
            raise TruncationError(f"eps^{k} beyond truncation O(eps^{self.order + 1})")
        return self.coeffs.get(k, Fraction(0))

    def min_exponent(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def __add__(self, other: Any) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            other = EpsSeries.const(other, self.order)
        order = min(self.order, other.order)
        keys = set(self.coeffs) | set(other.coeffs)
        out = {}
        for k in keys:
            if k <= order:
                out[k] = self.coeffs.get(k, Fraction(0)) + other.coeffs.get(k, Fraction(0))
        return EpsSeries(out, order)

    __radd__ = __add__

    def __neg__(self) -> "EpsSeries":
        return EpsSeries({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other: Any) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            other = EpsSeries.const(other, self.order)
        return self + (-other)

    def __rsub__(self, other: Any) -> "EpsSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            return EpsSeries({k: v * other for k, v in self.coeffs.items()}, self.order)
        v1 = self.min_exponent()
        v2 = other.min_exponent()
        if v1 is None or v2 is None:
            order = min(self.order + (v2 or 0), other.order + (v1 or 0))
            return EpsSeries.zero(order)
        order = min(self.order + v2, other.order + v1)
        out: Dict[int, Any] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k <= order:
                    p = a * b
                    out[k] = out.get(k, Fraction(0)) + p
        return EpsSeries(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "EpsSeries":
        if isinstance(other, EpsSeries):
            return self * other.inverse()
        return self * (Fraction(1) / other if isinstance(other, (int, Fraction)) else 1 / other)

    def inverse(self) -> "EpsSeries":
        v = self.min_exponent()
        if v is None:
            raise ZeroDivisionError("inverse of zero-to-truncation eps-series")
        a0 = self.coeffs[v]
        inv0 = Fraction(1) / a0 if isinstance(a0, Fraction) else 1 / a0
        n = self.order - v
        out = {-v: inv0}
        for m in range(1, n + 1):
            s = None
            for k in range(1, m + 1):
                ak = self.coeffs.get(v + k)
                if ak is None:
                    continue
                t = ak * out.get(m - k - v, Fraction(0))
                s = t if s is None else s + t
            if s is not None:
                out[m - v] = -(inv0 * s)
        return EpsSeries(out, n - v)

    def __pow__(self, n: int) -> "EpsSeries":
        if n < 0:
            return self.inverse() ** (-n)
        acc = EpsSeries.const(Fraction(1), self.order)
        b = self
        while n:
            if n & 1:
                acc = acc * b
            n >>= 1
            if n:
                b = b * b
        return acc

    def truncate(self, order: int) -> "EpsSeries":
        if order >= self.order:
            return self
        return EpsSeries({k: v for k, v in self.coeffs.items() if k <= order}, order)

    def exp(self) -> "EpsSeries":
        """exp; requires strictly positive minimal exponent."""
        v = self.min_exponent()
        if v is not None and v <= 0:
            raise ValueError("exp of eps-series needs positive valuation")
        out = EpsSeries.const(Fraction(1), self.order)
        term = EpsSeries.const(Fraction(1), self.order)
        k = 1
        while True:
            term = term * self * Fraction(1, k)
            if term.min_exponent() is None or term.min_exponent() > self.order:
                break
            out = out + term
            k += 1
        return out

    def log1p(self) -> "EpsSeries":
        """log(1 + self); requires strictly positive minimal exponent."""
        v = self.min_exponent()
        if v is not None and v <= 0:
            raise ValueError("log1p of eps-series needs positive valuation")
        out = EpsSeries.zero(self.order)
        power = EpsSeries.const(Fraction(1), self.order)
        for k in range(1, self.order + 1):
            power = power * self
            if power.min_exponent() is None or power.min_exponent() > self.order:
                break
            out = out + power * Fraction((-1) ** (k + 1), k)
        return out

    def map_coeffs(self, fn: Callable[[Any], Any]) -> "EpsSeries":
        return EpsSeries({k: fn(v) for k, v in self.coeffs.items()}, self.order)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, EpsSeries):
            other = EpsSeries.const(other, self.order)
        order = min(self.order, other.order)
        keys = {k for k in (set(self.coeffs) | set(other.coeffs)) if k <= order}
        return all(_eps_eq(self.coeffs.get(k, Fraction(0)), other.coeffs.get(k, Fraction(0))) for k in keys)

    def __hash__(self):
        return hash((self.order, tuple(sorted((k, str(v)) for k, v in self.coeffs.items()))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"O(eps^{self.order + 1})"
        parts = [f"({self.coeffs[k]})*eps^{k}" for k in sorted(self.coeffs)]
        return " + ".join(parts) + f" + O(eps^{self.order + 1})"


def _eps_zero(v: Any) -> bool:
    if isinstance(v, (int, Fraction)):
        return v == 0
    zt = getattr(v, "is_zero", None)
    if callable(zt):
        return bool(v.is_zero())
    try:
        return bool(v == 0)
    except Exception:
        return False


def _eps_eq(a: Any, b: Any) -> bool:
    return bool(a == b)
