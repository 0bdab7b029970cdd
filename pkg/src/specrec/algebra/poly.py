"""Dense univariate polynomials over a duck-typed coefficient field."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Sequence

from .scalars import is_zero


def _trim(c: List[Any]) -> List[Any]:
    while c and is_zero(c[-1]):
        c.pop()
    return c


class Poly:
    """Polynomial ``sum(c[k] * X**k)`` with coefficients in a field."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[Any] = ()):
        self.c = _trim(list(coeffs))

    @staticmethod
    def const(v: Any) -> "Poly":
        return Poly([v])

    @staticmethod
    def x(one: Any = Fraction(1)) -> "Poly":
        return Poly([one * 0, one])

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def lead(self) -> Any:
        if not self.c:
            raise ZeroDivisionError("leading coefficient of 0")
        return self.c[-1]

    def __getitem__(self, k: int) -> Any:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __eq__(self, other: Any) -> bool:
        other = other if isinstance(other, Poly) else Poly.const(other)
        return len(self.c) == len(other.c) and all(a == b for a, b in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(str(x) for x in self.c))

    def __add__(self, other: Any) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.c), len(other.c))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-a for a in self.c])

    def __sub__(self, other: Any) -> "Poly":
        return self + (-(other if isinstance(other, Poly) else Poly.const(other)))

    def __rsub__(self, other: Any) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            return Poly([a * other for a in self.c])
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if is_zero(a):
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out, b = Poly.const(Fraction(1)), self
        while n:
            if n & 1:
                out = out * b
            n >>= 1
            if n:
                b = b * b
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = Poly()
        r = Poly(self.c)
        dlead = other.lead()
        dd = other.degree
        while not r.is_zero() and r.degree >= dd:
            k = r.degree - dd
            coef = r.lead() / dlead
            t = Poly([Fraction(0)] * k + [coef])
            q = q + t
            r = r - t * other
        return q, r

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        l = self.lead()
        return Poly([a / l for a in self.c])

    def derivative(self) -> "Poly":
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def eval(self, v: Any) -> Any:
        out = Fraction(0)
        for a in reversed(self.c):
            out = out * v + a
        return out

    def compose(self, other: "Poly") -> "Poly":
        out = Poly()
        for a in reversed(self.c):
            out = out * other + Poly.const(a)
        return out

    def shift(self, a: Any) -> "Poly":
        """Taylor shift: p(X + a)."""
        return self.compose(Poly([a, Fraction(1)]))

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for k, a in enumerate(self.c):
            if is_zero(a):
                continue
            if k == 0:
                terms.append(f"{a}")
            elif k == 1:
                terms.append(f"{a}*X")
            else:
                terms.append(f"{a}*X^{k}")
        return " + ".join(terms)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic polynomial gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def rational_roots(p: Poly) -> List[Fraction]:
    """All rational roots (with multiplicity) of a polynomial over Q.

    Raises ``ValueError`` if a nonconstant factor without rational roots
    remains -- callers treat that as "irrational special point" in exact mode.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined root set")
    coeffs = [Fraction(a) for a in p.c]
    den = 1
    for a in coeffs:
        den = den * a.denominator // _gcd_int(den, a.denominator)
    ints = [int(a * den) for a in coeffs]
    roots: List[Fraction] = []
    poly = Poly([Fraction(v) for v in ints])
    while poly.degree >= 1 and is_zero(poly[0]):
        roots.append(Fraction(0))
        poly = Poly(poly.c[1:])
    changed = True
    while poly.degree >= 1 and changed:
        changed = False
        a0 = int(poly[0])
        an = int(poly.lead())
        if a0 == 0:
            roots.append(Fraction(0))
            poly = Poly(poly.c[1:])
            changed = True
            continue
        for r in _candidate_roots(a0, an):
            if poly.eval(r) == 0:
                q, rem = poly.divmod(Poly([-r, Fraction(1)]))
                assert rem.is_zero()
                roots.append(r)
                poly = q
                changed = True
                break
    if poly.degree >= 1:
        raise ValueError(f"polynomial factor without rational roots: {poly}")
    return sorted(roots)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) or 1


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _candidate_roots(a0: int, an: int):
    for p in _divisors(a0):
        for q in _divisors(an):
            yield Fraction(p, q)
            yield Fraction(-p, q)
