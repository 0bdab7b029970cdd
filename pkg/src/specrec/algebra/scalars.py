"""Exact scalar domains.

All exact computations run over a coefficient *field* that is duck-typed:
any object supporting ``+ - * / ** ==`` and mixing with python ints works.
The default field is ``fractions.Fraction`` (arbitrary-precision rationals,
kept in canonical reduced form by the stdlib).  Parametric computations
(symbolic rescaling, flow parameters) use :class:`~specrec.algebra.ratfun.RationalFunction`
over a named variable as the scalar field instead.

``LogScalar`` holds values of the form ``c0 + sum c_i*log(a_i) + r*i*pi``
that arise from regularized third-kind periods and from F1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Tuple

ExactScalar = Fraction

QQ = Fraction


def is_zero(x: Any) -> bool:
    """Zero test that works across scalar domains."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    z = x == 0
    return bool(z)


def _factor_positive(q: Fraction) -> Dict[int, int]:
    """Prime factorization exponents of a positive rational (trial division)."""
    out: Dict[int, int] = {}
    for n, sgn in ((q.numerator, 1), (q.denominator, -1)):
        n = abs(n)
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + sgn
                n //= d
            d += 1 if d == 2 else 2
        if n > 1:
            out[n] = out.get(n, 0) + sgn
    return {p: e for p, e in out.items() if e}


@dataclass(frozen=True)
class LogScalar:
    """Exact value ``rational + sum(coeff * log(key)) + ipi_coeff * (i*pi)``.

    Log arguments are canonicalized: positive rational arguments are split
    into prime-power contributions, a sign ``-1`` contributes ``i*pi``
    (principal branch, cut on the negative real axis), and symbolic
    arguments keep an opaque canonical key.  ``ambiguous`` marks values that
    are only defined modulo ``2*pi*i`` (third-kind pairings).
    """

    const: Any = Fraction(0)
    logs: Tuple[Tuple[Any, Any], ...] = ()
    ipi: Fraction = Fraction(0)
    ambiguous: bool = False

    @staticmethod
    def of(const: Any = Fraction(0)) -> "LogScalar":
        return LogScalar(const=const)

    @staticmethod
    def log(arg: Any, coeff: Any = Fraction(1), ambiguous: bool = False) -> "LogScalar":
        """``coeff * log(arg)`` with the argument in canonical form."""
        if isinstance(arg, int):
            arg = Fraction(arg)
        if isinstance(arg, Fraction):
            if arg == 0:
                raise ZeroDivisionError("log(0)")
            ipi = Fraction(0)
            if arg < 0:
                ipi = Fraction(1) * coeff
                arg = -arg
            terms = tuple(sorted((p, coeff * e) for p, e in _factor_positive(arg).items()))
            return LogScalar(Fraction(0), terms, ipi, ambiguous)
        # symbolic argument: try to pull out a monomial power of the variable
        pull = getattr(arg, "monomial_split", None)
        if pull is not None:
            c, name, k = pull()
            if c is not None:
                out = LogScalar.log(c, coeff, ambiguous)
                if k:
                    out = out + LogScalar(Fraction(0), ((f"<{name}>", coeff * k),), Fraction(0), ambiguous)
                return out
        return LogScalar(Fraction(0), ((repr(arg), coeff),), Fraction(0), ambiguous)

    def _merge(self, other: "LogScalar", sign: int) -> "LogScalar":
        d: Dict[Any, Any] = dict(self.logs)
        for k, c in other.logs:
            d[k] = d.get(k, Fraction(0)) + sign * c
        logs = tuple(sorted(((k, c) for k, c in d.items() if not is_zero(c)),
                            key=lambda kv: (isinstance(kv[0], str), str(kv[0]))))
        return LogScalar(self.const + sign * other.const, logs,
                         self.ipi + sign * other.ipi,
                         self.ambiguous or other.ambiguous)

    def __add__(self, other: Any) -> "LogScalar":
        if not isinstance(other, LogScalar):
            other = LogScalar.of(other)
        return self._merge(other, 1)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "LogScalar":
        if not isinstance(other, LogScalar):
            other = LogScalar.of(other)
        return self._merge(other, -1)

    def __rsub__(self, other: Any) -> "LogScalar":
        return (-self) + other

    def __neg__(self) -> "LogScalar":
        return LogScalar(-self.const, tuple((k, -c) for k, c in self.logs), -self.ipi, self.ambiguous)

    def __mul__(self, c: Any) -> "LogScalar":
        if isinstance(c, LogScalar):
            raise TypeError("LogScalar*LogScalar is not defined")
        return LogScalar(self.const * c, tuple((k, v * c) for k, v in self.logs),
                         self.ipi * c, self.ambiguous)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LogScalar):
            other = LogScalar.of(other)
        d = self._merge(other, -1)
        if d.logs or not is_zero(d.const):
            return False
        if self.ambiguous or other.ambiguous:
            return d.ipi % 2 == 0
        return d.ipi == 0

    def __hash__(self):  # frozen dataclass with custom eq
        return hash((str(self.const), self.logs, self.ipi))

    def is_pure_rational(self) -> bool:
        return not self.logs and self.ipi == 0

    def __repr__(self) -> str:
        parts = []
        if not is_zero(self.const) or (not self.logs and self.ipi == 0):
            parts.append(str(self.const))
        for k, c in self.logs:
            parts.append(f"{c}*log({k})")
        if self.ipi:
            parts.append(f"{self.ipi}*i*pi")
        s = " + ".join(parts)
        return s + (" (mod 2*i*pi)" if self.ambiguous else "")
