"""Spectral-curve data model on the Riemann sphere.

A curve is presented by a degree-d map ``x(z)`` (rational, or a formal map
with rational ``d log x`` for Lambert-type covers), the scalar function
``yhat = y/dx`` (equivalently the 1-form ``y = y_form(z) dz``), and the
canonical bidifferential ``B = dz1 dz2/(z1-z2)**2`` which is rigid on genus
zero.  Exact mode requires all special points (ramification points, double
points, declared cycle points) to be rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .algebra import LaurentSeries, Poly, RationalFunction, linalg, rational_roots
from .algebra.partfrac import ratfunc_series, ratfunc_series_at_inf
from .algebra.scalars import LogScalar, is_zero


class UnsupportedCurveError(ValueError):
    """Curve feature outside the supported exact-mode class."""


class Infinity:
    _inst: Optional["Infinity"] = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"


INF = Infinity()


def is_inf(p: Any) -> bool:
    return isinstance(p, Infinity) or (isinstance(p, str) and p == "inf")


@dataclass
class FormalX:
    """Transcendental cover map given through its rational log-derivative.

    Only what the recursion and the Hurwitz expansions need is stored:
    ``dlogx = x'/x`` (rational), the rational ramification points, and an
    exact power series of ``x`` at z=0 when available.
    """

    label: str
    dlogx: RationalFunction
    ram_points: Tuple[Fraction, ...]
    logx_terms: Tuple[Tuple[Any, Any], ...]  # (coeff, root a) pairs: sum c*log(z-a)
    logx_linear: RationalFunction  # rational part R with log x = sum c log(z-a) + R

    def series_at_zero(self, order: int) -> LaurentSeries:
        raise UnsupportedCurveError("no exact x-series declared at 0")


@dataclass
class RamificationPoint:
    """Simple ramification point with its local deck transformation."""

    location: Fraction
    order: int
    deck: LaurentSeries  # s(u) = sigma(a+u) - a, valuation 1, s'(0) = -1
    deck_rational: Optional[RationalFunction] = None

    def __repr__(self):
        return f"RamificationPoint(a={self.location}, order={self.order})"


@dataclass
class DoublePoint:
    """Nodal pair (p, sigma(p)) away from ramification, with matching x, yhat."""

    p: Fraction
    q: Fraction

    def __repr__(self):
        return f"DoublePoint({self.p} ~ {self.q})"


@dataclass
class PlaneModel:
    """Monic-in-y plane model ``P(x, y) = sum_k (-1)^k P_k(x) y^{d-k}``."""

    degree: int
    coeffs: List[RationalFunction]  # P_0 = 1, P_1, ..., P_d as functions of x

    def p_at(self, k: int) -> RationalFunction:
        return self.coeffs[k]

    def evaluate(self, xval: Any, yval: Any) -> Any:
        total = None
        for k, pk in enumerate(self.coeffs):
            term = ((-1) ** k) * pk.eval(xval) * yval ** (self.degree - k)
            total = term if total is None else total + term
        return total

    def p_prime_at_curve(self, curve: "SpectralCurve") -> RationalFunction:
        """P_y(x(z), yhat(z)) as a rational function of z."""
        yh = curve.yhat
        total = RationalFunction.const(0, curve.var)
        for k in range(self.degree):
            pk_of_z = self.coeffs[k].compose(curve.x)
            total = total + ((-1) ** k) * (self.degree - k) * pk_of_z * yh ** (self.degree - k - 1)
        return total


class SpectralCurve:
    """Genus-zero spectral curve (x, yhat, canonical B) in exact mode."""

    def __init__(self, name: str, x: RationalFunction | FormalX,
                 yhat: Optional[RationalFunction] = None,
                 y_form: Optional[RationalFunction] = None,
                 germ_order: int = 36, var: str = "z",
                 pole_data: Optional[List[dict]] = None,
                 meta: Optional[dict] = None):
        self.name = name
        self.var = var
        self.germ_order = germ_order
        self.meta = dict(meta or {})
        if isinstance(x, FormalX):
            self.x = None
            self.formal_x = x
            if y_form is None:
                raise UnsupportedCurveError("formal x needs an explicit rational y_form")
            self.y_form = y_form
            self.yhat = None
        else:
            self.x = x
            self.formal_x = None
            if yhat is None:
                raise ValueError("rational curve needs yhat")
            self.yhat = yhat
            self.y_form = yhat * x.derivative() if y_form is None else y_form
        if self.y_form.is_zero():
            raise ValueError("y = yhat dx must be a nonzero 1-form")
        self.pole_data = list(pole_data or [])
        self._ram: Optional[List[RamificationPoint]] = None
        self._plane: Optional[PlaneModel] = None
        self._doubles: Optional[List[DoublePoint]] = None

    # -- basic geometry ------------------------------------------------------
    @property
    def degree(self) -> int:
        if self.x is not None:
            return max(self.x.num.degree, self.x.den.degree)
        return self.meta.get("degree", 0)

    def dx(self) -> RationalFunction:
        if self.x is None:
            raise UnsupportedCurveError("dx of a formal map is not rational")
        return self.x.derivative()

    def dlogx(self) -> RationalFunction:
        if self.formal_x is not None:
            return self.formal_x.dlogx
        return self.x.derivative() / self.x

    def ramification_points(self) -> List[RamificationPoint]:
        if self._ram is None:
            self._ram = self._compute_ramification()
        return self._ram

    def deg_ramification(self) -> int:
        return sum(r.order for r in self.ramification_points())

    def _ram_locations(self) -> List[Fraction]:
        if self.formal_x is not None:
            return sorted(self.formal_x.ram_points)
        xp = self.dx()
        try:
            roots = rational_roots(xp.num)
        except ValueError as exc:
            raise UnsupportedCurveError(f"irrational ramification point: {exc}") from exc
        # a zero of x' at a pole of x is not a ramification point
        pole_roots = set()
        if self.x.den.degree >= 1:
            pole_roots = set(rational_roots(self.x.den))
        locs: Dict[Fraction, int] = {}
        for r in roots:
            if r in pole_roots:
                continue
            locs[r] = locs.get(r, 0) + 1
        for r, m in locs.items():
            if m > 1:
                raise UnsupportedCurveError(
                    f"higher-order ramification at z={r} (order {m}) is not supported")
        # reject ramification over/at infinity (outside the supported class)
        n, m = self.x.num.degree, self.x.den.degree
        if n < m - 1:
            raise UnsupportedCurveError("zero of dx at infinity is not supported")
        if n == m:
            c = self.x.num.lead() / self.x.den.lead()
            drop = (self.x.num - self.x.den * c).degree
            if m - drop >= 2:
                raise UnsupportedCurveError("ramification at infinity is not supported")
        return sorted(locs)

    def _compute_ramification(self) -> List[RamificationPoint]:
        out = []
        sigma = self.global_deck() if (self.x is not None and self.degree == 2) else None
        for a in self._ram_locations():
            deck = self._deck_series(a, self.germ_order, sigma)
            out.append(RamificationPoint(a, 1, deck, sigma))
        return out

    def deck_at(self, a: Fraction, order: int) -> LaurentSeries:
        """Deck germ at a ramification point, recomputed if a longer window
        than the cached default is required."""
        for r in self.ramification_points():
            if r.location == a:
                if r.deck.order >= order:
                    return r.deck.truncate(order)
                r.deck = self._deck_series(a, order, r.deck_rational)
                return r.deck
        raise ValueError(f"z={a} is not a ramification point")

    def global_deck(self) -> Optional[RationalFunction]:
        """Exact rational deck transformation for degree-2 covers."""
        if self.x is None or self.degree != 2:
            return None
        # x(s) = x(z): N(s) := A(s) B(z) - A(z) B(s) = 0; divide out (s - z).
        A, Bn = self.x.num, self.x.den
        z = RationalFunction.variable(self.var)
        Bz = Bn_of(z, Bn)
        Az = Bn_of(z, A)
        deg = max(A.degree, Bn.degree)
        ncoeffs = []
        for k in range(deg + 1):
            ca = A[k] if k <= A.degree else Fraction(0)
            cb = Bn[k] if k <= Bn.degree else Fraction(0)
            ncoeffs.append(ca * Bz - Az * cb)
        # synthetic division of N(s) by (s - z); remainder N(z) = 0 identically
        quot = [RationalFunction.const(0, self.var)] * deg
        carry = RationalFunction.const(0, self.var)
        for k in range(deg, 0, -1):
            carry = ncoeffs[k] + carry * z
            quot[k - 1] = carry
        if len(quot) < 2 or quot[1].is_zero():
            return None
        return -quot[0] / quot[1]

    def _deck_series(self, a: Fraction, order: int,
                     sigma: Optional[RationalFunction]) -> LaurentSeries:
        if sigma is not None:
            s = ratfunc_series(sigma, a, order) - a
            if s.valuation() != 1:
                raise UnsupportedCurveError(f"deck not simple at z={a}")
            return s
        # Newton iteration on phi(s) = phi(u), phi = (x(a+u)-x(a)) or log-x version
        pad = order + 6
        if self.formal_x is not None:
            g = self.formal_x.dlogx
            phi = ratfunc_series(g, a, pad - 1).integrate()  # log x(a+u) - log x(a)
        else:
            phi = ratfunc_series(self.x, a, pad) - self.x.eval(a)
        if phi.valuation() != 2:
            raise UnsupportedCurveError(f"ramification at z={a} is not simple")
        phip = phi.derivative()
        # error valuation grows 2 -> 2v-1 per step (phi' vanishes at the point)
        s = LaurentSeries(1, [Fraction(-1)], pad)
        val = 2
        while val <= order + 1:
            num = phi.compose(s) - phi
            if num.is_zero():
                break
            den = phip.compose(s)
            s = s - num / den
            val = 2 * val - 1
        s = s.truncate(order)
        if s.order < order:
            raise UnsupportedCurveError("deck germ lost precision; raise germ_order")
        return s

    # -- plane model ----------------------------------------------------------
    def plane_model(self) -> PlaneModel:
        if self._plane is None:
            self._plane = self._compute_plane_model()
        return self._plane

    def _compute_plane_model(self) -> PlaneModel:
        if self.x is None:
            raise UnsupportedCurveError(
                "plane model unavailable for transcendental x (Lambert-type curve)")
        if self.degree != 2:
            raise UnsupportedCurveError("plane model implemented for degree-2 covers")
        sigma = self.global_deck()
        if sigma is None:
            raise UnsupportedCurveError("no rational deck for this degree-2 cover")
        yh = self.yhat
        yh_s = yh.compose(sigma)
        p1_z = yh + yh_s
        p2_z = yh * yh_s
        one = RationalFunction.const(1, "x")
        p1 = express_in_x(p1_z, self.x, "x")
        p2 = express_in_x(p2_z, self.x, "x")
        return PlaneModel(2, [one, p1, p2])

    def p_prime(self) -> RationalFunction:
        """P'(S; z) = P_y(x(z), yhat(z)) as a rational function of z."""
        if self.degree == 2 and self.x is not None:
            sigma = self.global_deck()
            return self.yhat - self.yhat.compose(sigma)
        return self.plane_model().p_prime_at_curve(self)

    def double_points(self) -> List[DoublePoint]:
        if self._doubles is None:
            self._doubles = self._compute_double_points()
        return self._doubles

    def _compute_double_points(self) -> List[DoublePoint]:
        if self.x is None:
            return []
        if self.degree < 2:
            return []
        if self.degree != 2:
            raise UnsupportedCurveError("double points implemented for degree-2 covers")
        sigma = self.global_deck()
        diff = self.yhat - self.yhat.compose(sigma)
        try:
            roots = rational_roots(diff.num)
        except ValueError as exc:
            raise UnsupportedCurveError(f"irrational double point: {exc}") from exc
        ram = {r.location for r in self.ramification_points()}
        seen = set()
        out: List[DoublePoint] = []
        for r in roots:
            if r in ram or r in seen:
                continue
            mate = sigma.eval(r)
            if mate == r:
                continue  # fixed point of the deck that is not a declared ram point
            seen.add(r)
            seen.add(mate)
            out.append(DoublePoint(r, mate))
        return out

    # -- algebraic structure ---------------------------------------------------
    def rescale(self, lam: Any) -> "SpectralCurve":
        """C*-rescaling: yhat -> lam*yhat, x and B unchanged."""
        if is_zero(lam):
            raise ValueError("rescaling by zero")
        if self.x is None:
            return SpectralCurve(f"{self.name}*{lam}", self.formal_x, None,
                                 self.y_form * lam, self.germ_order, self.var,
                                 self.pole_data, self.meta)
        return SpectralCurve(f"{self.name}*{lam}", self.x, self.yhat * lam,
                             self.y_form * lam, self.germ_order, self.var,
                             self.pole_data, self.meta)

    def y_series(self, a: Fraction, order: int) -> LaurentSeries:
        """Expansion of y/dz at z = a + u."""
        return ratfunc_series(self.y_form, a, order)

    def logx_value(self, a: Fraction) -> LogScalar:
        """log x(a) as an exact log-scalar (used by F1 on Lambert-type curves)."""
        if self.x is not None:
            return LogScalar.log(self.x.eval(a))
        fx = self.formal_x
        out = LogScalar.of(fx.logx_linear.eval(a))
        for c, root in fx.logx_terms:
            out = out + LogScalar.log(a - root, c)
        return out

    def fingerprint(self) -> str:
        import hashlib

        base = repr((self.name, repr(self.x) if self.x is not None else self.formal_x.label,
                     repr(self.yhat), repr(self.y_form), self.germ_order,
                     sorted(self.meta.items(), key=lambda kv: kv[0])))
        return hashlib.sha256(base.encode()).hexdigest()[:16]

    def __repr__(self):
        xs = repr(self.x) if self.x is not None else f"<{self.formal_x.label}>"
        return f"SpectralCurve({self.name}: x={xs}, y=({self.y_form}) dz)"


def Bn_of(z: RationalFunction, p: Poly) -> RationalFunction:
    """Evaluate a Q-polynomial on a rational function."""
    out = RationalFunction.const(0, z.var)
    for a in reversed(p.c if p.c else [Fraction(0)]):
        out = out * z + a
    return out


def express_in_x(f: RationalFunction, x: RationalFunction, xvar: str = "x",
                 max_deg: int = 12) -> RationalFunction:
    """Write a deck-invariant rational function of z as a rational function of x.

    Solves N(x(z)) - f(z) D(x(z)) = 0 for polynomial N, D by exact linear
    algebra, increasing the degree bound until a solution verifies.
    """
    XA, XB = x.num, x.den
    A_f, B_f = f.num, f.den
    for m in range(0, max_deg + 1):
        # powers X_A^k X_B^(m-k)
        pows = []
        for k in range(m + 1):
            pows.append((XA ** k) * (XB ** (m - k)))
        # unknowns: n_0..n_m, d_0..d_m
        # equation: sum n_k pows[k] * B_f - A_f * sum d_k pows[k] = 0
        maxdeg = max((p.degree for p in pows), default=0) + max(A_f.degree, B_f.degree) + 1
        rows = []
        ncols = 2 * (m + 1)
        for deg in range(maxdeg + 1):
            row = []
            for k in range(m + 1):
                pb = pows[k] * B_f
                row.append(pb[deg] if deg <= pb.degree else Fraction(0))
            for k in range(m + 1):
                pa = pows[k] * A_f
                row.append(-(pa[deg] if deg <= pa.degree else Fraction(0)))
            rows.append(row)
        basis = linalg.nullspace(rows)
        for vec in basis:
            N = Poly(vec[: m + 1])
            D = Poly(vec[m + 1:])
            if D.is_zero():
                continue
            cand = RationalFunction(N, D, xvar)
            if cand.compose(x) == f:
                return cand
    raise UnsupportedCurveError("could not express deck-invariant function in x")
