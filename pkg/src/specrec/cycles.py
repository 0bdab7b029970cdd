"""Generalized cycles on genus-zero curves: intersection, pairing, duality.

Atoms are second-kind cycles ``A(p,k) = C_p . xi_p^k`` (k >= 0) and
``B(p,k) = (1/2pi i) C_p . xi_p^-k / k`` (k >= 1), and third-kind chains
``gamma_{q -> p}`` carrying an ordering tag.  The local coordinate is
``xi_p = z - p`` at finite points and ``1/z`` at infinity; registry curves
may additionally declare presentation conventions for their printed times,
which only affect :func:`kp_times` output, not the internal machinery.

Sign conventions (recorded, self-consistent, and pinned by tests):

* ``pair(A(p,k), w) = 2 pi i * Res_p(xi^k w)`` (returned as a LogScalar with
  the 2 pi i in the ``ipi`` component),
* ``pair(B(p,k), w) = -(1/k) Res_p(xi^-k w)``,
* ``bhat(B(p,k)) = xi^{-k-1} d xi + holomorphic`` (note: equals the negative
  of pairing B against B; the deformation flows fix this asymmetry),
* intersections make ``A(p,k) cap B(p,k) = +1`` and satisfy the
  double-integral commutator identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .algebra import LaurentSeries, Poly, RationalFunction, linalg
from .algebra.partfrac import (PartialFractions, partial_fractions,
                               ratfunc_series, ratfunc_series_at_inf, residue_at)
from .algebra.scalars import LogScalar, is_zero
from .curve import INF, Infinity, SpectralCurve, is_inf

Point = Union[Fraction, Infinity]


# -- atoms ----------------------------------------------------------------------

@dataclass(frozen=True)
class ACycle:
    p: Any
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("A(p,k) needs k >= 0")

    def __repr__(self):
        return f"A({self.p},{self.k})"


@dataclass(frozen=True)
class BCycle:
    p: Any
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("B(p,k) needs k >= 1")

    def __repr__(self):
        return f"B({self.p},{self.k})"


@dataclass(frozen=True)
class Chain:
    """Third-kind chain from q to p with an ordering tag."""

    q: Any
    p: Any
    tag: int = 0

    def __repr__(self):
        return f"gamma({self.q}->{self.p};#{self.tag})"


Atom = Union[ACycle, BCycle, Chain]


class GeneralizedCycle:
    """Formal linear combination of atoms over an exact scalar domain."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Atom, Any]] = None):
        self.terms: Dict[Atom, Any] = {}
        if terms:
            for a, c in terms.items():
                if not is_zero(c):
                    self.terms[a] = c

    @staticmethod
    def atom(a: Atom, coeff: Any = Fraction(1)) -> "GeneralizedCycle":
        return GeneralizedCycle({a: coeff})

    @staticmethod
    def zero() -> "GeneralizedCycle":
        return GeneralizedCycle({})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GeneralizedCycle") -> "GeneralizedCycle":
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, Fraction(0)) + c
            if is_zero(s):
                out.pop(a, None)
            else:
                out[a] = s
        return GeneralizedCycle(out)

    def __sub__(self, other: "GeneralizedCycle") -> "GeneralizedCycle":
        return self + (-other)

    def __neg__(self) -> "GeneralizedCycle":
        return GeneralizedCycle({a: -c for a, c in self.terms.items()})

    def __mul__(self, scalar: Any) -> "GeneralizedCycle":
        if is_zero(scalar):
            return GeneralizedCycle({})
        return GeneralizedCycle({a: c * scalar for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, GeneralizedCycle):
            return self.is_zero() and is_zero(other)
        return self.terms == other.terms

    def conjugate(self) -> "GeneralizedCycle":
        """Complex conjugation on coefficients (atoms form the real lattice)."""
        return GeneralizedCycle({a: _conj(c) for a, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0-cycle"
        return " + ".join(f"({c})*{a}" for a, c in sorted(self.terms.items(), key=lambda t: repr(t[0])))


def _conj(c: Any) -> Any:
    if isinstance(c, complex):
        return c.conjugate()
    return c


# -- local coordinates ------------------------------------------------------------

def xi_series_default(p: Point, order: int) -> LaurentSeries:
    """Local coordinate series: u at finite p, u at infinity (u = 1/z)."""
    return LaurentSeries.u(order)


def form_series_at(form: RationalFunction, p: Point, order: int) -> LaurentSeries:
    """Expansion of the 1-form ``form * dz`` at p in the local chart.

    At infinity the chart is u = 1/z and the pullback jacobian -1/u^2 is
    included, so residues read off this series are chart residues.
    """
    if is_inf(p):
        g = ratfunc_series_at_inf(form, order + 2)
        return -(g.shift(-2))
    return ratfunc_series(form, p, order)


def residue_xi_weighted(form: RationalFunction, p: Point, k: int) -> Any:
    """Res_p(xi_p^k * form dz) with the default local coordinate."""
    ser = form_series_at(form, p, abs(k) + 2)
    return ser.coeff(-1 - k)


# -- pairing ----------------------------------------------------------------------

def pair_atom(curve: Optional[SpectralCurve], atom: Atom,
              form: RationalFunction) -> LogScalar:
    """Integral of a rational 1-form ``form dz`` over one atom."""
    if isinstance(atom, ACycle):
        r = residue_xi_weighted(form, atom.p, atom.k)
        return LogScalar(const=Fraction(0), logs=(), ipi=2 * r)
    if isinstance(atom, BCycle):
        r = residue_xi_weighted(form, atom.p, -atom.k)
        return LogScalar.of(r * Fraction(-1, atom.k))
    if isinstance(atom, Chain):
        return chain_integral(form, atom.q, atom.p)
    raise TypeError(f"unknown atom {atom!r}")


def pair(curve: Optional[SpectralCurve], cycle: GeneralizedCycle,
         form: RationalFunction) -> LogScalar:
    """<cycle, form dz>, linear in both arguments.

    A-cycle contributions carry their 2 pi i in the ``ipi`` component of the
    returned LogScalar; B-cycles and chains contribute plain (log-)scalars.
    """
    out = LogScalar.of(Fraction(0))
    for a, c in cycle.terms.items():
        out = out + pair_atom(curve, a, form) * c
    return out


def chain_integral(form: RationalFunction, q: Point, p: Point) -> LogScalar:
    """Regularized integral of ``form dz`` from q to p.

    Equals ``L(p) - L(q)`` where L is the finite part of an antiderivative
    with the ``t_x log xi_x`` and singular-part subtractions at each endpoint
    (independent of the intermediate points).
    """
    pf = partial_fractions(form)
    return _finite_part(pf, p) - _finite_part(pf, q)


def _finite_part(pf: PartialFractions, p: Point) -> LogScalar:
    """lim_{z->p} [F(z) - t_p log xi_p - V_p] for the antiderivative F."""
    out = LogScalar.of(Fraction(0))
    if not is_inf(p):
        # polynomial part of F
        ppoly = pf.poly
        acc = Fraction(0)
        for k, c in enumerate(ppoly.c):
            acc = acc + c * (p ** (k + 1)) * Fraction(1, k + 1)
        out = out + acc
        for (a, k), c in pf.parts.items():
            if a == p:
                continue  # removed by the local subtraction
            if k == 1:
                out = out + LogScalar.log(p - a, c)
            else:
                out = out + c * Fraction(-1, k - 1) * (p - a) ** (-(k - 1))
        return out
    # Endpoint at infinity (chart u = 1/z, xi = u).  With the same global
    # antiderivative F = poly-int + sum_{k>=2} c (z-a)^{1-k}/(1-k)
    # + sum_a t_a log(z-a): the log terms give -(sum t_a) log u + log(1-au),
    # the log u part is exactly cancelled by the t_inf subtraction (residue
    # theorem), log(1-au) -> 0, and V_inf removes the polynomial divergence.
    # The finite part is the u^0 coefficient of the rational part of F at inf.
    z = RationalFunction.variable(pf.var)
    frat = RationalFunction(pf.poly, None, pf.var)
    # integrate the polynomial part
    fpoly_int = Poly([Fraction(0)] + [c * Fraction(1, k + 1) for k, c in enumerate(pf.poly.c)])
    frest = RationalFunction(fpoly_int, None, pf.var)
    for (a, k), c in pf.parts.items():
        if k >= 2:
            frest = frest + RationalFunction.const(c * Fraction(-1, k - 1), pf.var) \
                / (z - a) ** (k - 1)
    ser = ratfunc_series_at_inf(frest, 1)
    return out + ser.coeff(0)


# -- B-hat and C-hat ----------------------------------------------------------------

def bhat_atom(atom: Atom, var: str = "z") -> RationalFunction:
    z = RationalFunction.variable(var)
    if isinstance(atom, ACycle):
        return RationalFunction.const(0, var)
    if isinstance(atom, BCycle):
        p, k = atom.p, atom.k
        if is_inf(p):
            # xi = 1/z: B-form = xi^{-k-1} d xi = -z^{k-1} dz
            return -(z ** (k - 1))
        return (z - p) ** (-(k + 1))
    if isinstance(atom, Chain):
        out = RationalFunction.const(0, var)
        if not is_inf(atom.p):
            out = out + 1 / (z - atom.p)
        if not is_inf(atom.q):
            out = out - 1 / (z - atom.q)
        return out
    raise TypeError(f"unknown atom {atom!r}")


def bhat(cycle: GeneralizedCycle, var: str = "z") -> RationalFunction:
    """Form-valued duality map: kind preserving, kernel = span of A-cycles."""
    out = RationalFunction.const(0, var)
    for a, c in cycle.terms.items():
        out = out + bhat_atom(a, var) * c
    return out


DEFAULT_BASE_POINT = Fraction(2)


def chat(form: RationalFunction, base_point: Optional[Fraction] = None,
         tag_start: int = 0) -> GeneralizedCycle:
    """Period decomposition of a 1-form into cycles, right inverse of bhat.

    On the sphere: for every pole p, KP times t_{p,j} = Res_p(xi^j form dz)
    give ``sum_j t_{p,j} B(p,j) + t_{p,0} gamma(o -> p)``; the holomorphic
    remainder vanishes identically on genus zero.
    """
    if form.is_zero():
        return GeneralizedCycle.zero()
    o = DEFAULT_BASE_POINT if base_point is None else base_point
    pf = partial_fractions(form)
    out: Dict[Atom, Any] = {}
    tag = tag_start
    # finite poles
    orders = pf.pole_orders()
    if o in orders:
        raise ValueError("base point collides with a pole; choose another")
    for p in sorted(orders):
        d = orders[p]
        for j in range(1, d):
            t = _t_time_finite(pf, p, j)
            if not is_zero(t):
                out[BCycle(p, j)] = out.get(BCycle(p, j), Fraction(0)) + t
        t0 = pf.residue(p)
        if not is_zero(t0):
            out[Chain(o, p, tag)] = out.get(Chain(o, p, tag), Fraction(0)) + t0
            tag += 1
    # pole at infinity
    dinf = form.num.degree - form.den.degree + 2
    if dinf >= 1:
        ser = form_series_at(form, INF, dinf + 1)
        for j in range(1, dinf):
            t = ser.coeff(-1 - j)
            if not is_zero(t):
                out[BCycle(INF, j)] = out.get(BCycle(INF, j), Fraction(0)) + t
        t0 = ser.coeff(-1)
        if not is_zero(t0):
            out[Chain(o, INF, tag)] = out.get(Chain(o, INF, tag), Fraction(0)) + t0
    return GeneralizedCycle(out)


def _t_time_finite(pf: PartialFractions, p: Fraction, j: int) -> Any:
    # t_{p,j} = Res_p((z-p)^j f dz) = coefficient of (z-p)^{-j-1}
    return pf.parts.get((p, j + 1), Fraction(0))


def projector_pi(cycle: GeneralizedCycle,
                 base_point: Optional[Fraction] = None) -> GeneralizedCycle:
    """Pi = chat o bhat, the projector onto Im(chat) along Ker(bhat)."""
    return chat(bhat(cycle), base_point)


# -- intersections -------------------------------------------------------------------

def intersect_atoms(a1: Atom, a2: Atom) -> Any:
    if isinstance(a1, ACycle) and isinstance(a2, ACycle):
        return Fraction(0)
    if isinstance(a1, BCycle) and isinstance(a2, BCycle):
        return Fraction(0)
    if isinstance(a1, ACycle) and isinstance(a2, BCycle):
        return Fraction(1) if (a1.p == a2.p and a1.k == a2.k) else Fraction(0)
    if isinstance(a1, BCycle) and isinstance(a2, ACycle):
        return -intersect_atoms(a2, a1)
    if isinstance(a1, Chain) and isinstance(a2, ACycle):
        if a2.k != 0:
            return Fraction(0)
        return Fraction(int(a1.q == a2.p) - int(a1.p == a2.p))
    if isinstance(a1, ACycle) and isinstance(a2, Chain):
        return -intersect_atoms(a2, a1)
    if isinstance(a1, Chain) and isinstance(a2, BCycle):
        return Fraction(0)
    if isinstance(a1, BCycle) and isinstance(a2, Chain):
        return Fraction(0)
    if isinstance(a1, Chain) and isinstance(a2, Chain):
        return _chain_chain(a1, a2)
    raise TypeError("unknown atom pair")


def _chain_chain(c1: Chain, c2: Chain) -> Fraction:
    """Half-integer shared-endpoint intersections; sign set by ordering tags.

    Both-arriving contributes +1/2, both-leaving -1/2, head-to-tail -+1/2,
    all times sgn(tag2 - tag1); parallel chains with identical endpoint sets
    then intersect 0, as transverse representatives can be chosen disjoint.
    """
    if c1.tag == c2.tag and (c1.q, c1.p) == (c2.q, c2.p):
        return Fraction(0)
    sgn = 1 if c2.tag >= c1.tag else -1
    total = Fraction(0)
    if c1.p == c2.p:
        total += Fraction(1, 2)
    if c1.q == c2.q:
        total -= Fraction(1, 2)
    if c1.p == c2.q:
        total -= Fraction(1, 2)
    if c1.q == c2.p:
        total += Fraction(1, 2)
    return sgn * total


def intersection(g1: GeneralizedCycle, g2: GeneralizedCycle) -> Any:
    total = Fraction(0)
    for a1, c1 in g1.terms.items():
        for a2, c2 in g2.terms.items():
            v = intersect_atoms(a1, a2)
            if not is_zero(v):
                total = total + c1 * c2 * v
    return total


# -- the Q form ----------------------------------------------------------------------

@dataclass
class QValue:
    """Value ``qr + ql / (2 pi i)`` of the symmetric form Q."""

    qr: Any = Fraction(0)
    ql: LogScalar = LogScalar.of(Fraction(0))

    def __add__(self, other: "QValue") -> "QValue":
        return QValue(self.qr + other.qr, self.ql + other.ql)

    def __mul__(self, c: Any) -> "QValue":
        return QValue(self.qr * c, self.ql * c)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, QValue):
            other = QValue(other)
        return self.qr == other.qr and self.ql == other.ql

    def minus_two_pi_i(self) -> complex:
        """Numeric value of -2 pi i Q (used by the positivity check)."""
        import cmath, math

        tot = -2j * math.pi * complex(_numeric(self.qr))
        tot -= _log_numeric(self.ql)
        return tot

    def exp_pi_i(self) -> complex:
        """Numeric value of exp(pi i Q)."""
        import cmath, math

        return cmath.exp(1j * math.pi * complex(_numeric(self.qr)) + _log_numeric(self.ql) / 2)

    def __repr__(self):
        return f"QValue({self.qr} + ({self.ql})/(2 pi i))"


def _numeric(v: Any) -> complex:
    if isinstance(v, Fraction):
        return complex(v)
    if isinstance(v, (int, float, complex)):
        return complex(v)
    raise TypeError(f"cannot numerify {v!r}")


def _log_numeric(l: LogScalar) -> complex:
    import cmath, math

    out = complex(_numeric(l.const))
    for key, c in l.logs:
        if isinstance(key, int):
            out += complex(_numeric(c)) * math.log(key)
        else:
            raise TypeError(f"symbolic log {key} is not numeric")
    out += complex(_numeric(l.ipi)) * 1j * math.pi
    return out


def _prime_log(a: Point, b: Point) -> LogScalar:
    """log of the prime-form numerator (a - b); infinite points drop out in
    the degree-zero combinations where this is used."""
    if is_inf(a) or is_inf(b):
        return LogScalar.of(Fraction(0))
    return LogScalar.log(a - b, ambiguous=True)


def q_form_atoms(a1: Atom, a2: Atom) -> QValue:
    """Q on a pair of atoms: (1/2pi i) double B-integral - half intersection."""
    inter = intersect_atoms(a1, a2)
    if isinstance(a1, ACycle) or isinstance(a2, ACycle):
        # double integral (1/2pi i) <A, bhat(other)> = Res(xi^k bhat(other))
        if isinstance(a1, ACycle):
            d = residue_xi_weighted(bhat_atom(a2), a1.p, a1.k)
        else:
            # D(a1, A) = 0 since bhat(A) = 0
            d = Fraction(0)
        return QValue(d - Fraction(1, 2) * inter, LogScalar.of(Fraction(0)))
    if isinstance(a1, BCycle) and isinstance(a2, BCycle):
        val = residue_xi_weighted(bhat_atom(a2), a1.p, -a1.k) * Fraction(-1, a1.k)
        return QValue(Fraction(0), LogScalar.of(val))
    if isinstance(a1, BCycle) and isinstance(a2, Chain) or \
       isinstance(a1, Chain) and isinstance(a2, BCycle):
        b, ch = (a1, a2) if isinstance(a1, BCycle) else (a2, a1)
        val = residue_xi_weighted(bhat_atom(ch), b.p, -b.k) * Fraction(-1, b.k)
        return QValue(Fraction(0), LogScalar.of(val))
    if isinstance(a1, Chain) and isinstance(a2, Chain):
        # prime-form closed form: 2 pi i Q = log E(p,p')E(q,q')/(E(q,p')E(p,q'))
        # with xi-regularized values at shared endpoints.
        p, q, pp, qq = a1.p, a1.q, a2.p, a2.q
        log = LogScalar.of(Fraction(0))
        for (x, y, sgn) in ((p, pp, 1), (q, qq, 1), (q, pp, -1), (p, qq, -1)):
            if x == y:
                # E(x,x) -> d xi(x) regularization: log 1 = 0 in the z chart
                # (self terms appear only with the -1 E(q,p)^2 convention)
                continue
            log = log + _prime_log(x, y) * sgn
        if a1 == a2 or (p == pp and q == qq):
            log = log + LogScalar(Fraction(0), (), Fraction(1), True)  # log(-1)
        return QValue(Fraction(0), log)
    raise TypeError("unknown atom pair for Q")


def q_form(g1: GeneralizedCycle, g2: GeneralizedCycle) -> QValue:
    total = QValue()
    for a1, c1 in g1.terms.items():
        for a2, c2 in g2.terms.items():
            total = total + q_form_atoms(a1, a2) * (c1 * c2)
    return total


# -- times ---------------------------------------------------------------------------

def kp_times(curve: SpectralCurve) -> Dict[Tuple[str, int], Any]:
    """Times of y at its declared poles, in the curve's printed convention.

    KP-type poles use the local coordinate weighting Res_p(xi^k y); matrix
    model poles (kind "mm") use the potential weighting Res_p(x^k y).
    """
    out: Dict[Tuple[str, int], Any] = {}
    y = curve.y_form
    for pd in curve.pole_data:
        p = pd["point"]
        kind = pd.get("kind", "kp")
        label = "inf" if is_inf(p) else str(p)
        if kind == "mm":
            # t_k = Res_p(x^k y) for k >= 0, degree bounded by the pole of y
            for k in range(0, _pole_degree(curve, p) + 3):
                val = _mm_time(curve, p, k)
                if not is_zero(val):
                    out[(label, k)] = val
        else:
            dmax = _pole_degree(curve, p)
            ser = form_series_at(y, p, max(dmax + 2, 3))
            for k in range(0, dmax + 1):
                val = ser.coeff(-1 - k)
                if not is_zero(val):
                    out[(label, k)] = val
    return out


def _pole_degree(curve: SpectralCurve, p: Point) -> int:
    y = curve.y_form
    if is_inf(p):
        return max(y.num.degree - y.den.degree + 2, 0)
    ser = form_series_at(y, p, 2)
    return max(0, -ser.valuation())


def _mm_time(curve: SpectralCurve, p: Point, k: int) -> Any:
    xk = curve.x ** k
    form = xk * curve.y_form
    if is_inf(p):
        ser = form_series_at(form, INF, 2)
        return ser.coeff(-1)
    ser = form_series_at(form, p, 2)
    return ser.coeff(-1)


# -- kernel Taylor data ----------------------------------------------------------------

def kernel_taylor(p: Point, pprime: Point, orders: int) -> Dict[Tuple[int, int], Any]:
    """Taylor data tau_{p,k;p',l} of B minus its diagonal double pole.

    With the canonical sphere kernel and the default charts, tau vanishes
    identically when p = p'; for distinct points it is the Taylor table of
    dz dz'/(z - z')^2 at (p, p').
    """
    out: Dict[Tuple[int, int], Any] = {}
    if p == pprime:
        for k in range(1, orders + 1):
            for l in range(1, orders + 1):
                out[(k, l)] = Fraction(0)
        return out
    if is_inf(p) or is_inf(pprime):
        raise NotImplementedError("kernel Taylor data at infinity is not needed")
    # B(z,z') = sum_{k,l} k l tau_{k,l} xi^{k-1} xi'^{l-1} d xi d xi'
    # tau_{k,l} = (1/(k l)) * coefficient of u^{k-1} v^{l-1} in 1/((p+u)-(p'+v))^2
    # 1/(c+u-v)^2 with c = p - p': expansion sum_m (m+1)(v-u)^m / c^{m+2}
    c = p - pprime
    import math

    for k in range(1, orders + 1):
        for l in range(1, orders + 1):
            # coefficient of u^{k-1} v^{l-1} in sum_m (m+1)(v-u)^m c^{-m-2}
            m = (k - 1) + (l - 1)
            binom = math.comb(m, k - 1)
            coeff = (m + 1) * binom * ((-1) ** (k - 1)) * c ** (-(m + 2))
            out[(k, l)] = coeff * Fraction(1, k * l)
    return out


def bhat_taylor_at(form: RationalFunction, p: Point, orders: int) -> List[Any]:
    """Taylor coefficients of a 1-form at p in the default chart (for the
    kernel-consistency check bhat(B(p,k)) ~ sum l tau_{k,l} xi^{l-1} d xi)."""
    ser = form_series_at(form, p, orders + 1)
    return [ser.coeff(l) for l in range(0, orders)]


# -- Darboux / lattice data -----------------------------------------------------------

@dataclass
class LatticeData:
    """Finite-rank symplectic lattice of cycles with a Lagrangian split.

    ``a_basis``/``b_basis`` must pair symplectically (A_i cap B_j = delta).
    ``nu`` is the characteristic shift, an integer vector over ``a_basis``
    (the Ker-bhat side).
    """

    a_basis: List[GeneralizedCycle]
    b_basis: List[GeneralizedCycle]
    nu: Optional[List[int]] = None

    @property
    def rank(self) -> int:
        return len(self.b_basis)

    def intersection_matrix(self) -> List[List[Any]]:
        basis = self.a_basis + self.b_basis
        return [[intersection(x, y) for y in basis] for x in basis]

    def check_symplectic(self) -> bool:
        r = len(self.a_basis)
        m = self.intersection_matrix()
        for i in range(r):
            for j in range(r):
                if m[i][j] != 0 or m[r + i][r + j] != 0:
                    return False
                want = Fraction(1) if i == j else Fraction(0)
                if m[i][r + j] != want:
                    return False
        return True


@dataclass
class DarbouxMatrices:
    """Projection data X, tau, kappa, R and the projected bases."""

    x_mat: List[List[Any]]
    tau: List[List[Any]]
    kappa: List[List[Any]]
    r_mat: List[List[Any]]
    a_proj: List[GeneralizedCycle]   # A'' = A - X B in Ker bhat
    b_basis: List[GeneralizedCycle]

    def identities_hold(self) -> bool:
        """X = (1 + kappa tau)^-1 kappa and R = tau (1 - X tau)^-1, exactly."""
        n = len(self.x_mat)
        if n == 0:
            return True
        one = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        m1 = _mat_add(one, linalg.mat_mul(self.kappa, self.tau))
        lhs = linalg.mat_mul(linalg.mat_inv(m1), self.kappa)
        if lhs != self.x_mat:
            return False
        m2 = _mat_add(one, _mat_neg(linalg.mat_mul(self.x_mat, self.tau)))
        rhs = linalg.mat_mul(self.tau, linalg.mat_inv(m2))
        return rhs == self.r_mat


def _mat_add(a, b):
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def _mat_neg(a):
    return [[-x for x in row] for row in a]


def darboux_project(lattice: LatticeData,
                    base_point: Optional[Fraction] = None) -> DarbouxMatrices:
    """Project the A-side onto Ker(bhat) parallel to the B-side.

    Solves A''_i = A_i - sum_j X_ij B_j with bhat(A''_i) = 0 by exact linear
    algebra on the pole data of the bhat images, then reads tau and kappa
    from the projector and verifies the matrix identities.
    """
    r = lattice.rank
    if r == 0:
        return DarbouxMatrices([], [], [], [], [], [])
    forms_a = [bhat(c) for c in lattice.a_basis]
    forms_b = [bhat(c) for c in lattice.b_basis]
    # X solves bhat(A_i) = sum_j X_ij bhat(B_j): match coefficients of a
    # common pole basis.
    keys: List[Tuple[Any, int]] = []
    columns = []
    for f in forms_b + forms_a:
        columns.append(_form_fingerprint(f))
        for k in columns[-1]:
            if k not in keys:
                keys.append(k)
    mat = [[columns[j].get(k, Fraction(0)) for j in range(r)] for k in keys]
    xrows = []
    for i in range(r):
        rhs = [columns[r + i].get(k, Fraction(0)) for k in keys]
        sol = linalg.solve(mat, rhs)
        if sol is None:
            raise ValueError("A-cycle image not in the span of B-cycle images")
        xrows.append(sol)
    a_proj = []
    for i in range(r):
        g = lattice.a_basis[i]
        for j in range(r):
            g = g - xrows[i][j] * lattice.b_basis[j]
        a_proj.append(g)
    for g in a_proj:
        if not bhat(g).is_zero():
            raise AssertionError("projection failed: bhat(A'') != 0")
    # kappa_ij = A_i cap Pi(A_j); tau from B' = B - tau A in Im Pi
    kappa = [[intersection(lattice.a_basis[i], projector_pi(lattice.a_basis[j], base_point))
              for j in range(r)] for i in range(r)]
    # tau_ij: B'_i = B_i - sum tau_ij A_j in Im Pi; on these finite lattices
    # Pi(B_i) = B_i - sum_j c_ij A_j for coefficients read from the projector.
    tau = []
    for i in range(r):
        diff = lattice.b_basis[i] - projector_pi(lattice.b_basis[i], base_point)
        row = _expand_over(diff, lattice.a_basis)
        tau.append(row)
    n = r
    one = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    m2 = _mat_add(one, _mat_neg(linalg.mat_mul(xrows, tau)))
    rmat = linalg.mat_mul(tau, linalg.mat_inv(m2))
    dm = DarbouxMatrices(xrows, tau, kappa, rmat, a_proj, list(lattice.b_basis))
    return dm


def _form_fingerprint(f: RationalFunction) -> Dict[Tuple[Any, int], Any]:
    """Coefficients of a rational form over its pole/polynomial basis."""
    out: Dict[Tuple[Any, int], Any] = {}
    pf = partial_fractions(f)
    for (a, k), c in pf.parts.items():
        out[("pole", a, k)] = c
    for k, c in enumerate(pf.poly.c):
        if not is_zero(c):
            out[("poly", k, 0)] = c
    return out


def _expand_over(cycle: GeneralizedCycle, basis: List[GeneralizedCycle]) -> List[Any]:
    """Write a cycle as a combination of basis cycles (exact, atom-wise)."""
    atoms: List[Atom] = []
    for b in basis + [cycle]:
        for a in b.terms:
            if a not in atoms:
                atoms.append(a)
    mat = [[b.terms.get(a, Fraction(0)) for b in basis] for a in atoms]
    rhs = [cycle.terms.get(a, Fraction(0)) for a in atoms]
    sol = linalg.solve(mat, rhs)
    if sol is None:
        raise ValueError("cycle not in the span of the basis")
    return sol


# -- prepotential -----------------------------------------------------------------------

def prepotential_f0(curve: SpectralCurve, lattice: LatticeData,
                    base_point: Optional[Fraction] = None) -> LogScalar:
    """F0 polarized along the B-side of the lattice:

        F0 = (1/4 pi i) sum_i (int_{A''_i} y) (int_{B_i} y)
           = (1/2) sum_i t_i eta_i

    with t_i = (1/2pi i) A''-periods of y (plain residues) and eta_i the
    B-periods (possibly log-valued for third-kind cycles).
    """
    if lattice.rank == 0:
        return LogScalar.of(Fraction(0))
    dm = darboux_project(lattice, base_point)
    total = LogScalar.of(Fraction(0))
    y = curve.y_form
    for app, b in zip(dm.a_proj, dm.b_basis):
        per_a = pair(curve, app, y)
        if per_a.logs or not is_zero(per_a.const):
            raise ValueError("A''-period of y is not a pure residue")
        t_i = per_a.ipi / 2  # strip the 2 pi i
        eta = pair(curve, b, y)
        total = total + eta * t_i * Fraction(1, 2)
    return total


def f0_lagrangian_shift(times: List[Any], beta: List[List[Any]],
                        times_new: Optional[List[Any]] = None) -> LogScalar:
    """Change of F0 under an integer symplectic change of Lagrangian:
    pi i sum_ij t~_i beta_ij t_j, returned as a LogScalar (i pi component)."""
    tnew = times if times_new is None else times_new
    acc = Fraction(0)
    for i, ti in enumerate(tnew):
        for j, tj in enumerate(times):
            acc = acc + ti * beta[i][j] * tj
    return LogScalar(Fraction(0), (), acc)
