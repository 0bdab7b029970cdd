"""Eynard-Orantin topological recursion with exact residue extraction.

Internally the table stores invariants produced by the recursion kernel

    K_a(z0, z) = (int_{sigma(z)}^{z} B(z0, .)) / (2 (w01(z) - w01(sigma(z))))

which is the convention all partition-function machinery (loop equations,
deformations, wave functions) is built on.  The published table of the
reference values uses the opposite kernel sign; the two systems differ by
``(-1)^n`` on the stable invariants, and ``omega`` returns the published
normalization while ``omega_internal`` returns the machine one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .algebra import LaurentSeries, MultiDifferential, RationalFunction, TensorSeries
from .algebra.multidiff import TermKey, _expand_pole
from .algebra.partfrac import ratfunc_series
from .algebra.scalars import LogScalar, is_zero
from .curve import RamificationPoint, SpectralCurve, UnsupportedCurveError


def residue_window(g: int, n: int) -> int:
    """Laurent window used at ramification points for the (g, n) target."""
    chi = 2 * g - 2 + n
    return 2 * (3 * chi + 2) + 8


class OmegaTable:
    """Memoized omega_{g,n} table for one spectral curve.

    Entries are exact multidifferentials; recomputation is deterministic
    (ramification points are processed in sorted order, term dicts are
    canonical).  omega_{0,1} = y and omega_{0,2} = B are held by the curve,
    not the table.
    """

    def __init__(self, curve: SpectralCurve):
        self.curve = curve
        self._memo: Dict[Tuple[int, int], MultiDifferential] = {}
        self._point_cache: Dict[Tuple[Fraction, int], dict] = {}

    # -- public surface -----------------------------------------------------
    def omega(self, g: int, n: int) -> MultiDifferential:
        """Published-normalization invariant ((-1)^n times the internal one)."""
        w = self.omega_internal(g, n)
        return w if n % 2 == 0 else -w

    def omega_internal(self, g: int, n: int) -> MultiDifferential:
        if g < 0 or n < 1 or 2 * g - 2 + n <= 0:
            raise ValueError("omega table holds stable invariants only; "
                             "omega_{0,1}=y and omega_{0,2}=B live on the curve")
        key = (g, n)
        if key not in self._memo:
            self._memo[key] = self._compute(g, n)
        return self._memo[key]

    # -- local data at a ramification point ----------------------------------
    def _point_data(self, r: RamificationPoint, window: int) -> dict:
        key = (r.location, window)
        if key in self._point_cache:
            return self._point_cache[key]
        a = r.location
        s = self.curve.deck_at(a, window)
        sp = s.derivative()
        y_here = ratfunc_series(self.curve.y_form, a, window)
        y_sig = _compose_ratfunc(self.curve.y_form, a, s, window) * sp
        den = (y_here - y_sig) * 2
        dinv = den.inverse()
        # kernel numerators u^m - s(u)^m
        powers_u: List[LaurentSeries] = [LaurentSeries.const(Fraction(1), window)]
        powers_s: List[LaurentSeries] = [LaurentSeries.const(Fraction(1), window)]
        u = LaurentSeries.u(window)
        mmax = window - 2
        for m in range(1, mmax + 1):
            powers_u.append(powers_u[-1] * u)
            powers_s.append(powers_s[-1] * s)
        data = {"a": a, "s": s, "sp": sp, "dinv": dinv,
                "powers_u": powers_u, "powers_s": powers_s, "window": window}
        self._point_cache[key] = data
        return data

    # -- the recursion --------------------------------------------------------
    def _compute(self, g: int, n: int) -> MultiDifferential:
        spectators = n - 1
        window = residue_window(g, n)
        cap = max(6 * g - 4 + 2 * n, 2) + 2
        total: Dict[TermKey, Any] = {}
        for r in sorted(self.curve.ramification_points(), key=lambda rp: rp.location):
            pd = self._point_data(r, window)
            bracket = self._bracket(g, spectators, pd, cap)
            a = pd["a"]
            dinv = pd["dinv"]
            for rest_key, series in bracket.data.items():
                c = series * dinv
                vmin = c.valuation()
                if vmin >= 0:
                    continue
                if -vmin + 1 >= len(pd["powers_u"]):
                    raise UnsupportedCurveError("residue window too small; "
                                                "increase germ_order")
                for m in range(1, -vmin + 1):
                    num = pd["powers_u"][m] - pd["powers_s"][m]
                    res = (num * c).residue()
                    if is_zero(res):
                        continue
                    out_key = ((a, m + 1),) + rest_key
                    total[out_key] = total.get(out_key, Fraction(0)) + res
        return MultiDifferential(n, {k: v for k, v in total.items() if not is_zero(v)})

    def _bracket(self, g: int, spectators: int, pd: dict, cap: int) -> TensorSeries:
        """The recursion bracket as a tensor series in the local variable.

        Includes the du^2 jacobians of the two recursion legs.  ``cap`` bounds
        the spectator pole order contributed by omega_{0,2} legs (the target's
        maximal pole order; higher orders cannot survive the residue).
        """
        window = pd["window"]
        out = TensorSeries(spectators, window)
        # omega_{g-1, spectators+2}(z, sigma z, J)
        if g >= 1:
            if (g - 1, spectators + 2) == (0, 2):
                out.add((), _b_z_sigma(pd))
            elif 2 * (g - 1) - 2 + spectators + 2 > 0:
                w = self.omega_internal(g - 1, spectators + 2)
                out.iadd(_double_leg(w, pd))
        # split terms, excluding the two omega_{0,1} factors
        for bits in range(1 << spectators):
            idx = tuple(i for i in range(spectators) if bits >> i & 1)
            comp = tuple(i for i in range(spectators) if not bits >> i & 1)
            for h in range(g + 1):
                hp = g - h
                if (h, len(idx)) == (0, 0) or (hp, len(comp)) == (0, 0):
                    continue
                f1 = self._leg_factor(h, idx, pd, False, cap)
                if f1 is None:
                    continue
                f2 = self._leg_factor(hp, comp, pd, True, cap)
                if f2 is None:
                    continue
                prod = f1.mul_tensor(f2)
                out.iadd(_reorder(prod, idx + comp, spectators, window))
        return out

    def _leg_factor(self, h: int, positions: Tuple[int, ...], pd: dict,
                    shifted: bool, cap: int) -> Optional[TensorSeries]:
        """omega_{h, 1+len(positions)} with its first leg on the recursion
        variable (plain or deck-shifted); None when the invariant vanishes."""
        window = pd["window"]
        k = len(positions)
        if (h, 1 + k) == (0, 1):
            return None
        if (h, 1 + k) == (0, 2):
            return _b_with_spectator(pd, shifted, cap)
        if 2 * h - 2 + 1 + k <= 0:
            return None
        w = self.omega_internal(h, 1 + k)
        shift = pd["s"] if shifted else None
        return w.leg_series(0, pd["a"], window, shift)

    # -- direct (0,3) formula -------------------------------------------------
    def omega03_direct(self) -> MultiDifferential:
        """Independent residue formula for omega_{0,3} (published normalization).

        sum_a Res_{z->a} B(z,z1) B(z,z2) B(z,z3) / (dx(z) d yhat(z)), with the
        overall sign tied to the same kernel convention as ``omega``.
        """
        curve = self.curve
        if curve.x is None:
            raise UnsupportedCurveError("omega03_direct needs rational x and yhat")
        if curve.yhat.derivative().is_zero():
            raise UnsupportedCurveError("d(yhat) vanishes identically")
        window = residue_window(0, 3)
        total: Dict[TermKey, Any] = {}
        dx = curve.dx()
        dyh = curve.yhat.derivative()
        for r in sorted(curve.ramification_points(), key=lambda rp: rp.location):
            a = r.location
            den = ratfunc_series(dx * dyh, a, window)
            dinv = den.inverse()
            # B(z, w) leg expansions around z = a + u: sum_m (m+1) u^m per (a, m+2)
            b_leg = _b_with_spectator_raw(a, window, cap=6)
            prod3 = b_leg.mul_tensor(b_leg).mul_tensor(b_leg)
            for key, series in prod3.data.items():
                c = series * dinv
                res = c.residue()
                if not is_zero(res):
                    total[key] = total.get(key, Fraction(0)) + res
        return MultiDifferential(3, {k: v for k, v in total.items() if not is_zero(v)})


def _compose_ratfunc(f: RationalFunction, a: Fraction, s: LaurentSeries,
                     window: int) -> LaurentSeries:
    """Series of f(a + s(u)) for a deck germ s."""
    base = ratfunc_series(f, a, window)
    return base.compose(s)


def _b_z_sigma(pd: dict) -> LaurentSeries:
    """B(z, sigma(z)) with both legs substituted: s'(u)/(u - s(u))^2 du^2."""
    s = pd["s"]
    u = LaurentSeries.u(pd["window"])
    diff = u - s
    return pd["sp"] * (diff.inverse() ** 2)


def _b_with_spectator_raw(a: Fraction, window: int, cap: int) -> TensorSeries:
    """B(z, w) with z = a + u and w a spectator: sum_m (m+1) u^m x (a, m+2)."""
    out = TensorSeries(1, window)
    for m in range(min(window, cap)):
        out.add(((a, m + 2),), LaurentSeries.u(window, m, Fraction(m + 1)))
    return out


def _b_with_spectator(pd: dict, shifted: bool, cap: int) -> TensorSeries:
    window = pd["window"]
    if not shifted:
        return _b_with_spectator_raw(pd["a"], window, cap)
    out = TensorSeries(1, window)
    sp = pd["sp"]
    for m in range(min(window, cap, len(pd["powers_s"]))):
        out.add(((pd["a"], m + 2),), pd["powers_s"][m] * sp * Fraction(m + 1))
    return out


def _double_leg(w: MultiDifferential, pd: dict) -> TensorSeries:
    """omega(z, sigma(z), rest): both recursion legs substituted."""
    window = pd["window"]
    a = pd["a"]
    s = pd["s"]
    sp = pd["sp"]
    out = TensorSeries(w.arity - 2, window)
    for key, c in w.terms.items():
        b0, k0 = key[0]
        b1, k1 = key[1]
        f0 = _expand_pole(a, b0, k0, window, None)
        f1 = _expand_pole(a, b1, k1, window, s) * sp
        out.add(key[2:], f0 * f1 * c)
    return out


def _reorder(ts: TensorSeries, positions: Tuple[int, ...], arity: int,
             window: int) -> TensorSeries:
    """Scatter tensor legs back to their spectator positions."""
    out = TensorSeries(arity, window)
    for key, series in ts.data.items():
        nk: List = [None] * arity
        for src, dst in enumerate(positions):
            nk[dst] = key[src]
        out.add(tuple(nk), series)
    return out


# -- free energies -------------------------------------------------------------

def free_energy(table: OmegaTable, g: int) -> Any:
    """F_g for g >= 1 (exact scalar; F_1 is log-valued).

    F_g = (1/(2-2g)) sum_a Res_a F01 omega_{g,1} for g >= 2 (dilaton), and
    F_1 = (1/48) sum_a log(y1(a)^2) normalized so the Airy curve gives 0.
    """
    if g < 1:
        raise ValueError("use cycles.prepotential_f0 for genus 0")
    curve = table.curve
    if g == 1:
        return _f1(curve)
    w = table.omega_internal(g, 1)
    total = Fraction(0)
    for r in sorted(curve.ramification_points(), key=lambda rp: rp.location):
        a = r.location
        orders = [k for ((pt, k),) in w.terms if pt == a]
        need = (max(orders) if orders else 2) + 2
        f01 = ratfunc_series(curve.y_form, a, need).integrate()
        leg = w.leg_series(0, a, need)
        ser = leg.data.get((), LaurentSeries.zero(need))
        total = total + (f01 * ser).residue()
    return total * Fraction(1, 2 - 2 * g)


def _f1(curve: SpectralCurve) -> LogScalar:
    out = LogScalar.of(Fraction(0))
    for r in sorted(curve.ramification_points(), key=lambda rp: rp.location):
        a = r.location
        win = 8
        s = r.deck.truncate(win)
        if curve.x is not None:
            yh = ratfunc_series(curve.yhat, a, win)
            yh_s = _compose_ratfunc(curve.yhat, a, s, win)
            num = (yh - yh_s) ** 2
            den = (ratfunc_series(curve.x, a, win) - curve.x.eval(a)) * 4
            y1sq = (num / den).coeff(0)
            out = out + LogScalar.log(y1sq, Fraction(1, 48))
        else:
            # yhat = w/x with w = y_form/dlogx rational; x(z)^2 (x - x(a)) =
            # x(a)^3 e^{2 dG} (e^{dG} - 1) with dG = log x(a+u) - log x(a)
            w = curve.y_form / curve.formal_x.dlogx
            wd = ratfunc_series(w, a, win) - _compose_ratfunc(w, a, s, win)
            dg = ratfunc_series(curve.formal_x.dlogx, a, win - 1).integrate()
            from .algebra.series import exp_series

            eser = exp_series(dg * 2)
            em1 = exp_series(dg) - 1
            y1sq_xa3 = ((wd ** 2) / (eser * em1 * 4)).coeff(0)
            out = out + LogScalar.log(y1sq_xa3, Fraction(1, 48)) \
                - curve.logx_value(a) * Fraction(3, 48)
    return out


def homogeneity_check(curve: SpectralCurve, g: int, n: int,
                      max_table: Optional[OmegaTable] = None) -> bool:
    """Exact identity omega_{g,n}(lam S) = lam^(2-2g-n) omega_{g,n}(S)."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("homogeneity check applies to stable invariants")
    lam = RationalFunction.variable("lam")
    scaled = curve.rescale(lam)
    t0 = max_table if max_table is not None else OmegaTable(curve)
    t1 = OmegaTable(scaled)
    w0 = t0.omega(g, n)
    w1 = t1.omega(g, n)
    factor = lam ** (2 - 2 * g - n)
    expect = MultiDifferential(n, {k: factor * c for k, c in w0.terms.items()})
    return w1 == expect
