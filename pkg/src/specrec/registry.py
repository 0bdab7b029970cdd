"""Built-in spectral curves used throughout the paper-scale test corpus.

Every registry curve has rational special points, so the whole exact
pipeline applies.  Local-coordinate branch choices and the time-weighting
convention at poles of x (KP local coordinate vs potential coefficients)
are declared per curve in ``pole_data``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from .algebra import Poly, RationalFunction
from .curve import INF, FormalX, SpectralCurve, UnsupportedCurveError

F = Fraction


def _z() -> RationalFunction:
    return RationalFunction.variable("z")


def airy(germ_order: int = 36) -> SpectralCurve:
    """x = z^2, yhat = z, y = 2 z^2 dz; single ramification point at 0."""
    z = _z()
    pole_data = [{
        "point": INF, "xi": "1/z", "x_order": 2, "kind": "kp",
    }]
    return SpectralCurve("airy", z ** 2, z, germ_order=germ_order,
                         pole_data=pole_data, meta={"family": "kdv"})


def gaussian(germ_order: int = 36) -> SpectralCurve:
    """x = z + 1/z, yhat = 1/z; one-matrix-model curve with V = x^2/2."""
    z = _z()
    pole_data = [
        {"point": F(0), "xi": "1/x", "x_order": 1, "kind": "mm"},
        {"point": INF, "xi": "1/x", "x_order": 1, "kind": "mm"},
    ]
    return SpectralCurve("gaussian", z + 1 / z, 1 / z, germ_order=germ_order,
                         pole_data=pole_data, meta={"family": "maps", "d": 1})


def maps_curve(u: Sequence[Any] = (F(-5), F(2)), alpha: Any = F(0),
               gamma: Any = F(1), germ_order: int = 36) -> SpectralCurve:
    """Matrix-model curve x = alpha + gamma(z + 1/z), yhat = sum u_k z^-k.

    The default coefficients give one rational nodal pair (2, 1/2).
    """
    z = _z()
    yh = RationalFunction.const(0, "z")
    for k, uk in enumerate(u, start=1):
        yh = yh + uk * z ** (-k)
    x = alpha + gamma * (z + 1 / z)
    pole_data = [
        {"point": F(0), "xi": "1/x", "x_order": 1, "kind": "mm"},
        {"point": INF, "xi": "1/x", "x_order": 1, "kind": "mm"},
    ]
    return SpectralCurve("maps", x, yh, germ_order=germ_order,
                         pole_data=pole_data,
                         meta={"family": "maps", "d": len(u),
                               "u": tuple(F(v) for v in u),
                               "alpha": F(alpha), "gamma": F(gamma)})


def fuchsian3(a0: Any = F(2), a1: Any = F(2), ai: Any = F(5),
              germ_order: int = 36) -> SpectralCurve:
    """Three-point Fuchsian sphere with charges (a0, a1, ai).

    Exact mode needs the discriminant product
    (a0+a1+ai)(a0-a1-ai)(a0+a1-ai)(a0-a1+ai) to be a rational square; the
    default (2, 2, 5) gives A = 15 and rational y-poles.
    """
    a0, a1, ai = F(a0), F(a1), F(ai)
    A2 = a0 ** 4 + a1 ** 4 + ai ** 4 - 2 * (a0 * a1) ** 2 - 2 * (a0 * ai) ** 2 - 2 * (a1 * ai) ** 2
    A = _sqrt_fraction(A2)
    z = _z()
    c = (ai ** 2 + a0 ** 2 - a1 ** 2) / (2 * ai ** 2)
    g = A / (4 * ai ** 2)
    x = c + g * (z + 1 / z)
    b = ((a1 + ai) ** 2 - a0 ** 2) / A          # x(b) = 1
    a = -((a1 - ai) ** 2 - a0 ** 2) / A         # candidate for x(a) = 0
    if x.eval(a) != 0:
        a = 1 / a
    if x.eval(a) != 0 or x.eval(b) != 1:
        raise UnsupportedCurveError("fuchsian3 charge points are not rational")
    y = (a0 * (1 / (z - a) - 1 / (z - 1 / a))
         + a1 * (1 / (z - b) - 1 / (z - 1 / b))
         + ai / z)
    xextra = x.derivative()
    yhat = y / xextra
    # orientation: yhat(sigma) = -yhat must hold; flip the a0-pair if needed
    curve = SpectralCurve("fuchsian3", x, yhat, germ_order=germ_order)
    sig = curve.global_deck()
    if not (yhat.compose(sig) + yhat).is_zero():
        y = (a0 * (1 / (z - 1 / a) - 1 / (z - a))
             + a1 * (1 / (z - b) - 1 / (z - 1 / b))
             + ai / z)
        yhat = y / xextra
    pole_data = [
        {"point": a, "xi": "z-p", "x_order": 1, "kind": "kp", "charge": a0},
        {"point": 1 / a, "xi": "z-p", "x_order": 1, "kind": "kp", "charge": -a0},
        {"point": b, "xi": "z-p", "x_order": 1, "kind": "kp", "charge": a1},
        {"point": 1 / b, "xi": "z-p", "x_order": 1, "kind": "kp", "charge": -a1},
        {"point": F(0), "xi": "1/x", "x_order": 1, "kind": "kp", "charge": ai},
        {"point": INF, "xi": "1/x", "x_order": 1, "kind": "kp", "charge": -ai},
    ]
    return SpectralCurve("fuchsian3", x, yhat, germ_order=germ_order,
                         pole_data=pole_data,
                         meta={"family": "fuchsian", "charges": (a0, a1, ai),
                               "A": A, "z0_pair": (a, 1 / a), "z1_pair": (b, 1 / b)})


def hurwitz(c: Sequence[Any] = (F(1), F(4)), germ_order: int = 36) -> SpectralCurve:
    """Weighted-Hurwitz curve for S(z) = z and polynomial G(z) = prod(1 + c_k z).

    x = z/G(z), yhat = G(z); ramification points are the rational roots of
    G(z) - z G'(z).
    """
    z = _z()
    G = RationalFunction.const(1, "z")
    for ck in c:
        G = G * (1 + F(ck) * z)
    x = z / G
    yhat = G
    pole_data = [{"point": -1 / F(ck), "xi": "1/x", "x_order": 1, "kind": "kp",
                  "c": F(ck)} for ck in c]
    return SpectralCurve("hurwitz", x, yhat, germ_order=germ_order,
                         pole_data=pole_data,
                         meta={"family": "hurwitz", "c": tuple(F(v) for v in c)})


def lambert(germ_order: int = 30) -> SpectralCurve:
    """Simple-Hurwitz (Lambert) curve x = z e^-z, y = (1 - z) dz.

    x is transcendental: the curve carries d log x = 1/z - 1 and exact
    series data instead of a rational plane model.
    """
    z = _z()
    fx = FormalX("lambert", 1 / z - 1, (F(1),), ((F(1), F(0)),), -z)
    return SpectralCurve("lambert", fx, None, y_form=1 - z,
                         germ_order=germ_order, meta={"family": "hurwitz-simple"})


REGISTRY = {
    "airy": airy,
    "gaussian": gaussian,
    "maps": maps_curve,
    "fuchsian3": fuchsian3,
    "hurwitz": hurwitz,
    "lambert": lambert,
}


def load_curve(name: str, germ_order: Optional[int] = None, **params) -> SpectralCurve:
    if name not in REGISTRY:
        raise KeyError(f"unknown registry curve {name!r}")
    kw: Dict[str, Any] = dict(params)
    if germ_order is not None:
        kw["germ_order"] = germ_order
    return REGISTRY[name](**kw)


def _sqrt_fraction(q: Fraction) -> Fraction:
    import math

    if q < 0:
        raise UnsupportedCurveError("negative discriminant: irrational charge data")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise UnsupportedCurveError(f"irrational square root of {q}")
    return Fraction(rn, rd)
