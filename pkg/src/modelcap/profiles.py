"""Piecewise-analytic radial profiles.

A profile is an ordered list of segments covering ``(0, inf)``.  Each
segment pairs a *shape* (``c t^b``, ``c e^{lt}``, a polynomial, a PCHIP
table, ...) with a half-open interval ``[lo, hi)``.  Evaluation is
right-continuous at breakpoints.

Besides values and derivatives, shapes know the integral of their own
powers, ``int h(t)^k dt``, in closed form whenever one exists.  Every
metric quantity of a model manifold (area, volume, ``a_p``) is such a
power of the warping function, so most geometric integrals never touch
numerical quadrature.

Text form, one segment per line::

    segment <kind> <params...> <t_lo> <t_hi|inf>

with kinds ``power c b``, ``exponential c l``, ``linear H``,
``constant c``, ``sinh c l``, ``poly c0 c1 ...``,
``tabulated t1,t2,... v1,v2,...`` and ``alternating b H width``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import PchipInterpolator
from scipy.special import comb

from .numerics import DEFAULT_CONFIG, QuadratureConfig, TailModel, integrate, integrate_improper

__all__ = [
    "DomainError",
    "BreakpointError",
    "ProfileParseError",
    "Power",
    "Linear",
    "Constant",
    "Exponential",
    "Sinh",
    "Poly",
    "Tabulated",
    "Blend",
    "Alternating",
    "Segment",
    "Profile",
    "WarpingProfile",
    "RadialProfile",
    "parse_spec",
    "parse_segment_line",
    "euclidean_profile",
    "cusp_profile",
    "hyperbolic_profile",
    "cylinder_profile",
]

INF = math.inf


class DomainError(ValueError):
    """Argument outside the domain of a radial function."""


class BreakpointError(ValueError):
    """Derivative requested at a breakpoint; carries both one-sided values."""

    def __init__(self, t, left, right):
        super().__init__(f"t={t} is a breakpoint (left {left!r}, right {right!r})")
        self.t = t
        self.left = left
        self.right = right


class ProfileParseError(ValueError):
    def __init__(self, message, segment_index=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if segment_index is not None:
            where.append(f"segment {segment_index}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.segment_index = segment_index
        self.line = line


def _power_antiderivative(n, lo, hi):
    """int_lo^hi t^n dt, allowing hi = inf and lo = 0."""
    if hi == INF:
        if n >= -1:
            return INF
        return -lo ** (n + 1) / (n + 1)
    if lo == 0.0 and n <= -1:
        return INF
    if n == -1:
        return math.log(hi / lo)
    return (hi ** (n + 1) - lo ** (n + 1)) / (n + 1)


# --------------------------------------------------------------------------
# shapes


class Shape:
    kind: ClassVar[str] = ""

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def pow_integral(self, k, lo, hi):
        """Closed form of int_lo^hi shape^k, or None when there is none."""
        return None

    def tail(self, valid_from):
        return TailModel.undetermined(valid_from)

    def kinks(self, lo, hi):
        """Interior points of (lo, hi) where the shape itself is not smooth."""
        return []

    def params(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Power(Shape):
    c: float
    beta: float
    kind: ClassVar[str] = "power"

    def __call__(self, t):
        return self.c * np.power(t, self.beta)

    def derivative(self, t):
        if self.beta == 0:
            return np.zeros_like(np.asarray(t, dtype=float))
        return self.c * self.beta * np.power(t, self.beta - 1)

    def pow_integral(self, k, lo, hi):
        return self.c ** k * _power_antiderivative(self.beta * k, lo, hi)

    def tail(self, valid_from):
        return TailModel.power(-self.beta, valid_from)

    def params(self):
        return (self.c, self.beta)


class Linear(Power):
    """``H t``."""

    kind: ClassVar[str] = "linear"

    def __init__(self, H):
        super().__init__(H, 1.0)

    def params(self):
        return (self.c,)


class Constant(Power):
    kind: ClassVar[str] = "constant"

    def __init__(self, c):
        super().__init__(c, 0.0)

    def params(self):
        return (self.c,)


@dataclass(frozen=True)
class Exponential(Shape):
    c: float
    rate: float
    kind: ClassVar[str] = "exponential"

    def __call__(self, t):
        return self.c * np.exp(self.rate * np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.rate * self(t)

    def pow_integral(self, k, lo, hi):
        lam = k * self.rate
        ck = self.c ** k
        if lam == 0:
            return ck * (hi - lo)
        if hi == INF:
            return INF if lam > 0 else -ck * math.exp(lam * lo) / lam
        return ck * math.exp(lam * lo) * math.expm1(lam * (hi - lo)) / lam

    def tail(self, valid_from):
        return TailModel.exponential(self.rate, valid_from)

    def params(self):
        return (self.c, self.rate)


@dataclass(frozen=True)
class Sinh(Shape):
    """``c sinh(l t)``; the hyperbolic-space profile for ``c = 1/l``."""

    c: float
    rate: float
    kind: ClassVar[str] = "sinh"

    def __call__(self, t):
        return self.c * np.sinh(self.rate * np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.c * self.rate * np.cosh(self.rate * np.asarray(t, dtype=float))

    def pow_integral(self, k, lo, hi):
        if hi == INF or k < 0 or k != int(k):
            return None
        k = int(k)
        # sinh^k = 2^-k sum_j C(k,j) (-1)^j e^{(k-2j) l t}
        total = 0.0
        for j in range(k + 1):
            lam = (k - 2 * j) * self.rate
            w = comb(k, j, exact=True) * (-1) ** j
            if lam == 0:
                total += w * (hi - lo)
            else:
                total += w * (math.exp(lam * hi) - math.exp(lam * lo)) / lam
        return self.c ** k * total / 2 ** k

    def tail(self, valid_from):
        return TailModel.exponential(self.rate, valid_from, exact=False)

    def params(self):
        return (self.c, self.rate)


@dataclass(frozen=True)
class Poly(Shape):
    """Polynomial in absolute ``t`` with coefficients in increasing degree."""

    coeffs: tuple
    kind: ClassVar[str] = "poly"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("poly needs at least one coefficient")

    @property
    def poly(self):
        return Polynomial(self.coeffs)

    def __call__(self, t):
        return self.poly(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.poly.deriv()(np.asarray(t, dtype=float))

    @property
    def degree(self):
        nz = [i for i, c in enumerate(self.coeffs) if c != 0.0]
        return nz[-1] if nz else 0

    def pow_integral(self, k, lo, hi):
        if k < 0 or k != int(k):
            return None
        if hi == INF:
            return 0.0 if not any(self.coeffs) else INF
        anti = (self.poly ** int(k)).integ()
        return float(anti(hi) - anti(lo))

    def tail(self, valid_from):
        if self.degree == 0:
            return TailModel.power(0.0, valid_from)
        return TailModel.power(-self.degree, valid_from, exact=False)

    def params(self):
        return self.coeffs


@dataclass(frozen=True)
class Tabulated(Shape):
    """Monotone-cubic (PCHIP) interpolation of samples, constant beyond the grid."""

    ts: tuple
    values: tuple
    kind: ClassVar[str] = "tabulated"

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        vs = tuple(float(v) for v in self.values)
        if len(ts) != len(vs) or len(ts) < 2:
            raise ValueError("tabulated needs matching grids of at least two points")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("tabulated grid must be strictly increasing")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", vs)

    @property
    def _interp(self):
        return _pchip(self.ts, self.values)

    def __call__(self, t):
        return self._interp(np.clip(np.asarray(t, dtype=float), self.ts[0], self.ts[-1]))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.ts[0]) & (t < self.ts[-1])
        return np.where(inside, self._interp.derivative()(t), 0.0)

    def pow_integral(self, k, lo, hi):
        if k == 1 and hi != INF:
            a, b = self.ts[0], self.ts[-1]
            body = float(self._interp.integrate(min(max(lo, a), b), max(min(hi, b), a)))
            left = max(0.0, min(hi, a) - lo) * self.values[0]
            right = max(0.0, hi - max(lo, b)) * self.values[-1]
            return body + left + right
        return None

    def kinks(self, lo, hi):
        return [t for t in self.ts if lo < t < hi]

    def params(self):
        return (self.ts, self.values)


@lru_cache(maxsize=64)
def _pchip(ts, vs):
    return PchipInterpolator(np.array(ts), np.array(vs), extrapolate=True)


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


def _smoothstep_slope(s):
    inside = (s > 0.0) & (s < 1.0)
    return np.where(inside, 6.0 * s * (1.0 - s), 0.0)


@dataclass(frozen=True)
class Blend(Shape):
    """Monotone C^1 transition from ``start_shape`` to ``end_shape`` over ``[start, start + width]``."""

    start_shape: Shape
    end_shape: Shape
    start: float
    width: float
    kind: ClassVar[str] = "blend"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = _smoothstep((t - self.start) / self.width)
        a, b = self.start_shape(t), self.end_shape(t)
        return a + (b - a) * s

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u = (t - self.start) / self.width
        s = _smoothstep(u)
        a, b = self.start_shape(t), self.end_shape(t)
        da, db = self.start_shape.derivative(t), self.end_shape.derivative(t)
        return da + (db - da) * s + (b - a) * _smoothstep_slope(u) / self.width

    def params(self):
        raise NotImplementedError("blend segments only occur inside alternating shapes")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


@dataclass(frozen=True)
class Alternating(Shape):
    """Periodic alternation between ``t^beta`` and ``H t`` with period 4.

    On each period ``[4j, 4j+4)``::

        [4j, 4j+1-w)      t^beta
        [4j+1-w, 4j+1)    blend up to H t
        [4j+1, 4j+3-w)    H t
        [4j+3-w, 4j+3)    blend down to t^beta
        [4j+3, 4j+4)      t^beta

    so ``h = H t`` on every ``[4j+1, 4j+2]`` and ``h = t^beta`` on every
    ``[4j+3, 4j+4]``.  When ``H >= 1`` and ``t >= 1`` the blends stay
    between the two branches, so ``h >= t^beta``.
    """

    beta: float
    H: float
    width: float = 0.1
    kind: ClassVar[str] = "alternating"

    period: ClassVar[float] = 4.0
    horizon: ClassVar[int] = 32768

    def __post_init__(self):
        if not 0.0 < self.width < 1.0:
            raise ValueError("alternating width must lie in (0, 1)")

    @property
    def _low(self):
        return Power(1.0, self.beta)

    @property
    def _high(self):
        return Linear(self.H)

    def _pieces(self, j):
        """(lo, hi, shape) for period j."""
        s0 = self.period * j
        w = self.width
        low, high = self._low, self._high
        return [
            (s0, s0 + 1 - w, low),
            (s0 + 1 - w, s0 + 1, Blend(low, high, s0 + 1 - w, w)),
            (s0 + 1, s0 + 3 - w, high),
            (s0 + 3 - w, s0 + 3, Blend(high, low, s0 + 3 - w, w)),
            (s0 + 3, s0 + 4, low),
        ]

    def _weight(self, t):
        u = np.mod(t, self.period)
        w = self.width
        up = _smoothstep((u - (1 - w)) / w)
        down = 1.0 - _smoothstep((u - (3 - w)) / w)
        return np.where(u < 1 - w, 0.0,
               np.where(u < 1, up,
               np.where(u < 3 - w, 1.0,
               np.where(u < 3, down, 0.0))))

    def _weight_slope(self, t):
        u = np.mod(t, self.period)
        w = self.width
        up = _smoothstep_slope((u - (1 - w)) / w) / w
        down = -_smoothstep_slope((u - (3 - w)) / w) / w
        return np.where((u >= 1 - w) & (u < 1), up,
               np.where((u >= 3 - w) & (u < 3), down, 0.0))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self._low(t), self._high(t)
        return a + (b - a) * self._weight(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self._low(t), self._high(t)
        da, db = self._low.derivative(t), self._high.derivative(t)
        wgt = self._weight(t)
        return da + (db - da) * wgt + (b - a) * self._weight_slope(t)

    def kinks(self, lo, hi):
        if hi == INF:
            raise ValueError("kinks of an alternating shape need a finite range")
        w = self.width
        out = []
        for j in range(int(lo // self.period), int(hi // self.period) + 1):
            s0 = self.period * j
            out.extend(p for p in (s0 + 1 - w, s0 + 1, s0 + 3 - w, s0 + 3) if lo < p < hi)
        return out

    def _piece_integral(self, k, lo, hi, shape):
        if isinstance(shape, Blend):
            half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
            x = mid + half * _GL_NODES
            return half * float(_GL_WEIGHTS @ np.power(shape(x), k))
        return shape.pow_integral(k, lo, hi)

    def _range_integral(self, k, lo, hi):
        """Integral over [lo, hi] inside a single period."""
        j = int(lo // self.period)
        total = 0.0
        for plo, phi, shape in self._pieces(j):
            a, b = max(lo, plo), min(hi, phi)
            if b > a:
                total += self._piece_integral(k, a, b, shape)
        return total

    def period_integrals(self, k, count):
        """``int`` of ``h^k`` over each of the first ``count`` periods, vectorised."""
        return _period_integrals(self, float(k), int(count))

    def _lead_decay(self, k):
        # larger branch dominates: t^beta for k < 0, H t for k > 0
        return -k * self.beta if k < 0 else -k

    def pow_integral(self, k, lo, hi):
        P = self.period
        ja = int(lo // P)
        if hi == INF:
            alpha = self._lead_decay(k)
            if k >= 0 or alpha <= 1:
                return INF
            J = max(self.horizon, 2 * ja + 2)
            I = self.period_integrals(k, J)
            body = self._range_integral(k, lo, P * (ja + 1)) + float(np.sum(I[ja + 1:]))
            D = I[-1] * (P * (J - 1) + 2.0) ** alpha
            return body + D * (P * J) ** (1 - alpha) / (P * (alpha - 1))
        jb = int(hi // P)
        if ja == jb:
            return self._range_integral(k, lo, hi)
        I = self.period_integrals(k, jb + 1)
        return (self._range_integral(k, lo, P * (ja + 1)) + float(np.sum(I[ja + 1:jb]))
                + self._range_integral(k, P * jb, hi))

    def tail(self, valid_from):
        return TailModel.oscillating(-self.beta, -1.0, valid_from)

    def params(self):
        return (self.beta, self.H, self.width)


@lru_cache(maxsize=32)
def _period_integrals(shape: Alternating, k: float, count: int):
    P, w = shape.period, shape.width
    j = np.arange(count, dtype=float)
    s0 = P * j

    def power_piece(c, b, lo, hi):
        n = b * k
        if n == -1:
            return c ** k * np.log(hi / lo)
        return c ** k * (hi ** (n + 1) - lo ** (n + 1)) / (n + 1)

    def blend_piece(start, rising):
        x = start[:, None] + 0.5 * w * (_GL_NODES[None, :] + 1.0)
        s = _smoothstep((x - start[:, None]) / w)
        if not rising:
            s = 1.0 - s
        a, b = np.power(x, shape.beta), shape.H * x
        return 0.5 * w * (np.power(a + (b - a) * s, k) @ _GL_WEIGHTS)

    # period 0 starts at the pole; its entry is never read by callers
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        first = power_piece(1.0, shape.beta, np.maximum(s0, 1e-300), s0 + 1 - w)
    total = (first
             + blend_piece(s0 + 1 - w, True)
             + power_piece(shape.H, 1.0, s0 + 1, s0 + 3 - w)
             + blend_piece(s0 + 3 - w, False)
             + power_piece(1.0, shape.beta, s0 + 3, s0 + 4))
    total.setflags(write=False)
    return total


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Segment:
    shape: Shape
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"segment needs lo < hi, got [{self.lo}, {self.hi})")

    def render(self):
        parts = ["segment", self.shape.kind]
        for p in self.shape.params():
            if isinstance(p, tuple):
                parts.append(",".join(repr(float(x)) for x in p))
            else:
                parts.append(repr(float(p)))
        parts += [repr(float(self.lo)), "inf" if self.hi == INF else repr(float(self.hi))]
        return " ".join(parts)


def _positivity_samples(seg: Segment):
    lo = seg.lo if seg.lo > 0 else min(1e-9, 1e-6 * seg.hi)
    hi = seg.hi if seg.hi < INF else lo + 600.0
    pts = list(np.linspace(lo, hi, 65)[:-1])
    if seg.hi == INF:
        pts += list(lo + np.geomspace(1.0, 600.0, 25))
    else:
        pts.append(np.nextafter(seg.hi, seg.lo))
    if isinstance(seg.shape, Tabulated):
        pts += [t for t in seg.shape.ts if seg.lo <= t < seg.hi]
    if isinstance(seg.shape, Alternating):
        # every piece type occurs in the first few periods; later ones scale
        hi = min(hi, seg.lo + 64.0)
        pts = list(np.linspace(lo, hi, 2049))
    return np.array(pts)


class Profile:
    """Piecewise radial function on ``(0, inf)``."""

    positive: ClassVar[bool] = False

    def __init__(self, segments: Sequence[Segment], smoothing_width: Optional[float] = None):
        segments = list(segments)
        if not segments:
            raise ProfileParseError("profile needs at least one segment")
        if segments[0].lo != 0.0:
            raise ProfileParseError("first segment must start at 0", 0)
        for i, (a, b) in enumerate(zip(segments, segments[1:]), start=1):
            if b.lo < a.hi:
                raise ProfileParseError(f"segment overlaps previous one at {b.lo}", i)
            if b.lo > a.hi:
                raise ProfileParseError(f"gap between {a.hi} and {b.lo}", i)
        if segments[-1].hi != INF:
            raise ProfileParseError("last segment must extend to inf", len(segments) - 1)
        if self.positive:
            for i, seg in enumerate(segments):
                vals = np.asarray(seg.shape(_positivity_samples(seg)), dtype=float)
                if not np.all(vals > 0):
                    raise ProfileParseError("warping function must be positive", i)
        self.segments = tuple(segments)
        self.smoothing_width = smoothing_width
        self._los = [s.lo for s in self.segments]

    def __repr__(self):
        return f"{type(self).__name__}({len(self.segments)} segments)"

    @property
    def breakpoints(self):
        return tuple(s.lo for s in self.segments[1:])

    def kinks(self, a, b):
        """Every point of (a, b) where the profile may fail to be smooth."""
        out = [p for p in self.breakpoints if a < p < b]
        for seg in self.segments:
            lo, hi = max(a, seg.lo), min(b, seg.hi)
            if hi > lo:
                out.extend(seg.shape.kinks(lo, hi))
        return sorted(set(out))

    def index(self, t):
        return bisect.bisect_right(self._los, t) - 1

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0) or np.any(np.isnan(t)):
            raise DomainError("radial profiles are defined for t > 0")
        return t

    def __call__(self, t):
        t = self._check(t)
        if t.ndim == 0:
            return float(self.segments[self.index(float(t))].shape(t))
        idx = np.searchsorted(self._los, t, side="right") - 1
        out = np.empty_like(t)
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self.segments[i].shape(t[mask])
        return out

    def is_breakpoint(self, t):
        return t in self.breakpoints or bool(self.segments[self.index(t)].shape.kinks(
            np.nextafter(t, 0), np.nextafter(t, INF)))

    def one_sided_derivatives(self, t):
        t = float(self._check(t))
        right = float(self.segments[self.index(t)].shape.derivative(t))
        left_seg = self.segments[self.index(np.nextafter(t, 0))]
        if left_seg.shape.kinks(np.nextafter(t, 0), np.nextafter(t, INF)):
            left = float(left_seg.shape.derivative(np.nextafter(t, 0)))
        else:
            left = float(left_seg.shape.derivative(t))
        return left, right

    def derivative(self, t):
        """Analytic derivative; raises :class:`BreakpointError` at breakpoints."""
        t = float(self._check(t))
        if self.is_breakpoint(t):
            left, right = self.one_sided_derivatives(t)
            raise BreakpointError(t, left, right)
        return float(self.segments[self.index(t)].shape.derivative(t))

    def pow_integral(self, k, a, b, cfg: Optional[QuadratureConfig] = None):
        """``int_a^b profile(t)^k dt``; ``b`` may be ``inf``."""
        if b < a:
            raise ValueError("pow_integral needs a <= b")
        cfg = cfg or DEFAULT_CONFIG
        total = 0.0
        for seg in self.segments:
            lo, hi = max(a, seg.lo), min(b, seg.hi)
            if not hi > lo:
                continue
            try:
                val = seg.shape.pow_integral(k, lo, hi)
            except OverflowError:
                # h^k > 0, so an overflowing closed form is a positive infinity
                return INF
            if val is None:
                shape = seg.shape

                def integrand(t, shape=shape):
                    return np.power(shape(t), k)

                if hi == INF:
                    res = integrate_improper(integrand, lo, shape.tail(max(lo, 1.0)).raised(k), cfg)
                    if res.converges is False:
                        return INF
                    if res.value is None:
                        raise ValueError(f"cannot evaluate tail of {shape.kind} segment")
                    val = res.value
                else:
                    val = integrate(integrand, lo, hi, cfg, shape.kinks(lo, hi))[0]
            total += val
        return total

    def tail_class(self) -> TailModel:
        last = self.segments[-1]
        return last.shape.tail(last.lo if last.lo > 0 else 1.0)

    def render(self) -> str:
        return "\n".join(seg.render() for seg in self.segments) + "\n"


class WarpingProfile(Profile):
    """Strictly positive warping function ``h`` of a model metric ``dt^2 + h^2 dtheta^2``.

    ``h(0) = 0`` and ``h'(0+) = 1`` are assumed, not enforced.
    """

    positive = True


class RadialProfile(Profile):
    """Signed radial function built from the same segments."""


# --------------------------------------------------------------------------
# text form

_ARITY = {"power": 2, "exponential": 2, "linear": 1, "constant": 1, "sinh": 2, "alternating": 3}


def _float(tok):
    if tok.lower() in ("inf", "+inf", "infinity"):
        return INF
    return float(tok)


def parse_segment_line(tokens, index=None, line=None) -> Segment:
    """Build a segment from the tokens after ``segment``."""
    if len(tokens) < 3:
        raise ProfileParseError("segment needs a kind, parameters and an interval", index, line)
    kind, params, (lo_tok, hi_tok) = tokens[0], tokens[1:-2], tokens[-2:]
    try:
        lo, hi = _float(lo_tok), _float(hi_tok)
        if kind in _ARITY:
            if len(params) != _ARITY[kind]:
                raise ProfileParseError(
                    f"{kind} takes {_ARITY[kind]} parameters, got {len(params)}", index, line)
            vals = [float(p) for p in params]
            shape = {
                "power": lambda: Power(*vals),
                "exponential": lambda: Exponential(*vals),
                "linear": lambda: Linear(*vals),
                "constant": lambda: Constant(*vals),
                "sinh": lambda: Sinh(*vals),
                "alternating": lambda: Alternating(*vals),
            }[kind]()
        elif kind == "poly":
            shape = Poly(tuple(float(p) for p in params))
        elif kind == "tabulated":
            if len(params) != 2:
                raise ProfileParseError("tabulated takes a t-grid and a value grid", index, line)
            shape = Tabulated(tuple(map(float, params[0].split(","))),
                              tuple(map(float, params[1].split(","))))
        else:
            raise ProfileParseError(f"unknown segment kind {kind!r}", index, line)
        return Segment(shape, lo, hi)
    except ProfileParseError:
        raise
    except ValueError as exc:
        raise ProfileParseError(str(exc), index, line) from None


def _segments_from_text(text):
    segments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens or tokens[0] != "segment":
            continue
        segments.append(parse_segment_line(tokens[1:], len(segments), lineno))
    return segments


def parse_spec(text: str, kind=WarpingProfile) -> Profile:
    """Parse the ``segment`` lines of a manifold description.

    Other directives (``dim``, ``base``) are ignored here.
    """
    segments = _segments_from_text(text)
    smoothing = next((s.shape.width for s in segments if isinstance(s.shape, Alternating)), None)
    return kind(segments, smoothing_width=smoothing)


# --------------------------------------------------------------------------
# standard profiles


def euclidean_profile():
    return WarpingProfile([Segment(Power(1.0, 1.0), 0.0, INF)])


def cusp_profile():
    """``h(t) = e^{-t}`` for ``t >= 1``, continued linearly to the pole."""
    return WarpingProfile([
        Segment(Linear(math.exp(-1.0)), 0.0, 1.0),
        Segment(Exponential(1.0, -1.0), 1.0, INF),
    ])


def hyperbolic_profile(curvature_scale=1.0):
    """``h(t) = sinh(l t) / l``."""
    lam = float(curvature_scale)
    return WarpingProfile([Segment(Sinh(1.0 / lam, lam), 0.0, INF)])


def cylinder_profile(c=1.0):
    return WarpingProfile([Segment(Constant(c), 0.0, INF)])
