"""Metric quantities of rotationally symmetric model manifolds.

A model manifold carries the metric ``dt^2 + h(t)^2 dtheta^2`` on
``(0, inf) x S^{m-1}``.  Everything radial reduces to powers of ``h``:

* ``A(t) = omega_{m-1} h(t)^{m-1}``    area of the geodesic sphere
* ``V(t) = int_0^t A``                 volume of the geodesic ball
* ``a_p(t) = A(t)^{-1/(p-1)}``
* ``b_p(t) = ((t - r1) / (V(t) - V(r1)))^{1/(p-1)}``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn

from .numerics import DEFAULT_CONFIG, QuadratureConfig, TailModel
from .profiles import (
    INF,
    BreakpointError,
    DomainError,
    ProfileParseError,
    WarpingProfile,
    cusp_profile,
    cylinder_profile,
    euclidean_profile,
    hyperbolic_profile,
    parse_spec,
)

__all__ = [
    "sphere_area",
    "Exponent",
    "as_exponent",
    "ModelManifold",
    "euclidean",
    "cusp",
    "hyperbolic",
    "cylinder",
    "parse_manifold",
    "area",
    "volume",
    "volume_between",
    "a_p",
    "a_p_integral",
    "a_p_tail",
    "b_p",
    "EvansPotential",
    "GeodesicRadius",
    "evans_potential",
    "radial_p_laplacian_residual",
]


def sphere_area(m: int) -> float:
    """Area of the unit (m-1)-sphere in R^m."""
    return 2.0 * math.pi ** (m / 2.0) / float(gamma_fn(m / 2.0))


@dataclass(frozen=True)
class Exponent:
    """A Sobolev exponent ``p > 1`` and its conjugate ``q = p/(p-1)``."""

    p: float

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"exponent must exceed 1, got {self.p}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)


def as_exponent(e: Union[Exponent, float]) -> Exponent:
    return e if isinstance(e, Exponent) else Exponent(float(e))


@dataclass(frozen=True)
class ModelManifold:
    m: int
    h: WarpingProfile
    base_radius: float = 1.0
    name: str = ""

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("dimension must be an integer >= 2")
        if not self.base_radius > 0:
            raise ValueError("base_radius must be positive")

    @property
    def omega(self) -> float:
        return sphere_area(self.m)

    def render(self) -> str:
        head = f"dim {self.m}\nbase {self.base_radius!r}\n"
        if self.h.smoothing_width is not None:
            head += f"# smoothing width {self.h.smoothing_width!r}\n"
        return head + self.h.render()


def euclidean(m: int) -> ModelManifold:
    return ModelManifold(m, euclidean_profile(), name=f"R^{m}")


def cusp(m: int = 2) -> ModelManifold:
    return ModelManifold(m, cusp_profile(), name="cusp")


def hyperbolic(m: int) -> ModelManifold:
    return ModelManifold(m, hyperbolic_profile(), name=f"H^{m}")


def cylinder(m: int = 2, c: float = 1.0) -> ModelManifold:
    return ModelManifold(m, cylinder_profile(c), name="cylinder")


def parse_manifold(text: str) -> ModelManifold:
    """Parse ``dim``/``base``/``segment`` lines into a model manifold."""
    m = None
    base = 1.0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        key = tokens[0]
        try:
            if key == "dim":
                m = int(tokens[1])
            elif key == "base":
                base = float(tokens[1])
            elif key != "segment":
                raise ProfileParseError(f"unknown directive {key!r}", line=lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ProfileParseError):
                raise
            raise ProfileParseError(f"bad {key} directive", line=lineno) from None
    if m is None:
        raise ProfileParseError("missing 'dim' directive")
    try:
        return ModelManifold(m, parse_spec(text), base)
    except ProfileParseError:
        raise
    except ValueError as exc:
        raise ProfileParseError(str(exc)) from None


# --------------------------------------------------------------------------
# radial kernels


def _positive(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("radius must be positive")
    return t


def area(M: ModelManifold, t):
    """``A(dB_t) = omega_{m-1} h(t)^{m-1}``."""
    return M.omega * np.power(M.h(_positive(t)), M.m - 1)


def volume_between(M: ModelManifold, a: float, b: float, cfg: Optional[QuadratureConfig] = None) -> float:
    return M.omega * M.h.pow_integral(M.m - 1, a, b, cfg)


def volume(M: ModelManifold, t: float, cfg: Optional[QuadratureConfig] = None) -> float:
    if t < 0:
        raise DomainError("volume needs t >= 0")
    return volume_between(M, 0.0, float(t), cfg) if t > 0 else 0.0


def _kernel_power(M, e):
    return -(M.m - 1) / (e.p - 1.0)


def a_p(M: ModelManifold, e, t):
    """``A(dB_t)^{-1/(p-1)}``."""
    e = as_exponent(e)
    return np.power(area(M, t), -1.0 / (e.p - 1.0))


def a_p_integral(M: ModelManifold, e, a: float, b: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """``int_a^b a_p`` from the closed-form segment integrals; ``b`` may be inf."""
    e = as_exponent(e)
    if a <= 0:
        raise DomainError("a_p integrals start at a positive radius")
    if b < a:
        raise DomainError("a_p integral needs a <= b")
    k = _kernel_power(M, e)
    return M.omega ** (-1.0 / (e.p - 1.0)) * M.h.pow_integral(k, a, b, cfg)


def a_p_tail(M: ModelManifold, e) -> TailModel:
    """Tail class of ``a_p`` derived from the last segment of ``h``."""
    e = as_exponent(e)
    return M.h.tail_class().raised(_kernel_power(M, e))


def b_p(M: ModelManifold, e, r1: float, t, cfg: Optional[QuadratureConfig] = None):
    """``((t - r1)/(V(t) - V(r1)))^{1/(p-1)}`` for ``t > r1``.

    The limit ``t -> r1+`` equals ``a_p(r1)``.
    """
    e = as_exponent(e)
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts <= r1):
        raise DomainError("b_p needs t > r1")
    out = np.empty_like(ts)
    for i, ti in enumerate(ts):
        d = ti - r1
        if d <= 1e-12 * max(1.0, r1):
            out[i] = a_p(M, e, r1)
        else:
            out[i] = (d / volume_between(M, r1, ti, cfg)) ** (1.0 / (e.p - 1.0))
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# exhaustions


class EvansPotential:
    """``f(r) = int_{base}^r a_p``, p-harmonic outside the base ball."""

    def __init__(self, M: ModelManifold, e, cfg: Optional[QuadratureConfig] = None):
        self.M = M
        self.e = as_exponent(e)
        self.cfg = cfg or DEFAULT_CONFIG
        self.base = M.base_radius
        self._sup = None

    def __repr__(self):
        return f"EvansPotential({self.M.name or 'M'}, p={self.e.p})"

    def __call__(self, r):
        if np.ndim(r):
            return np.array([self(float(x)) for x in np.ravel(r)]).reshape(np.shape(r))
        if r < self.base:
            raise DomainError(f"Evans potential is defined for r >= {self.base}")
        return a_p_integral(self.M, self.e, self.base, float(r), self.cfg)

    def derivative(self, r):
        return a_p(self.M, self.e, r)

    @property
    def kinks(self):
        return self.M.h.kinks

    @property
    def sup(self) -> float:
        """``f(inf)``; infinite exactly on p-parabolic models."""
        if self._sup is None:
            self._sup = a_p_integral(self.M, self.e, self.base, INF, self.cfg)
        return self._sup

    def inverse(self, level: float) -> float:
        """The radius where ``f`` reaches ``level`` (monotone bracketing + Brent)."""
        if level < 0:
            raise DomainError("Evans potential is nonnegative")
        if level == 0:
            return self.base
        if level >= self.sup:
            raise ValueError(f"level {level} not reached: sup f = {self.sup}")
        lo, hi = self.base, 2.0 * self.base
        while self(hi) < level:
            lo, hi = hi, 2.0 * hi
        return brentq(lambda r: self(r) - level, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                      maxiter=500)


class GeodesicRadius:
    """The exhaustion ``f(x) = r(x)``."""

    base = 0.0
    sup = INF

    def __repr__(self):
        return "GeodesicRadius()"

    def __call__(self, r):
        return r

    def derivative(self, r):
        return np.ones_like(np.asarray(r, dtype=float)) if np.ndim(r) else 1.0

    def inverse(self, level):
        return float(level)


def evans_potential(M: ModelManifold, e, r: float) -> float:
    return EvansPotential(M, e)(r)


def radial_p_laplacian_residual(M: ModelManifold, e, u, r: float, step: Optional[float] = None) -> float:
    """``Delta_p u`` for radial ``u`` in flux form, ``(A |u'|^{p-2} u')' / A``.

    The flux is differentiated by central differences with step
    ``1e-5 * max(1, r)``.  ``u'`` comes from ``u.derivative`` when present,
    otherwise from a central difference of ``u``.  Raises
    :class:`BreakpointError` with the one-sided values when a breakpoint of
    ``h`` or ``u`` lies within one step of ``r``.
    """
    e = as_exponent(e)
    p = e.p
    hstep = step if step is not None else 1e-5 * max(1.0, r)
    if r - hstep <= 0:
        raise DomainError("radius too close to the pole")

    deriv = getattr(u, "derivative", None)

    def du(s):
        if deriv is not None:
            return float(deriv(s))
        d = 1e-4 * max(1.0, s)
        return (float(u(s + d)) - float(u(s - d))) / (2 * d)

    def flux(s):
        g = du(s)
        return float(area(M, s)) * abs(g) ** (p - 2) * g if g != 0 else 0.0

    A = float(area(M, r))
    near = list(M.h.kinks(r - hstep, r + hstep))
    u_kinks = getattr(u, "kinks", None)
    if callable(u_kinks) and u_kinks is not M.h.kinks:
        near += list(u_kinks(r - hstep, r + hstep))
    if near:
        left = (flux(np.nextafter(r, 0)) - flux(r - hstep)) / hstep / A
        right = (flux(r + hstep) - flux(r)) / hstep / A
        raise BreakpointError(r, left, right)
    return (flux(r + hstep) - flux(r - hstep)) / (2 * hstep) / A
