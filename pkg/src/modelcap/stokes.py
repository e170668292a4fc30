"""Radial vector fields ``X = x(r) d/dr`` and a divergence-theorem harness.

In flux form ``div X = (x A)' / A``, so the integral of ``div X`` over a
ball is ``x(R) A(R)`` minus the flux through an arbitrarily small sphere
around the pole (the declared ``pole_flux``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, ClassVar, List, Optional, Sequence

import numpy as np

from .conditions import (
    ConditionReport,
    RadialDensity,
    Thresholds,
    check_A,
    check_E,
    check_karp,
    check_V,
)
from scipy.optimize import brentq

from .geometry import EvansPotential, ModelManifold, area, as_exponent
from .numerics import QuadratureConfig, integrate
from .profiles import INF, BreakpointError, Constant, DomainError, RadialProfile, Segment, Shape

__all__ = [
    "RadialField",
    "StokesReport",
    "TheoremInconsistency",
    "div_radial",
    "flux",
    "ball_divergence_integral",
    "ball_divergence_quadrature",
    "bump_profile",
    "bump_field",
    "make_unit_mass_field",
    "p_flux_field",
    "radial_power_field",
    "zero_field",
    "magnitude",
    "theorem_harness",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True)
class RadialField:
    """``X = x(r) d/dr``.

    ``pole_flux`` is the limit of ``x(r) A(r)`` at the inner end of the
    domain: ``r -> 0`` for fields defined at the pole, or ``inner_radius``
    for fields only defined outside a ball.  ``flux_fn`` gives ``x A``
    directly when it is known in closed form, and ``div_fn`` the exact
    divergence.  ``div_support`` is a radius beyond which ``div X``
    vanishes, and ``div_nonnegative`` marks fields with ``div X >= 0``.
    """

    x: Callable
    pole_flux: float = 0.0
    inner_radius: float = 1e-6
    flux_fn: Optional[Callable] = None
    div_fn: Optional[Callable] = None
    div_support: Optional[float] = None
    div_nonnegative: bool = False
    breakpoints: tuple = ()
    name: str = ""

    def kinks(self, a, b):
        return [t for t in self.breakpoints if a < t < b]


def flux(M: ModelManifold, X: RadialField, R: float) -> float:
    """``x(R) A(dB_R)``."""
    if not R > 0:
        raise DomainError("flux needs R > 0")
    if X.flux_fn is not None:
        return float(X.flux_fn(R))
    return float(X.x(R)) * float(area(M, R))


def div_radial(M: ModelManifold, X: RadialField, r: float, step: Optional[float] = None) -> float:
    """``(x A)'(r) / A(r)`` by central differences of the flux.

    Raises :class:`BreakpointError` with one-sided values when a kink of
    ``h`` or of the field lies within one step of ``r``.
    """
    if not r > 0:
        raise DomainError("divergence needs r > 0")
    hs = step if step is not None else 1e-5 * max(1.0, r)
    hs = min(hs, 0.5 * r)
    A = float(area(M, r))
    near = list(M.h.kinks(r - hs, r + hs)) + X.kinks(r - hs, r + hs)
    if near:
        left = (flux(M, X, r) - flux(M, X, r - hs)) / hs / A
        right = (flux(M, X, r + hs) - flux(M, X, r)) / hs / A
        raise BreakpointError(r, left, right)
    return (flux(M, X, r + hs) - flux(M, X, r - hs)) / (2 * hs) / A


def ball_divergence_integral(M: ModelManifold, X: RadialField, R: float) -> float:
    """``int_{B_R} div X dV = flux(R) - pole_flux``."""
    if not R > X.inner_radius:
        raise DomainError(f"R must exceed the inner radius {X.inner_radius}")
    return flux(M, X, R) - X.pole_flux


def ball_divergence_quadrature(M: ModelManifold, X: RadialField, R: float,
                               cfg: Optional[QuadratureConfig] = None) -> float:
    """Independent route: ``int_{r0}^R div X A dr + flux(r0) - pole_flux``.

    Uses ``div_fn`` when the field has one, otherwise the finite-difference
    :func:`div_radial`.
    """
    r0 = X.inner_radius
    if not R > r0:
        raise DomainError(f"R must exceed the inner radius {r0}")
    if X.div_fn is not None:
        div = X.div_fn
    else:
        div = np.vectorize(lambda s: div_radial(M, X, s))
    hi = R if X.div_support is None else min(R, X.div_support)
    body = 0.0
    if hi > r0:
        pts = sorted(set(M.h.kinks(r0, hi)) | set(X.kinks(r0, hi)))
        body, _ = integrate(lambda s: np.asarray(div(s), dtype=float) * area(M, s), r0, hi,
                            cfg or QuadratureConfig(1e-11, 1e-10), pts)
    return body + flux(M, X, r0) - X.pole_flux


# --------------------------------------------------------------------------
# field constructors


@dataclass(frozen=True)
class BumpShape(Shape):
    """``scale * (s-a)^2 (b-s)^2`` evaluated in factored form.

    The factored form keeps the sign exact near ``a`` and ``b``, where the
    expanded polynomial loses everything to cancellation.
    """

    a: float
    b: float
    scale: float = 1.0
    kind: ClassVar[str] = "bump"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * (t - self.a) ** 2 * (self.b - t) ** 2

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u, v = t - self.a, self.b - t
        return 2.0 * self.scale * u * v * (v - u)

    def pow_integral(self, k, lo, hi):
        if k < 0 or k != int(k) or hi == INF:
            return None
        P = np.polynomial.Polynomial
        anti = ((self.scale * P([-self.a, 1.0]) ** 2 * P([self.b, -1.0]) ** 2) ** int(k)).integ()
        return float(anti(hi) - anti(lo))

    def params(self):
        return (self.a, self.b, self.scale)


def bump_profile(a: float, b: float, scale: float = 1.0) -> RadialProfile:
    """``scale * (s-a)^2 (b-s)^2`` on ``[a, b]``, zero elsewhere (C^1)."""
    if not 0 < a < b:
        raise DomainError("bump needs 0 < a < b")
    return RadialProfile([Segment(Constant(0.0), 0.0, a), Segment(BumpShape(a, b, scale), a, b),
                          Segment(Constant(0.0), b, INF)])


def _support(bump: RadialProfile):
    nz = [s for s in bump.segments if not (isinstance(s.shape, Constant) and s.shape.c == 0.0)]
    if not nz or math.isinf(nz[-1].hi):
        raise ValueError("bump must be compactly supported away from the pole")
    return nz[0].lo, nz[-1].hi


def _gl_integral(f, a, b, cuts):
    edges = [a, *[c for c in cuts if a < c < b], b]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * float(_GL_W @ np.asarray(f(mid + half * _GL_X), dtype=float))
    return total


class _Mass:
    """Cumulative ``int_0^r sum_i w_i bump_i A`` with each bump normalised to mass 1."""

    def __init__(self, M, pieces):
        self.M = M
        self.items = []
        for bump, weight in pieces:
            a, b = _support(bump)
            cuts = sorted(set(bump.breakpoints) | set(M.h.kinks(a, b)))
            total = _gl_integral(lambda s: bump(s) * area(M, s), a, b, cuts)
            if not total > 0:
                raise ValueError("bump has zero mass")
            self.items.append((bump, float(weight) / total, float(weight), a, b, cuts))

    def __call__(self, r):
        out = 0.0
        for bump, scale, weight, a, b, cuts in self.items:
            if r <= a:
                continue
            if r >= b:
                out += weight
            else:
                out += scale * _gl_integral(lambda s: bump(s) * area(self.M, s), a, r, cuts)
        return out

    def density(self, s):
        s = np.asarray(s, dtype=float)
        return sum(scale * np.asarray(bump(s), dtype=float) for bump, scale, *_ in self.items)

    @property
    def total(self):
        return sum(w for _, _, w, *_ in self.items)

    @property
    def support(self):
        return max(b for *_, b, _ in self.items)

    @property
    def breakpoints(self):
        return tuple(sorted({t for _, _, _, a, b, _ in self.items for t in (a, b)}))


def bump_field(M: ModelManifold, pieces: Sequence, name: str = "") -> RadialField:
    """Field with ``div X = sum_i w_i bump_i / mass(bump_i)``.

    ``pieces`` is a sequence of ``(bump_profile, weight)``; each bump is
    normalised to unit mass, so ``w_i`` is the signed mass it contributes.
    Beyond the supports the flux is exactly ``sum_i w_i``.
    """
    mass = _Mass(M, pieces)

    def x(r):
        if np.ndim(r):
            return np.array([x(float(s)) for s in np.ravel(r)]).reshape(np.shape(r))
        return mass(r) / float(area(M, r))

    nonneg = all(w >= 0 for _, w in pieces)
    return RadialField(x, 0.0, 1e-6, mass, mass.density, mass.support, nonneg,
                       mass.breakpoints, name or "bump field")


def make_unit_mass_field(M: ModelManifold, bump: Optional[RadialProfile] = None) -> RadialField:
    """``x = (int_0^r bump A) / A`` with the bump normalised to unit mass."""
    bump = bump if bump is not None else bump_profile(0.5, 1.0)
    return bump_field(M, [(bump, 1.0)], "unit-mass field")


def p_flux_field(M: ModelManifold, e) -> RadialField:
    """``|grad f|^{p-2} grad f`` for the Evans potential: ``x = a_p^{p-1} = 1/A``.

    Defined outside the base ball, with flux identically 1.
    """
    as_exponent(e)
    x = lambda r: 1.0 / area(M, r)
    return RadialField(x, 1.0, M.base_radius, lambda r: 1.0, lambda r: np.zeros_like(np.asarray(r, float)),
                       M.base_radius, True, (), "p-flux field")


def radial_power_field(M: ModelManifold, k: float = 1.0, c: float = 1.0) -> RadialField:
    """``x = c r^k``; the pole flux vanishes for ``k > 1 - m`` on cone-like poles."""
    x = lambda r: c * np.asarray(r, dtype=float) ** k
    return RadialField(x, 0.0, 1e-6, name=f"r^{k:g} field")


def zero_field() -> RadialField:
    return RadialField(lambda r: np.zeros_like(np.asarray(r, dtype=float)), 0.0, 1e-6,
                       lambda r: 0.0, lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                       1e-6, True, (), "zero field")


# --------------------------------------------------------------------------
# harness


class TheoremInconsistency(AssertionError):
    """A run where the hypotheses held but the total divergence did not vanish."""


@dataclass
class StokesReport:
    ball_integrals: List[tuple]
    fluxes: List[tuple]
    condition_report: ConditionReport
    neg_part_integral: Optional[float]
    conclusion: str
    value: Optional[float]
    inconsistent: bool
    divergence_residual: float
    notes: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "ball_integrals": [list(t) for t in self.ball_integrals],
            "fluxes": [list(t) for t in self.fluxes],
            "condition": self.condition_report.to_dict(),
            "neg_part_integral": self.neg_part_integral,
            "conclusion": self.conclusion,
            "value": self.value,
            "inconsistent": self.inconsistent,
            "divergence_residual": self.divergence_residual,
            "notes": list(self.notes),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def rows(self):
        ratios = dict(zip(self.condition_report.tested_radii, self.condition_report.ratios))
        return [{"R": R, "ball_integral": I, "flux": F, "condition_ratio": ratios.get(R, math.nan)}
                for (R, I), (_, F) in zip(self.ball_integrals, self.fluxes)]


def _sign_changes(fn, lo, hi, n=2001):
    # kinks of the negative part where overlapping signed bumps cancel
    ts = np.linspace(lo, hi, n)
    vs = np.asarray(fn(ts), dtype=float)
    out = []
    for i in np.nonzero(vs[:-1] * vs[1:] < 0)[0]:
        out.append(brentq(lambda t: float(fn(t)), ts[i], ts[i + 1], xtol=1e-14))
    return out


def _neg_part(M, X, cfg):
    if X.div_nonnegative:
        return 0.0
    if X.div_support is None or X.div_fn is None:
        return None
    lo, hi = X.inner_radius, X.div_support
    if not hi > lo:
        return 0.0
    pts = sorted(set(M.h.kinks(lo, hi)) | set(X.kinks(lo, hi)) | set(_sign_changes(X.div_fn, lo, hi)))
    val, _ = integrate(lambda s: np.maximum(-np.asarray(X.div_fn(s), dtype=float), 0.0) * area(M, s),
                       lo, hi, cfg, pts)
    return val


def _limit(values, tol):
    """``(conclusion, value, note)`` from the tail of the ball-integral ladder."""
    I = np.asarray(values, dtype=float)
    if I.size < 3 or not np.all(np.isfinite(I)):
        return "inconclusive", None, "fewer than three finite ball integrals"
    d1, d2 = I[-1] - I[-2], I[-2] - I[-3]
    scale = 1.0 + abs(I[-1])
    if abs(d1) <= tol * scale and abs(d2) <= tol * scale:
        v = float(I[-1])
        if abs(v) <= tol:
            return "vanishes", 0.0, "ball integrals constant at 0 on the ladder tail"
        return "nonzero", v, "ball integrals constant on the ladder tail"
    if d2 != 0 and abs(d1) < abs(d2):
        rho = d1 / d2
        est = float(I[-1] + d1 * rho / (1.0 - rho))
        return "inconclusive", est, f"ball integrals still moving; Aitken estimate {est:.6g}"
    return "inconclusive", None, "ball integrals not settling on the ladder"


def theorem_harness(M: ModelManifold, e, X: RadialField, condition: str, radii: Sequence[float],
                    density: Optional[RadialDensity] = None, exhaustion=None, g=None,
                    thresholds: Thresholds = Thresholds(), tol: float = 1e-8, strict: bool = True,
                    cfg: Optional[QuadratureConfig] = None) -> StokesReport:
    """Evaluate ball integrals of ``div X`` along ``radii`` next to a decay condition.

    The density defaults to ``|x|^q`` (``|x|`` for the Karp condition) and
    the exhaustion for condition ``E`` to the Evans potential.  The run is
    flagged inconsistent when the condition is supported, the negative part
    of the divergence is integrable and the ball integrals settle at a
    nonzero value; with ``strict`` that raises :class:`TheoremInconsistency`.
    """
    e = as_exponent(e)
    radii = [float(R) for R in radii]
    ball = [(R, ball_divergence_integral(M, X, R)) for R in radii]
    fl = [(R, flux(M, X, R)) for R in radii]
    residual = 0.0
    for (R, I), (_, F) in zip(ball, fl):
        residual = max(residual, abs(I - F + X.pole_flux))
    if condition == "Karp":
        dens = density or RadialDensity(magnitude(X), "abs_X")
        report = check_karp(M, dens, radii, thresholds, cfg)
    else:
        dens = density or RadialDensity.q_power_of(magnitude(X), e)
        if condition == "A":
            report = check_A(M, e, dens, radii, g, thresholds, cfg)
        elif condition == "V":
            report = check_V(M, e, dens, radii, g, thresholds, cfg)
        elif condition == "E":
            f = exhaustion or EvansPotential(M, e)
            report = check_E(M, e, f, dens, radii, g, thresholds, cfg)
        else:
            raise ValueError(f"unknown condition {condition!r}")
    neg = _neg_part(M, X, cfg)
    conclusion, value, note = _limit([I for _, I in ball], tol)
    notes = [note]
    if neg is None:
        notes.append("integrability of the negative divergence part undetermined")
        conclusion = "inconclusive"
    inconsistent = (report.verdict == "supported" and neg is not None and math.isfinite(neg)
                    and conclusion == "nonzero")
    result = StokesReport(ball, fl, report, neg, conclusion, value, inconsistent, residual, notes)
    if inconsistent and strict:
        raise TheoremInconsistency(f"nonzero total divergence {value} under a supported condition "
                                   f"{condition} for {X.name}")
    return result


class _Abs:
    def __init__(self, x, breakpoints):
        self.x = x
        self.breakpoints = tuple(breakpoints)

    def __call__(self, t):
        return np.abs(np.asarray(self.x(t), dtype=float))

    def kinks(self, a, b):
        return [t for t in self.breakpoints if a < t < b]


def magnitude(X: RadialField) -> _Abs:
    """``|x|`` as a radial function that reports the field's breakpoints."""
    return _Abs(X.x, X.breakpoints)
