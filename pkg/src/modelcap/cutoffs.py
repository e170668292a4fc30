"""Radial cutoff functions and their p-energies.

``phi`` is the capacity-optimal cutoff built from ``a_p``; ``xi`` is the
standard Lipschitz cutoff, represented only through its energy bound
(plus a piecewise-linear instance for plotting); ``custom`` wraps any
radial profile with the right boundary values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .geometry import ModelManifold, a_p, a_p_integral, area, as_exponent, volume_between
from .numerics import QuadratureConfig, integrate
from .profiles import INF, Constant, DomainError, Poly, RadialProfile, Segment

__all__ = [
    "Cutoff",
    "phi_eval",
    "phi_cutoff",
    "phi_energy",
    "phi_energy_quadrature",
    "xi_energy_bound",
    "xi_cutoff",
    "piecewise_linear_profile",
    "custom_cutoff",
    "custom_energy",
    "random_cutoff",
    "energy_sweep",
    "plateau_value",
    "PlateauTruncation",
    "plateau_truncation",
]


def _check(r1, r2):
    if not 0 < r1 < r2:
        raise DomainError(f"cutoff needs 0 < r1 < r2, got ({r1}, {r2})")


@dataclass(frozen=True)
class Cutoff:
    kind: str
    r1: float
    r2: float
    values: Callable
    epsilon: Optional[float] = None

    def __call__(self, r):
        return self.values(r)


def phi_eval(M: ModelManifold, e, r1: float, r2: float, r: float) -> float:
    """``(int_r1^r2 a_p)^{-1} int_r^r2 a_p``, clamped to 1 inside and 0 outside."""
    _check(r1, r2)
    if r <= r1:
        return 1.0
    if r >= r2:
        return 0.0
    return a_p_integral(M, e, r, r2) / a_p_integral(M, e, r1, r2)


class _Phi:
    def __init__(self, M, e, r1, r2):
        self.M, self.e, self.r1, self.r2 = M, as_exponent(e), r1, r2
        self.norm = a_p_integral(M, e, r1, r2)

    def __call__(self, r):
        if np.ndim(r):
            return np.array([self(float(x)) for x in np.ravel(r)]).reshape(np.shape(r))
        return phi_eval(self.M, self.e, self.r1, self.r2, r)

    def derivative(self, r):
        if r < self.r1 or r > self.r2:
            return 0.0
        return -float(a_p(self.M, self.e, r)) / self.norm


def phi_cutoff(M: ModelManifold, e, r1: float, r2: float) -> Cutoff:
    _check(r1, r2)
    return Cutoff("phi", r1, r2, _Phi(M, e, r1, r2))


def phi_energy(M: ModelManifold, e, r1: float, r2: float) -> float:
    """``int |grad phi|^p dV = (int_r1^r2 a_p)^{1-p}``."""
    e = as_exponent(e)
    _check(r1, r2)
    return a_p_integral(M, e, r1, r2) ** (1.0 - e.p)


def phi_energy_quadrature(M: ModelManifold, e, r1: float, r2: float,
                          cfg: Optional[QuadratureConfig] = None) -> float:
    """Direct quadrature of ``|phi'|^p A`` over the annulus."""
    e = as_exponent(e)
    _check(r1, r2)
    norm = a_p_integral(M, e, r1, r2)
    val, _ = integrate(lambda t: (a_p(M, e, t) / norm) ** e.p * area(M, t), r1, r2, cfg,
                       M.h.kinks(r1, r2))
    return val


def xi_energy_bound(M: ModelManifold, e, r1: float, r2: float, epsilon: float = 0.0) -> float:
    """``((1+eps)/(r2-r1))^p int_r1^r2 A``: energy bound of a standard cutoff."""
    e = as_exponent(e)
    _check(r1, r2)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    return ((1.0 + epsilon) / (r2 - r1)) ** e.p * volume_between(M, r1, r2)


def piecewise_linear_profile(knots: Sequence[float], values: Sequence[float]) -> RadialProfile:
    """Radial profile interpolating ``values`` linearly between ``knots``, constant outside."""
    knots = [float(k) for k in knots]
    values = [float(v) for v in values]
    if len(knots) != len(values) or len(knots) < 2:
        raise ValueError("need matching knots and values, at least two")
    if knots[0] <= 0 or any(b <= a for a, b in zip(knots, knots[1:])):
        raise ValueError("knots must be positive and strictly increasing")
    segs = [Segment(Constant(values[0]), 0.0, knots[0])]
    for (a, va), (b, vb) in zip(zip(knots, values), zip(knots[1:], values[1:])):
        slope = (vb - va) / (b - a)
        segs.append(Segment(Poly((va - slope * a, slope)), a, b))
    segs.append(Segment(Constant(values[-1]), knots[-1], INF))
    return RadialProfile(segs)


def xi_cutoff(r1: float, r2: float, epsilon: float = 1e-3) -> Cutoff:
    """A concrete standard cutoff with ``|xi'| = (1+eps)/(r2-r1)`` on a centred ramp."""
    _check(r1, r2)
    ramp = (r2 - r1) / (1.0 + epsilon)
    pad = 0.5 * (r2 - r1 - ramp)
    prof = piecewise_linear_profile([r1 + pad, r2 - pad], [1.0, 0.0])
    return Cutoff("xi", r1, r2, prof, epsilon)


def custom_cutoff(profile, r1: float, r2: float, tol: float = 1e-12) -> Cutoff:
    """Wrap a radial profile as a cutoff after checking its boundary values."""
    _check(r1, r2)
    inner = np.linspace(r1 * 1e-3, r1, 17)
    outer = np.linspace(r2, 2 * r2, 17)
    mid = np.linspace(r1, r2, 257)
    if np.max(np.abs(np.asarray(profile(inner)) - 1.0)) > tol:
        raise ValueError("custom cutoff must equal 1 on (0, r1]")
    if np.max(np.abs(np.asarray(profile(outer)))) > tol:
        raise ValueError("custom cutoff must vanish on [r2, inf)")
    vals = np.asarray(profile(mid))
    if np.min(vals) < -tol or np.max(vals) > 1 + tol:
        raise ValueError("custom cutoff must take values in [0, 1]")
    return Cutoff("custom", r1, r2, profile)


def _affine_slope(shape):
    if isinstance(shape, Poly) and shape.degree <= 1:
        return shape.coeffs[1] if len(shape.coeffs) > 1 else 0.0
    if isinstance(shape, Constant):
        return 0.0
    return None


def custom_energy(M: ModelManifold, e, psi: Cutoff, cfg: Optional[QuadratureConfig] = None) -> float:
    """``int_r1^r2 |psi'|^p A`` for a radial cutoff.

    Affine pieces use the closed-form volume of their annulus; other
    pieces fall back to quadrature of ``|psi'|^p A``.
    """
    e = as_exponent(e)
    prof = psi.values
    if psi.kind == "phi":
        return phi_energy(M, e, psi.r1, psi.r2)
    if not isinstance(prof, RadialProfile):
        d = prof.derivative
        val, _ = integrate(lambda t: np.abs(np.vectorize(d)(t)) ** e.p * area(M, t),
                           psi.r1, psi.r2, cfg, M.h.kinks(psi.r1, psi.r2))
        return val
    total = 0.0
    for seg in prof.segments:
        lo, hi = max(psi.r1, seg.lo), min(psi.r2, seg.hi)
        if not hi > lo:
            continue
        slope = _affine_slope(seg.shape)
        if slope is not None:
            if slope != 0.0:
                total += abs(slope) ** e.p * volume_between(M, lo, hi)
        else:
            shape = seg.shape
            val, _ = integrate(lambda t: np.abs(shape.derivative(t)) ** e.p * area(M, t), lo, hi,
                               cfg, sorted(set(M.h.kinks(lo, hi)) | set(shape.kinks(lo, hi))))
            total += val
    return total


def random_cutoff(r1: float, r2: float, rng: np.random.Generator, knots: int = 10) -> Cutoff:
    """Monotone piecewise-linear cutoff with ``knots`` knots (endpoints included).

    Interior knots are sorted uniform draws; values drop from 1 to 0 by
    normalised uniform increments.
    """
    _check(r1, r2)
    if knots < 2:
        raise ValueError("need at least two knots")
    interior = np.sort(rng.uniform(r1, r2, size=knots - 2))
    xs = np.concatenate([[r1], interior, [r2]])
    inc = rng.uniform(size=knots - 1)
    vals = 1.0 - np.concatenate([[0.0], np.cumsum(inc) / inc.sum()])
    vals[-1] = 0.0
    keep = np.concatenate([[True], np.diff(xs) > 0])
    return Cutoff("custom", r1, r2, piecewise_linear_profile(xs[keep], vals[keep]))


def energy_sweep(M: ModelManifold, e, radii: Sequence[float], epsilon: float = 0.0,
                 per_unit_sphere: bool = False):
    """Rows ``(r, phi_energy, xi_bound, ratio)`` for the annuli ``(r, 2r)``."""
    scale = 1.0 / M.omega if per_unit_sphere else 1.0
    rows = []
    for r in radii:
        phi = phi_energy(M, e, r, 2 * r) * scale
        xi = xi_energy_bound(M, e, r, 2 * r, epsilon) * scale
        rows.append({"r": float(r), "phi_energy": phi, "xi_bound": xi, "ratio": phi / xi})
    return rows


def plateau_value(f_value, r: float):
    """``max(min(2r - f, r), 0)``."""
    return np.maximum(np.minimum(2.0 * r - np.asarray(f_value, dtype=float), r), 0.0)


class PlateauTruncation:
    """``f_r = max(min(2r - f, r), 0)`` for a radial exhaustion ``f``.

    Equals ``r`` where ``f < r``, vanishes where ``f >= 2r``, and has
    derivative ``-f'`` on ``{r <= f < 2r}``.
    """

    def __init__(self, f, r: float):
        if not r > 0:
            raise ValueError("plateau level must be positive")
        self.f = f
        self.r = float(r)

    def __call__(self, x):
        return plateau_value(self.f(x), self.r)

    def derivative(self, x):
        fx = float(self.f(x))
        if self.r <= fx < 2 * self.r:
            return -float(self.f.derivative(x))
        return 0.0


def plateau_truncation(f, r: float) -> PlateauTruncation:
    return PlateauTruncation(f, r)
