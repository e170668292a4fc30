"""Integral decay conditions for radial densities along radius sequences.

Each check evaluates the quantity inside a ``liminf`` at a list of radii
and classifies the sequence.  A verdict describes the tested sequence
only; no finite computation decides a limit inferior.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import theilslopes

from .geometry import EvansPotential, ModelManifold, a_p, a_p_integral, area, as_exponent, volume
from .numerics import QuadratureConfig, QuadratureError, integrate

__all__ = [
    "RadialDensity",
    "ConditionReport",
    "Thresholds",
    "LevelSetInverter",
    "classify_ratios",
    "gradient_energy",
    "check_A",
    "check_V",
    "check_E",
    "check_karp",
]

QUALIFIER = "verdict refers to the tested radius sequence only, not to the limit inferior"
MEANINGS = ("abs_X", "q_power")


@dataclass(frozen=True)
class RadialDensity:
    """A nonnegative radial function and what it stands for.

    ``meaning`` is ``"abs_X"`` for ``|X|`` or ``"q_power"`` for
    ``|X|^{p/(p-1)}``.
    """

    profile: Callable
    meaning: str = "q_power"

    def __post_init__(self):
        if self.meaning not in MEANINGS:
            raise ValueError(f"meaning must be one of {MEANINGS}")

    @classmethod
    def q_power_of(cls, x: Callable, e) -> "RadialDensity":
        """Density ``|x|^q`` for a radial field magnitude ``x``."""
        q = as_exponent(e).q
        prof = lambda t: np.abs(np.asarray(x(t), dtype=float)) ** q
        kinks = getattr(x, "kinks", None)
        return cls(_WithKinks(prof, kinks), "q_power")

    def __call__(self, t):
        return self.profile(t)

    def kinks(self, a, b):
        k = getattr(self.profile, "kinks", None)
        return list(k(a, b)) if callable(k) else []

    def scaled(self, c: float) -> "RadialDensity":
        prof = self.profile
        return RadialDensity(_WithKinks(lambda t: c * np.asarray(prof(t), dtype=float),
                                        getattr(prof, "kinks", None)), self.meaning)


class _WithKinks:
    def __init__(self, f, kinks):
        self.f = f
        self._kinks = kinks

    def __call__(self, t):
        return self.f(t)

    def kinks(self, a, b):
        return list(self._kinks(a, b)) if callable(self._kinks) else []


@dataclass(frozen=True)
class Thresholds:
    support_factor: float = 1e-3
    violation_factor: float = 1e-1


@dataclass
class ConditionReport:
    condition: str
    tested_radii: List[float]
    ratios: List[float]
    achieved_inf: float
    verdict: str
    gap_function_description: str
    thresholds: dict
    notes: List[str] = field(default_factory=list)
    qualifier: str = QUALIFIER

    def to_dict(self):
        return {
            "condition": self.condition,
            "radii": list(self.tested_radii),
            "ratios": list(self.ratios),
            "achieved_inf": self.achieved_inf,
            "verdict": self.verdict,
            "gap": self.gap_function_description,
            "thresholds": dict(self.thresholds),
            "notes": list(self.notes),
            "qualifier": self.qualifier,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def text(self) -> str:
        return (f"condition {self.condition}: {self.verdict} "
                f"(inf over {len(self.ratios)} radii = {self.achieved_inf:.6g}; {self.qualifier})")


def classify_ratios(ratios: Sequence[float], radii: Sequence[float],
                    thresholds: Thresholds = Thresholds()):
    """Return ``(verdict, thresholds_used)`` for a ratio sequence.

    ``supported``: the ratios vanish identically on the tail, or their
    minimum drops below ``support_factor * initial`` with a negative
    Theil-Sen slope of ``log ratio`` against ``log R``.  ``violated``: the
    tail (second half) stays above ``violation_factor * initial``.
    """
    r = np.asarray(ratios, dtype=float)
    if r.size == 0:
        return "inconclusive", {}
    initial = r[0] if r[0] > 0 else float(np.max(r))
    used = {"initial": float(initial),
            "support": thresholds.support_factor * float(initial),
            "violation": thresholds.violation_factor * float(initial)}
    tail = r[r.size // 2:]
    if np.all(tail == 0.0):
        return "supported", used
    if r.size >= 3:
        pos = r > 0
        if np.min(r) <= used["support"] and pos.sum() >= 3:
            slope = theilslopes(np.log(r[pos]), np.log(np.asarray(radii, dtype=float)[pos]))[0]
            if slope < 0:
                return "supported", used
        if np.min(tail) >= used["violation"]:
            return "violated", used
    return "inconclusive", used


def _gap(g):
    if g is None:
        return (lambda R: R), "g(R) = R"
    if isinstance(g, tuple):
        return g
    return g, getattr(g, "__name__", "user gap function")


def _points(M, density, a, b):
    return sorted(set(M.h.kinks(a, b)) | set(density.kinks(a, b)))


def _weighted(M, density, a, b, cfg):
    if math.isinf(b):
        raise ValueError("weighted integral needs a finite outer radius")
    val, _ = integrate(lambda s: np.asarray(density(s), dtype=float) * area(M, s), a, b, cfg,
                       _points(M, density, a, b))
    return val


def _report(name, radii, ratios, gap_desc, thresholds, notes, failed=False):
    if failed or not ratios:
        verdict, used = "inconclusive", {}
        if ratios:
            used = classify_ratios(ratios, radii[:len(ratios)], thresholds)[1]
    else:
        verdict, used = classify_ratios(ratios, radii, thresholds)
    used.update({"support_factor": thresholds.support_factor,
                 "violation_factor": thresholds.violation_factor})
    inf = float(min(ratios)) if ratios else math.nan
    return ConditionReport(name, [float(r) for r in radii[:len(ratios)]], [float(x) for x in ratios],
                           inf, verdict, gap_desc, used, notes)


def _need(density, meaning):
    if density.meaning != meaning:
        raise ValueError(f"this condition expects a density with meaning {meaning!r}")


def _ratio_loop(radii, one):
    ratios, notes = [], []
    for R in radii:
        try:
            ratios.append(one(float(R)))
        except (QuadratureError, ValueError, ArithmeticError) as exc:
            notes.append(f"stopped at R={R}: {exc}")
            return ratios, notes, True
    return ratios, notes, False


def check_A(M: ModelManifold, e, density: RadialDensity, radii: Sequence[float], g=None,
            thresholds: Thresholds = Thresholds(), cfg: Optional[QuadratureConfig] = None) -> ConditionReport:
    """``(int_{B_{R+g} minus B_R} f dV) / int_R^{R+g} a_p`` at each ``R``."""
    e = as_exponent(e)
    _need(density, "q_power")
    gf, desc = _gap(g)

    def one(R):
        G = float(gf(R))
        if not G > 0:
            raise ValueError("gap function must be positive")
        return _weighted(M, density, R, R + G, cfg) / a_p_integral(M, e, R, R + G)

    ratios, notes, failed = _ratio_loop(radii, one)
    return _report("A", list(radii), ratios, desc, thresholds, notes, failed)


def check_V(M: ModelManifold, e, density: RadialDensity, radii: Sequence[float], g=None,
            thresholds: Thresholds = Thresholds(), cfg: Optional[QuadratureConfig] = None) -> ConditionReport:
    """As :func:`check_A` with denominator ``int_R^{R+g} (t/V(t))^{1/(p-1)} dt``."""
    e = as_exponent(e)
    _need(density, "q_power")
    gf, desc = _gap(g)
    k = 1.0 / (e.p - 1.0)

    def kernel(t):
        return np.array([(s / volume(M, s)) ** k for s in np.atleast_1d(t)])

    def one(R):
        G = float(gf(R))
        if not G > 0:
            raise ValueError("gap function must be positive")
        den, _ = integrate(kernel, R, R + G, cfg, M.h.kinks(R, R + G))
        return _weighted(M, density, R, R + G, cfg) / den

    ratios, notes, failed = _ratio_loop(radii, one)
    return _report("V", list(radii), ratios, desc, thresholds, notes, failed)


class LevelSetInverter:
    """Invert a nondecreasing radial function by bracketing and Brent's method.

    Every evaluated ``(radius, value)`` pair is cached, so later levels
    start from the tightest known bracket.
    """

    def __init__(self, f, start: Optional[float] = None):
        self.f = f
        base = float(getattr(f, "base", 0.0))
        self.start = start if start is not None else (base if base > 0 else 1e-8)
        self._r: List[float] = []
        self._v: List[float] = []
        self._eval(self.start)

    def _eval(self, r):
        i = bisect.bisect_left(self._r, r)
        if i < len(self._r) and self._r[i] == r:
            return self._v[i]
        v = float(self.f(r))
        self._r.insert(i, r)
        self._v.insert(i, v)
        return v

    def __call__(self, level: float) -> float:
        if level <= self._v[0]:
            return self._r[0]
        i = bisect.bisect_left(self._v, level)
        if i == len(self._v):
            lo = self._r[-1]
            hi = 2.0 * lo
            for _ in range(200):
                if self._eval(hi) >= level:
                    break
                lo, hi = hi, 2.0 * hi
            else:
                raise ValueError(f"level {level} not reached by the exhaustion")
        else:
            lo, hi = self._r[i - 1], self._r[i]
        if self._eval(hi) == level:
            return hi
        return brentq(lambda r: self._eval(r) - level, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def gradient_energy(M: ModelManifold, e, f, rho1: float, rho2: float,
                    cfg: Optional[QuadratureConfig] = None) -> float:
    """``int_{rho1 < r < rho2} |f'|^p dV`` by quadrature."""
    e = as_exponent(e)
    d = f.derivative
    val, _ = integrate(lambda s: np.abs(np.asarray(d(s), dtype=float)) ** e.p * area(M, s),
                       rho1, rho2, cfg, M.h.kinks(rho1, rho2))
    return val


def check_E(M: ModelManifold, e, f, density: RadialDensity, radii: Sequence[float], g=None,
            thresholds: Thresholds = Thresholds(), cfg: Optional[QuadratureConfig] = None) -> ConditionReport:
    """``(g(r)-r)^{-1} (int_G |f'|^p)^{1/p} (int_G density)^{(p-1)/p}``.

    ``G(r) = {r <= f < g(r)}``; the default ``g(r) = 2r`` gives the annulus
    ``C(r) = f^{-1}[r, 2r)`` and the prefactor ``1/r``.  For an Evans
    potential of the same exponent the gradient energy of ``G(r)`` is
    exactly ``g(r) - r``, and that closed form is used.
    """
    e = as_exponent(e)
    _need(density, "q_power")
    if g is None:
        gf, desc = (lambda r: 2.0 * r), "g(r) = 2r"
    else:
        gf, desc = _gap(g)
    evans = isinstance(f, EvansPotential) and f.M is M and f.e.p == e.p
    inv = LevelSetInverter(f)
    notes = ["gradient energy from the closed form for the Evans potential"] if evans else []

    def one(r):
        top = float(gf(r))
        if not top > r:
            raise ValueError("need g(r) > r")
        sup = getattr(f, "sup", math.inf)
        if top >= sup:
            raise ValueError(f"level {top} exceeds sup f = {sup}")
        rho1, rho2 = inv(r), inv(top)
        grad = top - r if evans else gradient_energy(M, e, f, rho1, rho2, cfg)
        mass = _weighted(M, density, rho1, rho2, cfg)
        return grad ** (1.0 / e.p) * mass ** ((e.p - 1.0) / e.p) / (top - r)

    ratios, run_notes, failed = _ratio_loop(radii, one)
    return _report("E", list(radii), ratios, desc, thresholds, notes + run_notes, failed)


def check_karp(M: ModelManifold, density: RadialDensity, radii: Sequence[float],
               thresholds: Thresholds = Thresholds(), cfg: Optional[QuadratureConfig] = None) -> ConditionReport:
    """``(1/R) int_{B_2R minus B_R} |X| dV`` at each ``R``."""
    _need(density, "abs_X")

    def one(R):
        return _weighted(M, density, R, 2.0 * R, cfg) / R

    ratios, notes, failed = _ratio_loop(radii, one)
    return _report("Karp", list(radii), ratios, "annulus B_2R minus B_R", thresholds, notes, failed)
