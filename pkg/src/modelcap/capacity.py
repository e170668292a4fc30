"""Annulus p-capacity on models, its surface and volume upper bounds, and
the p-parabolicity classifier."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from .geometry import ModelManifold, a_p, a_p_integral, a_p_tail, as_exponent, b_p
from .numerics import DEFAULT_CONFIG, QuadratureConfig, QuadratureError, TailModel, integrate, integrate_improper
from .profiles import DomainError

__all__ = [
    "CapacityBounds",
    "ParabolicityVerdict",
    "cap_exact_model",
    "cap_upper_surface",
    "cap_upper_volume",
    "capacity_bounds",
    "classify_parabolicity",
]

VOLUME_CONSTANTS = ("two_pow_p", "improved_p")


def _check_radii(r1, r2):
    if not 0 < r1 < r2:
        raise DomainError(f"condenser needs 0 < r1 < r2, got ({r1}, {r2})")


def cap_exact_model(M: ModelManifold, e, r1: float, r2: float) -> float:
    """``Cap_p(B_r1, B_r2) = (int_r1^r2 a_p)^{1-p}``.

    Exact on model manifolds, where the radial minimiser is p-harmonic.
    """
    e = as_exponent(e)
    _check_radii(r1, r2)
    return a_p_integral(M, e, r1, r2) ** (1.0 - e.p)


def cap_upper_surface(M: ModelManifold, e, r1: float, r2: float,
                      cfg: Optional[QuadratureConfig] = None) -> float:
    """Surface bound ``(int_r1^r2 a_p)^{1-p}``.

    Same expression as the exact model capacity, but the integral is taken
    by adaptive quadrature of ``a_p`` instead of the closed-form segment
    integrals, so agreement between the two is a real check.
    """
    e = as_exponent(e)
    _check_radii(r1, r2)
    # an area that underflows makes a_p = +inf; that case is caught below
    with np.errstate(over="ignore", divide="ignore"):
        try:
            val, _ = integrate(lambda t: a_p(M, e, t), r1, r2, cfg, M.h.kinks(r1, r2))
        except QuadratureError:
            # a_p > 0, so an overflowed integrand means an infinite integral
            if np.any(np.isposinf(np.asarray(a_p(M, e, np.linspace(r1, r2, 4097)), dtype=float))):
                return 0.0
            raise
    return val ** (1.0 - e.p)


def cap_upper_volume(M: ModelManifold, e, r1: float, r2: float, constant: str = "two_pow_p",
                     cfg: Optional[QuadratureConfig] = None) -> float:
    """Volume bound ``C (int_r1^r2 b_p)^{1-p}`` with ``C = 2^p`` or ``C = p``."""
    e = as_exponent(e)
    _check_radii(r1, r2)
    if constant not in VOLUME_CONSTANTS:
        raise ValueError(f"constant must be one of {VOLUME_CONSTANTS}")
    factor = 2.0 ** e.p if constant == "two_pow_p" else e.p
    cfg = cfg or QuadratureConfig(abs_tol=1e-13, rel_tol=1e-11)
    val, _ = integrate(lambda t: b_p(M, e, r1, t), r1, r2, cfg, M.h.kinks(r1, r2))
    return factor * val ** (1.0 - e.p)


@dataclass(frozen=True)
class CapacityBounds:
    p: float
    r1: float
    r2: float
    exact_model: float
    surface_bound: float
    volume_bound: float
    volume_bound_constant: str
    tightness_surface: float
    tightness_volume: float

    def as_row(self):
        return {k: v for k, v in asdict(self).items()
                if k in ("p", "r1", "r2", "exact_model", "surface_bound", "volume_bound",
                         "tightness_volume")}


def capacity_bounds(M: ModelManifold, e, r1: float, r2: float,
                    constant: str = "two_pow_p", tol: float = 1e-9) -> CapacityBounds:
    """Exact capacity, both bounds and the tightness ratios ``exact / bound``."""
    e = as_exponent(e)
    exact = cap_exact_model(M, e, r1, r2)
    surf = cap_upper_surface(M, e, r1, r2)
    vol = cap_upper_volume(M, e, r1, r2, constant)
    if exact > surf * (1 + tol) or exact > vol * (1 + tol):
        raise ArithmeticError(f"capacity exceeds an upper bound at p={e.p}, ({r1}, {r2})")
    return CapacityBounds(e.p, r1, r2, exact, surf, vol, constant, _tightness(exact, surf),
                          _tightness(exact, vol))


def _tightness(exact, bound):
    # both underflow to 0 on annuli whose a_p integral leaves float range
    return exact / bound if bound > 0 else math.nan


@dataclass(frozen=True)
class ParabolicityVerdict:
    """``parabolic`` iff ``int_base^inf a_p`` diverges.

    ``certificate`` is ``f(inf)`` for non-parabolic models and the decay
    exponent (or rate) of the divergent ``a_p`` tail otherwise.
    """

    verdict: str
    certificate: Optional[float]
    tail: TailModel
    note: str = ""

    def to_dict(self):
        return {"verdict": self.verdict, "certificate": self.certificate,
                "tail": self.tail.describe(), "note": self.note}


def classify_parabolicity(M: ModelManifold, e, cfg: Optional[QuadratureConfig] = None) -> ParabolicityVerdict:
    """Classify p-parabolicity of a model from the analytic tail of ``a_p``."""
    e = as_exponent(e)
    tail = a_p_tail(M, e)
    base = M.base_radius
    res = integrate_improper(lambda t: a_p(M, e, t), base, tail, cfg or DEFAULT_CONFIG,
                             M.h.kinks(base, tail.valid_from) if tail.valid_from > base else ())
    if res.verdict == "diverges":
        cert = tail.rate if tail.kind in ("power", "exponential") else tail.lower_decay
        return ParabolicityVerdict("parabolic", cert, tail, f"a_p tail {tail.describe()} not integrable")
    if res.verdict == "converges":
        value = res.value
        if value is None:
            # oscillating tails: the segment machinery sums the periodic tail
            value = a_p_integral(M, e, base, math.inf)
        return ParabolicityVerdict("non-parabolic", value, tail, "f(inf) = int_base^inf a_p finite")
    return ParabolicityVerdict("undetermined", None, tail, "tail class undetermined")
