"""Scalar inequalities behind the p-harmonic map uniqueness argument.

* ``<|x|^{p-2} x - |y|^{p-2} y, x - y> >= 2 C(p) Psi(x, y)`` with an
  empirically estimated ``C(p)``;
* ``2t/(A+t)^{3/2} <= 2/sqrt(A)`` for ``t >= 0``, ``A > 1``;
* the maximiser ``t = 2A`` of ``t -> 2t/(A+t)^{3/2}``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

__all__ = [
    "psi",
    "lindqvist_lhs",
    "lindqvist_ratio",
    "adversarial_pairs",
    "CpEstimate",
    "estimate_Cp",
    "estimate_Cp_record",
    "negpart_profile",
    "fA_negpart_bound_check",
    "TmaxResult",
    "tmax_check",
]


def _check_p(p):
    if not p > 1:
        raise ValueError(f"exponent must exceed 1, got {p}")


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same shape")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("entries must be finite")
    return x, y


def psi(x, y, p: float):
    """``|x-y|^p`` for ``p >= 2`` and ``|x-y|^2 (|x|+|y|)^{p-2}`` for ``1 < p < 2``.

    Vectors live on the last axis.  For ``1 < p < 2`` the value at
    ``x = y = 0`` is taken as its limit 0.
    """
    _check_p(p)
    x, y = _pair(x, y)
    d = np.linalg.norm(x - y, axis=-1)
    if p >= 2:
        return d ** p
    s = np.linalg.norm(x, axis=-1) + np.linalg.norm(y, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = d ** 2 / s ** (2.0 - p)
    return np.where(s == 0, 0.0, out)


def _ppow(v, p):
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if p >= 2:
        return n ** (p - 2) * v
    with np.errstate(divide="ignore", invalid="ignore"):
        out = n ** (p - 2) * v
    return np.where(n == 0, 0.0, out)


def lindqvist_lhs(x, y, p: float):
    """``<|x|^{p-2} x - |y|^{p-2} y, x - y>``; ``|0|^{p-2} 0 = 0``."""
    _check_p(p)
    x, y = _pair(x, y)
    return np.sum((_ppow(x, p) - _ppow(y, p)) * (x - y), axis=-1)


def lindqvist_ratio(x, y, p: float):
    """``lhs / (2 psi)`` on pairs with ``x != y``."""
    return lindqvist_lhs(x, y, p) / (2.0 * psi(x, y, p))


def adversarial_pairs(n: int):
    """Deterministic degenerate configurations: antipodal, one zero,
    nearly parallel, orthogonal, tiny and huge norms."""
    e1 = np.zeros(n)
    e1[0] = 1.0
    e2 = np.zeros(n)
    e2[min(1, n - 1)] = 1.0
    xs, ys = [], []
    for s in (1e-8, 1.0, 1e8):
        xs += [s * e1, s * e1, s * e1, s * e1]
        ys += [-s * e1, 0 * e1, s * e2 if n > 1 else -0.5 * s * e1, 0.5 * s * e1]
        for d in (1e-4, 1e-2, 0.5):
            xs.append(s * e1)
            ys.append(s * (1 + d) * e1)
            xs.append(s * e1)
            ys.append(s * (e1 + d * e2) if n > 1 else -s * d * e1)
    return np.array(xs), np.array(ys)


@dataclass(frozen=True)
class CpEstimate:
    p: float
    n: int
    estimated_Cp: float
    seed: int
    sample_count: int

    def to_dict(self):
        return asdict(self)


def estimate_Cp_record(p: float, n: int, sample_count: int, seed: int) -> CpEstimate:
    """Smallest ``lhs / (2 psi)`` over standard-normal pairs plus adversarial ones."""
    _check_p(p)
    if sample_count < 1000:
        raise ValueError("sample_count must be at least 1000")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((sample_count, n))
    y = rng.standard_normal((sample_count, n))
    ax, ay = adversarial_pairs(n)
    x = np.vstack([x, ax])
    y = np.vstack([y, ay])
    keep = np.any(x != y, axis=1)
    if not keep.any():
        raise ValueError("all sampled pairs are degenerate")
    ratios = lindqvist_ratio(x[keep], y[keep], p)
    ratios = ratios[np.isfinite(ratios)]
    est = float(np.min(ratios))
    if not est > 0:
        raise ArithmeticError(f"nonpositive constant estimate {est} at p={p}")
    return CpEstimate(float(p), int(n), est, int(seed), int(sample_count))


def estimate_Cp(p: float, n: int = 2, sample_count: int = 100_000, seed: int = 0) -> float:
    return estimate_Cp_record(p, n, sample_count, seed).estimated_Cp


def negpart_profile(t, A):
    """``2t / (A+t)^{3/2}``."""
    t = np.asarray(t, dtype=float)
    return 2.0 * t / (A + t) ** 1.5


def fA_negpart_bound_check(du_p, dv_p, t, A, rtol: float = 1e-12):
    """``2t/(A+t)^{3/2} (du_p + dv_p) <= 2/sqrt(A) (du_p + dv_p)``.

    Vectorised; returns a boolean (array).
    """
    du_p, dv_p, t, A = (np.asarray(v, dtype=float) for v in (du_p, dv_p, t, A))
    if np.any(A <= 1) or np.any(t < 0) or np.any(du_p < 0) or np.any(dv_p < 0):
        raise ValueError("need A > 1 and nonnegative t, du_p, dv_p")
    s = du_p + dv_p
    lhs = negpart_profile(t, A) * s
    rhs = 2.0 / np.sqrt(A) * s
    return lhs <= rhs * (1 + rtol)


class TmaxResult(NamedTuple):
    argmax: float
    value: float
    increasing: bool


def tmax_check(A: float, grid: int = 2001) -> TmaxResult:
    """Maximiser of ``2t/(A+t)^{3/2}`` on ``t >= 0``.

    A bounded golden-section style search brackets the maximum; the
    result is polished by root-finding on the sign of the derivative,
    which is that of ``2A - t``.  ``increasing`` reports strict increase on
    a grid of ``(0, argmax)``.
    """
    if not A > 0:
        raise ValueError("A must be positive")
    coarse = minimize_scalar(lambda t: -negpart_profile(t, A), bounds=(0.0, 10.0 * A),
                             method="bounded", options={"xatol": 1e-6 * A})
    slope_sign = lambda t: 2.0 * (A + t) - 3.0 * t
    lo, hi = 0.5 * coarse.x, min(2.0 * coarse.x, 10.0 * A)
    t_star = brentq(slope_sign, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    ts = np.linspace(0.0, t_star, grid)
    increasing = bool(np.all(np.diff(negpart_profile(ts, A)) > 0))
    return TmaxResult(float(t_star), float(negpart_profile(t_star, A)), increasing)
