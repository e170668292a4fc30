"""Area decay on Sobolev models and a model that defeats it.

On a manifold with a Euclidean-type Sobolev inequality (constant ``S_M``,
exponent ``q``) and volume growth ``V(B_r) >= gamma r^m`` one gets

    r^{(m-q)/(q-1)} int_r^inf a_q  <=  gamma^{-(m-q)/(m(q-1))} S_M^{q/(q-1)}.

:func:`build_counterexample` produces a model with Euclidean volume growth
and integrable ``a_q`` on which the left side is unbounded, so the Sobolev
inequality cannot hold there.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from .geometry import ModelManifold, a_p_integral, a_p_tail, sphere_area, volume, volume_between
from .profiles import INF, Alternating, Linear, Segment, WarpingProfile

__all__ = [
    "SobolevParams",
    "talenti_constant",
    "euclidean_sobolev_params",
    "sobolev_bound_constant",
    "CapacityRelation",
    "sobolev_capacity_relation",
    "LowerAreaResult",
    "lower_area_product",
    "lower_area_check",
    "CounterexampleError",
    "CounterexampleSpec",
    "h_threshold",
    "build_counterexample",
    "CounterexampleReport",
    "verify_counterexample",
]


@dataclass(frozen=True)
class SobolevParams:
    """Sobolev data ``(m, q, S_M, gamma)`` with ``p = mq/(m-q)``."""

    m: int
    q: float
    S_M: float
    gamma: float

    def __post_init__(self):
        if not 1 < self.q < self.m:
            raise ValueError(f"need 1 < q < m, got q={self.q}, m={self.m}")
        if not (self.S_M > 0 and self.gamma > 0):
            raise ValueError("S_M and gamma must be positive")

    @property
    def p_sob(self) -> float:
        return self.m * self.q / (self.m - self.q)


def talenti_constant(m: int, q: float) -> float:
    """Sharp constant of ``||u||_{mq/(m-q)} <= S ||grad u||_q`` on ``R^m``."""
    if not 1 < q < m:
        raise ValueError("need 1 < q < m")
    ratio = (gamma_fn(1 + m / 2) * gamma_fn(m)) / (gamma_fn(m / q) * gamma_fn(1 + m - m / q))
    return float(math.pi ** -0.5 * m ** (-1.0 / q) * ((q - 1) / (m - q)) ** (1 - 1.0 / q)
                 * ratio ** (1.0 / m))


def euclidean_sobolev_params(m: int, q: float) -> SobolevParams:
    """Sharp Sobolev constant and exact volume constant ``omega/m`` of ``R^m``."""
    return SobolevParams(m, q, talenti_constant(m, q), sphere_area(m) / m)


def sobolev_bound_constant(params: SobolevParams) -> float:
    """``C_S = gamma^{-(m-q)/(m(q-1))} S_M^{q/(q-1)}``."""
    m, q = params.m, params.q
    return params.gamma ** (-(m - q) / (m * (q - 1))) * params.S_M ** (q / (q - 1))


class CapacityRelation(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def sobolev_capacity_relation(params: SobolevParams, M: ModelManifold, r1: float, r2: float,
                              tol: float = 1e-9) -> CapacityRelation:
    """``V(B_r1)^{q/p} <= S_M^q / (int_r1^r2 a_q)^{q-1}``; ``r2`` may be inf.

    With ``r2 = inf`` on a q-parabolic model the right side is 0 and the
    relation fails, which is the contradiction behind the area bound.
    """
    if not 0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    if params.m != M.m:
        raise ValueError("dimension mismatch between parameters and model")
    q = params.q
    lhs = volume(M, r1) ** (q / params.p_sob)
    denom = a_p_integral(M, q, r1, r2)
    rhs = params.S_M ** q / denom ** (q - 1) if math.isfinite(denom) else 0.0
    return CapacityRelation(lhs, rhs, lhs <= rhs * (1 + tol))


def lower_area_product(M: ModelManifold, q: float, r: float) -> float:
    """``r^{(m-q)/(q-1)} int_r^inf a_q``."""
    return float(r ** ((M.m - q) / (q - 1)) * a_p_integral(M, q, r, INF))


class LowerAreaResult(NamedTuple):
    max_product: float
    holds: Optional[bool]
    products: List[float]
    bound: float
    tail: str


def lower_area_check(params: SobolevParams, M: ModelManifold, r_grid: Sequence[float],
                     tol: float = 1e-9) -> LowerAreaResult:
    """Evaluate the area-decay product on ``r_grid`` against ``C_S``.

    A divergent ``a_q`` tail makes every product infinite (fails); an
    undetermined tail gives ``holds = None``.
    """
    tail = a_p_tail(M, params.q)
    bound = sobolev_bound_constant(params)
    verdict = tail.verdict()
    if verdict == "undetermined":
        return LowerAreaResult(math.nan, None, [], bound, tail.describe())
    if verdict == "diverges":
        prods = [math.inf] * len(r_grid)
        return LowerAreaResult(math.inf, False, prods, bound, tail.describe())
    prods = [lower_area_product(M, params.q, float(r)) for r in r_grid]
    top = max(prods)
    return LowerAreaResult(top, top <= bound * (1 + tol), prods, bound, tail.describe())


# --------------------------------------------------------------------------
# counterexample


class CounterexampleError(ValueError):
    """Infeasible counterexample data; ``constraint`` names the violated condition."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


def h_threshold(m: int, gamma: float) -> float:
    """``(1/4) (m 10^m gamma / omega_{m-1})^{1/(m-1)}``."""
    return 0.25 * (m * 10.0 ** m * gamma / sphere_area(m)) ** (1.0 / (m - 1))


@dataclass(frozen=True)
class CounterexampleSpec:
    m: int = 3
    q: float = 1.5
    beta: float = 0.5
    H: float = 4.0
    gamma: float = 1.0
    smoothing_width: float = 0.1

    @property
    def beta_interval(self):
        return (self.q - 1) / (self.m - 1), (self.m - self.q) / (self.m - 1)

    def validate(self):
        m, q = self.m, self.q
        if int(m) != m or m < 2:
            raise CounterexampleError("dimension", "m must be an integer >= 2")
        if not 1 < q < (m + 1) / 2:
            raise CounterexampleError("q-range", f"need 1 < q < (m+1)/2 = {(m + 1) / 2}, got {q}")
        lo, hi = self.beta_interval
        if not lo < self.beta < hi:
            raise CounterexampleError("beta-range", f"need {lo} < beta < {hi}, got {self.beta}")
        if not self.gamma > 0:
            raise CounterexampleError("gamma", "gamma must be positive")
        thr = h_threshold(m, self.gamma)
        if not self.H > thr:
            raise CounterexampleError("H-threshold", f"need H > {thr:.6g}, got {self.H}")
        if self.H < 1:
            raise CounterexampleError("H-at-least-one", "need H >= 1 so that H t >= t^beta for t >= 1")
        if not 0 < self.smoothing_width < 1:
            raise CounterexampleError("smoothing-width", "width must lie in (0, 1)")
        return self

    @property
    def tail_exponent(self) -> float:
        """Decay exponent of ``a_q`` along the ``t^beta`` pieces."""
        return self.beta * (self.m - 1) / (self.q - 1)

    @property
    def growth_exponent(self) -> float:
        """Growth exponent of the area-decay product along the ``t^beta`` pieces."""
        return ((self.m - self.q) - self.beta * (self.m - 1)) / (self.q - 1) + 1.0


def build_counterexample(spec: CounterexampleSpec) -> ModelManifold:
    """``h = H t`` on ``(0, 1)``, then alternating ``H t`` / ``t^beta`` blocks.

    ``h = H t`` on every ``[4k+1, 4k+2]`` and ``h = t^beta`` on every
    ``[4k+3, 4k+4]``, joined by monotone C^1 transitions of the given width.
    """
    spec.validate()
    w = spec.smoothing_width
    h = WarpingProfile([Segment(Linear(spec.H), 0.0, 1.0),
                        Segment(Alternating(spec.beta, spec.H, w), 1.0, INF)], smoothing_width=w)
    ts = np.concatenate([np.linspace(1.0, 64.0, 20001), np.geomspace(64.0, 1e5, 2001)])
    if np.any(h(ts) < ts ** spec.beta * (1 - 1e-12)):
        raise CounterexampleError("lower-envelope", "profile dips below t^beta")
    return ModelManifold(spec.m, h, 1.0, "counterexample")


@dataclass
class CounterexampleReport:
    spec: dict
    h_threshold: float
    volume_radii: List[float]
    volume_ratios: List[float]
    volume_ok: bool
    tail: str
    tail_exponent: float
    tail_converges: Optional[bool]
    product_radii: List[float]
    products: List[float]
    product_volume_ratios: List[float]
    products_increasing: bool
    growth_factor: float
    unbounded_evidence: bool
    notes: List[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return bool(self.volume_ok and self.tail_converges and self.unbounded_evidence)

    def to_dict(self):
        d = asdict(self)
        d["all_passed"] = self.all_passed
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def rows(self):
        """``(r, V/r^m, product)`` on the subsequence radii."""
        return [{"r": r, "volume_ratio": v, "lower_area_product": P}
                for r, P, v in zip(self.product_radii, self.products, self.product_volume_ratios)]


def verify_counterexample(M: ModelManifold, spec: CounterexampleSpec, r_max: float = 1000.0,
                          n_radii: int = 200, growth_target: float = 10.0) -> CounterexampleReport:
    """Three checks on a built counterexample.

    (i) ``V(B_r) >= gamma r^m`` on ``n_radii`` radii up to ``r_max``;
    (ii) the ``a_q`` tail converges, decided from its envelope exponents;
    (iii) the area-decay product at ``r_k = 4k+3`` (start of each
    ``t^beta`` block) increases strictly and grows past ``growth_target``
    times its first value by ``r_max``.  (iii) is evidence for an
    unbounded product, not a proof.
    """
    spec.validate()
    m, q = spec.m, spec.q
    notes = [f"smoothing width {spec.smoothing_width}",
             "H threshold uses the Euclidean unit-sphere area"]
    radii = np.geomspace(1e-2, r_max, n_radii)
    vols = []
    acc, last = 0.0, 0.0
    for r in radii:
        acc += volume_between(M, last, float(r)) if last > 0 else volume(M, float(r))
        last = float(r)
        vols.append(acc)
    ratios = [v / (spec.gamma * r ** m) for v, r in zip(vols, radii)]
    volume_ok = bool(min(ratios) >= 1.0)

    tail = a_p_tail(M, q)
    verdict = tail.verdict()
    converges = None if verdict == "undetermined" else verdict == "converges"
    if converges is None:
        notes.append("a_q tail undetermined")

    ks = np.arange(0, int((r_max - 3) // 4) + 1)
    prod_r = [float(4 * k + 3) for k in ks]
    prods = [lower_area_product(M, q, r) for r in prod_r]
    prod_vr = [volume(M, r) / r ** m for r in prod_r]
    increasing = bool(np.all(np.diff(prods) > 0))
    growth = prods[-1] / prods[0] if prods and prods[0] > 0 else math.nan
    evidence = bool(increasing and growth > growth_target)
    return CounterexampleReport(asdict(spec), h_threshold(m, spec.gamma), [float(r) for r in radii],
                                ratios, volume_ok, tail.describe(), spec.tail_exponent, converges,
                                prod_r, prods, prod_vr, increasing, float(growth), evidence, notes)
