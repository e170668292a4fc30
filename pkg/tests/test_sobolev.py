import math

import numpy as np
import pytest

from modelcap.geometry import euclidean
from modelcap.sobolev import (
    CounterexampleError,
    CounterexampleSpec,
    SobolevParams,
    build_counterexample,
    euclidean_sobolev_params,
    h_threshold,
    lower_area_check,
    lower_area_product,
    sobolev_bound_constant,
    sobolev_capacity_relation,
    talenti_constant,
    verify_counterexample,
)


def test_talenti_q2_closed_form():
    # S = (m(m-2) pi)^{-1/2} (Gamma(m)/Gamma(m/2))^{1/m}
    for m in (3, 4, 5, 7):
        ref = (m * (m - 2) * math.pi) ** -0.5 * (math.gamma(m) / math.gamma(m / 2)) ** (1 / m)
        assert talenti_constant(m, 2.0) == pytest.approx(ref, rel=1e-13)
    assert talenti_constant(3, 2.0) == pytest.approx(0.42726, abs=5e-6)


def test_bound_constant_r3():
    params = euclidean_sobolev_params(3, 2.0)
    assert params.gamma == pytest.approx(4 * math.pi / 3)
    assert sobolev_bound_constant(params) == pytest.approx(0.11325, abs=5e-6)
    assert params.p_sob == pytest.approx(6.0)


def test_lower_area_r3():
    M = euclidean(3)
    params = euclidean_sobolev_params(3, 2.0)
    for r in (1.0, 3.0, 50.0):
        assert lower_area_product(M, 2.0, r) == pytest.approx(1 / (4 * math.pi), rel=1e-12)
    res = lower_area_check(params, M, [1, 2, 4, 8])
    assert res.holds and res.max_product == pytest.approx(0.0795775, abs=1e-7)


@pytest.mark.parametrize("m, q", [(3, 1.5), (4, 2.0), (5, 3.0)])
def test_lower_area_euclidean_family(m, q):
    res = lower_area_check(euclidean_sobolev_params(m, q), euclidean(m), np.geomspace(1, 100, 7))
    assert res.holds
    assert np.ptp(res.products) <= 1e-10 * res.max_product


@pytest.mark.parametrize("r1, r2", [(1.0, 2.0), (0.5, 10.0), (1.0, math.inf)])
def test_capacity_relation_r3(r1, r2):
    rel = sobolev_capacity_relation(euclidean_sobolev_params(3, 2.0), euclidean(3), r1, r2)
    assert rel.holds and rel.rhs > 0


def test_capacity_relation_fails_on_parabolic_dimension():
    params = SobolevParams(3, 2.0, 1.0, 1.0)
    from modelcap.geometry import cylinder
    rel = sobolev_capacity_relation(SobolevParams(2, 1.5, 1.0, 1.0), cylinder(2), 1.0, math.inf)
    assert rel.rhs == 0.0 and not rel.holds
    with pytest.raises(ValueError):
        sobolev_capacity_relation(params, cylinder(2), 1.0, 2.0)


def test_params_validation():
    with pytest.raises(ValueError):
        SobolevParams(3, 3.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        SobolevParams(3, 2.0, -1.0, 1.0)


def test_h_threshold_values():
    assert h_threshold(3, 1.0) == pytest.approx(0.25 * (3000 / (4 * math.pi)) ** 0.5, rel=1e-14)
    assert h_threshold(3, 1.0) == pytest.approx(3.8627, abs=5e-5)
    gs = [0.5, 1.0, 2.0, 4.0]
    assert np.all(np.diff([h_threshold(3, g) for g in gs]) > 0)


@pytest.fixture(scope="module")
def default_report():
    spec = CounterexampleSpec()
    return verify_counterexample(build_counterexample(spec), spec)


def test_default_counterexample(default_report):
    rep = default_report
    assert rep.volume_ok and min(rep.volume_ratios) >= 1.0
    assert rep.tail_converges is True
    assert rep.products_increasing
    assert rep.growth_factor > 10
    assert rep.all_passed


def test_counterexample_product_matches_growth_exponent(default_report):
    rep = default_report
    spec = CounterexampleSpec()
    r, P = np.array(rep.product_radii[-50:]), np.array(rep.products[-50:])
    slope = np.polyfit(np.log(r), np.log(P), 1)[0]
    assert slope == pytest.approx(spec.growth_exponent, abs=0.05)


def test_counterexample_breaks_sobolev_bound(default_report):
    bound = sobolev_bound_constant(SobolevParams(3, 1.5, talenti_constant(3, 1.5), 1.0))
    assert max(default_report.products) > bound


def test_random_admissible_pairs():
    rng = np.random.default_rng(2024)
    for _ in range(5):
        spec0 = CounterexampleSpec()
        lo, hi = spec0.beta_interval
        beta = float(rng.uniform(lo + 0.02, hi - 0.02))
        H = float(rng.uniform(h_threshold(3, 1.0) + 0.1, 12.0))
        spec = CounterexampleSpec(beta=beta, H=H)
        rep = verify_counterexample(build_counterexample(spec), spec, r_max=400.0, growth_target=1.5)
        assert rep.volume_ok and rep.tail_converges and rep.products_increasing, (beta, H)


def test_larger_H_raises_volume_ratios():
    ratios = []
    for H in (4.0, 6.0, 9.0):
        spec = CounterexampleSpec(H=H)
        rep = verify_counterexample(build_counterexample(spec), spec, r_max=200.0, growth_target=1.0)
        ratios.append(min(rep.volume_ratios))
    assert np.all(np.diff(ratios) > 0)


@pytest.mark.parametrize("kw, constraint", [
    (dict(m=3, q=2.5), "q-range"),
    (dict(beta=0.1), "beta-range"),
    (dict(beta=0.9), "beta-range"),
    (dict(H=3.5), "H-threshold"),
    (dict(gamma=0.0), "gamma"),
    (dict(smoothing_width=1.5), "smoothing-width"),
    (dict(m=1), "dimension"),
])
def test_infeasible_specs(kw, constraint):
    with pytest.raises(CounterexampleError) as err:
        build_counterexample(CounterexampleSpec(**kw))
    assert err.value.constraint == constraint


def test_report_rows_and_json(default_report):
    import json

    d = json.loads(default_report.to_json())
    assert d["all_passed"] is True
    assert set(default_report.rows()[0]) == {"r", "volume_ratio", "lower_area_product"}
