import math

import numpy as np
import pytest

from modelcap.capacity import (
    cap_exact_model,
    cap_upper_surface,
    cap_upper_volume,
    capacity_bounds,
    classify_parabolicity,
)
from modelcap.geometry import cusp, cylinder, euclidean, hyperbolic
from modelcap.profiles import DomainError

E = math.e


def cusp_energy(p, r1, r2):
    return 2 * math.pi * (p - 1) ** (1 - p) * (math.exp(r2 / (p - 1)) - math.exp(r1 / (p - 1))) ** (1 - p)


def test_euclidean_classical_value(r3):
    val = cap_exact_model(r3, 2, 1.0, 2.0)
    assert val == pytest.approx(8 * math.pi, rel=1e-14)
    for r1, r2 in [(0.5, 3.0), (2.0, 7.0)]:
        assert cap_exact_model(r3, 2, r1, r2) == pytest.approx(4 * math.pi / (1 / r1 - 1 / r2), rel=1e-13)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_cusp_closed_form(cusp2, p):
    assert cap_exact_model(cusp2, p, 1.0, 2.0) == pytest.approx(cusp_energy(p, 1.0, 2.0), rel=1e-13)


def test_cusp_examples(cusp2):
    assert cap_exact_model(cusp2, 2, 1.0, 2.0) == pytest.approx(2 * math.pi / (E ** 2 - E), rel=1e-14)
    ref = 2 * math.pi * 2 ** -2 * (E - E ** 0.5) ** -2
    assert cap_upper_surface(cusp2, 3, 1.0, 2.0) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("fn", [cap_exact_model, cap_upper_surface, cap_upper_volume])
def test_domain_errors(r3, fn):
    with pytest.raises(DomainError):
        fn(r3, 2, 2.0, 1.0)
    with pytest.raises(DomainError):
        fn(r3, 2, 0.0, 1.0)


def test_volume_bound_example(r3):
    from scipy.integrate import quad

    # independent oracle: b(t) = 3 / (4 pi (t^3 - 1)) * (t - 1)
    integral = quad(lambda t: 3 * (t - 1) / (4 * math.pi * (t ** 3 - 1)) if t > 1 else 3 / (12 * math.pi),
                    1.0, 2.0, epsabs=1e-14, epsrel=1e-13)[0]
    v = cap_upper_volume(r3, 2, 1.0, 2.0)
    assert v == pytest.approx(4 / integral, rel=1e-10)
    assert v >= 8 * math.pi
    assert cap_upper_volume(r3, 2, 1.0, 2.0, "improved_p") == pytest.approx(v / 2, rel=1e-14)
    with pytest.raises(ValueError):
        cap_upper_volume(r3, 2, 1.0, 2.0, "other")


def test_volume_bound_degenerate(r3):
    exact = cap_exact_model(r3, 2, 1.0, 1.001)
    vol = cap_upper_volume(r3, 2, 1.0, 1.001)
    assert vol > 1e3
    # b_p -> a_p(r1) near the inner radius, so the ratio tends to 2^p
    assert vol / exact == pytest.approx(4.0, rel=1e-2)


MODELS = [euclidean(2), euclidean(3), euclidean(4), cusp(), hyperbolic(2), cylinder(2, 0.7)]


@pytest.mark.parametrize("M", MODELS, ids=lambda M: M.name)
def test_ordering_and_surface_agreement(M):
    rng = np.random.default_rng(11)
    for _ in range(10):
        p = rng.uniform(1.2, 5.0)
        r1 = rng.uniform(0.2, 4.0)
        r2 = r1 + rng.uniform(0.05, 6.0)
        b = capacity_bounds(M, p, r1, r2)
        assert b.surface_bound == pytest.approx(b.exact_model, rel=1e-9)
        assert b.exact_model <= b.volume_bound * (1 + 1e-9)
        assert 0 < b.tightness_volume <= 1 + 1e-9


@pytest.mark.parametrize("M", MODELS, ids=lambda M: M.name)
def test_monotone_in_radii(M):
    r2s = np.linspace(2.5, 8.0, 12)
    caps = [cap_exact_model(M, 2.5, 2.0, r2) for r2 in r2s]
    assert np.all(np.diff(caps) < 0)
    r1s = np.linspace(0.5, 4.0, 12)
    caps = [cap_exact_model(M, 2.5, r1, 5.0) for r1 in r1s]
    assert np.all(np.diff(caps) > 0)


@pytest.mark.parametrize(
    "M, p, verdict",
    [(euclidean(2), 2, "parabolic"), (euclidean(3), 2, "non-parabolic"), (euclidean(2), 2, "parabolic"),
     (euclidean(3), 3, "parabolic"), (euclidean(4), 4, "parabolic"), (euclidean(4), 3, "non-parabolic"),
     (cusp(), 2, "parabolic"), (hyperbolic(2), 2, "non-parabolic"), (cylinder(2), 2, "parabolic")],
)
def test_parabolicity_table(M, p, verdict):
    v = classify_parabolicity(M, p)
    assert v.verdict == verdict
    if verdict == "non-parabolic":
        assert math.isfinite(v.certificate) and v.certificate > 0
    else:
        assert v.tail.verdict() == "diverges"


def test_parabolicity_certificates():
    assert classify_parabolicity(euclidean(3), 2).certificate == pytest.approx(1 / (4 * math.pi), abs=1e-12)
    h = classify_parabolicity(hyperbolic(2), 2).certificate
    assert h == pytest.approx(-math.log(math.tanh(0.5)) / (2 * math.pi), rel=1e-9)


@pytest.mark.parametrize("M", [euclidean(2), cusp(), cylinder(2)], ids=lambda M: M.name)
def test_parabolic_capacity_tends_to_zero(M):
    caps = [cap_exact_model(M, 2, 1.0, r2) for r2 in (10, 20, 40, 80)]
    assert np.all(np.diff(caps) < 0)
    assert caps[-1] < 0.55 * caps[0]


def test_planar_capacity_logarithmic_decay():
    for r2 in (10.0, 1e3, 1e6):
        assert cap_exact_model(euclidean(2), 2, 1.0, r2) == pytest.approx(2 * math.pi / math.log(r2), rel=1e-12)


def test_undetermined_tail():
    from modelcap.geometry import ModelManifold
    from modelcap.profiles import INF, Segment, Tabulated, WarpingProfile

    h = WarpingProfile([Segment(Tabulated((0.0, 1.0, 2.0), (0.2, 1.0, 2.0)), 0.0, INF)])
    v = classify_parabolicity(ModelManifold(2, h), 2)
    assert v.verdict == "undetermined" and v.certificate is None


def test_rows_match_csv_columns(r3):
    row = capacity_bounds(r3, 2, 1.0, 2.0).as_row()
    assert set(row) == {"p", "r1", "r2", "exact_model", "surface_bound", "volume_bound", "tightness_volume"}


def test_overflowing_annulus_has_zero_capacity():
    from modelcap.geometry import cusp

    b = capacity_bounds(cusp(2), 2, 1.0, 1000.0)
    assert b.exact_model == 0.0 and b.surface_bound == 0.0
    assert math.isnan(b.tightness_surface)
