import math

import numpy as np
import pytest

from modelcap.capacity import cap_exact_model
from modelcap.cutoffs import (
    PlateauTruncation,
    custom_cutoff,
    custom_energy,
    energy_sweep,
    phi_cutoff,
    phi_energy,
    phi_energy_quadrature,
    phi_eval,
    piecewise_linear_profile,
    plateau_value,
    random_cutoff,
    xi_cutoff,
    xi_energy_bound,
)
from modelcap.geometry import EvansPotential, GeodesicRadius, cusp, cylinder, euclidean, hyperbolic
from modelcap.profiles import DomainError

E = math.e


def cusp_energy(p, r1, r2):
    return 2 * math.pi * (p - 1) ** (1 - p) * (math.exp(r2 / (p - 1)) - math.exp(r1 / (p - 1))) ** (1 - p)


def test_phi_boundary_values(r3):
    assert phi_eval(r3, 2, 1.0, 2.0, 1.0) == 1.0
    assert phi_eval(r3, 2, 1.0, 2.0, 0.3) == 1.0
    assert phi_eval(r3, 2, 1.0, 2.0, 2.0) == 0.0
    assert phi_eval(r3, 2, 1.0, 2.0, 9.0) == 0.0
    with pytest.raises(DomainError):
        phi_eval(r3, 2, 2.0, 1.0, 1.5)


def test_phi_euclidean_closed_form(r3):
    # (1/1.5 - 1/2) / (1 - 1/2)
    assert phi_eval(r3, 2, 1.0, 2.0, 1.5) == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_phi_affine_on_constant_area():
    M = cylinder(2, 1.3)
    assert phi_eval(M, 3.0, 2.0, 6.0, 4.0) == pytest.approx(0.5, rel=1e-14)


def test_phi_strictly_decreasing(cusp2):
    vals = [phi_eval(cusp2, 2.5, 1.0, 3.0, r) for r in np.linspace(1.0, 3.0, 30)]
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
@pytest.mark.parametrize("r1, r2", [(1.0, 2.0), (2.0, 4.0), (1.5, 3.0)])
def test_phi_energy_cusp(cusp2, p, r1, r2):
    assert phi_energy(cusp2, p, r1, r2) == pytest.approx(cusp_energy(p, r1, r2), rel=1e-12)


def test_phi_energy_examples(r3, cusp2):
    assert phi_energy(cusp2, 2, 1.0, 2.0) == pytest.approx(2 * math.pi / (E ** 2 - E), rel=1e-14)
    assert phi_energy(r3, 2, 1.0, 2.0) == pytest.approx(8 * math.pi, rel=1e-14)


@pytest.mark.parametrize("M", [euclidean(3), cusp(), hyperbolic(2)], ids=lambda M: M.name)
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_phi_energy_equals_capacity_and_quadrature(M, p):
    e = phi_energy(M, p, 0.7, 2.9)
    assert e == pytest.approx(cap_exact_model(M, p, 0.7, 2.9), rel=1e-12)
    assert phi_energy_quadrature(M, p, 0.7, 2.9) == pytest.approx(e, rel=1e-8)


def test_xi_bound_examples(cusp2):
    bound = xi_energy_bound(cusp2, 2, 1.0, 2.0, 0.0)
    assert bound == pytest.approx(2 * math.pi * (E ** -1 - E ** -2), rel=1e-14)
    assert bound > phi_energy(cusp2, 2, 1.0, 2.0)
    assert xi_energy_bound(cusp2, 2, 1.0, 2.0, 0.5) == pytest.approx(2.25 * bound, rel=1e-14)
    assert xi_energy_bound(cusp2, 2, 1.0, 50.0) < 1e-3
    with pytest.raises(ValueError):
        xi_energy_bound(cusp2, 2, 1.0, 2.0, -0.1)


def test_xi_cutoff_energy_below_bound(r3):
    xi = xi_cutoff(1.0, 2.0, 1e-3)
    assert xi(1.0) == 1.0 and xi(2.0) == 0.0
    assert custom_energy(r3, 2, xi) <= xi_energy_bound(r3, 2, 1.0, 2.0, 1e-3)


def test_linear_ramp_energy(r3):
    ramp = custom_cutoff(piecewise_linear_profile([1.0, 2.0], [1.0, 0.0]), 1.0, 2.0)
    assert custom_energy(r3, 2, ramp) == pytest.approx(28 * math.pi / 3, rel=1e-14)
    assert custom_energy(r3, 2, ramp) >= 8 * math.pi


def test_phi_self_comparison(cusp2):
    assert custom_energy(cusp2, 2, phi_cutoff(cusp2, 2, 1.0, 2.0)) == phi_energy(cusp2, 2, 1.0, 2.0)


def test_custom_validation():
    with pytest.raises(ValueError, match="equal 1"):
        custom_cutoff(piecewise_linear_profile([1.5, 2.0], [0.8, 0.0]), 1.0, 2.0)
    with pytest.raises(ValueError, match="vanish"):
        custom_cutoff(piecewise_linear_profile([1.0, 2.0], [1.0, 0.1]), 1.0, 2.0)
    with pytest.raises(ValueError, match="values in"):
        custom_cutoff(piecewise_linear_profile([1.0, 1.5, 2.0], [1.0, 1.4, 0.0]), 1.0, 2.0)


def test_custom_smooth_profile_uses_quadrature(r3):
    class Cos:
        def __call__(self, r):
            r = np.asarray(r, dtype=float)
            return np.where(r <= 1, 1.0, np.where(r >= 2, 0.0, 0.5 + 0.5 * np.cos(math.pi * (r - 1))))

        def derivative(self, r):
            return -0.5 * math.pi * math.sin(math.pi * (r - 1)) if 1 < r < 2 else 0.0

    psi = custom_cutoff(Cos(), 1.0, 2.0)
    from scipy.integrate import quad

    ref = quad(lambda s: (0.5 * math.pi * math.sin(math.pi * (s - 1))) ** 2 * 4 * math.pi * s ** 2, 1, 2)[0]
    assert custom_energy(r3, 2, psi) == pytest.approx(ref, rel=1e-10)


def test_random_cutoffs_are_admissible_and_seeded():
    a = random_cutoff(1.0, 3.0, np.random.default_rng(5))
    b = random_cutoff(1.0, 3.0, np.random.default_rng(5))
    ts = np.linspace(0.5, 4.0, 200)
    assert np.array_equal(a(ts), b(ts))
    custom_cutoff(a.values, 1.0, 3.0)
    assert np.all(np.diff(a(np.linspace(1.0, 3.0, 500))) <= 1e-15)


@pytest.mark.parametrize("M", [euclidean(3), cusp(), hyperbolic(3)], ids=lambda M: M.name)
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_jensen_optimality_sampled(M, p):
    rng = np.random.default_rng(1000 + int(10 * p))
    floor = phi_energy(M, p, 1.0, 2.5)
    for _ in range(25):
        psi = random_cutoff(1.0, 2.5, rng)
        assert custom_energy(M, p, psi) >= floor * (1 - 1e-9)


def test_asymptotic_separation_on_cusp(cusp2):
    rs = np.arange(5, 21)
    phi = np.array([phi_energy(cusp2, 2, r, 2 * r) for r in rs])
    xi = np.array([xi_energy_bound(cusp2, 2, r, 2 * r) for r in rs])
    a, b = phi * np.exp(2 * rs), xi * rs ** 2 * np.exp(rs)
    assert a.max() / a.min() < 3 and b.max() / b.min() < 3
    assert np.all(np.diff(phi / xi) < 0)


def test_energy_sweep_rows(cusp2):
    rows = energy_sweep(cusp2, 2, [5.0, 6.0])
    assert rows[0]["ratio"] == pytest.approx(rows[0]["phi_energy"] / rows[0]["xi_bound"])
    unit = energy_sweep(cusp2, 2, [5.0], per_unit_sphere=True)[0]
    assert unit["phi_energy"] == pytest.approx(rows[0]["phi_energy"] / (2 * math.pi))


@pytest.mark.parametrize("fval, expected", [(0.0, 2.0), (6.0, 0.0), (3.0, 1.0), (1.9, 2.0), (4.0, 0.0)])
def test_plateau_values(fval, expected):
    assert plateau_value(fval, 2.0) == pytest.approx(expected)


def test_plateau_derivative_support(cusp2):
    f = EvansPotential(cusp2, 2)
    r = 1.5
    ft = PlateauTruncation(f, r)
    for x in np.linspace(1.0, 5.0, 200):
        fx = f(x)
        d = ft.derivative(x)
        if r <= fx < 2 * r:
            assert d == pytest.approx(-f.derivative(x))
        else:
            assert d == 0.0
    g = PlateauTruncation(GeodesicRadius(), 2.0)
    assert g(1.0) == 2.0 and g(5.0) == 0.0 and g(3.0) == 1.0
    with pytest.raises(ValueError):
        PlateauTruncation(f, 0.0)
