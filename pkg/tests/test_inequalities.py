import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modelcap.inequalities import (
    estimate_Cp,
    estimate_Cp_record,
    fA_negpart_bound_check,
    lindqvist_lhs,
    lindqvist_ratio,
    negpart_profile,
    psi,
    tmax_check,
)


def cp_oracle(p):
    # antipodal pairs give 2^{1-p}; nearly parallel pairs give (p-1) 2^{1-p}
    return 2.0 ** (1 - p) * min(1.0, p - 1)


vec = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3).map(np.array)


@pytest.mark.parametrize("p, expected", [(2, 0.5), (3, 0.25), (4, 0.125), (1.5, 0.35355), (1.2, 0.1741)])
def test_cp_oracle_values(p, expected):
    assert cp_oracle(p) == pytest.approx(expected, abs=5e-5)


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 2.5, 3.0, 4.0])
def test_estimate_matches_oracle(p):
    est = estimate_Cp(p, 2, 100_000, seed=7)
    assert est == pytest.approx(cp_oracle(p), rel=1e-3)
    assert est >= cp_oracle(p) * (1 - 1e-6)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_estimate_holds_on_fresh_samples(p):
    est = estimate_Cp(p, 3, 20_000, seed=1)
    rng = np.random.default_rng(99)
    x, y = rng.standard_normal((100_000, 3)), rng.standard_normal((100_000, 3))
    assert np.all(lindqvist_lhs(x, y, p) >= 2 * est * psi(x, y, p) * (1 - 1e-12))


def test_estimate_is_seeded():
    a = estimate_Cp_record(2.5, 2, 5000, 3)
    assert a == estimate_Cp_record(2.5, 2, 5000, 3)
    assert a.to_dict()["seed"] == 3


@pytest.mark.parametrize("kw", [dict(p=1.0), dict(p=2.0, n=0), dict(p=2.0, sample_count=10)])
def test_estimate_rejects_bad_input(kw):
    args = dict(p=2.0, n=2, sample_count=1000, seed=0)
    args.update(kw)
    with pytest.raises(ValueError):
        estimate_Cp_record(**args)


@pytest.mark.parametrize("p", [1.3, 2.0, 3.5])
@settings(max_examples=60, deadline=None)
@given(x=vec, y=vec, s=st.floats(1e-3, 1e3))
def test_symmetry_and_homogeneity(p, x, y, s):
    assert psi(x, y, p) == pytest.approx(psi(y, x, p), rel=1e-12, abs=1e-300)
    assert lindqvist_lhs(x, y, p) == pytest.approx(lindqvist_lhs(y, x, p), rel=1e-9, abs=1e-9)
    assert psi(s * x, s * y, p) == pytest.approx(s ** p * psi(x, y, p), rel=1e-9, abs=1e-300)
    assert lindqvist_lhs(s * x, s * y, p) == pytest.approx(s ** p * lindqvist_lhs(x, y, p), rel=1e-9, abs=1e-6)
    assert lindqvist_lhs(x, y, p) >= -1e-9


def test_psi_zero_limit():
    z = np.zeros(2)
    assert psi(z, z, 1.5) == 0.0
    assert lindqvist_lhs(z, np.array([1.0, 0.0]), 1.5) == pytest.approx(1.0)
    assert lindqvist_ratio(np.array([1.0, 0.0]), np.array([-1.0, 0.0]), 3.0) == pytest.approx(0.25)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        psi(np.zeros(2), np.zeros(3), 2)


@pytest.mark.parametrize("A, argmax, value", [(1.0, 2.0, None), (4.0, 8.0, 0.3849), (100.0, 200.0, None)])
def test_tmax(A, argmax, value):
    res = tmax_check(A)
    assert res.argmax == pytest.approx(argmax, rel=1e-9)
    assert res.increasing
    assert res.value == pytest.approx(4 * A / (3 * A) ** 1.5, rel=1e-12)
    if value is not None:
        assert res.value == pytest.approx(value, abs=5e-5)


def test_tmax_value_unit():
    assert tmax_check(1.0).value == pytest.approx(0.7698, abs=5e-5)


@settings(max_examples=100, deadline=None)
@given(A=st.floats(1.0001, 1e4), t=st.floats(0, 1e6), du=st.floats(0, 1e3), dv=st.floats(0, 1e3))
def test_negpart_bound(A, t, du, dv):
    assert fA_negpart_bound_check(du, dv, t, A)
    assert negpart_profile(t, A) <= negpart_profile(2 * A, A) * (1 + 1e-12)


def test_negpart_rejects_bad_input():
    with pytest.raises(ValueError):
        fA_negpart_bound_check(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        fA_negpart_bound_check(-1.0, 1.0, 1.0, 2.0)
