import math

import numpy as np
import pytest

from sepprob import scenarios
from sepprob.errors import ValidationError
from sepprob.numerics import CATALAN

PI = math.pi


def test_closed_examples():
    assert scenarios.closed_sepfunc("hs-23-real", 0.5) == pytest.approx(1.0)
    assert scenarios.closed_sepfunc("bures-23-complex", 0.5) == pytest.approx(
        2 * PI * (1 - math.sqrt(3) / 2), rel=1e-14)
    assert scenarios.closed_sepfunc("bures-1423-real", 2.0) == pytest.approx(PI ** 2 / 3,
                                                                             rel=1e-14)
    with pytest.raises(ValidationError):
        scenarios.closed_sepfunc("nope", 0.5)
    with pytest.raises(ValidationError):
        scenarios.closed_sepfunc("hs-23-real", 0.0)


def test_numeric_examples():
    mu = np.array([0.3, 0.8])
    np.testing.assert_allclose(scenarios.derive_sepfunc_numeric("hs-23-real", mu), 2 * mu)
    np.testing.assert_allclose(scenarios.derive_sepfunc_numeric("hs-23-quat", mu),
                               PI ** 2 * mu ** 4 / 2, rtol=1e-12)
    np.testing.assert_allclose(scenarios.derive_sepfunc_numeric("bures-23-real", mu),
                               2 * np.arcsin(mu), rtol=1e-12)


@pytest.mark.parametrize("name", scenarios.NAMES)
def test_numeric_matches_closed(name):
    mu = np.linspace(0.02, 1.0, 50)
    num = scenarios.derive_sepfunc_numeric(name, mu)
    closed = scenarios.closed_sepfunc(name, mu)
    np.testing.assert_allclose(num, closed, rtol=1e-8)


def _bures_23_normalized():
    mu = np.linspace(0.001, 1, 1000)
    return {k: scenarios.closed_sepfunc(f"bures-23-{k}", mu, normalized=True)
            for k in ("real", "complex", "quat")}


def test_bures_23_dyson_is_approximate():
    f = _bures_23_normalized()
    gaps = (np.abs(f["real"] ** 4 - f["complex"] ** 2), np.abs(f["complex"] ** 2 - f["quat"]))
    assert all(0.05 < g.max() < 0.08 for g in gaps)


@pytest.mark.xfail(strict=True, reason="measured maximal gaps are 0.068, 0.074 and 0.142")
def test_near_dyson_bures_23_within_002():
    f = _bures_23_normalized()
    assert np.max(np.abs(f["real"] ** 4 - f["complex"] ** 2)) <= 0.02
    assert np.max(np.abs(f["complex"] ** 2 - f["quat"])) <= 0.02
    assert np.max(np.abs(f["real"] ** 4 - f["quat"])) <= 0.02


def test_hs_1423_exact_dyson():
    mu = np.linspace(0.01, 3, 300)
    real = scenarios.closed_sepfunc("hs-1423-real", mu, normalized=True)
    cplx = scenarios.closed_sepfunc("hs-1423-complex", mu, normalized=True)
    np.testing.assert_allclose(cplx, real ** 2, rtol=1e-14)


@pytest.mark.parametrize("name", ["bures-1423-real", "bures-1423-complex",
                                  "bures-1423-quat", "hs-1423-real"])
def test_1423_reflection(name):
    mu = np.linspace(0.05, 0.98, 50)
    scale = scenarios.closed_sepfunc(name, 1.0)
    np.testing.assert_allclose(scenarios.closed_sepfunc(name, mu),
                               scenarios.closed_sepfunc(name, 1 / mu), rtol=1e-12,
                               atol=1e-12 * scale)


def test_23_constant_above_one():
    for name in ("bures-23-real", "bures-23-quat", "hs-23-complex"):
        assert scenarios.closed_sepfunc(name, 3.0) == scenarios.closed_sepfunc(name, 1.0)


def test_report_bures_23_complex():
    r = scenarios.scenario_report("bures-23-complex")
    assert r.total_volume == pytest.approx(PI ** 3 / 64, rel=1e-8)
    assert r.probability == pytest.approx((4 * CATALAN - 6 + PI) / PI, rel=1e-5)
    assert 0 <= r.probability <= 1
    assert r.probability == pytest.approx(r.separable_volume / r.total_volume, rel=1e-15)


def test_report_hs_23_real():
    assert scenarios.scenario_report("hs-23-real").probability == pytest.approx(
        3 * PI / 16, rel=1e-8)


def test_trunc_bures_has_no_element():
    with pytest.raises(ValidationError):
        scenarios.scenario_report("bures-23-trunc")


def test_diagonal_factor_vectorized_and_zero_outside():
    r = scenarios.diagonal_factor("hs-23-real", np.array([0.2, 0.7]), np.array([0.3, 0.5]), 0.5)
    assert r.shape == (2,) and r[0] > 0 and r[1] == 0.0
    assert isinstance(scenarios.diagonal_factor("hs-23-real", 0.2, 0.3, 0.5), float)


def test_element_12_23_real_is_finite_inside():
    v = scenarios.element_12_23_real(0.2, 0.3, 0.1, 0.2, 0.7)
    assert math.isfinite(v) and v > 0
