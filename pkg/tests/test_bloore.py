import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sepprob import bloore
from sepprob.algebra import partial_transpose, psd_check
from sepprob.errors import ValidationError


def _w_two_qubit(entries, beta=1):
    comps = np.zeros((6, beta))
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for (i, j), v in entries.items():
        comps[pairs.index((i, j))] = v
    return bloore.make_sample("two-qubit", beta, comps)


def test_canonical_diag_examples():
    np.testing.assert_allclose(bloore.canonical_diag("two-qubit", 1.0), [0.25] * 4)
    np.testing.assert_allclose(bloore.canonical_diag("qubit-qutrit", (1, 1)), [1 / 6] * 6)
    d = bloore.canonical_diag("two-qubit", 0.5)
    np.testing.assert_allclose(d, [1 / 6, 1 / 3, 1 / 3, 1 / 6])
    assert d[0] * d[3] / (d[1] * d[2]) == pytest.approx(0.25, rel=1e-15)
    with pytest.raises(ValidationError):
        bloore.canonical_diag("two-qubit", 0.0)


def test_canonical_diag_ratios_round_trip(rng):
    for _ in range(50):
        mu = rng.uniform(0.01, 1)
        assert bloore.ratios("two-qubit", bloore.canonical_diag("two-qubit", mu)) == \
            pytest.approx(mu, rel=1e-14)
        nu = tuple(rng.uniform(0.01, 1, 2))
        got = bloore.ratios("qubit-qutrit", bloore.canonical_diag("qubit-qutrit", nu))
        np.testing.assert_allclose(got, nu, rtol=1e-14)


def test_assemble_state_examples():
    diag = np.array([0.1, 0.2, 0.3, 0.4])
    np.testing.assert_allclose(bloore.assemble_state(diag, np.eye(4)), np.diag(diag))
    s = _w_two_qubit({(1, 2): 1.0})
    rho = bloore.assemble_state([0.25] * 4, s)
    assert rho[1, 2] == pytest.approx(0.25)
    assert np.trace(rho) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        bloore.assemble_state([0.5, 0.5, 0.0, 0.0], np.eye(4))


def test_assemble_state_psd_iff_w_psd(rng):
    for _ in range(1000):
        s = bloore.make_sample("two-qubit", 2, rng.uniform(-1, 1, 12) * 0.6)
        diag = rng.dirichlet(np.ones(4))
        rho = bloore.assemble_state(diag, s)
        ev = np.linalg.eigvalsh(rho).min()
        assert (ev >= -1e-12) == s.feasible or abs(ev) < 1e-10


def test_identity_w_always_separable():
    s = bloore.make_sample("two-qubit", 1, np.zeros(6))
    assert all(bloore.ppt_verdict(s, mu) for mu in (0.01, 0.3, 1.0))
    s4 = bloore.make_sample("two-qubit", 4, np.zeros(24))
    assert bloore.ppt_verdict(s4, 0.2)


@pytest.mark.parametrize("x", [-0.9, -0.4, 0.25, 0.6, 0.99])
def test_single_w23_threshold(x):
    s = _w_two_qubit({(1, 2): x})
    for mu in np.linspace(0.05, 1.0, 20):
        if abs(mu - abs(x)) < 1e-9:
            continue
        assert bloore.ppt_verdict(s, mu) == (mu >= abs(x))


def test_single_w14_minor():
    s = _w_two_qubit({(0, 3): 0.5})
    assert bloore.ppt_verdict(s, 1.0)
    # 1 - mu^2 w14^2 >= 0 is always true for |w14| <= 1, mu <= 1
    assert all(bloore.ppt_verdict(s, mu) for mu in np.linspace(0.05, 1, 10))


def test_ppt_verdict_rejects_infeasible():
    s = _w_two_qubit({(0, 1): 0.9, (0, 2): 0.9, (1, 2): -0.9})
    assert not s.feasible
    with pytest.raises(ValidationError):
        bloore.ppt_verdict(s, 0.5)


def _random_feasible(rng, system, beta):
    n = bloore.n_offdiag(system)
    while True:
        s = bloore.make_sample(system, beta, rng.uniform(-1, 1, n * beta) * 0.5)
        if s.feasible:
            return s


@pytest.mark.parametrize("system,beta", [("two-qubit", 1), ("two-qubit", 2),
                                         ("two-qubit", 4), ("qubit-qutrit", 1),
                                         ("qubit-qutrit", 2)])
def test_diagonal_invariance(rng, system, beta):
    violations = 0
    cases = 1000 if beta <= 2 else 200
    for _ in range(cases):
        s = _random_feasible(rng, system, beta)
        point = rng.uniform(0.05, 1.0) if system == "two-qubit" else rng.uniform(0.05, 1, 2)
        ref = bloore.ppt_verdict(s, point)
        for _ in range(10):
            d = bloore.random_diag_with_ratio(system, point, rng)
            violations += bloore.ppt_verdict(s, point, diag=d) != ref
    assert violations == 0


def test_canonical_matches_direct_noncanonical(rng):
    for beta in (1, 2):
        for _ in range(300):
            s = _random_feasible(rng, "two-qubit", beta)
            mu = rng.uniform(0.05, 1)
            d = bloore.random_diag_with_ratio("two-qubit", mu, rng)
            rho = bloore.assemble_state(d, s)
            direct = np.linalg.eigvalsh(partial_transpose(rho, 2)).min() >= -1e-12
            assert bloore.ppt_verdict(s, mu) == direct


def test_samplers_agree_on_feasibility_law(rng):
    # onion output is always feasible with unit diagonal
    u = rng.random((500, bloore.sample_dimension("two-qubit", 2, "onion")))
    W, feas = bloore.cube_to_W("two-qubit", 2, u, "onion")
    assert feas.all()
    np.testing.assert_allclose(np.diagonal(W, axis1=1, axis2=2), 1.0)
    assert np.all(np.abs(W) <= 1 + 1e-12)
    with pytest.raises(ValidationError):
        bloore.cube_to_W("two-qubit", 3, rng.random((2, 15)), "onion")


def test_jacobian_boundary_and_methods():
    # J vanishes like mu^(3 beta + 1) at the boundary
    assert bloore.jacobian_J(1e-4, 1) < 1e-12 * bloore.jacobian_J(1.0, 1)
    for beta in (1, 2, 4):
        for mu in (0.2, 0.7):
            d = bloore.jacobian_J(mu, beta, "direct")
            assert bloore.jacobian_J(mu, beta, "reduced") == pytest.approx(d, rel=1e-6)
            assert bloore.jacobian_J(mu, beta, "closed") == pytest.approx(d, rel=1e-6)


@pytest.mark.parametrize("beta", [1, 2, 3, 4])
def test_jacobian_normalization(beta):
    val, _ = bloore.jacobian_integral(beta)
    assert val == pytest.approx(bloore.jacobian_normalization(beta), rel=1e-6)


def test_jacobian_beta1_oracle():
    assert bloore.jacobian_normalization(1) == pytest.approx(81 * math.pi ** 2 / 92897280,
                                                             rel=1e-14)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_jacobian_reflection(beta):
    for mu in np.linspace(0.05, 0.95, 20):
        a = bloore.jacobian_J(mu, beta, "reduced")
        b = bloore.jacobian_J(1 / mu, beta, "reduced") / mu ** 2
        assert b == pytest.approx(a, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 1.0))
def test_real_w23_verdict_matches_principal_minor(mu):
    x = 0.5
    s = _w_two_qubit({(1, 2): x})
    d = bloore.canonical_diag("two-qubit", mu)
    rho = bloore.assemble_state(d, s)
    pt = partial_transpose(rho, 2)
    minor = pt[0, 0] * pt[3, 3] - abs(pt[0, 3]) ** 2
    assert bloore.ppt_verdict(s, mu) == (minor >= -1e-12 * 0.25 or psd_check(pt).is_psd)
