import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from hermitian_ep.model import ReservoirSpec
from hermitian_ep.reduced import (
    ReducedParams,
    decay_rate,
    eigensystem,
    ep_coupling,
    generator,
    ratio_propagator,
    reduced_params,
    solve_reduced,
)

rates = st.floats(1e-4, 0.1)


def test_golden_rule_rates(fig2):
    assert decay_rate(ReservoirSpec(40, 5e-3, 1.5e-3)) == pytest.approx(1.4137e-3, rel=1e-4)
    assert decay_rate(ReservoirSpec(40, 5e-3, 2 * math.sqrt(10) * 1e-3)) == pytest.approx(8e-3 * math.pi, rel=1e-12)
    assert decay_rate(ReservoirSpec(0, 5e-3, 1.0)) == 0.0
    p = reduced_params(fig2.system)
    assert p.gamma2 == pytest.approx(math.sqrt(2) * p.gamma1, rel=1e-12)


def test_fig6_ep_coupling():
    from hermitian_ep.config import load_config

    assert load_config(preset="fig6a").ep_coupling() == pytest.approx(8.12e-3, rel=1e-3)


def test_eigenvalues_above_ep():
    p = ReducedParams(1.0, 0.0125, 0.03, 0.01)
    e = eigensystem(p)
    assert e.lambda1.real == pytest.approx(-0.02, abs=1e-15)
    assert e.lambda2.real == pytest.approx(-0.02, abs=1e-15)
    assert abs(e.lambda1.imag - e.lambda2.imag) == pytest.approx(0.015, rel=1e-12)
    assert not e.coalesced


def test_eigenvalues_below_ep_slow_first():
    p = ReducedParams(1.0, 0.006, 0.03, 0.01)
    e = eigensystem(p)
    assert e.lambda1.real > e.lambda2.real
    assert e.lambda1.imag == e.lambda2.imag == -1.0


@settings(max_examples=200, deadline=None)
@given(g1=rates, g2=rates, x=st.one_of(st.floats(0, 3), st.floats(1 - 1e-8, 1 + 1e-8)))
def test_eigenpairs_satisfy_generator(g1, g2, x):
    w_ep = abs(g1 - g2) / 2
    p = ReducedParams(1.0, x * w_ep, g1, g2)
    e = eigensystem(p)
    G = generator(p)
    for lam, h in ((e.lambda1, e.h1), (e.lambda2, e.h2)):
        assert np.linalg.norm(h) == pytest.approx(1.0, rel=1e-12)
        assert h[1].imag == 0 and h[1].real >= 0
        res = np.linalg.norm(G @ h - lam * h) / abs(lam)
        if e.coalesced:
            # the pair is snapped together; the residual is bounded by the dropped splitting
            assert res <= 2 * math.sqrt(2e-8) * max(w_ep, p.coupling) / abs(lam) + 1e-15
        else:
            assert res < 1e-12
    assert e.lambda1 + e.lambda2 == pytest.approx(np.trace(G), abs=1e-13)


@settings(max_examples=100, deadline=None)
@given(g1=rates, g2=rates, x=st.floats(0, 3))
def test_dichotomy(g1, g2, x):
    w_ep = abs(g1 - g2) / 2
    p = ReducedParams(1.0, x * w_ep, g1, g2)
    e = eigensystem(p)
    same = abs(e.lambda1.real - e.lambda2.real) <= 1e-12
    assert same == (p.coupling >= w_ep)


def test_coalescence_flag_and_overlap():
    p = ReducedParams(1.0, 0.01, 0.03, 0.01)
    e = eigensystem(p)
    assert e.coalesced
    assert e.lambda1 == e.lambda2
    assert abs(np.vdot(e.h1, e.h2)) > 1 - 1e-6
    near = eigensystem(p.with_coupling(0.01 * (1 + 1e-6)))
    assert abs(np.vdot(near.h1, near.h2)) > 1 - 1e-3


def test_decoupled_basis():
    e = eigensystem(ReducedParams(1.0, 0.0, 0.03, 0.01))
    np.testing.assert_array_equal(e.h1, [0, 1])
    assert e.lambda1 == complex(-0.01, -1.0)


def test_ep_coupling():
    assert ep_coupling(ReducedParams(1.0, 0.0, 0.01, 0.03)) == pytest.approx(0.01)


def _ivp(p, a0, t):
    G = generator(p)
    sol = solve_ivp(lambda _, y: G @ y, (0, t[-1]), np.asarray(a0, dtype=complex), t_eval=t,
                    rtol=1e-12, atol=1e-14, method="DOP853")
    return sol.y


@pytest.mark.parametrize("w", [0.0, 0.004, 0.01, 0.0125, 0.03])
def test_solution_matches_numerical_integration(w):
    p = ReducedParams(1.0, w, 0.03, 0.01)
    t = np.linspace(0, 400, 201)
    a1, a2 = solve_reduced(p, 0.6, 0.8j, t)
    y = _ivp(p, [0.6, 0.8j], t)
    np.testing.assert_allclose(a1, y[0], atol=1e-8)
    np.testing.assert_allclose(a2, y[1], atol=1e-8)


def test_solution_continuous_across_ep():
    t = np.linspace(0, 300, 31)
    at = np.array(solve_reduced(ReducedParams(1.0, 0.01, 0.03, 0.01), 1, 1, t))
    near = np.array(solve_reduced(ReducedParams(1.0, 0.01 * (1 + 1e-7), 0.03, 0.01), 1, 1, t))
    np.testing.assert_allclose(at, near, atol=1e-6)


def test_solution_scalar_time():
    a1, a2 = solve_reduced(ReducedParams(1.0, 0.005, 0.03, 0.01), 1.0, 0.0, 0.0)
    assert (a1, a2) == (1.0, 0.0)
    with pytest.raises(ValueError):
        solve_reduced(ReducedParams(1.0, 0.005, 0.03, 0.01), 0, 0, 1.0)


@pytest.mark.parametrize("w", [0.003, 0.01, 0.02])
def test_ratio_propagator_preserves_ratio(w):
    p = ReducedParams(1.0, w, 0.03, 0.01)
    t = np.linspace(0, 500, 51)
    a1, a2 = solve_reduced(p, 0.3 + 0.1j, 0.7, t)
    U = ratio_propagator(p, t)
    b = U @ np.array([0.3 + 0.1j, 0.7])
    np.testing.assert_allclose(b[:, 0] / b[:, 1], a1 / a2, rtol=1e-9)


def test_ratio_propagator_bounded_on_long_horizon():
    p = ReducedParams(1.0, 0.002, 0.03, 0.01)
    U = ratio_propagator(p, np.array([1e5]))
    assert np.all(np.isfinite(U)) and np.abs(U).max() < 10


def test_negative_rates_rejected():
    with pytest.raises(ValueError):
        ReducedParams(1.0, 0.0, -0.01, 0.0)


@pytest.mark.parametrize("w", [1e-300, 1e-12, 1e-3])
def test_equal_rates_any_coupling_is_above_ep(w):
    # Omega_EP = 0: the symmetric and antisymmetric modes, no coalescence.
    e = eigensystem(ReducedParams(1.0, w, 0.02, 0.02))
    assert not e.coalesced
    np.testing.assert_allclose(np.abs(e.h1), [2**-0.5, 2**-0.5], rtol=1e-12)
    assert abs(np.vdot(e.h1, e.h2)) < 1e-12
