import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polariton_optomech import oracles
from polariton_optomech.coherence import degrees
from polariton_optomech.gaussian import (
    BathSpec,
    build_three_mode,
    build_two_colour,
    build_two_mode,
    quad_to_complex_moments,
    solve_lyapunov,
)

FIELDS = ("n_a", "n_b", "aa", "bb", "adag_b", "ab")


def assert_moments(got, want, rel=1e-9, abs_=1e-12, fields=FIELDS):
    for f in fields:
        assert getattr(got, f) == pytest.approx(getattr(want, f), rel=rel, abs=abs_), f


def moments(model, pair):
    return quad_to_complex_moments(solve_lyapunov(model), pair)


def test_two_mode_thermal_frozen_values():
    o = oracles.two_mode_thermal(1.0, 0.0, 1.0)
    # gamma = 1, n = 0, G = 1: g^2 - G^2/4 = 3/4
    assert o.n_psi == pytest.approx(1 / 6)
    assert o.n_b == pytest.approx(1 / 6)
    assert o.psi_b == pytest.approx(-1j / 3)
    assert o.var_upsilon_x == pytest.approx(1.0)
    assert o.var_lambda_x == pytest.approx(1 / 3)


@given(st.floats(0, 2), st.floats(0.01, 1.99))
@settings(max_examples=80, deadline=None)
def test_two_mode_thermal_against_pipeline(n, G):
    cov = solve_lyapunov(build_two_mode(G, 1.0, BathSpec(n)))
    o = oracles.two_mode_thermal(1.0, n, G)
    assert_moments(quad_to_complex_moments(cov, ("psi", "b")), o.moments)
    v = cov.v
    # Upsilon/Lambda are the (q_b -+ p_psi)/sqrt(2) combinations
    assert 0.5 * (v[0, 0] + v[3, 3] - 2 * v[0, 3]) == pytest.approx(o.var_upsilon_x, rel=1e-9)
    assert 0.5 * (v[0, 0] + v[3, 3] + 2 * v[0, 3]) == pytest.approx(o.var_lambda_x, rel=1e-9)
    assert v[2, 2] == pytest.approx(o.var_psi_x, rel=1e-9)
    assert v[0, 0] == pytest.approx(o.var_q, rel=1e-9)
    if n > 0:
        d = degrees(quad_to_complex_moments(cov, ("psi", "b")))
        assert d.eta_ab**2 == pytest.approx(o.eta_ab_sq, rel=1e-9)


@given(st.floats(0.01, 2), st.floats(0, 1), st.floats(0, 6.28), st.floats(0.01, 1.99))
@settings(max_examples=80, deadline=None)
def test_two_mode_squeezed_against_pipeline(n, frac, arg, G):
    import cmath

    m = frac * math.sqrt(n * (n + 1)) * cmath.exp(1j * arg)
    o = oracles.two_mode_squeezed(1.0, n, G, m)
    ms = moments(build_two_mode(G, 1.0, BathSpec(n, m)), ("psi", "b"))
    assert_moments(ms, o.moments)
    if frac > 0.01:
        d = degrees(ms)
        # moments carry ~1e-12 absolute error from O(1) covariance entries;
        # dividing by a small occupation amplifies it
        floor = 1e-12 / min(ms.n_a, ms.n_b)
        assert d.gamma1 == pytest.approx(o.gamma1, rel=1e-9, abs=floor)
        assert d.eta_aa == pytest.approx(o.eta_psi_psi, rel=1e-9, abs=floor)
        assert d.eta_bb == pytest.approx(o.eta_b_b, rel=1e-9, abs=floor)
        assert d.chi == pytest.approx(o.chi, rel=1e-9, abs=4 * floor * o.chi)


@given(st.floats(0, 2), st.floats(0, 1.9), st.floats(0, 10))
@settings(max_examples=80, deadline=None)
def test_two_colour_against_pipeline(n, G, U):
    o = oracles.two_colour(1.0, n, G, U)
    ms = moments(build_two_colour(G, U, 1.0, BathSpec(n)), ("b", "theta"))
    assert_moments(ms, o.moments)
    if n > 0 and G > 0.01:
        assert degrees(ms).eta_ab ** 2 == pytest.approx(o.eta_sq, rel=1e-9)


def test_two_colour_reduces_to_two_mode_at_zero_detuning():
    tc = oracles.two_colour(1.0, 0.4, 1.2, 0.0)
    tm = oracles.two_mode_thermal(1.0, 0.4, 1.2)
    assert tc.n_b == pytest.approx(tm.n_b)
    assert tc.n_theta == pytest.approx(tm.n_psi)
    assert tc.b_theta == pytest.approx(tm.psi_b)


@given(st.floats(0, 2), st.floats(0, 1), st.floats(0.01, 3), st.floats(0.05, 8))
@settings(max_examples=80, deadline=None)
def test_theta_pi_against_pipeline(n, frac, G, dU):
    U = G / math.sqrt(2) + dU
    m = frac * math.sqrt(n * (n + 1))
    o = oracles.three_mode_theta_pi(1.0, n, G, U, m)
    cov = solve_lyapunov(build_three_mode(G, U, 1.0, BathSpec(n, m)))
    tp = quad_to_complex_moments(cov, ("theta", "pi"))
    # <Pi^2> in reference form equals <Theta^2>; only its modulus agrees with the model
    assert_moments(tp, o.moments, fields=("n_a", "n_b", "aa", "adag_b", "ab"))
    assert abs(tp.bb) == pytest.approx(abs(o.pi_sq), rel=1e-9, abs=1e-12)
    tb = quad_to_complex_moments(cov, ("theta", "b"))
    pb = quad_to_complex_moments(cov, ("pi", "b"))
    assert tb.ab == pytest.approx(o.theta_b, rel=1e-9, abs=1e-12)
    assert pb.ab == pytest.approx(o.pi_b, rel=1e-9, abs=1e-12)
    assert tb.n_b == pytest.approx(o.n_b, rel=1e-9)
    d = degrees(tp)
    assert d.gamma1 == pytest.approx(o.gamma1, rel=1e-9)
    assert d.chi == pytest.approx(o.chi, rel=1e-9)


def test_theta_pi_squared_moment_phase_with_complex_m():
    n, m, G, U = 0.5, 0.3 + 0.4j, 1.0, 2.0
    o = oracles.three_mode_theta_pi(1.0, n, G, U, m)
    tp = quad_to_complex_moments(solve_lyapunov(build_three_mode(G, U, 1.0, BathSpec(n, m))), ("theta", "pi"))
    assert tp.aa == pytest.approx(o.theta_sq, rel=1e-9)
    # Pi^2 is the conjugate partner of Theta^2 up to the conj(m) phase
    assert tp.bb == pytest.approx(m.conjugate() * (o.theta_sq / m.conjugate()).conjugate(), rel=1e-9)
    assert abs(tp.bb) == pytest.approx(abs(o.pi_sq), rel=1e-9)


@given(st.floats(0, 2), st.floats(0.01, 3), st.floats(0.05, 8))
@settings(max_examples=60, deadline=None)
def test_a1_a2_rotated_against_pipeline(n, G, dU):
    U = G / math.sqrt(2) + dU
    o = oracles.three_mode_a1_a2_rotated(1.0, n, G, U)
    cov = solve_lyapunov(build_three_mode(G, U, 1.0, BathSpec(n), variant="a1_a2"))
    a1b = quad_to_complex_moments(cov, ("A1", "b"))
    a2b = quad_to_complex_moments(cov, ("A2", "b"))
    a12 = quad_to_complex_moments(cov, ("A1", "A2"))
    assert a1b.ab == pytest.approx(o.a1_b, rel=1e-9, abs=1e-12)
    assert a2b.ab == pytest.approx(o.a2_b, rel=1e-9, abs=1e-12)
    assert a1b.n_a == pytest.approx(o.n_a1, rel=1e-9)
    assert a2b.n_a == pytest.approx(o.n_a2, rel=1e-9)
    assert a12.adag_b == pytest.approx(o.a1dag_a2, rel=1e-9, abs=1e-12)
    assert a1b.n_b == pytest.approx(o.n_b, rel=1e-9)


def test_a1_a2_reference_forms_agree_where_consistent():
    n, G, U = 0.2, 1.0, 3.0
    ref = oracles.three_mode_a1_a2(1.0, n, G, U)
    fixed = oracles.three_mode_a1_a2_rotated(1.0, n, G, U)
    for name in ("n_b", "a2_b", "n_a2", "a1dag_a2"):
        assert getattr(ref, name) == pytest.approx(getattr(fixed, name), rel=1e-12)
    # the remaining two ref entries differ from the drift-consistent ones
    assert ref.a1_b == pytest.approx(math.sqrt(2) * fixed.a1_b, rel=1e-12)
    assert ref.n_a1 != pytest.approx(fixed.n_a1, rel=1e-3)


@pytest.mark.parametrize(
    "call",
    [
        lambda: oracles.two_mode_thermal(1.0, 0.1, 2.0),
        lambda: oracles.two_mode_thermal(1.0, -0.1, 1.0),
        lambda: oracles.two_mode_squeezed(1.0, 0.1, 1.0, 1.0),
        lambda: oracles.two_colour(1.0, 0.1, 3.0, 0.5),
        lambda: oracles.three_mode_theta_pi(1.0, 0.1, 2.0, 1.0),
        lambda: oracles.three_mode_a1_a2(1.0, 0.1, 1.0, 0.7),
    ],
)
def test_outside_stability_domain_rejected(call):
    with pytest.raises(oracles.OracleDomainError):
        call()
