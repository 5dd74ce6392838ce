import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from pulseforge.core import CayleyKlein, ErrorModel, Pulse, cayley_klein_of, constant_envelope, unitarity_defect
from pulseforge.majorana import lift, populations_from_ck, populations_from_reduced, reduce
from pulseforge.propagate import propagate_constant_two_level, propagate_numeric
from pulseforge.pulses import CASE1_KINDS, make_case1, make_case2

SQRT2 = np.sqrt(2.0)


def spin1_hamiltonian(omega, delta):
    return 0.5 * np.array([[-2 * delta, omega, 0], [omega, 0, omega], [0, omega, 2 * delta]])


def test_lift_examples():
    np.testing.assert_allclose(lift(CayleyKlein(1.0, 0.0)), np.eye(3))
    assert abs(lift(CayleyKlein(0.0, -1j))[2, 0]) == pytest.approx(1.0)
    ck = CayleyKlein(0.6, 0.8j)
    col = np.abs(lift(ck)[:, 0]) ** 2
    np.testing.assert_allclose(col, [0.1296, 0.4608, 0.4096], atol=1e-12)
    np.testing.assert_allclose(populations_from_ck(ck), col, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(omega=st.floats(-15, 15), delta=st.floats(-15, 15), d=st.floats(0.0, 2.0))
def test_lift_is_the_spin1_exponential(omega, delta, d):
    ck = propagate_constant_two_level(omega, delta, d)
    U3 = lift(ck)
    assert unitarity_defect(U3) < 1e-10
    np.testing.assert_allclose(U3, expm(-1j * spin1_hamiltonian(omega, delta) * d), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(omega=st.floats(-10, 10), delta=st.floats(-10, 10))
def test_lift_preserves_products_of_powers(omega, delta):
    U = propagate_constant_two_level(omega, delta, 1.0).matrix()
    lhs = lift(cayley_klein_of(U @ U))
    L = lift(cayley_klein_of(U))
    np.testing.assert_allclose(lhs, L @ L, atol=1e-8)


def test_population_examples():
    assert populations_from_ck(CayleyKlein(0.0, 1.0)) == (0.0, 0.0, 1.0)
    assert populations_from_ck(CayleyKlein(1.0, 0.0)) == (1.0, 0.0, 0.0)
    s = np.sqrt(0.5)
    np.testing.assert_allclose(populations_from_ck(CayleyKlein(s, s)), (0.25, 0.5, 0.25))


def test_populations_from_reduced_ignores_global_phase():
    U = propagate_constant_two_level(2.0, 0.7, 1.0).matrix()
    np.testing.assert_allclose(populations_from_reduced(U * np.exp(0.3j)), populations_from_reduced(U))


def test_reduce():
    r = reduce(make_case1("allen_eberly"))
    t = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(r.omega(t), np.sqrt(6) / np.cosh(t))
    np.testing.assert_allclose(r.delta(t), SQRT2 * np.tanh(t))
    H = r.hamiltonian(np.array([0.4]))[0]
    np.testing.assert_allclose(H, 0.5 * np.array([[-r.delta(0.4), r.omega(0.4) / SQRT2],
                                                  [r.omega(0.4) / SQRT2, r.delta(0.4)]]))
    pi = reduce(make_case1("pi"))
    area = np.trapezoid(pi.omega(np.linspace(0, 1, 101)), dx=0.01) / SQRT2
    assert area == pytest.approx(np.pi)
    with pytest.raises(ValueError):
        reduce(make_case2("cds"))


def test_zero_rabi_is_free_precession():
    p = Pulse.case1(constant_envelope(0.0), constant_envelope(0.9), 0.0, 2.0)
    U = propagate_numeric(p)
    np.testing.assert_allclose(U, np.diag(np.exp([0.9j, -0.9j])), atol=1e-12)


@pytest.mark.parametrize("kind", CASE1_KINDS)
def test_three_level_numeric_matches_lifted_two_level(kind, rng):
    pulse = make_case1(kind)
    err = ErrorModel.rabi(rng.uniform(-0.5, 0.5, 4))
    U2 = propagate_numeric(pulse, err)
    U3 = propagate_numeric(pulse, err, reduced=False)
    np.testing.assert_allclose(lift(cayley_klein_of(U2)), U3, atol=1e-7)
    pg, pe = np.abs(U2[:, 0, 0]) ** 2, np.abs(U2[:, 1, 0]) ** 2
    np.testing.assert_allclose(np.abs(U3[:, :, 0]) ** 2, np.stack([pg**2, 2 * pg * pe, pe**2], 1), atol=1e-7)
