import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss

from landaulab import GaugeChoice, PhysicalParams, Poly2, gauge_delta, parse_poly
from landaulab.waves import (DiffOpSpec, HermiteGaussian1D, fock_state,
                             flat_connection_rep, gauge_phase, hermite,
                             laguerre, multiplication_op, phase_shifted,
                             plane_wave, position_op, t1_basis_function,
                             t1_state, t1rep_apply)

P = PhysicalParams(1, 1, 1)
SYM = GaugeChoice(0.0)
# a deliberately awkward gauge used throughout: shear, shifted origin,
# polynomial gauge function
GEN = GaugeChoice(0.37, (0.2, -0.1), parse_poly("0.05*u1^2 - 0.1*u2 + 0.02*u1*u2^2"))


# -- special functions ---------------------------------------------------------


def test_hermite_small_orders():
    assert hermite(2, 1.0) == 2.0
    assert hermite(0, 0.3) == 1.0
    assert hermite(1, -0.4) == -0.8


def test_laguerre_small_orders():
    assert laguerre(1, 0, 0.5) == 0.5
    assert laguerre(0, 3, 1.7) == 1.0


def _hermite_series(n, x):
    # explicit closed-form sum, the independent oracle
    total = 0.0
    for m in range(n // 2 + 1):
        total += ((-1) ** m / (math.factorial(m) * math.factorial(n - 2 * m))
                  * (2 * x) ** (n - 2 * m))
    return math.factorial(n) * total


def test_hermite_recurrence_matches_series():
    for n in (3, 5, 8):
        for x in (0.7, -1.3, 2.4):
            assert hermite(n, x) == pytest.approx(_hermite_series(n, x),
                                                  rel=1e-12)


def test_hermite_differential_equation():
    rng = np.random.default_rng(2)
    for n in range(1, 11):
        x = rng.uniform(-3, 3, size=20)
        h = hermite(n, x)
        hp = 2 * n * hermite(n - 1, x)
        hpp = 4 * n * (n - 1) * hermite(n - 2, x) if n >= 2 else 0 * x
        resid = hpp - 2 * x * hp + 2 * n * h
        scale = np.max(np.abs(h)) + np.max(np.abs(x * hp))
        assert np.max(np.abs(resid)) < 1e-9 * scale


def test_laguerre_derivative_recurrence_vs_fd():
    rng = np.random.default_rng(8)
    h = 1e-6
    for n in (1, 3, 6):
        for m in (0, 2):
            x = rng.uniform(0.2, 4.0, size=10)
            fd = (laguerre(n, m, x + h) - laguerre(n, m, x - h)) / (2 * h)
            assert np.allclose(-laguerre(n - 1, m + 1, x), fd,
                               rtol=1e-8, atol=1e-8)


def test_negative_orders_rejected():
    with pytest.raises(ValueError):
        hermite(-1, 0.0)
    with pytest.raises(ValueError):
        laguerre(1, -2, 0.0)


# -- translation eigenstates ---------------------------------------------------


def test_t1_state_value_at_origin():
    psi = t1_state(SYM, P, 0.0, 0)
    expected = (2 * math.pi) ** -0.5 * math.pi ** -0.25
    assert psi.value(0.0, 0.0) == pytest.approx(expected, rel=1e-15)


def test_t1_state_peaks_on_centre_line():
    t1 = 0.8
    centre = -t1 / P.qB      # x0_2 - t1/(qB) with x0 = 0
    psi = t1_state(SYM, P, t1, 0)
    xs = np.linspace(centre - 2, centre + 2, 401)
    mags = np.abs(psi.value(0.3, xs))
    assert abs(xs[np.argmax(mags)] - centre) < 2e-2
    # magnitude symmetric about the centre line for every level
    for n in (0, 1, 3):
        psi_n = t1_state(GEN, P, t1, n)
        c = GEN.x0[1] - t1 / P.qB
        d = np.linspace(0.1, 1.5, 7)
        assert np.allclose(np.abs(psi_n.value(1.0, c + d)),
                           np.abs(psi_n.value(1.0, c - d)), rtol=1e-12)


def test_t1_state_transverse_normalisation():
    # delta-normalisation leaves density 1/(2 pi hbar) per unit length
    t, w = hermgauss(60)
    for p in (P, PhysicalParams(1.3, -0.7, 1.9, hbar=0.5)):
        g = GaugeChoice(0.37, (0.2, -0.1))
        psi = t1_state(g, p, 0.45, 2)
        sig = math.sqrt(p.hbar / (p.m * p.omega_c))
        centre = g.x0[1] - 0.45 / p.qB
        x2 = centre + sig * t
        vals = psi.value(1.1, x2)
        total = float(np.sum(w * np.exp(t * t) * np.abs(vals) ** 2) * sig)
        assert total == pytest.approx(1.0 / (2 * math.pi * p.hbar), rel=1e-10)


# -- angular (Fock) eigenstates --------------------------------------------------


def test_fock_vacuum_value_at_origin():
    psi = fock_state(SYM, P, 0, 0)
    assert psi.value(0.0, 0.0) == pytest.approx(math.sqrt(1 / (2 * math.pi)),
                                                rel=1e-15)


def test_fock_state_with_angular_momentum_vanishes_at_origin():
    psi = fock_state(GEN, P, 1, 0)
    assert psi.value(GEN.x0[0], GEN.x0[1]) == 0


def test_fock_state_matches_ladder_polynomial():
    # |1,1> wave function equals (v^2 - 1) * vacuum for s = +1
    psi11 = fock_state(SYM, P, 1, 1)
    psi00 = fock_state(SYM, P, 0, 0)
    x = np.linspace(-2, 2, 9)
    for x2 in (-0.7, 0.4):
        v2 = (x ** 2 + x2 ** 2) / 2
        assert np.allclose(psi11.value(x, x2), (v2 - 1) * psi00.value(x, x2),
                           rtol=0, atol=1e-14)


# -- gauge phases ----------------------------------------------------------------


def test_gauge_phase_identity_and_modulus():
    assert gauge_phase(Poly2.zero(), 1.0, 1.0, 0.3, -0.4) == 1.0
    rng = np.random.default_rng(3)
    delta = parse_poly("0.3*u1^2*u2 - 0.7*u2^2")
    pts = rng.uniform(-3, 3, size=(100, 2))
    vals = gauge_phase(delta, 2.0, 0.7, pts[:, 0], pts[:, 1])
    assert np.max(np.abs(np.abs(vals) - 1.0)) < 1e-15


@pytest.mark.parametrize("family,label", [
    ("fock", (2, 1)), ("t1", (0.6, 1)),
])
def test_wave_functions_gauge_covariant(family, label):
    g2 = GaugeChoice(1.25, GEN.x0, parse_poly("0.125*u2^3 - 0.5*u1"))
    delta = gauge_delta(GEN, g2, P)
    if family == "fock":
        psi_a, psi_b = fock_state(g2, P, *label), fock_state(GEN, P, *label)
    else:
        psi_a, psi_b = t1_state(g2, P, *label), t1_state(GEN, P, *label)
    # exact identity of the factored forms
    assert psi_a.phase - psi_b.phase == (P.q / P.hbar) * delta
    rng = np.random.default_rng(0)
    pts = rng.uniform(-2, 2, size=(40, 2)) + np.asarray(GEN.x0)
    u = pts - np.asarray(GEN.x0)
    lhs = psi_a.value(pts[:, 0], pts[:, 1])
    rhs = gauge_phase(delta, P.q, P.hbar, u[:, 0], u[:, 1]) \
        * psi_b.value(pts[:, 0], pts[:, 1])
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-14)


# -- analytic derivatives ----------------------------------------------------------


def _fd_jet(psi, x1, x2, h):
    f1 = (psi.value(x1 + h, x2) - psi.value(x1 - h, x2)) / (2 * h)
    f2 = (psi.value(x1, x2 + h) - psi.value(x1, x2 - h)) / (2 * h)
    return f1, f2


@pytest.mark.parametrize("make", [
    lambda: fock_state(GEN, P, 2, 1),
    lambda: fock_state(GEN, P, 0, 3),
    lambda: t1_state(GEN, P, 0.8, 2),
    lambda: plane_wave((0.5, -1.2), 1.0),
])
def test_gradient_matches_finite_differences(make):
    psi = make()
    h = 1e-4 * P.magnetic_length
    rng = np.random.default_rng(17)
    pts = rng.uniform(-2, 2, size=(100, 2))
    jet = psi.jet(pts[:, 0], pts[:, 1])
    fd1, fd2 = _fd_jet(psi, pts[:, 0], pts[:, 1], h)
    scale = np.max(np.abs(jet.f1)) + np.max(np.abs(jet.f2)) + 1e-30
    assert np.max(np.abs(jet.f1 - fd1)) < 1e-6 * scale
    assert np.max(np.abs(jet.f2 - fd2)) < 1e-6 * scale


def test_second_derivatives_match_finite_differences():
    psi = fock_state(GEN, P, 1, 2)
    h = 2e-4
    x1 = np.linspace(-1.2, 1.4, 11)
    x2 = np.linspace(-0.9, 1.1, 11)
    jet = psi.jet(x1, x2)
    f11 = (psi.value(x1 + h, x2) - 2 * psi.value(x1, x2)
           + psi.value(x1 - h, x2)) / h ** 2
    f22 = (psi.value(x1, x2 + h) - 2 * psi.value(x1, x2)
           + psi.value(x1, x2 - h)) / h ** 2
    f12 = (psi.value(x1 + h, x2 + h) - psi.value(x1 + h, x2 - h)
           - psi.value(x1 - h, x2 + h) + psi.value(x1 - h, x2 - h)) / (4 * h ** 2)
    for exact, fd in ((jet.f11, f11), (jet.f22, f22), (jet.f12, f12)):
        assert np.max(np.abs(exact - fd)) < 1e-5 * (np.max(np.abs(exact)) + 1)


# -- position-space operators -------------------------------------------------------


def _grid_points():
    # covers the 6-sigma support region of the low states
    x1 = np.linspace(-4.3, 4.1, 12) + GEN.x0[0]
    x2 = np.linspace(-4.1, 4.4, 12) + GEN.x0[1]
    return np.meshgrid(x1, x2)


def test_energy_eigenrelation_pointwise():
    X1, X2 = _grid_points()
    op = position_op("H", GEN, P)
    for (nplus, nminus) in ((0, 0), (2, 1), (1, 3)):
        psi = fock_state(GEN, P, nplus, nminus)
        lhs = op.apply(psi, X1, X2)
        rhs = (nminus + 0.5) * psi.value(X1, X2)
        assert np.max(np.abs(lhs - rhs)) < 1e-9 * np.max(np.abs(rhs))


def test_translation_eigenrelation_pointwise():
    X1, X2 = _grid_points()
    op = position_op("T1", GEN, P)
    for (t1, n) in ((0.0, 0), (0.75, 2)):
        psi = t1_state(GEN, P, t1, n)
        lhs = op.apply(psi, X1, X2)
        assert np.max(np.abs(lhs - t1 * psi.value(X1, X2))) \
            < 1e-10 * np.max(np.abs(psi.value(X1, X2))) + 1e-14


def test_rotation_eigenrelation_pointwise():
    X1, X2 = _grid_points()
    op = position_op("M3", GEN, P)
    for (nplus, nminus) in ((0, 0), (3, 1), (0, 2)):
        psi = fock_state(GEN, P, nplus, nminus)
        lhs = op.apply(psi, X1, X2)
        rhs = (nplus - nminus) * psi.value(X1, X2)
        scale = np.max(np.abs(psi.value(X1, X2)))
        assert np.max(np.abs(lhs - rhs)) < 1e-10 * scale


def test_unknown_position_op():
    with pytest.raises(ValueError):
        position_op("badname", GEN, P)


def test_compose_matches_manual_application():
    x1op = multiplication_op(Poly2.variable(1))
    p1op = position_op("pi1", GEN, P)
    combo = x1op.compose(p1op)
    psi = fock_state(GEN, P, 1, 1)
    X1, X2 = _grid_points()
    jet = psi.jet(X1, X2)
    manual = (X1 - GEN.x0[0]) * (-1j * P.hbar * jet.f1)
    assert np.allclose(combo.apply(psi, X1, X2), manual, rtol=0, atol=1e-13)


def test_compose_order_guard():
    p1 = position_op("pi1", GEN, P)
    psq = p1.compose(p1)
    with pytest.raises(ValueError):
        psq.compose(p1)


def test_compose_mixed_second_derivative():
    op = position_op("pi1", GEN, P).compose(position_op("pi2", GEN, P))
    assert op.a12 == Poly2.const(complex(-P.hbar ** 2, 0.0))
    psi = fock_state(GEN, P, 2, 1)
    X1, X2 = _grid_points()
    jet = psi.jet(X1, X2)
    assert np.allclose(op.apply(psi, X1, X2), -P.hbar ** 2 * jet.f12,
                       rtol=0, atol=1e-13)


def test_hamiltonian_operator_expansion():
    # second-order coefficients are -hbar^2/(2m) on the diagonal
    op = position_op("H", GEN, P)
    assert op.a11 == Poly2.const(complex(-P.hbar ** 2 / (2 * P.m), 0.0))
    assert op.a22 == Poly2.const(complex(-P.hbar ** 2 / (2 * P.m), 0.0))
    assert op.a12.is_zero()


# -- flat connections ------------------------------------------------------------


def test_plane_wave_momentum_eigenfunction():
    k = (0.8, -0.3)
    psi = plane_wave(k, P.hbar)
    zero = (Poly2.zero(), Poly2.zero())
    pts = np.random.default_rng(1).uniform(-2, 2, size=(30, 2))
    for i in (1, 2):
        vals = flat_connection_rep(zero, psi, i, P.hbar)(pts[:, 0], pts[:, 1])
        assert np.allclose(vals, k[i - 1] * psi.value(pts[:, 0], pts[:, 1]),
                           rtol=0, atol=1e-14)


def test_pure_gauge_conjugation_identity():
    lam = parse_poly("0.4*u1^2 - 0.3*u1*u2 + 0.2*u2^3")
    v = (lam.diff(1), lam.diff(2))
    psi = fock_state(SYM, P, 1, 1)
    shifted = phase_shifted(psi, lam, P.hbar)
    pts = np.random.default_rng(5).uniform(-2, 2, size=(50, 2))
    x1, x2 = pts[:, 0], pts[:, 1]
    for i in (1, 2):
        lhs = flat_connection_rep(v, shifted, i, P.hbar)(x1, x2)
        jet = psi.jet(x1, x2)
        plain = -1j * P.hbar * (jet.f1 if i == 1 else jet.f2)
        rhs = np.exp(-1j * lam(x1, x2) / P.hbar) * plain
        assert np.max(np.abs(lhs - rhs)) < 1e-13


# -- translation-eigenvalue representation ------------------------------------------


def test_t1rep_multiplication_vanishes_at_zero():
    f = t1_basis_function(3, P)
    assert t1rep_apply("T1", f, 0, P)(0.0) == 0.0


def test_t1rep_t2_matches_ladder():
    # i s hbar m w d/dt on chi_0 equals s sqrt(hbar m w / 2) chi_1
    for p in (P, PhysicalParams(2.0, -1.0, 1.5, hbar=0.7)):
        t = np.linspace(-2.5, 2.5, 21) * math.sqrt(p.hbar * p.m * p.omega_c)
        chi0 = t1_basis_function(0, p)
        chi1 = t1_basis_function(1, p)
        lhs = t1rep_apply("T2", chi0, 0, p)(t)
        rhs = p.sign * math.sqrt(p.hbar * p.m * p.omega_c / 2) * chi1.value(t)
        assert np.max(np.abs(lhs - rhs)) < 1e-13 * np.max(np.abs(rhs))


def test_t1rep_rotation_eigenvalue():
    for p in (P, PhysicalParams(1.0, 1.0, -2.0)):
        t = np.linspace(-2, 2, 17) * math.sqrt(p.hbar * p.m * p.omega_c)
        for n in (0, 2):
            for nplus in (0, 1, 4):
                chi = t1_basis_function(nplus, p)
                lhs = t1rep_apply("M3", chi, n, p)(t)
                rhs = p.sign * p.hbar * (nplus - n) * chi.value(t)
                scale = np.max(np.abs(chi.value(t))) * p.hbar * (abs(nplus - n) + 1)
                assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale


def test_hermite_gaussian_derivatives():
    f = HermiteGaussian1D(coeff=0.7 - 0.2j, k=4, scale=1.3)
    t = np.linspace(-3, 3, 25)
    h = 1e-6
    fd1 = (f.value(t + h) - f.value(t - h)) / (2 * h)
    assert np.max(np.abs(f.d1(t) - fd1)) < 1e-7
    # second derivative against the oscillator equation
    # f'' = (y^2 - 2k - 1) f / scale^2, which is exact
    y = t / f.scale
    rhs = (y * y - 2 * f.k - 1) * f.value(t) / f.scale ** 2
    assert np.max(np.abs(f.d2(t) - rhs)) < 1e-12 * np.max(np.abs(rhs))
