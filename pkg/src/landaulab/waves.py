"""Closed-form wave functions with exact analytic derivatives, gauge-phase
machinery, position-space differential operators, and the one-dimensional
translation-eigenvalue representation of the intra-level observables.

Every wave function handled here factors as

    coeff * P(u) * exp(-Q(u)) * exp(i Phi(u)) * S(u),

with P a complex bivariate polynomial, Q and Phi real polynomials in the
shifted coordinates u = x - x0, and S an optional Hermite or Laguerre factor
in a polynomial argument.  Values and first and second derivatives follow
from the product rule together with the derivative recurrences
H'_n = 2n H_{n-1} and d/dx L^m_n = -L^{m+1}_{n-1}, so no finite differences
enter any production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from .params import GaugeChoice, PhysicalParams, Poly2, vector_potential_polys

__all__ = [
    "hermite",
    "laguerre",
    "SpecialFactor",
    "WaveForm",
    "WaveJet",
    "t1_state",
    "fock_state",
    "plane_wave",
    "gauge_phase",
    "DiffOpSpec",
    "multiplication_op",
    "position_op",
    "connection_momentum_op",
    "flat_connection_rep",
    "phase_shifted",
    "HermiteGaussian1D",
    "t1_basis_function",
    "t1rep_apply",
]


# ---------------------------------------------------------------------------
# Special-function evaluation by stable upward recurrence
# ---------------------------------------------------------------------------


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n by the three-term recurrence;
    vectorised over numpy input."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    hm, h = 0.0 * x, 1.0 + 0.0 * x
    for k in range(n):
        hm, h = h, 2.0 * x * h - 2.0 * k * hm
    return h


def laguerre(n: int, m: int, x):
    """Generalised Laguerre polynomial L^m_n by upward recurrence in n."""
    if n < 0 or m < 0:
        raise ValueError("orders must be nonnegative")
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    lm, l = 0.0 * x, 1.0 + 0.0 * x
    for k in range(n):
        lm, l = l, ((2 * k + m + 1 - x) * l - (k + m) * lm) / (k + 1)
    return l


# ---------------------------------------------------------------------------
# Factored wave functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialFactor:
    """Scalar special-function factor S = f(arg(u)) with f a Hermite or
    Laguerre polynomial; derivative values follow the closed recurrences."""

    kind: str           # "hermite" | "laguerre"
    n: int
    arg: Poly2
    m: int = 0          # Laguerre upper index

    def chain_values(self, gval):
        """(f(g), f'(g), f''(g)) at argument values gval."""
        if self.kind == "hermite":
            f0 = hermite(self.n, gval)
            f1 = 2.0 * self.n * hermite(self.n - 1, gval) if self.n >= 1 else 0.0 * gval
            f2 = (4.0 * self.n * (self.n - 1) * hermite(self.n - 2, gval)
                  if self.n >= 2 else 0.0 * gval)
            return f0, f1, f2
        if self.kind == "laguerre":
            f0 = laguerre(self.n, self.m, gval)
            f1 = -laguerre(self.n - 1, self.m + 1, gval) if self.n >= 1 else 0.0 * gval
            f2 = (laguerre(self.n - 2, self.m + 2, gval)
                  if self.n >= 2 else 0.0 * gval)
            return f0, f1, f2
        raise ValueError(f"unknown special factor {self.kind!r}")


class WaveJet(NamedTuple):
    """Value and derivatives up to second order at a set of points."""

    f: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f11: np.ndarray
    f12: np.ndarray
    f22: np.ndarray


@dataclass(frozen=True)
class WaveForm:
    """coeff * poly(u) * exp(-gauss(u)) * exp(i phase(u)) * special(u),
    anchored at the plane origin of its gauge."""

    coeff: complex
    origin: tuple[float, float]
    poly: Poly2 = field(default_factory=lambda: Poly2.const(1.0))
    gauss: Poly2 = field(default_factory=Poly2.zero)
    phase: Poly2 = field(default_factory=Poly2.zero)
    special: SpecialFactor | None = None

    def shifted(self, x1, x2):
        return x1 - self.origin[0], x2 - self.origin[1]

    def value(self, x1, x2):
        u1, u2 = self.shifted(x1, x2)
        out = self.coeff * self.poly(u1, u2) \
            * np.exp(-self.gauss(u1, u2) + 1j * self.phase(u1, u2))
        if self.special is not None:
            out = out * self.special.chain_values(self.special.arg(u1, u2))[0]
        return out

    __call__ = value

    def jet(self, x1, x2) -> WaveJet:
        """Analytic value and first/second derivatives with respect to the
        plane coordinates."""
        u1, u2 = self.shifted(x1, x2)
        # polynomial factor and its derivatives
        a = self.poly
        A = a(u1, u2)
        A1, A2 = a.diff(1)(u1, u2), a.diff(2)(u1, u2)
        A11, A12, A22 = (a.diff(1).diff(1)(u1, u2), a.diff(1).diff(2)(u1, u2),
                         a.diff(2).diff(2)(u1, u2))
        # exponent R = -Q + i Phi
        r = -1.0 * self.gauss + complex(0.0, 1.0) * self.phase
        R1, R2 = r.diff(1)(u1, u2), r.diff(2)(u1, u2)
        R11, R12, R22 = (r.diff(1).diff(1)(u1, u2), r.diff(1).diff(2)(u1, u2),
                         r.diff(2).diff(2)(u1, u2))
        E = np.exp(r(u1, u2))
        # special factor via chain rule
        if self.special is not None:
            garg = self.special.arg
            g = garg(u1, u2)
            g1, g2 = garg.diff(1)(u1, u2), garg.diff(2)(u1, u2)
            g11, g12, g22 = (garg.diff(1).diff(1)(u1, u2),
                             garg.diff(1).diff(2)(u1, u2),
                             garg.diff(2).diff(2)(u1, u2))
            f0, fp, fpp = self.special.chain_values(g)
            S = f0
            S1, S2 = fp * g1, fp * g2
            S11 = fpp * g1 * g1 + fp * g11
            S12 = fpp * g1 * g2 + fp * g12
            S22 = fpp * g2 * g2 + fp * g22
        else:
            one = 1.0 + 0.0 * (u1 + u2)
            S, S1, S2 = one, 0.0 * one, 0.0 * one
            S11 = S12 = S22 = 0.0 * one

        C = self.coeff
        f = C * A * E * S
        f1 = C * E * (A1 * S + A * R1 * S + A * S1)
        f2 = C * E * (A2 * S + A * R2 * S + A * S2)
        f11 = C * E * (A11 * S + 2 * A1 * R1 * S + 2 * A1 * S1
                       + A * (R11 + R1 * R1) * S + 2 * A * R1 * S1 + A * S11)
        f22 = C * E * (A22 * S + 2 * A2 * R2 * S + 2 * A2 * S2
                       + A * (R22 + R2 * R2) * S + 2 * A * R2 * S2 + A * S22)
        f12 = C * E * (A12 * S + A1 * R2 * S + A1 * S2 + A2 * R1 * S
                       + A * (R12 + R1 * R2) * S + A * R1 * S2
                       + A2 * S1 + A * R2 * S1 + A * S12)
        return WaveJet(f, f1, f2, f11, f12, f22)

    def scaled(self, c: complex) -> "WaveForm":
        return replace(self, coeff=self.coeff * c)

    def with_extra_phase(self, extra: Poly2) -> "WaveForm":
        """Multiply by exp(i * extra(u))."""
        return replace(self, phase=self.phase + extra)


# ---------------------------------------------------------------------------
# The two eigenstate families
# ---------------------------------------------------------------------------


def t1_state(g: GaugeChoice, p: PhysicalParams, t1: float, n: int) -> WaveForm:
    """Joint eigenstate of the first translation charge (eigenvalue t1) and
    the energy (level n), delta-normalised in t1.

    The factored form is gauge phase x plane wave in u1 x normalised
    Hermite-Gaussian in x2 centred on the guiding-centre ordinate
    x0_2 - t1/(qB).
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    hb, mw = p.hbar, p.m * p.omega_c
    d = t1 / p.qB                      # x0_2 - centre ordinate
    c2 = 0.5 * mw / hb
    gauss = Poly2({(0, 2): c2, (0, 1): 2.0 * c2 * d, (0, 0): c2 * d * d})
    phase = (1.0 / hb) * (Poly2.monomial(1, 1, 0.5 * (1.0 - g.alpha) * p.qB)
                          + p.q * g.phi + Poly2.monomial(1, 0, t1))
    coeff = (2.0 * math.pi * hb) ** -0.5 * (mw / (math.pi * hb)) ** 0.25 \
        / math.sqrt(2.0 ** n * math.factorial(n))
    zarg = Poly2({(0, 1): math.sqrt(mw / hb), (0, 0): math.sqrt(mw / hb) * d})
    return WaveForm(coeff=coeff, origin=g.x0, gauss=gauss, phase=phase,
                    special=SpecialFactor("hermite", n, zarg))


def fock_state(g: GaugeChoice, p: PhysicalParams, nplus: int,
               nminus: int) -> WaveForm:
    """Helicity Fock state |n+, n-> in the given gauge: gauge phase times
    the Laguerre-Gaussian angular wave function.

    The angular factor exp(i s l theta) v^|l| is carried as the complex
    polynomial (sqrt(m w / 2 hbar) (u1 + i s sgn(l) u2))^|l|, which removes
    the polar-coordinate singularity from every evaluation path.
    """
    if nplus < 0 or nminus < 0:
        raise ValueError("occupation numbers must be nonnegative")
    hb, mw, s = p.hbar, p.m * p.omega_c, p.sign
    n = min(nplus, nminus)
    ell = nplus - nminus
    v2 = Poly2({(2, 0): 0.5 * mw / hb, (0, 2): 0.5 * mw / hb})
    gauss = 0.5 * v2
    phase = (p.q / hb) * g.phibar(p.B)
    coeff = math.sqrt(mw / (2.0 * math.pi * hb)) * (-1.0) ** n \
        * math.sqrt(math.factorial(n) / math.factorial(n + abs(ell)))
    if ell != 0:
        sgn = s * (1 if ell > 0 else -1)
        w = Poly2({(1, 0): math.sqrt(0.5 * mw / hb),
                   (0, 1): 1j * sgn * math.sqrt(0.5 * mw / hb)})
        poly = w ** abs(ell)
    else:
        poly = Poly2.const(1.0)
    return WaveForm(coeff=coeff, origin=g.x0, poly=poly, gauss=gauss,
                    phase=phase,
                    special=SpecialFactor("laguerre", n, v2, m=abs(ell)))


def plane_wave(k: tuple[float, float], hbar: float,
               origin: tuple[float, float] = (0.0, 0.0)) -> WaveForm:
    """exp(i k.u / hbar); useful as a momentum eigenfunction in tests."""
    phase = Poly2({(1, 0): k[0] / hbar, (0, 1): k[1] / hbar})
    return WaveForm(coeff=1.0, origin=origin, phase=phase)


def gauge_phase(delta: Poly2, q: float, hbar: float, u1, u2):
    """Unit-modulus factor exp(i q delta(u) / hbar) relating wave functions
    in two gauges; takes shifted coordinates."""
    return np.exp(1j * (q / hbar) * delta(u1, u2))


def phase_shifted(psi: WaveForm, lam: Poly2, hbar: float) -> WaveForm:
    """exp(-i lam(u)/hbar) * psi, the re-phased wave function that pairs
    with the flat connection grad(lam)."""
    return psi.with_extra_phase((-1.0 / hbar) * lam)


# ---------------------------------------------------------------------------
# Differential operators with polynomial coefficients, order <= 2
# ---------------------------------------------------------------------------

_ZERO = Poly2.zero()


@dataclass(frozen=True)
class DiffOpSpec:
    """c(u) + b1 d1 + b2 d2 + a11 d1^2 + a12 d1 d2 + a22 d2^2 with complex
    polynomial coefficients in the shifted coordinates."""

    c: Poly2 = _ZERO
    b1: Poly2 = _ZERO
    b2: Poly2 = _ZERO
    a11: Poly2 = _ZERO
    a12: Poly2 = _ZERO
    a22: Poly2 = _ZERO

    @property
    def order(self) -> int:
        if not (self.a11.is_zero() and self.a12.is_zero() and self.a22.is_zero()):
            return 2
        if not (self.b1.is_zero() and self.b2.is_zero()):
            return 1
        return 0

    def apply(self, psi: WaveForm, x1, x2):
        jet = psi.jet(x1, x2)
        return self.apply_jet(jet, psi.shifted(x1, x2))

    def apply_jet(self, jet: WaveJet, shifted_coords):
        u1, u2 = shifted_coords
        out = self.c(u1, u2) * jet.f
        if not self.b1.is_zero():
            out = out + self.b1(u1, u2) * jet.f1
        if not self.b2.is_zero():
            out = out + self.b2(u1, u2) * jet.f2
        if not self.a11.is_zero():
            out = out + self.a11(u1, u2) * jet.f11
        if not self.a12.is_zero():
            out = out + self.a12(u1, u2) * jet.f12
        if not self.a22.is_zero():
            out = out + self.a22(u1, u2) * jet.f22
        return out

    def __add__(self, other: "DiffOpSpec") -> "DiffOpSpec":
        return DiffOpSpec(self.c + other.c, self.b1 + other.b1,
                          self.b2 + other.b2, self.a11 + other.a11,
                          self.a12 + other.a12, self.a22 + other.a22)

    def __sub__(self, other: "DiffOpSpec") -> "DiffOpSpec":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "DiffOpSpec":
        return DiffOpSpec(self.c * scalar, self.b1 * scalar, self.b2 * scalar,
                          self.a11 * scalar, self.a12 * scalar,
                          self.a22 * scalar)

    __rmul__ = __mul__

    def compose(self, other: "DiffOpSpec") -> "DiffOpSpec":
        """Operator product self(other(.)); the combined order must stay
        within two."""
        if self.order + other.order > 2:
            raise ValueError("composition exceeds second order")
        c, b1, b2 = self.c, self.b1, self.b2
        a11, a12, a22 = self.a11, self.a12, self.a22
        cp, bp1, bp2 = other.c, other.b1, other.b2
        ap11, ap12, ap22 = other.a11, other.a12, other.a22
        rc = (c * cp + b1 * cp.diff(1) + b2 * cp.diff(2)
              + a11 * cp.diff(1).diff(1) + a12 * cp.diff(1).diff(2)
              + a22 * cp.diff(2).diff(2))
        rb1 = (c * bp1 + b1 * cp + b1 * bp1.diff(1) + b2 * bp1.diff(2)
               + 2.0 * a11 * cp.diff(1) + a12 * cp.diff(2))
        rb2 = (c * bp2 + b2 * cp + b1 * bp2.diff(1) + b2 * bp2.diff(2)
               + a12 * cp.diff(1) + 2.0 * a22 * cp.diff(2))
        ra11 = c * ap11 + b1 * bp1 + a11 * cp
        ra12 = c * ap12 + b1 * bp2 + b2 * bp1 + a12 * cp
        ra22 = c * ap22 + b2 * bp2 + a22 * cp
        return DiffOpSpec(rc, rb1, rb2, ra11, ra12, ra22)


def multiplication_op(poly: Poly2) -> DiffOpSpec:
    return DiffOpSpec(c=poly)


def position_op(name: str, g: GaugeChoice, p: PhysicalParams) -> DiffOpSpec:
    """Position-space differential operator of an observable in the given
    gauge, for the canonical representation (wave functions carry the full
    gauge phase; conjugate momenta act as plain -i hbar d_i)."""
    hb, qb = p.hbar, p.qB
    u1, u2 = Poly2.variable(1), Poly2.variable(2)
    mih = Poly2.const(complex(0.0, -hb))
    a1, a2 = vector_potential_polys(g, p.B)

    if name == "pi1":
        return DiffOpSpec(b1=mih)
    if name == "pi2":
        return DiffOpSpec(b2=mih)
    if name == "p1":
        return DiffOpSpec(c=(-p.q) * a1, b1=mih)
    if name == "p2":
        return DiffOpSpec(c=(-p.q) * a2, b2=mih)
    if name == "T1":
        return DiffOpSpec(c=(-p.q) * a1 - qb * u2, b1=mih)
    if name == "T2":
        return DiffOpSpec(c=(-p.q) * a2 + qb * u1, b2=mih)
    if name == "H":
        p1 = position_op("p1", g, p)
        p2 = position_op("p2", g, p)
        return (1.0 / (2.0 * p.m)) * (p1.compose(p1) + p2.compose(p2))
    if name == "L3c":
        return DiffOpSpec(b1=complex(0.0, hb) * u2, b2=complex(0.0, -hb) * u1)
    if name == "M3":
        c = (Poly2.monomial(2, 0, 0.5 * g.alpha * qb)
             + Poly2.monomial(0, 2, -0.5 * g.alpha * qb)
             - u1 * (p.q * g.phi.diff(2)) + u2 * (p.q * g.phi.diff(1)))
        return DiffOpSpec(c=c, b1=complex(0.0, hb) * u2,
                          b2=complex(0.0, -hb) * u1)
    if name == "L3":
        m3 = position_op("M3", g, p)
        return m3 + multiplication_op(
            Poly2({(2, 0): -0.5 * qb, (0, 2): -0.5 * qb}))
    if name == "xc1":
        t2 = position_op("T2", g, p)
        return (1.0 / qb) * t2 + multiplication_op(Poly2.const(g.x0[0]))
    if name == "xc2":
        t1 = position_op("T1", g, p)
        return (-1.0 / qb) * t1 + multiplication_op(Poly2.const(g.x0[1]))
    if name == "x1":
        return multiplication_op(u1 + Poly2.const(g.x0[0]))
    if name == "x2":
        return multiplication_op(u2 + Poly2.const(g.x0[1]))
    raise ValueError(f"unknown observable {name!r}")


def connection_momentum_op(v: tuple[Poly2, Poly2], direction: int,
                           hbar: float) -> DiffOpSpec:
    """Conjugate-momentum representation -i hbar (d_i + (i/hbar) V_i) for a
    curl-free connection V given by a pair of polynomials."""
    if direction not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    mih = Poly2.const(complex(0.0, -hbar))
    if direction == 1:
        return DiffOpSpec(c=v[0], b1=mih)
    return DiffOpSpec(c=v[1], b2=mih)


def flat_connection_rep(v: tuple[Poly2, Poly2], psi: WaveForm, direction: int,
                        hbar: float) -> Callable:
    """Evaluator for the connection-dressed momentum applied to psi:
    returns a callable f(x1, x2) = [-i hbar (d_i + (i/hbar) V_i) psi](x)."""
    op = connection_momentum_op(v, direction, hbar)

    def apply(x1, x2):
        return op.apply(psi, x1, x2)

    return apply


# ---------------------------------------------------------------------------
# One-dimensional representation on functions of the translation eigenvalue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HermiteGaussian1D:
    """coeff * exp(-y^2/2) * H_k(y) with y = t / scale; supplies exact
    value and first two derivatives in t."""

    coeff: complex
    k: int
    scale: float

    def value(self, t):
        y = np.asarray(t, dtype=float) / self.scale
        return self.coeff * np.exp(-0.5 * y * y) * hermite(self.k, y)

    def d1(self, t):
        y = np.asarray(t, dtype=float) / self.scale
        hk = hermite(self.k, y)
        hk1 = hermite(self.k - 1, y) if self.k >= 1 else 0.0 * y
        return self.coeff / self.scale * np.exp(-0.5 * y * y) \
            * (2.0 * self.k * hk1 - y * hk)

    def d2(self, t):
        y = np.asarray(t, dtype=float) / self.scale
        hk = hermite(self.k, y)
        hk1 = hermite(self.k - 1, y) if self.k >= 1 else 0.0 * y
        hk2 = hermite(self.k - 2, y) if self.k >= 2 else 0.0 * y
        val = (4.0 * self.k * (self.k - 1) * hk2
               - 4.0 * self.k * y * hk1 + (y * y - 1.0) * hk)
        return self.coeff / self.scale ** 2 * np.exp(-0.5 * y * y) * val


def t1_basis_function(nplus: int, p: PhysicalParams) -> HermiteGaussian1D:
    """chi_{n+}(t): the translation-eigenvalue profile <T1, E_n|n+, n-=n>
    shared by all levels up to the constant level phase."""
    sig = math.sqrt(p.hbar * p.m * p.omega_c)
    coeff = (-1j) ** nplus / math.sqrt(2.0 ** nplus * math.factorial(nplus)) \
        * (math.pi * sig * sig) ** -0.25
    return HermiteGaussian1D(coeff=coeff, k=nplus, scale=sig)


def t1rep_apply(name: str, f, n: int, p: PhysicalParams) -> Callable:
    """Action of an intra-level observable on a function of the translation
    eigenvalue at level n, read off the delta-kernel matrix elements as a
    differential operator:

    - T1: multiply by t
    - T2: i s hbar m w d/dt
    - M3: -s hbar^2 m w / 2 d^2/dt^2 + s hbar (t^2/(2 hbar m w) - (n+1/2))

    ``f`` must expose ``value``, ``d1`` and ``d2`` (e.g.
    :class:`HermiteGaussian1D`).
    """
    s, hb, mw = p.sign, p.hbar, p.m * p.omega_c
    if name == "T1":
        return lambda t: t * f.value(t)
    if name == "T2":
        return lambda t: 1j * s * hb * mw * f.d1(t)
    if name == "M3":
        def act(t):
            t = np.asarray(t, dtype=float)
            return (-0.5 * s * hb * hb * mw * f.d2(t)
                    + s * hb * (t * t / (2.0 * hb * mw) - (n + 0.5))
                    * f.value(t))
        return act
    raise ValueError(f"unknown intra-level observable {name!r}")
