"""Classical planar dynamics of a charge in a uniform magnetic field:
analytic circular orbits, numerical integrators, conserved charges, and an
exact Poisson-bracket calculus on polynomial phase-space observables.

The phase space is parametrised by the gauge-invariant pair (x, p) with the
magnetic bracket {p1, p2} = qB; canonical-coordinate statements are recovered
by the substitution p = pi - qA.  The orientation convention is eps_12 = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .params import GaugeChoice, PhysicalParams, Poly2, vector_potential

__all__ = [
    "PhaseSpacePoint",
    "TrajectoryParams",
    "NoetherCharges",
    "analytic_trajectory",
    "integrate",
    "noether_charges",
    "magnetic_centre",
    "canonical_momenta",
    "PolyObservable",
    "poisson_bracket",
    "energy_observable",
    "translation_observable",
    "rotation_observable",
    "centre_observable",
    "canonical_momentum_observable",
]


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Position and velocity momentum (p = m dx/dt)."""

    x: tuple[float, float]
    p: tuple[float, float]

    def __post_init__(self):
        vals = (*self.x, *self.p)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("phase-space components must be finite")
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "p", (float(self.p[0]), float(self.p[1])))


@dataclass(frozen=True)
class TrajectoryParams:
    """Orbit data: energy, guiding-centre position, and phase time."""

    E: float
    xc: tuple[float, float] = (0.0, 0.0)
    t0: float = 0.0

    def __post_init__(self):
        if self.E < 0:
            raise ValueError("energy must be nonnegative")


class NoetherCharges(NamedTuple):
    E: float
    T1: float
    T2: float
    M3: float


def analytic_trajectory(p: PhysicalParams, tp: TrajectoryParams,
                        t: float) -> PhaseSpacePoint:
    """Closed-form circular orbit with energy E about the centre xc:

    ``x(t) = xc + (1/w) sqrt(2E/m) (cos w(t-t0), -s sin w(t-t0))``,
    ``p(t) = -sqrt(2mE) (sin w(t-t0), s cos w(t-t0))``,

    with w the cyclotron frequency and s the orientation sign.
    """
    w, s = p.omega_c, p.sign
    ph = w * (t - tp.t0)
    r = math.sqrt(2.0 * tp.E / p.m) / w
    pa = math.sqrt(2.0 * p.m * tp.E)
    x = (tp.xc[0] + r * math.cos(ph), tp.xc[1] - s * r * math.sin(ph))
    mom = (-pa * math.sin(ph), -s * pa * math.cos(ph))
    return PhaseSpacePoint(x, mom)


def _rotation_step(p: PhysicalParams, state: PhaseSpacePoint,
                   dt: float) -> PhaseSpacePoint:
    """One step of the rotation-split integrator for a uniform field.

    The momentum is rotated with the half-angle tangent construction, which
    is an exact rotation by (qB/m) dt and conserves |p| to round-off; the
    position drift uses the time integral of the rotating momentum so the
    step matches the exact flow of the uniform-field problem.
    """
    a = (p.qB / p.m) * dt
    tau = math.tan(0.5 * a)
    p1, p2 = state.p
    # half-angle rotation: p -> p + f * eps @ (p + tau * eps @ p)
    f = 2.0 * tau / (1.0 + tau * tau)
    q1 = p1 + tau * p2
    q2 = p2 - tau * p1
    p1n = p1 + f * q2
    p2n = p2 - f * q1
    # drift through the exactly rotating momentum: complex z' = exp(-i a) z
    if a != 0.0:
        c = (1.0 - math.cos(a)) / a, math.sin(a) / a
        dx1 = (dt / p.m) * (c[1] * p1 + c[0] * p2)
        dx2 = (dt / p.m) * (-c[0] * p1 + c[1] * p2)
    else:
        dx1, dx2 = (dt / p.m) * p1, (dt / p.m) * p2
    x1, x2 = state.x
    return PhaseSpacePoint((x1 + dx1, x2 + dx2), (p1n, p2n))


def _lorentz_rhs(p: PhysicalParams, x1, x2, p1, p2):
    k = p.qB / p.m
    return p1 / p.m, p2 / p.m, k * p2, -k * p1


def _rk4_step(p: PhysicalParams, state: PhaseSpacePoint,
              dt: float) -> PhaseSpacePoint:
    y = (*state.x, *state.p)
    k1 = _lorentz_rhs(p, *y)
    k2 = _lorentz_rhs(p, *(y[i] + 0.5 * dt * k1[i] for i in range(4)))
    k3 = _lorentz_rhs(p, *(y[i] + 0.5 * dt * k2[i] for i in range(4)))
    k4 = _lorentz_rhs(p, *(y[i] + dt * k3[i] for i in range(4)))
    out = tuple(y[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
                for i in range(4))
    return PhaseSpacePoint(out[:2], out[2:])


def integrate(p: PhysicalParams, s0: PhaseSpacePoint, dt: float, n: int,
              method: str = "boris") -> list[PhaseSpacePoint]:
    """Integrate the Lorentz-force flow for n steps of size dt.

    ``method="boris"`` uses the rotation-split step (exactly momentum-norm
    preserving); ``method="rk4"`` the classical Runge-Kutta step.  Returns
    the n+1 states including the initial one.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if n < 1:
        raise ValueError("need at least one step")
    if method == "boris":
        step = _rotation_step
    elif method == "rk4":
        step = _rk4_step
    else:
        raise ValueError(f"unknown method {method!r}")
    out = [s0]
    s = s0
    for _ in range(n):
        s = step(p, s, dt)
        out.append(s)
    return out


def noether_charges(p: PhysicalParams, x0: tuple[float, float],
                    s: PhaseSpacePoint) -> NoetherCharges:
    """Conserved charges at a phase-space point, relative to the origin x0:

    ``E = p^2/(2m)``, ``T_i = p_i - qB eps_ij u_j``,
    ``M3 = eps_ij u_i p_j + qB u^2 / 2`` with u = x - x0.
    """
    u1, u2 = s.x[0] - x0[0], s.x[1] - x0[1]
    p1, p2 = s.p
    qb = p.qB
    e = (p1 * p1 + p2 * p2) / (2.0 * p.m)
    t1 = p1 - qb * u2
    t2 = p2 + qb * u1
    m3 = u1 * p2 - u2 * p1 + 0.5 * qb * (u1 * u1 + u2 * u2)
    return NoetherCharges(e, t1, t2, m3)


def magnetic_centre(p: PhysicalParams, x0: tuple[float, float],
                    T: tuple[float, float]) -> tuple[float, float]:
    """Guiding-centre position from the translation charges:
    ``xc_i = x0_i + eps_ij T_j / (qB)``."""
    qb = p.qB
    return x0[0] + T[1] / qb, x0[1] - T[0] / qb


def canonical_momenta(g: GaugeChoice, p: PhysicalParams,
                      s: PhaseSpacePoint) -> tuple[float, float]:
    """Gauge-variant canonical momenta pi_i = p_i + q A_i(x)."""
    a1, a2 = vector_potential(g, p, s.x)
    return s.p[0] + p.q * a1, s.p[1] + p.q * a2


# ---------------------------------------------------------------------------
# Polynomial phase-space observables and the magnetic Poisson bracket
# ---------------------------------------------------------------------------

# exponent tuples index (u1, u2, p1, p2)
_U1, _U2, _P1, _P2 = 0, 1, 2, 3


class PolyObservable:
    """Polynomial in the four phase-space coordinates (u1, u2, p1, p2) with
    exact dict-backed coefficients; positions are relative to the chosen
    origin x0."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            if len(key) != 4 or any(e < 0 for e in key):
                raise ValueError(f"bad exponent tuple {key}")
            if c != 0:
                clean[tuple(int(e) for e in key)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PolyObservable is immutable")

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def coordinate(cls, name: str):
        idx = {"u1": _U1, "u2": _U2, "p1": _P1, "p2": _P2}[name]
        key = [0, 0, 0, 0]
        key[idx] = 1
        return cls({tuple(key): 1.0})

    @classmethod
    def from_position_poly(cls, poly: Poly2):
        return cls({(i, j, 0, 0): c for (i, j), c in poly.terms.items()})

    def __add__(self, other):
        other = other if isinstance(other, PolyObservable) else PolyObservable.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return PolyObservable(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyObservable({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, PolyObservable) else PolyObservable.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyObservable):
            out: dict = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    out[k] = out.get(k, 0) + c1 * c2
            return PolyObservable(out)
        return PolyObservable({k: c * other for k, c in self.terms.items()})

    __rmul__ = __mul__

    def diff(self, idx: int):
        out = {}
        for key, c in self.terms.items():
            if key[idx] > 0:
                nk = list(key)
                nk[idx] -= 1
                out[tuple(nk)] = out.get(tuple(nk), 0) + c * key[idx]
        return PolyObservable(out)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PolyObservable) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, x0: tuple[float, float], s: PhaseSpacePoint) -> float:
        u = (s.x[0] - x0[0], s.x[1] - x0[1], s.p[0], s.p[1])
        acc = 0.0
        for key in sorted(self.terms):
            v = self.terms[key]
            for base, e in zip(u, key):
                v *= base ** e
            acc += v
        return acc

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __repr__(self):
        return f"PolyObservable({len(self.terms)} terms, degree {self.degree})"


def poisson_bracket(f: PolyObservable, g: PolyObservable, p: PhysicalParams,
                    max_degree: int = 16) -> PolyObservable:
    """Magnetic Poisson bracket on polynomial observables:

    ``{f, g} = sum_i (df/du_i dg/dp_i - df/dp_i dg/du_i)
               + qB (df/dp1 dg/dp2 - df/dp2 dg/dp1)``

    computed exactly over coefficients.  Raises DegreeOverflowError when the
    result would exceed ``max_degree``.
    """
    from .params import DegreeOverflowError

    fu1, fu2 = f.diff(_U1), f.diff(_U2)
    fp1, fp2 = f.diff(_P1), f.diff(_P2)
    gu1, gu2 = g.diff(_U1), g.diff(_U2)
    gp1, gp2 = g.diff(_P1), g.diff(_P2)
    out = (fu1 * gp1 - fp1 * gu1) + (fu2 * gp2 - fp2 * gu2) \
        + p.qB * (fp1 * gp2 - fp2 * gp1)
    if out.degree > max_degree:
        raise DegreeOverflowError(
            f"bracket degree {out.degree} exceeds bound {max_degree}")
    return out


def energy_observable(p: PhysicalParams) -> PolyObservable:
    """E = (p1^2 + p2^2)/(2m)."""
    c = 1.0 / (2.0 * p.m)
    return PolyObservable({(0, 0, 2, 0): c, (0, 0, 0, 2): c})


def translation_observable(i: int, p: PhysicalParams) -> PolyObservable:
    """T_i = p_i - qB eps_ij u_j."""
    qb = p.qB
    if i == 1:
        return PolyObservable({(0, 0, 1, 0): 1.0, (0, 1, 0, 0): -qb})
    if i == 2:
        return PolyObservable({(0, 0, 0, 1): 1.0, (1, 0, 0, 0): qb})
    raise ValueError("component must be 1 or 2")


def rotation_observable(p: PhysicalParams) -> PolyObservable:
    """M3 = u1 p2 - u2 p1 + qB (u1^2 + u2^2)/2."""
    qb = p.qB
    return PolyObservable({
        (1, 0, 0, 1): 1.0,
        (0, 1, 1, 0): -1.0,
        (2, 0, 0, 0): 0.5 * qb,
        (0, 2, 0, 0): 0.5 * qb,
    })


def centre_observable(i: int, p: PhysicalParams,
                      x0: tuple[float, float] = (0.0, 0.0)) -> PolyObservable:
    """xc_i = x0_i + eps_ij T_j / (qB) as a phase-space polynomial."""
    qb = p.qB
    t = translation_observable(2 if i == 1 else 1, p)
    sgn = 1.0 if i == 1 else -1.0
    return PolyObservable.const(x0[i - 1]) + (sgn / qb) * t


def canonical_momentum_observable(i: int, g: GaugeChoice,
                                  p: PhysicalParams) -> PolyObservable:
    """pi_i = p_i + q A_i(u) with the gauge's polynomial vector potential."""
    from .params import vector_potential_polys

    a1, a2 = vector_potential_polys(g, p.B)
    a = a1 if i == 1 else a2
    return (PolyObservable.coordinate(f"p{i}")
            + p.q * PolyObservable.from_position_poly(a))
