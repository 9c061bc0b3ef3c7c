"""Physical constants, the general planar gauge family, and exact bivariate
polynomial algebra.

All gauge data are expressed in coordinates shifted to a common origin,
``u_k = x_k - x0_k``.  Gauge functions are restricted to bivariate
polynomials so that gradients, gauge phases and curl identities are exact
at the coefficient level.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

__all__ = [
    "DEFAULT_MAX_DEGREE",
    "PolyParseError",
    "DegreeOverflowError",
    "OriginMismatchError",
    "Poly2",
    "parse_poly",
    "format_poly",
    "PhysicalParams",
    "derived_params",
    "GaugeChoice",
    "vector_potential",
    "vector_potential_polys",
    "gauge_delta",
]

DEFAULT_MAX_DEGREE = 6


class PolyParseError(ValueError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DegreeOverflowError(ValueError):
    """Raised when a polynomial exceeds the configured degree bound."""


class OriginMismatchError(ValueError):
    """Raised when two gauge choices with different origins are combined."""


class Poly2:
    """Bivariate polynomial ``sum c_ij * u1^i * u2^j`` with exact dict-backed
    coefficient arithmetic.

    Zero coefficients are never stored.  Instances are treated as immutable;
    every operation returns a new polynomial.  Coefficients are usually real
    (gauge functions are real by construction) but complex values are
    accepted, which the wave-function factor algebra relies on.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in {(i, j)}")
            if c != 0:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly2 is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly2":
        return cls({})

    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def variable(cls, axis: int) -> "Poly2":
        """u1 for axis 1, u2 for axis 2."""
        if axis not in (1, 2):
            raise ValueError("axis must be 1 or 2")
        return cls({(1, 0) if axis == 1 else (0, 1): 1.0})

    @classmethod
    def monomial(cls, i: int, j: int, c=1.0) -> "Poly2":
        return cls({(i, j): c})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Poly2":
        other = _as_poly(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Poly2(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly2":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly2":
        return _as_poly(other) + (-self)

    def __neg__(self) -> "Poly2":
        return Poly2({k: -c for k, c in self.terms.items()})

    def __mul__(self, other) -> "Poly2":
        if isinstance(other, Poly2):
            out: dict = {}
            for (i1, j1), c1 in self.terms.items():
                for (i2, j2), c2 in other.terms.items():
                    k = (i1 + i2, j1 + j2)
                    out[k] = out.get(k, 0) + c1 * c2
            return Poly2(out)
        return Poly2({k: c * other for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly2":
        if n < 0:
            raise ValueError("negative power")
        out = Poly2.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, axis: int) -> "Poly2":
        """Exact partial derivative with respect to u1 (axis=1) or u2 (axis=2)."""
        out = {}
        for (i, j), c in self.terms.items():
            if axis == 1 and i > 0:
                out[(i - 1, j)] = c * i
            elif axis == 2 and j > 0:
                out[(i, j - 1)] = c * j
        return Poly2(out)

    # -- queries -----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((i + j for i, j in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __call__(self, u1, u2):
        """Evaluate at shifted coordinates; accepts scalars or numpy arrays."""
        if not self.terms:
            return 0.0 * u1
        imax = max(i for i, _ in self.terms)
        jmax = max(j for _, j in self.terms)
        p1 = [1.0]
        for _ in range(imax):
            p1.append(p1[-1] * u1)
        p2 = [1.0]
        for _ in range(jmax):
            p2.append(p2[-1] * u2)
        acc = 0.0
        for (i, j) in sorted(self.terms):
            acc = acc + self.terms[(i, j)] * p1[i] * p2[j]
        return acc

    def __repr__(self):
        return f"Poly2({format_poly(self)!r})"


def _as_poly(v) -> Poly2:
    if isinstance(v, Poly2):
        return v
    return Poly2.const(v)


# ---------------------------------------------------------------------------
# Parsing and canonical printing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)|(?P<var>u1|u2)|(?P<op>[-+*^]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolyParseError("unexpected character", pos)
        if m.lastgroup == "num":
            out.append(("num", float(m.group("num")), pos))
        elif m.lastgroup == "var":
            out.append(("var", m.group("var"), pos))
        else:
            out.append(("op", m.group("op"), pos))
        pos = m.end()
    return out


def parse_poly(text: str, max_degree: int = DEFAULT_MAX_DEGREE) -> Poly2:
    """Parse polynomial text into a :class:`Poly2`.

    Grammar: ``expression := term (('+'|'-') term)*`` with
    ``term := coeff ('*' factor)* | factor ('*' factor)*`` and
    ``factor := ('u1'|'u2') ('^' nonneg-int)?``.  Whitespace is ignored and
    a leading sign on the first term is accepted.

    Raises :class:`PolyParseError` with the character position on bad input
    and :class:`DegreeOverflowError` when the total degree exceeds
    ``max_degree``.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial", 0)
    terms: dict = {}
    k = 0
    sign = 1.0
    # optional leading sign
    if tokens[k][0] == "op" and tokens[k][1] in "+-":
        sign = -1.0 if tokens[k][1] == "-" else 1.0
        k += 1

    def parse_factor(k, i, j):
        kind, val, pos = tokens[k]
        if kind != "var":
            raise PolyParseError("expected u1 or u2", pos)
        exp = 1
        k += 1
        if k < len(tokens) and tokens[k][:2] == ("op", "^"):
            k += 1
            if k >= len(tokens) or tokens[k][0] != "num" or tokens[k][1] != int(tokens[k][1]):
                raise PolyParseError("expected nonnegative integer exponent",
                                     tokens[k - 1][2] + 1)
            exp = int(tokens[k][1])
            k += 1
        if val == "u1":
            i += exp
        else:
            j += exp
        return k, i, j

    while True:
        if k >= len(tokens):
            raise PolyParseError("expected term", tokens[-1][2] + 1 if tokens else 0)
        coeff = sign
        i = j = 0
        if tokens[k][0] == "num":
            coeff *= tokens[k][1]
            k += 1
        else:
            k, i, j = parse_factor(k, i, j)
        while k < len(tokens) and tokens[k][:2] == ("op", "*"):
            k += 1
            if k >= len(tokens):
                raise PolyParseError("dangling '*'", tokens[k - 1][2])
            k, i, j = parse_factor(k, i, j)
        if i + j > max_degree:
            raise DegreeOverflowError(
                f"term of degree {i + j} exceeds maximum degree {max_degree}")
        terms[(i, j)] = terms.get((i, j), 0.0) + coeff
        if k == len(tokens):
            break
        kind, val, pos = tokens[k]
        if kind != "op" or val not in "+-":
            raise PolyParseError("expected '+' or '-'", pos)
        sign = -1.0 if val == "-" else 1.0
        k += 1
    return Poly2(terms)


def format_poly(poly: Poly2) -> str:
    """Canonical text form; ``parse_poly(format_poly(p)) == p`` exactly."""
    if poly.is_zero():
        return "0"
    parts = []
    for (i, j) in sorted(poly.terms, key=lambda k: (k[0] + k[1], k[0], k[1])):
        c = poly.terms[(i, j)]
        mag = repr(abs(c)) if not isinstance(c, complex) else repr(abs(c))
        factors = [mag]
        if i:
            factors.append("u1" if i == 1 else f"u1^{i}")
        if j:
            factors.append("u2" if j == 1 else f"u2^{j}")
        body = "*".join(factors)
        if not parts:
            parts.append(body if c >= 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c >= 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Physical parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, charge, magnetic field and the action quantum (natural units by
    default)."""

    m: float
    q: float
    B: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass must be positive")
        if self.q == 0:
            raise ValueError("charge must be nonzero")
        if self.B == 0:
            raise ValueError("magnetic field must be nonzero")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    @property
    def omega_c(self) -> float:
        """Cyclotron frequency |qB|/m."""
        return abs(self.q * self.B) / self.m

    @property
    def sign(self) -> int:
        """Orientation sign of qB, +1 or -1."""
        return 1 if self.q * self.B > 0 else -1

    @property
    def magnetic_length(self) -> float:
        """Gaussian width sqrt(hbar / (m omega_c)) of the lowest orbitals."""
        return math.sqrt(self.hbar / (self.m * self.omega_c))

    @property
    def qB(self) -> float:
        return self.q * self.B


def derived_params(p: PhysicalParams) -> tuple[float, int, float]:
    """(cyclotron frequency, sign of qB, magnetic length)."""
    return p.omega_c, p.sign, p.magnetic_length


# ---------------------------------------------------------------------------
# Gauge family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaugeChoice:
    """One member of the two-parameter gauge family: a real shear parameter
    ``alpha``, a plane origin ``x0`` and a polynomial gauge function ``phi``
    in the shifted coordinates.

    ``alpha = 0`` with ``phi = 0`` is the symmetric gauge; ``alpha = +1``
    (resp. ``-1``) the first (resp. second) axis-aligned gauge.
    """

    alpha: float = 0.0
    x0: tuple[float, float] = (0.0, 0.0)
    phi: Poly2 = field(default_factory=Poly2.zero)

    def __post_init__(self):
        if len(self.x0) != 2:
            raise ValueError("x0 must be a pair")
        object.__setattr__(self, "x0", (float(self.x0[0]), float(self.x0[1])))

    def phibar(self, B: float) -> Poly2:
        """Total gauge function: -(alpha*B/2) u1 u2 + phi."""
        return Poly2.monomial(1, 1, -0.5 * self.alpha * B) + self.phi

    def shifted(self, x1, x2):
        """Map plane coordinates to the shifted coordinates of this gauge."""
        return x1 - self.x0[0], x2 - self.x0[1]


def vector_potential_polys(g: GaugeChoice, B: float) -> tuple[Poly2, Poly2]:
    """Cartesian components of the vector potential as exact polynomials in
    the shifted coordinates:

    ``A1 = -1/2 (alpha+1) B u2 + d(phi)/du1``,
    ``A2 = -1/2 (alpha-1) B u1 + d(phi)/du2``.
    """
    a1 = Poly2.monomial(0, 1, -0.5 * (g.alpha + 1.0) * B) + g.phi.diff(1)
    a2 = Poly2.monomial(1, 0, -0.5 * (g.alpha - 1.0) * B) + g.phi.diff(2)
    return a1, a2


def vector_potential(g: GaugeChoice, p: PhysicalParams,
                     x: tuple[float, float]) -> tuple[float, float]:
    """Evaluate the vector potential at a plane point."""
    a1, a2 = vector_potential_polys(g, p.B)
    u1, u2 = g.shifted(x[0], x[1])
    return a1(u1, u2), a2(u1, u2)


def gauge_delta(g_from: GaugeChoice, g_to: GaugeChoice, p: PhysicalParams) -> Poly2:
    """Gauge-transformation function between two family members sharing an
    origin: ``-1/2 (alpha_to - alpha_from) B u1 u2 + phi_to - phi_from``.

    The gradient of the result equals the difference of the two vector
    potentials as an exact polynomial identity.
    """
    if g_from.x0 != g_to.x0:
        raise OriginMismatchError(
            f"gauge origins differ: {g_from.x0} vs {g_to.x0}")
    return (Poly2.monomial(1, 1, -0.5 * (g_to.alpha - g_from.alpha) * p.B)
            + g_to.phi - g_from.phi)
