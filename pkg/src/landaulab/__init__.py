"""Numerical verification toolkit for the planar charged particle in a
uniform magnetic field under a fully general parametrised gauge family.

The library cross-checks three independent routes to the same physics:
operator algebra on a truncated two-sector Fock space, closed-form wave
functions with exact analytic derivatives, and classical canonical
mechanics with a polynomial Poisson-bracket engine; deterministic Gaussian
quadrature acts as the brute-force oracle tying the routes together.
"""

from .params import (DEFAULT_MAX_DEGREE, DegreeOverflowError, GaugeChoice,
                     OriginMismatchError, PhysicalParams, Poly2,
                     PolyParseError, derived_params, format_poly, gauge_delta,
                     parse_poly, vector_potential, vector_potential_polys)
from .classical import (NoetherCharges, PhaseSpacePoint, PolyObservable,
                        TrajectoryParams, analytic_trajectory,
                        canonical_momenta, integrate, magnetic_centre,
                        noether_charges, poisson_bracket)
from .fockspace import (FockBasis, FockOperator, TruncationError,
                        build_observable, change_of_basis, commutator_check,
                        gauge_variant_matrix, interior_deviation,
                        interior_project, ladder_ops, poly_operator,
                        t1_fock_overlap, angular_element)
from .waves import (DiffOpSpec, HermiteGaussian1D, SpecialFactor, WaveForm,
                    fock_state, flat_connection_rep, gauge_phase, hermite,
                    laguerre, multiplication_op, phase_shifted, plane_wave,
                    position_op, t1_basis_function, t1_state, t1rep_apply)
from .quadrature import (Grid2, QuadResult, SupportOverflowError,
                         inner_product, line_integral, matrix_element)
from .report import CheckRecord, VerificationReport

__version__ = "0.1.0"
