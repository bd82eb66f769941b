"""moprec: recurrence-coefficient conversions for type II multiple orthogonal polynomials.

Three equivalent descriptions of a two-measure (and, for the inverse
direction, r-measure) type II multiple orthogonal polynomial system are
supported, with exact rational arithmetic throughout:

* step-line four-term recurrence tables (beta, gamma, delta),
* nearest-neighbor recurrence grids (a, b, c, d),
* per-measure marginal three-term recurrences (b_n, a_n^2).

``stepline`` and ``nearest_neighbor`` implement the forward direction
(step-line data plus one free parameter to the full grid and the marginals),
``inverse_problem`` the reverse (marginals to grid to step-line), and
``polynomial_oracle`` an independent moment-based construction used to
cross-check everything.
"""

from .errors import (
    DomainError,
    InitError,
    InternalError,
    MoprecError,
    NonNormalIndexError,
    NormalityError,
    ParseError,
    RangeError,
    SeedMismatch,
    SingularSweepError,
)
from .numerics import DEFAULT_DIGITS, Rational, Real, Scalar, as_fraction, sqrt_real, to_decimal
from .stepline import (
    Axis,
    CoeffSeq,
    CSequence,
    ShiftFamily,
    StepLineCoeffs,
    build_family_e1,
    build_family_e2,
    determined_seed_e2,
    level0,
    riccati_closed_form,
    riccati_csequence,
    seed_c00,
    shift_e1,
    shift_e2,
)
from .measures_catalog import (
    DiscreteMeasure,
    bessel_stepline,
    convex_combination,
    moments,
    random_pair,
    random_system,
)
from .nearest_neighbor import (
    MarginalRecurrence,
    NNGrid,
    marginal_mu1,
    marginal_mu2,
    marginal_positive,
    nn_from_shifts,
)
from .polynomial_oracle import (
    MomentTable,
    Poly,
    eval_chain,
    marginal_oracle,
    mop_from_moments,
    nn_oracle,
    orthogonality_residuals,
    stepline_oracle,
)
from .inverse_problem import (
    NNGridR,
    TransferMatrix,
    compatibility_check,
    general_from_r2,
    nn_from_marginals_general,
    nn_from_marginals_r2,
    pd_residuals_general,
    pd_residuals_r2,
    stepline_from_nn,
    transfer_matrix,
)

__all__ = [
    "DEFAULT_DIGITS",
    "Axis",
    "CSequence",
    "CoeffSeq",
    "DiscreteMeasure",
    "DomainError",
    "InitError",
    "InternalError",
    "MarginalRecurrence",
    "MomentTable",
    "MoprecError",
    "NNGrid",
    "NNGridR",
    "NonNormalIndexError",
    "NormalityError",
    "ParseError",
    "Poly",
    "RangeError",
    "Rational",
    "Real",
    "Scalar",
    "SeedMismatch",
    "ShiftFamily",
    "SingularSweepError",
    "StepLineCoeffs",
    "TransferMatrix",
    "as_fraction",
    "bessel_stepline",
    "build_family_e1",
    "build_family_e2",
    "compatibility_check",
    "convex_combination",
    "determined_seed_e2",
    "eval_chain",
    "general_from_r2",
    "level0",
    "marginal_mu1",
    "marginal_mu2",
    "marginal_oracle",
    "marginal_positive",
    "moments",
    "mop_from_moments",
    "nn_from_marginals_general",
    "nn_from_marginals_r2",
    "nn_from_shifts",
    "nn_oracle",
    "orthogonality_residuals",
    "pd_residuals_general",
    "pd_residuals_r2",
    "random_pair",
    "random_system",
    "riccati_closed_form",
    "riccati_csequence",
    "seed_c00",
    "shift_e1",
    "shift_e2",
    "stepline_from_nn",
    "stepline_oracle",
    "transfer_matrix",
]
