"""germlab: exact analysis of polynomial map-germs.

Computes liftable/lowerable vector fields, K_e- and A_e-codimensions,
minimal unfolding data, weighted-homogeneity, Milnor/Tjurina numbers and
the substantiality decisions for stable unfoldings, all over exact
rational arithmetic.
"""

from .decide import (
    LambdaJetSpace,
    Mult3Data,
    analyze_unfolding,
    decide_qh_minimal,
    decide_qh_mult3,
    decide_substantial,
    decide_weak_substantial,
    lambda_jet_space,
    mult3_extract,
)
from .fields import (
    DiscriminantEq,
    LiftPair,
    NotLiftableAt,
    VectorField,
    analytic_stratum_dim,
    discriminant_equation,
    lift_module,
    lower_partner,
    one_jet,
    projectable_filter,
    restrict_lift_to_base,
    spectrum,
    transport,
)
from .germs import (
    HeuristicCodim,
    MapGerm,
    QuotientBasisElement,
    Unfolding,
    ae_codim,
    build_standard_unfolding,
    corank,
    is_stable,
    ke_codim,
    minimal_unfolding_data,
    multiplicity,
    tke_span,
)
from .jets import (
    DEFAULT_DEGREE,
    CodimCertificate,
    JetBasis,
    ModuleSpan,
    MultiplierRing,
    NotFiniteUpTo,
    NotInSpanAt,
    Witness,
    finite_codim_certified,
    jet_span,
    membership_witness,
    syzygy_solve,
)
from .linalg import RationalMatrix, SpectrumReport, char_poly_spectrum, linear_solve_exact
from .poly import Polynomial, PolyParseError, formal_inverse_jet, parse_polynomial
from .resultant import poly_gcd, squarefree_part, sylvester_resultant
from .verdicts import NO, UNKNOWN, YES, Inapplicable, UnsupportedShape, Verdict
from .weights import (
    EulerPair,
    WeightSystem,
    euler_pair,
    good_weights_check,
    milnor_number,
    pd_normalize,
    saito_check,
    tjurina_number,
    wh_detect,
)

__version__ = "0.1.0"
