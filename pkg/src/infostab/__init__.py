"""Numerical laboratory for parametric information-measure equations.

The package measures how far given data sits from solving the functional
equations behind degree-alpha entropies, and turns the stability theory's
explicit constants into executable certificates: residual sweeps on simplex,
triangle and cone lattices; candidate-solution fits; and pass/fail bound
checks with machine-readable reports.
"""

from .certifiers import (
    AssociativityCertificate,
    CertifierTrace,
    MeasureSequenceCertificate,
    SequenceRow,
    StabilityCertificate,
    StabilityConstants,
    box_growth_constants,
    certificate_slack,
    certify_associativity,
    certify_entropy_equation,
    certify_fundamental_closed,
    certify_fundamental_open,
    certify_hyperstable,
    certify_measure_sequence,
    certify_modified_entropy,
    certify_sum_form,
    certify_sum_form_mixed,
    certify_sum_form_multiplicative,
    hyperstability_blowup_probe,
    stability_constant_K,
    stability_constant_T,
    stability_constants,
)
from .domains import (
    ConeGrid,
    PairGrid,
    SimplexGrid,
    TriangleGrid,
    UnitGrid,
    grid_to_csv,
    pow0,
    ratio0,
    xlog2,
)
from .equations import (
    CauchyAdditive,
    Cocycle,
    DaroczyIdentity,
    EntropyEq,
    FundamentalParametric,
    InfoFunctionForm,
    Logarithmic,
    ModifiedEntropy,
    Multiplicative,
    PhiEquation,
    ResidualReport,
    SumFormAdditive,
    SumFormAlpha,
    SumFormMultiplicative,
    dump_defects_csv,
    homogeneity_residual,
    product_distribution,
    residual,
    symmetry_residual,
)
from .errors import (
    BudgetExceededError,
    ConfigurationError,
    DispatchError,
    DomainError,
    InfostabError,
    InvalidDistributionError,
    InvalidResolutionError,
    UnsupportedParameterError,
)
from .measures import (
    GeneratingDefect,
    InformationMeasure,
    LevelNoise,
    check_additivity,
    check_normalization,
    check_semisymmetry3,
    check_sum_property,
    check_symmetry,
    derive_generating_defect,
    recursivity_defect,
    sum_property_cauchy_gap,
    tabulate,
)
from .models import (
    AffineSum,
    Alpha,
    CocycleForm,
    Constant,
    Constant3,
    EndpointPatch,
    EntropySolution,
    FunctionSum,
    GridSample,
    LogFamily,
    ModifiedEntropySolution,
    PhiForm,
    PhiOfSum,
    PowerFamily,
    PowerLaw,
    PowerLog,
    ProductUV,
    RatioLift,
    Regime,
    ScaledBump,
    ShannonInfo,
    Sum3,
    Wave2,
    Wave3,
    XLogX,
    alpha_entropy,
    alpha_sum_generator,
    bivariate_from_config,
    config_of,
    entropy_limit_gap,
    sampled,
    scalar_from_config,
    shannon_entropy,
    shannon_info_function,
    ternary_from_config,
    validate_distribution,
)

__version__ = "0.1.0"
