"""Spectral functions, m-functions and generalized Fourier transforms for
regular Sturm-Liouville problems with a semi-definite (possibly vanishing)
weight."""

from .errors import (
    ConfigError,
    CrossCheckError,
    DoubleRootError,
    GridMismatchError,
    PoleContaminatedError,
    PoleProximityError,
    PropagationError,
    QuadratureError,
    SLSpectraError,
    UnresolvedAsymptoticsError,
    WindowError,
)
from .nevanlinna import (
    Asymptotics,
    BCClass,
    BoundaryParam,
    EtaRelation,
    asymptotics,
    check_nevanlinna,
    classify_bc,
    constant,
    eta_relation,
    eval_param,
    infinity,
    mobius,
    parse_tau,
    sqrt_param,
)
from .problem import (
    ConstantRule,
    Piece,
    PiecewiseCoefficient,
    PolyRule,
    QuadConfig,
    SLProblem,
    TableRule,
    constant_coefficient_problem,
    delta_inner,
    delta_norm,
    load_problem,
    loads_problem,
    weight_support_measure,
)
from .propagator import (
    StateVec,
    Trajectory,
    phi_at,
    propagate,
    psi_at,
    wronskian,
)
from .spectral import (
    MFunctionSample,
    SpectralFunction,
    build_spectral_function,
    find_eigenvalues,
    m_function,
    point_mass,
    pure_point_spectral,
    spectral_density,
    stieltjes_cdf,
)
from .transform import (
    ConvergenceReport,
    EigenMode,
    InverseResult,
    MembershipReport,
    TransformedFn,
    Truncation,
    eigen_expansion,
    fourier_transform,
    inverse_transform,
    membership_in_F,
    parseval_defect,
    uniform_convergence_profile,
)

__version__ = "0.1.0"

__all__ = [
    "Asymptotics",
    "BCClass",
    "BoundaryParam",
    "ConfigError",
    "ConstantRule",
    "ConvergenceReport",
    "CrossCheckError",
    "DoubleRootError",
    "EigenMode",
    "EtaRelation",
    "GridMismatchError",
    "InverseResult",
    "MFunctionSample",
    "MembershipReport",
    "Piece",
    "PiecewiseCoefficient",
    "PoleContaminatedError",
    "PoleProximityError",
    "PolyRule",
    "PropagationError",
    "QuadConfig",
    "QuadratureError",
    "SLProblem",
    "SLSpectraError",
    "SpectralFunction",
    "StateVec",
    "TableRule",
    "Trajectory",
    "TransformedFn",
    "Truncation",
    "UnresolvedAsymptoticsError",
    "WindowError",
    "asymptotics",
    "build_spectral_function",
    "check_nevanlinna",
    "classify_bc",
    "constant",
    "constant_coefficient_problem",
    "delta_inner",
    "delta_norm",
    "eigen_expansion",
    "eta_relation",
    "eval_param",
    "find_eigenvalues",
    "fourier_transform",
    "infinity",
    "inverse_transform",
    "load_problem",
    "loads_problem",
    "m_function",
    "membership_in_F",
    "mobius",
    "parse_tau",
    "parseval_defect",
    "phi_at",
    "point_mass",
    "propagate",
    "psi_at",
    "pure_point_spectral",
    "spectral_density",
    "sqrt_param",
    "stieltjes_cdf",
    "uniform_convergence_profile",
    "weight_support_measure",
    "wronskian",
]
