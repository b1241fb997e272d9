"""Fisher-Rao geometry of the SPD matrix cone.

Value types and spectral matrix functions (`symmat`), the Riemannian
geometry itself (`geometry`), the zero-mean Gaussian model behind the metric
(`gaussian`), independent numerical oracles (`oracles`), the randomized
verification suite (`suite`), and a CLI (`cli`).
"""

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    LeftCone,
    MatrixFormatError,
    NotPositiveDefinite,
)
from .gaussian import GaussianModel
from .geometry import (
    DistanceConvention,
    Geodesic,
    TangentVector,
    christoffel,
    distance,
    exp_map,
    geodesic_point,
    geodesic_velocity,
    log_map,
    metric,
    pencil_eigenvalues,
)
from .matrixio import format_matrix, parse_matrix, read_spd_matrix, read_symmetric_matrix, write_matrix
from .oracles import (
    OdeSolution,
    VerificationReport,
    check_inverse_derivative,
    fd_path_derivative,
    integrate_geodesic_ode,
    make_report,
    mc_fisher,
)
from .suite import SuiteConfig, run_suite, random_spd, random_symmetric, random_tangent
from .symmat import (
    EigenDecomposition,
    SpdMatrix,
    SymmetricMatrix,
    congruence,
    matrix_function,
    sym_eigen,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceFailure",
    "DimensionMismatch",
    "DistanceConvention",
    "EigenDecomposition",
    "GaussianModel",
    "Geodesic",
    "LeftCone",
    "MatrixFormatError",
    "NotPositiveDefinite",
    "OdeSolution",
    "SpdMatrix",
    "SuiteConfig",
    "SymmetricMatrix",
    "TangentVector",
    "VerificationReport",
    "check_inverse_derivative",
    "christoffel",
    "congruence",
    "distance",
    "exp_map",
    "fd_path_derivative",
    "format_matrix",
    "geodesic_point",
    "geodesic_velocity",
    "integrate_geodesic_ode",
    "log_map",
    "make_report",
    "matrix_function",
    "mc_fisher",
    "metric",
    "parse_matrix",
    "pencil_eigenvalues",
    "random_spd",
    "random_symmetric",
    "random_tangent",
    "read_spd_matrix",
    "read_symmetric_matrix",
    "run_suite",
    "sym_eigen",
    "write_matrix",
]
