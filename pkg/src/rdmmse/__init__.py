"""Rate-distortion curves under a fixed reproduction law.

The curve is evaluated two independent ways: a convex one-dimensional
search on the tilted-channel conjugate form, and adaptive integration of
the conditional distortion variance in the tilt parameter.  Closed-form
high- and low-distortion bounds, a channel-capacity analogue of the
integral, and small exhaustive oracles round out the package.
"""

from .bounds import (
    BoundCurve,
    MomentSummary,
    delta_inverse,
    gaussian_moments,
    high_distortion_lower,
    high_distortion_upper,
    highres_asymptote,
    laplacian_mmse_series,
    laplacian_moments,
    low_distortion_constants,
    low_distortion_lower,
    low_distortion_lower_validity,
    low_distortion_upper,
    lr_highres_rate,
    shannon_lower_bound,
    taylor_phi,
)
from .capacity import (
    ChannelProblem,
    capacity_by_integral,
    capacity_legendre,
    capacity_mmse,
    direct_mutual_information,
)
from .curve import (
    Curve,
    CurvePoint,
    SolveError,
    distortion_by_integral,
    distortion_by_tail_integral,
    legendre_rate,
    rate_at_d_infinity,
    rate_by_integral,
    rate_by_tail_integral,
    solve_s_for_distortion,
    trace_curve,
)
from .gibbs import (
    GibbsChannel,
    gibbs_channel,
    induced_marginal,
    log_partition,
    mmse,
    parametric_distortion,
    rate_at_parameter,
)
from .oracle import blahut_arimoto, bruteforce_rq, mot_rate_function, q_search_infimum
from .presets import PRESET_NAMES, load_preset
from .problem import (
    DistortionSpec,
    build_distortion_matrix,
    GaussianDensity,
    Grid,
    LaplacianDensity,
    Pmf,
    RdProblem,
    UniformDensity,
    d_infinity,
    d_zero,
    discretize_density,
)
from .quadrature import QuadratureConfig, QuadratureError, adaptive_quadrature

__version__ = "0.1.0"

__all__ = [
    "BoundCurve",
    "ChannelProblem",
    "Curve",
    "CurvePoint",
    "DistortionSpec",
    "GaussianDensity",
    "GibbsChannel",
    "Grid",
    "LaplacianDensity",
    "MomentSummary",
    "PRESET_NAMES",
    "Pmf",
    "QuadratureConfig",
    "QuadratureError",
    "RdProblem",
    "SolveError",
    "UniformDensity",
    "adaptive_quadrature",
    "blahut_arimoto",
    "bruteforce_rq",
    "build_distortion_matrix",
    "capacity_by_integral",
    "capacity_legendre",
    "capacity_mmse",
    "d_infinity",
    "d_zero",
    "delta_inverse",
    "direct_mutual_information",
    "discretize_density",
    "distortion_by_integral",
    "distortion_by_tail_integral",
    "gaussian_moments",
    "gibbs_channel",
    "high_distortion_lower",
    "high_distortion_upper",
    "highres_asymptote",
    "induced_marginal",
    "laplacian_mmse_series",
    "laplacian_moments",
    "legendre_rate",
    "load_preset",
    "log_partition",
    "low_distortion_constants",
    "low_distortion_lower",
    "low_distortion_lower_validity",
    "low_distortion_upper",
    "lr_highres_rate",
    "mmse",
    "mot_rate_function",
    "parametric_distortion",
    "q_search_infimum",
    "rate_at_d_infinity",
    "rate_at_parameter",
    "rate_by_integral",
    "rate_by_tail_integral",
    "shannon_lower_bound",
    "solve_s_for_distortion",
    "taylor_phi",
    "trace_curve",
    "__version__",
]
