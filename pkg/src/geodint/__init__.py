"""Geodesic interpolation on generative-model manifolds.

The latent space of a smooth generator f: Z -> X carries the pullback
metric g = J^T J. This package computes discrete geodesics under that
metric by gradient descent in ambient coordinates, optionally with a
density regularizer that keeps the path out of low-density holes, plus
baselines, diagnostics and an independent brute-force oracle.
"""

from . import kernels
from .density import StandardNormalPrior, log_prior, regularizer, regularizer_grad
from .errors import (
    DegenerateSegment,
    DimensionMismatch,
    GeodintError,
    InvalidConfig,
    ParseError,
    SchemaError,
    SingularMetric,
    UnreachableEndpoint,
)
from .evaluation import (
    InterpolationReport,
    OracleConfig,
    compare,
    cosine_dissimilarity,
    curve_length,
    graph_geodesic_oracle,
    nll_profile,
)
from .generators import (
    Generator,
    LinearGenerator,
    MlpGenerator,
    MlpLayer,
    RadialWarpGenerator,
    builtin,
    load_weight_file,
    make_lambertian,
    save_weight_file,
)
from .geometry import (
    christoffel_fd,
    metric_log_det,
    pullback_metric,
    pullback_vector,
)
from .solver import (
    DiscreteCurve,
    SolveTrace,
    SolverConfig,
    interpolate,
    solve,
    step,
    straight_z,
)

__version__ = "0.1.0"
