"""Monte-Carlo laboratory for discretized Brownian last passage percolation.

Simulates a discretized directed landscape built from Brownian lines, extracts
directed geodesics and their weight functions, and runs the statistical
experiments that probe their scaling behaviour: 3/2-variation of geodesics,
cubic variation of weights, Brownian-Bessel local environments, compressed
exponential increment tails, asymptotic independence of increments, and
failure of the critical Hoelder exponents.
"""

__version__ = "0.1.0"

from .errors import ArgumentError, EstimationError, RangeError
from .rng import Rng
from .paths import (
    SampledPath,
    meander_weight,
    sample_bessel3,
    sample_brownian,
    sample_brownian_bridge,
)
from .field import LppField, build_field, load_field, resample_field, save_field
from .dp import Geodesic, extract_geodesic, passage_profile, raw_last_passage
from .landscape import LandscapeQuery, geodesic_between, kpz_evolve, landscape_approx
from .geodesy import (
    EnvironmentQuintuple,
    holder_statistic,
    overlap,
    rescale_environment,
    variation,
    weight_function,
)
from .limit_env import (
    LimitSample,
    MomentEstimate,
    estimate_mu,
    estimate_nu,
    sample_limit_environment,
    tail_samples_boundary_argmax,
)
from .stats import TailFit, bootstrap_corr, fit_tail_exponent, two_sample_distance

__all__ = [
    "ArgumentError",
    "EstimationError",
    "RangeError",
    "Rng",
    "SampledPath",
    "sample_brownian",
    "sample_bessel3",
    "sample_brownian_bridge",
    "meander_weight",
    "LppField",
    "build_field",
    "resample_field",
    "save_field",
    "load_field",
    "Geodesic",
    "raw_last_passage",
    "passage_profile",
    "extract_geodesic",
    "LandscapeQuery",
    "landscape_approx",
    "geodesic_between",
    "kpz_evolve",
    "weight_function",
    "variation",
    "holder_statistic",
    "overlap",
    "rescale_environment",
    "EnvironmentQuintuple",
    "LimitSample",
    "MomentEstimate",
    "sample_limit_environment",
    "estimate_nu",
    "estimate_mu",
    "tail_samples_boundary_argmax",
    "TailFit",
    "fit_tail_exponent",
    "two_sample_distance",
    "bootstrap_corr",
]
