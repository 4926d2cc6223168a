"""Range-efficient consistent sampling and locality-sensitive hashing on integer grids."""

from .area_summary import (AreaSummary, QueryResult, build_summary, load_summary, query_intersection,
                           query_union, save_summary)
from .errors import DomainError, InfeasibleError, PreconditionError
from .field_hash import (LinearHash1D, LinearHash2D, PolyHash, derive_seed, eval_1d, eval_2d,
                         eval_minwise, is_prime, mod_inverse, prime_in_dyadic)
from .integer_hull import PolyHashLine, band_points, closest_below, upper_hull
from .interval_sampler import IntervalSample, bottom_k, min_hash_interval, threshold_sample
from .minwise_lsh import (Histogram, LshFunction, histogram_hash, lsh_from_sample, point_set_hash,
                          polygon_hash)
from .polygon_geom import (GridPolygon, GridSpec, contains, diameter, grid_count, in_dilation,
                           in_erosion)
from .rect_sampler import GridRect, RectSample, estimate_count, zero_set

__version__ = "0.1.0"

__all__ = [
    "AreaSummary", "DomainError", "GridPolygon", "GridRect", "GridSpec", "Histogram",
    "InfeasibleError", "IntervalSample", "LinearHash1D", "LinearHash2D", "LshFunction",
    "PolyHash", "PolyHashLine", "PreconditionError", "QueryResult", "RectSample",
    "band_points", "bottom_k", "build_summary", "closest_below", "contains", "derive_seed",
    "diameter", "estimate_count", "eval_1d", "eval_2d", "eval_minwise", "grid_count",
    "histogram_hash", "in_dilation", "in_erosion", "is_prime", "load_summary",
    "lsh_from_sample", "min_hash_interval", "mod_inverse", "point_set_hash", "polygon_hash",
    "prime_in_dyadic", "query_intersection", "query_union", "save_summary",
    "threshold_sample", "upper_hull", "zero_set",
]
