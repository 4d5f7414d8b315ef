"""Lipscomb's space L(A) embedded in l^p(A): words, points and the attractor of f_a(x) = (x + u_a)/2."""

from .convergence import (
    CaseKind,
    ConvergenceReport,
    LimitCase,
    check_sequence,
    classify,
    stabilization_rank,
)
from .embedding import (
    DecodeDepthError,
    NotOnAttractorError,
    continuity_bound,
    coordinate,
    decode,
    embed,
)
from .ifs import (
    IfsFamily,
    ResourceCapError,
    apply_map,
    apply_word,
    iterate_hutchinson,
    iterate_with_telemetry,
    project,
)
from .lp_geometry import PointSet, SparsePoint, dist_p, hausdorff, norm_p
from .rational import format_rational, geometric_tail, parse_rational
from .symbolic import (
    Alphabet,
    AlphabetError,
    InfiniteWord,
    WordClass,
    baire_dist,
    equivalent,
    lambda_dist,
    prefix_of,
    word_class,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetError",
    "CaseKind",
    "ConvergenceReport",
    "DecodeDepthError",
    "IfsFamily",
    "InfiniteWord",
    "LimitCase",
    "NotOnAttractorError",
    "PointSet",
    "ResourceCapError",
    "SparsePoint",
    "WordClass",
    "apply_map",
    "apply_word",
    "baire_dist",
    "check_sequence",
    "classify",
    "continuity_bound",
    "coordinate",
    "decode",
    "dist_p",
    "embed",
    "equivalent",
    "format_rational",
    "geometric_tail",
    "hausdorff",
    "iterate_hutchinson",
    "iterate_with_telemetry",
    "lambda_dist",
    "norm_p",
    "parse_rational",
    "prefix_of",
    "project",
    "stabilization_rank",
    "word_class",
]
