"""Random walks on iterated wreath products of lattices.

Subpackages: :mod:`~wreathwalk.groups` (element arithmetic, word metric),
:mod:`~wreathwalk.lattice` (planar walk local times),
:mod:`~wreathwalk.iterlog` (iterated-log functions in log space),
:mod:`~wreathwalk.estimators` (exact and Monte Carlo drift and entropy),
:mod:`~wreathwalk.rates` (rate fitting) and :mod:`~wreathwalk.cli`.
"""

__version__ = "0.1.0"

from .groups import (
    Element,
    GroupSpec,
    bfs_ball,
    build_generators,
    decode,
    encode,
    identity,
    invert,
    multiply,
    word_length_bracket,
)
from .iterlog import (
    IterLogParams,
    TowerReal,
    appendix_inequality_check,
    concave_extension,
    concavity_scan,
    iterated_log,
    l_tilde,
    reciprocal_iterlog_concavity,
    threshold_T,
)
from .lattice import (
    functional_estimate,
    local_times,
    origin_local_time,
    range_statistics,
    simulate_srw,
)
from .estimators import (
    compose_drift,
    convolve,
    drift_mc_bracket,
    drift_of,
    entropy_bounds_check,
    entropy_of,
)
from .rates import rate_fit

__all__ = [
    "Element",
    "GroupSpec",
    "bfs_ball",
    "build_generators",
    "decode",
    "encode",
    "identity",
    "invert",
    "multiply",
    "word_length_bracket",
    "IterLogParams",
    "TowerReal",
    "appendix_inequality_check",
    "concave_extension",
    "concavity_scan",
    "iterated_log",
    "l_tilde",
    "reciprocal_iterlog_concavity",
    "threshold_T",
    "functional_estimate",
    "local_times",
    "origin_local_time",
    "range_statistics",
    "simulate_srw",
    "compose_drift",
    "convolve",
    "drift_mc_bracket",
    "drift_of",
    "entropy_bounds_check",
    "entropy_of",
    "rate_fit",
]
