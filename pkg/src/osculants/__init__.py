"""Counting and computing optimal osculating curves of hypersurfaces through the origin.

The number of degree-``d`` osculants of a generic hypersurface equals the
number of primitive necklaces with content ``d``; the necklaces also index
explicit start solutions from which every osculant is reached by parameter
homotopy continuation.
"""

__version__ = "0.1.0"

from .combinatorics import (
    Multidegree,
    Necklace,
    count_all,
    count_primitive,
    count_selfcomp_achiral,
    enumerate_necklaces,
    fold_class,
    is_achiral,
    is_balanced_embedding,
    is_self_complementary,
    squarefree_parity,
)
from .series import SparseHypersurface, TruncatedSeries, compose_hypersurface
from .system import AlphaPoint, HomotopyProblem, evaluate, jacobian, tilde_hypersurface
from .start import StartSet, build_start_set, roots_of_minus_one, start_point
from .tracker import PathResult, TrackerConfig, track_all, track_path
from .osculants import (
    CoefficientForm,
    OsculantRecord,
    conjugation_pairing,
    dedupe,
    is_real_osculant,
    sample_curve,
    tally_experiment,
    to_coefficient_form,
)
from .pipeline import random_target, run_experiment, solve

__all__ = [name for name in dir() if not name.startswith("_")]
