"""Zero-nonzero patterns and the multiplicity of singular values of their realizations."""

__version__ = "0.1.0"

from .classifier import (
    Classification,
    RankRequirementDecomposition,
    SampleReport,
    Verdict,
    border_multiplicity_check,
    classify,
    enumerate_patterns,
    rank_m_minus_1_decomposition,
    requires_full_rank,
    sample_verify,
)
from .errors import SvPatternError
from .linalg import DEFAULT_TOL, SvdResult, Tolerances, multiplicity, rank, singular_values, svd
from .pattern import Pattern, PatternPermutation, apply_permutation, direct_sum, parse_pattern, pattern_of, render_pattern
from .ssvp import SsvpReport, direct_sum_ssvp_predicate, ssvp_check, ssvp_wrt
from .structure import FiedlerCertificate, bigraph_of, digraph_of, is_weak_path, recognize_fiedler
from .termrank import max_matching, min_line_cover, standard_form, term_rank
from .witness import Witness, liberation_newton, orthogonal_border, superpattern_lift

__all__ = [name for name in dir() if not name.startswith("_")]
