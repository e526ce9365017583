"""Spectral flow of L-function zeros.

Zero equations theta(E) + arg L(sigma + iE) = (n - c) pi for zeta, Dirichlet,
Davenport-Heilbronn and Ramanujan-tau L-functions, their continuation in
sigma, log-derivative criteria and level-spacing statistics.
"""
__version__ = "0.1.0"

from .errors import (AccuracyError, BranchError, CoalescenceError, ConfigError, DomainError,  # noqa: E402
                     InsufficientDataError, NearZeroError, PoleError, SpecflowError, ZeroOnPathError)
from .lfunc import CharacterTable, LFunctionSpec, continuous_arg, evaluate, upsilon  # noqa: E402
from .solver import (ZeroRecord, count_zeros, detect_missing, find_offline_zero, solve_range,  # noqa: E402
                     solve_zero, zero_table)
from .flow import FlowTrajectory, dE_dn, dE_dsigma, flow_trajectory  # noqa: E402
from .criterion import (B_CONSTANT, CriterionSample, critical_line_equality, criterion_scan,  # noqa: E402
                        hadamard_identity_check)
from .stats import normalized_spacings, spacing_histogram, wigner_surmise  # noqa: E402

__all__ = [
    "AccuracyError", "BranchError", "CoalescenceError", "ConfigError", "DomainError", "InsufficientDataError",
    "NearZeroError", "PoleError", "SpecflowError", "ZeroOnPathError", "CharacterTable", "LFunctionSpec",
    "continuous_arg", "evaluate", "upsilon", "ZeroRecord", "count_zeros", "detect_missing", "find_offline_zero",
    "solve_range", "solve_zero", "zero_table", "FlowTrajectory", "dE_dn", "dE_dsigma", "flow_trajectory",
    "B_CONSTANT", "CriterionSample", "critical_line_equality", "criterion_scan", "hadamard_identity_check",
    "normalized_spacings", "spacing_histogram", "wigner_surmise", "__version__",
]
