"""Bivariate-bicycle (BB) and coprime-BB quantum LDPC codes.

Construction, dimension formulas, equivalence-aware search, exact and
probabilistic distance, BP-OSD decoding and code-capacity simulation.
"""

from .codes import (
    CodeIntegrityError,
    CodeParams,
    CodeSpec,
    ParityChecks,
    build_checks,
    code_params,
    dimension,
    dimension_coprime,
    is_connected,
)
from .decoder import DecoderConfig, DecodeOutcome, decode, min_sum_bp, osd_postprocess
from .distance import (
    DistanceBudgetExceeded,
    DistanceReport,
    LogicalTestContext,
    NoLogicalOperators,
    distance_upperbound,
    exact_distance,
    is_logical,
)
from .gf2 import BinMatrix, kernel_basis, rank, row_reduce
from .polyring import BivPoly, UniPoly, factorize_circulant, parse_biv, parse_uni
from .search import SearchConfig, SearchHit, canonical_key, remove_equivalent, search_bb, search_coprime
from .sim import CapacityRun, SimResult, run_capacity, sweep

__version__ = "0.1.0"

__all__ = [
    "BinMatrix", "BivPoly", "CapacityRun", "CodeIntegrityError", "CodeParams", "CodeSpec",
    "DecodeOutcome", "DecoderConfig", "DistanceBudgetExceeded", "DistanceReport",
    "LogicalTestContext", "NoLogicalOperators", "ParityChecks", "SearchConfig", "SearchHit",
    "SimResult", "UniPoly", "build_checks", "canonical_key", "code_params", "decode",
    "dimension", "dimension_coprime", "distance_upperbound", "exact_distance",
    "factorize_circulant", "is_connected", "is_logical", "kernel_basis", "min_sum_bp",
    "osd_postprocess", "parse_biv", "parse_uni", "rank", "remove_equivalent", "row_reduce",
    "run_capacity", "search_bb", "search_coprime", "sweep",
]
