"""MDS array codes over GF(2^w) with sub-packetization (n-k)^t and repair by transfer."""
from .codec import Codeword, ErasurePattern, decode_erasures, encode, is_codeword
from .construction import (BlockId, CodeParams, ParityCheckMatrix, SymbolId, build_parity_matrix,
                           build_parity_matrix_t1, make_params, split_matrix)
from .errors import (CodeError, DimensionMismatch, FormatError, InconsistentInput, InvalidBlock,
                     InvalidParams, NotMds, PlanMismatch, RetriesExhausted, ScenarioInfeasible,
                     SingularMatrix, ValidationError, ZeroInverse)
from .field import FieldElement, FieldSpec, get_field
from .linalg import FieldMatrix, mat_inv, mat_rank, mat_solve
from .mds import MdsReport, failure_bound, sample_code, verify_mds
from .repair import (RepairPlan, RepairReport, bounds_report, cutset_bound, execute_repair,
                     plan_repair, repair_report)

__version__ = "0.1.0"

__all__ = [
    "BlockId", "CodeError", "CodeParams", "Codeword", "DimensionMismatch", "ErasurePattern",
    "FieldElement", "FieldMatrix", "FieldSpec", "FormatError", "InconsistentInput",
    "InvalidBlock", "InvalidParams", "MdsReport", "NotMds", "ParityCheckMatrix", "PlanMismatch",
    "RepairPlan", "RepairReport", "RetriesExhausted", "ScenarioInfeasible", "SingularMatrix",
    "SymbolId", "ValidationError", "ZeroInverse", "bounds_report", "build_parity_matrix",
    "build_parity_matrix_t1", "cutset_bound", "decode_erasures", "encode", "execute_repair",
    "failure_bound", "get_field", "is_codeword", "make_params", "mat_inv", "mat_rank",
    "mat_solve", "plan_repair", "repair_report", "sample_code", "split_matrix", "verify_mds",
]
