from .codec import (
    Measurements,
    ReconstructionResult,
    SensingKind,
    SensingOperator,
    compress,
    effective_matrix,
    make_sensing,
    reconstruct_omp,
)

__all__ = [
    "Measurements",
    "ReconstructionResult",
    "SensingKind",
    "SensingOperator",
    "compress",
    "effective_matrix",
    "make_sensing",
    "reconstruct_omp",
]
