from .cs import (
    Measurements,
    ReconstructionResult,
    SensingKind,
    SensingOperator,
    compress,
    effective_matrix,
    make_sensing,
    reconstruct_omp,
)
from .dictionary import (
    DFTBasis,
    DiagonalPhase,
    Dictionary,
    SparseCoefficients,
    analyze,
    build_dictionary,
    materialize,
    orthogonality_defect,
    synthesize,
)
from .exceptions import (
    AliasingError,
    BadMagicError,
    ChirpDictionaryError,
    GridMismatchError,
    InvalidParameterError,
    NumericalCheckError,
    PulseFileError,
    SceneConfigError,
    SpreadTooLargeError,
    TruncatedPulseError,
    UndersamplingWarning,
    UnsupportedVersionError,
)
from .persistence import (
    SceneConfig,
    export_coefficients_csv,
    load_scene,
    read_coefficients_csv,
    read_measurements,
    read_pulse,
    save_scene,
    write_measurements,
    write_pulse,
)
from .signal_model import (
    SPEED_OF_LIGHT,
    CarrierSet,
    ChirpParams,
    ComplexSignal,
    DataVolume,
    SamplingGrid,
    Scatterer,
    Scene,
    add_awgn,
    data_volume,
    delay_of_range,
    make_grid,
    range_of_delay,
    scene_from_ranges,
    synth_echo,
    synth_echo_multitone,
    synth_transmit,
)
from .sparsity import (
    RangeGrid,
    SparsityReport,
    combine_equal_delays,
    expected_bin,
    make_range_grid,
    range_of_bin,
    snap_scene_to_grid,
    sparsity_report,
)
from .stretch import (
    AliasingCheck,
    ReferenceParams,
    TrefInterval,
    check_aliasing,
    dechirp,
    if_bins,
    if_closed_form,
    if_frequencies,
    reference_for_range,
    require_no_aliasing,
    synth_reference,
    valid_tref_interval,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "AliasingCheck",
    "AliasingError",
    "BadMagicError",
    "CarrierSet",
    "ChirpDictionaryError",
    "ChirpParams",
    "ComplexSignal",
    "DFTBasis",
    "DataVolume",
    "DiagonalPhase",
    "Dictionary",
    "GridMismatchError",
    "InvalidParameterError",
    "Measurements",
    "NumericalCheckError",
    "PulseFileError",
    "RangeGrid",
    "ReconstructionResult",
    "ReferenceParams",
    "SamplingGrid",
    "Scatterer",
    "Scene",
    "SceneConfig",
    "SceneConfigError",
    "SensingKind",
    "SensingOperator",
    "SparseCoefficients",
    "SparsityReport",
    "SpreadTooLargeError",
    "TrefInterval",
    "TruncatedPulseError",
    "UndersamplingWarning",
    "UnsupportedVersionError",
    "__version__",
    "add_awgn",
    "analyze",
    "build_dictionary",
    "check_aliasing",
    "combine_equal_delays",
    "compress",
    "data_volume",
    "dechirp",
    "delay_of_range",
    "effective_matrix",
    "expected_bin",
    "export_coefficients_csv",
    "if_bins",
    "if_closed_form",
    "if_frequencies",
    "load_scene",
    "make_grid",
    "make_range_grid",
    "make_sensing",
    "materialize",
    "orthogonality_defect",
    "range_of_bin",
    "range_of_delay",
    "read_coefficients_csv",
    "read_measurements",
    "read_pulse",
    "reconstruct_omp",
    "reference_for_range",
    "require_no_aliasing",
    "save_scene",
    "scene_from_ranges",
    "snap_scene_to_grid",
    "sparsity_report",
    "synth_echo",
    "synth_echo_multitone",
    "synth_reference",
    "synth_transmit",
    "synthesize",
    "valid_tref_interval",
]
