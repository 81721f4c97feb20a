"""File formats: binary pulses, JSON scene configurations and coefficient CSVs.

Pulse file layout, all fields little-endian::

    offset  size  field
    0       4     magic b"CSRP"
    4       2     format version (uint16)
    6       8     sampling frequency f_s in Hz (float64)
    14      8     sample count N (uint64)
    22      16*N  samples as interleaved (real, imag) float64 pairs

Concurrent reads of one file are safe; concurrent writes to one path are not.
"""

import csv
import dataclasses
import json
import logging
import math
import struct
from pathlib import Path
from typing import Any

import numpy as np

from .cs import Measurements
from .dictionary import SparseCoefficients
from .exceptions import (
    BadMagicError,
    InvalidParameterError,
    PulseFileError,
    SceneConfigError,
    TruncatedPulseError,
    UnsupportedVersionError,
)
from .signal_model import (
    CarrierSet,
    ChirpParams,
    ComplexSignal,
    SamplingGrid,
    Scatterer,
    Scene,
    delay_of_range,
    make_grid,
)
from .sparsity import DEFAULT_REL_THRESHOLD, SparsityReport
from .stretch import ReferenceParams

logger = logging.getLogger(__name__)

MAGIC = b"CSRP"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHdQ")
HEADER_SIZE = _HEADER.size  # 22 bytes
_SAMPLE_DTYPE = np.dtype("<c16")

CSV_HEADER = ("bin", "re", "im", "magnitude")


def write_pulse(path: str | Path, signal: ComplexSignal) -> None:
    path = Path(path)
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, float(signal.f_s), len(signal))
    path.write_bytes(header + signal.samples.astype(_SAMPLE_DTYPE).tobytes())
    logger.debug("Wrote %d samples to %s", len(signal), path)


def read_pulse(path: str | Path) -> ComplexSignal:
    """Read a pulse file into a detached signal (see :meth:`ComplexSignal.attach`).

    Raises:
        BadMagicError: the file does not start with ``b"CSRP"``.
        UnsupportedVersionError: the format version is not understood.
        TruncatedPulseError: header or payload is shorter than announced.
        PulseFileError: bytes follow the announced payload.
    """
    path = Path(path)
    data = path.read_bytes()
    if not MAGIC.startswith(data[:4]):
        raise BadMagicError(f"{path} is not a pulse file (magic {data[:4]!r}, expected {MAGIC!r}).")
    if len(data) < HEADER_SIZE:
        raise TruncatedPulseError(f"{path} holds {len(data)} bytes, shorter than the {HEADER_SIZE}-byte header.")
    _, version, f_s, N = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"{path} has format version {version}; only {FORMAT_VERSION} is supported.")
    expected = HEADER_SIZE + _SAMPLE_DTYPE.itemsize * N
    if len(data) < expected:
        raise TruncatedPulseError(f"{path} is truncated: {len(data)} bytes for N={N} samples ({expected} expected).")
    if len(data) > expected:
        raise PulseFileError(f"{path} has {len(data) - expected} bytes after the last of its N={N} samples.")
    samples = np.frombuffer(data, dtype=_SAMPLE_DTYPE, count=N, offset=HEADER_SIZE)
    logger.debug("Read %d samples at %g Hz from %s", N, f_s, path)
    return ComplexSignal(samples, f_s)


@dataclasses.dataclass(frozen=True)
class SceneConfig:
    """Validated contents of a scene configuration document."""

    scene: Scene
    chirp: ChirpParams
    reference: ReferenceParams
    f_s: float
    carriers: CarrierSet | None = None
    gate: bool = False
    rel_threshold: float = DEFAULT_REL_THRESHOLD

    def grid(self) -> SamplingGrid:
        return make_grid(self.chirp, self.f_s)


def _field(document: dict, path: str) -> Any:
    value: Any = document
    for key in path.split("."):
        if not isinstance(value, dict) or key not in value:
            raise SceneConfigError(path, "required field is missing.")
        value = value[key]
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float) or not math.isfinite(value):
        raise SceneConfigError(path, f"expected a finite number, got {value!r}.")
    return float(value)


def _positive(document: dict, path: str) -> float:
    value = _number(_field(document, path), path)
    if value <= 0.0:
        raise SceneConfigError(path, f"must be positive, got {value}.")
    return value


def _exactly_one(entry: dict, path: str, names: tuple[str, str]) -> str:
    present = [name for name in names if name in entry]
    if len(present) != 1:
        raise SceneConfigError(path, f"exactly one of {names[0]!r} or {names[1]!r} must be given.")
    return present[0]


def _scatterer(entry: Any, path: str) -> Scatterer:
    if not isinstance(entry, dict):
        raise SceneConfigError(path, "expected an object.")
    amplitude = complex(
        _number(_field(entry, "amplitude_re"), f"{path}.amplitude_re"),
        _number(entry.get("amplitude_im", 0.0), f"{path}.amplitude_im"),
    )
    which = _exactly_one(entry, path, ("delay", "range"))
    value = _number(entry[which], f"{path}.{which}")
    if value < 0.0:
        raise SceneConfigError(f"{path}.{which}", f"must be non-negative, got {value}.")
    try:
        return Scatterer(amplitude, value if which == "delay" else delay_of_range(value))
    except InvalidParameterError as e:
        raise SceneConfigError(path, str(e)) from e


def parse_scene(document: dict) -> SceneConfig:
    """Validate a decoded scene document; see :func:`load_scene`."""
    if not isinstance(document, dict):
        raise SceneConfigError("<root>", "expected a JSON object.")
    f_c = _number(_field(document, "chirp.f_c"), "chirp.f_c")
    if f_c < 0.0:
        raise SceneConfigError("chirp.f_c", f"must be non-negative, got {f_c}.")
    chirp = ChirpParams(f_c=f_c, gamma=_positive(document, "chirp.gamma"), T=_positive(document, "chirp.T"))
    f_s = _positive(document, "sampling.f_s")

    reference = _field(document, "reference")
    if not isinstance(reference, dict):
        raise SceneConfigError("reference", "expected an object.")
    which = _exactly_one(reference, "reference", ("t_ref", "range"))
    value = _number(reference[which], f"reference.{which}")
    if which == "range":
        if value < 0.0:
            raise SceneConfigError("reference.range", f"must be non-negative, got {value}.")
        value = delay_of_range(value)
    ref = ReferenceParams(value)

    entries = _field(document, "scatterers")
    if not isinstance(entries, list):
        raise SceneConfigError("scatterers", "expected a list.")
    scene = Scene(tuple(_scatterer(entry, f"scatterers[{i}]") for i, entry in enumerate(entries)))

    carriers = None
    if "carriers" in document:
        values = document["carriers"]
        if not isinstance(values, list) or not values:
            raise SceneConfigError("carriers", "expected a non-empty list of carrier frequencies.")
        numbers = [_number(f, f"carriers[{k}]") for k, f in enumerate(values)]
        for k, f in enumerate(numbers):
            if f < 0.0:
                raise SceneConfigError(f"carriers[{k}]", f"must be non-negative, got {f}.")
        carriers = CarrierSet(tuple(numbers))

    sampling = document["sampling"]
    gate = sampling.get("gate", False)
    if not isinstance(gate, bool):
        raise SceneConfigError("sampling.gate", f"expected true or false, got {gate!r}.")
    rel_threshold = _number(sampling.get("rel_threshold", DEFAULT_REL_THRESHOLD), "sampling.rel_threshold")
    if not 0.0 < rel_threshold < 1.0:
        raise SceneConfigError("sampling.rel_threshold", f"must lie in (0, 1), got {rel_threshold}.")

    return SceneConfig(scene, chirp, ref, f_s, carriers, gate, rel_threshold)


def load_scene(path: str | Path) -> SceneConfig:
    """Load and validate a JSON scene configuration.

    Scatterer ranges are converted to delays ``2r/c``. Loading does not check
    the reference delay against the aliasing bound.

    Raises:
        SceneConfigError: naming the offending field.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SceneConfigError("<root>", f"{path} is not valid UTF-8 JSON ({e}).") from e
    config = parse_scene(document)
    logger.debug("Loaded scene with %d scatterers from %s", len(config.scene), path)
    return config


def scene_document(config: SceneConfig) -> dict:
    document: dict[str, Any] = {
        "chirp": {"f_c": config.chirp.f_c, "gamma": config.chirp.gamma, "T": config.chirp.T},
        "sampling": {"f_s": config.f_s, "gate": config.gate, "rel_threshold": config.rel_threshold},
        "reference": {"t_ref": config.reference.t_ref},
        "scatterers": [
            {"amplitude_re": s.amplitude.real, "amplitude_im": s.amplitude.imag, "delay": s.delay}
            for s in config.scene.scatterers
        ],
    }
    if config.carriers is not None:
        document["carriers"] = list(config.carriers.carriers)
    return document


def save_scene(path: str | Path, config: SceneConfig) -> None:
    Path(path).write_text(json.dumps(scene_document(config), indent=2) + "\n", encoding="utf-8")


def descriptor_path(path: str | Path) -> Path:
    """Sidecar holding the sensing descriptor of a measurement file."""
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_measurements(path: str | Path, measurements: Measurements, f_s: float) -> None:
    """Store measurements as a pulse file of length ``M`` plus a JSON descriptor.

    The sensing matrix itself is never written; it is regenerated from the
    descriptor.
    """
    write_pulse(path, ComplexSignal(measurements.y, f_s))
    descriptor = {
        "sensing": {
            "seed": measurements.seed,
            "kind": measurements.kind.value,
            "M": measurements.M,
            "N": measurements.N,
        }
    }
    descriptor_path(path).write_text(json.dumps(descriptor, indent=2) + "\n", encoding="utf-8")


def read_measurements(path: str | Path) -> tuple[Measurements, float]:
    """Measurements and the sampling frequency of the pulse they were taken from."""
    pulse = read_pulse(path)
    sidecar = descriptor_path(path)
    try:
        document = json.loads(sidecar.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise SceneConfigError("sensing", f"descriptor {sidecar} is missing.") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SceneConfigError("sensing", f"{sidecar} is not valid UTF-8 JSON ({e}).") from e
    sensing = _field(document, "sensing")
    fields = {}
    for name in ("seed", "M", "N"):
        value = _field(document, f"sensing.{name}")
        if isinstance(value, bool) or not isinstance(value, int):
            raise SceneConfigError(f"sensing.{name}", f"expected an integer, got {value!r}.")
        fields[name] = value
    if fields["M"] != len(pulse):
        raise SceneConfigError("sensing.M", f"descriptor says M={fields['M']} but the file holds {len(pulse)} values.")
    try:
        measurements = Measurements(pulse.samples, fields["seed"], sensing.get("kind"), fields["M"], fields["N"])
    except ValueError as e:
        raise SceneConfigError("sensing.kind", str(e)) from e
    return measurements, pulse.f_s


def _format(value: float) -> str:
    return f"{value:.17g}"


def export_coefficients_csv(
    path: str | Path, alpha: SparseCoefficients | np.ndarray, report: SparsityReport | None = None
) -> None:
    """Write one ``bin,re,im,magnitude`` row per coefficient, 17 significant digits.

    When ``report`` is given it is written next to the CSV as
    ``<stem>.report.json``.
    """
    path = Path(path)
    coefficients = alpha.alpha if isinstance(alpha, SparseCoefficients) else np.asarray(alpha, dtype=np.complex128)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for k, value in enumerate(coefficients):
            writer.writerow((k, _format(value.real), _format(value.imag), _format(abs(value))))
    if report is not None:
        summary = dataclasses.asdict(report) | {"support_size": report.support_size}
        path.with_name(path.stem + ".report.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")


def read_coefficients_csv(path: str | Path) -> SparseCoefficients:
    with Path(path).open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise InvalidParameterError(f"{path} does not start with the header {','.join(CSV_HEADER)}.")
        values = [complex(float(row[1]), float(row[2])) for row in reader]
    return SparseCoefficients(np.array(values, dtype=np.complex128))
