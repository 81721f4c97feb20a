"""The orthogonal dictionary ``D = ΦΨ`` for chirp echoes.

``Φ`` is diagonal with the sampled reference chirp on its diagonal and ``Ψ``
is the unitary DFT basis ``Ψ[m, n] = exp(-j2πmn/N)/√N``. Neither matrix is
stored: ``D`` is applied with one elementwise product and one unitary FFT,
so

* ``synthesize(α) = Φ Ψ α = s_ref * fft(α, norm="ortho")``,
* ``analyze(s) = Ψ^H Φ^H s = ifft(conj(s_ref) * s, norm="ortho")``.

The first step of ``analyze`` is exactly the dechirp of stretch processing;
the second moves the IF tones onto single coefficient bins.
"""

import dataclasses
import logging

import numpy as np
import scipy.fft
import scipy.linalg

from .exceptions import GridMismatchError, InvalidParameterError
from .signal_model import ComplexSignal, SamplingGrid

logger = logging.getLogger(__name__)

DEFAULT_MATERIALIZE_CAP = 2048
UNIT_MODULUS_TOL = 1e-9


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128).reshape(-1)
    array.flags.writeable = False
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class DiagonalPhase:
    """Diagonal of ``Φ``; unit modulus entries make ``Φ`` unitary."""

    diag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", _readonly(self.diag))


@dataclasses.dataclass(frozen=True)
class DFTBasis:
    """Unitary DFT basis of dimension ``N`` (zero-based indices)."""

    N: int

    def matrix(self) -> np.ndarray:
        return scipy.linalg.dft(self.N, scale="sqrtn")


@dataclasses.dataclass(frozen=True, eq=False)
class Dictionary:
    """Operator ``D = ΦΨ``; immutable and safe to share between threads.

    Args:
        phi: Diagonal of ``Φ``.
        psi: DFT basis ``Ψ``.
        f_s: Sampling frequency of the reference.
        grid: Grid the reference was sampled on, if known.
        workers: Passed to :mod:`scipy.fft`.
    """

    phi: DiagonalPhase
    psi: DFTBasis
    f_s: float
    grid: SamplingGrid | None = None
    workers: int | None = None

    @property
    def N(self) -> int:
        return self.psi.N


@dataclasses.dataclass(frozen=True, eq=False)
class SparseCoefficients:
    """Coefficient vector ``α`` of a signal in ``D``.

    ``support`` is filled in by analyses that threshold the coefficients.
    """

    alpha: np.ndarray
    support: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", _readonly(self.alpha))
        if self.support is not None:
            object.__setattr__(self, "support", tuple(int(k) for k in self.support))

    def __len__(self) -> int:
        return self.alpha.size

    @classmethod
    def impulse(cls, N: int, k: int, value: complex = 1.0) -> "SparseCoefficients":
        alpha = np.zeros(N, dtype=np.complex128)
        alpha[k] = value
        return cls(alpha, (k,))

    def norm(self) -> float:
        return float(np.linalg.norm(self.alpha))


def build_dictionary(reference: ComplexSignal, workers: int | None = None) -> Dictionary:
    """Dictionary whose ``Φ`` holds the sampled reference chirp.

    Raises:
        InvalidParameterError: if a reference sample departs from unit
            modulus by more than ``1e-9``.
    """
    diag = reference.samples
    deviation = np.abs(np.abs(diag) - 1.0)
    if deviation.size and deviation.max() > UNIT_MODULUS_TOL:
        k = int(np.argmax(deviation))
        raise InvalidParameterError(
            f"Reference sample {k} has modulus {abs(diag[k])}; the diagonal of Φ must have unit modulus."
        )
    logger.debug("Dictionary of dimension %d", diag.size)
    return Dictionary(DiagonalPhase(diag), DFTBasis(diag.size), reference.f_s, reference.grid, workers)


def _coefficients(alpha: SparseCoefficients | np.ndarray) -> np.ndarray:
    return alpha.alpha if isinstance(alpha, SparseCoefficients) else np.asarray(alpha, dtype=np.complex128)


def synthesize(dictionary: Dictionary, alpha: SparseCoefficients | np.ndarray) -> ComplexSignal:
    """Signal ``Φ Ψ α``."""
    coefficients = _coefficients(alpha)
    if coefficients.size != dictionary.N:
        raise GridMismatchError(f"Expected {dictionary.N} coefficients, got {coefficients.size}.")
    samples = dictionary.phi.diag * scipy.fft.fft(coefficients, norm="ortho", workers=dictionary.workers)
    return ComplexSignal(samples, dictionary.f_s, dictionary.grid)


def analyze(dictionary: Dictionary, signal: ComplexSignal) -> SparseCoefficients:
    """Coefficients ``α = Ψ^H Φ^H s``: dechirp, then unitary inverse FFT."""
    if len(signal) != dictionary.N:
        raise GridMismatchError(f"Signal has {len(signal)} samples, dictionary dimension is {dictionary.N}.")
    if signal.f_s != dictionary.f_s:
        raise GridMismatchError(f"Signal rate {signal.f_s} Hz differs from dictionary rate {dictionary.f_s} Hz.")
    if_signal = np.conj(dictionary.phi.diag) * signal.samples
    return SparseCoefficients(scipy.fft.ifft(if_signal, norm="ortho", workers=dictionary.workers))


def materialize(dictionary: Dictionary, cap: int = DEFAULT_MATERIALIZE_CAP) -> np.ndarray:
    """Dense ``N x N`` matrix ``ΦΨ``; a test oracle only."""
    if dictionary.N > cap:
        raise InvalidParameterError(f"Refusing to materialize a {dictionary.N}x{dictionary.N} dictionary (cap {cap}).")
    return dictionary.phi.diag[:, np.newaxis] * dictionary.psi.matrix()


def orthogonality_defect(dictionary: Dictionary, cap: int = DEFAULT_MATERIALIZE_CAP) -> float:
    """Largest entry of ``|D^H D - I|``."""
    D = materialize(dictionary, cap)
    gram = D.conj().T @ D
    return float(np.max(np.abs(gram - np.eye(dictionary.N)))) if dictionary.N else 0.0
