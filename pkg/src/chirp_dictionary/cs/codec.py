import dataclasses
import enum
import functools
import logging

import numpy as np
import scipy.fft

from ..dictionary import Dictionary, SparseCoefficients, synthesize
from ..exceptions import GridMismatchError, InvalidParameterError
from ..signal_model import ComplexSignal

logger = logging.getLogger(__name__)


class SensingKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"


@dataclasses.dataclass(frozen=True)
class SensingOperator:
    """Seeded random projection from ``N`` samples to ``M`` measurements.

    The matrix is regenerated from ``(M, N, kind, seed)`` on first use and
    never needs to be stored. Gaussian entries are drawn from
    ``Normal(0, 1/M)``, Bernoulli entries are ``±1/√M``.
    """

    M: int
    N: int
    kind: SensingKind
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "kind", SensingKind(self.kind))
        if not 1 <= self.M <= self.N:
            raise InvalidParameterError(f"Measurement count must satisfy 1 <= M <= N, got M={self.M}, N={self.N}.")

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        if self.kind is SensingKind.GAUSSIAN:
            entries = rng.normal(0.0, 1.0 / np.sqrt(self.M), size=(self.M, self.N))
        else:
            entries = rng.choice([-1.0, 1.0], size=(self.M, self.N)) / np.sqrt(self.M)
        entries.flags.writeable = False
        return entries


@dataclasses.dataclass(frozen=True, eq=False)
class Measurements:
    y: np.ndarray
    seed: int
    kind: SensingKind
    M: int
    N: int

    def __post_init__(self):
        y = np.array(self.y, dtype=np.complex128).reshape(-1)
        y.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "kind", SensingKind(self.kind))
        if y.size != self.M:
            raise GridMismatchError(f"Expected {self.M} measurements, got {y.size}.")

    @property
    def compression_ratio(self) -> float:
        """Original sample count over stored measurement count, ``N/M``."""
        return self.N / self.M

    def sensing(self) -> SensingOperator:
        """The operator that produced these measurements, regenerated from its seed."""
        return SensingOperator(self.M, self.N, self.kind, self.seed)


@dataclasses.dataclass(frozen=True, eq=False)
class ReconstructionResult:
    alpha_hat: SparseCoefficients
    signal_hat: ComplexSignal
    support: tuple[int, ...]
    residual_norm: float
    iterations: int
    residual_history: tuple[float, ...]

    @property
    def relative_residual(self) -> float:
        initial = self.residual_history[0]
        return self.residual_norm / initial if initial else 0.0


def make_sensing(M: int, N: int, kind: SensingKind | str = SensingKind.GAUSSIAN, seed: int = 0) -> SensingOperator:
    try:
        kind = SensingKind(kind)
    except ValueError:
        raise InvalidParameterError(f"Unknown sensing kind {kind!r}; expected 'gaussian' or 'bernoulli'.") from None
    return SensingOperator(M, N, kind, seed)


def compress(S: SensingOperator, signal: ComplexSignal) -> Measurements:
    """Measurements ``y = S s``; the real matrix acts on real and imaginary parts alike."""
    if len(signal) != S.N:
        raise GridMismatchError(f"Sensing operator expects {S.N} samples, signal has {len(signal)}.")
    return Measurements(S.matrix @ signal.samples, S.seed, S.kind, S.M, S.N)


def effective_matrix(S: SensingOperator, dictionary: Dictionary) -> np.ndarray:
    """Dense ``A = S D``, column ``k`` equal to ``S synthesize(e_k)``.

    Each row of ``S Φ`` is multiplied by ``Ψ`` with one unitary FFT.
    """
    if S.N != dictionary.N:
        raise GridMismatchError(f"Sensing operator has N={S.N}, dictionary has N={dictionary.N}.")
    weighted = S.matrix * dictionary.phi.diag[np.newaxis, :]
    return scipy.fft.fft(weighted, axis=1, norm="ortho", workers=dictionary.workers)


def reconstruct_omp(
    y: Measurements,
    S: SensingOperator,
    dictionary: Dictionary,
    k_max: int,
    res_tol: float = 1e-6,
) -> ReconstructionResult:
    """Orthogonal matching pursuit in the dictionary ``D``.

    Each iteration adds the atom of ``A = S D`` most correlated with the
    residual (lowest index on ties), refits all selected coefficients by least
    squares and updates the residual. Stops when
    ``||r|| <= res_tol * ||y||`` or when ``k_max`` atoms are selected.

    Raises:
        InvalidParameterError: if ``k_max < 1`` or ``k_max > M``.
        GridMismatchError: if ``y``, ``S`` and ``dictionary`` disagree on
            their dimensions.
    """
    if not 1 <= k_max <= S.M:
        raise InvalidParameterError(f"k_max must satisfy 1 <= k_max <= M={S.M}, got {k_max}.")
    if y.M != S.M or y.N != S.N:
        raise GridMismatchError(f"Measurements (M={y.M}, N={y.N}) do not match the operator (M={S.M}, N={S.N}).")
    A = effective_matrix(S, dictionary)
    target = y.y
    y_norm = float(np.linalg.norm(target))
    residual = target.copy()
    history = [y_norm]
    support: list[int] = []
    coefficients = np.zeros(0, dtype=np.complex128)
    while y_norm > 0.0 and len(support) < k_max and history[-1] > res_tol * y_norm:
        correlation = np.abs(A.conj().T @ residual)
        correlation[support] = -1.0
        k = int(np.argmax(correlation))
        support.append(k)
        coefficients, *_ = np.linalg.lstsq(A[:, support], target, rcond=None)
        residual = target - A[:, support] @ coefficients
        history.append(float(np.linalg.norm(residual)))
        logger.debug("OMP iteration %d: atom %d, residual %.3e", len(support), k, history[-1])

    alpha = np.zeros(dictionary.N, dtype=np.complex128)
    alpha[support] = coefficients
    ordered = tuple(sorted(support))
    alpha_hat = SparseCoefficients(alpha, ordered)
    logger.info("OMP selected %d atoms, relative residual %.3e", len(support), history[-1] / y_norm if y_norm else 0.0)
    return ReconstructionResult(
        alpha_hat=alpha_hat,
        signal_hat=synthesize(dictionary, alpha_hat),
        support=ordered,
        residual_norm=history[-1],
        iterations=len(support),
        residual_history=tuple(history),
    )
