"""Waveform and scene model of a broadband linear-FM radar.

All quantities are SI: seconds, hertz, metres. Signals are complex baseband
vectors sampled on the grid ``t(n) = -T/2 + n/f_s``, ``n = 0, ..., N-1``.
"""

import dataclasses
import logging
import math
import warnings
from collections.abc import Iterable, Sequence

import numpy as np
from scipy import constants

from .exceptions import GridMismatchError, InvalidParameterError, UndersamplingWarning

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = constants.c  # 299792458 m/s, exact


def delay_of_range(r: float) -> float:
    """Two-way delay ``2r/c`` of a scatterer at range ``r``."""
    if not r >= 0.0:
        raise InvalidParameterError(f"Range must be non-negative, got {r}.")
    return 2.0 * r / SPEED_OF_LIGHT


def range_of_delay(t_d: float) -> float:
    """Range ``c*t_d/2`` of a scatterer with two-way delay ``t_d``."""
    if not t_d >= 0.0:
        raise InvalidParameterError(f"Delay must be non-negative, got {t_d}.")
    return SPEED_OF_LIGHT * t_d / 2.0


@dataclasses.dataclass(frozen=True)
class ChirpParams:
    """Transmitted linear-FM pulse ``exp(j2π(f_c t + γt²/2))``, ``|t| <= T/2``.

    ``gamma == 0`` is admitted as the degenerate unmodulated tone; negative
    rates (down-chirps) are rejected.
    """

    f_c: float
    gamma: float
    T: float

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise InvalidParameterError(f"Pulse width T must be positive, got {self.T}.")
        if not (math.isfinite(self.gamma) and self.gamma >= 0.0):
            raise InvalidParameterError(f"Modulation rate gamma must be non-negative, got {self.gamma}.")
        if not (math.isfinite(self.f_c) and self.f_c >= 0.0):
            raise InvalidParameterError(f"Carrier frequency f_c must be non-negative, got {self.f_c}.")

    @property
    def B(self) -> float:
        """Bandwidth ``gamma*T``."""
        return self.gamma * self.T


@dataclasses.dataclass(frozen=True)
class Scatterer:
    amplitude: complex
    delay: float

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if not (math.isfinite(self.delay) and self.delay >= 0.0):
            raise InvalidParameterError(f"Scatterer delay must be non-negative, got {self.delay}.")
        if not (abs(self.amplitude) > 0.0 and math.isfinite(abs(self.amplitude))):
            raise InvalidParameterError(f"Scatterer amplitude must be finite and non-zero, got {self.amplitude}.")

    @classmethod
    def from_range(cls, amplitude: complex, r: float) -> "Scatterer":
        return cls(amplitude, delay_of_range(r))

    @property
    def range(self) -> float:
        return range_of_delay(self.delay)


@dataclasses.dataclass(frozen=True)
class Scene:
    """Point scatterers illuminated by one pulse.

    Delays need not be distinct; scatterers sharing a delay add coherently.
    """

    scatterers: tuple[Scatterer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))

    @classmethod
    def from_arrays(cls, amplitudes: Iterable[complex], delays: Iterable[float]) -> "Scene":
        return cls(tuple(Scatterer(a, d) for a, d in zip(amplitudes, delays, strict=True)))

    def __len__(self) -> int:
        return len(self.scatterers)

    def __add__(self, other: "Scene") -> "Scene":
        return Scene(self.scatterers + other.scatterers)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([s.amplitude for s in self.scatterers], dtype=np.complex128)

    @property
    def delays(self) -> np.ndarray:
        return np.array([s.delay for s in self.scatterers], dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class CarrierSet:
    """Carriers of a multi-component chirp sharing one modulation rate and width."""

    carriers: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "carriers", tuple(float(f) for f in self.carriers))
        if len(self.carriers) == 0:
            raise InvalidParameterError("A carrier set needs at least one carrier frequency.")
        for f in self.carriers:
            if not (math.isfinite(f) and f >= 0.0):
                raise InvalidParameterError(f"Carrier frequencies must be non-negative, got {f}.")

    def __len__(self) -> int:
        return len(self.carriers)


@dataclasses.dataclass(frozen=True)
class SamplingGrid:
    """Sampling instants ``t(n) = -T/2 + n/f_s`` with ``(N-1)/f_s <= T < N/f_s``."""

    f_s: float
    N: int
    T: float

    def __post_init__(self):
        if not (math.isfinite(self.f_s) and self.f_s > 0.0):
            raise InvalidParameterError(f"Sampling frequency must be positive, got {self.f_s}.")
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise InvalidParameterError(f"Pulse width T must be positive, got {self.T}.")
        if not ((self.N - 1) / self.f_s <= self.T < self.N / self.f_s):
            raise InvalidParameterError(
                f"N={self.N} samples at f_s={self.f_s} Hz do not cover T={self.T} s "
                "((N-1)/f_s <= T < N/f_s must hold)."
            )

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.N) / self.f_s - self.T / 2.0

    @property
    def bin_spacing(self) -> float:
        """Frequency spacing ``f_s/N`` of the DFT bins."""
        return self.f_s / self.N


@dataclasses.dataclass(frozen=True, eq=False)
class ComplexSignal:
    """Read-only complex baseband samples.

    ``grid`` is ``None`` for a detached signal, e.g. one read from a pulse file
    where only ``f_s`` and the length are known. Use :meth:`attach` to bind it
    to a grid built from a scene configuration.
    """

    samples: np.ndarray
    f_s: float
    grid: SamplingGrid | None = None

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128).reshape(-1)
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        if self.grid is not None:
            if samples.size != self.grid.N:
                raise GridMismatchError(f"Signal has {samples.size} samples but its grid has N={self.grid.N}.")
            if self.f_s != self.grid.f_s:
                raise GridMismatchError(f"Signal rate {self.f_s} Hz differs from grid rate {self.grid.f_s} Hz.")

    @classmethod
    def on_grid(cls, samples: np.ndarray, grid: SamplingGrid) -> "ComplexSignal":
        return cls(samples, grid.f_s, grid)

    def __len__(self) -> int:
        return self.samples.size

    def attach(self, grid: SamplingGrid) -> "ComplexSignal":
        """Bind the samples to ``grid``, checking length and sampling rate."""
        return ComplexSignal(self.samples, self.f_s, grid)

    def energy(self) -> float:
        return float(np.vdot(self.samples, self.samples).real)

    def power(self) -> float:
        return self.energy() / len(self) if len(self) else 0.0


def make_grid(chirp: ChirpParams, f_s: float) -> SamplingGrid:
    """Sampling grid covering one pulse at ``f_s``.

    ``N = floor(f_s*T) + 1``; the count is nudged by one sample when the
    floating-point product lands on the wrong side of an integer, so the
    returned grid always satisfies ``(N-1)/f_s <= T < N/f_s``.

    Warns with :class:`UndersamplingWarning` when ``f_s < 2B``.
    """
    if not (math.isfinite(f_s) and f_s > 0.0):
        raise InvalidParameterError(f"Sampling frequency must be positive, got {f_s}.")
    T = chirp.T
    N = math.floor(f_s * T) + 1
    while (N - 1) / f_s > T:
        N -= 1
    while N / f_s <= T:
        N += 1
    if f_s < 2.0 * chirp.B:
        message = f"Sampling frequency {f_s} Hz is below twice the chirp bandwidth ({2.0 * chirp.B} Hz)."
        logger.warning(message)
        warnings.warn(message, UndersamplingWarning, stacklevel=2)
    logger.debug("Sampling grid: f_s=%g Hz, T=%g s, N=%d", f_s, T, N)
    return SamplingGrid(f_s=f_s, N=N, T=T)


def _check_grid(chirp: ChirpParams, grid: SamplingGrid) -> None:
    if grid.T != chirp.T:
        raise GridMismatchError(f"Grid was built for T={grid.T} s but the chirp has T={chirp.T} s.")


def chirp_phase(f_c: float, gamma: float, tau: np.ndarray) -> np.ndarray:
    """Unit-modulus chirp ``exp(j2π(f_c τ + γτ²/2))``."""
    return np.exp(2j * np.pi * (f_c * tau + 0.5 * gamma * tau**2))


def synth_transmit(chirp: ChirpParams, grid: SamplingGrid) -> ComplexSignal:
    _check_grid(chirp, grid)
    return ComplexSignal.on_grid(chirp_phase(chirp.f_c, chirp.gamma, grid.t), grid)


def synth_echo(scene: Scene, chirp: ChirpParams, grid: SamplingGrid, gate: bool = False) -> ComplexSignal:
    """Echo of ``scene``: a sum of delayed, scaled copies of the pulse.

    Every delayed copy is evaluated over the whole grid. With ``gate=True``
    each copy is restricted to its physical support ``|t - t_d| <= T/2``,
    which breaks the exact sparsity of the dictionary representation.
    """
    _check_grid(chirp, grid)
    t = grid.t
    samples = np.zeros(grid.N, dtype=np.complex128)
    for scatterer in scene.scatterers:
        tau = t - scatterer.delay
        copy = scatterer.amplitude * chirp_phase(chirp.f_c, chirp.gamma, tau)
        if gate:
            copy[np.abs(tau) > chirp.T / 2.0] = 0.0
        samples += copy
    return ComplexSignal.on_grid(samples, grid)


def synth_echo_multitone(
    scene: Scene, carriers: CarrierSet, chirp: ChirpParams, grid: SamplingGrid, gate: bool = False
) -> ComplexSignal:
    """Echo of a multi-component chirp whose components differ only in carrier.

    ``chirp.f_c`` is ignored for synthesis; ``gamma`` and ``T`` are shared.
    """
    if len(carriers) == 0:
        raise InvalidParameterError("A multitone echo needs at least one carrier.")
    samples = np.zeros(grid.N, dtype=np.complex128)
    for f_c in carriers.carriers:
        component = dataclasses.replace(chirp, f_c=f_c)
        samples += synth_echo(scene, component, grid, gate=gate).samples
    return ComplexSignal.on_grid(samples, grid)


def add_awgn(signal: ComplexSignal, snr_db: float, seed: int) -> ComplexSignal:
    """Add circular complex white Gaussian noise at ``snr_db`` relative to the signal power.

    ``snr_db = math.inf`` disables the noise and returns ``signal`` unchanged.
    """
    if snr_db == math.inf:
        return signal
    if not math.isfinite(snr_db):
        raise InvalidParameterError(f"SNR must be finite or +inf, got {snr_db}.")
    power = signal.power()
    if power == 0.0:
        raise InvalidParameterError("The SNR of a zero-power signal is undefined.")
    noise_power = power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(signal)) + 1j * rng.standard_normal(len(signal))
    noise *= np.sqrt(noise_power / 2.0)
    return ComplexSignal(signal.samples + noise, signal.f_s, signal.grid)


@dataclasses.dataclass(frozen=True)
class DataVolume:
    samples_per_pulse: int
    bytes_per_pulse: int
    pulses_per_second: float
    bytes_per_second: float
    bytes_total: float


def data_volume(
    chirp: ChirpParams,
    f_s: float,
    prf: float = 1000.0,
    bytes_per_sample: int = 4,
    duration: float = 3600.0,
    broadband_fraction: float = 0.5,
) -> DataVolume:
    """Raw storage needed for directly sampled broadband echoes.

    One pulse holds ``f_s*T`` samples. Broadband and narrowband (tracking)
    pulses are usually interleaved, hence ``broadband_fraction``.

    Example:
        ``B = 1 GHz``, ``T = 50 µs``, ``f_s = 2 GHz``, 32-bit samples and a
        1 kHz PRF give 100000 samples, 400 kB per pulse, 200 MB/s and 720 GB
        per hour.
    """
    samples = round(f_s * chirp.T)
    per_pulse = samples * bytes_per_sample
    pulses_per_second = prf * broadband_fraction
    per_second = per_pulse * pulses_per_second
    return DataVolume(samples, per_pulse, pulses_per_second, per_second, per_second * duration)


def scene_from_ranges(amplitudes: Sequence[complex], ranges: Sequence[float]) -> Scene:
    return Scene(tuple(Scatterer.from_range(a, r) for a, r in zip(amplitudes, ranges, strict=True)))
