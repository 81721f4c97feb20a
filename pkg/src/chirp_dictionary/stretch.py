"""Digital stretch processing (dechirp) of chirp echoes.

Multiplying the echo by the conjugate of a reference chirp delayed by
``t_ref`` turns every scatterer into a single IF tone of frequency
``-gamma*(t_d - t_ref)``. Frequencies are reported signed throughout.
"""

import dataclasses
import logging
import math

import numpy as np

from .exceptions import AliasingError, GridMismatchError, InvalidParameterError, SpreadTooLargeError
from .signal_model import (
    CarrierSet,
    ChirpParams,
    ComplexSignal,
    SamplingGrid,
    Scene,
    chirp_phase,
    delay_of_range,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ReferenceParams:
    t_ref: float

    def __post_init__(self):
        if not math.isfinite(self.t_ref):
            raise InvalidParameterError(f"Reference delay must be finite, got {self.t_ref}.")


@dataclasses.dataclass(frozen=True)
class TrefInterval:
    """Closed interval of admissible reference delays."""

    lo: float
    hi: float

    def __contains__(self, t_ref: float) -> bool:
        return self.lo <= t_ref <= self.hi

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclasses.dataclass(frozen=True)
class AliasingCheck:
    """Outcome of the IF sampling bound, one margin ``f_s - 2|f_IF|`` per tone."""

    ok: bool
    margins: np.ndarray

    def __bool__(self) -> bool:
        return self.ok


def reference_for_range(r_approx: float) -> ReferenceParams:
    """Reference delay matching an approximate target range, e.g. from a tracking radar."""
    return ReferenceParams(delay_of_range(r_approx))


def synth_reference(chirp: ChirpParams, ref: ReferenceParams, grid: SamplingGrid) -> ComplexSignal:
    if grid.T != chirp.T:
        raise GridMismatchError(f"Grid was built for T={grid.T} s but the chirp has T={chirp.T} s.")
    return ComplexSignal.on_grid(chirp_phase(chirp.f_c, chirp.gamma, grid.t - ref.t_ref), grid)


def _check_same_grid(a: ComplexSignal, b: ComplexSignal) -> None:
    if len(a) != len(b) or a.f_s != b.f_s:
        raise GridMismatchError(
            f"Signals do not share a grid: {len(a)} samples at {a.f_s} Hz vs {len(b)} samples at {b.f_s} Hz."
        )
    if a.grid is not None and b.grid is not None and a.grid != b.grid:
        raise GridMismatchError(f"Signals live on different grids: {a.grid} vs {b.grid}.")


def dechirp(echo: ComplexSignal, reference: ComplexSignal) -> ComplexSignal:
    """IF signal ``s_r * conj(s_ref)``."""
    _check_same_grid(echo, reference)
    grid = echo.grid if echo.grid is not None else reference.grid
    return ComplexSignal(echo.samples * np.conj(reference.samples), echo.f_s, grid)


def if_closed_form(scene: Scene, chirp: ChirpParams, ref: ReferenceParams, grid: SamplingGrid) -> ComplexSignal:
    """IF signal evaluated from its closed form, a sum of one tone per scatterer."""
    t = grid.t
    t_ref = ref.t_ref
    samples = np.zeros(grid.N, dtype=np.complex128)
    for scatterer in scene.scatterers:
        dt = scatterer.delay - t_ref
        phase = chirp.f_c * dt + chirp.gamma * t * dt - 0.5 * chirp.gamma * (scatterer.delay**2 - t_ref**2)
        samples += scatterer.amplitude * np.exp(-2j * np.pi * phase)
    return ComplexSignal.on_grid(samples, grid)


def if_frequencies(
    scene: Scene, chirp: ChirpParams, ref: ReferenceParams, carriers: CarrierSet | None = None
) -> np.ndarray:
    """Signed analog frequency of every IF tone.

    Single carrier: ``-γ(t_d - t_ref)`` per scatterer. With ``carriers`` the
    tone of scatterer ``i`` on carrier ``k`` sits at
    ``(f_c^(k) - f_c) - γ(t_d - t_ref)``; tones are ordered scatterer-major.
    """
    dt = scene.delays - ref.t_ref
    if carriers is None:
        return -chirp.gamma * dt
    offsets = np.asarray(carriers.carriers) - chirp.f_c
    return (offsets[np.newaxis, :] - chirp.gamma * dt[:, np.newaxis]).reshape(-1)


def _half_width(chirp: ChirpParams, f_s: float) -> float:
    return math.inf if chirp.gamma == 0.0 else f_s / (2.0 * chirp.gamma)


def valid_tref_interval(scene: Scene, chirp: ChirpParams, f_s: float) -> TrefInterval:
    """Reference delays for which every IF tone obeys ``f_s >= 2γ|t_d - t_ref|``.

    Raises:
        InvalidParameterError: for an empty scene.
        SpreadTooLargeError: when the delay spread exceeds ``f_s/γ``.
    """
    if len(scene) == 0:
        raise InvalidParameterError("The reference-delay interval of an empty scene is undefined.")
    delays = scene.delays
    half_width = _half_width(chirp, f_s)
    interval = TrefInterval(lo=float(delays.max()) - half_width, hi=float(delays.min()) + half_width)
    if interval.lo > interval.hi:
        raise SpreadTooLargeError(
            f"Delay spread {delays.max() - delays.min()} s exceeds f_s/gamma = {2.0 * half_width} s; "
            "no reference delay avoids aliasing."
        )
    return interval


def check_aliasing(
    scene: Scene, chirp: ChirpParams, ref: ReferenceParams, f_s: float, carriers: CarrierSet | None = None
) -> AliasingCheck:
    """Margin ``f_s - 2|f_IF|`` of every IF tone, ordered as :func:`if_frequencies`.

    Without ``carriers`` this is ``f_s - 2γ|t_d - t_ref|`` per scatterer.
    """
    margins = f_s - 2.0 * np.abs(if_frequencies(scene, chirp, ref, carriers))
    ok = bool(np.all(margins >= 0.0))
    if not ok:
        logger.info("Aliasing bound violated for tones %s", np.flatnonzero(margins < 0.0).tolist())
    return AliasingCheck(ok, margins)


def require_no_aliasing(
    scene: Scene, chirp: ChirpParams, ref: ReferenceParams, f_s: float, carriers: CarrierSet | None = None
) -> None:
    """Raise :class:`AliasingError` naming the first tone that violates the bound."""
    check = check_aliasing(scene, chirp, ref, f_s, carriers)
    if check:
        return
    tone = int(np.flatnonzero(check.margins < 0.0)[0])
    if carriers is None:
        i = tone
        where = ""
    else:
        i, k = divmod(tone, len(carriers))
        where = f" on carrier {carriers.carriers[k]} Hz"
    raise AliasingError(
        f"Scatterer {i}{where} violates f_s >= 2*|f_IF| by {-check.margins[tone]} Hz "
        f"(t_d={scene.scatterers[i].delay} s, t_ref={ref.t_ref} s, f_s={f_s} Hz)."
    )


def if_bins(
    scene: Scene,
    chirp: ChirpParams,
    ref: ReferenceParams,
    grid: SamplingGrid,
    carriers: CarrierSet | None = None,
) -> np.ndarray:
    """Coefficient bin where each IF tone peaks, ordered as :func:`if_frequencies`."""
    frequencies = if_frequencies(scene, chirp, ref, carriers)
    return np.mod(np.round(-frequencies * grid.N / grid.f_s).astype(np.int64), grid.N)
