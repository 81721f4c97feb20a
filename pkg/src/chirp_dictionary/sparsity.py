"""Range-grid sparsity of chirp echoes and its image in the dictionary.

A target occupies few range cells of width ``ΔR = c/(2B)``. Dechirping maps
each occupied cell to one IF tone and the DFT maps each tone to one
coefficient bin, so a scene with ``P`` scatterers has at most ``P`` active
coefficients when its tones fall on the DFT grid.
"""

import dataclasses
import logging
import math
from collections import defaultdict

import numpy as np

from .dictionary import SparseCoefficients
from .exceptions import InvalidParameterError
from .signal_model import (
    SPEED_OF_LIGHT,
    ChirpParams,
    SamplingGrid,
    Scatterer,
    Scene,
    delay_of_range,
    range_of_delay,
)
from .stretch import ReferenceParams, require_no_aliasing

logger = logging.getLogger(__name__)

DEFAULT_REL_THRESHOLD = 1e-6

__all__ = [
    "DEFAULT_REL_THRESHOLD",
    "RangeGrid",
    "SparsityReport",
    "combine_equal_delays",
    "delay_of_range",
    "delay_step",
    "expected_bin",
    "make_range_grid",
    "range_of_bin",
    "range_of_delay",
    "scene_range_window",
    "snap_scene_to_grid",
    "sparsity_report",
]


@dataclasses.dataclass(frozen=True)
class RangeGrid:
    """Range cells ``[R_i, R_i + ΔR]``, ``i = 0, ..., M-1``, starting at ``R_l``."""

    R_l: float
    R_h: float
    delta_R: float
    M: int

    @property
    def bins(self) -> np.ndarray:
        """Lower edge of every range cell."""
        return self.R_l + self.delta_R * np.arange(self.M)

    @property
    def delays(self) -> np.ndarray:
        """Two-way delay ``2R_i/c`` of every cell."""
        return 2.0 * self.bins / SPEED_OF_LIGHT

    def bin_of_range(self, r: float) -> int:
        """Index of the cell containing ``r``."""
        k = math.floor((r - self.R_l) / self.delta_R)
        if not 0 <= k < self.M:
            raise InvalidParameterError(f"Range {r} m lies outside [{self.R_l}, {self.R_l + self.M * self.delta_R}).")
        return k


@dataclasses.dataclass(frozen=True)
class SparsityReport:
    support: tuple[int, ...]
    energy_fraction: float
    top_bins: tuple[int, ...]
    rel_threshold: float

    @property
    def support_size(self) -> int:
        return len(self.support)


def make_range_grid(R_l: float, R_h: float, B: float) -> RangeGrid:
    """Split ``[R_l, R_h]`` into cells of the range resolution ``c/(2B)``.

    ``M`` is the largest count with ``M*ΔR <= R_h - R_l``.
    """
    if not B > 0.0:
        raise InvalidParameterError(f"Bandwidth must be positive, got {B}.")
    if not R_l < R_h:
        raise InvalidParameterError(f"Range window is inverted or empty: R_l={R_l} m, R_h={R_h} m.")
    delta_R = SPEED_OF_LIGHT / (2.0 * B)
    span = R_h - R_l
    M = math.floor(span / delta_R)
    while M * delta_R > span:
        M -= 1
    while (M + 1) * delta_R <= span:
        M += 1
    return RangeGrid(R_l, R_h, delta_R, M)


def expected_bin(t_d: float, ref: ReferenceParams, chirp: ChirpParams, grid: SamplingGrid) -> int:
    """Coefficient bin ``mod(round(γ(t_d - t_ref)N/f_s), N)`` of a scatterer at delay ``t_d``.

    Raises:
        AliasingError: if the tone violates ``f_s >= 2γ|t_d - t_ref|``.
    """
    require_no_aliasing(Scene((Scatterer(1.0, t_d),)), chirp, ref, grid.f_s)
    return int(round(chirp.gamma * (t_d - ref.t_ref) * grid.N / grid.f_s)) % grid.N


def range_of_bin(k: int, ref: ReferenceParams, chirp: ChirpParams, grid: SamplingGrid) -> float:
    """Range whose IF tone lands on coefficient bin ``k``.

    Bins above ``N/2`` are read as negative frequency offsets, i.e. targets
    nearer than the reference.
    """
    if chirp.gamma == 0.0:
        raise InvalidParameterError("An unmodulated pulse carries no range information.")
    signed = k - grid.N if k > grid.N // 2 else k
    return range_of_delay(ref.t_ref + signed * grid.f_s / (chirp.gamma * grid.N))


def snap_scene_to_grid(scene: Scene, ref: ReferenceParams, chirp: ChirpParams, grid: SamplingGrid) -> Scene:
    """Move every delay to the nearest one whose IF tone is a multiple of ``f_s/N``.

    Each delay moves by at most ``f_s/(2γN)``.
    """
    if chirp.gamma == 0.0:
        return scene
    step = delay_step(chirp, grid)
    snapped = []
    for scatterer in scene.scatterers:
        k = round((scatterer.delay - ref.t_ref) / step)
        snapped.append(Scatterer(scatterer.amplitude, ref.t_ref + k * step))
    return Scene(tuple(snapped))


def combine_equal_delays(scene: Scene) -> Scene:
    """Merge scatterers that share a delay, summing their amplitudes.

    Scatterers whose amplitudes cancel exactly are dropped, so the result has
    ``P' <= P`` entries and the same echo.
    """
    combined: defaultdict[float, complex] = defaultdict(complex)
    for scatterer in scene.scatterers:
        combined[scatterer.delay] += scatterer.amplitude
    return Scene(tuple(Scatterer(a, d) for d, a in sorted(combined.items()) if a != 0))


def sparsity_report(
    alpha: SparseCoefficients | np.ndarray, rel_threshold: float = DEFAULT_REL_THRESHOLD
) -> SparsityReport:
    """Support and energy concentration of a coefficient vector.

    The support holds the bins with ``|α_k| >= rel_threshold * max|α|``;
    ``top_bins`` ranks them by decreasing magnitude. A zero vector has an
    empty support and an energy fraction of 0.
    """
    if not 0.0 < rel_threshold < 1.0:
        raise InvalidParameterError(f"Relative threshold must lie in (0, 1), got {rel_threshold}.")
    coefficients = alpha.alpha if isinstance(alpha, SparseCoefficients) else np.asarray(alpha)
    magnitude = np.abs(coefficients)
    peak = magnitude.max() if magnitude.size else 0.0
    if peak == 0.0:
        return SparsityReport((), 0.0, (), rel_threshold)
    support = np.flatnonzero(magnitude >= rel_threshold * peak)
    energy = magnitude**2
    fraction = float(energy[support].sum() / energy.sum())
    ranked = support[np.argsort(-magnitude[support], kind="stable")]
    logger.debug("Support of size %d holds %.12f of the energy", support.size, fraction)
    return SparsityReport(tuple(support.tolist()), min(fraction, 1.0), tuple(ranked.tolist()), rel_threshold)


def scene_range_window(scene: Scene, margin: float = 0.0) -> tuple[float, float]:
    """Smallest range window ``[R_l, R_h]`` holding every scatterer, widened by ``margin``."""
    if len(scene) == 0:
        raise InvalidParameterError("An empty scene has no range window.")
    ranges = [s.range for s in scene.scatterers]
    return max(min(ranges) - margin, 0.0), max(ranges) + margin


def delay_step(chirp: ChirpParams, grid: SamplingGrid) -> float:
    """Delay difference between adjacent coefficient bins, ``f_s/(γN)``."""
    if chirp.gamma == 0.0:
        raise InvalidParameterError("An unmodulated pulse has no delay resolution.")
    return grid.f_s / (chirp.gamma * grid.N)
