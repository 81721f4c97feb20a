"""Numerical invariant suite behind ``chirp-dictionary selftest``.

Every check reduces a family of randomized cases to one defect value that is
compared against a tolerance. All randomness is drawn from a seeded
:func:`numpy.random.default_rng`.
"""

import dataclasses
import logging
import math

import numpy as np

from .dictionary import analyze, build_dictionary, materialize, orthogonality_defect, synthesize
from .exceptions import NumericalCheckError, SpreadTooLargeError
from .signal_model import (
    CarrierSet,
    ChirpParams,
    ComplexSignal,
    SamplingGrid,
    Scene,
    synth_echo,
    synth_echo_multitone,
)
from .sparsity import delay_step, expected_bin, sparsity_report
from .stretch import (
    ReferenceParams,
    check_aliasing,
    dechirp,
    if_bins,
    if_closed_form,
    synth_reference,
    valid_tref_interval,
)

logger = logging.getLogger(__name__)

ORTHOGONALITY_SIZES = (64, 256, 1024)
OPERATOR_SIZES = (64, 257, 512)
ON_GRID_SIZE = 256
_F_S = 1e6

# 1 GHz sweep over 50 µs sampled at 2 GHz.
BROADBAND_CHIRP = ChirpParams(f_c=10e9, gamma=2e13, T=50e-6)
BROADBAND_F_S = 2e9


@dataclasses.dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.defect) and self.defect <= self.tolerance

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24} defect={self.defect:.3e}  tol={self.tolerance:.0e}"


@dataclasses.dataclass(frozen=True)
class SelfTestReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(check for check in self.checks if not check.passed)

    def raise_on_failure(self) -> None:
        failed = self.failures()
        if failed:
            raise NumericalCheckError("Failed invariants: " + ", ".join(check.name for check in failed) + ".")

    def __str__(self) -> str:
        return "\n".join(str(check) for check in self.checks)


def _grid(N: int, f_s: float = _F_S) -> SamplingGrid:
    return SamplingGrid(f_s=f_s, N=N, T=(N - 0.5) / f_s)


def _random_chirp(rng: np.random.Generator, grid: SamplingGrid, max_gamma: float | None = None) -> ChirpParams:
    # Bandwidth at most f_s/2 and a carrier well below f_s keep the phases
    # within a few hundred cycles over the window.
    gamma = rng.uniform(0.0, 0.5 * grid.f_s / grid.T)
    if max_gamma is not None:
        gamma = min(gamma, max_gamma)
    return ChirpParams(f_c=rng.uniform(0.0, 0.02 * grid.f_s), gamma=gamma, T=grid.T)


def _random_amplitudes(rng: np.random.Generator, P: int) -> np.ndarray:
    return rng.uniform(0.5, 1.5, P) * np.exp(2j * np.pi * rng.uniform(size=P))


def _complex_normal(rng: np.random.Generator, N: int) -> np.ndarray:
    return (rng.standard_normal(N) + 1j * rng.standard_normal(N)) / np.sqrt(2.0)


def _on_grid_setup(rng: np.random.Generator) -> tuple[ChirpParams, SamplingGrid, ReferenceParams, float]:
    """Chirp with ``B = f_s/2`` and a reference that keeps every on-grid delay alias-free."""
    grid = _grid(ON_GRID_SIZE)
    chirp = ChirpParams(f_c=rng.uniform(0.0, 0.05 * grid.f_s), gamma=0.5 * grid.f_s / grid.T, T=grid.T)
    step = delay_step(chirp, grid)
    return chirp, grid, ReferenceParams((grid.N // 2) * step), step


def check_orthogonality(rng: np.random.Generator, N: int, references: int = 10) -> CheckResult:
    """Largest entry of ``|D^H D - I|`` over random references of dimension ``N``."""
    grid = _grid(N)
    defect = 0.0
    for _ in range(references):
        chirp = _random_chirp(rng, grid)
        ref = ReferenceParams(rng.uniform(0.0, grid.T))
        defect = max(defect, orthogonality_defect(build_dictionary(synth_reference(chirp, ref, grid))))
    return CheckResult(f"orthogonality[N={N}]", defect, 1e-10)


def check_dechirp_identity(rng: np.random.Generator, cases: int = 100, inject_fault: bool = False) -> CheckResult:
    """Dechirped echo against the closed-form IF signal, relative to ``max|s_IF|``.

    With ``inject_fault`` the closed form is evaluated one sample period away
    from the reference actually used, which must fail.
    """
    defect = 0.0
    for _ in range(cases):
        grid = _grid(int(rng.integers(32, 257)))
        chirp = _random_chirp(rng, grid, max_gamma=1e9)
        P = int(rng.integers(1, 6))
        scene = Scene.from_arrays(_random_amplitudes(rng, P), rng.uniform(0.0, grid.T / 2.0, P))
        ref = ReferenceParams(rng.uniform(0.0, grid.T / 2.0))
        if_signal = dechirp(synth_echo(scene, chirp, grid), synth_reference(chirp, ref, grid))
        if inject_fault:
            ref = ReferenceParams(ref.t_ref + 1.0 / grid.f_s)
        expected = if_closed_form(scene, chirp, ref, grid).samples
        scale = float(np.abs(expected).max())
        defect = max(defect, float(np.abs(if_signal.samples - expected).max()) / scale)
    return CheckResult("dechirp_identity", defect, 1e-12)


def check_operator_matrix(rng: np.random.Generator, N: int) -> CheckResult:
    """Fast ``synthesize``/``analyze`` against the dense ``ΦΨ``, any ``N``."""
    grid = _grid(N)
    chirp = _random_chirp(rng, grid)
    dictionary = build_dictionary(synth_reference(chirp, ReferenceParams(rng.uniform(0.0, grid.T)), grid))
    D = materialize(dictionary)
    alpha = _complex_normal(rng, N)
    s = _complex_normal(rng, N)
    synthesis = np.abs(synthesize(dictionary, alpha).samples - D @ alpha).max()
    analysis = np.abs(analyze(dictionary, ComplexSignal.on_grid(s, grid)).alpha - D.conj().T @ s).max()
    return CheckResult(f"operator_matrix[N={N}]", float(max(synthesis, analysis)), 1e-10)


def check_on_grid_sparsity(rng: np.random.Generator, cases: int = 50) -> CheckResult:
    """On-grid scenes of ``P`` scatterers occupy exactly their ``P`` expected bins.

    The defect is the largest of the energy outside the expected bins and the
    relative error of the peak magnitudes against ``|A_i|√N``; a support that
    differs from the expected bins counts as infinite.
    """
    defect = 0.0
    for _ in range(cases):
        chirp, grid, ref, step = _on_grid_setup(rng)
        P = int(rng.integers(1, 11))
        offsets = rng.choice(np.arange(-grid.N // 2 + 1, grid.N // 2), size=P, replace=False)
        amplitudes = _random_amplitudes(rng, P)
        scene = Scene.from_arrays(amplitudes, ref.t_ref + offsets * step)
        alpha = analyze(build_dictionary(synth_reference(chirp, ref, grid)), synth_echo(scene, chirp, grid)).alpha
        bins = [expected_bin(s.delay, ref, chirp, grid) for s in scene.scatterers]
        report = sparsity_report(alpha)
        if sorted(report.support) != sorted(bins):
            logger.info("On-grid support %s differs from expected bins %s", report.support, sorted(bins))
            return CheckResult("on_grid_sparsity", math.inf, 1e-9)
        energy = np.abs(alpha) ** 2
        leaked = 1.0 - energy[bins].sum() / energy.sum()
        peaks = np.abs(alpha[bins])
        predicted = np.abs(amplitudes) * np.sqrt(grid.N)
        defect = max(defect, float(leaked), float(np.max(np.abs(peaks - predicted) / predicted)))
    return CheckResult("on_grid_sparsity", defect, 1e-9)


def check_tref_half_width() -> CheckResult:
    """``B = 1 GHz``, ``T = 50 µs`` and ``f_s = 2 GHz`` give a half-width ``f_s/(2γ)`` equal to ``T``."""
    chirp, f_s = BROADBAND_CHIRP, BROADBAND_F_S
    # A scatterer at zero delay puts the upper end of the interval at the half-width.
    interval = valid_tref_interval(Scene.from_arrays([1.0], [0.0]), chirp, f_s)
    return CheckResult("tref_half_width", abs(interval.hi - chirp.T), 0.0)


def check_tref_membership(rng: np.random.Generator, cases: int = 200) -> CheckResult:
    """Count of random scenes where the aliasing check and interval membership disagree."""
    chirp, f_s = BROADBAND_CHIRP, BROADBAND_F_S
    mismatches = 0
    for _ in range(cases):
        P = int(rng.integers(1, 6))
        scene = Scene.from_arrays(_random_amplitudes(rng, P), rng.uniform(1e-4, 2.2e-4, P))
        ref = ReferenceParams(rng.uniform(0.0, 3e-4))
        try:
            inside = ref.t_ref in valid_tref_interval(scene, chirp, f_s)
        except SpreadTooLargeError:
            inside = False
        mismatches += bool(check_aliasing(scene, chirp, ref, f_s)) != inside
    return CheckResult("tref_membership", float(mismatches), 0.0)


def check_multitone(rng: np.random.Generator) -> CheckResult:
    """Two carriers one on-grid offset apart and two scatterers give four active bins."""
    chirp, grid, ref, step = _on_grid_setup(rng)
    carriers = CarrierSet((chirp.f_c, chirp.f_c + 3 * grid.bin_spacing))
    scene = Scene.from_arrays(_random_amplitudes(rng, 2), ref.t_ref + np.array([5, 40]) * step)
    echo = synth_echo_multitone(scene, carriers, chirp, grid)
    alpha = analyze(build_dictionary(synth_reference(chirp, ref, grid)), echo).alpha
    bins = sorted(set(if_bins(scene, chirp, ref, grid, carriers).tolist()))
    report = sparsity_report(alpha)
    if len(bins) != 4 or sorted(report.support) != bins:
        return CheckResult("multitone_bins", math.inf, 1e-9)
    energy = np.abs(alpha) ** 2
    return CheckResult("multitone_bins", float(1.0 - energy[bins].sum() / energy.sum()), 1e-9)


def run_selftest(seed: int = 0, inject_fault: bool = False) -> SelfTestReport:
    """Run every invariant check with one seeded generator."""
    rng = np.random.default_rng(seed)
    checks = [check_orthogonality(rng, N) for N in ORTHOGONALITY_SIZES]
    checks.append(check_dechirp_identity(rng, inject_fault=inject_fault))
    checks.extend(check_operator_matrix(rng, N) for N in OPERATOR_SIZES)
    checks.append(check_on_grid_sparsity(rng))
    checks.append(check_tref_half_width())
    checks.append(check_tref_membership(rng))
    checks.append(check_multitone(rng))
    for check in checks:
        logger.info("%s", check)
    return SelfTestReport(tuple(checks))
