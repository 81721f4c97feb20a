"""Command-line front end: ``chirp-dictionary {simulate,analyze,compress,reconstruct,selftest}``.

Reports go to stdout, followed by the run manifest as JSON; diagnostics go
to stderr through :mod:`logging`. The scene configuration is the only source
of dictionary parameters, so the dictionary itself is never stored.
"""

import argparse
import dataclasses
import json
import logging
import math
import sys
import warnings
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .cs import SensingKind, compress, make_sensing, reconstruct_omp
from .dictionary import analyze, build_dictionary
from .exceptions import (
    InvalidParameterError,
    NumericalCheckError,
    PulseFileError,
    SceneConfigError,
    SpreadTooLargeError,
    UndersamplingWarning,
)
from .persistence import (
    SceneConfig,
    export_coefficients_csv,
    load_scene,
    read_measurements,
    read_pulse,
    write_measurements,
    write_pulse,
)
from .selftest import run_selftest
from .signal_model import (
    SPEED_OF_LIGHT,
    CarrierSet,
    ComplexSignal,
    SamplingGrid,
    add_awgn,
    data_volume,
    synth_echo,
    synth_echo_multitone,
)
from .sparsity import make_range_grid, scene_range_window, snap_scene_to_grid, sparsity_report
from .stretch import if_bins, require_no_aliasing, synth_reference, valid_tref_interval

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


@dataclasses.dataclass
class RunManifest:
    """Everything needed to repeat a run; holds no timestamps."""

    command: str
    parameters: dict[str, Any]
    seeds: dict[str, int] = dataclasses.field(default_factory=dict)
    inputs: dict[str, str] = dataclasses.field(default_factory=dict)
    outputs: dict[str, str] = dataclasses.field(default_factory=dict)
    results: dict[str, Any] = dataclasses.field(default_factory=dict)
    version: str = __version__
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    def save(self, path: Path) -> None:
        path.write_text(self.to_json() + "\n")


def _scene_parameters(config: SceneConfig, grid: SamplingGrid) -> dict[str, Any]:
    return {
        "f_c": config.chirp.f_c,
        "gamma": config.chirp.gamma,
        "T": config.chirp.T,
        "B": config.chirp.B,
        "f_s": config.f_s,
        "N": grid.N,
        "t_ref": config.reference.t_ref,
        "scatterers": len(config.scene),
    }


def _load_pulse(path: Path, grid: SamplingGrid) -> ComplexSignal:
    return read_pulse(path).attach(grid)


def _carriers(config: SceneConfig, multitone: bool) -> CarrierSet | None:
    if not multitone:
        return None
    if config.carriers is None:
        raise SceneConfigError("carriers", "--multitone needs a list of carrier frequencies in the scene file.")
    return config.carriers


def cmd_simulate(args: argparse.Namespace) -> RunManifest:
    config = load_scene(args.config)
    grid = config.grid()
    scene = config.scene
    if args.snap:
        scene = snap_scene_to_grid(scene, config.reference, config.chirp, grid)
    gate = args.gate or config.gate
    carriers = _carriers(config, args.multitone)
    if carriers is None:
        echo = synth_echo(scene, config.chirp, grid, gate=gate)
    else:
        echo = synth_echo_multitone(scene, carriers, config.chirp, grid, gate=gate)
    echo = add_awgn(echo, args.snr_db, args.seed)
    write_pulse(args.out, echo)

    print(f"N = {grid.N} samples at f_s = {grid.f_s:g} Hz")
    print(f"B = {config.chirp.B:g} Hz, gamma = {config.chirp.gamma:g} Hz/s, T = {config.chirp.T:g} s")
    try:
        interval = valid_tref_interval(scene, config.chirp, config.f_s)
        print(f"valid t_ref interval = [{interval.lo:.9g}, {interval.hi:.9g}] s")
    except SpreadTooLargeError as e:
        print(f"valid t_ref interval = empty ({e})")
    except InvalidParameterError:
        print("valid t_ref interval = undefined (empty scene)")
    if len(scene):
        R_l, R_h = scene_range_window(scene, margin=SPEED_OF_LIGHT / (2.0 * config.chirp.B))
        cells = make_range_grid(R_l, R_h, config.chirp.B)
        print(f"range window = [{R_l:.6g}, {R_h:.6g}] m, {cells.M} cells of {cells.delta_R:.6g} m")
    volume = data_volume(config.chirp, config.f_s)
    print(f"raw data: {volume.samples_per_pulse} samples/pulse, {volume.bytes_per_second:g} B/s")

    parameters = _scene_parameters(config, grid) | {
        "snr_db": args.snr_db if math.isfinite(args.snr_db) else "inf",
        "multitone": args.multitone,
        "snap": args.snap,
        "gate": gate,
    }
    return RunManifest(
        "simulate",
        parameters,
        seeds={"noise": args.seed},
        inputs={"config": str(args.config)},
        outputs={"pulse": str(args.out)},
    )


def cmd_analyze(args: argparse.Namespace) -> RunManifest:
    config = load_scene(args.config)
    grid = config.grid()
    pulse = _load_pulse(args.pulse, grid)
    carriers = _carriers(config, args.multitone)
    require_no_aliasing(config.scene, config.chirp, config.reference, config.f_s, carriers)
    rel_threshold = args.rel_threshold if args.rel_threshold is not None else config.rel_threshold

    dictionary = build_dictionary(synth_reference(config.chirp, config.reference, grid))
    alpha = analyze(dictionary, pulse)
    report = sparsity_report(alpha, rel_threshold)
    export_coefficients_csv(args.out, alpha, report)

    expected = if_bins(config.scene, config.chirp, config.reference, grid, carriers).tolist()
    print(f"support size = {report.support_size} (threshold {rel_threshold:g} of peak)")
    print(f"energy fraction in support = {report.energy_fraction:.12f}")
    print(f"expected bins = {sorted(expected)}")
    print(f"observed bins = {sorted(report.top_bins[: len(expected)])}")
    for i, k in enumerate(expected):
        print(f"  tone {i}: bin {k}, |alpha| = {abs(alpha.alpha[k]):.6g}")

    return RunManifest(
        "analyze",
        _scene_parameters(config, grid) | {"rel_threshold": rel_threshold, "multitone": args.multitone},
        inputs={"config": str(args.config), "pulse": str(args.pulse)},
        outputs={"coefficients": str(args.out)},
        results={
            "support": list(report.support),
            "energy_fraction": report.energy_fraction,
            "expected_bins": sorted(expected),
        },
    )


def cmd_compress(args: argparse.Namespace) -> RunManifest:
    config = load_scene(args.config)
    grid = config.grid()
    pulse = _load_pulse(args.pulse, grid)
    sensing = make_sensing(args.m, grid.N, args.kind, args.seed)
    measurements = compress(sensing, pulse)
    write_measurements(args.out, measurements, pulse.f_s)
    print(f"M = {sensing.M} measurements of N = {sensing.N} samples ({sensing.kind.value})")
    print(f"compression ratio = {measurements.compression_ratio:g}")
    return RunManifest(
        "compress",
        _scene_parameters(config, grid) | {"M": args.m, "kind": sensing.kind.value},
        seeds={"sensing": args.seed},
        inputs={"config": str(args.config), "pulse": str(args.pulse)},
        outputs={"measurements": str(args.out)},
        results={"compression_ratio": measurements.compression_ratio},
    )


def cmd_reconstruct(args: argparse.Namespace) -> RunManifest:
    config = load_scene(args.config)
    grid = config.grid()
    require_no_aliasing(config.scene, config.chirp, config.reference, config.f_s)
    measurements, f_s = read_measurements(args.measurements)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.kind is not None:
        overrides["kind"] = args.kind
    measurements = dataclasses.replace(measurements, **overrides)
    if measurements.N != grid.N or f_s != grid.f_s:
        raise InvalidParameterError(
            f"Measurements were taken from {measurements.N} samples at {f_s} Hz; "
            f"the scene grid has {grid.N} samples at {grid.f_s} Hz."
        )

    k_max = args.kmax if args.kmax is not None else max(1, measurements.M // 4)
    dictionary = build_dictionary(synth_reference(config.chirp, config.reference, grid))
    result = reconstruct_omp(measurements, measurements.sensing(), dictionary, k_max, args.tol)
    write_pulse(args.out, result.signal_hat)

    results: dict[str, Any] = {
        "support": list(result.support),
        "iterations": result.iterations,
        "relative_residual": result.relative_residual,
        "compression_ratio": measurements.compression_ratio,
    }
    print(f"support = {list(result.support)} after {result.iterations} iterations")
    print(f"relative residual = {result.relative_residual:.3e}")
    print(f"compression ratio = {measurements.compression_ratio:g}")
    inputs = {"config": str(args.config), "measurements": str(args.measurements)}
    if args.reference is not None:
        reference = _load_pulse(args.reference, grid)
        scale = np.linalg.norm(reference.samples)
        error = float(np.linalg.norm(result.signal_hat.samples - reference.samples) / scale) if scale else math.inf
        results["relative_error"] = error
        inputs["reference"] = str(args.reference)
        print(f"relative error = {error:.3e}")

    manifest = RunManifest(
        "reconstruct",
        _scene_parameters(config, grid)
        | {"M": measurements.M, "kind": measurements.kind.value, "k_max": k_max, "tol": args.tol},
        seeds={"sensing": measurements.seed},
        inputs=inputs,
        outputs={"pulse": str(args.out)},
        results=results,
    )
    if result.relative_residual > args.tol:
        logger.error(
            "Reconstruction did not converge: relative residual %.3e exceeds tolerance %.1e "
            "(noisy pulses need a --tol near their noise level).",
            result.relative_residual,
            args.tol,
        )
        manifest.exit_code = EXIT_NUMERICAL
    return manifest


def cmd_selftest(args: argparse.Namespace) -> RunManifest:
    report = run_selftest(seed=args.seed, inject_fault=args.inject_fault)
    print(report)
    manifest = RunManifest(
        "selftest",
        {"inject_fault": args.inject_fault},
        seeds={"selftest": args.seed},
        results={check.name: check.defect for check in report.checks},
    )
    if not report.passed:
        logger.error("Failed invariants: %s", ", ".join(check.name for check in report.failures()))
        manifest.exit_code = EXIT_NUMERICAL
    return manifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirp-dictionary",
        description="Sparse representation of LFM radar echoes in a dechirp-and-DFT dictionary.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics at DEBUG level")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", type=Path, help="also write the run manifest to this JSON file")
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", parents=[common], help="synthesize an echo pulse")
    simulate.add_argument("config", type=Path, help="scene configuration (JSON)")
    simulate.add_argument("out", type=Path, help="output pulse file")
    simulate.add_argument("--snr-db", type=float, default=math.inf, help="add white noise at this SNR")
    simulate.add_argument("--seed", type=int, default=0, help="noise seed")
    simulate.add_argument("--multitone", action="store_true", help="transmit on every carrier of the scene")
    simulate.add_argument("--snap", action="store_true", help="move scatterers onto the DFT grid first")
    simulate.add_argument("--gate", action="store_true", help="restrict each echo to its pulse width")
    simulate.set_defaults(handler=cmd_simulate)

    analyze_ = subparsers.add_parser("analyze", parents=[common], help="coefficients and sparsity of a pulse")
    analyze_.add_argument("pulse", type=Path)
    analyze_.add_argument("config", type=Path)
    analyze_.add_argument("out", type=Path, help="output coefficient CSV")
    analyze_.add_argument("--rel-threshold", type=float, help="support threshold relative to the peak")
    analyze_.add_argument("--multitone", action="store_true", help="predict one tone per carrier")
    analyze_.set_defaults(handler=cmd_analyze)

    kinds = [kind.value for kind in SensingKind]
    compress_ = subparsers.add_parser("compress", parents=[common], help="take random measurements of a pulse")
    compress_.add_argument("pulse", type=Path)
    compress_.add_argument("config", type=Path)
    compress_.add_argument("out", type=Path, help="output measurement file; a .json descriptor is written next to it")
    compress_.add_argument("--m", type=int, required=True, help="number of measurements")
    compress_.add_argument("--kind", choices=kinds, default=SensingKind.GAUSSIAN.value)
    compress_.add_argument("--seed", type=int, default=0, help="sensing matrix seed")
    compress_.set_defaults(handler=cmd_compress)

    reconstruct = subparsers.add_parser("reconstruct", parents=[common], help="recover a pulse by OMP")
    reconstruct.add_argument("measurements", type=Path)
    reconstruct.add_argument("config", type=Path)
    reconstruct.add_argument("out", type=Path, help="output pulse file")
    reconstruct.add_argument("--kmax", type=int, help="largest support size (default M/4)")
    reconstruct.add_argument(
        "--tol",
        type=float,
        default=1e-6,
        help="relative residual stopping tolerance; stopping above it exits 3, "
        "so noisy pulses need about 10**(-snr_db/20)",
    )
    reconstruct.add_argument("--seed", type=int, help="override the descriptor's sensing seed")
    reconstruct.add_argument("--kind", choices=kinds, help="override the descriptor's sensing kind")
    reconstruct.add_argument("--reference", type=Path, help="pulse to compute the relative error against")
    reconstruct.set_defaults(handler=cmd_reconstruct)

    selftest = subparsers.add_parser("selftest", parents=[common], help="run the numerical invariant suite")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def _run(handler: Callable[[argparse.Namespace], RunManifest], args: argparse.Namespace) -> int:
    try:
        manifest = handler(args)
    except PulseFileError as e:
        logger.error("%s", e)
        return EXIT_IO
    except NumericalCheckError as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
    except InvalidParameterError as e:
        logger.error("%s", e)
        return EXIT_VALIDATION
    except OSError as e:
        logger.error("%s", e)
        return EXIT_IO
    print(manifest.to_json())
    if args.manifest is not None:
        manifest.save(args.manifest)
    return manifest.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    with warnings.catch_warnings():
        # Already reported through logging by make_grid.
        warnings.simplefilter("ignore", UndersamplingWarning)
        return _run(args.handler, args)
