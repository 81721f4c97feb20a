import cmath
import math

import numpy as np
import pytest

from chirp_dictionary import (
    AliasingError,
    CarrierSet,
    ChirpParams,
    ComplexSignal,
    GridMismatchError,
    InvalidParameterError,
    ReferenceParams,
    SamplingGrid,
    Scene,
    SpreadTooLargeError,
    check_aliasing,
    dechirp,
    if_bins,
    if_closed_form,
    if_frequencies,
    reference_for_range,
    require_no_aliasing,
    synth_echo,
    synth_reference,
    synth_transmit,
    valid_tref_interval,
)

# 1 GHz over 50 µs, sampled at 2 GHz
BROADBAND = ChirpParams(f_c=10e9, gamma=2e13, T=50e-6)
F_S = 2e9


def test_reference_at_zero_delay_is_transmit(chirp, grid):
    np.testing.assert_array_equal(
        synth_reference(chirp, ReferenceParams(0.0), grid).samples, synth_transmit(chirp, grid).samples
    )


def test_reference_samples(grid):
    chirp = ChirpParams(f_c=0.0, gamma=1e10, T=grid.T)
    s_ref = synth_reference(chirp, ReferenceParams(1e-6), grid)
    expected = [cmath.exp(1j * math.pi * 1e10 * (t - 1e-6) ** 2) for t in grid.t]
    np.testing.assert_allclose(s_ref.samples, expected, rtol=0, atol=1e-12)
    np.testing.assert_allclose(np.abs(s_ref.samples), 1.0, rtol=0, atol=1e-15)


def test_dechirp_trivial_cases(chirp, grid, reference):
    s_ref = synth_reference(chirp, reference, grid)
    np.testing.assert_allclose(dechirp(s_ref, s_ref).samples, np.ones(grid.N), rtol=0, atol=1e-15)
    zero = ComplexSignal.on_grid(np.zeros(grid.N), grid)
    np.testing.assert_array_equal(dechirp(zero, s_ref).samples, np.zeros(grid.N))


def test_dechirp_requires_same_grid(chirp, grid, reference):
    s_ref = synth_reference(chirp, reference, grid)
    short = ComplexSignal(np.zeros(grid.N - 1), grid.f_s)
    with pytest.raises(GridMismatchError):
        dechirp(short, s_ref)


@pytest.mark.parametrize("seed", range(20))
def test_dechirp_matches_closed_form(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(32, 257))
    grid = SamplingGrid(f_s=1e6, N=N, T=(N - 0.5) / 1e6)
    chirp = ChirpParams(f_c=rng.uniform(0.0, 2e4), gamma=rng.uniform(0.0, 1e9), T=grid.T)
    P = int(rng.integers(1, 6))
    amplitudes = rng.uniform(0.5, 1.5, P) * np.exp(2j * np.pi * rng.uniform(size=P))
    scene = Scene.from_arrays(amplitudes, rng.uniform(0.0, grid.T / 2, P))
    ref = ReferenceParams(rng.uniform(0.0, grid.T / 2))

    if_signal = dechirp(synth_echo(scene, chirp, grid), synth_reference(chirp, ref, grid)).samples
    expected = if_closed_form(scene, chirp, ref, grid).samples
    assert np.abs(if_signal - expected).max() < 1e-12 * np.abs(expected).max()


def test_closed_form_at_reference_delay(chirp, grid, reference):
    scene = Scene.from_arrays([1.0, 0.5 - 2j], [reference.t_ref, reference.t_ref])
    np.testing.assert_allclose(if_closed_form(scene, chirp, reference, grid).samples, 1.5 - 2j, rtol=1e-15)


def test_closed_form_is_a_tone(chirp, grid, reference):
    delta = 3.3e-6
    s = if_closed_form(Scene.from_arrays([1.0], [reference.t_ref + delta]), chirp, reference, grid).samples
    step = np.exp(-2j * np.pi * chirp.gamma * delta / grid.f_s)
    np.testing.assert_allclose(s[1:] / s[:-1], step, rtol=0, atol=1e-12)


def test_if_frequencies():
    ref = ReferenceParams(1e-4)
    assert if_frequencies(Scene.from_arrays([1.0], [1e-4]), BROADBAND, ref)[0] == 0.0
    f = if_frequencies(Scene.from_arrays([1.0], [1e-4 + 1e-6]), BROADBAND, ref)
    np.testing.assert_allclose(f, [-20e6], rtol=1e-9)

    carriers = CarrierSet((BROADBAND.f_c, BROADBAND.f_c + 1e6))
    multitone = if_frequencies(Scene.from_arrays([1.0], [1e-4]), BROADBAND, ref, carriers)
    np.testing.assert_allclose(multitone, [0.0, 1e6])


def test_tref_interval_of_broadband_radar():
    interval = valid_tref_interval(Scene.from_arrays([1.0], [100e-6]), BROADBAND, F_S)
    np.testing.assert_allclose([interval.lo, interval.hi], [50e-6, 150e-6], rtol=1e-12)

    interval = valid_tref_interval(Scene.from_arrays([1.0, 1.0], [100e-6, 101e-6]), BROADBAND, F_S)
    np.testing.assert_allclose([interval.lo, interval.hi], [51e-6, 150e-6], rtol=1e-12)
    assert interval.length == pytest.approx(99e-6)


def test_tref_interval_degenerate_and_empty():
    chirp = ChirpParams(f_c=0.0, gamma=2.0**30, T=1e-3)
    f_s = 2.0**20
    # Spread of exactly f_s/gamma.
    interval = valid_tref_interval(Scene.from_arrays([1.0, 1.0], [2.0**-8, 2.0**-8 + 2.0**-10]), chirp, f_s)
    assert interval.lo == interval.hi == 2.0**-8 + 2.0**-11

    with pytest.raises(SpreadTooLargeError):
        valid_tref_interval(Scene.from_arrays([1.0, 1.0], [2.0**-8, 2.0**-8 + 2.0**-9]), chirp, f_s)
    with pytest.raises(InvalidParameterError):
        valid_tref_interval(Scene(), chirp, f_s)


def test_check_aliasing():
    chirp = ChirpParams(f_c=0.0, gamma=2.0**30, T=1e-3)
    f_s = 2.0**20
    scene = Scene.from_arrays([1.0], [2.0**-8])
    interval = valid_tref_interval(scene, chirp, f_s)
    assert check_aliasing(scene, chirp, ReferenceParams(interval.center), f_s)

    boundary = check_aliasing(scene, chirp, ReferenceParams(2.0**-8 - 2.0**-11), f_s)
    assert boundary.ok
    assert boundary.margins[0] == 0.0

    outside = check_aliasing(scene, chirp, ReferenceParams(interval.lo - 1.0 / f_s), f_s)
    assert not outside
    assert outside.margins[0] < 0.0
    with pytest.raises(AliasingError, match="Scatterer 0"):
        require_no_aliasing(scene, chirp, ReferenceParams(interval.lo - 1.0 / f_s), f_s)


@pytest.mark.parametrize("offset,ok", [(2.0**18, True), (2.0**19, True), (2.0**19 + 2.0**10, False)])
def test_check_aliasing_of_carrier_tones(offset, ok):
    chirp = ChirpParams(f_c=0.0, gamma=2.0**30, T=1e-3)
    f_s = 2.0**20
    scene = Scene.from_arrays([1.0, 1.0], [2.0**-8, 2.0**-8 + 2.0**-14])
    ref = ReferenceParams(2.0**-8)
    carriers = CarrierSet((0.0, offset))
    assert check_aliasing(scene, chirp, ref, f_s)

    check = check_aliasing(scene, chirp, ref, f_s, carriers)
    assert check.ok == ok
    np.testing.assert_array_equal(check.margins, f_s - 2.0 * np.abs(if_frequencies(scene, chirp, ref, carriers)))
    if ok:
        require_no_aliasing(scene, chirp, ref, f_s, carriers)
    else:
        with pytest.raises(AliasingError, match=f"Scatterer 0 on carrier {offset} Hz"):
            require_no_aliasing(scene, chirp, ref, f_s, carriers)


def test_reference_for_range():
    assert reference_for_range(149896.229).t_ref == pytest.approx(1e-3, rel=1e-12)


def test_if_bins(chirp, grid, reference, on_grid_scene):
    bins = if_bins(on_grid_scene([10, -3, 0]), chirp, reference, grid)
    np.testing.assert_array_equal(bins, [10, grid.N - 3, 0])
