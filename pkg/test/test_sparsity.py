import numpy as np
import pytest

from chirp_dictionary import (
    SPEED_OF_LIGHT,
    AliasingError,
    ChirpParams,
    InvalidParameterError,
    Scene,
    SparseCoefficients,
    analyze,
    build_dictionary,
    combine_equal_delays,
    expected_bin,
    if_closed_form,
    make_range_grid,
    range_of_bin,
    range_of_delay,
    snap_scene_to_grid,
    sparsity_report,
    synth_echo,
    synth_reference,
)
from chirp_dictionary.sparsity import delay_step, scene_range_window


def coefficients_of(scene, chirp, grid, reference):
    return analyze(build_dictionary(synth_reference(chirp, reference, grid)), synth_echo(scene, chirp, grid))


def test_range_grid_resolution():
    grid = make_range_grid(10e3, 10.01e3, 1e9)
    assert grid.delta_R == pytest.approx(0.149896229, rel=1e-12)
    assert grid.M == 66
    np.testing.assert_allclose(grid.delays, 2 * grid.bins / SPEED_OF_LIGHT)
    assert grid.bin_of_range(10e3 + 3.5 * grid.delta_R) == 3
    with pytest.raises(InvalidParameterError):
        grid.bin_of_range(9e3)


def test_range_grid_exact_span():
    delta_R = SPEED_OF_LIGHT / 2e9
    assert make_range_grid(0.0, 10 * delta_R, 1e9).M == 10


@pytest.mark.parametrize("R_l,R_h,B", [(10.0, 10.0, 1e9), (20.0, 10.0, 1e9), (0.0, 10.0, 0.0)])
def test_range_grid_validation(R_l, R_h, B):
    with pytest.raises(InvalidParameterError):
        make_range_grid(R_l, R_h, B)


def test_expected_bin(chirp, grid, reference):
    step = delay_step(chirp, grid)
    assert expected_bin(reference.t_ref, reference, chirp, grid) == 0
    assert expected_bin(reference.t_ref + 10 * step, reference, chirp, grid) == 10
    assert expected_bin(reference.t_ref - 3 * step, reference, chirp, grid) == grid.N - 3
    with pytest.raises(AliasingError):
        expected_bin(reference.t_ref + 200 * step, reference, chirp, grid)


def test_range_of_bin(chirp, grid, reference):
    step = delay_step(chirp, grid)
    assert range_of_bin(10, reference, chirp, grid) == pytest.approx(range_of_delay(reference.t_ref + 10 * step))
    assert range_of_bin(grid.N - 3, reference, chirp, grid) == pytest.approx(
        range_of_delay(reference.t_ref - 3 * step)
    )


def test_snap_scene_to_grid(chirp, grid, reference, on_grid_scene):
    scene = on_grid_scene([4, -17, 90])
    np.testing.assert_allclose(snap_scene_to_grid(scene, reference, chirp, grid).delays, scene.delays, rtol=1e-15)

    snapped = snap_scene_to_grid(on_grid_scene([10.4]), reference, chirp, grid)
    np.testing.assert_allclose(snapped.delays, on_grid_scene([10]).delays, rtol=1e-15)


def test_snapped_scene_is_sparse(chirp, grid, reference, on_grid_scene):
    snapped = snap_scene_to_grid(on_grid_scene([10.4, 10.2, -30.6]), reference, chirp, grid)
    report = sparsity_report(coefficients_of(snapped, chirp, grid, reference))
    assert report.support == (10, grid.N - 31)


def test_snap_without_modulation_is_identity(grid, reference):
    chirp = ChirpParams(f_c=1e3, gamma=0.0, T=grid.T)
    scene = Scene.from_arrays([1.0], [1e-4])
    assert snap_scene_to_grid(scene, reference, chirp, grid) is scene


def test_combine_equal_delays():
    scene = Scene.from_arrays([1.0, 2.0, -1.0, 0.5], [3e-6, 1e-6, 3e-6, 1e-6])
    combined = combine_equal_delays(scene)
    np.testing.assert_array_equal(combined.delays, [1e-6])
    np.testing.assert_array_equal(combined.amplitudes, [2.5])


def test_report_of_impulse():
    report = sparsity_report(SparseCoefficients.impulse(32, 5))
    assert report.support == (5,)
    assert report.energy_fraction == 1.0


def test_report_of_on_grid_scene(chirp, grid, reference, on_grid_scene):
    scene = on_grid_scene([3, -50, 101], [0.5, 2.0, 1.0j])
    report = sparsity_report(coefficients_of(scene, chirp, grid, reference))
    assert report.support_size == 3
    assert report.energy_fraction >= 1 - 1e-9
    assert report.top_bins == (grid.N - 50, 101, 3)


def test_report_of_cancelling_scatterers(chirp, grid, reference, on_grid_scene):
    scene = on_grid_scene([7, 7], [1.0, -1.0])
    report = sparsity_report(coefficients_of(scene, chirp, grid, reference))
    assert report.support_size <= 1


def test_report_of_zero_vector():
    report = sparsity_report(np.zeros(16))
    assert report.support == ()
    assert report.energy_fraction == 0.0
    with pytest.raises(InvalidParameterError):
        sparsity_report(np.ones(4), rel_threshold=0.0)


def test_delay_step_requires_modulation(grid):
    with pytest.raises(InvalidParameterError):
        delay_step(ChirpParams(f_c=0.0, gamma=0.0, T=grid.T), grid)


def test_scene_range_window():
    scene = Scene.from_arrays([1.0, 1.0], [1e-6, 4e-6])
    lo, hi = scene_range_window(scene, margin=10.0)
    assert lo == pytest.approx(range_of_delay(1e-6) - 10.0)
    assert hi == pytest.approx(range_of_delay(4e-6) + 10.0)
    with pytest.raises(InvalidParameterError):
        scene_range_window(Scene())


@pytest.mark.parametrize("offset,k", [(10.3, 10), (10.7, 11), (-3.2, 253), (40.49, 40), (41.3, 41), (-60.8, 195)])
def test_off_grid_peak(chirp, grid, reference, on_grid_scene, offset, k):
    scene = on_grid_scene([offset], [0.8 - 0.6j])
    alpha = coefficients_of(scene, chirp, grid, reference).alpha
    assert expected_bin(scene.scatterers[0].delay, reference, chirp, grid) == k
    assert np.argmax(np.abs(alpha)) == k

    # Direct DFT sum of the closed-form IF signal over the peak and its neighbours.
    n = np.arange(grid.N)
    window = np.array([k - 1, k, k + 1]) % grid.N
    s_if = if_closed_form(scene, chirp, reference, grid).samples
    direct = np.array([np.sum(s_if * np.exp(2j * np.pi * (m * n % grid.N) / grid.N)) for m in window])
    direct /= np.sqrt(grid.N)
    energy = np.sum(np.abs(alpha[window]) ** 2)
    assert energy == pytest.approx(np.sum(np.abs(direct) ** 2), rel=1e-9)
    np.testing.assert_allclose(alpha[window], direct, rtol=0, atol=1e-9 * np.abs(direct).max())
    assert sparsity_report(alpha).support_size > 3
