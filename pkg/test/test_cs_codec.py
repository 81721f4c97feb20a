import numpy as np
import pytest

from chirp_dictionary import (
    ComplexSignal,
    GridMismatchError,
    InvalidParameterError,
    SensingKind,
    SparseCoefficients,
    build_dictionary,
    compress,
    effective_matrix,
    expected_bin,
    make_sensing,
    reconstruct_omp,
    synth_echo,
    synth_reference,
    synthesize,
)


@pytest.fixture
def dictionary(chirp, grid, reference):
    return build_dictionary(synth_reference(chirp, reference, grid))


def random_signal(rng, grid):
    return ComplexSignal.on_grid(rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N), grid)


@pytest.mark.parametrize("kind", ["gaussian", "bernoulli"])
def test_sensing_is_reproducible(kind):
    a = make_sensing(16, 64, kind, seed=11)
    b = make_sensing(16, 64, kind, seed=11)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, make_sensing(16, 64, kind, seed=12).matrix)


def test_square_gaussian_sensing_is_full_rank():
    assert np.linalg.matrix_rank(make_sensing(64, 64, SensingKind.GAUSSIAN, seed=0).matrix) == 64


def test_bernoulli_entries():
    S = make_sensing(25, 100, "bernoulli", seed=5)
    assert set(np.unique(S.matrix)) == {-0.2, 0.2}


@pytest.mark.parametrize("M,N,kind", [(65, 64, "gaussian"), (0, 64, "gaussian"), (8, 64, "rademacher")])
def test_sensing_validation(M, N, kind):
    with pytest.raises(InvalidParameterError):
        make_sensing(M, N, kind)


def test_compress_is_linear(rng, grid):
    S = make_sensing(64, grid.N, seed=2)
    assert np.all(compress(S, ComplexSignal.on_grid(np.zeros(grid.N), grid)).y == 0.0)

    x, z = random_signal(rng, grid), random_signal(rng, grid)
    a, b = 0.5 - 1.5j, 2.0 + 0.25j
    combined = ComplexSignal.on_grid(a * x.samples + b * z.samples, grid)
    np.testing.assert_allclose(
        compress(S, combined).y, a * compress(S, x).y + b * compress(S, z).y, rtol=0, atol=1e-12
    )


def test_square_sensing_is_invertible(rng, grid):
    S = make_sensing(grid.N, grid.N, seed=4)
    signal = random_signal(rng, grid)
    measurements = compress(S, signal)
    assert measurements.compression_ratio == 1.0
    np.testing.assert_allclose(np.linalg.solve(S.matrix, measurements.y), signal.samples, rtol=0, atol=1e-8)


def test_compress_checks_length(grid):
    with pytest.raises(GridMismatchError):
        compress(make_sensing(8, grid.N + 1), ComplexSignal.on_grid(np.zeros(grid.N), grid))


def test_effective_matrix_columns(dictionary):
    S = make_sensing(16, dictionary.N, seed=9)
    A = effective_matrix(S, dictionary)
    for k in [0, 1, 100, dictionary.N - 1]:
        column = S.matrix @ synthesize(dictionary, SparseCoefficients.impulse(dictionary.N, k)).samples
        np.testing.assert_allclose(A[:, k], column, rtol=0, atol=1e-12)


def test_single_atom_recovery(chirp, grid, reference):
    dictionary = build_dictionary(synth_reference(chirp, reference, grid))
    S = make_sensing(32, grid.N, seed=1)
    y = compress(S, synthesize(dictionary, SparseCoefficients.impulse(grid.N, 7)))
    result = reconstruct_omp(y, S, dictionary, k_max=4)
    assert result.support == (7,)
    assert result.residual_norm < 1e-10
    assert result.iterations == 1


def test_zero_measurements(dictionary):
    S = make_sensing(16, dictionary.N, seed=0)
    y = compress(S, ComplexSignal(np.zeros(dictionary.N), dictionary.f_s))
    result = reconstruct_omp(y, S, dictionary, k_max=4)
    assert result.support == ()
    assert result.iterations == 0
    assert np.all(result.signal_hat.samples == 0.0)


def test_reconstruct_validation(dictionary):
    S = make_sensing(16, dictionary.N, seed=0)
    y = compress(S, ComplexSignal(np.zeros(dictionary.N), dictionary.f_s))
    with pytest.raises(InvalidParameterError):
        reconstruct_omp(y, S, dictionary, k_max=0)
    with pytest.raises(InvalidParameterError):
        reconstruct_omp(y, S, dictionary, k_max=17)
    with pytest.raises(GridMismatchError):
        reconstruct_omp(y, make_sensing(8, dictionary.N, seed=0), dictionary, k_max=4)


def test_measurements_regenerate_sensing():
    S = make_sensing(16, 64, "bernoulli", seed=21)
    y = compress(S, ComplexSignal(np.ones(64), 1.0))
    assert y.compression_ratio == 4.0
    np.testing.assert_array_equal(y.sensing().matrix, S.matrix)


@pytest.mark.slow
def test_on_grid_recovery_sweep(chirp, grid, reference, on_grid_scene, dictionary):
    exact = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        offsets = rng.choice(np.arange(-127, 128), size=3, replace=False)
        amplitudes = rng.uniform(0.5, 1.5, 3) * np.exp(2j * np.pi * rng.uniform(size=3))
        scene = on_grid_scene(offsets, amplitudes)
        echo = synth_echo(scene, chirp, grid)
        S = make_sensing(64, grid.N, "gaussian", seed)
        result = reconstruct_omp(compress(S, echo), S, dictionary, k_max=3)

        bins = sorted(expected_bin(s.delay, reference, chirp, grid) for s in scene.scatterers)
        if list(result.support) == bins:
            exact += 1
            error = np.linalg.norm(result.signal_hat.samples - echo.samples) / np.linalg.norm(echo.samples)
            assert error < 1e-8
        residuals = np.array(result.residual_history)
        assert np.all(np.diff(residuals) <= 1e-12 * residuals[0])
    assert exact >= 99
