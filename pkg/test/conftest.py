import pathlib

import numpy as np
import pytest

from chirp_dictionary import ChirpParams, ReferenceParams, SamplingGrid, Scene
from chirp_dictionary.sparsity import delay_step

SCENES = pathlib.Path(__file__).resolve().parents[1] / "doc" / "demo" / "scenes"


@pytest.fixture
def rng():
    return np.random.default_rng(1729)


@pytest.fixture
def grid():
    """256 samples at 1 MHz."""
    return SamplingGrid(f_s=1e6, N=256, T=255.5e-6)


@pytest.fixture
def chirp(grid):
    # Sweeps f_s/2 over the pulse.
    return ChirpParams(f_c=2e4, gamma=0.5 * grid.f_s / grid.T, T=grid.T)


@pytest.fixture
def reference(chirp, grid):
    return ReferenceParams((grid.N // 2) * delay_step(chirp, grid))


@pytest.fixture
def on_grid_scene(chirp, grid, reference):
    """Factory for scenes whose IF tones sit on the given signed DFT bins."""
    step = delay_step(chirp, grid)

    def make(offsets, amplitudes=None):
        offsets = np.asarray(offsets)
        if amplitudes is None:
            amplitudes = np.ones(offsets.size)
        return Scene.from_arrays(amplitudes, reference.t_ref + offsets * step)

    return make


@pytest.fixture
def scene_path():
    return SCENES / "three_scatterers.json"


@pytest.fixture
def cs_scene_path():
    return SCENES / "cs_five_scatterers.json"
