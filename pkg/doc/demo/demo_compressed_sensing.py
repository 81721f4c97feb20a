# %% [markdown]
# # Compressed sensing of chirp echoes
#
# A scene of $P$ scatterers on the delay grid has exactly $P$ non-zero
# coefficients in the dictionary $D = \Phi\Psi$ (see the sparsity demo). That
# makes the echo a natural candidate for compressed sensing: instead of the
# $N$ samples of the pulse we keep only $M \ll N$ random projections
#
# $$
# y = S s_r = S D \alpha, \qquad S \in \mathbb{R}^{M \times N},
# $$
#
# and recover $\alpha$, hence $s_r = D\alpha$, by orthogonal matching pursuit
# (OMP) on the effective matrix $A = SD$.
#
# The sensing matrix is never stored. It is regenerated from its seed, kind and
# shape, which are saved next to the measurements.
#
# ## Implementation
#
# ### Preamble

# %%
import matplotlib.pyplot as plt
import numpy as np

from chirp_dictionary import (
    ComplexSignal,
    add_awgn,
    build_dictionary,
    compress,
    expected_bin,
    load_scene,
    make_sensing,
    reconstruct_omp,
    synth_echo,
    synth_reference,
)


def relative_error(estimate, truth):
    return np.linalg.norm(estimate.samples - truth.samples) / np.linalg.norm(truth.samples)


# %% [markdown]
# The scene holds five on-grid scatterers with $N = 4096$ samples per pulse.

# %%
config = load_scene("scenes/cs_five_scatterers.json")
chirp, reference, scene = config.chirp, config.reference, config.scene
grid = config.grid()
dictionary = build_dictionary(synth_reference(chirp, reference, grid))
echo = synth_echo(scene, chirp, grid)
bins = sorted(expected_bin(s.delay, reference, chirp, grid) for s in scene.scatterers)
print(f"N = {grid.N}, P = {len(scene)}, occupied bins = {bins}")

# %% [markdown]
# ### Noiseless recovery
#
# With $M = 512$ Gaussian measurements the compression ratio is $N/M = 8$.

# %%
S = make_sensing(512, grid.N, "gaussian", seed=3)
y = compress(S, echo)
result = reconstruct_omp(y, S, dictionary, k_max=len(scene) + 2)
error = relative_error(result.signal_hat, echo)
print(f"compression ratio = {y.compression_ratio:g}")
print(f"support = {list(result.support)} after {result.iterations} iterations")
print(f"relative error = {error:.3e}")
assert list(result.support) == bins
assert error < 1e-6

# %% [markdown]
# The dictionary is what makes this work. A plain DFT basis (a reference
# chirp of constant phase) spreads the echo over hundreds of bins and five
# atoms capture only a small part of it.

# %%
plain = build_dictionary(ComplexSignal.on_grid(np.ones(grid.N), grid))
plain_result = reconstruct_omp(y, S, plain, k_max=len(scene))
plain_error = relative_error(plain_result.signal_hat, echo)
print(f"plain DFT: relative error = {plain_error:.3f}")
assert plain_result.residual_norm > 1e3 * result.residual_norm

# %% [markdown]
# ### Number of measurements
#
# Exact recovery needs a number of measurements of the order of $P \log(N/P)$.
# Below we count, for several $M$, how many of ten random Gaussian and
# Bernoulli operators lead to exact support recovery.

# %%
measurement_counts = [8, 16, 24, 32, 48, 64, 128]
trials = 10
success = {kind: [] for kind in ["gaussian", "bernoulli"]}
for kind, rates in success.items():
    for M in measurement_counts:
        hits = 0
        for seed in range(trials):
            S_trial = make_sensing(M, grid.N, kind, seed)
            trial = reconstruct_omp(compress(S_trial, echo), S_trial, dictionary, k_max=min(len(scene), M))
            hits += list(trial.support) == bins
        rates.append(hits / trials)
    print(kind, dict(zip(measurement_counts, rates, strict=True)))

# %% [markdown]
# ### Noisy echoes
#
# With additive white Gaussian noise the residual cannot reach the tolerance
# and OMP stops after `k_max` atoms. The selected atoms still sit on the
# scatterers for moderate noise levels, and the reconstruction discards the
# noise outside the support.

# %%
noisy = add_awgn(echo, snr_db=20.0, seed=7)
noisy_result = reconstruct_omp(compress(S, noisy), S, dictionary, k_max=len(scene))
print(f"noisy support = {list(noisy_result.support)}")
print(f"error against the noisy echo = {relative_error(noisy_result.signal_hat, noisy):.3f}")
print(f"error against the clean echo = {relative_error(noisy_result.signal_hat, echo):.3f}")

# %% [markdown]
# ### Post-processing

# %%
fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
for kind, rates in success.items():
    ax0.plot(measurement_counts, rates, "o-", label=kind)
ax0.set_xlabel("measurements $M$")
ax0.set_ylabel("exact support recovery rate")
ax0.legend()
ax0.grid()

history = np.asarray(result.residual_history)
ax1.semilogy(np.arange(history.size), history / history[0] + 1e-17, "o-", label="chirp dictionary")
plain_history = np.asarray(plain_result.residual_history)
ax1.semilogy(np.arange(plain_history.size), plain_history / plain_history[0], "*-", label="plain DFT")
ax1.set_xlabel("OMP iteration")
ax1.set_ylabel(r"$\|r\| / \|y\|$")
ax1.legend()
ax1.grid()
fig.tight_layout()
fig.savefig("compressed_sensing.png")
