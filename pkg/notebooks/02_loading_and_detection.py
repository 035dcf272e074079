# %% [markdown]
# # Loading atoms and counting them
#
# Stochastic loading fills each site with some number of atoms; fluorescence
# readout has to infer that number from a noisy signal.

# %%
import numpy as np

from microqreg.beam_optics import LensArraySpec, spot_grid
from microqreg.detection import (
    CollisionalBlockade,
    DetectionModel,
    Optimized,
    Poisson,
    classify_counts,
    load_register,
    misclassification_probability,
    simulate_fluorescence,
)

grid = spot_grid(LensArraySpec(55e-6, 100, 100))

# %% [markdown]
# ## Loading statistics

# %%
for mode in (Poisson(1.0), CollisionalBlockade(), Optimized()):
    occ = load_register(grid, mode, seed=1).occupancy
    freq = np.bincount(occ.ravel(), minlength=4)[:4] / occ.size
    print(f"{type(mode).__name__:20s} P(0..3) = {np.round(freq, 3)}")

# %% [markdown]
# ## Fluorescence histogram
# Background 300 a.u., 400 a.u. per atom, 60 a.u. Gaussian noise. A coarse
# text histogram shows three well separated peaks.

# %%
model = DetectionModel()
occ = load_register(grid, Poisson(1.0), seed=2).occupancy
record = classify_counts(simulate_fluorescence(occ, model, seed=3), model)
centers, counts = record.histogram(bin_width=50.0)
for c, n in zip(centers, counts):
    if 150 <= c <= 1500:
        print(f"{c:6.0f} | {'#' * int(60 * n / counts.max())}")

# %% [markdown]
# ## How often do we miscount?

# %%
pmf = Poisson(1.0).pmf(np.arange(20))
for sigma in (40.0, 60.0, 80.0, 100.0):
    m = DetectionModel(noise_sigma=sigma)
    rec = classify_counts(simulate_fluorescence(occ, m, seed=4), m)
    print(f"sigma {sigma:5.0f}: simulated {np.mean(rec.counts != occ):.2e}  "
          f"closed form {misclassification_probability(m, pmf):.2e}")
