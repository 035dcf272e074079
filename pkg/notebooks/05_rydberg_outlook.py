# %% [markdown]
# # Can these traps host a Rydberg gate?
#
# Two questions: are neighbouring atoms close enough to blockade each other,
# and are their traps still optically resolved?

# %%
from microqreg.rydberg import BlockadeConfig, gate_fidelity_budget, geometry_compatible, technical_error_for

geometries = {
    "microlens array, 13 um pitch": BlockadeConfig(10e-6, 13e-6, 1.6e-6, 6.5e-3),
    "trap pair, 8.7 um apart": BlockadeConfig(10e-6, 8.7e-6, 3.2e-6, 6.5e-3),
}
for name, cfg in geometries.items():
    rep = geometry_compatible(cfg)
    print(f"{name:30s} within blockade: {rep.pair_within_blockade!s:5s} resolved: {rep.sites_resolved!s:5s}")

# %% [markdown]
# ## Error budget
# The intrinsic error is small; a measured 0.92 leaves a large technical share.

# %%
budget = gate_fidelity_budget(geometries["trap pair, 8.7 um apart"])
technical = technical_error_for(0.92, 6.5e-3)
print(f"intrinsic fidelity {budget.intrinsic_fidelity:.4f}, technical error for 0.92: {technical:.4f}")
