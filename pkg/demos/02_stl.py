# %% [markdown]
# STL on a toy series
#
# A ramp plus a fixed weekly pattern: the decomposition should hand the ramp
# to the trend and the pattern to the seasonal component.

# %%
import numpy as np

from mobwave import StlParams, stl_decompose

t = np.arange(140, dtype=float)
pattern = np.array([0.8, 0.3, -0.2, 0.1, 0.5, -1.0, -0.5])
pattern -= pattern.mean()
y = 5.0 + 0.1 * t + np.tile(pattern, 20)

res = stl_decompose(y, StlParams(period=7))
print(res.params)
print("max trend error   ", np.abs(res.trend - (5.0 + 0.1 * t))[7:-7].max())
print("max seasonal error", np.abs(res.seasonal - np.tile(pattern, 20))[7:-7].max())

# %% [markdown]
# Robustness: with outer iterations a single spike gets weight near zero and
# barely moves the trend.

# %%
spiked = y.copy()
spiked[70] += 50
for outer in (0, 5):
    r = stl_decompose(spiked, StlParams(outer_iterations=outer))
    print(f"outer={outer}: weight at spike {r.robustness_weights[70]:.3f}, "
          f"trend shift at spike {r.trend[70] - res.trend[70]:.2f}")
