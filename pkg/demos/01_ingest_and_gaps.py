# %% [markdown]
# Reading CMR data and filling gaps
#
# The real Google CMR file is large; here a synthetic file with the same
# header stands in for it.  The numbers are invented and only exercise the
# code paths.

# %%
import io

import numpy as np

from mobwave import bundled_study_config, fill_gaps, parse_cmr_csv, PlaceCategory
from mobwave.synthetic import synthetic_cmr_csv

study = bundled_study_config()
raw = synthetic_cmr_csv(study, seed=0)
print(raw.decode("utf-8").splitlines()[0])

# %% [markdown]
# Each configured locality is matched on the most specific non-empty region
# column, so a region row and a district row never mix.

# %%
groups = parse_cmr_csv(io.BytesIO(raw), study.selectors())
for loc_id, by_cat in groups.items():
    parks = by_cat[PlaceCategory.PARKS]
    print(f"{loc_id:20s} {len(parks)} days, {int(np.isnan(parks.values).sum())} missing parks cells")

# %% [markdown]
# Interior gaps of up to a week are linearly interpolated and flagged.

# %%
s = groups["Berlin"][PlaceCategory.PARKS]
filled = fill_gaps(s)
idx = np.flatnonzero(filled.filled)
print("filled dates:", filled.dates[idx])
print("values:", filled.values[idx])
