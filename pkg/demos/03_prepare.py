# %% [markdown]
# Preparing one locality
#
# Calibration shifts each category so the days before the first restriction
# average zero.  STL removes the weekday effect and each trend is min-max
# scaled onto [0, 1] over the whole series.

# %%
import io

from mobwave import ANALYSIS_CATEGORIES, bundled_study_config, parse_cmr_csv, prepare_locality
from mobwave.synthetic import synthetic_cmr_csv

study = bundled_study_config()
groups = parse_cmr_csv(io.BytesIO(synthetic_cmr_csv(study, seed=0)), study.selectors())
loc = study.locality("Lombardia")
prep = prepare_locality(groups[loc.locality_id], loc.wave1_restriction_date, study.stl)

for cat in ANALYSIS_CATEGORIES:
    p = prep.prepared[cat]
    lowest = p.dates[p.values.argmin()]
    print(f"{cat.abbrev:4s} offset {p.provenance.calibration_offset:7.2f}  "
          f"range [{p.provenance.scale_min:7.2f}, {p.provenance.scale_max:6.2f}]  lowest on {lowest}")

# %% [markdown]
# The provenance record undoes the scaling exactly.

# %%
p = prep.prepared[ANALYSIS_CATEGORIES[0]]
print(abs(p.calibrated_trend() - prep.decompositions[ANALYSIS_CATEGORIES[0]].trend).max())
