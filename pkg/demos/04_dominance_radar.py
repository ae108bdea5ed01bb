# %% [markdown]
# Comparing waves
#
# Each wave period is summarised by the area under the scaled curve per
# category.  Lower means stronger reduction, so one wave dominates the other
# when it is no higher anywhere and lower somewhere.

# %%
import datetime as dt
from pathlib import Path

from mobwave import ANALYSIS_CATEGORIES, AucVector, dominance, radar_chart

def vector(values, wave):
    return AucVector(dict(zip(ANALYSIS_CATEGORIES, values)), "demo", wave, 0, dt.date(2020, 3, 1), 56)

w1 = vector([10.0, 22.0, 15.0, 8.0, 12.0], 1)
w2 = vector([30.0, 35.0, 40.0, 28.0, 33.0], 2)
w2b = vector([30.0, 18.0, 40.0, 28.0, 33.0], 2)
print(dominance(w1, w2))
print(dominance(w1, w2b))

# %% [markdown]
# On the radar chart dominance is polygon containment.

# %%
out = Path("demo_output")
out.mkdir(exist_ok=True)
(out / "radar_dominates.svg").write_text(radar_chart(w1, w2, "dominates"), encoding="utf-8")
(out / "radar_incomparable.svg").write_text(radar_chart(w1, w2b, "incomparable"), encoding="utf-8")
print(sorted(p.name for p in out.iterdir()))
