"""Levelised cost per mile of diesel and electric fleets under parameter uncertainty."""

# %% The baseline parameter ranges
from etruck.economics import baseline_ranges, cost_per_mile, cpm_distribution, midpoint_scenario, sample_scenarios

ranges = baseline_ranges()
print(f"price differential ${ranges.price_differential:,.0f}, discount rate {ranges.discount_rate:.0%}")
print(f"replacement pack bought at {ranges.resolved_replacement_odometer():,.0f} mi")

# %% One scenario at the middle of every range
for needs in (False, True):
    s = midpoint_scenario(ranges, needs)
    print(f"midpoint, replacement={needs!s:5s}: diesel {cost_per_mile(s, 'diesel'):.3f}  "
          f"electric {cost_per_mile(s, 'electric'):.3f} USD/mi")

# %% Monte Carlo over the grid, and the effect of the replacement fraction
batch = sample_scenarios(ranges, 50_000, seed=0)
d = cpm_distribution(batch, "diesel")
print(f"diesel fleet {d.mean:.3f} +/- {d.std:.3f} USD/mi")
for rf in (0.0, 0.3, 0.5, 1.0):
    e = cpm_distribution(sample_scenarios(ranges.pinned("replacement_fraction", rf), 50_000, seed=0), "electric")
    print(f"electric fleet, R_f={rf:.1f}: {e.mean:.3f} +/- {e.std:.3f} USD/mi")

# %% How much the two distributions overlap
import numpy as np

e = cpm_distribution(batch, "electric")
print(f"share of scenarios where electric costs more per mile: {np.mean(e.samples > d.samples):.2%}")
