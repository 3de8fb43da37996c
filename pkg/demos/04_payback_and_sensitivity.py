"""Payback period of the electric truck and a one-at-a-time sensitivity sweep."""

# %% Baseline payback distribution
from etruck.economics import baseline_ranges, sample_scenarios
from etruck.payback import odometer_distribution, payback_distribution, sensitivity_sweep

ranges = baseline_ranges()
batch = sample_scenarios(ranges, 50_000, seed=0)
d = payback_distribution(batch)
print(f"payback {d.mean:.2f} +/- {d.std:.2f} yr (median {d.median:.2f}), "
      f"odometer {odometer_distribution(batch).mean:,.0f} mi, {d.excluded} never break even")

# %% Pin one variable at a time
sweeps = {
    "replacement_fraction": [0.0, 0.3, 0.5, 1.0],
    "electricity_price": [0.07, 0.095, 0.12, 0.14],
    "annual_mileage": [60_000, 90_000, 120_000],
    "e_initial_price": [180_000, 200_000, 230_000],
    "d_additional_repairs": [0.0, 0.05, 0.155],
}
for variable, values in sweeps.items():
    pts = sensitivity_sweep(ranges, variable, values, n=50_000, seed=0)
    cells = "  ".join(f"{p.pinned_value:g}->{p.mean_payback:.2f}" for p in pts)
    print(f"{variable:22s} {cells}")
