"""Capacity fade for the six duty cases and the resulting pack replacement mileage."""

# %% Size the pack from the cruise energy per mile
import numpy as np

from etruck import VehicleParams, reference_cycle, simulate_cycle
from etruck.battery import REFERENCE_CASES, FadeParams, miles_to_eol, run_reference_cases, size_pack

epm = simulate_cycle(reference_cycle("cruise"), VehicleParams()).energy_per_mile
pack = size_pack(500, epm)
print(f"{epm:.3f} kWh/mi for 500 miles needs {pack.capacity:.0f} kWh (about ${pack.cost:,.0f})")

# %% Run the cases
traces = run_reference_cases()
for case in REFERENCE_CASES:
    tr = traces[case.label]
    eol = miles_to_eol(tr)
    where = "beyond horizon" if eol is None else f"{eol:,.0f} mi"
    print(f"case {case.label}: {case.cycle_kind:9s} {case.charge_c_rate:.0f}C {case.daily_distance:.0f} mi/day"
          f"  platoon={case.platoon!s:5s}  400-mile range lost at {where}")

# %% Sampled available range, the table behind a range-versus-mileage plot
for miles in (0, 250_000, 500_000, 750_000, 1_000_000):
    row = []
    for label, tr in traces.items():
        if miles > tr.miles[-1]:
            row.append(f"{label}:  ---")
        else:
            row.append(f"{label}:{float(np.interp(miles, tr.miles, tr.available_range)):5.0f}")
    print(f"{miles:>9,} mi  " + "  ".join(row))

# %% A gentler cycling-loss calibration lengthens life
gentle = FadeParams(base_loss_per_fec=1.5e-5)
eol_c = miles_to_eol(run_reference_cases(fade=gentle)["C"])
print(f"case C with half the cycling loss: {eol_c:,.0f} mi")
