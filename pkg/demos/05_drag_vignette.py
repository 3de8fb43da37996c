"""What a draggier electric truck does to payback.

A higher drag coefficient raises energy per mile, which raises the fuel bill
and forces a bigger (pricier) pack for the same 500-mile range.
"""

# %%
from dataclasses import replace

from etruck import VehicleParams
from etruck.economics import baseline_ranges
from etruck.payback import cruise_energy_per_mile, drag_vignette

ranges = baseline_ranges()
for cd in (0.40, 0.50, 0.63, 0.75):
    epm = cruise_energy_per_mile(replace(VehicleParams(), cd=cd))
    print(f"Cd {cd:.2f}: {epm:.3f} kWh/mi, pack {500 * epm:.0f} kWh, "
          f"mean payback {drag_vignette(cd, ranges, n=50_000, seed=0):.2f} yr")
