"""Energy per mile of a Class 8 electric truck over synthetic drive cycles.

Run with ``python3 demos/01_energy_per_mile.py``.
"""

# %% Build the three reference cycles and look at them
import numpy as np

from etruck import VehicleParams, reference_cycle, simulate_cycle, stitch_daily
from etruck.powertrain import RoadProfile, per_ton_mile

for kind in ("cruise", "composite", "custom"):
    c = reference_cycle(kind)
    s = c.stats()
    print(f"{kind:9s} {s.distance:6.1f} mi in {s.duration / 60:.0f} min, "
          f"mean {s.mean_speed:.1f} m/s, stopped {np.mean(c.v == 0):.0%} of samples")

# %% Energy per mile for a single truck and a platoon member
truck = VehicleParams()
for kind in ("cruise", "composite", "custom"):
    single = simulate_cycle(reference_cycle(kind), truck).energy_per_mile
    platoon = simulate_cycle(reference_cycle(kind), truck.platooned()).energy_per_mile
    print(f"{kind:9s} single {single:.3f} kWh/mi   platoon {platoon:.3f} kWh/mi")

# %% Grade matters far more than the cycle shape
cruise = reference_cycle("cruise")
for grade in (0.0, 0.005, 0.01, 0.02):
    e = simulate_cycle(cruise, truck, RoadProfile(grade, 0.10)).energy_per_mile
    print(f"{grade:.1%} grade on 10% of the road: {e:.3f} kWh/mi, {per_ton_mile(e, 40):.1f} Wh/ton-mi")

# %% A whole day of composite driving
day = stitch_daily(reference_cycle("composite"), 400)
trace = simulate_cycle(day, truck)
print(f"400-mile day: {trace.net_energy:.0f} kWh from the pack, peak draw {trace.power.max() / 1e3:.0f} kW")
