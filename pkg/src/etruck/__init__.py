"""Energy, battery-life and cost-of-ownership simulation for electric vs diesel semi-trucks."""

from .battery import (
    CaseSpec,
    FadeParams,
    LifeTrace,
    PackSpec,
    miles_to_eol,
    run_reference_cases,
    simulate_life,
    size_pack,
)
from .drivecycle import DriveCycle, load_cycle, reference_cycle, resample, stitch_daily, synth_cycle
from .economics import (
    Distribution,
    ParameterRanges,
    Scenario,
    ScenarioBatch,
    baseline_ranges,
    capital_recovery_factor,
    cost_per_mile,
    cpm_distribution,
    present_value,
    sample_scenarios,
)
from .payback import (
    PaybackResult,
    SensitivityPoint,
    drag_vignette,
    payback_distribution,
    payback_period,
    repairs_sensitivity,
    sensitivity_sweep,
)
from .powertrain import (
    EnergyTrace,
    RoadProfile,
    VehicleParams,
    diesel_energy_per_mile,
    per_ton_mile,
    regen_power,
    simulate_cycle,
    traction_power,
)

__version__ = "0.1.0"
