"""Road-load power and energy consumption of a battery-electric semi-truck."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .drivecycle import DriveCycle, resample
from .units import DIESEL_KWH_PER_GALLON, J_PER_KWH

PLATOON_ENERGY_FACTOR = 0.85
REGEN_C_RATE_LIMIT = 2.0


@dataclass(frozen=True)
class VehicleParams:
    cd: float = 0.40
    frontal_area: float = 10.0  # m^2
    crr: float = 0.0075
    mass: float = 36360.0  # kg, 80,000 lb gross
    eta_bw: float = 0.88  # battery-to-wheels
    eta_brk: float = 0.65  # regenerative braking capture
    air_density: float = 1.2  # kg/m^3
    gravity: float = 9.81  # m/s^2
    platoon_energy_factor: float = 1.0

    def __post_init__(self):
        if self.cd <= 0 or self.frontal_area <= 0 or self.mass <= 0:
            raise ValueError("cd, frontal_area and mass must be positive")
        if self.crr < 0:
            raise ValueError("crr must be >= 0")
        if not 0 < self.eta_bw <= 1:
            raise ValueError(f"eta_bw must be in (0, 1], got {self.eta_bw}")
        if not 0 <= self.eta_brk <= 1:
            raise ValueError(f"eta_brk must be in [0, 1], got {self.eta_brk}")
        if not 0 < self.platoon_energy_factor <= 1:
            raise ValueError(
                f"platoon_energy_factor must be in (0, 1], got {self.platoon_energy_factor}"
            )

    def platooned(self, factor: float = PLATOON_ENERGY_FACTOR) -> "VehicleParams":
        return replace(self, platoon_energy_factor=factor)


@dataclass(frozen=True)
class RoadProfile:
    """Uniform grade ``grade`` weighted by ``grade_fraction`` of the trip."""

    grade: float = 0.0
    grade_fraction: float = 0.0

    def __post_init__(self):
        if not 0 <= self.grade_fraction <= 1:
            raise ValueError(f"grade_fraction must be in [0, 1], got {self.grade_fraction}")
        if abs(self.grade) > 0.10:
            raise ValueError(f"|grade| must be <= 0.10, got {self.grade}")


FLAT = RoadProfile()


@dataclass(frozen=True, eq=False)
class EnergyTrace:
    time: np.ndarray  # s
    power: np.ndarray  # W at battery terminals, negative = charging
    net_energy: float  # kWh
    distance: float  # miles

    @property
    def energy_per_mile(self) -> float:
        return self.net_energy / self.distance


def traction_power(v, dvdt, params: VehicleParams, road: RoadProfile = FLAT):
    """Battery power (W) needed to follow speed ``v`` with acceleration ``dvdt``.

    Aerodynamic, rolling, grade (weighted by the road's grade fraction) and
    inertial terms, divided by the battery-to-wheels efficiency. Works on
    scalars or arrays.
    """
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise ValueError("speed must be >= 0")
    p = params
    aero = 0.5 * p.air_density * p.cd * p.frontal_area * v**3
    rolling = p.crr * p.mass * p.gravity * v
    grade = road.grade_fraction * p.mass * p.gravity * v * road.grade
    inertia = p.mass * v * dvdt
    out = (aero + rolling + grade + inertia) / p.eta_bw
    return out if out.ndim else float(out)


def regen_cap_watts(pack_capacity: float) -> float:
    return REGEN_C_RATE_LIMIT * pack_capacity * 1000.0


def regen_power(v, dvdt, params: VehicleParams, pack_capacity: float):
    """Charging power (W, negative) recovered while decelerating.

    Magnitude is ``|m v dv/dt| * eta_bw * eta_brk`` clipped at the 2C
    charge-rate limit of a ``pack_capacity`` kWh pack.
    """
    v = np.asarray(v, dtype=float)
    dvdt = np.asarray(dvdt, dtype=float)
    if np.any(dvdt >= 0):
        raise ValueError("regen_power needs dvdt < 0; use traction_power otherwise")
    if np.any(v < 0):
        raise ValueError("speed must be >= 0")
    if pack_capacity <= 0:
        raise ValueError(f"pack capacity must be positive, got {pack_capacity}")
    mag = np.abs(params.mass * v * dvdt) * params.eta_bw * params.eta_brk
    out = -np.minimum(mag, regen_cap_watts(pack_capacity))
    out = out + 0.0  # normalise -0.0
    return out if out.ndim else float(out)


def power_trace(
    cycle: DriveCycle,
    params: VehicleParams,
    road: RoadProfile,
    pack_capacity: float,
) -> np.ndarray:
    """Per-sample battery power on ``cycle`` as given (no resampling)."""
    t, v = cycle.t, cycle.v
    dvdt = np.gradient(v, t, edge_order=1)
    p = np.empty_like(v)
    decel = dvdt < 0
    drive = ~decel
    p[drive] = traction_power(v[drive], dvdt[drive], params, road)
    if decel.any():
        p[decel] = regen_power(v[decel], dvdt[decel], params, pack_capacity)
    # downhill coasting with net negative road load is treated as braking
    neg = drive & (p < 0)
    if neg.any():
        p[neg] = -np.minimum(-p[neg] * params.eta_bw**2 * params.eta_brk, regen_cap_watts(pack_capacity))
    return p


def simulate_cycle(
    cycle: DriveCycle,
    params: VehicleParams,
    road: RoadProfile = FLAT,
    pack_capacity: float = 1000.0,
    dt: float | None = 1.0,
) -> EnergyTrace:
    """Integrate battery power over ``cycle`` and report kWh per mile.

    The cycle is first resampled to a uniform ``dt`` grid (``None`` keeps it
    as is); accelerations come from centred differences. Net energy and the
    power series are scaled by the vehicle's platoon energy factor.
    """
    if cycle.distance_m <= 0:
        raise ValueError(f"cycle {cycle.name!r} covers zero distance")
    if dt is not None and dt < cycle.duration:
        cycle = resample(cycle, dt)
    p = power_trace(cycle, params, road, pack_capacity) * params.platoon_energy_factor
    energy_j = float(np.trapezoid(p, cycle.t))
    return EnergyTrace(
        time=cycle.t,
        power=p,
        net_energy=energy_j / J_PER_KWH,
        distance=cycle.distance,
    )


def diesel_energy_per_mile(mpg: float) -> float:
    """Chemical energy burned per mile (kWh/mi) at fuel economy ``mpg``."""
    if mpg <= 0:
        raise ValueError(f"mpg must be positive, got {mpg}")
    return DIESEL_KWH_PER_GALLON / mpg


def per_ton_mile(kwh_per_mile: float, gross_weight: float) -> float:
    """Wh per ton-mile for a vehicle of ``gross_weight`` US tons."""
    if gross_weight <= 0:
        raise ValueError(f"gross weight must be positive, got {gross_weight}")
    return kwh_per_mile * 1000.0 / gross_weight
