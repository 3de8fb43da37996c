"""Pack sizing and mileage-driven capacity fade for the A-F duty cases."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .drivecycle import reference_cycle, stitch_daily
from .powertrain import FLAT, RoadProfile, VehicleParams, simulate_cycle

DEFAULT_RANGE_MI = 500.0
EOL_FRACTION = 0.80
STOP_FRACTION = 0.70
MAX_DAILY_LOSS = 0.05
TRACE_CSV_HEADER = ("miles", "capacity_fraction", "available_range_mi")


class FadeConfigurationError(ValueError):
    """Fade parameters that would remove more than 5% of capacity in a day."""


@dataclass(frozen=True)
class PackSpec:
    capacity: float  # kWh
    price_per_kwh: float = 105.0
    initial_range: float = DEFAULT_RANGE_MI

    def __post_init__(self):
        if self.capacity <= 0 or self.initial_range <= 0:
            raise ValueError("pack capacity and initial range must be positive")

    @property
    def cost(self) -> float:
        return self.capacity * self.price_per_kwh


def size_pack(range_mi: float, energy_per_mile: float, price_per_kwh: float = 105.0) -> PackSpec:
    if range_mi <= 0:
        raise ValueError(f"range must be positive, got {range_mi}")
    if energy_per_mile <= 0:
        raise ValueError(f"energy per mile must be positive, got {energy_per_mile}")
    return PackSpec(range_mi * energy_per_mile, price_per_kwh, range_mi)


@dataclass(frozen=True)
class FadeParams:
    """Empirical fade law coefficients.

    Daily loss = base_loss_per_fec * FEC * (1 + charge_rate_penalty * max(0, C - 1))
    * (1 + grade_penalty * grade_fraction * grade_percent) + calendar_loss.
    """

    base_loss_per_fec: float = 3.0e-5
    charge_rate_penalty: float = 0.25
    grade_penalty: float = 34.0
    calendar_loss: float = 4.3e-5  # per day

    def __post_init__(self):
        for name in ("base_loss_per_fec", "charge_rate_penalty", "grade_penalty", "calendar_loss"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


NO_FADE = FadeParams(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CaseSpec:
    label: str
    platoon: bool
    cycle_kind: str
    road: RoadProfile
    charge_c_rate: float
    daily_distance: float  # miles

    def __post_init__(self):
        if self.charge_c_rate <= 0:
            raise ValueError("charge_c_rate must be positive")
        if self.daily_distance <= 0:
            raise ValueError("daily_distance must be positive")


@dataclass(frozen=True, eq=False)
class LifeTrace:
    case_label: str
    miles: np.ndarray
    capacity_fraction: np.ndarray
    initial_range: float

    @property
    def available_range(self) -> np.ndarray:
        return self.initial_range * self.capacity_fraction

    def to_csv(self, path, max_rows: int = 2000) -> None:
        idx = np.arange(len(self.miles))
        if len(idx) > max_rows:
            idx = np.unique(np.linspace(0, len(idx) - 1, max_rows).round().astype(int))
        rng = self.available_range
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_CSV_HEADER)
            for i in idx:
                w.writerow((f"{self.miles[i]:.1f}", f"{self.capacity_fraction[i]:.6f}", f"{rng[i]:.3f}"))


GRADED = RoadProfile(grade=0.01, grade_fraction=0.10)

# Daily distances are an interpretation: A/B/C run 400 mi/day, D/E/F 270 mi/day.
REFERENCE_CASES = (
    CaseSpec("A", True, "composite", FLAT, 1.0, 400.0),
    CaseSpec("B", False, "cruise", FLAT, 2.0, 400.0),
    CaseSpec("C", False, "custom", GRADED, 3.0, 400.0),
    CaseSpec("D", True, "composite", FLAT, 1.0, 270.0),
    CaseSpec("E", False, "cruise", FLAT, 2.0, 270.0),
    CaseSpec("F", False, "custom", GRADED, 3.0, 270.0),
)


def reference_case(label: str) -> CaseSpec:
    for case in REFERENCE_CASES:
        if case.label == label:
            return case
    raise KeyError(label)


def reference_pack() -> PackSpec:
    return size_pack(DEFAULT_RANGE_MI, 2.0)


def case_vehicle(case: CaseSpec, vehicle: VehicleParams) -> VehicleParams:
    return vehicle.platooned() if case.platoon and vehicle.platoon_energy_factor == 1.0 else vehicle


def daily_energy(case: CaseSpec, vehicle: VehicleParams, pack: PackSpec) -> float:
    """kWh drawn from the pack over one day of ``case`` driving."""
    day = stitch_daily(reference_cycle(case.cycle_kind), case.daily_distance)
    return simulate_cycle(day, case_vehicle(case, vehicle), case.road, pack.capacity).net_energy


def simulate_life(
    case: CaseSpec,
    vehicle: VehicleParams,
    pack: PackSpec,
    fade: FadeParams,
    max_miles: float = 1_200_000.0,
    energy_per_day: float | None = None,
) -> LifeTrace:
    """Day-by-day capacity fade until ``max_miles`` or capacity below 70%."""
    if max_miles <= 0:
        raise ValueError(f"max_miles must be positive, got {max_miles}")
    e_day = daily_energy(case, vehicle, pack) if energy_per_day is None else energy_per_day
    stress = (1.0 + fade.charge_rate_penalty * max(0.0, case.charge_c_rate - 1.0)) * max(
        0.0, 1.0 + fade.grade_penalty * case.road.grade_fraction * case.road.grade * 100.0
    )
    n_days = int(math.ceil(max_miles / case.daily_distance))
    frac = np.empty(n_days + 1)
    frac[0] = f = 1.0
    n = 0
    while n < n_days and f >= STOP_FRACTION:
        fec = e_day / (pack.capacity * f)
        loss = fade.base_loss_per_fec * fec * stress + fade.calendar_loss
        if loss > MAX_DAILY_LOSS:
            raise FadeConfigurationError(
                f"case {case.label}: fade parameters give {loss:.1%} capacity loss per day "
                f"(limit {MAX_DAILY_LOSS:.0%})"
            )
        f -= loss
        n += 1
        frac[n] = f
    miles = case.daily_distance * np.arange(n + 1, dtype=float)
    return LifeTrace(case.label, miles, frac[: n + 1], pack.initial_range)


def miles_to_eol(trace: LifeTrace, threshold: float = EOL_FRACTION) -> float | None:
    """Mileage where capacity first reaches ``threshold``; None if it never does."""
    below = np.nonzero(trace.capacity_fraction <= threshold)[0]
    if below.size == 0:
        return None
    i = int(below[0])
    if i == 0:
        return float(trace.miles[0])
    f0, f1 = trace.capacity_fraction[i - 1], trace.capacity_fraction[i]
    m0, m1 = trace.miles[i - 1], trace.miles[i]
    return float(m0 + (f0 - threshold) / (f0 - f1) * (m1 - m0))


def run_reference_cases(
    vehicle: VehicleParams | None = None,
    fade: FadeParams | None = None,
    pack: PackSpec | None = None,
    max_miles: float = 1_200_000.0,
) -> dict[str, LifeTrace]:
    vehicle = vehicle or VehicleParams()
    fade = fade if fade is not None else FadeParams()
    pack = pack or reference_pack()
    return {c.label: simulate_life(c, vehicle, pack, fade, max_miles) for c in REFERENCE_CASES}


@lru_cache(maxsize=32)
def replacement_odometer(
    vehicle: VehicleParams = VehicleParams(),
    fade: FadeParams = FadeParams(),
    case_label: str = "C",
) -> float:
    """Odometer reading at which the reference case needs a new pack."""
    trace = simulate_life(reference_case(case_label), vehicle, reference_pack(), fade)
    eol = miles_to_eol(trace)
    if eol is None:
        raise ValueError(f"case {case_label} never reaches end of life; set the replacement odometer explicitly")
    return eol


def write_traces(traces: dict[str, LifeTrace], out_dir) -> list[str]:
    paths = []
    for label, tr in traces.items():
        p = os.path.join(out_dir, f"cyclelife_case_{label}.csv")
        tr.to_csv(p)
        paths.append(p)
    return paths
