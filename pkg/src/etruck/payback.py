"""Payback periods, payback distributions and one-at-a-time sensitivity sweeps."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .battery import size_pack
from .drivecycle import reference_cycle
from .economics import (
    Distribution,
    ParameterRanges,
    Scenario,
    ScenarioBatch,
    VARIABLES,
    as_batch,
    fuel_cost_per_mile,
    replacement_pv,
    sample_scenarios,
)
from .powertrain import VehicleParams, simulate_cycle

SENSITIVITY_CSV_HEADER = (
    "variable",
    "pinned_value",
    "mean_payback_yr",
    "std_payback_yr",
    "frac_no_breakeven",
)


@dataclass(frozen=True, eq=False)
class PaybackResult:
    """Payback for one scenario (floats) or a batch (arrays).

    ``years`` and ``odometer_at_payback`` are NaN where ``broke_even`` is
    False.
    """

    years: float | np.ndarray
    odometer_at_payback: float | np.ndarray
    broke_even: bool | np.ndarray


@dataclass(frozen=True)
class SensitivityPoint:
    variable: str
    pinned_value: float
    mean_payback: float
    std_payback: float
    median_payback: float
    frac_no_breakeven: float


def annual_savings(s):
    """Undiscounted yearly operating savings of the electric truck (USD/yr)."""
    per_mile = (
        fuel_cost_per_mile(s, "diesel") + s.d_additional_repairs - fuel_cost_per_mile(s, "electric")
    )
    return per_mile * s.annual_mileage


def obligation(s):
    """Price differential plus the present value of any committed pack replacement."""
    return (s.e_initial_price - s.d_initial_price) + replacement_pv(s)


def _payback_arrays(b: ScenarioBatch):
    saving = np.asarray(annual_savings(b), dtype=float)
    owed = np.asarray(obligation(b), dtype=float)
    life = np.asarray(b.lifetime_miles / b.annual_mileage, dtype=float)
    r = b.discount_rate
    n = saving.shape[0]

    years = np.full(n, np.nan)
    cum = np.zeros(n)
    done = owed <= 0
    years[done] = 0.0
    active = (saving > 0) & ~done
    horizon = int(np.ceil(life.max())) if n else 0
    for k in range(1, horizon + 1):
        if not active.any():
            break
        flow = saving / (1.0 + r) ** k
        nxt = cum + flow
        hit = active & (nxt >= owed)
        years[hit] = (k - 1) + (owed[hit] - cum[hit]) / flow[hit]
        active &= ~hit
        cum = nxt
    if r == 0:
        # undiscounted flows are level, so the crossing is a single division
        level = np.isfinite(years) & ~done
        years[level] = owed[level] / saving[level]
    broke = np.isfinite(years) & (years <= life)
    years = np.where(broke, years, np.nan)
    return years, years * b.annual_mileage, broke


def payback_period(scenario) -> PaybackResult:
    """Years until discounted operating savings cover the electric truck's obligation.

    Savings for year ``k`` are discounted by ``(1+r)^-k`` and accrue linearly
    within the year. The obligation is the price differential plus, when the
    scenario needs a new pack, the present value of that pack, owed from day
    zero. No break-even within the truck's lifetime (or non-positive savings)
    gives ``broke_even=False``.
    """
    if isinstance(scenario, Scenario):
        y, odo, ok = _payback_arrays(as_batch(scenario))
        return PaybackResult(float(y[0]), float(odo[0]), bool(ok[0]))
    y, odo, ok = _payback_arrays(as_batch(scenario))
    return PaybackResult(y, odo, ok)


def payback_distribution(scenarios) -> Distribution:
    """Distribution of payback years; scenarios that never break even are
    left out of the statistics and counted in ``excluded``."""
    res = payback_period(as_batch(scenarios))
    ok = res.broke_even
    return Distribution.from_samples(res.years[ok], excluded=int((~ok).sum()))


def odometer_distribution(scenarios) -> Distribution:
    res = payback_period(as_batch(scenarios))
    ok = res.broke_even
    return Distribution.from_samples(res.odometer_at_payback[ok], excluded=int((~ok).sum()))


def _sweep_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(index)])


def _sweep_point(args) -> SensitivityPoint:
    ranges, variable, value, n, grid_points, seed = args
    d = payback_distribution(sample_scenarios(ranges.pinned(variable, value), n, grid_points, seed))
    total = d.n + d.excluded
    return SensitivityPoint(variable, float(value), d.mean, d.std, d.median, d.excluded / total)


def sensitivity_sweep(
    ranges: ParameterRanges,
    variable: str,
    values,
    n: int = 50_000,
    seed: int = 0,
    grid_points: int = 11,
    workers: int = 1,
) -> list[SensitivityPoint]:
    """Pin ``variable`` to each of ``values`` in turn, others at ``ranges``.

    Point ``i`` samples with ``SeedSequence([seed, i])`` so results do not
    depend on ``workers``.
    """
    if variable not in VARIABLES:
        raise ValueError(f"unknown variable {variable!r}; valid names: {', '.join(VARIABLES)}")
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    # resolve once so worker processes do not each rerun the battery model
    ranges = replace(ranges, replacement_odometer=ranges.resolved_replacement_odometer())
    jobs = [(ranges, variable, v, n, grid_points, _sweep_seed(seed, i)) for i, v in enumerate(values)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


def repairs_sensitivity(
    ranges: ParameterRanges, pinned_repairs: float, n: int = 50_000, seed: int = 0, grid_points: int = 11
) -> float:
    if pinned_repairs < 0:
        raise ValueError("pinned repairs differential must be >= 0")
    batch = sample_scenarios(ranges.pinned("d_additional_repairs", pinned_repairs), n, grid_points, seed)
    return payback_distribution(batch).mean


def cruise_energy_per_mile(vehicle: VehicleParams) -> float:
    return simulate_cycle(reference_cycle("cruise"), vehicle).energy_per_mile


def drag_vignette_batch(
    cd: float,
    ranges: ParameterRanges,
    n: int = 50_000,
    seed: int = 0,
    grid_points: int = 11,
    vehicle: VehicleParams | None = None,
) -> ScenarioBatch:
    """Scenarios for a truck redesigned around drag coefficient ``cd``.

    Efficiency comes from the cruise cycle at ``cd``; the pack is resized for
    the design range and priced at each scenario's battery price, while the
    non-battery part of the electric price premium is held at its baseline.
    """
    if not 0.2 <= cd <= 0.8:
        raise ValueError(f"drag coefficient must be in [0.2, 0.8], got {cd}")
    vehicle = vehicle or VehicleParams()
    e_base = cruise_energy_per_mile(replace(vehicle, cd=0.40))
    e_new = cruise_energy_per_mile(replace(vehicle, cd=cd))
    rng_mid = ranges.midpoint("battery_price")
    base_pack_cost = size_pack(ranges.pack_range, e_base, rng_mid).cost
    premium = ranges.e_initial_price - ranges.d_initial_price - base_pack_cost
    batch = sample_scenarios(ranges.pinned("e_efficiency", e_new), n, grid_points, seed)
    new_pack_kwh = size_pack(ranges.pack_range, e_new).capacity
    e_price = batch.d_initial_price + premium + new_pack_kwh * batch.battery_price
    return batch.with_columns(e_initial_price=e_price)


def drag_vignette(
    cd: float,
    ranges: ParameterRanges,
    n: int = 50_000,
    seed: int = 0,
    grid_points: int = 11,
    vehicle: VehicleParams | None = None,
) -> float:
    """Mean payback (years) of the ``cd`` redesign."""
    return payback_distribution(drag_vignette_batch(cd, ranges, n, seed, grid_points, vehicle)).mean


def write_sensitivity_csv(points: list[SensitivityPoint], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SENSITIVITY_CSV_HEADER)
        for p in points:
            w.writerow(
                (p.variable, repr(p.pinned_value), repr(p.mean_payback), repr(p.std_payback), repr(p.frac_no_breakeven))
            )


def write_payback_csv(batch: ScenarioBatch, path) -> None:
    res = payback_period(batch)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("scenario", "needs_replacement", "annual_savings_usd", "obligation_usd",
                    "payback_yr", "odometer_at_payback_mi", "broke_even"))
        sav = np.asarray(annual_savings(batch))
        owed = np.asarray(obligation(batch))
        for i in range(len(batch)):
            w.writerow((i, int(batch.needs_replacement[i]), repr(float(sav[i])), repr(float(owed[i])),
                        repr(float(res.years[i])), repr(float(res.odometer_at_payback[i])), int(res.broke_even[i])))

