"""End-to-end acceptance checks at 50,000 Monte Carlo samples and a fixed seed.

Each test records one PASS/FAIL line listing every sub-check with its value,
then fails if any sub-check missed its band.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from etruck.battery import (
    REFERENCE_CASES,
    FadeParams,
    case_vehicle,
    miles_to_eol,
    reference_pack,
    run_reference_cases,
    simulate_life,
    size_pack,
)
from etruck.cli import main
from etruck.drivecycle import reference_cycle, stitch_daily
from etruck.economics import (
    baseline_ranges,
    capital_recovery_factor,
    cpm_distribution,
    present_value,
    sample_scenarios,
)
from etruck.payback import (
    annual_savings,
    drag_vignette,
    odometer_distribution,
    payback_distribution,
    payback_period,
    repairs_sensitivity,
)
from etruck.powertrain import VehicleParams, diesel_energy_per_mile, per_ton_mile, simulate_cycle, traction_power

N = 50_000
SEED = 0
TIME_LIMIT_S = 60.0


def within(value, target, tol):
    return abs(value - target) <= tol


def band(label, value, target, tol, fmt=".3f"):
    return (f"{label} {value:{fmt}} in {target:{fmt}}+/-{tol:{fmt}}", within(value, target, tol))


@pytest.fixture(scope="module")
def ranges():
    return baseline_ranges()


def mean_payback(r):
    return payback_distribution(sample_scenarios(r, N, seed=SEED)).mean


@pytest.fixture(autouse=True)
def time_limit():
    start = time.perf_counter()
    yield
    assert time.perf_counter() - start < TIME_LIMIT_S


def test_energy_band(record_criterion):
    vehicle = VehicleParams()
    checks = []
    for case in REFERENCE_CASES:
        day = stitch_daily(reference_cycle(case.cycle_kind), case.daily_distance)
        epm = simulate_cycle(day, case_vehicle(case, vehicle), case.road, reference_pack().capacity).energy_per_mile
        checks.append(band(f"case {case.label} kWh/mi", epm, 2.05, 0.32))
        checks.append(band(f"case {case.label} Wh/ton-mi", per_ton_mile(epm, 40), 51.25, 8.0, ".2f"))
    assert record_criterion(1, checks)


def test_pack_sizing(record_criterion):
    epm = simulate_cycle(reference_cycle("cruise"), VehicleParams()).energy_per_mile
    cap = size_pack(500, epm).capacity
    assert record_criterion(2, [band("pack kWh", cap, 1000.0, 100.0, ".1f")])


def test_diesel_equivalence(record_criterion):
    lo, hi = diesel_energy_per_mile(8.5), diesel_energy_per_mile(6.0)
    checks = [band("6 mpg kWh/mi", hi, 6.3, 0.05), band("8.5 mpg kWh/mi", lo, 4.45, 0.05)]
    assert record_criterion(3, checks)


def test_cycle_life_properties(record_criterion):
    traces = run_reference_cases()
    checks = []
    for label in "AB":
        tr = traces[label]
        f = float(np.interp(1_000_000, tr.miles, tr.capacity_fraction))
        checks.append((f"case {label} capacity at 1M {f:.3f} >= 0.80", tr.miles[-1] >= 1e6 and f >= 0.80))
    for label in "CDEF":
        eol = miles_to_eol(traces[label])
        checks.append((f"case {label} EOL {eol:,.0f} < 1M", eol is not None and eol < 1e6))
    mono = all(np.all(np.diff(tr.capacity_fraction) <= 0) for tr in traces.values())
    checks.append(("fade monotone nonincreasing", bool(mono)))
    c_rate_ok = True
    pack, fade = reference_pack(), FadeParams()
    for case in REFERENCE_CASES:
        e_day = 2.0 * case.daily_distance
        eols = [miles_to_eol(simulate_life(replace(case, charge_c_rate=c), VehicleParams(), pack, fade, energy_per_day=e_day))
                for c in (0.5, 1.0, 1.5, 2.0, 3.0, 4.0)]
        eols = [np.inf if e is None else e for e in eols]
        c_rate_ok &= all(b <= a for a, b in zip(eols, eols[1:]))
    checks.append(("higher C-rate never extends EOL", bool(c_rate_ok)))
    assert record_criterion(4, checks)


def test_tco_distributions(record_criterion, ranges):
    base = sample_scenarios(ranges, N, seed=SEED)
    d = cpm_distribution(base, "diesel")
    e = {}
    for rf in (0.0, 0.3, 0.5, 1.0):
        e[rf] = cpm_distribution(sample_scenarios(ranges.pinned("replacement_fraction", rf), N, seed=SEED), "electric")
    predicted = 0.5 * e[0.0].mean + 0.5 * e[1.0].mean
    sigma = np.sqrt(e[0.5].sem ** 2 + 0.25 * e[0.0].sem ** 2 + 0.25 * e[1.0].sem ** 2)
    checks = [
        band("diesel", d.mean, 1.48, 0.10),
        band("electric R_f=0.30", e[0.3].mean, 1.22, 0.06),
        band("electric R_f=0", e[0.0].mean, 1.18, 0.07),
        band("electric R_f=1", e[1.0].mean, 1.30, 0.07),
        (f"mixture gap {abs(e[0.5].mean - predicted):.2e} <= 3 sigma {3 * sigma:.2e}",
         abs(e[0.5].mean - predicted) <= 3 * sigma),
    ]
    assert record_criterion(5, checks)


def test_payback_headline(record_criterion, ranges):
    base = sample_scenarios(ranges, N, seed=SEED)
    odo = odometer_distribution(base).mean
    checks = [
        band("baseline yr", payback_distribution(base).mean, 2.71, 0.5, ".2f"),
        band("R_f=0 yr", mean_payback(ranges.pinned("replacement_fraction", 0.0)), 1.57, 0.4, ".2f"),
        band("R_f=1 yr", mean_payback(ranges.pinned("replacement_fraction", 1.0)), 5.25, 0.75, ".2f"),
        band("R_f=0.5 yr", mean_payback(ranges.pinned("replacement_fraction", 0.5)), 3.5, 0.5, ".2f"),
        band("odometer mi", odo, 200_000, 50_000, ",.0f"),
    ]
    assert record_criterion(6, checks)


def test_sensitivity_anchors(record_criterion, ranges):
    baseline = mean_payback(ranges)
    platoon_drop = baseline - mean_payback(ranges.pinned("e_efficiency", 1.6))
    checks = [
        band("electricity 0.14 yr", mean_payback(ranges.pinned("electricity_price", 0.14)), 5.0, 1.0, ".2f"),
        band("differential 80k yr", mean_payback(ranges.pinned("e_initial_price", ranges.d_initial_price + 80_000)),
             3.8, 0.5, ".2f"),
        band("mileage 60k yr", mean_payback(ranges.pinned("annual_mileage", 60_000)), 3.2, 0.5, ".2f"),
        band("mileage 120k yr", mean_payback(ranges.pinned("annual_mileage", 120_000)), 2.0, 0.5, ".2f"),
        band("repairs 0.05 yr", repairs_sensitivity(ranges, 0.05, N, SEED), 4.2, 0.6, ".2f"),
        band("platoon 1.6 kWh/mi reduction yr", platoon_drop, 0.3, 0.2, ".2f"),
    ]
    assert record_criterion(7, checks)


def test_drag_vignette(record_criterion, ranges):
    vals = {cd: drag_vignette(cd, ranges, N, SEED) for cd in (0.40, 0.50, 0.63)}
    checks = [
        band("Cd 0.63 yr", vals[0.63], 8.45, 1.5, ".2f"),
        (f"monotone {vals[0.40]:.2f} < {vals[0.50]:.2f} < {vals[0.63]:.2f}", vals[0.40] < vals[0.50] < vals[0.63]),
    ]
    assert record_criterion(8, checks)


def test_exactness(record_criterion, ranges, tmp_path, capsys):
    checks = []
    p0 = traction_power(0.0, 0.0, VehicleParams())
    checks.append(("traction_power(0) == 0", p0 == 0.0))
    checks.append(("CRF(0,n) == 1/n", all(capital_recovery_factor(0.0, n) == 1.0 / n for n in range(1, 61))))
    pv_ok = (
        present_value(100.0, 0, 0.03) == 100.0
        and present_value(250.0, 9, 0.0) == 250.0
        and round(present_value(100_000, 5, 0.03), 2) == 86_260.88
    )
    checks.append(("PV identities", pv_ok))

    b = sample_scenarios(ranges, N, seed=SEED)
    x = payback_period(b)
    y = payback_period(b.with_columns(general_op_costs=b.general_op_costs + 0.37))
    checks.append(("general op costs leave payback bit-identical",
                   x.years.tobytes() == y.years.tobytes() and x.broke_even.tobytes() == y.broke_even.tobytes()))

    z = sample_scenarios(replace(ranges, discount_rate=0.0, replacement_fraction=0.0), N, seed=SEED)
    zy = payback_period(z).years
    checks.append(("zero-rate payback == differential / savings",
                   bool(np.array_equal(zy, ranges.price_differential / annual_savings(z)))))

    outs = []
    for name, workers in (("a", 1), ("b", 1), ("c", 2)):
        d = tmp_path / name
        code = main(["--seed", str(SEED), "--samples", "5000", "--workers", str(workers), "--out", str(d),
                     "sensitivity", "--variable", "annual_mileage", "--values", "60000,90000,120000"])
        code |= main(["--seed", str(SEED), "--samples", "5000", "--out", str(d), "tco"])
        outs.append((code, (d / "sensitivity_annual_mileage.csv").read_bytes(), (d / "tco_scenarios.csv").read_bytes()))
    capsys.readouterr()
    checks.append(("fixed-seed reruns byte-identical across worker counts",
                   all(o[0] == 0 for o in outs) and outs[0][1:] == outs[1][1:] == outs[2][1:]))
    assert record_criterion(9, checks)
