import csv
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etruck.economics import baseline_ranges, midpoint_scenario, sample_scenarios
from etruck.payback import (
    SENSITIVITY_CSV_HEADER,
    annual_savings,
    drag_vignette,
    obligation,
    odometer_distribution,
    payback_distribution,
    payback_period,
    repairs_sensitivity,
    sensitivity_sweep,
    write_sensitivity_csv,
)

RANGES = replace(baseline_ranges(), replacement_odometer=330_000.0)
SEED = 11


def mean_payback(ranges, n=20_000, seed=SEED):
    return payback_distribution(sample_scenarios(ranges, n, seed=seed)).mean


class TestPaybackPeriod:
    def test_midpoint_without_replacement(self):
        res = payback_period(midpoint_scenario(RANGES, False))
        assert res.broke_even
        assert res.years == pytest.approx(1.57, abs=0.4)

    def test_midpoint_with_replacement(self):
        res = payback_period(midpoint_scenario(RANGES, True))
        assert res.broke_even
        assert res.years == pytest.approx(5.25, abs=0.75)

    def test_no_savings(self):
        s = replace(midpoint_scenario(RANGES, False), electricity_price=1.0)
        assert annual_savings(s) <= 0
        res = payback_period(s)
        assert res.broke_even is False
        assert np.isnan(res.years) and np.isnan(res.odometer_at_payback)

    def test_beyond_lifetime(self):
        s = replace(midpoint_scenario(RANGES, False), e_initial_price=2_000_000.0)
        assert payback_period(s).broke_even is False

    def test_hand_discounted_crossing(self):
        s = replace(midpoint_scenario(RANGES, False), e_initial_price=170_000.0)
        save, owed = annual_savings(s), obligation(s)
        # first year's discounted saving already exceeds the differential
        flow1 = save / 1.03
        assert flow1 > owed
        assert payback_period(s).years == pytest.approx(owed / flow1, rel=1e-12)

    def test_second_year_crossing(self):
        s = replace(midpoint_scenario(RANGES, False), e_initial_price=150_000.0 + 60_000.0)
        save, owed = annual_savings(s), obligation(s)
        f1, f2 = save / 1.03, save / 1.03**2
        assert f1 < owed <= f1 + f2
        assert payback_period(s).years == pytest.approx(1 + (owed - f1) / f2, rel=1e-12)

    def test_zero_rate_closed_form(self):
        r = replace(RANGES, discount_rate=0.0, replacement_fraction=0.0)
        b = sample_scenarios(r, 2000, seed=2)
        res = payback_period(b)
        expected = 50_000.0 / annual_savings(b)
        assert np.all(res.broke_even)
        assert np.array_equal(res.years, expected)

    def test_odometer_is_years_times_mileage(self):
        b = sample_scenarios(RANGES, 5000, seed=3)
        res = payback_period(b)
        ok = res.broke_even
        assert np.array_equal(res.odometer_at_payback[ok], res.years[ok] * b.annual_mileage[ok])

    def test_general_op_costs_do_not_matter(self):
        b = sample_scenarios(RANGES, 5000, seed=4)
        bumped = b.with_columns(general_op_costs=b.general_op_costs * 1.7 + 0.3)
        x, y = payback_period(b), payback_period(bumped)
        assert x.years.tobytes() == y.years.tobytes()
        assert x.broke_even.tobytes() == y.broke_even.tobytes()

    def test_scalar_matches_batch(self):
        b = sample_scenarios(RANGES, 30, seed=5)
        col = payback_period(b).years
        assert [payback_period(s).years for s in b] == pytest.approx(col.tolist(), nan_ok=True)


class TestDistribution:
    def test_identical_scenarios(self):
        s = midpoint_scenario(RANGES, False)
        d = payback_distribution([s] * 7)
        assert d.std == 0.0 and d.n == 7

    def test_excluded_counted(self):
        good = midpoint_scenario(RANGES, False)
        bad = replace(good, electricity_price=1.0)
        d = payback_distribution([good, bad, good])
        assert d.n == 2 and d.excluded == 1

    def test_odometer_scale(self):
        d = odometer_distribution(sample_scenarios(RANGES, 20_000, seed=SEED))
        assert 150_000 <= d.mean <= 250_000


class TestMonotone:
    # matched seeds: only the pinned variable differs between the two batches
    @pytest.mark.parametrize(
        "name,lo,hi,direction",
        [
            ("e_initial_price", 190_000, 220_000, +1),
            ("electricity_price", 0.07, 0.12, +1),
            ("replacement_fraction", 0.1, 0.6, +1),
            ("diesel_price", 2.5, 4.0, -1),
            ("d_additional_repairs", 0.0, 0.16, -1),
            ("annual_mileage", 70_000, 110_000, -1),
        ],
    )
    def test_direction(self, name, lo, hi, direction):
        a = mean_payback(RANGES.pinned(name, lo))
        b = mean_payback(RANGES.pinned(name, hi))
        assert direction * (b - a) > 0

    def test_rf_interpolates(self):
        n = 50_000
        m = {rf: payback_distribution(sample_scenarios(RANGES.pinned("replacement_fraction", rf), n, seed=SEED))
             for rf in (0.0, 0.3, 1.0)}
        predicted = 0.7 * m[0.0].mean + 0.3 * m[1.0].mean
        sigma = np.sqrt(m[0.3].sem ** 2 + 0.49 * m[0.0].sem ** 2 + 0.09 * m[1.0].sem ** 2)
        assert abs(m[0.3].mean - predicted) <= 3 * sigma


@settings(max_examples=15, deadline=None)
@given(st.floats(0.07, 0.20), st.floats(0.0, 0.03))
def test_electricity_price_property(price, bump):
    a = mean_payback(RANGES.pinned("electricity_price", price), n=4000)
    b = mean_payback(RANGES.pinned("electricity_price", price + bump), n=4000)
    assert b >= a - 1e-12


class TestSweep:
    def test_unknown_variable(self):
        with pytest.raises(ValueError, match="valid names"):
            sensitivity_sweep(RANGES, "nonsuch", [1.0])

    def test_empty_values(self):
        with pytest.raises(ValueError):
            sensitivity_sweep(RANGES, "annual_mileage", [])

    def test_points(self):
        pts = sensitivity_sweep(RANGES, "annual_mileage", [60_000, 90_000, 120_000], n=5000, seed=1)
        assert [p.pinned_value for p in pts] == [60_000, 90_000, 120_000]
        means = [p.mean_payback for p in pts]
        assert means[0] > means[1] > means[2]
        assert all(0 <= p.frac_no_breakeven < 0.01 for p in pts)

    def test_workers_do_not_change_results(self):
        args = (RANGES, "electricity_price", [0.08, 0.1, 0.14], 3000, 7)
        serial = sensitivity_sweep(*args, workers=1)
        pooled = sensitivity_sweep(*args, workers=2)
        assert serial == pooled

    def test_csv(self, tmp_path):
        pts = sensitivity_sweep(RANGES, "diesel_price", [3.0, 4.0], n=1000)
        p = tmp_path / "s.csv"
        write_sensitivity_csv(pts, p)
        with open(p) as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == SENSITIVITY_CSV_HEADER
        assert float(rows[2][2]) == pts[1].mean_payback


class TestRepairs:
    def test_zero_beats_five_cents(self):
        assert repairs_sensitivity(RANGES, 0.0, n=20_000, seed=SEED) > repairs_sensitivity(RANGES, 0.05, n=20_000, seed=SEED)

    def test_baseline_value(self):
        assert repairs_sensitivity(RANGES, 0.155, n=50_000, seed=SEED) == pytest.approx(2.71, abs=0.5)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            repairs_sensitivity(RANGES, -0.01)


class TestDrag:
    def test_monotone(self):
        vals = [drag_vignette(cd, RANGES, n=20_000, seed=SEED) for cd in (0.40, 0.50, 0.63)]
        assert vals[0] < vals[1] < vals[2]

    def test_baseline_drag_recovers_baseline(self):
        assert drag_vignette(0.40, RANGES, n=50_000, seed=SEED) == pytest.approx(2.71, abs=0.5)

    @pytest.mark.parametrize("cd", [0.1, 0.9])
    def test_range_guard(self, cd):
        with pytest.raises(ValueError):
            drag_vignette(cd, RANGES, n=10)
