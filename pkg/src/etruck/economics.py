"""Parameter ranges, scenario sampling, discounting and cost per mile.

Scenarios are held column-wise in a :class:`ScenarioBatch` so that tens of
thousands of Monte Carlo draws evaluate as numpy array arithmetic. A batch
still behaves as a sequence of :class:`Scenario` records, and every cost
function accepts either form.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .battery import DEFAULT_RANGE_MI, replacement_odometer

# Interval-valued fields of ParameterRanges, in sampling order.
INTERVAL_FIELDS = (
    "diesel_price",
    "electricity_price",
    "e_efficiency",
    "d_efficiency",
    "d_additional_repairs",
    "annual_mileage",
    "general_op_costs",
    "battery_price",
)
SCALAR_FIELDS = (
    "d_initial_price",
    "e_initial_price",
    "replacement_fraction",
    "discount_rate",
    "lifetime_miles",
    "driving_days",
    "replacement_odometer",
    "pack_range",
)

SCENARIO_CSV_FIELDS = (
    ("diesel_price", "diesel_price_usd_per_gal"),
    ("electricity_price", "electricity_price_usd_per_kwh"),
    ("e_efficiency", "e_efficiency_kwh_per_mi"),
    ("d_efficiency", "d_efficiency_mpg"),
    ("d_additional_repairs", "d_additional_repairs_usd_per_mi"),
    ("annual_mileage", "annual_mileage_mi"),
    ("general_op_costs", "general_op_costs_usd_per_mi"),
    ("battery_price", "battery_price_usd_per_kwh"),
    ("d_initial_price", "d_initial_price_usd"),
    ("e_initial_price", "e_initial_price_usd"),
    ("needs_replacement", "needs_replacement"),
    ("replacement_year", "replacement_year_yr"),
)


def _interval(x) -> tuple[float, float]:
    if np.isscalar(x):
        return (float(x), float(x))
    lo, hi = x
    return (float(lo), float(hi))


@dataclass(frozen=True)
class ParameterRanges:
    """Bounds for every economic input. Intervals are ``(low, high)`` tuples.

    ``replacement_odometer`` is the mileage at which a replaced pack is
    bought; ``None`` means use the end of life of battery case C.
    """

    diesel_price: tuple = (2.21, 4.19)  # USD/gal
    electricity_price: tuple = (0.07, 0.12)  # USD/kWh
    e_efficiency: tuple = (1.7, 2.3)  # kWh/mi
    d_efficiency: tuple = (6.0, 8.5)  # mpg
    d_additional_repairs: tuple = (0.15, 0.16)  # USD/mi
    annual_mileage: tuple = (80_000.0, 100_000.0)  # mi/yr
    general_op_costs: tuple = (0.76, 0.81)  # USD/mi
    battery_price: tuple = (90.0, 120.0)  # USD/kWh
    d_initial_price: float = 150_000.0
    e_initial_price: float = 200_000.0
    replacement_fraction: float = 0.30
    discount_rate: float = 0.03
    lifetime_miles: float = 1_000_000.0
    driving_days: float = 260.0
    replacement_odometer: float | None = None
    pack_range: float = DEFAULT_RANGE_MI

    def __post_init__(self):
        for name in INTERVAL_FIELDS:
            lo, hi = _interval(getattr(self, name))
            if not lo <= hi:
                raise ValueError(f"{name}: empty interval ({lo}, {hi})")
            object.__setattr__(self, name, (lo, hi))
        if not 0 <= self.replacement_fraction <= 1:
            raise ValueError(f"replacement_fraction must be in [0, 1], got {self.replacement_fraction}")
        if self.discount_rate < 0:
            raise ValueError("discount_rate must be >= 0")
        if self.lifetime_miles <= 0 or self.driving_days <= 0:
            raise ValueError("lifetime_miles and driving_days must be positive")

    @property
    def price_differential(self) -> float:
        return self.e_initial_price - self.d_initial_price

    def midpoint(self, name: str) -> float:
        lo, hi = getattr(self, name)
        return 0.5 * (lo + hi)

    def resolved_replacement_odometer(self) -> float:
        if self.replacement_odometer is not None:
            return float(self.replacement_odometer)
        return replacement_odometer()

    def pinned(self, variable: str, value: float) -> "ParameterRanges":
        """Copy with ``variable`` collapsed to ``value``."""
        if variable in INTERVAL_FIELDS:
            return replace(self, **{variable: (float(value), float(value))})
        if variable in SCALAR_FIELDS:
            return replace(self, **{variable: float(value)})
        raise ValueError(
            f"unknown variable {variable!r}; valid names: {', '.join(INTERVAL_FIELDS + SCALAR_FIELDS)}"
        )

    def midpoints(self) -> "ParameterRanges":
        return replace(self, **{n: self.midpoint(n) for n in INTERVAL_FIELDS})


def baseline_ranges() -> ParameterRanges:
    return ParameterRanges()


VARIABLES = INTERVAL_FIELDS + SCALAR_FIELDS


@dataclass(frozen=True)
class Scenario:
    diesel_price: float
    electricity_price: float
    e_efficiency: float
    d_efficiency: float
    d_additional_repairs: float
    annual_mileage: float
    general_op_costs: float
    battery_price: float
    d_initial_price: float
    e_initial_price: float
    needs_replacement: bool
    replacement_year: float
    discount_rate: float = 0.03
    lifetime_miles: float = 1_000_000.0
    pack_range: float = DEFAULT_RANGE_MI


@dataclass(frozen=True, eq=False)
class ScenarioBatch:
    """Column-wise scenarios; indexing yields :class:`Scenario` records."""

    diesel_price: np.ndarray
    electricity_price: np.ndarray
    e_efficiency: np.ndarray
    d_efficiency: np.ndarray
    d_additional_repairs: np.ndarray
    annual_mileage: np.ndarray
    general_op_costs: np.ndarray
    battery_price: np.ndarray
    d_initial_price: np.ndarray
    e_initial_price: np.ndarray
    needs_replacement: np.ndarray
    replacement_year: np.ndarray
    discount_rate: float = 0.03
    lifetime_miles: float = 1_000_000.0
    pack_range: float = DEFAULT_RANGE_MI

    def __len__(self) -> int:
        return len(self.diesel_price)

    def __getitem__(self, i) -> Scenario:
        cols = {f.name: getattr(self, f.name) for f in fields(self)}
        row = {k: (v[i].item() if isinstance(v, np.ndarray) else v) for k, v in cols.items()}
        return Scenario(**row)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def columns(self) -> dict[str, np.ndarray]:
        return {n: getattr(self, n) for n, _ in SCENARIO_CSV_FIELDS}

    def with_columns(self, **cols) -> "ScenarioBatch":
        return replace(self, **cols)

    @classmethod
    def from_scenarios(cls, scenarios) -> "ScenarioBatch":
        scenarios = list(scenarios)
        if not scenarios:
            raise ValueError("need at least one scenario")
        first = scenarios[0]
        cols = {}
        for f in fields(cls):
            vals = [getattr(s, f.name) for s in scenarios]
            if f.name in ("discount_rate", "lifetime_miles", "pack_range"):
                if len(set(vals)) != 1:
                    raise ValueError(f"scenarios disagree on {f.name}")
                cols[f.name] = getattr(first, f.name)
            else:
                cols[f.name] = np.array(vals, dtype=bool if f.name == "needs_replacement" else float)
        return cls(**cols)


def as_batch(scenarios) -> ScenarioBatch:
    if isinstance(scenarios, ScenarioBatch):
        return scenarios
    if isinstance(scenarios, Scenario):
        return ScenarioBatch.from_scenarios([scenarios])
    return ScenarioBatch.from_scenarios(scenarios)


def sample_scenarios(
    ranges: ParameterRanges,
    n: int,
    grid_points: int = 11,
    seed: int | np.random.SeedSequence = 0,
) -> ScenarioBatch:
    """Draw ``n`` scenarios from the uniform grid over each interval.

    Variables are drawn independently, in ``INTERVAL_FIELDS`` order, from a
    single ``numpy`` generator; the replacement flag is drawn last with
    probability ``ranges.replacement_fraction``.
    """
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    rng = np.random.default_rng(seed)
    cols = {}
    for name in INTERVAL_FIELDS:
        lo, hi = getattr(ranges, name)
        grid = np.linspace(lo, hi, grid_points)
        cols[name] = grid[rng.integers(0, grid_points, size=n)]
    u = rng.random(n)
    needs = u < ranges.replacement_fraction
    odo = ranges.resolved_replacement_odometer()
    return ScenarioBatch(
        d_initial_price=np.full(n, ranges.d_initial_price),
        e_initial_price=np.full(n, ranges.e_initial_price),
        needs_replacement=needs,
        replacement_year=odo / cols["annual_mileage"],
        discount_rate=ranges.discount_rate,
        lifetime_miles=ranges.lifetime_miles,
        pack_range=ranges.pack_range,
        **cols,
    )


def midpoint_scenario(ranges: ParameterRanges, needs_replacement: bool) -> Scenario:
    m = {n: ranges.midpoint(n) for n in INTERVAL_FIELDS}
    return Scenario(
        d_initial_price=ranges.d_initial_price,
        e_initial_price=ranges.e_initial_price,
        needs_replacement=needs_replacement,
        replacement_year=ranges.resolved_replacement_odometer() / m["annual_mileage"],
        discount_rate=ranges.discount_rate,
        lifetime_miles=ranges.lifetime_miles,
        pack_range=ranges.pack_range,
        **m,
    )


# ------------------------------------------------------------ discounting

def present_value(amount, year, rate):
    if np.any(np.asarray(rate) < 0):
        raise ValueError("rate must be >= 0")
    return amount / (1.0 + rate) ** year


def capital_recovery_factor(rate, years):
    """Annuity factor ``r / (1 - (1+r)^-n)``; ``1/n`` when ``r == 0``."""
    rate = np.asarray(rate, dtype=float)
    years = np.asarray(years, dtype=float)
    if np.any(years <= 0):
        raise ValueError("years must be positive")
    if np.any(rate < 0):
        raise ValueError("rate must be >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        crf = np.where(rate == 0, 1.0 / years, rate / -np.expm1(-years * np.log1p(rate)))
    return crf if crf.ndim else float(crf)


# ----------------------------------------------------------- cost per mile

def pack_capacity(s) -> np.ndarray | float:
    """kWh of the pack needed for the scenario's design range."""
    return s.pack_range * s.e_efficiency


def replacement_pv(s):
    """Present value of the replacement pack, zero where none is needed."""
    cost = pack_capacity(s) * s.battery_price
    pv = present_value(cost, s.replacement_year, s.discount_rate)
    return np.where(s.needs_replacement, pv, 0.0)


def fuel_cost_per_mile(s, truck: str):
    if truck == "diesel":
        return s.diesel_price / s.d_efficiency
    if truck == "electric":
        return s.electricity_price * s.e_efficiency
    raise ValueError(f"truck must be 'diesel' or 'electric', got {truck!r}")


def cost_per_mile(s, truck: str):
    """Levelised total cost of ownership in USD per mile.

    Capital (plus any discounted pack replacement for the electric truck)
    is annuitised over ``lifetime_miles / annual_mileage`` years; fuel,
    general operating costs and the diesel repair premium are flat per-mile
    rates.
    """
    m = np.asarray(s.annual_mileage, dtype=float)
    if np.any(m <= 0):
        raise ValueError("annual mileage must be positive")
    years = s.lifetime_miles / m
    crf = capital_recovery_factor(s.discount_rate, years)
    if truck == "diesel":
        capital = s.d_initial_price
        extra = s.d_additional_repairs
    elif truck == "electric":
        capital = s.e_initial_price + replacement_pv(s)
        extra = 0.0
    else:
        raise ValueError(f"truck must be 'diesel' or 'electric', got {truck!r}")
    out = capital * crf / m + fuel_cost_per_mile(s, truck) + s.general_op_costs + extra
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class Distribution:
    samples: np.ndarray
    mean: float
    std: float
    min: float
    max: float
    median: float
    excluded: int = 0

    @classmethod
    def from_samples(cls, samples, excluded: int = 0) -> "Distribution":
        x = np.asarray(samples, dtype=float).ravel()
        if x.size == 0:
            nan = float("nan")
            return cls(x, nan, nan, nan, nan, nan, excluded)
        return cls(
            samples=x,
            mean=float(x.mean()),
            # exact zero for constant samples, which x.std() can miss by an ulp
            std=0.0 if x.min() == x.max() else float(x.std()),
            min=float(x.min()),
            max=float(x.max()),
            median=float(np.median(x)),
            excluded=excluded,
        )

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @property
    def sem(self) -> float:
        return self.std / np.sqrt(self.n) if self.n else float("nan")

    def histogram(self, bins: int = 50):
        return np.histogram(self.samples, bins=bins)


def cpm_distribution(scenarios, truck: str) -> Distribution:
    batch = as_batch(scenarios)
    if len(batch) == 0:
        raise ValueError("need at least one scenario")
    return Distribution.from_samples(np.atleast_1d(cost_per_mile(batch, truck)))


def write_scenarios_csv(batch: ScenarioBatch, path, extra: dict | None = None) -> None:
    """One row per scenario: sampled values, then ``cpm_diesel,cpm_electric``."""
    cols = batch.columns()
    names = [h for _, h in SCENARIO_CSV_FIELDS]
    data = [cols[k] for k, _ in SCENARIO_CSV_FIELDS]
    data[names.index("needs_replacement")] = cols["needs_replacement"].astype(int)
    names += ["cpm_diesel", "cpm_electric"]
    data += [np.atleast_1d(cost_per_mile(batch, "diesel")), np.atleast_1d(cost_per_mile(batch, "electric"))]
    for k, v in (extra or {}).items():
        names.append(k)
        data.append(v)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*data):
            w.writerow([_fmt(x) for x in row])


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_, int, np.integer)):
        return str(int(x))
    return repr(float(x))


def ranges_as_dict(r: ParameterRanges) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(r).items()}
