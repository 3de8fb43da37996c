"""Unit conversions used at the input/output boundary."""

METERS_PER_MILE = 1609.344
MPH = METERS_PER_MILE / 3600.0  # m/s per mph
KG_PER_LB = 0.45359237
LB_PER_US_TON = 2000.0
J_PER_KWH = 3.6e6

# kWh of chemical energy per US gallon of diesel
DIESEL_KWH_PER_GALLON = 37.95


def mph_to_mps(mph: float) -> float:
    return mph * MPH


def mps_to_mph(mps: float) -> float:
    return mps / MPH
