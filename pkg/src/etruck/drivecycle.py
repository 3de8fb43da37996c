"""Speed-vs-time drive cycles: loading, validation, synthesis, resampling.

All internal quantities are SI (seconds, m/s). Distances reported in
:class:`CycleStats` are miles.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import BinaryIO, TextIO, Union

import numpy as np

from .units import METERS_PER_MILE

CSV_HEADER = ("t_s", "v_mps")

# Synthetic cycle shape constants (m/s^2, s)
ACCEL_RATE = 0.4
DECEL_RATE = 0.6
COMPOSITE_BLOCK_S = 600.0
CUSTOM_BLOCK_S = 1800.0


class CycleError(ValueError):
    """Base class for drive-cycle problems."""


class CycleParseError(CycleError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CycleValidationError(CycleError):
    pass


@dataclass(frozen=True)
class CycleStats:
    distance: float  # miles
    duration: float  # s
    mean_speed: float  # m/s
    max_accel: float  # m/s^2


@dataclass(frozen=True, eq=False)
class DriveCycle:
    """Immutable speed trace. ``t`` and ``v`` are read-only float arrays."""

    t: np.ndarray
    v: np.ndarray
    name: str = "cycle"

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        v = np.array(self.v, dtype=float)
        _validate(t, v)
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)

    def __len__(self) -> int:
        return len(self.t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DriveCycle):
            return NotImplemented
        return np.array_equal(self.t, other.t) and np.array_equal(self.v, other.v)

    __hash__ = None

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    @property
    def distance_m(self) -> float:
        return float(np.trapezoid(self.v, self.t))

    @property
    def distance(self) -> float:
        """Trapezoidal distance in miles."""
        return self.distance_m / METERS_PER_MILE

    def stats(self) -> CycleStats:
        dt = np.diff(self.t)
        accel = np.diff(self.v) / dt
        return CycleStats(
            distance=self.distance,
            duration=self.duration,
            mean_speed=self.distance_m / self.duration,
            max_accel=float(accel.max()) if accel.size else 0.0,
        )


def _validate(t: np.ndarray, v: np.ndarray) -> None:
    if t.ndim != 1 or v.ndim != 1 or t.shape != v.shape:
        raise CycleValidationError("time and speed must be 1-D arrays of equal length")
    if t.size < 2:
        raise CycleValidationError(f"need at least 2 samples, got {t.size}")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
        raise CycleValidationError("non-finite time or speed value")
    if t[0] != 0.0:
        raise CycleValidationError(f"first time must be 0, got {t[0]}")
    bad = np.nonzero(np.diff(t) <= 0)[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise CycleValidationError(
            f"time not strictly increasing at sample {i} (t={t[i]} after t={t[i - 1]})"
        )
    neg = np.nonzero(v < 0)[0]
    if neg.size:
        i = int(neg[0])
        raise CycleValidationError(f"negative speed at sample {i} (t={t[i]}, v={v[i]})")


# --------------------------------------------------------------------- I/O

Source = Union[str, os.PathLike, BinaryIO, TextIO, bytes]


def _text_stream(source: Source) -> TextIO:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8", newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def load_cycle(source: Source, name: str | None = None) -> DriveCycle:
    """Parse a ``t_s,v_mps`` CSV into a validated :class:`DriveCycle`.

    ``source`` may be a path, raw bytes, or a binary/text stream.
    """
    if name is None:
        name = os.path.splitext(os.path.basename(os.fspath(source)))[0] if isinstance(
            source, (str, os.PathLike)) else "cycle"
    stream = _text_stream(source)
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None:
            raise CycleParseError(1, "empty file, expected header 't_s,v_mps'")
        if tuple(h.strip().lstrip("﻿") for h in header) != CSV_HEADER:
            raise CycleParseError(1, f"expected header 't_s,v_mps', got {','.join(header)!r}")
        t, v = [], []
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise CycleParseError(lineno, f"expected 2 fields, got {len(row)}")
            try:
                t.append(float(row[0]))
                v.append(float(row[1]))
            except ValueError:
                raise CycleParseError(lineno, f"non-numeric value in {','.join(row)!r}") from None
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()
    return DriveCycle(np.array(t), np.array(v), name=name)


def write_cycle(cycle: DriveCycle, dest: Union[str, os.PathLike, TextIO]) -> None:
    close = False
    if isinstance(dest, (str, os.PathLike)):
        dest = open(dest, "w", encoding="utf-8", newline="")
        close = True
    try:
        w = csv.writer(dest, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for ti, vi in zip(cycle.t, cycle.v):
            w.writerow((repr(float(ti)), repr(float(vi))))
    finally:
        if close:
            dest.close()


# --------------------------------------------------------------- synthesis

def _block_profile(t_local: np.ndarray, block_s: float, speed: float, stop_fraction: float) -> np.ndarray:
    """Accelerate / hold / decelerate / idle, evaluated at block-local times."""
    t_acc = speed / ACCEL_RATE
    t_dec = speed / DECEL_RATE
    moving = block_s * (1.0 - stop_fraction)
    if t_acc + t_dec > moving:
        raise ValueError(
            f"block of {block_s:.0f} s with stop fraction {stop_fraction} is too short "
            f"to reach {speed} m/s and stop again"
        )
    t_hold_end = moving - t_dec
    v = np.where(
        t_local < t_acc,
        ACCEL_RATE * t_local,
        np.where(t_local <= t_hold_end, speed, speed - DECEL_RATE * (t_local - t_hold_end)),
    )
    return np.clip(np.where(t_local < moving, v, 0.0), 0.0, speed)


def synth_cycle(
    kind: str,
    speed: float,
    duration: float,
    stop_fraction: float = 0.0,
    dt: float = 1.0,
) -> DriveCycle:
    """Build a synthetic cycle.

    ``cruise`` ramps to ``speed`` and holds it. ``composite`` repeats
    accelerate/hold/decelerate/idle blocks of about 10 minutes with
    ``stop_fraction`` of each block spent idle; ``custom`` uses 30-minute
    blocks, i.e. longer high-speed holds. Block lengths are stretched
    slightly so a whole number of blocks fills ``duration``.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    if not 0.0 <= stop_fraction < 1.0:
        raise ValueError(f"stop fraction must be in [0, 1), got {stop_fraction}")
    if dt <= 0 or dt > duration:
        raise ValueError(f"dt must be in (0, duration], got {dt}")

    n = int(round(duration / dt))
    t = dt * np.arange(n + 1)
    if kind == "cruise":
        v = np.minimum(ACCEL_RATE * t, speed)
    elif kind in ("composite", "custom"):
        base = COMPOSITE_BLOCK_S if kind == "composite" else CUSTOM_BLOCK_S
        n_blocks = max(1, int(round(duration / base)))
        block = t[-1] / n_blocks
        t_local = np.mod(t, block)
        # last sample closes the final block at rest rather than wrapping to 0
        t_local[-1] = block
        v = _block_profile(t_local, block, speed, stop_fraction)
        v[-1] = 0.0
    else:
        raise ValueError(f"unknown cycle kind {kind!r}; expected cruise, composite or custom")
    return DriveCycle(t, v, name=kind)


# ------------------------------------------------------------ transforms

def resample(cycle: DriveCycle, dt: float) -> DriveCycle:
    """Linearly interpolate onto ``0, dt, 2dt, ...``.

    If the duration is not a multiple of ``dt`` the original end point is
    kept as a final, shorter step so no distance is dropped.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    T = cycle.duration
    if dt > T:
        raise ValueError(f"dt={dt} s exceeds cycle duration {T} s")
    n = int(np.floor(T / dt + 1e-9))
    t = dt * np.arange(n + 1)
    if T - t[-1] > 1e-9 * max(1.0, T):
        t = np.append(t, T)
    else:
        t[-1] = T
    v = np.interp(t, cycle.t, cycle.v)
    return DriveCycle(t, v, name=cycle.name)


def stitch_daily(cycle: DriveCycle, daily_distance: float, idle_s: float = 60.0) -> DriveCycle:
    """Repeat ``cycle`` with zero-speed idle splices until ``daily_distance`` miles.

    The result is cut at the first sample whose cumulative distance reaches
    the target, so it overshoots by at most one sample interval.
    """
    if daily_distance <= 0:
        raise ValueError(f"daily distance must be positive, got {daily_distance}")
    rep_m = cycle.distance_m
    if rep_m <= 0:
        raise ValueError(f"cycle {cycle.name!r} covers zero distance; cannot stitch")
    target_m = daily_distance * METERS_PER_MILE
    n_rep = int(np.ceil(target_m / rep_m * (1 - 1e-12)))

    step = float(cycle.t[-1] - cycle.t[-2])
    n_idle = max(1, int(round(idle_s / step)))
    idle_t = step * np.arange(1, n_idle + 1)
    period = cycle.duration + step * (n_idle + 1)

    ts, vs = [], []
    for k in range(n_rep):
        off = k * period
        ts.append(cycle.t + off)
        vs.append(cycle.v)
        if k < n_rep - 1:
            ts.append(off + cycle.duration + idle_t)
            vs.append(np.zeros(n_idle))
    t = np.concatenate(ts)
    v = np.concatenate(vs)

    seg = 0.5 * (v[1:] + v[:-1]) * np.diff(t)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    hit = np.nonzero(cum >= target_m * (1 - 1e-12))[0]
    end = int(hit[0]) if hit.size else len(t) - 1
    return DriveCycle(t[: end + 1], v[: end + 1], name=f"{cycle.name}-daily")


# Calibrated stand-ins for the cruise / composite / custom duty cycles:
# (target speed m/s, duration s, stop fraction)
REFERENCE_CYCLES = {
    "cruise": (48 * 0.44704, 3600.0, 0.0),
    "composite": (55 * 0.44704, 3600.0, 0.10),
    "custom": (52 * 0.44704, 3600.0, 0.10),
}


def reference_cycle(kind: str) -> DriveCycle:
    try:
        speed, duration, stop = REFERENCE_CYCLES[kind]
    except KeyError:
        raise ValueError(f"unknown cycle kind {kind!r}; expected one of {sorted(REFERENCE_CYCLES)}") from None
    return synth_cycle(kind, speed, duration, stop)
