"""Maintenance counters and condition-reaching probabilities.

Each asset carries age and cycle counters for the minor, medium and major
categories. Executing category m resets the counters of m and of every lower
category. The maintenance condition for (asset, category) is reached when
age or cycles since the relevant reset exceed the (uncertain) thresholds.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np
from scipy.special import ndtr, ndtri

from stationpdm._random import THRESHOLD_STAGE, open_uniform, substream
from stationpdm._tables import fmt, write_csv
from stationpdm.loads import LoadTrajectory, OutOfHorizon


class MaintenanceCategory(IntEnum):
    MINOR = 0
    MEDIUM = 1
    MAJOR = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: "str | int | MaintenanceCategory") -> "MaintenanceCategory":
        if isinstance(value, str):
            return cls[value.upper()]
        return cls(value)


CATEGORIES = tuple(MaintenanceCategory)


def _truncated_normal_scale(u: np.ndarray, cv: float) -> np.ndarray:
    """Multiplier 1 + cv*Z with Z standard normal truncated so the result is > 0."""
    if cv == 0:
        return np.ones_like(u)
    lo = ndtr(-1.0 / cv)
    z = ndtri(lo + u * (1.0 - lo))
    return np.maximum(1.0 + cv * z, np.finfo(float).tiny)


@dataclass(frozen=True)
class ThresholdModel:
    """Nominal (mean) age and cycle limits per (asset, category).

    ``nominal[(asset_id, category)] = (age_periods, cycles)``. Draws are
    truncated normals with standard deviation cv * nominal.
    """

    nominal: Mapping[tuple[str, MaintenanceCategory], tuple[float, float]]
    cv_age: float = 0.10
    cv_cycles: float = 0.10

    def __post_init__(self):
        if self.cv_age < 0 or self.cv_cycles < 0:
            raise ValueError("coefficients of variation must be non-negative")
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        assets = sorted({a for a, _ in self.nominal})
        for a in assets:
            rows = []
            for m in CATEGORIES:
                if (a, m) not in self.nominal:
                    out.append(f"{a}: missing {m.label} threshold")
                    continue
                age, cyc = self.nominal[(a, m)]
                if not (age > 0 and cyc > 0):
                    out.append(f"{a}: {m.label} thresholds must be positive")
                rows.append((m, age, cyc))
            for (m0, a0, c0), (m1, a1, c1) in zip(rows, rows[1:]):
                if not (a0 < a1 and c0 < c1):
                    out.append(f"{a}: {m1.label} thresholds must exceed {m0.label} thresholds")
        return out

    def arrays(self, asset_ids: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
        age = np.array([[self.nominal[(a, m)][0] for m in CATEGORIES] for a in asset_ids], dtype=float)
        cyc = np.array([[self.nominal[(a, m)][1] for m in CATEGORIES] for a in asset_ids], dtype=float)
        return age, cyc

    def draw(self, asset_ids: Sequence[str], u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map uniforms of shape (..., asset, category, 2, J) to (age, cycle) threshold draws."""
        age, cyc = self.arrays(asset_ids)
        ta = age[..., None] * _truncated_normal_scale(u[..., 0, :], self.cv_age)
        tc = cyc[..., None] * _truncated_normal_scale(u[..., 1, :], self.cv_cycles)
        return ta, tc


@dataclass(frozen=True)
class MaintenanceCounters:
    asset_ids: tuple[str, ...]
    loads: np.ndarray  # (asset, S, T) cycles per period
    resets: tuple[tuple[str, MaintenanceCategory, int], ...]
    ages: np.ndarray  # (asset, category, T)
    cycles: np.ndarray  # (asset, category, S, T)

    @property
    def horizon(self) -> int:
        return int(self.loads.shape[2])

    @property
    def samples(self) -> int:
        return int(self.loads.shape[1])

    def index(self, asset_id: str) -> int:
        return self.asset_ids.index(asset_id)

    def last_reset(self, asset_id: str, category: MaintenanceCategory) -> np.ndarray:
        """Period of the latest reset affecting (asset, category) at each t; 0 = none."""
        T = self.horizon
        last = np.zeros(T, dtype=np.int64)
        for a, m, r in self.resets:
            if a == asset_id and m >= category:
                last[r - 1 :] = np.maximum(last[r - 1 :], r)
        return last


def _counters(asset_ids, loads, resets) -> MaintenanceCounters:
    A, S, T = loads.shape
    ages = np.zeros((A, len(CATEGORIES), T), dtype=np.int64)
    cycles = np.zeros((A, len(CATEGORIES), S, T))
    cum = np.concatenate([np.zeros((A, S, 1)), np.cumsum(loads, axis=2)], axis=2)
    periods = np.arange(1, T + 1)
    shell = MaintenanceCounters(tuple(asset_ids), loads, tuple(resets), ages, cycles)
    for i, a in enumerate(asset_ids):
        for m in CATEGORIES:
            last = shell.last_reset(a, m)
            ages[i, m] = periods - last
            cycles[i, m] = cum[i][:, periods] - cum[i][:, last]
    return shell


def build_counters(
    trajectories: Sequence[LoadTrajectory],
    resets: Sequence[tuple[str, MaintenanceCategory, int]] = (),
) -> MaintenanceCounters:
    """Counters for assets commissioned (or last fully serviced) just before period 1."""
    asset_ids = [tr.asset_id for tr in trajectories]
    loads = np.stack([tr.cycles for tr in trajectories]).astype(float)
    counters = _counters(asset_ids, loads, ())
    for a, m, r in resets:
        counters = apply_reset(counters, a, m, r)
    return counters


def apply_reset(
    counters: MaintenanceCounters,
    asset_id: str,
    category: MaintenanceCategory | str,
    period: int,
) -> MaintenanceCounters:
    """Record execution of ``category`` at ``period``: that category and all lower
    ones restart from zero at ``period``; higher categories are untouched."""
    category = MaintenanceCategory.parse(category)
    if not 1 <= period <= counters.horizon:
        raise OutOfHorizon(f"reset period {period} outside 1..{counters.horizon}")
    if asset_id not in counters.asset_ids:
        raise KeyError(f"unknown asset {asset_id!r}")
    resets = counters.resets + ((asset_id, category, int(period)),)
    return _counters(counters.asset_ids, counters.loads, resets)


@dataclass(frozen=True)
class ProbabilityTable:
    asset_ids: tuple[str, ...]
    reach_prob: np.ndarray  # (asset, category, T)
    std_err: np.ndarray
    n_pairs: int

    @property
    def horizon(self) -> int:
        return int(self.reach_prob.shape[2])

    def series(self, asset_id: str, category: MaintenanceCategory | str) -> np.ndarray:
        return self.reach_prob[self.asset_ids.index(asset_id), MaintenanceCategory.parse(category)]

    def rows(self):
        A, M, T = self.reach_prob.shape
        for i in range(A):
            for m in CATEGORIES:
                for t in range(T):
                    yield [
                        self.asset_ids[i],
                        m.label,
                        t + 1,
                        fmt(self.reach_prob[i, m, t]),
                        fmt(self.std_err[i, m, t]),
                    ]

    def to_csv(self, path: str | Path) -> Path:
        return write_csv(path, ["asset_id", "category", "period", "reach_prob", "std_err"], self.rows())


def reaching_probability(
    counters: MaintenanceCounters,
    thresholds: ThresholdModel,
    seed: int,
    threshold_draws: int = 8,
) -> ProbabilityTable:
    """Fraction of (load sample, threshold draw) pairs in which age or cycles
    have reached their thresholds.

    Thresholds are drawn per (asset, category, pair) from substream
    (seed, threshold stage, k) and held fixed over time, so every pair's
    indicator is monotone between resets. The standard error treats each load
    sample as one cluster of ``threshold_draws`` pairs.
    """
    if threshold_draws < 1:
        raise ValueError("threshold_draws must be at least 1")
    A, S, T = counters.loads.shape
    J = threshold_draws
    u = np.stack(
        [
            open_uniform(substream(seed, THRESHOLD_STAGE, k), (A, len(CATEGORIES), 2, J))
            for k in range(S)
        ]
    )
    ta, tc = thresholds.draw(counters.asset_ids, u)  # (S, A, M, J)
    reach_prob = np.zeros((A, len(CATEGORIES), T))
    se = np.zeros_like(reach_prob)
    for i in range(A):
        for m in CATEGORIES:
            age_hit = counters.ages[i, m][None, None, :] >= ta[:, i, m, :, None]
            cyc_hit = counters.cycles[i, m][:, None, :] >= tc[:, i, m, :, None]
            cluster = (age_hit | cyc_hit).sum(axis=1)  # (S, T) hits per load sample
            reach_prob[i, m] = cluster.sum(axis=0) / (S * J)
            se[i, m] = np.sqrt(np.var(cluster / J, axis=0) / S)
    return ProbabilityTable(counters.asset_ids, reach_prob, se, S * J)
