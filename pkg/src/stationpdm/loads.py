"""Proxy operating-cycle loads for doors and elevators.

A door's cycles are its passenger flow divided by a passengers-per-opening
factor; an elevator's are its assigned flow divided by an effective occupancy.
Both factors are truncated lognormals drawn once per (asset, sample): they are
device characteristics, so they stay fixed across periods within a sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtr, ndtri

from stationpdm._random import LOAD_STAGE, open_uniform, substream
from stationpdm._tables import fmt, summarize, write_csv
from stationpdm.flow import FlowEnsemble

ASSET_CLASSES = ("door", "elevator")


class UnboundEdge(KeyError):
    pass


class OutOfHorizon(IndexError):
    pass


@dataclass(frozen=True)
class AssetBinding:
    asset_id: str
    asset_class: str
    edge: str
    share: float = 1.0
    # nominal elevator capacity, overrides LoadFactorModel.elevator_capacity
    capacity: float | None = None

    def __post_init__(self):
        if self.asset_class not in ASSET_CLASSES:
            raise ValueError(f"{self.asset_id}: asset class must be one of {ASSET_CLASSES}")
        if not 0.0 < self.share <= 1.0:
            raise ValueError(f"{self.asset_id}: share must lie in (0, 1]")


@dataclass(frozen=True)
class TruncatedLogNormal:
    median: float
    sigma: float
    low: float
    high: float

    def __post_init__(self):
        if not (0 < self.low <= self.median <= self.high):
            raise ValueError(f"median {self.median} outside bounds [{self.low}, {self.high}]")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    def quantile(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.sigma == 0:
            return np.full(u.shape, float(self.median))
        mu = np.log(self.median)
        a = ndtr((np.log(self.low) - mu) / self.sigma)
        b = ndtr((np.log(self.high) - mu) / self.sigma)
        x = np.exp(mu + self.sigma * ndtri(a + u * (b - a)))
        return np.clip(x, self.low, self.high)


@dataclass(frozen=True)
class LoadFactorModel:
    door_median: float = 2.0
    door_sigma: float = 0.15
    door_low: float = 1.0
    door_high: float = 4.0
    elevator_median: float = 2.5
    elevator_sigma: float = 0.25
    elevator_low: float = 1.0
    elevator_capacity: float = 8.0

    def distribution(self, binding: AssetBinding) -> TruncatedLogNormal:
        if binding.asset_class == "door":
            return TruncatedLogNormal(self.door_median, self.door_sigma, self.door_low, self.door_high)
        cap = binding.capacity if binding.capacity is not None else self.elevator_capacity
        return TruncatedLogNormal(self.elevator_median, self.elevator_sigma, self.elevator_low, cap)


@dataclass(frozen=True)
class LoadTrajectory:
    asset_id: str
    asset_class: str
    flow: np.ndarray  # passengers on the bound edge, (S, T)
    factor: np.ndarray  # (S,)
    cycles: np.ndarray  # flow / factor, (S, T)

    @property
    def horizon(self) -> int:
        return int(self.cycles.shape[1])

    def summary(self) -> dict[str, np.ndarray]:
        return summarize(self.cycles)


def compute_loads(
    ensemble: FlowEnsemble,
    bindings: list[AssetBinding],
    factors: LoadFactorModel,
    seed: int,
) -> list[LoadTrajectory]:
    """Cycle trajectories for every bound asset.

    Sample k's factors come from substream (seed, load stage, k): one uniform
    per asset in binding order.
    """
    index = ensemble.graph.edge_index()
    for b in bindings:
        if b.edge not in index:
            raise UnboundEdge(f"asset {b.asset_id} is bound to unknown edge {b.edge!r}")
    S = ensemble.samples
    u = np.stack([open_uniform(substream(seed, LOAD_STAGE, k), len(bindings)) for k in range(S)])
    totals = ensemble.edge_totals()
    out = []
    for j, b in enumerate(bindings):
        factor = factors.distribution(b).quantile(u[:, j])
        q = b.share * totals[:, index[b.edge], :].astype(float)
        out.append(LoadTrajectory(b.asset_id, b.asset_class, q, factor, q / factor[:, None]))
    return out


def cumulative_cycles(trajectory: LoadTrajectory, reset_period: int) -> np.ndarray:
    """Running cycle sums per sample over periods reset_period..T (1-based, inclusive)."""
    T = trajectory.horizon
    if not 1 <= reset_period <= T:
        raise OutOfHorizon(f"reset period {reset_period} outside 1..{T}")
    return np.cumsum(trajectory.cycles[:, reset_period - 1 :], axis=1)


def _rows(trajectories, key):
    for tr in trajectories:
        stats = summarize(key(tr))
        for t in range(stats["mean"].shape[0]):
            yield [tr.asset_id, t + 1] + [fmt(stats[c][t]) for c in ("mean", "q05", "q50", "q95")]


HEADER = ["asset_id", "period", "mean", "q05", "q50", "q95"]


def loads_to_csv(trajectories: list[LoadTrajectory], path: str | Path) -> Path:
    return write_csv(path, HEADER, _rows(trajectories, lambda tr: tr.cycles))


def cumulative_to_csv(trajectories: list[LoadTrajectory], path: str | Path, reset_period: int = 1) -> Path:
    """Cumulative cycles since ``reset_period``; earlier periods are reported as zero."""

    def series(tr):
        cum = np.zeros_like(tr.cycles)
        cum[:, reset_period - 1 :] = cumulative_cycles(tr, reset_period)
        return cum

    return write_csv(path, HEADER, _rows(trajectories, series))
