"""Monte Carlo passenger flows on the station graph.

Per stream and period the total entering the source is Poisson, each
branching node splits its accumulated inflow multinomially with shares drawn
from its Dirichlet routing prior, and single-exit nodes pass flow through.

All randomness enters through uniforms and gamma variates drawn from a
per-sample substream. The Poisson total and the multinomial split are then
obtained by quantile inversion (the multinomial as a chain of conditional
binomials), which keeps a sample's flows monotone in the demand rates when
the seed is held fixed.
"""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binom, poisson

from stationpdm import STREAMS
from stationpdm._random import FLOW_STAGE, open_uniform, substream
from stationpdm._tables import fmt, summarize, write_csv
from stationpdm.graph import InvalidGraph, StationGraph, topological_order, validate_graph

ROUTING_MODES = ("per_period", "per_sample")


class EmptyEnsemble(ValueError):
    pass


@dataclass(frozen=True)
class DemandProfile:
    """Expected passengers per period, one array per stream."""

    rates: Mapping[str, np.ndarray]

    def __post_init__(self):
        rates = {s: np.asarray(self.rates[s], dtype=float) for s in STREAMS}
        lengths = {r.shape for r in rates.values()}
        if len(lengths) != 1 or rates[STREAMS[0]].ndim != 1:
            raise ValueError("both streams need 1-d rate arrays of equal length")
        if rates[STREAMS[0]].size < 1:
            raise ValueError("demand horizon must be at least one period")
        for s, r in rates.items():
            if not np.all(np.isfinite(r)) or np.any(r < 0):
                raise ValueError(f"{s} rates must be finite and non-negative")
        object.__setattr__(self, "rates", rates)

    @property
    def horizon(self) -> int:
        return int(self.rates[STREAMS[0]].size)

    def scaled(self, factor: float) -> "DemandProfile":
        return DemandProfile({s: r * factor for s, r in self.rates.items()})


@dataclass(frozen=True)
class _Branch:
    node: str
    edges: tuple[int, ...]
    concentration: np.ndarray


@dataclass(frozen=True)
class _StreamPlan:
    stream: str
    source: str
    order: tuple[str, ...]
    sinks: frozenset[str]
    # node -> ((edge index, head), ...) for every non-sink node
    exits: Mapping[str, tuple[tuple[int, str], ...]]
    branches: tuple[_Branch, ...]


def _plan(graph: StationGraph) -> dict[str, _StreamPlan]:
    report = validate_graph(graph)
    if not report.ok:
        raise InvalidGraph(report)
    index = graph.edge_index()
    heads = {}
    for s in STREAMS:
        for eid, _, v in graph.arcs(s):
            heads[(s, eid)] = v
    plans = {}
    for s in STREAMS:
        spec = graph.streams[s]
        sinks = frozenset(spec.sinks)
        exits = {}
        branches = []
        for v, out in sorted(graph.admissible_out(s).items()):
            if v in sinks:
                continue
            exits[v] = tuple((index[e], heads[(s, e)]) for e in out)
            if len(out) >= 2:
                prior = graph.prior(v, s)
                concentration = np.array([prior.concentration[e] for e in out], dtype=float)
                branches.append(_Branch(v, tuple(index[e] for e in out), concentration))
        plans[s] = _StreamPlan(
            s, spec.source, tuple(topological_order(graph, s)), sinks, exits, tuple(branches)
        )
    return plans


def _draw_variates(plans, horizon: int, rng: np.random.Generator, routing_mode: str) -> dict:
    """All random inputs of one sample, in a fixed draw order."""
    if routing_mode not in ROUTING_MODES:
        raise ValueError(f"routing_mode must be one of {ROUTING_MODES}")
    rows = horizon if routing_mode == "per_period" else 1
    out = {}
    for s in STREAMS:
        out[(s, None, "total")] = open_uniform(rng, horizon)
        for br in plans[s].branches:
            deg = len(br.edges)
            out[(s, br.node, "gamma")] = rng.standard_gamma(np.broadcast_to(br.concentration, (rows, deg)))
            out[(s, br.node, "split")] = open_uniform(rng, (horizon, deg - 1))
    return out


def _split(inflow: np.ndarray, shares: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Multinomial allocation by sequential conditional binomial inversion.

    inflow (S, T) ints, shares (S, T, deg), u (S, T, deg-1) -> (S, T, deg) ints.
    """
    deg = shares.shape[-1]
    out = np.zeros(inflow.shape + (deg,), dtype=np.int64)
    remaining = inflow.astype(np.int64)
    for j in range(deg - 1):
        rest = shares[..., j:].sum(axis=-1)
        q = np.clip(np.divide(shares[..., j], rest, out=np.ones_like(rest), where=rest > 0), 0.0, 1.0)
        x = binom.ppf(u[..., j], remaining, q)
        x = np.clip(np.nan_to_num(x, nan=0.0), 0, remaining).astype(np.int64)
        out[..., j] = x
        remaining = remaining - x
    out[..., deg - 1] = remaining
    return out


def _propagate(plans, demand: DemandProfile, n_edges: int, variates: list[dict]):
    """Push a batch of samples through the graph. Pure function of the variates."""
    S = len(variates)
    T = demand.horizon
    flows = np.zeros((S, len(STREAMS), n_edges, T), dtype=np.int64)
    totals = np.zeros((S, len(STREAMS), T), dtype=np.int64)
    routing = {}
    for si, s in enumerate(STREAMS):
        plan = plans[s]
        u_total = np.stack([v[(s, None, "total")] for v in variates])
        rate = np.broadcast_to(demand.rates[s], (S, T))
        n = np.clip(poisson.ppf(u_total, rate), 0, None).astype(np.int64)
        totals[:, si] = n
        inflow = {v: np.zeros((S, T), dtype=np.int64) for v in plan.order}
        inflow[plan.source] = n.copy()
        for v in plan.order:
            if v in plan.sinks:
                continue
            exits = plan.exits[v]
            if len(exits) == 1:
                e, head = exits[0]
                flows[:, si, e] = inflow[v]
                inflow[head] += inflow[v]
                continue
            g = np.stack([var[(s, v, "gamma")] for var in variates])
            shares = g / g.sum(axis=-1, keepdims=True)
            routing[(v, s)] = shares
            u = np.stack([var[(s, v, "split")] for var in variates])
            alloc = _split(inflow[v], np.broadcast_to(shares, (S, T, shares.shape[-1])), u)
            for j, (e, head) in enumerate(exits):
                flows[:, si, e] = alloc[..., j]
                inflow[head] += alloc[..., j]
    return flows, totals, routing


@dataclass(frozen=True)
class FlowField:
    """One Monte Carlo sample: flows[stream, edge, period] and source totals[stream, period]."""

    sample_index: int
    edge_ids: tuple[str, ...]
    flows: np.ndarray
    totals: np.ndarray
    routing: Mapping[tuple[str, str], np.ndarray] = field(default_factory=dict)

    @property
    def total_flow(self) -> np.ndarray:
        """Both streams combined, shape (edges, periods)."""
        return self.flows.sum(axis=0)

    def stream_flow(self, stream: str) -> np.ndarray:
        return self.flows[STREAMS.index(stream)]


@dataclass(frozen=True)
class FlowEnsemble:
    graph: StationGraph
    demand: DemandProfile
    flows: np.ndarray  # (S, stream, edge, period)
    totals: np.ndarray  # (S, stream, period)
    routing: Mapping[tuple[str, str], np.ndarray]
    master_seed: int
    routing_mode: str = "per_period"

    @property
    def samples(self) -> int:
        return int(self.flows.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.flows.shape[-1])

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self.graph.edge_ids

    def edge_totals(self) -> np.ndarray:
        """Combined flow F[e, t] per sample, shape (S, edge, period)."""
        return self.flows.sum(axis=1)

    def field(self, k: int) -> FlowField:
        return FlowField(
            k,
            self.edge_ids,
            self.flows[k],
            self.totals[k],
            {key: r[k] for key, r in self.routing.items()},
        )


def sample_flow_field(
    graph: StationGraph,
    demand: DemandProfile,
    rng: np.random.Generator,
    routing_mode: str = "per_period",
    sample_index: int = 0,
) -> FlowField:
    plans = _plan(graph)
    var = _draw_variates(plans, demand.horizon, rng, routing_mode)
    flows, totals, routing = _propagate(plans, demand, len(graph.edges), [var])
    return FlowField(
        sample_index, graph.edge_ids, flows[0], totals[0], {k: r[0] for k, r in routing.items()}
    )


def sample_ensemble(
    graph: StationGraph,
    demand: DemandProfile,
    samples: int,
    master_seed: int,
    routing_mode: str = "per_period",
    threads: int = 1,
) -> FlowEnsemble:
    """Draw ``samples`` independent flow fields.

    Sample k uses the substream (master_seed, flow stage, k); ``threads`` only
    changes how the variates are drawn, never their values.
    """
    if samples < 1:
        raise ValueError("sample count must be at least 1")
    plans = _plan(graph)
    T = demand.horizon

    def draw(k: int) -> dict:
        return _draw_variates(plans, T, substream(master_seed, FLOW_STAGE, k), routing_mode)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            variates = list(pool.map(draw, range(samples)))
    else:
        variates = [draw(k) for k in range(samples)]
    flows, totals, routing = _propagate(plans, demand, len(graph.edges), variates)
    return FlowEnsemble(graph, demand, flows, totals, routing, int(master_seed), routing_mode)


@dataclass(frozen=True)
class EdgeFlowSummary:
    edge_ids: tuple[str, ...]
    mean: np.ndarray  # (edge, period)
    q05: np.ndarray
    q50: np.ndarray
    q95: np.ndarray

    def rows(self):
        E, T = self.mean.shape
        for e in range(E):
            for t in range(T):
                yield [
                    self.edge_ids[e],
                    t + 1,
                    fmt(self.mean[e, t]),
                    fmt(self.q05[e, t]),
                    fmt(self.q50[e, t]),
                    fmt(self.q95[e, t]),
                ]

    def to_csv(self, path: str | Path) -> Path:
        return write_csv(path, ["edge_id", "period", "mean", "q05", "q50", "q95"], self.rows())


def edge_flow_summary(ensemble: FlowEnsemble) -> EdgeFlowSummary:
    if ensemble.samples == 0:
        raise EmptyEnsemble("ensemble has no samples")
    stats = summarize(ensemble.edge_totals())
    return EdgeFlowSummary(ensemble.edge_ids, **stats)
