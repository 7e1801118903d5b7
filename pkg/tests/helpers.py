"""Shared builders for the test suite."""

from __future__ import annotations

import dataclasses
import itertools

import numpy as np

from stationpdm.graph import Edge, RoutingPrior, StationGraph, StreamSpec
from stationpdm.maintenance import CATEGORIES, MaintenanceCategory, ThresholdModel
from stationpdm.scenario import DOORS, ELEVATORS, SamplerSettings, default_scenario
from stationpdm.scheduler import AssetGroup, CostParameters, DueItem, MaintenanceDemand

E, D = "embarking", "disembarking"


def chain(n: int = 3, priors=()) -> StationGraph:
    """a -> b -> c ... for the embarking stream; disembarking runs it backwards."""
    nodes = tuple("abcdefghijkl"[:n])
    edges = tuple(
        Edge(f"{u}{v}", u, v, {E: "forward", D: "reverse"}) for u, v in zip(nodes, nodes[1:])
    )
    streams = {E: StreamSpec(nodes[0], (nodes[-1],)), D: StreamSpec(nodes[-1], (nodes[0],))}
    return StationGraph(nodes, edges, streams, tuple(priors))


def diamond(concentration=(1.0, 1.0)) -> StationGraph:
    both = {E: "forward", D: "reverse"}
    edges = (
        Edge("ab", "a", "b", both),
        Edge("ac", "a", "c", both),
        Edge("bd", "b", "d", both),
        Edge("cd", "c", "d", both),
    )
    streams = {E: StreamSpec("a", ("d",)), D: StreamSpec("d", ("a",))}
    priors = (
        RoutingPrior("a", E, {"ab": concentration[0], "ac": concentration[1]}),
        RoutingPrior("d", D, {"bd": concentration[0], "cd": concentration[1]}),
    )
    return StationGraph(("a", "b", "c", "d"), edges, streams, priors)


def random_dag(rng: np.random.Generator, max_nodes: int = 12) -> StationGraph:
    """Random valid graph on <= max_nodes nodes.

    Interior nodes are layered as entries, middle nodes and exits, with arcs
    only from lower to higher index. Embarking enters from a virtual source at
    the entries and leaves at the exits; disembarking enters at the exits from
    its own virtual source and walks every interior edge in reverse.
    """
    k = int(rng.integers(3, max_nodes - 1))
    inner = [f"n{i}" for i in range(k)]
    n_in = int(rng.integers(1, k - 1))
    n_out = int(rng.integers(1, k - n_in))
    entries, exits = inner[:n_in], inner[k - n_out :]
    middle = range(n_in, k - n_out)
    both = {E: "forward", D: "reverse"}
    eid = itertools.count()
    edges = [Edge(f"e{next(eid)}", "emb_src", v, {E: "forward"}) for v in entries]
    edges += [Edge(f"e{next(eid)}", "dis_src", v, {D: "forward"}) for v in exits]
    arcs = set()
    for i in range(k - n_out):
        lo = max(i + 1, n_in)
        arcs.add((i, int(rng.integers(lo, k))))  # never a forward dead end
        for j in range(lo, k):
            if rng.random() < 0.3:
                arcs.add((i, j))
    for j in list(middle) + list(range(k - n_out, k)):
        if not any(b == j for _, b in arcs):  # never a reverse dead end
            arcs.add((int(rng.integers(0, min(j, k - n_out))), j))
    for i, j in sorted(arcs):
        for _ in range(int(rng.integers(1, 3))):  # parallel edges allowed
            edges.append(Edge(f"e{next(eid)}", inner[i], inner[j], both))
    g = StationGraph(
        tuple(["emb_src", "dis_src"] + inner),
        tuple(edges),
        {E: StreamSpec("emb_src", tuple(exits)), D: StreamSpec("dis_src", tuple(entries))},
    )
    priors = []
    for s in (E, D):
        for node, outs in sorted(g.admissible_out(s).items()):
            if len(outs) > 1:
                priors.append(RoutingPrior(node, s, {e: float(rng.uniform(0.3, 5.0)) for e in outs}))
    return dataclasses.replace(g, priors=tuple(priors))


def random_station_scenario(i: int, samples: int = 200):
    """Default station with randomized thresholds, traffic, costs and calendar."""
    rng = np.random.default_rng([20260414, i])
    cfg = default_scenario()
    T = cfg.horizon
    nominal = {}
    for a in DOORS + ELEVATORS:
        base_age, base_cyc = cfg.thresholds.nominal[(a, MaintenanceCategory.MINOR)]
        age = int(round(base_age * rng.uniform(0.75, 1.25)))
        cyc = round(base_cyc * rng.uniform(0.6, 1.5))
        nominal[(a, MaintenanceCategory.MINOR)] = (age, cyc)
        nominal[(a, MaintenanceCategory.MEDIUM)] = (2 * age, 2.5 * cyc)
        nominal[(a, MaintenanceCategory.MAJOR)] = (4 * age, 6 * cyc)
    thresholds = ThresholdModel(nominal, float(rng.uniform(0.0, 0.2)), float(rng.uniform(0.0, 0.2)))
    mult = {k: {a: float(rng.integers(5, 16)) / 10 for a in DOORS + ELEVATORS} for k in "cdp"}
    costs = CostParameters(
        {key: round(v * mult["c"][key[0]]) for key, v in cfg.costs.service.items()},
        {key: round(v * mult["d"][key[0]]) for key, v in cfg.costs.disruption.items()},
        {key: round(v * mult["p"][key[0]]) for key, v in cfg.costs.delay_penalty.items()},
        {g: float(rng.integers(100, 1600)) for g in cfg.costs.setup},
    )
    calendar = {}
    for a in DOORS + ELEVATORS:
        k = int(rng.integers(8, 17))
        for m, factor in zip(CATEGORIES, (1, 2, 4)):
            # keep every calendar date inside the horizon so the baseline is a feasible plan
            calendar[(a, m)] = min(factor * k, T)
    return dataclasses.replace(
        cfg,
        name=f"random-{i}",
        demand=cfg.demand.scaled(float(rng.uniform(0.6, 1.4))),
        thresholds=thresholds,
        costs=costs,
        calendar=calendar,
        sampler=SamplerSettings(samples=samples, threshold_draws=4, seed=1000 + i),
    )


CAT2 = (MaintenanceCategory.MINOR, MaintenanceCategory.MEDIUM)


def random_instance(rng: np.random.Generator, max_assets=3, max_periods=6, max_cats=2, full=False):
    """Small scheduling instance with exactly representable (dyadic) coefficients.

    ``full`` uses the maximum size in every dimension.
    """
    T = max_periods if full else int(rng.integers(2, max_periods + 1))
    A = max_assets if full else int(rng.integers(1, max_assets + 1))
    assets = [f"A{i}" for i in range(A)]
    items = []
    for a in assets:
        ncat = max_cats if full else int(rng.integers(1, max_cats + 1))
        for m in CAT2[:ncat]:
            p = np.sort(rng.integers(0, 17, size=T) / 16.0)
            due = np.flatnonzero(p >= 0.5)
            first_due = int(due[0]) + 1 if due.size else None
            deadline = None
            if first_due is None or rng.random() < 0.2:
                deadline = int(rng.integers(1, T + 1))
            earliest = int(rng.integers(1, (first_due or deadline or T) + 1))
            if deadline is not None:
                earliest = min(earliest, deadline)
            items.append(DueItem(a, m, p, first_due, earliest, deadline))
    demand = MaintenanceDemand(T, tuple(items))
    split = int(rng.integers(0, A + 1))
    groups = [AssetGroup("g1", tuple(assets[:split])), AssetGroup("g2", tuple(assets[split:]))]
    groups = [g for g in groups if g.members]
    keys = [it.key for it in items]

    def coef(lo, hi):
        return {k: float(rng.integers(lo, hi)) / 4 for k in keys}

    params = CostParameters(
        coef(0, 80), coef(0, 40), coef(0, 200), {g.id: float(rng.integers(0, 200)) / 4 for g in groups}
    )
    return demand, params, groups
