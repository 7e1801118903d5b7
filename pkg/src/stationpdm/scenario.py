"""Scenario configuration: schema, loading, validation and the default case.

A scenario is one JSON document that fully determines a run. See README.md
for the field dictionary.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from stationpdm import STREAMS
from stationpdm.flow import ROUTING_MODES, DemandProfile
from stationpdm.graph import Edge, RoutingPrior, StationGraph, StreamSpec, validate_graph
from stationpdm.loads import ASSET_CLASSES, AssetBinding, LoadFactorModel
from stationpdm.maintenance import CATEGORIES, MaintenanceCategory, ThresholdModel
from stationpdm.scheduler import AssetGroup, CostParameters, ItemKey

SCHEMA_VERSION = 1


class ParseError(ValueError):
    def __init__(self, path, line: int, column: int, message: str):
        self.path, self.line, self.column = str(path), line, column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass(frozen=True)
class ConfigIssue:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class ValidationError(ValueError):
    def __init__(self, issues: list[ConfigIssue]):
        self.issues = issues
        super().__init__("invalid scenario:\n" + "\n".join(f"  {i}" for i in issues))


@dataclass(frozen=True)
class SamplerSettings:
    samples: int = 2000
    threshold_draws: int = 8
    seed: int = 20260414
    routing_mode: str = "per_period"


@dataclass(frozen=True)
class SchedulingSettings:
    p_due: float = 0.5
    p_release: float = 0.25
    # calendar dates stay admissible for the optimizer even before release
    calendar_admissible: bool = True
    deadlines: Mapping[ItemKey, int] = field(default_factory=dict)
    time_limit: float = 60.0


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    horizon: int
    graph: StationGraph
    demand: DemandProfile
    assets: tuple[AssetBinding, ...]
    groups: tuple[AssetGroup, ...]
    load_factors: LoadFactorModel
    thresholds: ThresholdModel
    costs: CostParameters
    calendar: Mapping[ItemKey, int]
    sampler: SamplerSettings = SamplerSettings()
    scheduling: SchedulingSettings = SchedulingSettings()

    @property
    def asset_ids(self) -> tuple[str, ...]:
        return tuple(b.asset_id for b in self.assets)

    def group_of(self, asset_id: str) -> str:
        for g in self.groups:
            if asset_id in g.members:
                return g.id
        raise KeyError(asset_id)


# --- dict <-> objects --------------------------------------------------------


def _num(x: float):
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def _item_entries(mapping: Mapping[ItemKey, float], value_name: str, order) -> list[dict]:
    out = []
    for a in order:
        for m in CATEGORIES:
            if (a, m) in mapping:
                out.append({"asset": a, "category": m.label, value_name: _num(mapping[(a, m)])})
    return out


def config_to_dict(cfg: ScenarioConfig) -> dict:
    g = cfg.graph
    order = cfg.asset_ids
    costs = []
    for a in order:
        for m in CATEGORIES:
            key = (a, m)
            if key in cfg.costs.service or key in cfg.costs.delay_penalty or key in cfg.costs.disruption:
                costs.append(
                    {
                        "asset": a,
                        "category": m.label,
                        "service": _num(cfg.costs.service.get(key, 0.0)),
                        "disruption": _num(cfg.costs.disruption.get(key, 0.0)),
                        "delay_penalty": _num(cfg.costs.delay_penalty.get(key, 0.0)),
                    }
                )
    thresholds = []
    for a in order:
        for m in CATEGORIES:
            if (a, m) in cfg.thresholds.nominal:
                age, cyc = cfg.thresholds.nominal[(a, m)]
                thresholds.append({"asset": a, "category": m.label, "age": _num(age), "cycles": _num(cyc)})
    lf = cfg.load_factors
    s = cfg.scheduling
    return {
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "horizon": cfg.horizon,
        "graph": {
            "nodes": list(g.nodes),
            "edges": [
                {"id": e.id, "from": e.source, "to": e.target, "streams": dict(e.streams)} for e in g.edges
            ],
            "streams": {
                st: {"source": spec.source, "sinks": list(spec.sinks)} for st, spec in g.streams.items()
            },
            "routing_priors": [
                {"node": p.node, "stream": p.stream, "concentration": {k: _num(v) for k, v in p.concentration.items()}}
                for p in g.priors
            ],
        },
        "demand": {st: [_num(x) for x in cfg.demand.rates[st]] for st in STREAMS},
        "assets": [
            {
                "id": b.asset_id,
                "class": b.asset_class,
                "edge": b.edge,
                "share": _num(b.share),
                **({"capacity": _num(b.capacity)} if b.capacity is not None else {}),
            }
            for b in cfg.assets
        ],
        "groups": [{"id": grp.id, "members": list(grp.members)} for grp in cfg.groups],
        "load_factors": {
            "door": {"median": _num(lf.door_median), "sigma": _num(lf.door_sigma), "bounds": [_num(lf.door_low), _num(lf.door_high)]},
            "elevator": {
                "median": _num(lf.elevator_median),
                "sigma": _num(lf.elevator_sigma),
                "low": _num(lf.elevator_low),
                "capacity": _num(lf.elevator_capacity),
            },
        },
        "thresholds": {
            "cv_age": _num(cfg.thresholds.cv_age),
            "cv_cycles": _num(cfg.thresholds.cv_cycles),
            "nominal": thresholds,
        },
        "costs": {"items": costs, "setup": {k: _num(v) for k, v in cfg.costs.setup.items()}},
        "calendar": _item_entries(cfg.calendar, "interval", order),
        "sampler": {
            "samples": cfg.sampler.samples,
            "threshold_draws": cfg.sampler.threshold_draws,
            "seed": cfg.sampler.seed,
            "routing_mode": cfg.sampler.routing_mode,
        },
        "scheduling": {
            "p_due": _num(s.p_due),
            "p_release": _num(s.p_release),
            "calendar_admissible": s.calendar_admissible,
            "deadlines": _item_entries(s.deadlines, "period", order),
            "time_limit": _num(s.time_limit),
        },
    }


def serialize(cfg: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


class _Checker:
    """Collects issues while walking the raw document."""

    def __init__(self):
        self.issues: list[ConfigIssue] = []

    def fail(self, loc: str, msg: str) -> None:
        self.issues.append(ConfigIssue(loc, msg))

    def get(self, obj, key, loc, kind=None, default=...):
        if not isinstance(obj, dict):
            self.fail(loc, "expected an object")
            return None
        if key not in obj:
            if default is not ...:
                return default
            self.fail(f"{loc}.{key}" if loc else key, "missing field")
            return None
        value = obj[key]
        where = f"{loc}.{key}" if loc else key
        if kind is not None and not self.is_kind(value, kind):
            self.fail(where, f"expected {kind}, got {type(value).__name__}")
            return None
        return value

    @staticmethod
    def is_kind(value, kind) -> bool:
        if kind == "number":
            return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
        if kind == "integer":
            return isinstance(value, int) and not isinstance(value, bool)
        if kind == "string":
            return isinstance(value, str)
        if kind == "list":
            return isinstance(value, list)
        if kind == "object":
            return isinstance(value, dict)
        if kind == "bool":
            return isinstance(value, bool)
        raise ValueError(kind)

    def nonneg(self, obj, key, loc, default=...):
        v = self.get(obj, key, loc, "number", default)
        if v is not None and v < 0:
            self.fail(f"{loc}.{key}", f"must be >= 0, got {v}")
            return None
        return v

    def category(self, value, loc):
        try:
            return MaintenanceCategory.parse(value)
        except (KeyError, ValueError, AttributeError):
            self.fail(loc, f"unknown maintenance category {value!r}")
            return None


def _item_map(chk: _Checker, entries, loc: str, value_name: str, assets: set[str], kind="number"):
    out = {}
    if entries is None:
        return out
    for n, e in enumerate(entries):
        where = f"{loc}[{n}]"
        a = chk.get(e, "asset", where, "string")
        m = chk.category(chk.get(e, "category", where, "string"), f"{where}.category") if isinstance(e, dict) else None
        v = chk.get(e, value_name, where, kind)
        if a is not None and a not in assets:
            chk.fail(f"{where}.asset", f"unknown asset {a!r}")
        if a is None or m is None or v is None:
            continue
        if (a, m) in out:
            chk.fail(where, f"duplicate entry for {a}/{m.label}")
        out[(a, m)] = v
    return out


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Build and fully validate a scenario; raises ValidationError listing every issue."""
    chk = _Checker()
    if not isinstance(doc, dict):
        raise ValidationError([ConfigIssue("$", "top level must be an object")])
    version = chk.get(doc, "schema_version", "", "integer", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        chk.fail("schema_version", f"unsupported version {version}")
    name = chk.get(doc, "name", "", "string", "scenario")
    horizon = chk.get(doc, "horizon", "", "integer")
    if horizon is not None and horizon < 1:
        chk.fail("horizon", "must be at least 1")
        horizon = None

    # graph
    graph = None
    graw = chk.get(doc, "graph", "", "object")
    if graw is not None:
        nodes = chk.get(graw, "nodes", "graph", "list") or []
        for n, v in enumerate(nodes):
            if not isinstance(v, str):
                chk.fail(f"graph.nodes[{n}]", "node labels must be strings")
        edges = []
        for n, e in enumerate(chk.get(graw, "edges", "graph", "list") or []):
            where = f"graph.edges[{n}]"
            eid = chk.get(e, "id", where, "string")
            src = chk.get(e, "from", where, "string")
            dst = chk.get(e, "to", where, "string")
            streams = chk.get(e, "streams", where, "object", {s: "forward" for s in STREAMS})
            if None not in (eid, src, dst, streams):
                edges.append(Edge(eid, src, dst, dict(streams)))
        sspecs = {}
        for st, spec in (chk.get(graw, "streams", "graph", "object") or {}).items():
            where = f"graph.streams.{st}"
            source = chk.get(spec, "source", where, "string")
            sinks = chk.get(spec, "sinks", where, "list")
            if source is not None and sinks is not None:
                sspecs[st] = StreamSpec(source, tuple(sinks))
        priors = []
        for n, p in enumerate(chk.get(graw, "routing_priors", "graph", "list", []) or []):
            where = f"graph.routing_priors[{n}]"
            node = chk.get(p, "node", where, "string")
            stream = chk.get(p, "stream", where, "string")
            concentration = chk.get(p, "concentration", where, "object")
            if concentration is not None:
                for k, a in concentration.items():
                    if not chk.is_kind(a, "number"):
                        chk.fail(f"{where}.concentration.{k}", "expected number")
                        concentration = None
                        break
            if None not in (node, stream, concentration):
                priors.append(RoutingPrior(node, stream, {k: float(a) for k, a in concentration.items()}))
        graph = StationGraph(tuple(v for v in nodes if isinstance(v, str)), tuple(edges), sspecs, tuple(priors))
        for v in validate_graph(graph):
            loc = f"graph (node {', '.join(v.nodes)})" if v.nodes else "graph"
            chk.fail(loc, v.message)

    # demand
    demand = None
    draw = chk.get(doc, "demand", "", "object")
    if draw is not None:
        ok = True
        rates = {}
        for st in STREAMS:
            r = chk.get(draw, st, "demand", "list")
            if r is None:
                ok = False
                continue
            for n, x in enumerate(r):
                if not chk.is_kind(x, "number") or x < 0:
                    chk.fail(f"demand.{st}[{n}]", "rates must be non-negative numbers")
                    ok = False
            if horizon is not None and len(r) != horizon:
                chk.fail(f"demand.{st}", f"length {len(r)} != horizon {horizon}")
                ok = False
            rates[st] = r
        if ok:
            demand = DemandProfile({st: np.array(r, dtype=float) for st, r in rates.items()})

    # assets and groups
    assets = []
    for n, a in enumerate(chk.get(doc, "assets", "", "list") or []):
        where = f"assets[{n}]"
        aid = chk.get(a, "id", where, "string")
        cls = chk.get(a, "class", where, "string")
        edge = chk.get(a, "edge", where, "string")
        share = chk.get(a, "share", where, "number", 1.0)
        cap = chk.get(a, "capacity", where, "number", None)
        if cls is not None and cls not in ASSET_CLASSES:
            chk.fail(f"{where}.class", f"must be one of {ASSET_CLASSES}")
            cls = None
        if share is not None and not 0 < share <= 1:
            chk.fail(f"{where}.share", "must lie in (0, 1]")
            share = None
        if graph is not None and edge is not None and edge not in graph.edge_ids:
            chk.fail(f"{where}.edge", f"unknown edge {edge!r}")
        if None not in (aid, cls, edge, share):
            assets.append(AssetBinding(aid, cls, edge, float(share), None if cap is None else float(cap)))
    ids = [b.asset_id for b in assets]
    if len(set(ids)) != len(ids):
        chk.fail("assets", "asset ids must be unique")
    asset_set = set(ids)

    groups = []
    seen: dict[str, str] = {}
    for n, grp in enumerate(chk.get(doc, "groups", "", "list") or []):
        where = f"groups[{n}]"
        gid = chk.get(grp, "id", where, "string")
        members = chk.get(grp, "members", where, "list")
        if gid is None or members is None:
            continue
        for a in members:
            if a not in asset_set:
                chk.fail(f"{where}.members", f"unknown asset {a!r}")
            elif a in seen:
                chk.fail(f"{where}.members", f"asset {a} already in group {seen[a]}")
            else:
                seen[a] = gid
        groups.append(AssetGroup(gid, tuple(members)))
    for a in ids:
        if a not in seen:
            chk.fail("groups", f"asset {a} is in no group")

    # load factors
    lf = None
    lraw = chk.get(doc, "load_factors", "", "object", {})
    if lraw is not None:
        door = chk.get(lraw, "door", "load_factors", "object", {}) or {}
        elev = chk.get(lraw, "elevator", "load_factors", "object", {}) or {}
        dflt = LoadFactorModel()
        bounds = chk.get(door, "bounds", "load_factors.door", "list", [dflt.door_low, dflt.door_high])
        kw = dict(
            door_median=chk.get(door, "median", "load_factors.door", "number", dflt.door_median),
            door_sigma=chk.nonneg(door, "sigma", "load_factors.door", dflt.door_sigma),
            elevator_median=chk.get(elev, "median", "load_factors.elevator", "number", dflt.elevator_median),
            elevator_sigma=chk.nonneg(elev, "sigma", "load_factors.elevator", dflt.elevator_sigma),
            elevator_low=chk.get(elev, "low", "load_factors.elevator", "number", dflt.elevator_low),
            elevator_capacity=chk.get(elev, "capacity", "load_factors.elevator", "number", dflt.elevator_capacity),
        )
        if not (isinstance(bounds, list) and len(bounds) == 2 and all(chk.is_kind(b, "number") for b in bounds)):
            chk.fail("load_factors.door.bounds", "expected [low, high]")
        elif None not in kw.values():
            kw["door_low"], kw["door_high"] = bounds
            if not 1 <= kw["door_low"] <= kw["door_median"] <= kw["door_high"]:
                chk.fail("load_factors.door", "need 1 <= low <= median <= high")
            elif not 1 <= kw["elevator_low"] <= kw["elevator_median"]:
                chk.fail("load_factors.elevator", "need 1 <= low <= median")
            else:
                lf = LoadFactorModel(**{k: float(v) for k, v in kw.items()})
                for b in assets:
                    if b.asset_class == "elevator":
                        cap = b.capacity if b.capacity is not None else lf.elevator_capacity
                        if cap < lf.elevator_median:
                            chk.fail(f"assets ({b.asset_id})", "elevator capacity below the occupancy median")

    # thresholds
    thresholds = None
    traw = chk.get(doc, "thresholds", "", "object")
    if traw is not None:
        cv_a = chk.nonneg(traw, "cv_age", "thresholds", 0.10)
        cv_c = chk.nonneg(traw, "cv_cycles", "thresholds", 0.10)
        entries = chk.get(traw, "nominal", "thresholds", "list") or []
        nominal = {}
        for n, e in enumerate(entries):
            where = f"thresholds.nominal[{n}]"
            a = chk.get(e, "asset", where, "string")
            m = chk.category(chk.get(e, "category", where, "string"), f"{where}.category") if isinstance(e, dict) else None
            age = chk.get(e, "age", where, "number")
            cyc = chk.get(e, "cycles", where, "number")
            if a is not None and a not in asset_set:
                chk.fail(f"{where}.asset", f"unknown asset {a!r}")
            if None in (a, m, age, cyc):
                continue
            nominal[(a, m)] = (float(age), float(cyc))
        for a in ids:
            for m in CATEGORIES:
                if (a, m) not in nominal:
                    chk.fail("thresholds.nominal", f"missing {m.label} threshold for {a}")
        if cv_a is not None and cv_c is not None:
            try:
                thresholds = ThresholdModel(nominal, float(cv_a), float(cv_c))
            except ValueError as exc:
                for msg in str(exc).split("; "):
                    chk.fail("thresholds.nominal", msg)

    # costs
    costs = None
    craw = chk.get(doc, "costs", "", "object")
    if craw is not None:
        service, disruption, penalty = {}, {}, {}
        for n, e in enumerate(chk.get(craw, "items", "costs", "list") or []):
            where = f"costs.items[{n}]"
            a = chk.get(e, "asset", where, "string")
            m = chk.category(chk.get(e, "category", where, "string"), f"{where}.category") if isinstance(e, dict) else None
            vals = [chk.nonneg(e, f, where) for f in ("service", "disruption", "delay_penalty")]
            if a is not None and a not in asset_set:
                chk.fail(f"{where}.asset", f"unknown asset {a!r}")
            if None in (a, m, *vals):
                continue
            service[(a, m)], disruption[(a, m)], penalty[(a, m)] = (float(v) for v in vals)
        for a in ids:
            for m in CATEGORIES:
                if (a, m) not in service:
                    chk.fail("costs.items", f"missing costs for {a}/{m.label}")
        setup = {}
        sraw = chk.get(craw, "setup", "costs", "object") or {}
        for gid, v in sraw.items():
            if not chk.is_kind(v, "number") or v < 0:
                chk.fail(f"costs.setup.{gid}", f"must be a number >= 0, got {v!r}")
            else:
                setup[gid] = float(v)
        for grp in groups:
            if grp.id not in setup:
                chk.fail("costs.setup", f"missing setup cost for group {grp.id}")
        costs = CostParameters(service, disruption, penalty, setup)

    calendar = _item_map(chk, chk.get(doc, "calendar", "", "list", []), "calendar", "interval", asset_set, "integer")
    for key, v in calendar.items():
        if v < 1:
            chk.fail("calendar", f"{key[0]}/{key[1].label}: interval must be >= 1")

    sraw = chk.get(doc, "sampler", "", "object", {}) or {}
    d = SamplerSettings()
    sampler = SamplerSettings(
        samples=chk.get(sraw, "samples", "sampler", "integer", d.samples),
        threshold_draws=chk.get(sraw, "threshold_draws", "sampler", "integer", d.threshold_draws),
        seed=chk.get(sraw, "seed", "sampler", "integer", d.seed),
        routing_mode=chk.get(sraw, "routing_mode", "sampler", "string", d.routing_mode),
    )
    if sampler.samples is not None and sampler.samples < 1:
        chk.fail("sampler.samples", "must be at least 1")
    if sampler.threshold_draws is not None and sampler.threshold_draws < 1:
        chk.fail("sampler.threshold_draws", "must be at least 1")
    if sampler.seed is not None and not 0 <= sampler.seed < 2**64:
        chk.fail("sampler.seed", "must be an unsigned 64-bit integer")
    if sampler.routing_mode is not None and sampler.routing_mode not in ROUTING_MODES:
        chk.fail("sampler.routing_mode", f"must be one of {ROUTING_MODES}")

    qraw = chk.get(doc, "scheduling", "", "object", {}) or {}
    d2 = SchedulingSettings()
    p_due = chk.get(qraw, "p_due", "scheduling", "number", d2.p_due)
    p_rel = chk.get(qraw, "p_release", "scheduling", "number", d2.p_release)
    if p_due is not None and p_rel is not None and not 0 < p_rel <= p_due <= 1:
        chk.fail("scheduling", "need 0 < p_release <= p_due <= 1")
    deadlines = _item_map(
        chk, chk.get(qraw, "deadlines", "scheduling", "list", []), "scheduling.deadlines", "period", asset_set, "integer"
    )
    for key, v in deadlines.items():
        if horizon is not None and not 1 <= v <= horizon:
            chk.fail("scheduling.deadlines", f"{key[0]}/{key[1].label}: deadline outside 1..{horizon}")
    time_limit = chk.get(qraw, "time_limit", "scheduling", "number", d2.time_limit)
    if time_limit is not None and not time_limit > 0:
        chk.fail("scheduling.time_limit", "must be positive")
    scheduling = SchedulingSettings(
        p_due=p_due,
        p_release=p_rel,
        calendar_admissible=chk.get(qraw, "calendar_admissible", "scheduling", "bool", d2.calendar_admissible),
        deadlines=deadlines,
        time_limit=time_limit,
    )

    if chk.issues:
        raise ValidationError(chk.issues)
    return ScenarioConfig(
        name=name,
        horizon=horizon,
        graph=graph,
        demand=demand,
        assets=tuple(assets),
        groups=tuple(groups),
        load_factors=lf,
        thresholds=thresholds,
        costs=costs,
        calendar=calendar,
        sampler=sampler,
        scheduling=scheduling,
    )


def parse_config(text: str, path: str = "<string>") -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, exc.colno, exc.msg) from None
    return config_from_dict(doc)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), str(path))


def save_config(cfg: ScenarioConfig, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(serialize(cfg), encoding="utf-8")
    return path


def default_scenario_path():
    return resources.files("stationpdm") / "data" / "default_scenario.json"


# --- default case study ------------------------------------------------------

DOORS = ("D1", "D2", "D3", "D4")
ELEVATORS = ("E1", "E2", "E3", "E4")


def _prior(node, stream, shares, concentration):
    return RoutingPrior(node, stream, {e: round(s * concentration, 6) for e, s in shares.items()})


def default_scenario() -> ScenarioConfig:
    """Synthetic two-level station: three street-side entrances, a main hall,
    an upper concourse and three platforms; four doors and four elevators."""
    E, D = "embarking", "disembarking"
    both = {E: "forward", D: "reverse"}
    edges = (
        Edge("in_north", "emb_in", "street_north", {E: "forward"}),
        Edge("in_south", "emb_in", "street_south", {E: "forward"}),
        Edge("in_parking", "emb_in", "parking", {E: "forward"}),
        Edge("door_D1", "street_north", "hall", both),
        Edge("door_D2", "street_north", "hall", both),
        Edge("door_D3", "street_south", "hall", both),
        Edge("door_D4", "street_south", "hall", both),
        Edge("lift_E1", "parking", "hall", both),
        Edge("stairs_1", "hall", "platform_1", both),
        Edge("lift_E2", "hall", "platform_1", both),
        Edge("stairs_2", "hall", "platform_2", both),
        Edge("lift_E3", "hall", "platform_2", both),
        Edge("hall_upper", "hall", "upper_concourse", both),
        Edge("stairs_3", "upper_concourse", "platform_3", both),
        Edge("lift_E4", "upper_concourse", "platform_3", both),
        Edge("arr_1", "dis_in", "platform_1", {D: "forward"}),
        Edge("arr_2", "dis_in", "platform_2", {D: "forward"}),
        Edge("arr_3", "dis_in", "platform_3", {D: "forward"}),
    )
    nodes = (
        "emb_in",
        "dis_in",
        "street_north",
        "street_south",
        "parking",
        "hall",
        "upper_concourse",
        "platform_1",
        "platform_2",
        "platform_3",
    )
    streams = {
        E: StreamSpec("emb_in", ("platform_1", "platform_2", "platform_3")),
        D: StreamSpec("dis_in", ("parking", "street_north", "street_south")),
    }
    priors = (
        _prior("emb_in", E, {"in_north": 0.55, "in_south": 0.35, "in_parking": 0.10}, 40),
        _prior("street_north", E, {"door_D1": 0.70, "door_D2": 0.30}, 20),
        _prior("street_south", E, {"door_D3": 0.35, "door_D4": 0.65}, 20),
        _prior(
            "hall",
            E,
            {"hall_upper": 0.30, "lift_E2": 0.06, "lift_E3": 0.04, "stairs_1": 0.30, "stairs_2": 0.30},
            30,
        ),
        _prior("upper_concourse", E, {"lift_E4": 0.15, "stairs_3": 0.85}, 20),
        _prior("dis_in", D, {"arr_1": 0.40, "arr_2": 0.35, "arr_3": 0.25}, 40),
        _prior("platform_1", D, {"lift_E2": 0.10, "stairs_1": 0.90}, 20),
        _prior("platform_2", D, {"lift_E3": 0.08, "stairs_2": 0.92}, 20),
        _prior("platform_3", D, {"lift_E4": 0.15, "stairs_3": 0.85}, 20),
        _prior(
            "hall",
            D,
            {"door_D1": 0.35, "door_D2": 0.15, "door_D3": 0.15, "door_D4": 0.25, "lift_E1": 0.10},
            30,
        ),
    )
    graph = StationGraph(nodes, edges, streams, priors)

    T = 24
    season = [1.0 + 0.15 * math.sin(2 * math.pi * (t - 3) / 12) for t in range(T)]
    demand = DemandProfile(
        {
            E: np.array([round(90000 * s) for s in season], dtype=float),
            D: np.array([round(85000 * s) for s in season], dtype=float),
        }
    )

    assets = tuple(AssetBinding(d, "door", f"door_{d}") for d in DOORS) + tuple(
        AssetBinding(e, "elevator", f"lift_{e}") for e in ELEVATORS
    )
    groups = (AssetGroup("doors", DOORS), AssetGroup("elevators", ELEVATORS))

    # minor cycle limits; medium and major scale these up
    minor_cycles = {
        "D1": 350000, "D2": 180000, "D3": 250000, "D4": 260000,
        "E1": 60000, "E2": 35000, "E3": 45000, "E4": 30000,
    }
    nominal = {}
    for a, c in minor_cycles.items():
        age = 18 if a in DOORS else 15
        nominal[(a, MaintenanceCategory.MINOR)] = (age, c)
        nominal[(a, MaintenanceCategory.MEDIUM)] = (2 * age, 2.5 * c)
        nominal[(a, MaintenanceCategory.MAJOR)] = (4 * age, 6 * c)
    thresholds = ThresholdModel(nominal, 0.10, 0.10)

    service, disruption, penalty = {}, {}, {}
    unit = {
        "door": {"service": (300, 800, 2000), "disruption": (50, 120, 300), "penalty": (250, 400, 800)},
        "elevator": {"service": (500, 1500, 4000), "disruption": (150, 400, 900), "penalty": (350, 600, 1200)},
    }
    for b in assets:
        u = unit[b.asset_class]
        for m in CATEGORIES:
            service[(b.asset_id, m)] = float(u["service"][m])
            disruption[(b.asset_id, m)] = float(u["disruption"][m])
            penalty[(b.asset_id, m)] = float(u["penalty"][m])
    costs = CostParameters(service, disruption, penalty, {"doors": 600.0, "elevators": 900.0})

    minor_interval = {"D1": 12, "D2": 13, "D3": 15, "D4": 14, "E1": 10, "E2": 11, "E3": 12, "E4": 12}
    calendar = {}
    for a, k in minor_interval.items():
        calendar[(a, MaintenanceCategory.MINOR)] = k
        calendar[(a, MaintenanceCategory.MEDIUM)] = 2 * k
        calendar[(a, MaintenanceCategory.MAJOR)] = 4 * k

    return ScenarioConfig(
        name="two-level station, 4 doors + 4 elevators (synthetic)",
        horizon=T,
        graph=graph,
        demand=demand,
        assets=assets,
        groups=groups,
        load_factors=LoadFactorModel(),
        thresholds=thresholds,
        costs=costs,
        calendar=calendar,
    )
