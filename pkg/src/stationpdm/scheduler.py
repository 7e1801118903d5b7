"""Grouped maintenance scheduling.

Each due (asset, category) item is executed once inside its admissible window.
The expected cost is service + setup + disruption + delay, where setup is paid
once per (group, period) session and delay accrues ``penalty * P[t]`` for every
period from the item's first-due period until it is satisfied. An item is
satisfied by its own execution or, once it is due, by the execution of a
higher category on the same asset (that execution resets its counters).

Costs are evaluated in exact arithmetic: every coefficient and probability is
a binary float, so scaled to a common power of two the objective becomes an
integer. The brute-force oracle and the branch-and-bound solver therefore
agree exactly, ties included.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import time
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from stationpdm._tables import write_csv
from stationpdm.maintenance import CATEGORIES, MaintenanceCategory, ProbabilityTable

log = logging.getLogger(__name__)

ItemKey = tuple[str, MaintenanceCategory]

MAX_BRUTE_FORCE_PLANS = 10**7


class StructuralViolation(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class SearchSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class CostParameters:
    service: Mapping[ItemKey, float]
    disruption: Mapping[ItemKey, float]
    delay_penalty: Mapping[ItemKey, float]
    setup: Mapping[str, float]

    def __post_init__(self):
        for name in ("service", "disruption", "delay_penalty", "setup"):
            for k, v in getattr(self, name).items():
                if not (math.isfinite(v) and v >= 0):
                    raise ValueError(f"{name}[{k}] must be finite and >= 0, got {v}")

    def scaled(self, factor: float) -> "CostParameters":
        return CostParameters(
            {k: v * factor for k, v in self.service.items()},
            {k: v * factor for k, v in self.disruption.items()},
            {k: v * factor for k, v in self.delay_penalty.items()},
            {k: v * factor for k, v in self.setup.items()},
        )


@dataclass(frozen=True)
class AssetGroup:
    id: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class DueItem:
    asset_id: str
    category: MaintenanceCategory
    probability: np.ndarray  # P[t] for t = 1..T
    first_due: int | None
    earliest: int = 1
    deadline: int | None = None

    @property
    def key(self) -> ItemKey:
        return (self.asset_id, self.category)

    @property
    def reference(self) -> int:
        """Period from which a higher-category execution satisfies this item."""
        return self.first_due if self.first_due is not None else self.earliest

    def window(self, horizon: int) -> range:
        return range(self.earliest, (self.deadline or horizon) + 1)


def _item_order(key: ItemKey):
    return (key[0], -int(key[1]))


@dataclass(frozen=True)
class MaintenanceDemand:
    horizon: int
    items: tuple[DueItem, ...]

    def __post_init__(self):
        items = tuple(sorted(self.items, key=lambda it: _item_order(it.key)))
        object.__setattr__(self, "items", items)
        problems = []
        keys = [it.key for it in items]
        if len(set(keys)) != len(keys):
            problems.append("duplicate due items")
        for it in items:
            name = f"{it.asset_id}/{it.category.label}"
            if len(it.probability) != self.horizon:
                problems.append(f"{name}: probability series length != horizon")
            if it.first_due is None and it.deadline is None:
                problems.append(f"{name}: neither a first-due period nor a deadline")
            if not 1 <= it.earliest <= self.horizon:
                problems.append(f"{name}: earliest period {it.earliest} outside horizon")
            if it.deadline is not None and not it.earliest <= it.deadline <= self.horizon:
                problems.append(f"{name}: deadline {it.deadline} outside {it.earliest}..{self.horizon}")
            if it.first_due is not None and not 1 <= it.first_due <= self.horizon:
                problems.append(f"{name}: first-due period outside horizon")
        if problems:
            raise ValueError("; ".join(problems))

    def keys(self) -> list[ItemKey]:
        return [it.key for it in self.items]


def demand_from_table(
    table: ProbabilityTable,
    p_due: float = 0.5,
    p_release: float | None = None,
    deadlines: Mapping[ItemKey, int] | None = None,
    earliest_caps: Mapping[ItemKey, int] | None = None,
) -> MaintenanceDemand:
    """Derive due items from reaching probabilities.

    first-due = earliest t with P >= p_due; the item may be executed from the
    earliest t with P >= p_release (default p_due), brought forward to
    ``earliest_caps[key]`` when that is sooner.
    """
    p_release = p_due if p_release is None else p_release
    if not 0 < p_release <= p_due <= 1:
        raise ValueError("need 0 < p_release <= p_due <= 1")
    deadlines = dict(deadlines or {})
    caps = dict(earliest_caps or {})
    T = table.horizon
    items = []
    for i, a in enumerate(table.asset_ids):
        for m in CATEGORIES:
            p = np.asarray(table.reach_prob[i, m], dtype=float)
            due = np.flatnonzero(p >= p_due)
            first_due = int(due[0]) + 1 if due.size else None
            deadline = deadlines.get((a, m))
            if first_due is None and deadline is None:
                continue
            rel = np.flatnonzero(p >= p_release)
            earliest = int(rel[0]) + 1 if rel.size else 1
            cap = caps.get((a, m))
            if cap is not None and 1 <= cap <= T:
                earliest = min(earliest, int(cap))
            if deadline is not None:
                earliest = min(earliest, deadline)
            items.append(DueItem(a, m, p, first_due, earliest, deadline))
    return MaintenanceDemand(T, tuple(items))


@dataclass(frozen=True)
class CostBreakdown:
    service: float
    setup: float
    disruption: float
    delay: float
    total: float

    def as_dict(self) -> dict[str, float]:
        return {
            "service": self.service,
            "setup": self.setup,
            "disruption": self.disruption,
            "delay": self.delay,
            "total": self.total,
        }


@dataclass(frozen=True)
class SchedulePlan:
    """Executions (item -> period) with everything derived from them."""

    executions: Mapping[ItemKey, int]
    sessions: frozenset[tuple[str, int]]  # active (group, period) pairs
    satisfied: Mapping[ItemKey, int | None]
    covered_by: Mapping[ItemKey, ItemKey]
    modes: Mapping[ItemKey, str]
    policy: str = ""
    cost: CostBreakdown | None = None
    optimal: bool | None = None
    lower_bound: float | None = None
    gap: float | None = None
    nodes: int = 0
    warnings: tuple[str, ...] = ()

    @property
    def execution_set(self) -> set[tuple[str, MaintenanceCategory, int]]:
        return {(a, m, t) for (a, m), t in self.executions.items()}

    def session_count(self, group: str | None = None) -> int:
        return sum(1 for g, _ in self.sessions if group is None or g == group)

    def grouped_assets(self) -> set[str]:
        return {a for (a, _), mode in self.modes.items() if mode == "G" and (a, _) in self.executions}


def _dyadic(x: float) -> tuple[int, int]:
    """x == n / 2**e exactly."""
    n, d = float(x).as_integer_ratio()
    return n, d.bit_length() - 1


class _Objective:
    """Integer-valued objective for one (demand, costs, groups) instance."""

    def __init__(self, demand: MaintenanceDemand, params: CostParameters, groups: Sequence[AssetGroup]):
        self.demand = demand
        self.items = demand.items
        self.T = T = demand.horizon
        self.index = {it.key: k for k, it in enumerate(self.items)}
        self.group_of: dict[str, str] = {}
        for g in groups:
            for a in g.members:
                if a in self.group_of:
                    raise ValueError(f"asset {a} belongs to more than one group")
                self.group_of[a] = g.id
        for it in self.items:
            if it.asset_id not in self.group_of:
                raise ValueError(f"asset {it.asset_id} is in no group")
        self.group_ids = sorted({g.id for g in groups})

        raw = []  # (kind, index, value as dyadic)
        for k, it in enumerate(self.items):
            raw.append(("c", k, _dyadic(params.service.get(it.key, 0.0))))
            raw.append(("d", k, _dyadic(params.disruption.get(it.key, 0.0))))
            pen = _dyadic(params.delay_penalty.get(it.key, 0.0))
            start = it.first_due if it.first_due is not None else T + 1
            for t in range(start, T + 1):
                p = _dyadic(it.probability[t - 1])
                raw.append(("p", (k, t), (pen[0] * p[0], pen[1] + p[1])))
        for g in self.group_ids:
            raw.append(("s", g, _dyadic(params.setup.get(g, 0.0))))
        self.K = max([e for *_, (_, e) in raw], default=0)

        def scaled(v):
            return v[0] << (self.K - v[1])

        self.service = [0] * len(self.items)
        self.disruption = [0] * len(self.items)
        terms = [[0] * (T + 2) for _ in self.items]
        self.setup: dict[str, int] = {}
        for kind, where, v in raw:
            if kind == "c":
                self.service[where] = scaled(v)
            elif kind == "d":
                self.disruption[where] = scaled(v)
            elif kind == "p":
                terms[where[0]][where[1]] = scaled(v)
            else:
                self.setup[where] = scaled(v)
        # delay[k][s]: penalty when item k is first satisfied at period s (T+1 = never)
        self.delay = [list(itertools.accumulate([0] + row[1 : T + 1])) for row in terms]
        for row in self.delay:
            row.insert(0, 0)
        self.higher = [
            [h for h, other in enumerate(self.items) if other.asset_id == it.asset_id and other.category > it.category]
            for it in self.items
        ]

    def to_float(self, v: int) -> float:
        return float(Fraction(v, 1 << self.K))

    def satisfaction(self, executions: Mapping[int, int]) -> tuple[dict[int, int | None], dict[int, int]]:
        sat: dict[int, int | None] = {}
        cover: dict[int, int] = {}
        for k, it in enumerate(self.items):
            best = executions.get(k)
            best_h = None
            for h in self.higher[k]:
                p = executions.get(h)
                if p is not None and p >= it.reference and (best is None or p < best):
                    best, best_h = p, h
            sat[k] = best
            if best_h is not None and k not in executions:
                cover[k] = best_h
        return sat, cover

    def components(self, executions: Mapping[int, int]) -> tuple[int, int, int, int, list[int]]:
        sat, _ = self.satisfaction(executions)
        serv = sum(self.service[k] for k in executions)
        disr = sum(self.disruption[k] for k in executions)
        sessions = {(self.group_of[self.items[k].asset_id], p) for k, p in executions.items()}
        setup = sum(self.setup[g] for g, _ in sessions)
        unsatisfied = [k for k, s in sat.items() if s is None]
        delay = sum(self.delay[k][s if s is not None else self.T + 1] for k, s in sat.items())
        return serv, setup, disr, delay, unsatisfied

    def total(self, executions: Mapping[int, int]) -> int:
        serv, setup, disr, delay, _ = self.components(executions)
        return serv + setup + disr + delay

    def tie_key(self, executions: Mapping[int, int]) -> tuple:
        """Per item (period, 0) for its own execution, (cover period, 1) if covered."""
        sat, _ = self.satisfaction(executions)
        return tuple((executions[k], 0) if k in executions else (sat[k], 1) for k in range(len(self.items)))


def _keys_to_index(obj: _Objective, executions: Mapping[ItemKey, int]) -> dict[int, int]:
    out = {}
    for key, p in executions.items():
        key = (key[0], MaintenanceCategory.parse(key[1]))
        if key not in obj.index:
            raise StructuralViolation([f"execution of {key[0]}/{key[1].label} which is not due"])
        out[obj.index[key]] = int(p)
    return out


def _build_plan(
    obj: _Objective,
    executions: Mapping[int, int],
    policy: str,
    strict: bool = True,
    **extra,
) -> SchedulePlan:
    problems = []
    for k, p in executions.items():
        it = obj.items[k]
        if not 1 <= p <= obj.T:
            problems.append(f"{it.asset_id}/{it.category.label} executed at {p}, outside 1..{obj.T}")
        if it.deadline is not None and p > it.deadline:
            problems.append(f"{it.asset_id}/{it.category.label} executed at {p} after deadline {it.deadline}")
    serv, setup, disr, delay, unsatisfied = obj.components(executions)
    for k in unsatisfied:
        it = obj.items[k]
        problems.append(f"{it.asset_id}/{it.category.label} is never executed")
    if strict and problems:
        raise StructuralViolation(problems)
    sat, cover = obj.satisfaction(executions)
    by_session: dict[tuple[str, int], set[str]] = {}
    for k, p in executions.items():
        a = obj.items[k].asset_id
        by_session.setdefault((obj.group_of[a], p), set()).add(a)
    modes = {}
    for k, p in executions.items():
        a = obj.items[k].asset_id
        modes[obj.items[k].key] = "G" if len(by_session[(obj.group_of[a], p)]) >= 2 else "I"
    for k, h in cover.items():
        modes[obj.items[k].key] = modes[obj.items[h].key]
    cost = CostBreakdown(
        obj.to_float(serv),
        obj.to_float(setup),
        obj.to_float(disr),
        obj.to_float(delay),
        obj.to_float(serv + setup + disr + delay),
    )
    warnings = tuple(extra.pop("warnings", ())) + (tuple(problems) if not strict else ())
    return SchedulePlan(
        executions={obj.items[k].key: p for k, p in sorted(executions.items())},
        sessions=frozenset(by_session),
        satisfied={obj.items[k].key: s for k, s in sat.items()},
        covered_by={obj.items[k].key: obj.items[h].key for k, h in cover.items()},
        modes=modes,
        policy=policy,
        cost=cost,
        warnings=warnings,
        **extra,
    )


def make_plan(
    executions: Mapping[ItemKey, int],
    demand: MaintenanceDemand,
    params: CostParameters,
    groups: Sequence[AssetGroup],
    policy: str = "",
    strict: bool = True,
) -> SchedulePlan:
    obj = _Objective(demand, params, groups)
    return _build_plan(obj, _keys_to_index(obj, executions), policy, strict)


def evaluate_cost(
    plan: SchedulePlan,
    params: CostParameters,
    demand: MaintenanceDemand,
    groups: Sequence[AssetGroup],
    strict: bool = True,
) -> CostBreakdown:
    """Expected cost of ``plan``. With ``strict=False`` unexecuted items accrue
    delay to the end of the horizon instead of raising."""
    obj = _Objective(demand, params, groups)
    executions = _keys_to_index(obj, plan.executions)
    rebuilt = _build_plan(obj, executions, plan.policy, strict)
    if strict and set(plan.sessions) != set(rebuilt.sessions):
        raise StructuralViolation(["group activations do not match the executions"])
    return rebuilt.cost


# --- exhaustive oracle -------------------------------------------------------


def _enumerate(obj: _Objective):
    """Yield (cost, tie key, executions) for every feasible plan."""
    T = obj.T
    choices = []
    for k, it in enumerate(obj.items):
        opts: list[int | None] = list(it.window(T))
        if obj.higher[k]:
            opts.append(None)
        choices.append(opts)
    size = math.prod(len(c) for c in choices)
    if size > MAX_BRUTE_FORCE_PLANS:
        raise SearchSpaceTooLarge(f"{size} candidate plans exceed the {MAX_BRUTE_FORCE_PLANS} limit")
    for combo in itertools.product(*choices):
        executions = {k: p for k, p in enumerate(combo) if p is not None}
        serv, setup, disr, delay, unsatisfied = obj.components(executions)
        if unsatisfied:
            continue
        yield serv + setup + disr + delay, obj.tie_key(executions), executions


def brute_force_optima(
    demand: MaintenanceDemand, params: CostParameters, groups: Sequence[AssetGroup]
) -> tuple[float, list[dict[ItemKey, int]]]:
    """Optimal cost and every plan attaining it (as item -> period maps)."""
    obj = _Objective(demand, params, groups)
    best = None
    optima = []
    for cost, _, executions in _enumerate(obj):
        if best is None or cost < best:
            best, optima = cost, [executions]
        elif cost == best:
            optima.append(executions)
    if best is None:
        return 0.0, [{}]
    return obj.to_float(best), [{obj.items[k].key: p for k, p in ex.items()} for ex in optima]


def brute_force_schedule(
    demand: MaintenanceDemand, params: CostParameters, groups: Sequence[AssetGroup]
) -> SchedulePlan:
    obj = _Objective(demand, params, groups)
    best = None
    for cost, key, executions in _enumerate(obj):
        if best is None or (cost, key) < best[:2]:
            best = (cost, key, executions)
    executions = best[2] if best is not None else {}
    return _build_plan(obj, executions, "brute-force", optimal=True)


# --- branch and bound --------------------------------------------------------


def _stab_count(intervals: Iterable[tuple[int, int]]) -> int:
    """Minimum number of points hitting every interval (greedy by right end)."""
    count = 0
    last = -1
    for lo, hi in sorted(intervals, key=lambda iv: iv[1]):
        if lo > last:
            count += 1
            last = hi
    return count


class _BranchAndBound:
    def __init__(self, obj: _Objective, time_limit: float | None, node_limit: int | None):
        self.obj = obj
        self.n = len(obj.items)
        self.time_limit = time_limit
        self.node_limit = node_limit
        T = obj.T
        self.windows = [(it.window(T).start, it.window(T).stop - 1) for it in obj.items]
        self.groups = [obj.group_of[it.asset_id] for it in obj.items]
        # admissible per-item bound: cheapest option with setup treated as free
        lb = []
        for k, it in enumerate(obj.items):
            cover_min = None
            for h in obj.higher[k]:
                lo, hi = self.windows[h]
                p = max(lo, it.reference)
                if p <= hi and (cover_min is None or p < cover_min):
                    cover_min = p
            first = self.windows[k][0] if cover_min is None else min(self.windows[k][0], cover_min)
            own = obj.service[k] + obj.disruption[k] + obj.delay[k][first]
            absorbed = obj.delay[k][cover_min] if cover_min is not None else None
            lb.append(own if absorbed is None else min(own, absorbed))
        self.item_lb = lb
        self.suffix_lb = list(itertools.accumulate(reversed(lb + [0])))[::-1]
        # items that can never be covered must open (or join) a session
        self.necessary = {g: [] for g in obj.group_ids}
        for k in range(self.n):
            if not obj.higher[k]:
                self.necessary[self.groups[k]].append(k)

    def setup_bound(self, depth: int, used: Mapping[str, Mapping[int, int]]) -> int:
        bound = 0
        for g, members in self.necessary.items():
            periods = used.get(g, {})
            ivs = []
            for k in members:
                if k < depth:
                    continue
                lo, hi = self.windows[k]
                if not any(lo <= p <= hi for p, c in periods.items() if c):
                    ivs.append((lo, hi))
            if ivs:
                bound += self.obj.setup[g] * _stab_count(ivs)
        return bound

    def solve(self, incumbent: Mapping[int, int] | None = None):
        obj = self.obj
        self.start = time.monotonic()
        self.nodes = 0
        self.aborted = False
        self.best_cost = None
        self.best_key = None
        self.best = None
        if incumbent is not None:
            self.best_cost = obj.total(incumbent)
            self.best_key = obj.tie_key(incumbent)
            self.best = dict(incumbent)
        self.root_lb = self.suffix_lb[0] + self.setup_bound(0, {})
        self._dfs(0, {}, {}, 0, [])
        return self.best

    def _prunable(self, bound: int, prefix: list) -> bool:
        if self.best_cost is None:
            return False
        if bound > self.best_cost:
            return True
        return bound == self.best_cost and tuple(prefix) > self.best_key[: len(prefix)]

    def _dfs(self, depth, executions, used, partial, prefix):
        if self.aborted:
            return
        self.nodes += 1
        if (self.node_limit is not None and self.nodes > self.node_limit) or (
            self.nodes % 2048 == 0
            and self.time_limit is not None
            and time.monotonic() - self.start > self.time_limit
        ):
            self.aborted = True
            return
        obj = self.obj
        if depth == self.n:
            key = tuple(prefix)
            if self.best_cost is None or (partial, key) < (self.best_cost, self.best_key):
                self.best_cost, self.best_key, self.best = partial, key, dict(executions)
            return
        k = depth
        it = obj.items[k]
        g = self.groups[k]
        cover = None
        for h in obj.higher[k]:
            p = executions.get(h)
            if p is not None and p >= it.reference and (cover is None or p < cover):
                cover = p
        options = []
        lo, hi = self.windows[k]
        for p in range(lo, hi + 1):
            options.append(((p, 0), p))
        if cover is not None:
            options.append(((cover, 1), None))
        options.sort(key=lambda o: o[0])
        gused = used.setdefault(g, {})
        for key, p in options:
            if p is None:
                cost = obj.delay[k][cover]
                new_session = False
            else:
                sat = p if cover is None else min(p, cover)
                cost = obj.service[k] + obj.disruption[k] + obj.delay[k][sat]
                new_session = not gused.get(p)
                if new_session:
                    cost += obj.setup[g]
            value = partial + cost
            prefix.append(key)
            if p is not None:
                executions[k] = p
                gused[p] = gused.get(p, 0) + 1
            bound = value + self.suffix_lb[k + 1] + self.setup_bound(k + 1, used)
            if not self._prunable(bound, prefix):
                self._dfs(depth + 1, executions, used, value, prefix)
            if p is not None:
                del executions[k]
                gused[p] -= 1
            prefix.pop()
            if self.aborted:
                return


def optimize_schedule(
    demand: MaintenanceDemand,
    params: CostParameters,
    groups: Sequence[AssetGroup],
    time_limit: float | None = 60.0,
    node_limit: int | None = None,
    incumbent: Mapping[ItemKey, int] | None = None,
) -> SchedulePlan:
    """Minimum expected-cost plan by depth-first branch and bound.

    The objective separates by asset group (setup is charged per group), so
    each group is searched on its own and the optima are merged. Items are
    branched in (asset label, severity descending) order and options in period
    order, so the first optimum met is the tie-break winner; merging per-group
    winners gives the overall winner because groups share no items. If the
    budget runs out the incumbent is returned with ``optimal=False`` and the
    gap to the root lower bound.
    """
    obj = _Objective(demand, params, groups)
    deadline = None if time_limit is None else time.monotonic() + time_limit
    seed = None if incumbent is None else _keys_to_index(obj, incumbent)
    if seed is not None and (
        obj.components(seed)[4] or any(p not in obj.items[k].window(obj.T) for k, p in seed.items())
    ):
        seed = None

    executions: dict[ItemKey, int] = {}
    optimal = True
    nodes = 0
    best_total = lower_total = Fraction(0)
    for g in groups:
        members = set(g.members)
        items = tuple(it for it in demand.items if it.asset_id in members)
        if not items:
            continue
        sub = _Objective(MaintenanceDemand(demand.horizon, items), params, [g])
        if seed is not None:
            start = {sub.index[obj.items[k].key]: p for k, p in seed.items() if obj.items[k].key in sub.index}
        else:
            # every item at the start of its window is always feasible
            start = {k: it.window(sub.T).start for k, it in enumerate(sub.items)}
        remaining = None if deadline is None else max(0.0, deadline - time.monotonic())
        budget = None if node_limit is None else max(1, node_limit - nodes)
        solver = _BranchAndBound(sub, remaining, budget)
        best = solver.solve(start)
        nodes += solver.nodes
        optimal = optimal and not solver.aborted
        scale = 1 << sub.K
        best_total += Fraction(solver.best_cost, scale)
        lb = solver.best_cost if not solver.aborted else min(solver.root_lb, solver.best_cost)
        lower_total += Fraction(lb, scale)
        executions.update({sub.items[k].key: p for k, p in best.items()})
    return _build_plan(
        obj,
        _keys_to_index(obj, executions),
        "proposed",
        optimal=optimal,
        lower_bound=float(lower_total),
        gap=float(best_total - lower_total),
        nodes=nodes,
    )


# --- calendar baseline -------------------------------------------------------


def calendar_schedule(
    demand: MaintenanceDemand,
    intervals: Mapping[ItemKey, int],
    groups: Sequence[AssetGroup],
    params: CostParameters | None = None,
) -> SchedulePlan:
    """Execute every due item at its nominal calendar period, ignoring usage.

    Items whose interval lies beyond the horizon (or that have none) are
    skipped with a warning; the returned plan is then incomplete.
    """
    executions = {}
    warnings = []
    for it in demand.items:
        interval = intervals.get(it.key)
        if interval is None or not 1 <= interval <= demand.horizon:
            msg = f"{it.asset_id}/{it.category.label}: calendar interval {interval} outside horizon, skipped"
            log.warning(msg)
            warnings.append(msg)
            continue
        executions[it.key] = int(interval)
    params = params or CostParameters({}, {}, {}, {})
    obj = _Objective(demand, params, groups)
    return _build_plan(obj, _keys_to_index(obj, executions), "calendar", strict=False, warnings=warnings)


# --- comparison --------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    labels: tuple[str, str]
    rows: tuple[dict, ...]
    sessions: Mapping[str, Mapping[str, int]]
    grouped_assets: Mapping[str, int]
    costs: Mapping[str, Mapping[str, float]]
    delta: Mapping[str, float]
    warnings: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def total_sessions(self, label: str) -> int:
        return self.sessions[label]["total"]

    def csv_rows(self):
        a, b = self.labels
        for r in self.rows:
            yield [
                r["asset_id"],
                r["category"],
                "" if r[a] is None else r[a],
                "" if r[b] is None else r[b],
                r[f"{a}_mode"],
                r[f"{b}_mode"],
            ]

    def to_csv(self, path: str | Path) -> Path:
        a, b = self.labels
        header = ["asset_id", "category", f"{a}_period", f"{b}_period", f"{a}_mode", f"{b}_mode"]
        return write_csv(path, header, self.csv_rows())

    def as_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "rows": list(self.rows),
            "sessions": {k: dict(v) for k, v in self.sessions.items()},
            "grouped_assets": dict(self.grouped_assets),
            "costs": {k: dict(v) for k, v in self.costs.items()},
            "delta": dict(self.delta),
            "warnings": {k: list(v) for k, v in self.warnings.items()},
        }

    def to_json(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.as_dict(), indent=2) + "\n", encoding="utf-8")
        return path


def compare_policies(
    plan_a: SchedulePlan,
    plan_b: SchedulePlan,
    params: CostParameters,
    demand: MaintenanceDemand,
    groups: Sequence[AssetGroup],
    labels: tuple[str, str] = ("calendar", "proposed"),
) -> ComparisonReport:
    """Side-by-side table of two plans; deltas are ``b - a``."""
    obj = _Objective(demand, params, groups)
    plans = {}
    for label, plan in zip(labels, (plan_a, plan_b)):
        plans[label] = _build_plan(obj, _keys_to_index(obj, plan.executions), plan.policy, strict=False)
    rows = []
    for it in demand.items:
        row = {"asset_id": it.asset_id, "category": it.category.label}
        for label in labels:
            p = plans[label]
            row[label] = p.satisfied.get(it.key)
            row[f"{label}_mode"] = p.modes.get(it.key, "-")
        rows.append(row)
    sessions = {}
    grouped = {}
    costs = {}
    for label in labels:
        p = plans[label]
        counts = {g: p.session_count(g) for g in obj.group_ids}
        counts["total"] = p.session_count()
        sessions[label] = counts
        grouped[label] = len(p.grouped_assets())
        costs[label] = p.cost.as_dict()
    a, b = labels
    delta = {k: costs[b][k] - costs[a][k] for k in costs[a]}
    warnings = {}
    for label, plan in zip(labels, (plan_a, plan_b)):
        merged = list(plan.warnings)
        merged += [w for w in plans[label].warnings if w not in merged]
        warnings[label] = tuple(merged)
    return ComparisonReport(tuple(labels), tuple(rows), sessions, grouped, costs, delta, warnings)


def plan_to_csv(plan: SchedulePlan, path: str | Path) -> Path:
    rows = []
    for key, s in sorted(plan.satisfied.items(), key=lambda kv: _item_order(kv[0])):
        own = plan.executions.get(key)
        cover = plan.covered_by.get(key)
        rows.append(
            [
                key[0],
                key[1].label,
                "" if own is None else own,
                "" if s is None else s,
                plan.modes.get(key, "-"),
                "" if cover is None else f"{cover[0]}/{cover[1].label}",
            ]
        )
    return write_csv(
        path, ["asset_id", "category", "executed", "satisfied", "mode", "covered_by"], rows
    )
