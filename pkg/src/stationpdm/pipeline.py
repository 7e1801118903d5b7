"""End-to-end runs from a scenario: flows -> loads -> probabilities -> plans."""

from __future__ import annotations

from dataclasses import dataclass

from stationpdm.flow import FlowEnsemble, sample_ensemble
from stationpdm.loads import LoadTrajectory, compute_loads
from stationpdm.maintenance import MaintenanceCounters, ProbabilityTable, build_counters, reaching_probability
from stationpdm.scenario import ScenarioConfig
from stationpdm.scheduler import (
    ComparisonReport,
    MaintenanceDemand,
    SchedulePlan,
    calendar_schedule,
    compare_policies,
    demand_from_table,
    optimize_schedule,
)


@dataclass(frozen=True)
class SimulationResult:
    seed: int
    ensemble: FlowEnsemble
    trajectories: list[LoadTrajectory]


@dataclass(frozen=True)
class ScheduleResult:
    simulation: SimulationResult
    counters: MaintenanceCounters
    table: ProbabilityTable
    demand: MaintenanceDemand
    calendar: SchedulePlan
    proposed: SchedulePlan
    comparison: ComparisonReport


def simulate(cfg: ScenarioConfig, seed: int | None = None, samples: int | None = None, threads: int = 1) -> SimulationResult:
    seed = cfg.sampler.seed if seed is None else int(seed)
    samples = cfg.sampler.samples if samples is None else int(samples)
    ensemble = sample_ensemble(cfg.graph, cfg.demand, samples, seed, cfg.sampler.routing_mode, threads)
    trajectories = compute_loads(ensemble, list(cfg.assets), cfg.load_factors, seed)
    return SimulationResult(seed, ensemble, trajectories)


def schedule(
    cfg: ScenarioConfig,
    seed: int | None = None,
    samples: int | None = None,
    threads: int = 1,
    simulation: SimulationResult | None = None,
) -> ScheduleResult:
    sim = simulation or simulate(cfg, seed, samples, threads)
    counters = build_counters(sim.trajectories)
    table = reaching_probability(counters, cfg.thresholds, sim.seed, cfg.sampler.threshold_draws)
    s = cfg.scheduling
    caps = dict(cfg.calendar) if s.calendar_admissible else None
    demand = demand_from_table(table, s.p_due, s.p_release, s.deadlines, caps)
    groups = list(cfg.groups)
    calendar = calendar_schedule(demand, cfg.calendar, groups, cfg.costs)
    # the calendar plan is a feasible starting incumbent; it only speeds up pruning
    warm = calendar.executions if not calendar.warnings else None
    proposed = optimize_schedule(demand, cfg.costs, groups, time_limit=s.time_limit, incumbent=warm)
    comparison = compare_policies(calendar, proposed, cfg.costs, demand, groups)
    return ScheduleResult(sim, counters, table, demand, calendar, proposed, comparison)
