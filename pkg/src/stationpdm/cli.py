"""Command-line front end.

    stationpdm validate --config scenario.json
    stationpdm simulate --config scenario.json --out results/
    stationpdm schedule --config scenario.json --out results/ [--seed N] [--samples S]

Exit codes: 0 success, 2 invalid or unreadable configuration, 3 runtime error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from stationpdm import __version__, pipeline
from stationpdm.flow import edge_flow_summary
from stationpdm.loads import cumulative_to_csv, loads_to_csv
from stationpdm.scenario import ParseError, ValidationError, load_config
from stationpdm.scheduler import plan_to_csv

log = logging.getLogger("stationpdm")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def _write_simulation(sim: pipeline.SimulationResult, out: Path) -> list[Path]:
    return [
        edge_flow_summary(sim.ensemble).to_csv(out / "edge_flows.csv"),
        loads_to_csv(sim.trajectories, out / "loads.csv"),
        cumulative_to_csv(sim.trajectories, out / "cumulative_cycles.csv"),
    ]


def _write_schedule(res: pipeline.ScheduleResult, out: Path) -> list[Path]:
    files = [
        res.table.to_csv(out / "probabilities.csv"),
        plan_to_csv(res.proposed, out / "plan_proposed.csv"),
        plan_to_csv(res.calendar, out / "plan_calendar.csv"),
        res.comparison.to_csv(out / "comparison.csv"),
    ]
    summary = res.comparison.as_dict()
    summary["solver"] = {
        "optimal": res.proposed.optimal,
        "lower_bound": res.proposed.lower_bound,
        "gap": res.proposed.gap,
        "nodes": res.proposed.nodes,
    }
    summary["due_items"] = [
        {
            "asset_id": it.asset_id,
            "category": it.category.label,
            "first_due": it.first_due,
            "earliest": it.earliest,
            "deadline": it.deadline,
        }
        for it in res.demand.items
    ]
    path = out / "comparison.json"
    path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    files.append(path)
    return files


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: str
    config_sha256: str
    scenario: str
    seed: int
    samples: int
    out_dir: str
    started_utc: str
    finished_utc: str
    files: dict[str, str]
    version: str = __version__

    def write(self, out: Path) -> Path:
        path = out / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")
        return path


def _run(command: str, config: str | Path, out_dir: str | Path, seed, samples, threads) -> RunManifest:
    started = _now()
    cfg = load_config(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seed = cfg.sampler.seed if seed is None else int(seed)
    samples = cfg.sampler.samples if samples is None else int(samples)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    sim = pipeline.simulate(cfg, seed, samples, max(1, threads))
    files = _write_simulation(sim, out)
    if command == "schedule":
        res = pipeline.schedule(cfg, simulation=sim)
        files += _write_schedule(res, out)
        c = res.comparison
        log.info(
            "sessions: calendar %d, proposed %d; expected cost: calendar %.2f, proposed %.2f",
            c.total_sessions("calendar"),
            c.total_sessions("proposed"),
            c.costs["calendar"]["total"],
            c.costs["proposed"]["total"],
        )
    manifest = RunManifest(
        command=command,
        config=str(config),
        config_sha256=_sha256(Path(config)),
        scenario=cfg.name,
        seed=seed,
        samples=samples,
        out_dir=str(out),
        started_utc=started,
        finished_utc=_now(),
        files={p.name: _sha256(p) for p in files},
    )
    manifest.write(out)
    return manifest


def cmd_simulate(config, out_dir, seed: int | None = None, samples: int | None = None, threads: int = 1) -> RunManifest:
    """Edge-flow summary, per-asset loads and cumulative cycles, plus the manifest."""
    return _run("simulate", config, out_dir, seed, samples, threads)


def cmd_schedule(config, out_dir, seed: int | None = None, samples: int | None = None, threads: int = 1) -> RunManifest:
    """Everything from cmd_simulate, then probabilities, both plans and their comparison."""
    return _run("schedule", config, out_dir, seed, samples, threads)


def cmd_validate(config) -> tuple[int, str]:
    """(exit status, human-readable report)."""
    try:
        cfg = load_config(config)
    except ParseError as exc:
        return EXIT_INVALID, f"parse error: {exc}"
    except ValidationError as exc:
        return EXIT_INVALID, str(exc)
    except OSError as exc:
        return EXIT_INVALID, f"cannot read {config}: {exc}"
    return EXIT_OK, f"{config}: valid ({len(cfg.assets)} assets, horizon {cfg.horizon})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stationpdm", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file and list every violation")
    p.add_argument("--config", required=True, type=Path)

    for name, help_ in (
        ("simulate", "sample flows and loads, write summaries"),
        ("schedule", "full pipeline: probabilities, optimized and calendar plans, comparison"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, default=Path("results"))
        p.add_argument("--seed", type=int, help="override the scenario seed (unsigned 64-bit)")
        p.add_argument("--samples", type=int, help="override the Monte Carlo sample count")
        p.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
        p.add_argument("--validate-only", action="store_true", help="validate the scenario and exit")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    status, report = cmd_validate(args.config)
    if status != EXIT_OK or args.command == "validate" or args.validate_only:
        print(report, file=sys.stdout if status == EXIT_OK else sys.stderr)
        return status
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("--seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INVALID
    if args.samples is not None and args.samples < 1:
        print("--samples must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    run = cmd_schedule if args.command == "schedule" else cmd_simulate
    try:
        manifest = run(args.config, args.out, args.seed, args.samples, args.threads)
    except Exception as exc:  # noqa: BLE001 - surfaced as exit status
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME
    log.info("wrote %d files to %s", len(manifest.files) + 1, manifest.out_dir)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
