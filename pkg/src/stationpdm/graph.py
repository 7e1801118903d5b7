"""Reduced directed station graph.

Nodes are connection points (entrances, hall zones, elevator landings,
platforms); edges are aggregate movement directions. Each stream has a single
source and a set of absorbing sinks. An edge may be used by a stream in its
stored direction (``"forward"``) or against it (``"reverse"``), so a door edge
can carry embarking passengers inwards and disembarking passengers outwards.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from stationpdm import STREAMS

DIRECTIONS = ("forward", "reverse")


class CycleError(ValueError):
    """The stream subgraph contains a directed cycle."""

    def __init__(self, stream: str, cycle: list[str]):
        self.stream = stream
        self.cycle = cycle
        super().__init__(f"{stream} stream contains a cycle: {' -> '.join(cycle)}")


class InvalidGraph(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("invalid station graph:\n" + str(report))


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    streams: Mapping[str, str] = field(
        default_factory=lambda: {s: "forward" for s in STREAMS}
    )

    def arc(self, stream: str) -> tuple[str, str] | None:
        """Return the (tail, head) traversed by ``stream``, or None if not admissible."""
        direction = self.streams.get(stream)
        if direction == "forward":
            return self.source, self.target
        if direction == "reverse":
            return self.target, self.source
        return None


@dataclass(frozen=True)
class StreamSpec:
    source: str
    sinks: tuple[str, ...]


@dataclass(frozen=True)
class RoutingPrior:
    """Dirichlet concentration over a node's outgoing edges for one stream."""

    node: str
    stream: str
    concentration: Mapping[str, float]


@dataclass(frozen=True)
class StationGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    streams: Mapping[str, StreamSpec]
    priors: tuple[RoutingPrior, ...] = ()

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    def prior(self, node: str, stream: str) -> RoutingPrior | None:
        for p in self.priors:
            if p.node == node and p.stream == stream:
                return p
        return None

    def arcs(self, stream: str) -> list[tuple[str, str, str]]:
        """All (edge_id, tail, head) arcs usable by ``stream``, in edge order."""
        out = []
        for e in self.edges:
            arc = e.arc(stream)
            if arc is not None:
                out.append((e.id, arc[0], arc[1]))
        return out

    def reachable(self, stream: str) -> set[str]:
        spec = self.streams[stream]
        succ: dict[str, list[str]] = {}
        for _, u, v in self.arcs(stream):
            succ.setdefault(u, []).append(v)
        seen = {spec.source}
        stack = [spec.source]
        while stack:
            u = stack.pop()
            for v in succ.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def admissible_out(self, stream: str) -> dict[str, list[str]]:
        """Outgoing admissible edge ids per stream-reachable node, sorted by edge id."""
        reach = self.reachable(stream)
        out: dict[str, list[str]] = {v: [] for v in reach}
        for eid, u, _ in self.arcs(stream):
            if u in reach:
                out[u].append(eid)
        for v in out:
            out[v].sort()
        return out


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    nodes: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, nodes=()) -> None:
        self.violations.append(Violation(code, message, tuple(nodes)))

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __str__(self) -> str:
        return "\n".join(str(v) for v in self.violations) or "valid"


def _find_cycle(succ: dict[str, list[str]], roots: list[str]) -> list[str] | None:
    """Return one directed cycle (first node repeated at the end) or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[str, int] = {}
    for root in roots:
        if colour.get(root, WHITE) != WHITE:
            continue
        path = [root]
        iters = [iter(sorted(succ.get(root, ())))]
        colour[root] = GREY
        while iters:
            nxt = next(iters[-1], None)
            if nxt is None:
                colour[path.pop()] = BLACK
                iters.pop()
                continue
            state = colour.get(nxt, WHITE)
            if state == GREY:
                return path[path.index(nxt):] + [nxt]
            if state == WHITE:
                colour[nxt] = GREY
                path.append(nxt)
                iters.append(iter(sorted(succ.get(nxt, ()))))
    return None


def _stream_successors(graph: StationGraph, stream: str) -> dict[str, list[str]]:
    reach = graph.reachable(stream)
    succ: dict[str, list[str]] = {}
    for _, u, v in graph.arcs(stream):
        if u in reach:
            succ.setdefault(u, []).append(v)
    return succ


def validate_graph(graph: StationGraph) -> ValidationReport:
    """Check every structural invariant and collect the violations."""
    report = ValidationReport()

    node_set = set(graph.nodes)
    if len(node_set) != len(graph.nodes):
        dups = sorted({n for n in graph.nodes if graph.nodes.count(n) > 1})
        report.add("duplicate-node", f"duplicate node labels: {dups}", dups)
    ids = [e.id for e in graph.edges]
    if len(set(ids)) != len(ids):
        dups = sorted({i for i in ids if ids.count(i) > 1})
        report.add("duplicate-edge", f"duplicate edge ids: {dups}")

    endpoints_ok = True
    for e in graph.edges:
        for end in (e.source, e.target):
            if end not in node_set:
                endpoints_ok = False
                report.add("unknown-node", f"edge {e.id} references unknown node {end!r}", [end])
        for s, direction in e.streams.items():
            if s not in STREAMS:
                report.add("unknown-stream", f"edge {e.id} names unknown stream {s!r}")
            if direction not in DIRECTIONS:
                report.add("bad-direction", f"edge {e.id}: direction {direction!r} for {s}")

    for s in STREAMS:
        if s not in graph.streams:
            report.add("missing-stream", f"no source/sinks declared for the {s} stream")
    for s, spec in graph.streams.items():
        if s not in STREAMS:
            report.add("unknown-stream", f"stream {s!r} is not one of {STREAMS}")
            continue
        for v in (spec.source, *spec.sinks):
            if v not in node_set:
                endpoints_ok = False
                report.add("unknown-node", f"{s} stream references unknown node {v!r}", [v])
        if spec.source in spec.sinks:
            report.add("source-is-sink", f"{s} source {spec.source} is also a sink", [spec.source])
        if not spec.sinks:
            report.add("no-sinks", f"{s} stream has no sink nodes")

    for p in graph.priors:
        if p.node not in node_set:
            report.add("unknown-node", f"routing prior on unknown node {p.node!r}", [p.node])
        if p.stream not in STREAMS:
            report.add("unknown-stream", f"routing prior at {p.node} names stream {p.stream!r}")
    seen_priors = set()
    for p in graph.priors:
        key = (p.node, p.stream)
        if key in seen_priors:
            report.add("duplicate-prior", f"more than one {p.stream} prior at {p.node}", [p.node])
        seen_priors.add(key)

    if not endpoints_ok:
        return report

    for s in STREAMS:
        if s not in graph.streams:
            continue
        spec = graph.streams[s]
        succ = _stream_successors(graph, s)
        cycle = _find_cycle(succ, [spec.source])
        if cycle is not None:
            report.add(
                "cycle",
                f"{s} stream has a directed cycle: {' -> '.join(cycle)}",
                cycle[:-1],
            )
        sinks = set(spec.sinks)
        for v, out in sorted(graph.admissible_out(s).items()):
            if v in sinks:
                if out:
                    report.add("sink-has-outflow", f"{s} sink {v} has outgoing edges {out}", [v])
                continue
            if not out:
                report.add("dead-end", f"{s} flow reaching {v} has no admissible exit", [v])
                continue
            prior = graph.prior(v, s)
            if len(out) >= 2 and prior is None:
                report.add("missing-prior", f"branching node {v} has no {s} routing prior", [v])
            if prior is not None:
                if sorted(prior.concentration) != out:
                    report.add(
                        "arity-mismatch",
                        f"{s} prior at {v} covers {sorted(prior.concentration)} "
                        f"(length {len(prior.concentration)}) but admissible out-edges are "
                        f"{out} (degree {len(out)})",
                        [v],
                    )
                bad = sorted(k for k, a in prior.concentration.items() if not a > 0)
                if bad:
                    report.add("nonpositive-concentration", f"{s} prior at {v}: non-positive concentration on {bad}", [v])
    return report


def topological_order(graph: StationGraph, stream: str) -> list[str]:
    """Stream-reachable nodes so that every admissible arc points forward.

    Among the nodes ready at each step the smallest label is taken first,
    which makes the order unique.
    """
    if stream not in graph.streams:
        raise KeyError(f"graph declares no {stream} stream")
    reach = graph.reachable(stream)
    succ = _stream_successors(graph, stream)
    indeg = {v: 0 for v in reach}
    for u, vs in succ.items():
        for v in vs:
            indeg[v] += 1
    ready = [v for v, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in succ.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != len(reach):
        cycle = _find_cycle(succ, [graph.streams[stream].source]) or sorted(set(reach) - set(order))
        raise CycleError(stream, cycle)
    return order
