import math

import numpy as np
import pytest
from helpers import D, E, chain, diamond, random_dag
from hypothesis import given, settings
from hypothesis import strategies as st

from stationpdm import STREAMS
from stationpdm._random import FLOW_STAGE, substream
from stationpdm.flow import (
    DemandProfile,
    edge_flow_summary,
    sample_ensemble,
    sample_flow_field,
)
from stationpdm.graph import InvalidGraph


def demand(emb, dis=None):
    emb = np.atleast_1d(np.asarray(emb, dtype=float))
    dis = np.zeros_like(emb) if dis is None else np.atleast_1d(np.asarray(dis, dtype=float))
    return DemandProfile({E: emb, D: dis})


def assert_conserved(graph, flows):
    """flows: (..., stream, edge, period) integer array."""
    index = graph.edge_index()
    for si, s in enumerate(STREAMS):
        spec = graph.streams[s]
        reach = graph.reachable(s)
        arcs = graph.arcs(s)
        for v in reach - {spec.source} - set(spec.sinks):
            inflow = sum(flows[..., si, index[e], :] for e, _, h in arcs if h == v)
            outflow = sum(flows[..., si, index[e], :] for e, t, _ in arcs if t == v)
            assert np.array_equal(inflow, outflow), (s, v)


def test_zero_demand_gives_zero_flows():
    g = diamond()
    f = sample_flow_field(g, demand(np.zeros(4), np.zeros(4)), np.random.default_rng(0))
    assert not f.flows.any() and not f.totals.any()
    ens = sample_ensemble(g, demand(np.zeros(3)), 100, master_seed=1)
    assert ens.samples == 100 and not ens.flows.any()


def test_chain_carries_single_draw():
    g = chain(3)
    f = sample_flow_field(g, demand([5.0]), np.random.default_rng(3))
    n = f.totals[0, 0]
    emb = f.stream_flow(E)
    assert emb[0, 0] == emb[1, 0] == n
    assert not f.stream_flow(D).any()


def test_disembarking_uses_reversed_edges():
    g = chain(3)
    f = sample_flow_field(g, demand([0.0], [40.0]), np.random.default_rng(0))
    assert f.totals[1, 0] > 0
    assert f.stream_flow(D)[0, 0] == f.stream_flow(D)[1, 0] == f.totals[1, 0]
    assert np.array_equal(f.total_flow, f.stream_flow(D))


def test_single_sample_is_deterministic():
    g = diamond()
    dem = demand([100.0, 200.0], [50.0, 80.0])
    a = sample_ensemble(g, dem, 1, master_seed=42)
    b = sample_ensemble(g, dem, 1, master_seed=42)
    assert a.flows.tobytes() == b.flows.tobytes()
    assert a.totals.tobytes() == b.totals.tobytes()


def test_ensemble_matches_standalone_substream():
    g, dem = diamond(), demand([300.0, 10.0], [20.0, 30.0])
    ens = sample_ensemble(g, dem, 5, master_seed=9)
    for k in range(5):
        f = sample_flow_field(g, dem, substream(9, FLOW_STAGE, k), sample_index=k)
        assert np.array_equal(f.flows, ens.field(k).flows)


def test_threads_do_not_change_results():
    g = random_dag(np.random.default_rng(4))
    dem = demand(np.full(6, 500.0), np.full(6, 400.0))
    a = sample_ensemble(g, dem, 40, master_seed=5, threads=1)
    b = sample_ensemble(g, dem, 40, master_seed=5, threads=4)
    assert a.flows.tobytes() == b.flows.tobytes()


def test_chain_source_total_mean():
    # oracle: Poisson mean 7 with variance 7
    ens = sample_ensemble(chain(3), demand([7.0]), 10_000, master_seed=2026)
    mean = ens.totals[:, 0, 0].mean()
    band = 3 * math.sqrt(7 / 10_000)
    assert 7 - band <= mean <= 7 + band


def test_diamond_branch_mean():
    # share ~ Beta(1,1): mean 1/2, so the ab flow has mean 500 and
    # variance rate/2 + rate^2 Var(share) = 500 + 10^6/12
    rate, S = 1000.0, 10_000
    ens = sample_ensemble(diamond(), demand([rate]), S, master_seed=7)
    se = math.sqrt((rate / 2 + rate**2 / 12) / S)
    ab = ens.graph.edge_index()["ab"]
    assert abs(ens.flows[:, 0, ab, 0].mean() - 500) < 3 * se
    summary = edge_flow_summary(ens)
    assert abs(summary.mean[ab, 0] - 500) < 3 * se


def test_summary_of_one_sample_equals_sample():
    ens = sample_ensemble(diamond(), demand([123.0, 7.0], [9.0, 1.0]), 1, master_seed=0)
    s = edge_flow_summary(ens)
    for q in (s.mean, s.q05, s.q50, s.q95):
        assert np.array_equal(q, ens.edge_totals()[0])


def test_summary_csv(tmp_path):
    ens = sample_ensemble(diamond(), demand([0.0, 0.0]), 3, master_seed=0)
    path = edge_flow_summary(ens).to_csv(tmp_path / "f.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "edge_id,period,mean,q05,q50,q95"
    assert len(lines) == 1 + 4 * 2
    assert all(line.endswith("0.000000,0.000000,0.000000,0.000000") for line in lines[1:])


def test_per_sample_routing_constant_over_time():
    ens = sample_ensemble(diamond(), demand(np.full(5, 50.0)), 8, master_seed=3, routing_mode="per_sample")
    shares = ens.routing[("a", E)]
    assert np.allclose(shares, shares[:, :1])
    per_period = sample_ensemble(diamond(), demand(np.full(5, 50.0)), 8, master_seed=3)
    assert not np.allclose(per_period.routing[("a", E)], per_period.routing[("a", E)][:, :1])


def test_invalid_graph_rejected():
    import dataclasses

    g = dataclasses.replace(diamond(), priors=())
    with pytest.raises(InvalidGraph):
        sample_ensemble(g, demand([1.0]), 1, master_seed=0)


def test_bad_demand_rejected():
    with pytest.raises(ValueError):
        demand([-1.0])
    with pytest.raises(ValueError):
        DemandProfile({E: np.ones(3), D: np.ones(2)})
    with pytest.raises(ValueError):
        sample_ensemble(diamond(), demand([1.0]), 0, master_seed=0)


@settings(max_examples=30, deadline=None)
@given(
    graph_seed=st.integers(0, 10_000),
    master_seed=st.integers(0, 2**64 - 1),
    rate=st.floats(0.0, 5000.0),
)
def test_conservation_property(graph_seed, master_seed, rate):
    g = random_dag(np.random.default_rng(graph_seed))
    dem = demand(np.full(3, rate), np.full(3, rate / 2))
    ens = sample_ensemble(g, dem, 4, master_seed=master_seed)
    assert ens.flows.dtype.kind == "i"
    assert_conserved(g, ens.flows)
    # flow leaving each source equals its Poisson total
    index = g.edge_index()
    for si, s in enumerate(STREAMS):
        src = g.streams[s].source
        out = sum(ens.flows[:, si, index[e], :] for e, t, _ in g.arcs(s) if t == src)
        assert np.array_equal(out, ens.totals[:, si])


@settings(max_examples=30, deadline=None)
@given(graph_seed=st.integers(0, 10_000), master_seed=st.integers(0, 2**32))
def test_dirichlet_shares_on_simplex(graph_seed, master_seed):
    g = random_dag(np.random.default_rng(graph_seed))
    ens = sample_ensemble(g, demand(np.full(2, 10.0), np.full(2, 10.0)), 3, master_seed=master_seed)
    for (node, s), shares in ens.routing.items():
        assert len(g.admissible_out(s)[node]) == shares.shape[-1]
        assert np.all(shares >= 0)
        assert np.allclose(shares.sum(axis=-1), 1.0)


@settings(max_examples=25, deadline=None)
@given(
    graph_seed=st.integers(0, 10_000),
    master_seed=st.integers(0, 2**32),
    base=st.floats(0.0, 2000.0),
    extra=st.floats(0.0, 2000.0),
)
def test_more_demand_never_lowers_any_flow(graph_seed, master_seed, base, extra):
    # seed-matched draws are quantile inversions, monotone in rate and count
    g = random_dag(np.random.default_rng(graph_seed))
    lo = sample_ensemble(g, demand(np.full(2, base), np.full(2, base)), 3, master_seed=master_seed)
    hi = sample_ensemble(
        g, demand(np.full(2, base + extra), np.full(2, base + extra)), 3, master_seed=master_seed
    )
    assert np.all(hi.flows >= lo.flows)
