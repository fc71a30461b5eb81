import random
from fractions import Fraction as F

import pytest

import bankstab as bs


def test_sec6_shock_ab_kills_at_t3(sec6):
    trace = bs.propagate(sec6, ["a", "b"])
    assert trace.dead
    assert [(s.t, s.failed) for s in trace.steps] == [
        (1, ("a", "b")), (2, ("c",)), (3, ("d", "e"))]


def test_sec6_shock_all_leaves_survivors(sec6):
    trace = bs.propagate(sec6, list(sec6.nodes))
    assert not trace.dead
    assert trace.survivors == ("d", "e")


def test_shock_monotonicity_fails(sec6):
    # a superset shock can fail strictly fewer nodes
    small = bs.infl(sec6, ["a", "b"])
    large = bs.infl(sec6, list(sec6.nodes))
    assert set(["a", "b"]) < set(sec6.nodes)
    assert not small <= large


def test_zero_equity_survives():
    # shocked node ends at exactly c(1) = 0: strict "< 0" means survival
    # node a: e_a = ebar - 1 = 1, c_a = gamma*ebar = 0.2, Phi = 0.2
    spec = bs.NetworkSpec.homogeneous(
        nodes=["a", "b"], edges=[("a", "b")],
        gamma=F(1, 10), phi=F(1, 5), total_external=4)
    sheet = bs.derive_balance_sheets(spec)
    assert spec.phi * sheet.e["a"] == sheet.c["a"]
    trace = bs.propagate(spec, ["a"])
    assert trace.steps[0].equity["a"] == 0
    assert not trace.failed_nodes


def test_negative_shock_applied_literally():
    # e_v < 0: the "shock" adds equity; v must not fail
    spec = bs.NetworkSpec.homogeneous(
        nodes=["a", "b"], edges=[("a", "b")],
        gamma=F(1, 100), phi=F(1, 2), total_external=F(1, 2))
    sheet = bs.derive_balance_sheets(spec)
    assert sheet.e["a"] < 0
    trace = bs.propagate(spec, ["a"])
    assert trace.steps[0].equity["a"] == sheet.c["a"] - spec.phi * sheet.e["a"]
    assert "a" not in trace.failed_nodes


def test_unknown_shock_node_raises(sec6):
    with pytest.raises(KeyError):
        bs.propagate(sec6, ["zz"])
    with pytest.raises(ValueError):
        bs.propagate(sec6, [])
    with pytest.raises(ValueError):
        bs.propagate(sec6, ["a"], T=0)


def test_horizon_restricts_failures(sec6):
    t1 = bs.propagate(sec6, ["a", "b"], T=1)
    assert t1.failed_nodes == {"a", "b"}
    t2 = bs.propagate(sec6, ["a", "b"], T=2)
    assert t2.failed_nodes == {"a", "b", "c"}


def test_horizon_bound_dag_and_cycle(sec6):
    assert bs.horizon_bound(sec6) == 2  # longest path d->c->a has 2 edges
    cyc = bs.NetworkSpec.homogeneous(
        nodes=["a", "b", "c"], edges=[("a", "b"), ("b", "c"), ("c", "a")],
        gamma=F(1, 10), phi=F(1, 2), total_external=3)
    assert bs.horizon_bound(cyc) == 2  # n-1 fallback


def test_T_beyond_bound_equals_unbounded(sec6):
    bound = bs.horizon_bound(sec6)
    a = bs.propagate(sec6, ["a", "b"], T=bound + 1)
    b = bs.propagate(sec6, ["a", "b"], T=None)
    assert a.failed_nodes == b.failed_nodes
    assert a.dead == b.dead


def test_per_step_loss_conservation(sec6):
    # total equity removed from creditors at c's failure step equals
    # min{|c_c(t)|, b_c} (c has 2 alive creditors d, e at t=2)
    sheet = bs.derive_balance_sheets(sec6)
    trace = bs.propagate(sec6, ["a", "b"])
    before, after = trace.steps[1].equity, trace.steps[2].equity
    shortfall = -before["c"]
    total = sum(before[v] - after[v] for v in ("d", "e"))
    assert total == min(shortfall, sheet.b["c"])


def test_failed_node_transmits_exactly_once():
    # chain x -> y -> z: x's failure hits y once; y's failure hits z once
    spec = bs.NetworkSpec.homogeneous(
        nodes=["z", "y", "x"], edges=[("x", "y"), ("y", "z")],
        gamma=F(1, 10), phi=F(2, 5), total_external=9)
    trace = bs.propagate(spec, ["z"])
    assert [s.failed for s in trace.steps] == [("z",), ("y",), ("x",)]
    assert trace.dead


def test_first_step_transmission_matches_closed_form():
    # internal node u (one parent, din leaves): the loss each leaf takes is
    # min{(Phi-gamma)(1 + E/(n*din)) - Phi/din, 1}
    rng = random.Random(42)
    for _ in range(25):
        din = rng.randint(1, 6)
        n = din + 2
        gamma = F(rng.randint(1, 20), 100)
        phi = gamma + F(rng.randint(5, 60), 100)
        if phi > 1:
            phi = F(1)
        ebar = F(rng.randint(2 * n, 8 * n), n)  # keeps u failing when shocked
        nodes = ["r", "u"] + [f"l{i}" for i in range(din)]
        edges = [("u", "r")] + [(f"l{i}", "u") for i in range(din)]
        spec = bs.NetworkSpec.homogeneous(
            nodes=nodes, edges=edges, gamma=gamma, phi=phi,
            total_external=ebar * n)
        trace = bs.propagate(spec, ["u"])
        assert "u" in trace.steps[0].failed
        delta = min((phi - gamma) * (1 + ebar / din) - phi / din, F(1))
        observed = trace.steps[0].equity["l0"] - trace.steps[1].equity["l0"]
        assert observed == delta


def test_dag_shock_oracle_pairing():
    # 10-node random DAG, I = 3m: failure sets agree between the raw spec
    # and its unit-weight normalization for 50 random shocks
    spec = bs.gen_random_dag(10, 0.35, F(1, 10), F(2, 5), 40, seed=7)
    from dataclasses import replace
    scaled = replace(
        spec,
        total_interbank=3 * spec.m,
        edge_weights=(F(3),) * spec.m,
        total_external=spec.total_external * 3,
    )
    assert bs.validate(scaled) == []
    norm = bs.normalize_homogeneous(scaled)
    rng = random.Random(11)
    for _ in range(50):
        k = rng.randint(1, spec.n)
        shock = rng.sample(list(spec.nodes), k)
        assert bs.infl(scaled, shock) == bs.infl(norm, shock)
