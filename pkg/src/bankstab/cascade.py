"""Discrete-time synchronous shock propagation.

At t=1 every shocked node v loses Phi*e_v of equity.  Then, while t <= T and
some node is alive: every alive creditor u loses, for each failed alive
borrower v (c_v(t) < 0 with edge (u,v) in the alive-induced subgraph),
min{|c_v(t)|, b_v} / din(v, t); afterwards all nodes with c_v(t) < 0 are
removed.  A failed node therefore transmits exactly once, at the step it
fails.  Failure is strictly c < 0; equity exactly 0 survives.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .network import NetworkSpec, derive_balance_sheets, _adjacency, _node_index
from .numeric import Amount, is_negative, to_amount


@dataclass(frozen=True)
class CascadeStep:
    t: int
    failed: tuple[str, ...]
    equity: dict[str, Amount]  # c_v(t) for every node alive at time t


@dataclass(frozen=True)
class CascadeTrace:
    horizon: int
    steps: tuple[CascadeStep, ...]
    survivors: tuple[str, ...]
    dead: bool

    @property
    def failed_nodes(self) -> frozenset[str]:
        out: set[str] = set()
        for step in self.steps:
            out.update(step.failed)
        return frozenset(out)


def horizon_bound(spec: NetworkSpec) -> int:
    """Longest-directed-path edge count for a DAG; n-1 otherwise.  No new
    node can fail later than bound+1."""
    indeg = {v: 0 for v in spec.nodes}
    out_adj, _ = _adjacency(spec)
    for u, v in spec.edges:
        indeg[v] += 1
    queue = [v for v in spec.nodes if indeg[v] == 0]
    topo: list[str] = []
    while queue:
        x = queue.pop()
        topo.append(x)
        for y in out_adj[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(topo) != spec.n:  # cyclic: fall back to the safe bound
        return spec.n - 1
    longest = {v: 0 for v in spec.nodes}
    for x in reversed(topo):
        for y in out_adj[x]:
            if longest[y] + 1 > longest[x]:
                longest[x] = longest[y] + 1
    return max(longest.values(), default=0)


def propagate(
    spec: NetworkSpec, shock: Iterable[str], T: Optional[int] = None
) -> CascadeTrace:
    """Run Table-1 propagation of shocking `shock` for up to T steps.

    T=None means unbounded (internally capped at horizon_bound+1, after
    which no new failure is possible).
    """
    shock_set = set(shock)
    if not shock_set:
        raise ValueError("shock set must be non-empty")
    order = _node_index(spec)
    unknown = shock_set - order.keys()
    if unknown:
        raise KeyError(f"unknown node(s) in shock set: {sorted(unknown)}")
    cap = horizon_bound(spec) + 1
    if T is None:
        horizon = cap
    else:
        if T < 1:
            raise ValueError("horizon T must be >= 1")
        horizon = min(T, cap)

    sheet = derive_balance_sheets(spec)
    out_adj, in_adj = _adjacency(spec)
    backend, eps = spec.backend, spec.eps

    # c_v(1): shocked nodes lose Phi * e_v (applied literally even if e_v < 0)
    c = {
        v: sheet.c[v] - spec.phi * sheet.e[v] if v in shock_set else sheet.c[v]
        for v in spec.nodes
    }
    alive = set(spec.nodes)
    steps: list[CascadeStep] = []
    t = 1
    while t <= horizon and alive:
        failed_now = {v for v in alive if is_negative(c[v], backend, eps)}
        steps.append(
            CascadeStep(
                t=t,
                failed=tuple(sorted(failed_now, key=order.__getitem__)),
                equity={v: c[v] for v in sorted(alive, key=order.__getitem__)},
            )
        )
        if not failed_now:
            break  # equities only drop on failures; the cascade has settled
        # two-buffer update: all of time t's failures transmit against c(t)
        c_t = dict(c)
        for v in failed_now:
            creditors = [u for u in in_adj[v] if u in alive]
            if not creditors:
                continue
            loss = min(-c_t[v], sheet.b[v]) / len(creditors)
            for u in creditors:
                c[u] = c[u] - loss
        alive -= failed_now
        t += 1
    return CascadeTrace(
        horizon=horizon,
        steps=tuple(steps),
        survivors=tuple(sorted(alive, key=order.__getitem__)),
        dead=not alive,
    )


def infl(
    spec: NetworkSpec, shock: Iterable[str], T: Optional[int] = None
) -> frozenset[str]:
    """The set of nodes that fail within T steps when `shock` is shocked."""
    return propagate(spec, shock, T).failed_nodes


def is_dead(trace: CascadeTrace) -> bool:
    return trace.dead
