"""Stability index vi*(G,T): brute force, greedy T=2 covering, and the exact
in-arborescence dynamic program.

vi(G,V',T) = |V'|/n when shocking V' kills every node within T steps, else
infinity; vi* is the minimum over non-empty V'.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .cascade import horizon_bound, infl, propagate
from .network import NetworkSpec, derive_balance_sheets, _adjacency, _node_index
from .numeric import Amount, exceeds, to_amount

FINITE = "finite"
INFEASIBLE = "infeasible-infinity"

BRUTE_FORCE = "brute-force"
GREEDY_T2 = "greedy-t2"
DP_ARBORESCENCE = "dp-arborescence"


@dataclass(frozen=True)
class StabilityResult:
    status: str
    shock_set: tuple[str, ...]
    value: object  # Fraction or math.inf
    method: str
    certificate: Optional[object] = None

    @property
    def finite(self) -> bool:
        return self.status == FINITE


def vi(spec: NetworkSpec, shock: Iterable[str], T: Optional[int] = None):
    """|V'|/n if infl(V') = V within T, else infinity."""
    shock = set(shock)
    if infl(spec, shock, T) == set(spec.nodes):
        return Fraction(len(shock), spec.n)
    return math.inf


def _kills(spec: NetworkSpec, shock: tuple[str, ...], T: Optional[int]) -> bool:
    return propagate(spec, shock, T).dead


def _scan_chunk(args):
    spec, T, chunk = args
    for pos, shock in chunk:
        if _kills(spec, shock, T):
            return (pos, shock)
    return None


def stab_exact_bruteforce(
    spec: NetworkSpec,
    T: Optional[int] = None,
    node_limit: int = 20,
    workers: int = 1,
) -> StabilityResult:
    """Exhaustive minimum: subsets by increasing cardinality, lexicographic
    within a cardinality.  Every dout=0 node must be in any killing set
    (it can never fail otherwise), so those are seeded as mandatory."""
    if spec.n > node_limit:
        raise ValueError(f"n={spec.n} exceeds node_limit={node_limit}")
    order = _node_index(spec)
    out_adj, _ = _adjacency(spec)
    mandatory = tuple(v for v in spec.nodes if not out_adj[v])
    rest = tuple(v for v in spec.nodes if out_adj[v])
    for k in range(max(1, len(mandatory)), spec.n + 1):
        combos = [
            tuple(sorted(mandatory + extra, key=order.__getitem__))
            for extra in combinations(rest, k - len(mandatory))
        ]
        hit = _first_hit(spec, T, combos, workers)
        if hit is not None:
            return StabilityResult(
                status=FINITE,
                shock_set=hit,
                value=Fraction(k, spec.n),
                method=BRUTE_FORCE,
            )
    return StabilityResult(
        status=INFEASIBLE, shock_set=(), value=math.inf, method=BRUTE_FORCE
    )


def _first_hit(spec, T, combos, workers):
    if workers <= 1 or len(combos) < 64:
        for shock in combos:
            if _kills(spec, shock, T):
                return shock
        return None
    indexed = list(enumerate(combos))
    size = (len(indexed) + workers - 1) // workers
    chunks = [indexed[i : i + size] for i in range(0, len(indexed), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        hits = [h for h in pool.map(_scan_chunk, [(spec, T, c) for c in chunks]) if h]
    return min(hits)[1] if hits else None


@dataclass(frozen=True)
class CoverInstance:
    """The T=2 covering reformulation: shocking V' kills node u by t=2 iff
    sum_{v in V'} delta[v][u] strictly exceeds threshold[u]."""

    nodes: tuple[str, ...]
    delta: dict[str, dict[str, Amount]]  # delta[v][u]
    threshold: dict[str, Amount]

    def delta_of(self, v: str, u: str) -> Amount:
        return self.delta.get(v, {}).get(u, 0)

    def zeta(self) -> Amount:
        """min over positive delta entries and all thresholds (paper's zeta)."""
        values = [d for row in self.delta.values() for d in row.values() if d > 0]
        values.extend(self.threshold.values())
        return min(values)


def build_cover_instance(spec: NetworkSpec) -> CoverInstance:
    sheet = derive_balance_sheets(spec)
    _, in_adj = _adjacency(spec)
    backend, eps = spec.backend, spec.eps
    zero = to_amount(0, backend)
    delta: dict[str, dict[str, Amount]] = {}
    for v in spec.nodes:
        row: dict[str, Amount] = {}
        shock_v = spec.phi * sheet.e[v]
        row[v] = shock_v if shock_v > zero else zero
        if exceeds(shock_v, sheet.c[v], backend, eps) and in_adj[v]:
            # v fails at t=1 when shocked; creditors split its shortfall
            out = min(shock_v - sheet.c[v], sheet.b[v]) / len(in_adj[v])
            for u in in_adj[v]:
                row[u] = row.get(u, zero) + out
        delta[v] = row
    return CoverInstance(
        nodes=spec.nodes, delta=delta, threshold=dict(sheet.c)
    )


def stab_greedy_t2(spec: NetworkSpec) -> StabilityResult:
    """Greedy covering for death-by-t=2 (Dobson-style): repeatedly pick the
    node adding the most still-needed coverage; ties to the lowest index."""
    inst = build_cover_instance(spec)
    backend, eps = spec.backend, spec.eps
    zero = to_amount(0, backend)
    candidates = [v for v in spec.nodes if any(d > zero for d in inst.delta[v].values())]
    coverage = {u: zero for u in spec.nodes}

    def satisfied(u: str) -> bool:
        return exceeds(coverage[u], inst.threshold[u], backend, eps)

    chosen: list[str] = []
    chosen_set: set[str] = set()
    while True:
        unsatisfied = [u for u in spec.nodes if not satisfied(u)]
        if not unsatisfied:
            break
        best_v, best_key = None, (zero, 0)
        for v in candidates:
            if v in chosen_set:
                continue
            gain = zero
            closers = 0  # constraints sitting exactly at threshold that v tips over
            for u in unsatisfied:
                d = inst.delta[v].get(u, zero)
                if d <= zero:
                    continue
                needed = inst.threshold[u] - coverage[u]
                if needed > zero:
                    gain += min(d, needed)
                else:
                    closers += 1
            key = (gain, closers)
            if best_v is None or key > best_key:
                best_v, best_key = v, key
        if best_v is None or best_key == (zero, 0):
            return StabilityResult(
                status=INFEASIBLE, shock_set=(), value=math.inf, method=GREEDY_T2
            )
        chosen.append(best_v)
        chosen_set.add(best_v)
        for u, d in inst.delta[best_v].items():
            coverage[u] += d
    order = _node_index(spec)
    shock = tuple(sorted(chosen, key=order.__getitem__))
    if not propagate(spec, shock, 2).dead:
        raise RuntimeError("greedy cover did not kill the network by t=2")
    return StabilityResult(
        status=FINITE,
        shock_set=shock,
        value=Fraction(len(shock), spec.n),
        method=GREEDY_T2,
    )


def greedy_ratio_bound(spec: NetworkSpec) -> float:
    """A-priori guarantee factor: 2 + ln n + ln(max_v sum_u delta[v][u] / zeta)."""
    inst = build_cover_instance(spec)
    col_max = max(sum(row.values()) for row in inst.delta.values())
    return 2.0 + math.log(spec.n) + math.log(float(col_max / inst.zeta()))


# --- in-arborescence machinery -------------------------------------------


def is_in_arborescence(spec: NetworkSpec) -> bool:
    """True iff the digraph is a rooted tree with every edge oriented toward
    the root (each non-root node has exactly one outgoing edge)."""
    if spec.m != spec.n - 1:
        return False
    out_adj, _ = _adjacency(spec)
    roots = [v for v in spec.nodes if not out_adj[v]]
    # with n-1 edges, a unique root, and dout=1 elsewhere, any non-tree shape
    # would need a cycle component (k nodes, k edges), exceeding n-1 edges
    return len(roots) == 1 and all(len(out_adj[v]) <= 1 for v in spec.nodes)


def _root(spec: NetworkSpec) -> str:
    out_adj, _ = _adjacency(spec)
    return next(v for v in spec.nodes if not out_adj[v])


def _parents(spec: NetworkSpec) -> dict[str, Optional[str]]:
    out_adj, _ = _adjacency(spec)
    return {v: (out_adj[v][0] if out_adj[v] else None) for v in spec.nodes}


def _postorder(spec: NetworkSpec) -> list[str]:
    _, in_adj = _adjacency(spec)
    order: list[str] = []
    stack: list[tuple[str, bool]] = [(_root(spec), False)]
    while stack:
        v, done = stack.pop()
        if done:
            order.append(v)
        else:
            stack.append((v, True))
            for child in in_adj[v]:
                stack.append((child, False))
    return order


def every_node_fails_when_shocked(spec: NetworkSpec) -> bool:
    sheet = derive_balance_sheets(spec)
    return all(
        exceeds(spec.phi * sheet.e[v], sheet.c[v], spec.backend, spec.eps)
        for v in spec.nodes
    )


def influence_zone(
    spec: NetworkSpec, u: str, T: Optional[int] = None
) -> frozenset[str]:
    """iz(u): nodes of u's subtree that fail within T when u alone is shocked."""
    if not is_in_arborescence(spec):
        raise ValueError("influence_zone requires an in-arborescence")
    _, in_adj = _adjacency(spec)
    subtree = {u}
    stack = [u]
    while stack:
        for child in in_adj[stack.pop()]:
            subtree.add(child)
            stack.append(child)
    return infl(spec, {u}, T) & subtree


def arborescence_lower_bound(spec: NetworkSpec) -> Fraction:
    """vi* > 1 / (1 + deg_in_max * (Phi/gamma - 1)) on in-arborescences."""
    _, in_adj = _adjacency(spec)
    deg = max((len(in_adj[v]) for v in spec.nodes), default=0)
    ratio = Fraction(spec.phi) / Fraction(spec.gamma) - 1
    return 1 / (1 + deg * ratio)


def stab_exact_in_arborescence(
    spec: NetworkSpec, T: Optional[int] = None
) -> StabilityResult:
    """Level-by-level DP on an in-arborescence where every node fails when
    shocked.  ssvi*(u): optimal count in u's subtree with u shocked;
    snsvi*(u,u'): optimal count with u unshocked, relying on the shock wave
    from ancestor u'.

    The recurrence evaluates each wave in isolation, but a failed creditor
    shrinks the divisor of any later wave through its parent, concentrating
    the loss on the surviving creditors.  The DP cannot represent that
    interaction, so on some instances a smaller shock set than the one it
    returns already kills the network; the returned set is always verified
    feasible."""
    if not is_in_arborescence(spec):
        raise ValueError("spec is not an in-arborescence")
    if not every_node_fails_when_shocked(spec):
        raise ValueError("DP requires every node to fail when shocked")
    _, in_adj = _adjacency(spec)
    parents = _parents(spec)
    iz = {u: influence_zone(spec, u, T) for u in spec.nodes}

    ancestors: dict[str, list[str]] = {}
    for v in spec.nodes:
        chain, p = [], parents[v]
        while p is not None:
            chain.append(p)
            p = parents[p]
        ancestors[v] = chain

    INF = math.inf
    ss: dict[str, float] = {}
    sns: dict[tuple[str, str], float] = {}
    for u in _postorder(spec):
        children = in_adj[u]
        ss[u] = 1 + sum(min(ss[v], sns[(v, u)]) for v in children)
        for anc in ancestors[u]:
            if u not in iz[anc]:
                sns[(u, anc)] = INF
            else:
                sns[(u, anc)] = sum(min(ss[v], sns[(v, anc)]) for v in children)

    root = _root(spec)
    chosen: list[str] = []

    def collect(u: str, shocked: bool, anc: Optional[str]) -> None:
        if shocked:
            chosen.append(u)
        source = u if shocked else anc
        for v in in_adj[u]:
            # tie toward shocking: the subtree then needs nothing from above
            if ss[v] <= sns[(v, source)]:
                collect(v, True, None)
            else:
                collect(v, False, source)

    collect(root, True, None)
    order = _node_index(spec)
    shock = tuple(sorted(chosen, key=order.__getitem__))
    assert len(shock) == ss[root]
    if not propagate(spec, shock, T).dead:
        raise RuntimeError("DP-reconstructed shock set failed to kill the network")
    return StabilityResult(
        status=FINITE,
        shock_set=shock,
        value=Fraction(len(shock), spec.n),
        method=DP_ARBORESCENCE,
        certificate=arborescence_lower_bound(spec),
    )
