"""Dual stability index dvi*(G,T,kappa): the best failed-per-shocked ratio
over all shock sets of size exactly kappa.

Only nodes that actually fail count toward |infl(V')|; shocked survivors do
not.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .cascade import infl
from .network import NetworkSpec, _adjacency, _node_index
from .stability import (
    _parents,
    _postorder,
    _root,
    arborescence_lower_bound,
    every_node_fails_when_shocked,
    influence_zone,
    is_in_arborescence,
)

BRUTE_FORCE = "brute-force"
GREEDY = "greedy"
DP_ARBORESCENCE = "dp-arborescence"

NEG_INF = -math.inf


@dataclass(frozen=True)
class DualResult:
    shock_set: tuple[str, ...]
    failed: tuple[str, ...]
    value: Fraction
    method: str


def _result(spec: NetworkSpec, shock, T, method) -> DualResult:
    order = _node_index(spec)
    shock = tuple(sorted(shock, key=order.__getitem__))
    failed = tuple(sorted(infl(spec, shock, T), key=order.__getitem__))
    return DualResult(
        shock_set=shock,
        failed=failed,
        value=Fraction(len(failed), len(shock)),
        method=method,
    )


def _count_chunk(args):
    spec, T, chunk = args
    best = None
    for pos, shock in chunk:
        count = len(infl(spec, shock, T))
        if best is None or (-count, pos) < (best[0], best[1]):
            best = (-count, pos, shock)
    return best


def dual_exact_bruteforce(
    spec: NetworkSpec,
    T: Optional[int],
    kappa: int,
    node_limit: int = 20,
    workers: int = 1,
) -> DualResult:
    """Exact maximum over all C(n, kappa) subsets; ties resolve to the
    lexicographically first subset in node order."""
    if spec.n > node_limit:
        raise ValueError(f"n={spec.n} exceeds node_limit={node_limit}")
    if not 1 <= kappa <= spec.n:
        raise ValueError(f"need 1 <= kappa <= n, got kappa={kappa}")
    combos = list(enumerate(combinations(spec.nodes, kappa)))
    if workers <= 1 or len(combos) < 64:
        best = _count_chunk((spec, T, combos))
    else:
        size = (len(combos) + workers - 1) // workers
        chunks = [combos[i : i + size] for i in range(0, len(combos), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            best = min(pool.map(_count_chunk, [(spec, T, c) for c in chunks]))
    return _result(spec, best[2], T, BRUTE_FORCE)


def dual_greedy(spec: NetworkSpec, T: Optional[int], kappa: int) -> DualResult:
    """Heuristic: kappa rounds of best marginal |infl| gain, recomputed by
    simulation; ties to the lowest node index.  No guarantee (infl is not
    submodular)."""
    if not 1 <= kappa <= spec.n:
        raise ValueError(f"need 1 <= kappa <= n, got kappa={kappa}")
    chosen: list[str] = []
    for _ in range(kappa):
        best_v, best_count = None, -1
        for v in spec.nodes:
            if v in chosen:
                continue
            count = len(infl(spec, chosen + [v], T))
            if count > best_count:
                best_v, best_count = v, count
        chosen.append(best_v)
    return _result(spec, chosen, T, GREEDY)


def dual_arborescence_upper_bound(spec: NetworkSpec, kappa: int) -> Fraction:
    """Closed form kappa/n * (1 + deg_in_max * (Phi/gamma - 1)): a strict
    upper bound on the failed *fraction* |infl(V')|/n (= value * kappa/n)
    of any size-kappa shock on an all-fail in-arborescence."""
    return Fraction(kappa, spec.n) / arborescence_lower_bound(spec)


def dual_exact_in_arborescence(
    spec: NetworkSpec, T: Optional[int], kappa: int
) -> DualResult:
    """O(n^3) DP.  ssd[u][k]: max failed count in u's subtree with u shocked
    and exactly k shocked there; snsd[u][anc][k]: the same with u unshocked,
    any failure of u coming from ancestor anc's wave (anc=None: no wave).
    Children combine through an exactly-k unit-weight knapsack.

    The recurrence evaluates each wave in isolation, but a failed creditor
    shrinks the divisor of any later wave through its parent, concentrating
    the loss on the surviving creditors.  The DP cannot represent that
    interaction, so on some instances its chosen shock set is suboptimal
    (or fails more nodes than the recurrence predicts).  The returned value
    is always the true simulated outcome of the chosen set."""
    if not is_in_arborescence(spec):
        raise ValueError("spec is not an in-arborescence")
    if not every_node_fails_when_shocked(spec):
        raise ValueError("DP requires every node to fail when shocked")
    if not 1 <= kappa <= spec.n:
        raise ValueError(f"need 1 <= kappa <= n, got kappa={kappa}")

    _, in_adj = _adjacency(spec)
    parents = _parents(spec)
    iz = {u: influence_zone(spec, u, T) for u in spec.nodes}
    ancestors: dict[str, list] = {}
    for v in spec.nodes:
        chain, p = [None], parents[v]
        while p is not None:
            chain.append(p)
            p = parents[p]
        ancestors[v] = chain

    K = kappa
    ssd: dict[str, list] = {}
    snsd: dict[tuple, list] = {}
    # prefix knapsack tables kept for backtracking:
    # knap[(u, src)][i][k] = best over children v_1..v_i using k shocks
    knap: dict[tuple, list] = {}

    def child_best(v: str, src, k: int):
        return max(ssd[v][k], snsd[(v, src)][k])

    def combine(u: str, src) -> list:
        children = in_adj[u]
        table = [[NEG_INF] * (K + 1) for _ in range(len(children) + 1)]
        table[0][0] = 0
        for i, v in enumerate(children, start=1):
            for k in range(K + 1):
                best = NEG_INF
                for j in range(k + 1):
                    prev = table[i - 1][k - j]
                    if prev == NEG_INF:
                        continue
                    cur = child_best(v, src, j)
                    if cur == NEG_INF:
                        continue
                    if prev + cur > best:
                        best = prev + cur
                table[i][k] = best
        knap[(u, src)] = table
        return table[len(children)]

    for u in _postorder(spec):
        row = combine(u, u)
        ssd[u] = [NEG_INF] + [
            (1 + row[k - 1] if row[k - 1] != NEG_INF else NEG_INF)
            for k in range(1, K + 1)
        ]
        for anc in ancestors[u]:
            fail = 1 if (anc is not None and u in iz[anc]) else 0
            row = combine(u, anc)
            snsd[(u, anc)] = [
                (fail + row[k] if row[k] != NEG_INF else NEG_INF)
                for k in range(K + 1)
            ]

    root = _root(spec)
    chosen: list[str] = []

    def collect(u: str, shocked: bool, src, k: int) -> None:
        if shocked:
            chosen.append(u)
            k -= 1
            src = u
        children = in_adj[u]
        table = knap[(u, src)]
        for i in range(len(children), 0, -1):
            v = children[i - 1]
            for j in range(k + 1):
                prev = table[i - 1][k - j]
                if prev == NEG_INF:
                    continue
                if prev + child_best(v, src, j) == table[i][k]:
                    if ssd[v][j] >= snsd[(v, src)][j]:
                        collect(v, True, None, j)
                    else:
                        collect(v, False, src, j)
                    k -= j
                    break
        assert k == 0

    if ssd[root][K] >= snsd[(root, None)][K]:
        collect(root, True, None, K)
    else:
        collect(root, False, None, K)
    assert len(chosen) == K
    result = _result(spec, chosen, T, DP_ARBORESCENCE)
    expected = max(ssd[root][K], snsd[(root, None)][K])
    # The recurrence counts each shock wave in isolation.  Simulation may fail
    # *more* nodes than predicted, because a wave whose divisor shrank (a
    # creditor of the failing node was already dead) concentrates on the
    # remaining creditors.  Fewer failures than predicted would be a bug.
    if len(result.failed) < expected:
        raise RuntimeError(
            f"dual DP value {expected} not achieved by its own shock set "
            f"({len(result.failed)} failed)"
        )
    return result
