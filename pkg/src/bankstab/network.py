"""Banking-network model: the tuple <G, gamma, I, E, Phi, w, alpha> and the
balance sheets it induces.

Edge (u, v) means "u lends to v"; u is a creditor of v.  Per-node quantities:
    iota_v = sum of outgoing edge weights   (interbank asset)
    b_v    = sum of incoming edge weights   (interbank borrowing)
    e_v    = (b_v - iota_v) + alpha_v * E   (external asset)
    a_v    = b_v + alpha_v * E              (total asset)
    c_v    = gamma * a_v                    (equity)
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .numeric import (
    Amount,
    BACKENDS,
    DEFAULT_EPS,
    RATIONAL,
    to_amount,
)

HOMOGENEOUS = "homogeneous"
HETEROGENEOUS = "heterogeneous"


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    gamma: Amount
    phi: Amount
    total_external: Amount
    total_interbank: Amount
    edge_weights: tuple[Amount, ...]
    alpha: tuple[Amount, ...]
    mode: str = HOMOGENEOUS
    backend: str = RATIONAL
    eps: float = DEFAULT_EPS

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, node: str) -> int:
        return _node_index(self)[node]

    def weight(self, edge: tuple[str, str]) -> Amount:
        return self.edge_weights[_edge_index(self)[edge]]

    def out_neighbors(self, node: str) -> tuple[str, ...]:
        return _adjacency(self)[0][node]

    def in_neighbors(self, node: str) -> tuple[str, ...]:
        return _adjacency(self)[1][node]

    def din(self, node: str) -> int:
        return len(self.in_neighbors(node))

    def dout(self, node: str) -> int:
        return len(self.out_neighbors(node))

    @staticmethod
    def homogeneous(
        nodes: Sequence[str],
        edges: Sequence[tuple[str, str]],
        gamma,
        phi,
        total_external,
        total_interbank=None,
        backend: str = RATIONAL,
        eps: float = DEFAULT_EPS,
    ) -> "NetworkSpec":
        """Homogeneous network <G, gamma, I, E, Phi>; w = I/m, alpha = 1/n.

        total_interbank defaults to m, i.e. unit edge weights.
        """
        nodes = tuple(nodes)
        edges = tuple((str(u), str(v)) for u, v in edges)
        n, m = len(nodes), len(edges)
        conv = lambda x: to_amount(x, backend)
        interbank = conv(m if total_interbank is None else total_interbank)
        w = interbank / m if m else conv(0)
        share = conv(Fraction(1, n)) if n else conv(0)
        return NetworkSpec(
            nodes=nodes,
            edges=edges,
            gamma=conv(gamma),
            phi=conv(phi),
            total_external=conv(total_external),
            total_interbank=interbank,
            edge_weights=(w,) * m,
            alpha=(share,) * n,
            mode=HOMOGENEOUS,
            backend=backend,
            eps=eps,
        )

    @staticmethod
    def heterogeneous(
        nodes: Sequence[str],
        edges: Sequence[tuple[str, str]],
        gamma,
        phi,
        external_assets: Mapping[str, object],
        weights: Mapping[tuple[str, str], object],
        backend: str = RATIONAL,
        eps: float = DEFAULT_EPS,
    ) -> "NetworkSpec":
        """Heterogeneous network from per-node external assets E_v and
        per-edge weights; E = sum E_v, alpha_v = E_v / E (uniform if E = 0)."""
        nodes = tuple(nodes)
        edges = tuple((str(u), str(v)) for u, v in edges)
        conv = lambda x: to_amount(x, backend)
        ext = {v: conv(external_assets.get(v, 0)) for v in nodes}
        total_e = sum(ext.values(), conv(0))
        if total_e:
            alpha = tuple(ext[v] / total_e for v in nodes)
        else:
            alpha = (conv(Fraction(1, len(nodes))),) * len(nodes)
        w = tuple(conv(weights[e]) for e in edges)
        return NetworkSpec(
            nodes=nodes,
            edges=edges,
            gamma=conv(gamma),
            phi=conv(phi),
            total_external=total_e,
            total_interbank=sum(w, conv(0)),
            edge_weights=w,
            alpha=alpha,
            mode=HETEROGENEOUS,
            backend=backend,
            eps=eps,
        )


@dataclass(frozen=True)
class BalanceSheet:
    """Per-node derived balance-sheet quantities."""

    iota: dict[str, Amount]
    b: dict[str, Amount]
    e: dict[str, Amount]
    a: dict[str, Amount]
    c: dict[str, Amount]


# Per-spec caches (specs are immutable); keyed by id to avoid hashing dicts.
_CACHE: dict[int, dict] = {}


def _cache(spec: NetworkSpec) -> dict:
    entry = _CACHE.setdefault(id(spec), {"ref": spec})
    return entry


def _node_index(spec: NetworkSpec) -> dict[str, int]:
    cache = _cache(spec)
    if "nidx" not in cache:
        cache["nidx"] = {v: i for i, v in enumerate(spec.nodes)}
    return cache["nidx"]


def _edge_index(spec: NetworkSpec) -> dict[tuple[str, str], int]:
    cache = _cache(spec)
    if "eidx" not in cache:
        cache["eidx"] = {e: i for i, e in enumerate(spec.edges)}
    return cache["eidx"]


def _adjacency(spec: NetworkSpec):
    cache = _cache(spec)
    if "adj" not in cache:
        out: dict[str, list[str]] = {v: [] for v in spec.nodes}
        inn: dict[str, list[str]] = {v: [] for v in spec.nodes}
        for u, v in spec.edges:
            out[u].append(v)
            inn[v].append(u)
        cache["adj"] = (
            {v: tuple(ns) for v, ns in out.items()},
            {v: tuple(ns) for v, ns in inn.items()},
        )
    return cache["adj"]


def validate(spec: NetworkSpec) -> list[str]:
    """Return every violated model invariant (empty list = valid)."""
    violations: list[str] = []
    zero = to_amount(0, spec.backend)
    one = to_amount(1, spec.backend)

    if spec.backend not in BACKENDS:
        violations.append(f"unknown numeric backend {spec.backend!r}")
        return violations
    if spec.n < 1:
        violations.append("network must contain at least one node")
    if len(set(spec.nodes)) != spec.n:
        violations.append("duplicate node identifiers")
    known = set(spec.nodes)
    seen_edges = set()
    for u, v in spec.edges:
        if u not in known or v not in known:
            violations.append(f"edge ({u},{v}) references unknown node")
        if u == v:
            violations.append(f"self-loop at node {u}")
        if (u, v) in seen_edges:
            violations.append(f"parallel edge ({u},{v})")
        seen_edges.add((u, v))

    if not (zero < spec.gamma < spec.phi <= one):
        violations.append(
            f"need 1 >= Phi > gamma > 0, got Phi={spec.phi}, gamma={spec.gamma}"
        )
    if spec.total_external < zero:
        violations.append("total external E must be non-negative")
    if spec.total_interbank < zero:
        violations.append("total interbank I must be non-negative")

    if len(spec.edge_weights) != spec.m:
        violations.append("edge_weights length differs from edge count")
    else:
        for e, w in zip(spec.edges, spec.edge_weights):
            if not w > zero:
                violations.append(f"edge {e} has non-positive weight {w}")
        if spec.m and not _close(sum(spec.edge_weights, zero), spec.total_interbank, spec):
            violations.append("edge weights do not sum to I")
        if spec.m == 0 and spec.total_interbank != zero:
            violations.append("I must be 0 when the network has no edges")

    if len(spec.alpha) != spec.n:
        violations.append("alpha length differs from node count")
    else:
        for v, av in zip(spec.nodes, spec.alpha):
            if av < zero:
                violations.append(f"alpha of node {v} is negative")
        if spec.n and not _close(sum(spec.alpha, zero), one, spec):
            violations.append("alpha shares do not sum to 1")

    if spec.mode == HOMOGENEOUS:
        if spec.m:
            w_uniform = spec.total_interbank / spec.m
            if any(not _close(w, w_uniform, spec) for w in spec.edge_weights):
                violations.append("homogeneous mode requires uniform weights I/m")
        if spec.n:
            share = one / spec.n
            if any(not _close(a, share, spec) for a in spec.alpha):
                violations.append("homogeneous mode requires uniform alpha 1/n")
    elif spec.mode != HETEROGENEOUS:
        violations.append(f"unknown mode {spec.mode!r}")

    return violations


def _close(a: Amount, b: Amount, spec: NetworkSpec) -> bool:
    if spec.backend == RATIONAL:
        return a == b
    return abs(a - b) <= spec.eps


def derive_balance_sheets(spec: NetworkSpec) -> BalanceSheet:
    cache = _cache(spec)
    if "bs" in cache:
        return cache["bs"]
    zero = to_amount(0, spec.backend)
    iota = {v: zero for v in spec.nodes}
    b = {v: zero for v in spec.nodes}
    for (u, v), w in zip(spec.edges, spec.edge_weights):
        iota[u] += w
        b[v] += w
    e, a, c = {}, {}, {}
    for v, av in zip(spec.nodes, spec.alpha):
        ext_share = av * spec.total_external
        e[v] = (b[v] - iota[v]) + ext_share
        a[v] = b[v] + ext_share
        c[v] = spec.gamma * a[v]
    sheet = BalanceSheet(iota=iota, b=b, e=e, a=a, c=c)
    cache["bs"] = sheet
    return sheet


def normalize_homogeneous(spec: NetworkSpec) -> NetworkSpec:
    """Rescale a homogeneous spec to unit edge weights (w = 1) by dividing
    iota, b, and E by w; cascade outcomes are unchanged."""
    if spec.mode != HOMOGENEOUS:
        raise ValueError("normalize_homogeneous requires a homogeneous spec")
    if spec.m == 0:
        return spec
    w = spec.total_interbank / spec.m
    one = to_amount(1, spec.backend)
    if w == one:
        return spec
    return replace(
        spec,
        total_external=spec.total_external / w,
        total_interbank=to_amount(spec.m, spec.backend),
        edge_weights=(one,) * spec.m,
    )


def weakly_connected_components(spec: NetworkSpec) -> list[NetworkSpec]:
    """Split into weakly connected components; each carries its induced
    edges, its share of E (rescaled so alpha sums to 1), and gamma/Phi."""
    undirected: dict[str, set[str]] = {v: set() for v in spec.nodes}
    for u, v in spec.edges:
        undirected[u].add(v)
        undirected[v].add(u)
    seen: set[str] = set()
    order = _node_index(spec)
    components: list[NetworkSpec] = []
    zero = to_amount(0, spec.backend)
    one = to_amount(1, spec.backend)
    for start in spec.nodes:
        if start in seen:
            continue
        stack, members = [start], {start}
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in undirected[x]:
                if y not in seen:
                    seen.add(y)
                    members.add(y)
                    stack.append(y)
        comp_nodes = tuple(sorted(members, key=order.__getitem__))
        comp_edges, comp_weights = [], []
        for e, w in zip(spec.edges, spec.edge_weights):
            if e[0] in members:
                comp_edges.append(e)
                comp_weights.append(w)
        alpha_by_node = dict(zip(spec.nodes, spec.alpha))
        share = sum((alpha_by_node[v] for v in comp_nodes), zero)
        comp_external = share * spec.total_external
        if share:
            comp_alpha = tuple(alpha_by_node[v] / share for v in comp_nodes)
        else:
            comp_alpha = (one / len(comp_nodes),) * len(comp_nodes)
        components.append(
            replace(
                spec,
                nodes=comp_nodes,
                edges=tuple(comp_edges),
                total_external=comp_external,
                total_interbank=sum(comp_weights, zero),
                edge_weights=tuple(comp_weights),
                alpha=comp_alpha,
            )
        )
    return components
