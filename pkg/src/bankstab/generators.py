"""Reduction-based instance generators and random-topology generators.

Each reduction encodes a classical combinatorial instance as a banking
network whose stability equals the source optimum; every inequality the
correspondence relies on is re-verified with exact arithmetic at generation
time, and generation fails loudly if any is violated.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .network import NetworkSpec, derive_balance_sheets, validate
from .numeric import RATIONAL


class GenerationError(Exception):
    pass


@dataclass(frozen=True)
class GeneratedInstance:
    spec: NetworkSpec
    kind: str
    source: dict
    node_map: dict
    certificate: str


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise GenerationError(message)


def _check_valid(spec: NetworkSpec) -> NetworkSpec:
    violations = validate(spec)
    _require(not violations, f"generated spec invalid: {violations}")
    return spec


def gen_from_dominating_set(
    vertices: Sequence[str], edges: Sequence[tuple[str, str]]
) -> GeneratedInstance:
    """Dominating set -> death by T=2: bidirect every edge; E=10n,
    gamma=1/n^2, Phi=1, unit weights.  V' dominates the source graph iff
    shocking {image of V'} kills the network by t=2."""
    vertices = [str(v) for v in vertices]
    n = len(vertices)
    _require(n >= 2, "need at least two vertices")
    und = {frozenset((str(a), str(b))) for a, b in edges}
    _require(all(len(e) == 2 for e in und), "self-loops not allowed")
    degree = {v: 0 for v in vertices}
    directed = []
    for e in sorted(und, key=lambda e: sorted(e)):
        a, b = sorted(e)
        _require(a in degree and b in degree, f"edge {sorted(e)} off the vertex set")
        degree[a] += 1
        degree[b] += 1
        directed.extend([(a, b), (b, a)])
    _require(all(d >= 1 for d in degree.values()), "isolated vertices not allowed")

    def build(gamma: Fraction) -> NetworkSpec:
        return _check_valid(
            NetworkSpec.homogeneous(
                nodes=vertices,
                edges=directed,
                gamma=gamma,
                phi=1,
                total_external=10 * n,
            )
        )

    def verify(spec: NetworkSpec) -> Optional[str]:
        sheet = derive_balance_sheets(spec)
        for v in vertices:  # every node fails under its own shock ...
            if not spec.phi * sheet.e[v] > sheet.c[v]:
                return f"node {v} survives its shock"
        for u, v in directed:  # ... and a failed neighbor kills each creditor
            hit = min(spec.phi * sheet.e[v] - sheet.c[v], sheet.b[v]) / spec.din(v)
            if not hit > sheet.c[u]:
                return f"failure of {v} does not kill {u}"
        return None

    # gamma = n^-2 satisfies the kill inequalities for n >= 4; on smaller
    # graphs (where it cannot: 1 > c_u needs n^2 > din+10) fall back to a
    # gamma that does, keeping the correspondence intact
    spec = build(Fraction(1, n * n))
    problem = verify(spec)
    if problem is not None:
        spec = build(Fraction(1, max(degree.values()) + 11))
        problem = verify(spec)
        _require(problem is None, problem or "")
    return GeneratedInstance(
        spec=spec,
        kind="dominating-set",
        source={"vertices": vertices, "edges": [sorted(e) for e in sorted(und, key=lambda e: sorted(e))]},
        node_map={v: v for v in vertices},
        certificate=(
            "V' is a dominating set of the source graph iff shocking V' "
            "kills the network by T=2; min dominating set size = n * vi*(T=2)"
        ),
    )


def gen_from_node_cover_3regular(
    vertices: Sequence[str], edges: Sequence[tuple[str, str]]
) -> GeneratedInstance:
    """3-regular node cover -> Stab: nodes u_i, super-sources u_i', sinks
    e_{i,j}; Ebar=1, gamma=0.23, Phi=0.7.  The source graph has a node cover
    of size a iff shocking all n super-sources plus a of the u_i kills the
    network (death-set size n + a)."""
    vertices = [str(v) for v in vertices]
    und = sorted({frozenset((str(a), str(b))) for a, b in edges}, key=lambda e: sorted(e))
    degree = {v: 0 for v in vertices}
    for e in und:
        a, b = sorted(e)
        _require(len(e) == 2, "self-loops not allowed")
        _require(a in degree and b in degree, f"edge {sorted(e)} off the vertex set")
        degree[a] += 1
        degree[b] += 1
    _require(
        all(d == 3 for d in degree.values()), "source graph must be 3-regular"
    )
    n = len(vertices)
    ebar = Fraction(1)
    gamma = Fraction(23, 100)
    phi = Fraction(7, 10)
    # the proof's parameter inequalities, re-verified exactly
    _require(phi > gamma, "eq1: Phi > gamma")
    _require(ebar < 2, "eq1.5: Ebar < 2")
    _require(phi * (2 + ebar) > gamma * (3 + 4 * ebar), "eq2-1")
    _require(gamma < 1 / ebar, "eq2-2")
    _require(phi * (1 + ebar) > gamma * (4 + 2 * ebar), "eq3")
    _require(gamma < Fraction(1) / (3 + ebar), "eq4")
    _require(phi * (1 + ebar) <= gamma * (4 + Fraction(5, 2) * ebar), "eq5")
    _require(gamma >= Fraction(2) / (6 + 3 * ebar), "eq6")

    node_map: dict = {}
    nodes, net_edges = [], []
    for v in vertices:
        u, up = f"u:{v}", f"up:{v}"
        node_map[("node", v)] = u
        node_map[("super", v)] = up
        nodes.extend([u, up])
        net_edges.append((u, up))
    for e in und:
        a, b = sorted(e)
        sink = f"e:{a}:{b}"
        node_map[("edge", a, b)] = sink
        nodes.append(sink)
        net_edges.extend([(sink, f"u:{a}"), (sink, f"u:{b}")])

    spec = _check_valid(
        NetworkSpec.homogeneous(
            nodes=nodes,
            edges=net_edges,
            gamma=gamma,
            phi=phi,
            total_external=ebar * len(nodes),
        )
    )
    return GeneratedInstance(
        spec=spec,
        kind="node-cover-3reg",
        source={"vertices": vertices, "edges": [sorted(e) for e in und]},
        node_map={"/".join(k): v for k, v in node_map.items()},
        certificate=(
            "the source graph has a node cover of size a iff shocking the n "
            "super-source nodes plus the a covering u-nodes kills the "
            "network; min death-set size = n + min node cover"
        ),
    )


def gen_from_set_cover(
    universe: Sequence[str],
    sets: Sequence[Sequence[str]],
    epsilon: Fraction = Fraction(1, 10**9),
) -> GeneratedInstance:
    """Set cover -> Stab on a heterogeneous 3-layer DAG (elements -> sets ->
    B).  Edge (u,S) weighs 3/|S|, edge (S,B) weighs 1; E_u = 1/(100n),
    E_S = E_B = 0, gamma = 0.1, Phi = 0.4 + epsilon.  S' covers the universe
    iff shocking {B} union S' kills the network (death-set size |S'|+1)."""
    universe = [str(u) for u in universe]
    sets = [sorted({str(x) for x in s}) for s in sets]
    n, m = len(universe), len(sets)
    _require(n >= 1 and m >= 1, "universe and set family must be non-empty")
    _require(all(sets), "empty sets not allowed")
    coverage = {u: sum(u in s for s in sets) for u in universe}
    _require(
        all(c >= 1 for c in coverage.values()),
        "every element must belong to at least one set",
    )
    _require(
        all(set(s) <= set(universe) for s in sets), "sets must draw from the universe"
    )
    _require(epsilon > 0, "epsilon must be positive")

    gamma = Fraction(1, 10)
    phi = Fraction(2, 5) + Fraction(epsilon)
    e_u = Fraction(1, 100 * n)
    e_s = Fraction(0)
    e_b = Fraction(0)
    _require(phi > gamma, "eq1-new: Phi > gamma")
    for s in sets:
        _require(
            phi * (2 + e_s) > gamma * (3 + e_s + len(s) * e_u), "eq2-1-new"
        )
    _require(phi * (2 + e_s) - gamma * (3 + e_s) <= 3, "eq2-2-new")
    _require((phi - gamma) * (1 + e_b / m) > gamma * (3 + e_s), "eq3-new")
    _require(gamma < Fraction(1) / (3 + e_s), "eq4-new")
    _require(
        (phi - gamma) * (1 + e_b / m) <= gamma * (3 + e_s + e_u / n), "eq5-new"
    )
    _require((phi - gamma) * (1 + e_b / m) <= 1, "eq6-new")
    _require(phi <= 1, "Phi must stay within (0, 1]")

    set_names = [f"S{i + 1}" for i in range(m)]
    nodes = [f"u:{u}" for u in universe] + [f"S:{name}" for name in set_names] + ["B"]
    edges, weights = [], {}
    for name, s in zip(set_names, sets):
        for u in s:
            e = (f"u:{u}", f"S:{name}")
            edges.append(e)
            weights[e] = Fraction(3, len(s))
        e = (f"S:{name}", "B")
        edges.append(e)
        weights[e] = Fraction(1)
    external = {f"u:{u}": e_u for u in universe}
    spec = _check_valid(
        NetworkSpec.heterogeneous(
            nodes=nodes,
            edges=edges,
            gamma=gamma,
            phi=phi,
            external_assets=external,
            weights=weights,
        )
    )
    node_map = {u: f"u:{u}" for u in universe}
    node_map.update({name: f"S:{name}" for name in set_names})
    node_map["B"] = "B"
    return GeneratedInstance(
        spec=spec,
        kind="set-cover",
        source={"universe": universe, "sets": {n_: s for n_, s in zip(set_names, sets)}},
        node_map=node_map,
        certificate=(
            "S' covers the universe iff shocking {B} plus the nodes of S' "
            "kills the network; min death-set size = min cover size + 1"
        ),
    )


def gen_from_max_coverage(
    universe: Sequence[str], sets: Sequence[Sequence[str]], kappa: int
) -> GeneratedInstance:
    """Max kappa-coverage -> Dual-Stab: bipartite element -> set digraph,
    E = n, gamma = 1/n^2, Phi = 1, unit weights.  Shocking the set-nodes of
    an optimal kappa-cover gives dvi* * kappa = opt + kappa."""
    universe = [str(u) for u in universe]
    sets = [sorted({str(x) for x in s}) for s in sets]
    _require(len(universe) >= 1 and len(sets) >= 1, "source must be non-empty")
    _require(all(set(s) <= set(universe) for s in sets), "sets must draw from the universe")
    _require(1 <= kappa, "kappa must be positive")

    set_names = [f"S{i + 1}" for i in range(len(sets))]
    nodes = [f"u:{u}" for u in universe] + [f"S:{name}" for name in set_names]
    n = len(nodes)
    edges = [
        (f"u:{u}", f"S:{name}") for name, s in zip(set_names, sets) for u in s
    ]
    spec = _check_valid(
        NetworkSpec.homogeneous(
            nodes=nodes,
            edges=edges,
            gamma=Fraction(1, n * n),
            phi=1,
            total_external=n,
        )
    )
    sheet = derive_balance_sheets(spec)
    for name, s in zip(set_names, sets):
        if not s:
            continue
        sv = f"S:{name}"
        _require(
            spec.phi * sheet.e[sv] > sheet.c[sv], f"set node {sv} survives its shock"
        )
        hit = min(spec.phi * sheet.e[sv] - sheet.c[sv], sheet.b[sv]) / spec.din(sv)
        for u in s:
            _require(hit > sheet.c[f"u:{u}"], f"failed {sv} does not kill u:{u}")
    for u in universe:  # element nodes in some set never fail when shocked
        uv = f"u:{u}"
        if spec.dout(uv):
            _require(
                not spec.phi * sheet.e[uv] > sheet.c[uv],
                f"element node {uv} must survive its own shock",
            )
    node_map = {u: f"u:{u}" for u in universe}
    node_map.update({name: f"S:{name}" for name in set_names})
    return GeneratedInstance(
        spec=spec,
        kind="max-coverage",
        source={
            "universe": universe,
            "sets": {n_: s for n_, s in zip(set_names, sets)},
            "kappa": kappa,
        },
        node_map=node_map,
        certificate=(
            "for kappa <= |S|: dvi*(G, T, kappa) * kappa = "
            "opt(max kappa-cover) + kappa"
        ),
    )


def gen_from_densest_subhypergraph(
    vertices: Sequence[str], hyperedges: Sequence[Sequence[str]], kappa: int
) -> GeneratedInstance:
    """d-uniform densest subhypergraph -> Dual-Stab: hyperedge-node lends 2
    to each of its d element-nodes; E_e = 1.99d, E_u = 0, Phi = 1,
    gamma = 1/2.  A hyperedge-node fails at t=2 iff all d of its endpoints
    are shocked, so shocking kappa element-nodes fails exactly the
    fully-contained hyperedges."""
    vertices = [str(v) for v in vertices]
    hyperedges = [sorted({str(x) for x in h}) for h in hyperedges]
    _require(len(hyperedges) >= 1, "need at least one hyperedge")
    arities = {len(h) for h in hyperedges}
    _require(len(arities) == 1, "hypergraph must be uniform")
    d = arities.pop()
    _require(d >= 2, "arity d must be at least 2")
    _require(d <= 200, "soundness needs d - 1 <= 0.995 d, i.e. d <= 200")
    _require(all(set(h) <= set(vertices) for h in hyperedges), "hyperedge off vertex set")
    _require(1 <= kappa <= len(vertices), "need 1 <= kappa <= |V(H)|")

    e_share = Fraction(199, 100) * d
    # full containment: d * 1 > gamma * E_e = 0.995 d; partial: d-1 <= 0.995 d
    _require(d > Fraction(1, 2) * e_share, "full containment must fail the hyperedge")
    _require(d - 1 <= Fraction(1, 2) * e_share, "partial containment must not")

    edge_names = [f"e:{i + 1}" for i in range(len(hyperedges))]
    nodes = [f"v:{v}" for v in vertices] + edge_names
    edges, weights = [], {}
    for name, h in zip(edge_names, hyperedges):
        for v in h:
            e = (name, f"v:{v}")
            edges.append(e)
            weights[e] = Fraction(2)
    spec = _check_valid(
        NetworkSpec.heterogeneous(
            nodes=nodes,
            edges=edges,
            gamma=Fraction(1, 2),
            phi=1,
            external_assets={name: e_share for name in edge_names},
            weights=weights,
        )
    )
    sheet = derive_balance_sheets(spec)
    for name in edge_names:  # shocked hyperedge-nodes never fail (e < 0)
        _require(sheet.e[name] < 0, f"hyperedge node {name} could fail when shocked")
    node_map = {v: f"v:{v}" for v in vertices}
    node_map.update({name: name for name in edge_names})
    return GeneratedInstance(
        spec=spec,
        kind="densest-hypergraph",
        source={
            "vertices": vertices,
            "hyperedges": {n_: h for n_, h in zip(edge_names, hyperedges)},
            "kappa": kappa,
        },
        node_map=node_map,
        certificate=(
            "shocking a kappa-subset of element-nodes fails exactly the "
            "hyperedge-nodes of fully-contained hyperedges; dvi* * kappa = "
            "(#failing shocked element-nodes) + max #contained hyperedges"
        ),
    )


def gen_random_in_arborescence(
    n: int,
    max_in_degree: int,
    gamma,
    phi,
    external,
    seed: int,
    backend: str = RATIONAL,
) -> NetworkSpec:
    """Random rooted in-arborescence via random parent assignment with an
    in-degree cap; node 0 is the root; unit weights; deterministic per seed."""
    if n < 1:
        raise GenerationError("n must be >= 1")
    if max_in_degree < 1:
        raise GenerationError("max_in_degree must be >= 1")
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(n)]
    children = {v: 0 for v in nodes}
    edges = []
    for i in range(1, n):
        options = [nodes[j] for j in range(i) if children[nodes[j]] < max_in_degree]
        parent = rng.choice(options)
        children[parent] += 1
        edges.append((nodes[i], parent))
    return NetworkSpec.homogeneous(
        nodes=nodes,
        edges=edges,
        gamma=gamma,
        phi=phi,
        total_external=external,
        backend=backend,
    )


def gen_random_dag(
    n: int,
    edge_prob: float,
    gamma,
    phi,
    external,
    seed: int,
    backend: str = RATIONAL,
) -> NetworkSpec:
    """Random DAG: shuffle a topological order, then keep each forward edge
    with probability edge_prob; unit weights; deterministic per seed."""
    if n < 1:
        raise GenerationError("n must be >= 1")
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(n)]
    topo = nodes[:]
    rng.shuffle(topo)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                edges.append((topo[j], topo[i]))
    return NetworkSpec.homogeneous(
        nodes=nodes,
        edges=edges,
        gamma=gamma,
        phi=phi,
        total_external=external,
        backend=backend,
    )


def gen_tight_influence_tree(
    din: int, gamma, phi, unit_external: Fraction = Fraction(1, 10**9)
) -> NetworkSpec:
    """The tight family for the influence-zone bound: a root with `din`
    children, each heading a chain of floor(Phi/gamma - 1) unary nodes, and
    a vanishing external share per node (Ebar -> 0).  Shocking the root then
    fails exactly 1 + din * floor(Phi/gamma - 1) nodes."""
    gamma = Fraction(gamma)
    phi = Fraction(phi)
    ratio = phi / gamma - 1
    chain_len = int(ratio)
    if chain_len < 1:
        raise GenerationError("need Phi/gamma >= 2 for a non-trivial chain")
    if ratio == chain_len:
        raise GenerationError("Phi/gamma must not be an integer (boundary case)")
    nodes = ["r"]
    edges = []
    for i in range(din):
        prev = "r"
        for k in range(chain_len):
            node = f"c{i}_{k}"
            nodes.append(node)
            edges.append((node, prev))
            prev = node
    return NetworkSpec.homogeneous(
        nodes=nodes,
        edges=edges,
        gamma=gamma,
        phi=phi,
        total_external=Fraction(unit_external) * len(nodes),
    )
