"""Serialization: network JSON files, edges CSV ingestion, trace JSON, DOT
export, and generator certificate sidecars.

Rationals are serialized as "p/q" (or integer) strings so round-trips are
lossless under the rational backend.
"""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from typing import Iterable, Optional, TextIO

from .cascade import CascadeTrace
from .generators import GeneratedInstance
from .network import HETEROGENEOUS, HOMOGENEOUS, NetworkSpec
from .numeric import RATIONAL, format_amount, parse_amount


class NetworkFileError(ValueError):
    pass


def spec_to_dict(spec: NetworkSpec) -> dict:
    doc = {
        "mode": spec.mode,
        "gamma": format_amount(spec.gamma),
        "phi": format_amount(spec.phi),
        "external_total": format_amount(spec.total_external),
        "interbank_total": format_amount(spec.total_interbank),
        "nodes": [],
        "edges": [],
    }
    for v, av in zip(spec.nodes, spec.alpha):
        entry = {"id": v}
        if spec.mode == HETEROGENEOUS:
            entry["alpha"] = format_amount(av)
        doc["nodes"].append(entry)
    for (u, v), w in zip(spec.edges, spec.edge_weights):
        entry = {"src": u, "dst": v}
        if spec.mode == HETEROGENEOUS:
            entry["weight"] = format_amount(w)
        doc["edges"].append(entry)
    return doc


def serialize_spec(spec: NetworkSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"


def spec_from_dict(doc: dict, backend: str = RATIONAL) -> NetworkSpec:
    try:
        mode = doc["mode"]
        if mode not in (HOMOGENEOUS, HETEROGENEOUS):
            raise NetworkFileError(f"unknown mode {mode!r}")
        gamma = parse_amount(str(doc["gamma"]), backend)
        phi = parse_amount(str(doc["phi"]), backend)
        external = parse_amount(str(doc["external_total"]), backend)
        interbank = parse_amount(str(doc["interbank_total"]), backend)
        nodes, alpha = [], []
        for entry in doc["nodes"]:
            nodes.append(str(entry["id"]))
            if "alpha" in entry:
                if mode == HOMOGENEOUS:
                    raise NetworkFileError(
                        "per-node alpha is only legal in heterogeneous mode"
                    )
                alpha.append(parse_amount(str(entry["alpha"]), backend))
            elif mode == HETEROGENEOUS:
                raise NetworkFileError(f"node {entry['id']} is missing alpha")
        edges, weights = [], []
        for entry in doc["edges"]:
            edges.append((str(entry["src"]), str(entry["dst"])))
            if "weight" in entry:
                if mode == HOMOGENEOUS:
                    raise NetworkFileError(
                        "per-edge weight is only legal in heterogeneous mode"
                    )
                weights.append(parse_amount(str(entry["weight"]), backend))
            elif mode == HETEROGENEOUS:
                raise NetworkFileError(
                    f"edge ({entry['src']},{entry['dst']}) is missing weight"
                )
    except KeyError as exc:
        raise NetworkFileError(f"missing field {exc.args[0]!r}") from exc
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, NetworkFileError):
            raise
        raise NetworkFileError(str(exc)) from exc

    if mode == HOMOGENEOUS:
        n, m = len(nodes), len(edges)
        w = interbank / m if m else parse_amount("0", backend)
        share = (
            parse_amount(str(Fraction(1, n)), backend)
            if n
            else parse_amount("0", backend)
        )
        alpha = [share] * n
        weights = [w] * m
    return NetworkSpec(
        nodes=tuple(nodes),
        edges=tuple(edges),
        gamma=gamma,
        phi=phi,
        total_external=external,
        total_interbank=interbank,
        edge_weights=tuple(weights),
        alpha=tuple(alpha),
        mode=mode,
        backend=backend,
    )


def parse_spec(text: str, backend: str = RATIONAL) -> NetworkSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkFileError("network file must be a JSON object")
    return spec_from_dict(doc, backend)


def load_spec(path: str, backend: str = RATIONAL) -> NetworkSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read(), backend)


def save_spec(spec: NetworkSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_spec(spec))


def spec_from_edges_csv(
    path: str,
    gamma,
    phi,
    external_total,
    backend: str = RATIONAL,
) -> NetworkSpec:
    """Convenience ingestion: a CSV with header src,dst,weight lowers into a
    network spec (heterogeneous iff any weight differs; alpha uniform)."""
    edges, weights = [], []
    nodes: list[str] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [
            f.strip() for f in reader.fieldnames
        ] != ["src", "dst", "weight"]:
            raise NetworkFileError("edges CSV must have header src,dst,weight")
        for row in reader:
            u, v = row["src"].strip(), row["dst"].strip()
            edges.append((u, v))
            weights.append(Fraction(row["weight"].strip()))
            for x in (u, v):
                if x not in seen:
                    seen.add(x)
                    nodes.append(x)
    if not nodes:
        raise NetworkFileError("edges CSV contains no edges")
    if len(set(weights)) <= 1:
        return NetworkSpec.homogeneous(
            nodes=nodes,
            edges=edges,
            gamma=gamma,
            phi=phi,
            total_external=external_total,
            total_interbank=sum(weights),
            backend=backend,
        )
    n = len(nodes)
    share = Fraction(external_total) / n
    return NetworkSpec.heterogeneous(
        nodes=nodes,
        edges=edges,
        gamma=gamma,
        phi=phi,
        external_assets={v: share for v in nodes},
        weights=dict(zip(edges, weights)),
        backend=backend,
    )


def trace_to_dict(trace: CascadeTrace) -> dict:
    return {
        "horizon": trace.horizon,
        "dead": trace.dead,
        "survivors": list(trace.survivors),
        "steps": [
            {
                "t": step.t,
                "failed": list(step.failed),
                "equity": {v: format_amount(c) for v, c in step.equity.items()},
            }
            for step in trace.steps
        ],
    }


def trace_to_json(trace: CascadeTrace) -> str:
    return json.dumps(trace_to_dict(trace), indent=2) + "\n"


_STEP_COLORS = (
    "firebrick1",
    "darkorange",
    "gold",
    "yellowgreen",
    "deepskyblue",
    "orchid",
)


def trace_to_dot(spec: NetworkSpec, trace: CascadeTrace) -> str:
    """Static report: failed nodes colored by failure step, survivors white."""
    failed_at: dict[str, int] = {}
    for step in trace.steps:
        for v in step.failed:
            failed_at[v] = step.t
    lines = ["digraph cascade {", "  rankdir=LR;"]
    for v in spec.nodes:
        if v in failed_at:
            t = failed_at[v]
            color = _STEP_COLORS[(t - 1) % len(_STEP_COLORS)]
            lines.append(
                f'  "{v}" [style=filled, fillcolor={color}, '
                f'label="{v}\\nt={t}"];'
            )
        else:
            lines.append(f'  "{v}" [style=filled, fillcolor=white];')
    for u, v in spec.edges:
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def certificate_to_dict(instance: GeneratedInstance) -> dict:
    return {
        "kind": instance.kind,
        "certificate": instance.certificate,
        "source": instance.source,
        "node_map": instance.node_map,
    }


def certificate_to_json(instance: GeneratedInstance) -> str:
    return json.dumps(certificate_to_dict(instance), indent=2) + "\n"
