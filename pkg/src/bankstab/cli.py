"""Command-line front end: ingestion, simulation, solving, generation.

Exit codes: 0 success, 2 validation failure, 3 bad reference, 4 no
applicable method, 5 generator failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import dual as dual_mod
from . import generators as gen_mod
from . import io as io_mod
from . import stability as stab_mod
from .cascade import propagate
from .network import NetworkSpec, derive_balance_sheets, validate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BAD_REFERENCE = 3
EXIT_NO_METHOD = 4
EXIT_GENERATOR = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _decimalish(x) -> str:
    """Prefer an exact decimal rendering ("3.8", "0.48") when one exists."""
    if not isinstance(x, Fraction):
        return repr(x)
    twos = fives = 0
    den = x.denominator
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return str(x)  # no terminating decimal; keep the exact fraction
    places = max(twos, fives)
    if places == 0:
        return str(x.numerator)
    scaled = abs(x.numerator) * 10**places // x.denominator
    sign = "-" if x < 0 else ""
    text = str(scaled).rjust(places + 1, "0")
    return f"{sign}{text[:-places]}.{text[-places:]}"


def _add_network_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", nargs="?", help="network JSON file")
    parser.add_argument(
        "--edges", help="edges CSV (header src,dst,weight) instead of a JSON file"
    )
    parser.add_argument("--gamma", help="gamma for --edges ingestion")
    parser.add_argument("--phi", help="Phi for --edges ingestion")
    parser.add_argument("--external", help="total E for --edges ingestion")


def _load_network(args) -> NetworkSpec:
    try:
        if args.edges:
            if not (args.gamma and args.phi and args.external is not None):
                raise CliError(
                    EXIT_VALIDATION,
                    "--edges ingestion requires --gamma, --phi, --external",
                )
            spec = io_mod.spec_from_edges_csv(
                args.edges,
                gamma=Fraction(args.gamma),
                phi=Fraction(args.phi),
                external_total=Fraction(args.external),
            )
        elif args.file:
            spec = io_mod.load_spec(args.file)
        else:
            raise CliError(EXIT_VALIDATION, "a network file (or --edges) is required")
    except (OSError, io_mod.NetworkFileError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(EXIT_VALIDATION, f"cannot load network: {exc}") from exc
    violations = validate(spec)
    if violations:
        raise CliError(
            EXIT_VALIDATION, "invalid network:\n  " + "\n  ".join(violations)
        )
    return spec


def cmd_balance(args) -> int:
    spec = _load_network(args)
    sheet = derive_balance_sheets(spec)
    out = sys.stdout
    out.write("node,iota,b,e,a,c\n")
    for v in spec.nodes:
        out.write(
            ",".join(
                [
                    v,
                    _decimalish(sheet.iota[v]),
                    _decimalish(sheet.b[v]),
                    _decimalish(sheet.e[v]),
                    _decimalish(sheet.a[v]),
                    _decimalish(sheet.c[v]),
                ]
            )
            + "\n"
        )
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _load_network(args)
    unknown = set(args.shock) - set(spec.nodes)
    if unknown:
        raise CliError(
            EXIT_BAD_REFERENCE, f"unknown shock node(s): {sorted(unknown)}"
        )
    try:
        trace = propagate(spec, args.shock, args.horizon)
    except ValueError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from exc
    doc = io_mod.trace_to_dict(trace)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(io_mod.trace_to_json(trace))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(io_mod.trace_to_dot(spec, trace))
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _stab_auto(spec: NetworkSpec, T) -> str:
    if stab_mod.is_in_arborescence(spec) and stab_mod.every_node_fails_when_shocked(
        spec
    ):
        return "dp"
    if spec.n <= 20:
        return "brute"
    if T == 2:
        return "greedy-t2"
    raise CliError(
        EXIT_NO_METHOD,
        "no applicable method: not an all-fail arborescence, n > 20, "
        "and greedy-t2 needs --horizon 2",
    )


def cmd_stab(args) -> int:
    spec = _load_network(args)
    T = args.horizon
    method = args.method
    if method == "auto":
        method = _stab_auto(spec, T)
    try:
        if method == "brute":
            result = stab_mod.stab_exact_bruteforce(
                spec, T, node_limit=args.node_limit, workers=args.threads
            )
        elif method == "greedy-t2":
            if T != 2:
                raise CliError(EXIT_NO_METHOD, "greedy-t2 requires --horizon 2")
            result = stab_mod.stab_greedy_t2(spec)
        elif method == "dp":
            result = stab_mod.stab_exact_in_arborescence(spec, T)
        else:  # pragma: no cover - argparse restricts choices
            raise CliError(EXIT_NO_METHOD, f"unknown method {method!r}")
    except ValueError as exc:
        raise CliError(EXIT_NO_METHOD, str(exc)) from exc

    confirmed = False
    if result.status == stab_mod.FINITE:
        confirmed = propagate(spec, result.shock_set, T).dead
    doc = {
        "status": result.status,
        "method": result.method,
        "value": str(result.value) if result.status == stab_mod.FINITE else "inf",
        "shock_set": list(result.shock_set),
        "confirmed": confirmed,
    }
    if result.certificate is not None:
        doc["certificate"] = str(result.certificate)
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _dual_auto(spec: NetworkSpec) -> str:
    if stab_mod.is_in_arborescence(spec) and stab_mod.every_node_fails_when_shocked(
        spec
    ):
        return "dp"
    if spec.n <= 20:
        return "brute"
    return "greedy"


def cmd_dual(args) -> int:
    spec = _load_network(args)
    T = args.horizon
    if not 1 <= args.kappa <= spec.n:
        raise CliError(
            EXIT_BAD_REFERENCE, f"kappa must be in [1, {spec.n}], got {args.kappa}"
        )
    method = args.method
    if method == "auto":
        method = _dual_auto(spec)
    try:
        if method == "brute":
            result = dual_mod.dual_exact_bruteforce(
                spec, T, args.kappa, node_limit=args.node_limit, workers=args.threads
            )
        elif method == "greedy":
            result = dual_mod.dual_greedy(spec, T, args.kappa)
        elif method == "dp":
            result = dual_mod.dual_exact_in_arborescence(spec, T, args.kappa)
        else:  # pragma: no cover - argparse restricts choices
            raise CliError(EXIT_NO_METHOD, f"unknown method {method!r}")
    except ValueError as exc:
        raise CliError(EXIT_NO_METHOD, str(exc)) from exc

    doc = {
        "method": result.method,
        "value": str(result.value),
        "shock_set": list(result.shock_set),
        "failed": list(result.failed),
        "confirmed": len(result.failed) * result.value.denominator
        == result.value.numerator * len(result.shock_set),
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _load_source(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_GENERATOR, f"cannot read source file: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliError(EXIT_GENERATOR, "source file must be a JSON object")
    return doc


def cmd_gen(args) -> int:
    kind = args.kind
    instance = None
    spec = None
    try:
        if kind == "dominating-set":
            doc = _load_source(_require_source(args))
            instance = gen_mod.gen_from_dominating_set(
                doc.get("vertices", []), [tuple(e) for e in doc.get("edges", [])]
            )
        elif kind == "node-cover-3reg":
            doc = _load_source(_require_source(args))
            instance = gen_mod.gen_from_node_cover_3regular(
                doc.get("vertices", []), [tuple(e) for e in doc.get("edges", [])]
            )
        elif kind == "set-cover":
            doc = _load_source(_require_source(args))
            kwargs = {}
            if args.epsilon:
                kwargs["epsilon"] = Fraction(args.epsilon)
            instance = gen_mod.gen_from_set_cover(
                doc.get("universe", []), doc.get("sets", []), **kwargs
            )
        elif kind == "max-coverage":
            doc = _load_source(_require_source(args))
            instance = gen_mod.gen_from_max_coverage(
                doc.get("universe", []), doc.get("sets", []), args.kappa or 1
            )
        elif kind == "densest-hypergraph":
            doc = _load_source(_require_source(args))
            instance = gen_mod.gen_from_densest_subhypergraph(
                doc.get("vertices", []), doc.get("hyperedges", []), args.kappa or 1
            )
        elif kind == "random-arborescence":
            spec = gen_mod.gen_random_in_arborescence(
                n=args.n,
                max_in_degree=args.max_in_degree,
                gamma=Fraction(args.gamma),
                phi=Fraction(args.phi),
                external=Fraction(args.external),
                seed=args.seed,
            )
        elif kind == "random-dag":
            spec = gen_mod.gen_random_dag(
                n=args.n,
                edge_prob=args.edge_prob,
                gamma=Fraction(args.gamma),
                phi=Fraction(args.phi),
                external=Fraction(args.external),
                seed=args.seed,
            )
        else:  # pragma: no cover - argparse restricts choices
            raise CliError(EXIT_GENERATOR, f"unknown kind {kind!r}")
    except gen_mod.GenerationError as exc:
        raise CliError(EXIT_GENERATOR, f"generation failed: {exc}") from exc
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(EXIT_GENERATOR, f"generation failed: {exc}") from exc

    if instance is not None:
        spec = instance.spec
    network_path = f"{args.out}.network.json"
    io_mod.save_spec(spec, network_path)
    written = [network_path]
    if instance is not None:
        cert_path = f"{args.out}.certificate.json"
        with open(cert_path, "w", encoding="utf-8") as fh:
            fh.write(io_mod.certificate_to_json(instance))
        written.append(cert_path)
    json.dump({"written": written}, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _require_source(args) -> str:
    if not args.source:
        raise CliError(EXIT_GENERATOR, f"kind {args.kind!r} requires --source")
    return args.source


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bankstab",
        description="Banking-network shock propagation and stability toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("balance", help="print balance sheets as CSV")
    _add_network_args(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("simulate", help="run a shock cascade")
    _add_network_args(p)
    p.add_argument("--shock", nargs="+", required=True, help="shocked node ids")
    p.add_argument("--horizon", type=int, default=None, help="time horizon T")
    p.add_argument("--trace", help="write full trace JSON here")
    p.add_argument("--dot", help="write DOT cascade report here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stab", help="minimum kill-set stability index vi*")
    _add_network_args(p)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument(
        "--method", choices=["auto", "brute", "greedy-t2", "dp"], default="auto"
    )
    p.add_argument("--node-limit", type=int, default=20)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("dual", help="dual stability index dvi*")
    _add_network_args(p)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument(
        "--method", choices=["auto", "brute", "greedy", "dp"], default="auto"
    )
    p.add_argument("--node-limit", type=int, default=20)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("gen", help="generate instances")
    p.add_argument(
        "kind",
        choices=[
            "dominating-set",
            "node-cover-3reg",
            "set-cover",
            "max-coverage",
            "densest-hypergraph",
            "random-arborescence",
            "random-dag",
        ],
    )
    p.add_argument("--source", help="source combinatorial object (JSON)")
    p.add_argument("--kappa", type=int, help="kappa for the dual reductions")
    p.add_argument("--epsilon", help="exact rational epsilon for set-cover")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--max-in-degree", type=int, default=3)
    p.add_argument("--edge-prob", type=float, default=0.3)
    p.add_argument("--gamma", default="1/10")
    p.add_argument("--phi", default="2/5")
    p.add_argument("--external", default="16")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
