"""bankstab: banking-network shock propagation and stability analysis."""

from .network import (
    HETEROGENEOUS,
    HOMOGENEOUS,
    BalanceSheet,
    NetworkSpec,
    derive_balance_sheets,
    normalize_homogeneous,
    validate,
    weakly_connected_components,
)
from .numeric import FLOAT, RATIONAL, format_amount, parse_amount, to_amount
from .cascade import (
    CascadeStep,
    CascadeTrace,
    horizon_bound,
    infl,
    is_dead,
    propagate,
)
from .stability import (
    CoverInstance,
    StabilityResult,
    arborescence_lower_bound,
    build_cover_instance,
    every_node_fails_when_shocked,
    greedy_ratio_bound,
    influence_zone,
    is_in_arborescence,
    stab_exact_bruteforce,
    stab_exact_in_arborescence,
    stab_greedy_t2,
    vi,
)
from .dual import (
    DualResult,
    dual_arborescence_upper_bound,
    dual_exact_bruteforce,
    dual_exact_in_arborescence,
    dual_greedy,
)
from .generators import (
    GeneratedInstance,
    GenerationError,
    gen_from_densest_subhypergraph,
    gen_from_dominating_set,
    gen_from_max_coverage,
    gen_from_node_cover_3regular,
    gen_from_set_cover,
    gen_random_dag,
    gen_random_in_arborescence,
    gen_tight_influence_tree,
)
from .io import (
    NetworkFileError,
    load_spec,
    parse_spec,
    save_spec,
    serialize_spec,
    spec_from_edges_csv,
    trace_to_dot,
    trace_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "HETEROGENEOUS",
    "HOMOGENEOUS",
    "RATIONAL",
    "FLOAT",
    "BalanceSheet",
    "NetworkSpec",
    "CascadeStep",
    "CascadeTrace",
    "CoverInstance",
    "StabilityResult",
    "DualResult",
    "GeneratedInstance",
    "GenerationError",
    "NetworkFileError",
    "arborescence_lower_bound",
    "build_cover_instance",
    "derive_balance_sheets",
    "dual_arborescence_upper_bound",
    "dual_exact_bruteforce",
    "dual_exact_in_arborescence",
    "dual_greedy",
    "every_node_fails_when_shocked",
    "format_amount",
    "gen_from_densest_subhypergraph",
    "gen_from_dominating_set",
    "gen_from_max_coverage",
    "gen_from_node_cover_3regular",
    "gen_from_set_cover",
    "gen_random_dag",
    "gen_random_in_arborescence",
    "gen_tight_influence_tree",
    "greedy_ratio_bound",
    "horizon_bound",
    "infl",
    "influence_zone",
    "is_dead",
    "is_in_arborescence",
    "load_spec",
    "normalize_homogeneous",
    "parse_amount",
    "parse_spec",
    "propagate",
    "save_spec",
    "serialize_spec",
    "spec_from_edges_csv",
    "stab_exact_bruteforce",
    "stab_exact_in_arborescence",
    "stab_greedy_t2",
    "to_amount",
    "trace_to_dot",
    "trace_to_json",
    "validate",
    "vi",
    "weakly_connected_components",
]
