"""Constant-round MDS approximation for anonymous port-numbered planar networks."""

from .exact_oracle import OracleResult, exact_mds, greedy_mds, is_dominating, ratio
from .generators import (
    FamilySpec,
    gen_caterpillar,
    gen_cycle,
    gen_grid,
    gen_random_triangulation,
    gen_shared_hub,
    gen_star,
    generate,
)
from .mds_protocol import (
    MdsNodeState,
    MdsResult,
    PortNumberingMds,
    hop2_dominate_ref,
    reference_mds,
    run_distributed,
    two_hop_check,
)
from .port_graph import GraphError, PortGraph, PortRef, Verdict, from_edge_list, planarity_bound_check
from .sync_engine import Message, RunStats, Tag, assert_congest, execute, message_bits

__all__ = [
    "FamilySpec", "GraphError", "MdsNodeState", "MdsResult", "Message", "OracleResult", "PortGraph",
    "PortNumberingMds", "PortRef", "RunStats", "Tag", "Verdict", "assert_congest", "exact_mds", "execute",
    "from_edge_list", "gen_caterpillar", "gen_cycle", "gen_grid", "gen_random_triangulation", "gen_shared_hub",
    "gen_star", "generate", "greedy_mds", "hop2_dominate_ref", "is_dominating", "message_bits",
    "planarity_bound_check", "ratio", "reference_mds", "run_distributed", "two_hop_check",
]
