"""Convolution algebras of graph toposes, finite groupoids and the Z/p^k tower."""

from ._convalg import (
    Graph,
    GpdElement,
    Groupoid,
    InvariantError,
    LpaElement,
    ParseError,
    PreconditionError,
    Ring,
    TowerElement,
    conv_product,
    groupoid_norms,
    hecke_norms,
    relation_suite,
    run_cli,
    verify_graph_equivalence,
    verify_groupoid_equivalence,
)

__all__ = [
    "Graph",
    "GpdElement",
    "Groupoid",
    "InvariantError",
    "LpaElement",
    "ParseError",
    "PreconditionError",
    "Ring",
    "TowerElement",
    "conv_product",
    "groupoid_norms",
    "hecke_norms",
    "relation_suite",
    "run_cli",
    "verify_graph_equivalence",
    "verify_groupoid_equivalence",
]
