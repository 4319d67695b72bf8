"""Set-wise coordinate descent for dual consensus problems."""

from ._core import (
    DualConsensusProblem,
    DualState,
    Graph,
    Quadratic,
    SeparableQuadraticProblem,
    SeparableState,
    SetcdError,
    circulant_regular,
    estimate_rate,
    experiment_decentralized,
    experiment_paramserver,
    graph_from_json,
    norm_sm,
    random_connected_graph,
    range_projector,
    sm_dual_norm,
    smno_dual_candidate,
    verify,
)

__all__ = [
    "DualConsensusProblem",
    "DualState",
    "Graph",
    "Quadratic",
    "SeparableQuadraticProblem",
    "SeparableState",
    "SetcdError",
    "circulant_regular",
    "estimate_rate",
    "experiment_decentralized",
    "experiment_paramserver",
    "graph_from_json",
    "norm_sm",
    "random_connected_graph",
    "range_projector",
    "sm_dual_norm",
    "smno_dual_candidate",
    "verify",
]
