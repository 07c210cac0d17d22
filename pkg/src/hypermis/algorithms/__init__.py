from .common import AlgoParams, AlgoResult, ClassJoinProgram, IterationBudgetExceeded
from .deterministic import (
    SATURATED,
    edge_partition_is,
    edge_partition_with_coloring,
    find_ruling_set,
    k_weak_mis_large_k,
    partition_active,
    phase_of,
)
from .matching import MatchingResult, extract_maximal_matching
from .randomized import (
    LLLReport,
    MoserTardosProgram,
    high_rank_remove,
    join_probability,
    lll_feasible,
    moser_tardos_is,
    zero_round_is,
)

ALGORITHMS = {
    "zero-round": zero_round_is,
    "moser-tardos": moser_tardos_is,
    "high-rank": high_rank_remove,
    "edge-partition": edge_partition_is,
    "ruling-set": find_ruling_set,
    "k-weak-large-k": k_weak_mis_large_k,
    "matching": extract_maximal_matching,
}
