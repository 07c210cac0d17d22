"""Maximal matching in a hypergraph from repeated 1-weak MIS computations."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..hypergraph import Hypergraph
from ..localsim import SimReport
from ..verify import is_maximal_matching
from .common import IterationBudgetExceeded
from .deterministic import edge_partition_is

ROUNDS_PER_PROPOSAL = 3  # propose, flood conflicts within the edge, confirm


@dataclass
class MatchingResult:
    edges: list[int]
    report: SimReport
    valid: bool
    info: dict = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return self.report.rounds


def _residual(vertices, edges) -> Hypergraph:
    return Hypergraph(vertices, [e for _, e in edges], [eid for eid, _ in edges])


def extract_maximal_matching(H: Hypergraph, seed: int = 0) -> MatchingResult:
    """Maximal matching using at most Δ MIS computations.

    Each iteration takes a 1-weak MIS S of the residual hypergraph. Members of S
    then propose their smallest remaining edge; a proposal is accepted when no
    intersecting proposal comes from a smaller ID, and accepted edges are
    removed together with every edge they touch. Proposing repeats until each
    member of S is matched or has no edge left. Any residual vertex outside S
    shared an edge with some member of S, and that edge is now gone, so the
    maximum degree drops every iteration.
    """
    matched: list[int] = []
    covered: set[int] = set()
    remaining = list(zip(H.edge_ids, H.edges))
    reports = []
    iterations = 0
    proposal_steps = 0
    while remaining:
        if iterations >= max(H.max_degree, 1):
            raise IterationBudgetExceeded(f"{len(remaining)} edges left after {iterations} iterations")
        iterations += 1
        cur = _residual([v for v in H.vertices if v not in covered], remaining)
        mis = edge_partition_is(cur, 1, 1, seed)
        reports.append(mis.report)
        S = sorted(mis.vertices.members)
        while True:
            proposals = {}
            for v in S:
                if v in covered:
                    continue
                opts = [(eid, e) for eid, e in remaining if v in e]
                if opts:
                    proposals[v] = min(opts)
            if not proposals:
                break
            proposal_steps += 1
            reports.append(SimReport.idle(ROUNDS_PER_PROPOSAL, name="propose"))
            accepted = []
            for v, (eid, e) in proposals.items():
                es = set(e)
                if all(u > v for u, (_, f) in proposals.items() if u != v and es.intersection(f)):
                    accepted.append((eid, e))
            for eid, e in accepted:
                matched.append(eid)
                covered.update(e)
            remaining = [(eid, e) for eid, e in remaining if covered.isdisjoint(e)]
    rep = SimReport.chain(reports) if reports else SimReport.idle(0)
    valid = bool(is_maximal_matching(H, matched))
    return MatchingResult(sorted(matched), rep, valid, {"iterations": iterations, "proposal_steps": proposal_steps})
