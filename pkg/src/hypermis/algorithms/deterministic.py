"""Deterministic algorithms built on defective colourings."""
from __future__ import annotations

import math

from ..coloring import (
    Coloring,
    _defective,
    defective_palette_bound,
    linial_color,
    proper_color,
)
from ..hypergraph import Hypergraph, InvalidInput, VertexSet, induced, underlying_graph
from ..localsim import NodeProgram, SimReport, run_sync
from ..verify import is_alpha_beta, is_k_weak_maximal, is_ruling_set
from .common import AlgoResult, ClassJoinProgram, IterationBudgetExceeded, check_alpha_beta

SATURATED = float("inf")


# -------------------------------------------------------- (α,β) by classes

def edge_partition_is(
    H: Hypergraph, alpha: int, beta: int, seed: int = 0, trace: bool = False
) -> AlgoResult:
    """(α,β)-IS from a (β-α+1)-defective colouring.

    Classes are processed one per round; a vertex joins iff each incident edge
    still has fewer than α members. A class adds at most δ = β-α+1 members to
    any edge, so no edge exceeds β. Deterministic; ``seed`` is accepted for a
    uniform interface.
    """
    check_alpha_beta(alpha, beta)
    delta = beta - alpha + 1
    if H.rank:
        delta = min(delta, H.rank)
    if H.m:
        col = _defective(H, delta)
    else:
        col = Coloring({v: 1 for v in H.vertices}, 1, "defective", delta, SimReport.idle(0))
    classes = defective_palette_bound(H, delta)
    return _edge_partition(H, alpha, beta, col, classes, trace)


def edge_partition_with_coloring(
    H: Hypergraph, alpha: int, beta: int, coloring: Coloring, trace: bool = False
) -> AlgoResult:
    """Class-join step on a caller-supplied (β-α+1)-defective colouring."""
    check_alpha_beta(alpha, beta)
    return _edge_partition(H, alpha, beta, coloring, coloring.palette_size, trace)


def _edge_partition(H, alpha, beta, col, classes, trace=False) -> AlgoResult:
    rep = run_sync(H, ClassJoinProgram(alpha, classes), inputs=col.assignment, trace=trace)
    full = SimReport.chain([col.report, rep]) if col.report else rep
    S = VertexSet.of(H, [v for v, j in rep.outputs.items() if j], "edge-partition")
    info = {"palette": col.palette_size, "classes": classes, "coloring_rounds": full.rounds - rep.rounds}
    return AlgoResult(S, full, bool(is_alpha_beta(H, S, alpha, beta)), info)


# ------------------------------------------------------------ ruling set

def find_ruling_set(H: Hypergraph, k: int, seed: int = 0) -> AlgoResult:
    """(2,k)-ruling set: shrink the rank by a third per level, then take an MIS.

    Each of at most k-1 levels keeps an (⌈r'/3⌉, ⌊2r'/3⌋)-IS of the current
    survivors, so every dropped vertex has a survivor in one of its edges. The
    rank r' is re-read from the induced hypergraph after each level. A final
    MIS of the survivors' underlying graph adds the last hop.
    """
    if k < 1:
        raise InvalidInput(f"need k >= 1, got {k}")
    cur = H
    reports = []
    levels = []
    for _ in range(k - 1):
        rp = cur.rank
        if rp <= 2:
            break
        a, b = math.ceil(rp / 3), (2 * rp) // 3
        res = edge_partition_is(cur, a, b, seed)
        reports.append(res.report)
        levels.append({"rank": rp, "alpha": a, "beta": b, "survivors": len(res.vertices)})
        cur = induced(cur, res.vertices)
    final = edge_partition_is(underlying_graph(cur), 1, 1, seed)
    reports.append(final.report)
    S = VertexSet.of(H, final.vertices.members, "ruling-set")
    rep = SimReport.chain(reports, outputs={v: v in S for v in H.vertices})
    return AlgoResult(S, rep, bool(is_ruling_set(H, S, 2, k)), {"levels": levels})


# ------------------------------------------------------------ k-weak MIS

def phase_of(sat: int, k: int):
    """Phase φ of an edge with ``sat`` members out of a budget of ``k``.

    φ is the unique integer with (1-2^-φ)k < sat <= (1-2^-(φ+1))k, i.e. the
    remaining room k-sat has been halved φ times; sat = 0 is phase 0 and
    sat = k is :data:`SATURATED`.
    """
    if k < 1 or not 0 <= sat <= k:
        raise InvalidInput(f"need 0 <= sat <= k and k >= 1, got sat={sat}, k={k}")
    if sat == k:
        return SATURATED
    phi = 0
    # integer form of sat > (1 - 2^-(φ+1)) k
    while sat * 2 ** (phi + 1) > k * (2 ** (phi + 1) - 1):
        phi += 1
    return phi


def partition_active(active: list[int], r: int, k: int) -> list[list[int]]:
    """Split an edge's ID-sorted active vertices into consecutive parts.

    With at least 4(r-k) active vertices the edge uses max(⌊x/4⌋, ⌈x/5⌉)
    balanced parts (so parts have at most 5 members); otherwise one part.
    """
    x = len(active)
    if x == 0:
        return []
    if x < 4 * (r - k):
        return [list(active)]
    parts = max(x // 4, math.ceil(x / 5))
    size, extra = divmod(x, parts)
    out, i = [], 0
    for j in range(parts):
        s = size + (1 if j < extra else 0)
        out.append(active[i : i + s])
        i += s
    return out


class _StatusProgram(NodeProgram):
    """Two rounds: learn sat(e), then learn which members of each edge are active."""

    name = "status"
    schedule_length = 2

    def __init__(self, k: int):
        self.k = k

    def init(self, ctx):
        ctx.broadcast(bool(ctx.input))
        return {"in_S": bool(ctx.input), "sat": {}, "active": False, "A": {}}

    def step(self, state, ctx):
        if ctx.round == 1:
            for eid, e in ctx.edges:
                state["sat"][eid] = sum(1 for u in e if u != ctx.id and ctx.inbox[u]) + state["in_S"]
            state["active"] = not state["in_S"] and all(s < self.k for s in state["sat"].values())
            ctx.broadcast(state["active"])
        else:
            for eid, e in ctx.edges:
                state["A"][eid] = [u for u in e if (ctx.inbox[u] if u != ctx.id else state["active"])]
            ctx.halt()
        return state


class _KWeakClassProgram(NodeProgram):
    """Active vertices announce their colour, then classes 1..Ψ decide in turn.

    A class-c vertex joins iff every incident edge e has at most k - sat(e)
    active class-c members.
    """

    name = "k-weak-classes"

    def __init__(self, k: int, classes: int):
        self.k = k
        self.schedule_length = classes

    def init(self, ctx):
        inp = ctx.input
        state = {"cls": inp["color"], "sat": dict(inp["sat"]), "in_S": False, "load": None}
        if state["cls"] is None:
            ctx.halt()
        else:
            ctx.broadcast(state["cls"])
        return state

    def step(self, state, ctx):
        if ctx.round == 1:
            colours = dict(ctx.inbox)
            colours[ctx.id] = state["cls"]
            state["load"] = {
                eid: sum(1 for u in e if colours.get(u) == state["cls"]) for eid, e in ctx.edges
            }
        else:
            for u, msg in ctx.inbox.items():
                if msg == "join":
                    for eid, e in ctx.edges:
                        if u in e:
                            state["sat"][eid] += 1
        if state["cls"] == ctx.round:
            if all(state["load"][eid] <= self.k - s for eid, s in state["sat"].items()):
                state["in_S"] = True
                ctx.broadcast("join")
            ctx.halt()
        return state

    def output(self, state):
        return state["in_S"]


def k_weak_mis_large_k(H: Hypergraph, k: int, seed: int = 0) -> AlgoResult:
    """k-weak MIS for r-uniform H, aimed at k close to r.

    Each iteration refreshes saturations and active sets, splits every edge's
    active vertices into small parts, properly colours the part hypergraph and
    lets colour classes join greedily. An edge whose room k - sat(e) is not
    enough for a class has had its room halved, so within 1 + Δ⌈log₂ r⌉
    iterations every vertex is in S or sits in a saturated edge. The loop ends
    as soon as no vertex is active.
    """
    if not H.is_uniform:
        raise InvalidInput("needs an r-uniform hypergraph")
    r = H.rank
    if H.m and not 1 <= k <= r - 1:
        raise InvalidInput(f"need 1 <= k <= r-1, got k={k}, r={r}")
    if k < 1:
        raise InvalidInput(f"need k >= 1, got {k}")
    delta_max = H.max_degree
    budget = 1 + delta_max * math.ceil(math.log2(r)) if r > 1 else 1
    D_parts = delta_max * max(4, 4 * (r - k) - 2)
    bound = 4 * delta_max * (r - k) + 1 if r - k >= 2 else 4 * delta_max + 1

    base = linial_color(H)
    base0 = {v: c - 1 for v, c in base.assignment.items()}
    reports = [base.report]
    in_S = {v: False for v in H.vertices}
    history = []
    iterations = 0
    while True:
        status = run_sync(H, _StatusProgram(k), inputs=in_S)
        reports.append(status)
        st = status.outputs
        active = [v for v in H.vertices if st[v]["active"]]
        sat = {eid: 0 for eid in H.edge_ids}
        for v in H.vertices:
            sat.update(st[v]["sat"])
        history.append(dict(sat))
        if not active:
            break
        if iterations >= budget:
            raise IterationBudgetExceeded(
                f"{len(active)} vertices still active after {iterations} iterations (budget {budget})"
            )
        iterations += 1
        parts = []
        for eid, e in zip(H.edge_ids, H.edges):
            owner = st[e[0]]["A"][eid]
            parts.extend(p for p in partition_active(owner, r, k) if len(p) > 1)
        Hp = Hypergraph(active, parts)
        col = proper_color(Hp, D_parts, initial={v: base0[v] for v in active}, space=base.palette_size)
        if col.palette_size > bound:
            raise AssertionError(f"part colouring used {col.palette_size} > {bound} colours")
        reports.append(col.report)
        inputs = {
            v: {"color": col.assignment.get(v), "sat": st[v]["sat"]} for v in H.vertices
        }
        cls = run_sync(H, _KWeakClassProgram(k, D_parts + 1), inputs=inputs)
        reports.append(cls)
        for v, j in cls.outputs.items():
            in_S[v] = in_S[v] or j
    S = VertexSet.of(H, [v for v, j in in_S.items() if j], "k-weak-large-k")
    rep = SimReport.chain(reports, outputs=dict(in_S))
    info = {"iterations": iterations, "iteration_budget": budget, "sat_history": history}
    return AlgoResult(S, rep, bool(is_k_weak_maximal(H, S, k)), info)
