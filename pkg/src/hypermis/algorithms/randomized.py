"""Randomized algorithms: zero-round sampling, Moser–Tardos resampling, and
the one-shot removal scheme for high-rank hypergraphs."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..hypergraph import Hypergraph, InvalidInput, VertexSet
from ..localsim import NodeProgram, run_sync
from ..verify import is_alpha_beta
from .common import AlgoResult, check_alpha_beta


def join_probability(alpha: int, beta: int, r: int) -> float:
    """q = μ/r with μ = (α+β)/2, the mean edge load centred between α and β."""
    return (alpha + beta) / (2 * r)


def _check_ab_rank(H: Hypergraph, alpha: int, beta: int) -> None:
    check_alpha_beta(alpha, beta)
    if H.m and beta >= H.rank:
        raise InvalidInput(f"need β <= r-1, got β={beta}, r={H.rank}")


def _sampling_q(H: Hypergraph, alpha: int, beta: int) -> float:
    # without edges there is no rank to scale by; 1/2 is as good as any
    return join_probability(alpha, beta, H.rank) if H.m else 0.5


# ------------------------------------------------------------ zero rounds

class _SampleProgram(NodeProgram):
    name = "zero-round"
    schedule_length = 0

    def __init__(self, q: float):
        self.q = q

    def init(self, ctx):
        ctx.halt()
        return bool(ctx.rng.random() < self.q)


def zero_round_is(H: Hypergraph, alpha: int, beta: int, seed: int = 0) -> AlgoResult:
    """Every vertex joins independently with probability (α+β)/(2r). Zero rounds;
    the result may be invalid and is reported as such."""
    _check_ab_rank(H, alpha, beta)
    q = _sampling_q(H, alpha, beta)
    rep = run_sync(H, _SampleProgram(q), seed=seed)
    S = VertexSet.of(H, [v for v, x in rep.outputs.items() if x], "zero-round")
    return AlgoResult(S, rep, bool(is_alpha_beta(H, S, alpha, beta)), {"q": q})


# ------------------------------------------------------------------- LLL

@dataclass(frozen=True)
class LLLReport:
    feasible: bool
    lhs: float
    rhs: float
    p_bound: float
    d: int
    epd: float  # e·p·(d+1)


def lll_feasible(r: int, delta_max: int, alpha: int, beta: int) -> LLLReport:
    """Sufficient condition for the (α,β)-IS LLL instance to be solvable.

    Feasible iff (β-α)²/(β+α) >= 6·ln(16·r·Δ) and α <= β <= r-1. The report
    also carries the dependency degree d = Δr + Δ + r, the Chernoff bound
    p = 2·exp(-(β-α)²/(6(β+α))) and the symmetric-LLL quantity e·p·(d+1).
    """
    if min(r, delta_max, alpha, beta) < 1:
        raise InvalidInput("parameters must be positive")
    lhs = (beta - alpha) ** 2 / (beta + alpha)
    rhs = 6 * math.log(16 * r * delta_max)
    d = delta_max * r + delta_max + r
    p = 2 * math.exp(-lhs / 6)
    epd = math.e * p * (d + 1)
    ok = lhs >= rhs and alpha <= beta <= r - 1
    return LLLReport(ok, lhs, rhs, p, d, epd)


# ----------------------------------------------------------- Moser–Tardos

def _vertex_event_vars(ctx) -> frozenset:
    out = {ctx.id}
    for _, members in ctx.edges:
        out.update(members)
    return frozenset(out)


class MoserTardosProgram(NodeProgram):
    """Parallel Moser–Tardos resampling, four rounds per cycle.

    Events: the edge event ``(0, eid)`` is violated when the edge holds more
    than β members; the vertex event ``(1, vid)`` when the vertex is out and
    every incident edge holds fewer than α. Keys compare as tuples. Edge
    events are owned by the smallest member of the edge, vertex events by the
    vertex itself; dependent events (sharing a variable) are owned within two
    hops of each other.

    Cycle (round ``t``, ``t mod 4``):
      1. read neighbour values, evaluate owned events, announce violated ones;
      2. forward the announcements heard (second hop);
      3. each violated event that beats every dependent violated event it
         heard about resamples its variables and ships the new values;
      0. apply received values and announce changed values.
    """

    name = "moser-tardos"

    def __init__(self, alpha: int, beta: int, q: float):
        self.alpha, self.beta, self.q = alpha, beta, q

    def init(self, ctx):
        draw = bool(ctx.rng.random() < self.q)
        x = draw if ctx.input is None else bool(ctx.input)
        ctx.broadcast(x)
        return {
            "x": x,
            "nbr": {},
            "violated": None,
            "heard": {},
            "resamples": 0,
            "dirty": False,
            "owned": [(eid, e) for eid, e in ctx.edges if e[0] == ctx.id],
            "vvars": _vertex_event_vars(ctx),
        }

    def _evaluate(self, state, ctx):
        val = dict(state["nbr"])
        val[ctx.id] = state["x"]
        out = {}
        counts = {eid: sum(val[u] for u in e) for eid, e in ctx.edges}
        for eid, e in state["owned"]:
            if counts[eid] > self.beta:
                out[(0, eid)] = frozenset(e)
        if not state["x"] and all(c < self.alpha for c in counts.values()):
            out[(1, ctx.id)] = state["vvars"]
        return out

    def step(self, state, ctx):
        phase = ctx.round % 4
        if phase == 1:
            state["nbr"].update(ctx.inbox)
            state["violated"] = self._evaluate(state, ctx)
            state["heard"] = dict(state["violated"])
            if state["violated"]:
                ctx.broadcast(state["violated"])
        elif phase == 2:
            fwd = {}
            for msg in ctx.inbox.values():
                fwd.update(msg)
            state["heard"].update(fwd)
            if fwd:
                ctx.broadcast(fwd)
        elif phase == 3:
            for msg in ctx.inbox.values():
                state["heard"].update(msg)
            self._resample(state, ctx)
        else:
            changed, state["dirty"] = state["dirty"], False
            for val in ctx.inbox.values():
                changed |= val != state["x"]
                state["x"] = val
            if changed:
                ctx.broadcast(state["x"])
        return state

    def _resample(self, state, ctx):
        heard = state["heard"]
        for key, vars_ in sorted(state["violated"].items()):
            if any(other < key and vars_ & ov for other, ov in heard.items() if other != key):
                continue
            rng = ctx.edge_rng(key[1]) if key[0] == 0 else ctx.rng
            draws = rng.random(len(vars_)) < self.q
            new = dict(zip(sorted(vars_), (bool(b) for b in draws)))
            state["resamples"] += 1
            for u, val in new.items():
                if u == ctx.id:
                    state["dirty"] |= val != state["x"]
                    state["x"] = val
                else:
                    ctx.send(u, val)
            return  # at most one winner per owner: all owned events share ctx.id

    def output(self, state):
        return state["x"]

    def snapshot(self, state):
        return {"x": state["x"], "resamples": state["resamples"]}


def moser_tardos_is(
    H: Hypergraph,
    alpha: int,
    beta: int,
    seed: int = 0,
    budget: int | None = None,
    trace: bool = False,
    initial: dict[int, bool] | None = None,
) -> AlgoResult:
    """(α,β)-IS by distributed Moser–Tardos resampling.

    Stops once no event is violated (global detection) or once the number of
    resamplings reaches ``budget`` (default 100 per event); in the latter case
    the current set is returned flagged invalid. ``initial`` overrides the
    first sample of chosen vertices.
    """
    _check_ab_rank(H, alpha, beta)
    q = _sampling_q(H, alpha, beta)
    budget = 100 * (H.n + H.m) if budget is None else budget
    prog = MoserTardosProgram(alpha, beta, q)

    live = {}

    def done(states, t):
        live["states"] = states
        if t % 4 != 1:
            return False
        clean = all(not s["violated"] for s in states.values())
        return clean or sum(s["resamples"] for s in states.values()) >= budget

    rep = run_sync(H, prog, seed=seed, stop_when=done, trace=trace, inputs=initial)
    resamples = sum(s["resamples"] for s in live.get("states", {}).values())
    S = VertexSet.of(H, [v for v, x in rep.outputs.items() if x], "moser-tardos")
    valid = bool(is_alpha_beta(H, S, alpha, beta))
    return AlgoResult(S, rep, valid, {"q": q, "budget": budget, "resamples": resamples})


# ------------------------------------------------------------- high rank

class _RemoveProgram(NodeProgram):
    name = "high-rank-remove"
    schedule_length = 1

    def init(self, ctx):
        hits = {}
        for eid, e in ctx.edges:
            if e[0] == ctx.id:
                u = e[int(ctx.edge_rng(eid).integers(len(e)))]
                hits[u] = hits.get(u, 0) + 1
        removed = hits.pop(ctx.id, 0) > 0
        for u, c in hits.items():
            ctx.send(u, c)
        return {"removed": removed}

    def step(self, state, ctx):
        if ctx.inbox:
            state["removed"] = True
        ctx.halt()
        return state

    def output(self, state):
        return not state["removed"]


def high_rank_remove(H: Hypergraph, k: int = 1, seed: int = 0) -> AlgoResult:
    """Start from S = V; every edge removes one uniformly random member.

    The edge's smallest member draws from the edge's random stream and notifies
    the victim, so one round of communication suffices. ``k`` only enters the
    size guarantee r/(2k) for λ-intersecting inputs with λ < k.
    """
    if k < 1:
        raise InvalidInput(f"need k >= 1, got {k}")
    if not H.is_uniform:
        raise InvalidInput("high-rank removal needs an r-uniform hypergraph")
    rep = run_sync(H, _RemoveProgram(), seed=seed)
    S = VertexSet.of(H, [v for v, keep in rep.outputs.items() if keep], "high-rank")
    sizes = [sum(1 for v in e if v in S) for e in H.edges]
    valid = all(c <= len(e) - 1 for c, e in zip(sizes, H.edges))
    return AlgoResult(S, rep, valid, {"survivors_per_edge": sizes, "weakness": max(sizes, default=0)})
