"""Synchronous LOCAL-model execution engine.

A :class:`NodeProgram` runs at every vertex. ``init`` sees only the vertex's
1-hop view (its incident edges with their member IDs) and its own local input;
each later ``step`` also sees the messages neighbours sent in the previous
round. Messages sent during round ``t`` become readable in round ``t + 1``.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from .hypergraph import Hypergraph, bfs_distances

_VERTEX_STREAM = 0
_EDGE_STREAM = 1


class RoundBudgetExhausted(RuntimeError):
    def __init__(self, rounds: int, running: list[int]):
        self.rounds = rounds
        self.running = running
        head = ", ".join(map(str, running[:10]))
        more = "" if len(running) <= 10 else f" and {len(running) - 10} more"
        super().__init__(f"{len(running)} vertices still running after {rounds} rounds: {head}{more}")


def vertex_rng(seed: int, vid: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, _VERTEX_STREAM, vid]))


def edge_rng(seed: int, eid: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, _EDGE_STREAM, eid]))


class NodeContext:
    """What one vertex can see and do in the current round."""

    def __init__(self, vid, edges, neighbors, rng, edge_rngs, local_input):
        self.id = vid
        self.edges: tuple[tuple[int, tuple[int, ...]], ...] = edges
        self.neighbors: frozenset[int] = neighbors
        self.rng: np.random.Generator = rng
        self._edge_rngs = edge_rngs
        self.input = local_input
        self.round = 0
        self.inbox: dict[int, Any] = {}
        self._outbox: dict[int, Any] = {}
        self._halted = False

    def edge_rng(self, eid: int) -> np.random.Generator:
        """Random stream owned by edge ``eid``; only its members may use it."""
        if not any(e == eid for e, _ in self.edges):
            raise PermissionError(f"vertex {self.id} is not a member of edge {eid}")
        return self._edge_rngs[eid]

    def send(self, to: int, msg) -> None:
        if to not in self.neighbors:
            raise ValueError(f"vertex {self.id} cannot reach non-neighbour {to}")
        if to in self._outbox:
            raise ValueError(f"vertex {self.id} already sent to {to} this round")
        self._outbox[to] = msg

    def broadcast(self, msg) -> None:
        for u in self.neighbors:
            self.send(u, msg)

    def halt(self) -> None:
        self._halted = True


class NodeProgram:
    """Base class for per-vertex programs.

    Subclasses override :meth:`init`, :meth:`step` and :meth:`output`.
    ``schedule_length`` (if set) is the globally known number of rounds the
    program occupies; vertices may halt earlier and the remaining rounds are
    reported as idle.
    """

    name = "program"
    schedule_length: int | None = None

    def init(self, ctx: NodeContext):
        raise NotImplementedError

    def step(self, state, ctx: NodeContext):
        return state

    def output(self, state):
        return state

    def snapshot(self, state):
        return self.output(state)


@dataclass
class SimReport:
    rounds: int
    messages_per_round: list[int]
    outputs: dict[int, Any]
    trace: list[dict] | None = None
    undelivered: int = 0
    phases: list[tuple[str, int]] = field(default_factory=list)

    @property
    def messages(self) -> int:
        return sum(self.messages_per_round)

    @classmethod
    def chain(cls, reports: Iterable["SimReport"], outputs=None) -> "SimReport":
        """Concatenate sequential phases into one report."""
        reports = list(reports)
        mpr: list[int] = []
        trace: list[dict] | None = None
        phases: list[tuple[str, int]] = []
        for rep in reports:
            if rep.trace is not None:
                trace = trace if trace is not None else []
                offset = len(mpr)
                for rec in rep.trace:
                    trace.append({**rec, "round": rec["round"] + offset})
            mpr.extend(rep.messages_per_round)
            phases.extend(rep.phases)
        if outputs is None:
            outputs = reports[-1].outputs if reports else {}
        return cls(
            rounds=len(mpr),
            messages_per_round=mpr,
            outputs=outputs,
            trace=trace,
            undelivered=sum(r.undelivered for r in reports),
            phases=phases,
        )

    @classmethod
    def idle(cls, rounds: int, outputs=None, name="idle") -> "SimReport":
        return cls(rounds, [0] * rounds, outputs or {}, phases=[(name, rounds)])

    def trace_jsonl(self) -> str:
        """One JSON record per round: ``{round, messages, halted_count}``."""
        if self.trace is None:
            return ""
        keys = ("round", "messages", "halted_count")
        return "".join(
            json.dumps({k: rec[k] for k in keys}, sort_keys=True) + "\n" for rec in self.trace
        )


def run_sync(
    H: Hypergraph,
    prog: NodeProgram,
    seed: int = 0,
    max_rounds: int = 100_000,
    inputs: dict[int, Any] | None = None,
    trace: bool = False,
    stop_when: Callable[[dict[int, Any], int], bool] | None = None,
) -> SimReport:
    """Execute ``prog`` on every vertex of ``H`` in lock-step rounds.

    ``stop_when(states, round)`` is an optional global termination detector
    evaluated after every round; it lets algorithms whose LOCAL versions would
    run a fixed worst-case schedule stop as soon as they are done.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be non-negative")
    inputs = inputs or {}
    edge_rngs = {eid: edge_rng(seed, eid) for eid in H.edge_ids}
    ctxs = {
        v: NodeContext(
            v,
            tuple(H.incident(v)),
            H.neighbors[v],
            vertex_rng(seed, v),
            edge_rngs,
            inputs.get(v),
        )
        for v in H.vertices
    }
    states: dict[int, Any] = {}
    pending: dict[int, dict[int, Any]] = {}
    halted: set[int] = set()

    def collect(v, ctx):
        for to, msg in ctx._outbox.items():
            pending.setdefault(to, {})[v] = msg
        ctx._outbox = {}
        if ctx._halted:
            halted.add(v)

    for v, ctx in ctxs.items():
        states[v] = prog.init(ctx)
        collect(v, ctx)

    records: list[dict] | None = [] if trace else None
    if trace:
        records.append(_record(0, 0, halted, prog, states))
    mpr: list[int] = []
    undelivered = 0
    rounds = 0
    while len(halted) < len(ctxs):
        if stop_when is not None and stop_when(states, rounds):
            break
        if rounds >= max_rounds:
            raise RoundBudgetExhausted(rounds, sorted(set(ctxs) - halted))
        rounds += 1
        inboxes, pending = pending, {}
        delivered = 0
        for to, box in inboxes.items():
            if to in halted:
                undelivered += len(box)
            else:
                delivered += len(box)
        mpr.append(delivered)
        for v, ctx in ctxs.items():
            if v in halted:
                continue
            ctx.round = rounds
            ctx.inbox = inboxes.get(v, {})
            states[v] = prog.step(states[v], ctx)
            ctx.inbox = {}
            collect(v, ctx)
        if trace:
            records.append(_record(rounds, delivered, halted, prog, states))
    undelivered += sum(len(box) for box in pending.values())

    sched = prog.schedule_length
    if sched is not None and rounds < sched and stop_when is None:
        for t in range(rounds + 1, sched + 1):
            mpr.append(0)
            if trace:
                records.append(_record(t, 0, halted, prog, states))
        rounds = sched
    return SimReport(
        rounds=rounds,
        messages_per_round=mpr,
        outputs={v: prog.output(states[v]) for v in ctxs},
        trace=records,
        undelivered=undelivered,
        phases=[(prog.name, rounds)],
    )


def _record(t, delivered, halted, prog, states):
    return {
        "round": t,
        "messages": delivered,
        "halted_count": len(halted),
        "state": {v: prog.snapshot(s) for v, s in states.items()},
    }


def ball(H: Hypergraph, v: int, radius: int) -> Hypergraph:
    """Vertices within ``radius`` of ``v`` plus every edge touching them (whole)."""
    near = bfs_distances(H, [v], limit=radius)
    edges, eids = [], []
    for eid, e in zip(H.edge_ids, H.edges):
        if any(u in near for u in e):
            edges.append(e)
            eids.append(eid)
    verts = set(near).union(*map(set, edges)) if edges else set(near)
    return Hypergraph(verts, edges, eids)


def locality_audit(
    H: Hypergraph,
    prog: NodeProgram,
    seed: int = 0,
    radius_cap: int | None = None,
    inputs: dict[int, Any] | None = None,
    vertices: Iterable[int] | None = None,
    **run_kwargs,
) -> bool:
    """Check that every output depends only on the vertex's neighbourhood.

    Each audited vertex is re-simulated on its radius-``T`` ball, where ``T``
    is ``radius_cap`` or the number of rounds of the full run. Messages and
    state from outside the ball are thereby withheld; any change in the
    vertex's output reveals a non-local read. Every run gets a fresh deep copy
    of ``prog`` so that state hidden in the program object cannot leak
    between runs.
    """
    full = run_sync(H, copy.deepcopy(prog), seed, inputs=inputs, **run_kwargs)
    radius = full.rounds if radius_cap is None else radius_cap
    targets = H.vertices if vertices is None else vertices
    for v in targets:
        sub = ball(H, v, radius)
        sub_inputs = None if inputs is None else {u: inputs.get(u) for u in sub.vertices}
        local = run_sync(sub, copy.deepcopy(prog), seed, inputs=sub_inputs, **run_kwargs)
        if local.outputs[v] != full.outputs[v]:
            return False
    return True
