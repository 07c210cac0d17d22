"""Distributed colouring subroutines.

The pipeline used by the independent-set algorithms is

1. Linial colour reduction from an ID space (or an earlier colouring) down to
   ``O(D²)`` colours in ``O(log*)`` rounds;
2. an additive-group ("locally iterative") reduction to a prime ``q ≈ 2D``
   colours in ``q`` rounds;
3. greedy (deg+1) recolouring by colour class.

``D`` is a globally known upper bound on the degree of the underlying graph.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import sympy

from .hypergraph import Hypergraph, InvalidInput
from .localsim import NodeProgram, SimReport, run_sync

LINIAL_PALETTE_CONSTANT = 16  # Linial palettes stay below 16·(Δr)²


@dataclass
class Coloring:
    assignment: dict[int, int]
    palette_size: int
    kind: str = "proper"
    defect: int | None = None
    report: SimReport | None = None

    def __getitem__(self, v):
        return self.assignment[v]

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in sorted(self.assignment.items()):
            out.setdefault(c, []).append(v)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "coloring": {str(v): c for v, c in sorted(self.assignment.items())},
                "palette": self.palette_size,
                "kind": self.kind,
                "defect": self.defect,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Coloring":
        obj = json.loads(text)
        assignment = {int(v): int(c) for v, c in obj["coloring"].items()}
        return cls(
            assignment,
            int(obj.get("palette", max(assignment.values(), default=0))),
            obj.get("kind", "proper"),
            obj.get("defect"),
        )


def _from_outputs(outputs: dict[int, int], kind="proper", defect=None, report=None) -> Coloring:
    return Coloring(dict(outputs), max(outputs.values(), default=0), kind, defect, report)


# ------------------------------------------------------------------ primes

def is_prime(x: int) -> bool:
    return bool(sympy.isprime(x))


def next_prime(x: int) -> int:
    """Smallest prime ``>= x``."""
    return 2 if x <= 2 else int(sympy.nextprime(x - 1))


def _iroot_ceil(m: int, k: int) -> int:
    """Smallest integer ``t`` with ``t**k >= m``."""
    t, exact = sympy.integer_nthroot(m, k)
    return int(t) if exact else int(t) + 1


# ------------------------------------------------------------------ Linial

def linial_schedule(space: int, D: int) -> list[tuple[int, int]]:
    """Sequence of ``(d, q)`` reduction steps from ``space`` colours.

    A colour ``x`` is read as a degree-``d`` polynomial over GF(q) (its base-q
    digits); two distinct polynomials agree on at most ``d`` points, so with
    ``q > D·d`` every vertex finds an evaluation point ``a`` where it differs
    from all neighbours, and ``(a, p(a))`` is its new colour out of ``q²``.
    Each step picks the ``(d, q)`` with the smallest ``q²`` and the schedule
    stops once no step shrinks the palette.
    """
    steps = []
    m = space
    if D < 1:
        return steps
    while True:
        best = None
        d = 1
        while True:
            root = _iroot_ceil(m, d + 1)
            q = next_prime(max(D * d + 1, root))
            while q ** (d + 1) < m:
                q = next_prime(q + 1)
            if best is None or q * q < best[1] ** 2:
                best = (d, q)
            # once the degree term dominates, a larger d only raises q
            if root <= D * d + 1 or D * (d + 1) + 1 > best[1]:
                break
            d += 1
        if best[1] ** 2 >= m:
            return steps
        steps.append(best)
        m = best[1] ** 2


def _digits(x: int, q: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        x, r = divmod(x, q)
        out.append(r)
    return out


def _poly_values(colors: list[int], d: int, q: int) -> np.ndarray:
    """Row ``i`` holds the polynomial of ``colors[i]`` evaluated at 0..q-1 (mod q)."""
    coeffs = np.array([_digits(c, q, d + 1) for c in colors], dtype=np.int64)
    a = np.arange(q, dtype=np.int64)
    vals = np.zeros((len(colors), q), dtype=np.int64)
    for j in range(d, -1, -1):  # Horner
        vals = (vals * a + coeffs[:, j : j + 1]) % q
    return vals


class LinialProgram(NodeProgram):
    name = "linial"

    def __init__(self, schedule: list[tuple[int, int]]):
        self.schedule = schedule
        self.schedule_length = len(schedule)

    def init(self, ctx):
        x = ctx.id if ctx.input is None else ctx.input
        if not ctx.neighbors:
            ctx.halt()
            return {"x": 0}
        if not self.schedule:
            ctx.halt()
            return {"x": x}
        ctx.broadcast(x)
        return {"x": x}

    def step(self, state, ctx):
        d, q = self.schedule[ctx.round - 1]
        x = state["x"]
        nbr = [ctx.inbox[u] for u in sorted(ctx.inbox)]
        vals = _poly_values([x] + nbr, d, q)
        clash = (vals[1:] == vals[0]).any(axis=0) if nbr else np.zeros(q, dtype=bool)
        a = int(np.argmin(clash))
        if clash[a]:
            raise RuntimeError(f"Linial step failed at vertex {ctx.id}: degree bound too small")
        x = a * q + int(vals[0, a])
        if ctx.round == len(self.schedule):
            ctx.halt()
        else:
            ctx.broadcast(x)
        return {"x": x}

    def output(self, state):
        return state["x"]


# ------------------------------------------------------- additive reduction

def additive_modulus(space: int, D: int) -> int:
    """Smallest prime ``q > 2D`` with ``q(q-1) >= space``."""
    q = next_prime(2 * D + 1)
    while q * (q - 1) < space:
        q = next_prime(q + 1)
    return q


class AdditiveReductionProgram(NodeProgram):
    """Locally iterative reduction from ``q(q-1)`` to ``q`` colours in ``q`` rounds.

    Colour ``c`` becomes the pair ``(a, b) = (c // q + 1, c % q)``. Every round a
    pending vertex moves to the final colour ``(0, b)`` if no neighbour
    currently shows ``b``; otherwise it steps ``b ← b + a (mod q)``. Neighbours
    with different ``a`` meet at most once per ``q`` rounds and a finished
    neighbour blocks one value of ``b``, so ``q > 2D`` guarantees every vertex
    finishes within ``q`` rounds. Pending trajectories are predictable, so a
    vertex only announces its start pair and its final colour.
    """

    name = "additive"

    def __init__(self, q: int):
        self.q = q
        self.schedule_length = q

    def init(self, ctx):
        c = ctx.input
        a, b = c // self.q + 1, c % self.q
        if a >= self.q:
            raise ValueError(f"colour {c} outside the additive palette for q={self.q}")
        ctx.broadcast(("start", a, b))
        return {"a": a, "b": b, "final": None, "nbr": {}}

    def step(self, state, ctx):
        q = self.q
        nbr = state["nbr"]
        for u, msg in ctx.inbox.items():
            if msg[0] == "start":
                nbr[u] = [msg[1], msg[2]]
            else:
                nbr[u] = [0, msg[1]]
        a, b = state["a"], state["b"]
        if all(nb != b for _, nb in nbr.values()):
            ctx.broadcast(("final", b))
            ctx.halt()
            return {**state, "final": b}
        if ctx.round >= q:
            raise RuntimeError(f"additive reduction did not settle at vertex {ctx.id}")
        for pair in nbr.values():
            if pair[0]:
                pair[1] = (pair[1] + pair[0]) % q
        state["b"] = (b + a) % q
        return state

    def output(self, state):
        return state["final"]


# ------------------------------------------------------ greedy by class

class GreedyClassProgram(NodeProgram):
    """Colour classes 1..ψ take turns; each vertex picks the least colour in
    ``1..deg+1`` not already taken by a recoloured neighbour."""

    name = "greedy-reduce"

    def __init__(self, palette: int):
        self.palette = palette
        self.schedule_length = max(palette - 1, 0)

    def _pick(self, used, ctx):
        c = 1
        while c in used:
            c += 1
        ctx.broadcast(c)
        ctx.halt()
        return c

    def init(self, ctx):
        state = {"cls": ctx.input, "used": set(), "new": None}
        if state["cls"] == 1:
            state["new"] = self._pick(state["used"], ctx)
        return state

    def step(self, state, ctx):
        state["used"].update(ctx.inbox.values())
        if state["cls"] == ctx.round + 1:
            state["new"] = self._pick(state["used"], ctx)
        return state

    def output(self, state):
        return state["new"]


# --------------------------------------------------------------- public API

def degree_bound(H: Hypergraph) -> int:
    """Underlying-degree bound Δ(r-1) computable from the global parameters."""
    return H.max_degree * max(H.rank - 1, 0)


def proper_color(
    H: Hypergraph,
    D: int | None = None,
    initial: dict[int, int] | None = None,
    space: int | None = None,
) -> Coloring:
    """Proper (deg+1)-colouring of the underlying graph via the three-stage pipeline.

    ``initial`` is an optional proper 0-based colouring with ``space`` colours
    (defaults: IDs, ``max ID + 1``).
    """
    D = degree_bound(H) if D is None else D
    if D < H.max_underlying_degree:
        raise InvalidInput(f"degree bound {D} below actual degree {H.max_underlying_degree}")
    if D == 0:
        return _from_outputs({v: 1 for v in H.vertices}, report=SimReport.idle(0, name="trivial"))
    if space is None:
        space = (max(H.vertices) + 1) if initial is None else (max(initial.values()) + 1)
    lin = run_sync(H, LinialProgram(linial_schedule(space, D)), inputs=initial)
    m = max(lin.outputs.values()) + 1
    q = additive_modulus(max(_linial_palette(space, D), m), D)
    add = run_sync(H, AdditiveReductionProgram(q), inputs=lin.outputs)
    greedy_in = {v: b + 1 for v, b in add.outputs.items()}
    red = run_sync(H, GreedyClassProgram(q), inputs=greedy_in)
    return _from_outputs(red.outputs, report=SimReport.chain([lin, add, red]))


def _linial_palette(space: int, D: int) -> int:
    sched = linial_schedule(space, D)
    return sched[-1][1] ** 2 if sched else space


def linial_color(H: Hypergraph, id_space: int | None = None) -> Coloring:
    """Proper colouring of the underlying graph with at most 16·(Δr)² colours."""
    D = degree_bound(H)
    if D == 0:
        return _from_outputs({v: 1 for v in H.vertices}, report=SimReport.idle(0, name="linial"))
    space = (max(H.vertices) + 1) if id_space is None else id_space
    rep = run_sync(H, LinialProgram(linial_schedule(space, D)))
    out = {v: x + 1 for v, x in rep.outputs.items()}
    return _from_outputs(out, report=rep)


def reduce_to_deg_plus_one(H: Hypergraph, c: Coloring) -> Coloring:
    from .verify import is_proper_coloring

    chk = is_proper_coloring(H, c)
    if not chk:
        raise InvalidInput(f"input colouring is not proper: {chk.witnesses[:3]}")
    rep = run_sync(H, GreedyClassProgram(c.palette_size), inputs=dict(c.assignment))
    return _from_outputs(rep.outputs, report=rep)


def defect_groups(H: Hypergraph, delta: int) -> Hypergraph:
    """Split every edge, in ID order, into ``delta`` consecutive balanced groups."""
    groups = []
    for e in H.edges:
        parts = min(delta, len(e))
        groups.extend(tuple(int(v) for v in g) for g in np.array_split(np.array(e), parts))
    return Hypergraph(H.vertices, groups)


def defective_color(H: Hypergraph, delta: int) -> Coloring:
    """δ-defective colouring: no colour occurs more than δ times in any edge."""
    if delta < 1 or (H.rank and delta > H.rank):
        raise InvalidInput(f"need 1 <= δ <= r, got δ={delta}, r={H.rank}")
    return _defective(H, delta)


def _defective(H: Hypergraph, delta: int) -> Coloring:
    Hp = defect_groups(H, delta)
    group = math.ceil(H.rank / delta) if H.rank else 0
    D = H.max_degree * max(group - 1, 0)
    col = proper_color(Hp, D)
    bound = H.max_degree * group + 1
    if col.palette_size > bound:
        raise AssertionError(f"defective palette {col.palette_size} exceeds Δ⌈r/δ⌉+1 = {bound}")
    col.kind, col.defect = "defective", delta
    return col


def defective_palette_bound(H: Hypergraph, delta: int) -> int:
    """Global class count Ψ = D' + 1 for the δ-defective pipeline."""
    group = math.ceil(H.rank / delta) if H.rank else 0
    return H.max_degree * max(group - 1, 0) + 1
