"""Immutable hypergraphs, derived structures, generators and serialization.

Vertices are identified by their integer IDs. Hypergraphs built with
:meth:`Hypergraph.from_edges` use IDs ``0..n-1``; :func:`induced` keeps the
IDs (and edge identities) of the parent hypergraph.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple

import numpy as np


class InfeasibleConfig(ValueError):
    """The generator could not honour its configuration."""


class InvalidInput(ValueError):
    """An argument violates an operation's precondition."""


class Hypergraph:
    """A finite hypergraph with labelled vertices and labelled edges.

    Each edge is stored as a sorted tuple of distinct vertex IDs. Edge labels
    (``edge_ids``) survive :func:`induced` so an edge keeps its identity when
    it shrinks; several edges may therefore hold the same member tuple.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Iterable[Iterable[int]] = (),
        edge_ids: Iterable[int] | None = None,
    ):
        vs = tuple(sorted(int(v) for v in vertices))
        if len(set(vs)) != len(vs):
            raise InvalidInput("vertex IDs must be unique")
        vset = set(vs)
        es = []
        for e in edges:
            members = tuple(sorted(int(v) for v in e))
            if not members:
                raise InvalidInput("edges must contain at least one vertex")
            if len(set(members)) != len(members):
                raise InvalidInput(f"edge {members} repeats a vertex")
            if not vset.issuperset(members):
                raise InvalidInput(f"edge {members} uses unknown vertices")
            es.append(members)
        if edge_ids is None:
            eids = tuple(range(len(es)))
        else:
            eids = tuple(int(i) for i in edge_ids)
            if len(eids) != len(es) or len(set(eids)) != len(eids):
                raise InvalidInput("edge_ids must be unique, one per edge")
        self.vertices = vs
        self.edges = tuple(es)
        self.edge_ids = eids

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]] = ()) -> "Hypergraph":
        return cls(range(n), edges)

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m}, r={self.rank}, Δ={self.max_degree})"

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.vertices, self.edges, self.edge_ids) == (
            other.vertices,
            other.edges,
            other.edge_ids,
        )

    def __hash__(self):
        return hash((self.vertices, self.edges, self.edge_ids))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def rank(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    @cached_property
    def vertex_to_edges(self) -> dict[int, tuple[int, ...]]:
        """Map each vertex to the positions (in ``edges``) of its incident edges."""
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return {v: tuple(ix) for v, ix in inc.items()}

    @cached_property
    def max_degree(self) -> int:
        return max((len(ix) for ix in self.vertex_to_edges.values()), default=0)

    def degree(self, v: int) -> int:
        return len(self.vertex_to_edges[v])

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        """Neighbourhoods in the underlying graph."""
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            for v in e:
                nb[v].update(e)
        for v, s in nb.items():
            s.discard(v)
        return {v: frozenset(s) for v, s in nb.items()}

    @cached_property
    def max_underlying_degree(self) -> int:
        return max((len(s) for s in self.neighbors.values()), default=0)

    @property
    def is_uniform(self) -> bool:
        return all(len(e) == self.rank for e in self.edges)

    def incident(self, v: int) -> list[tuple[int, tuple[int, ...]]]:
        """``(edge_id, members)`` for every edge containing ``v``."""
        return [(self.edge_ids[i], self.edges[i]) for i in self.vertex_to_edges[v]]

    def edge_by_id(self, eid: int) -> tuple[int, ...]:
        return self.edges[self._edge_pos[eid]]

    @cached_property
    def _edge_pos(self) -> dict[int, int]:
        return {eid: i for i, eid in enumerate(self.edge_ids)}

    def max_pair_intersection(self) -> int:
        """Largest ``|e ∩ f|`` over pairs of distinct edges (0 if fewer than two)."""
        best = 0
        sets = [set(e) for e in self.edges]
        for v, ix in self.vertex_to_edges.items():
            for a, b in combinations(ix, 2):
                best = max(best, len(sets[a] & sets[b]))
        return best


@dataclass(frozen=True)
class VertexSet:
    """A candidate independent set (or ruling set) produced by some algorithm."""

    members: frozenset[int]
    origin: str = ""

    @classmethod
    def of(cls, H: Hypergraph, members: Iterable[int], origin: str = "") -> "VertexSet":
        ms = frozenset(int(v) for v in members)
        extra = ms.difference(H.vertices)
        if extra:
            raise InvalidInput(f"vertices {sorted(extra)} are not in the hypergraph")
        return cls(ms, origin)

    def __contains__(self, v):
        return v in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def bitmap(self, H: Hypergraph) -> np.ndarray:
        return np.array([v in self.members for v in H.vertices], dtype=bool)


def as_members(S) -> frozenset[int]:
    if isinstance(S, VertexSet):
        return S.members
    return frozenset(int(v) for v in S)


# ---------------------------------------------------------------- derived

def underlying_graph(H: Hypergraph) -> Hypergraph:
    pairs = set()
    for e in H.edges:
        pairs.update(combinations(e, 2))
    return Hypergraph(H.vertices, sorted(pairs))


def induced(H: Hypergraph, S) -> Hypergraph:
    """Sub-hypergraph on ``S``; each edge is cut down to ``e ∩ S`` and keeps its label.

    Edges that lose every vertex disappear. Edges that become equal are kept
    separately.
    """
    keep = as_members(S)
    extra = keep.difference(H.vertices)
    if extra:
        raise InvalidInput(f"vertices {sorted(extra)} are not in the hypergraph")
    edges, eids = [], []
    for eid, e in zip(H.edge_ids, H.edges):
        cut = [v for v in e if v in keep]
        if cut:
            edges.append(cut)
            eids.append(eid)
    return Hypergraph(keep, edges, eids)


def bfs_distances(H: Hypergraph, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
    """Multi-source BFS over the underlying graph. Unreached vertices are absent."""
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    nb = H.neighbors
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in nb[u]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def distance(H: Hypergraph, u: int, v: int) -> int | None:
    """Number of edges on a shortest path from ``u`` to ``v``; ``None`` if unreachable."""
    for x in (u, v):
        if x not in H.neighbors:
            raise InvalidInput(f"vertex {x} is not in the hypergraph")
    return bfs_distances(H, [u]).get(v)


# -------------------------------------------------------------- generation

@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    r: int
    max_degree: int
    uniform: bool = True
    lam: int | None = None  # cap on |e ∩ f| for distinct edges
    seed: int = 0
    edges: int | None = None  # target edge count; None fills up to ⌊nΔ/r⌋

    def __post_init__(self):
        if self.r < 1 or self.max_degree < 1:
            raise InvalidInput("need r >= 1 and max_degree >= 1")
        if self.lam is not None and self.lam < 1:
            raise InvalidInput("lambda must be >= 1")


ATTEMPTS_PER_EDGE = 1000


def generate(cfg: GeneratorConfig) -> Hypergraph:
    """Random hypergraph by rejection sampling.

    Candidate edges are drawn from the vertices that still have spare degree and
    rejected when they duplicate an edge or break the ``lam`` cap. At most
    ``1000 * target`` candidates are drawn. If ``cfg.edges`` was requested
    explicitly, falling short raises :class:`InfeasibleConfig`; otherwise the
    hypergraph built so far is returned.
    """
    if cfg.r > cfg.n:
        raise InfeasibleConfig(f"rank {cfg.r} exceeds vertex count {cfg.n}")
    rng = np.random.default_rng(cfg.seed)
    target = cfg.edges if cfg.edges is not None else (cfg.n * cfg.max_degree) // cfg.r
    if cfg.edges is not None and cfg.edges * cfg.r > cfg.n * cfg.max_degree and cfg.uniform:
        raise InfeasibleConfig("requested edges exceed the degree budget n·Δ/r")
    spare = np.full(cfg.n, cfg.max_degree, dtype=np.int64)
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    member_sets: list[set[int]] = []
    incident: list[list[int]] = [[] for _ in range(cfg.n)]
    attempts = 0
    budget = ATTEMPTS_PER_EDGE * max(target, 1)
    while len(edges) < target and attempts < budget:
        attempts += 1
        if cfg.uniform or not edges:
            size = cfg.r
        else:
            size = int(rng.integers(min(2, cfg.r), cfg.r + 1))
        avail = np.flatnonzero(spare > 0)
        if len(avail) < size:
            break
        cand = tuple(sorted(int(v) for v in rng.choice(avail, size=size, replace=False)))
        if cand in seen:
            continue
        if cfg.lam is not None:
            cs = set(cand)
            others = {j for v in cand for j in incident[v]}
            if any(len(cs & member_sets[j]) > cfg.lam for j in others):
                continue
        idx = len(edges)
        edges.append(cand)
        seen.add(cand)
        member_sets.append(set(cand))
        for v in cand:
            spare[v] -= 1
            incident[v].append(idx)
    if cfg.edges is not None and len(edges) < cfg.edges:
        raise InfeasibleConfig(
            f"built {len(edges)} of {cfg.edges} edges within {budget} attempts"
        )
    return Hypergraph.from_edges(cfg.n, edges)


def complete_graph_dual(m: int) -> Hypergraph:
    """Linear (m-1)-uniform hypergraph with Δ = 2.

    Vertices are the pairs ``{i, j}`` of an m-clique, and edge ``i`` holds every
    pair containing ``i``. Any two edges share exactly one vertex.
    """
    pairs = list(combinations(range(m), 2))
    index = {p: t for t, p in enumerate(pairs)}
    edges = [[index[tuple(sorted((i, j)))] for j in range(m) if j != i] for i in range(m)]
    return Hypergraph.from_edges(len(pairs), edges)


# ---------------------------------------------------------- serialization

def to_text(H: Hypergraph) -> str:
    """Header ``n r Δ`` then one edge per line. Needs IDs 0..n-1 and edge IDs 0..m-1."""
    if H.vertices != tuple(range(H.n)) or H.edge_ids != tuple(range(H.m)):
        raise InvalidInput("text format needs vertex IDs 0..n-1 and edge IDs 0..m-1; use JSON")
    lines = [f"{H.n} {H.rank} {H.max_degree}"]
    lines += [" ".join(map(str, e)) for e in H.edges]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidInput("empty hypergraph file")
    try:
        n, r, delta = (int(t) for t in lines[0].split())
        edges = [[int(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise InvalidInput(f"malformed hypergraph text: {exc}") from None
    H = Hypergraph.from_edges(n, edges)
    if (H.rank, H.max_degree) != (r, delta):
        raise InvalidInput(
            f"header says r={r}, Δ={delta} but edges give r={H.rank}, Δ={H.max_degree}"
        )
    return H


def to_json(H: Hypergraph) -> str:
    return json.dumps(
        {
            "n": H.n,
            "r": H.rank,
            "max_degree": H.max_degree,
            "vertices": list(H.vertices),
            "edges": [list(e) for e in H.edges],
            "edge_ids": list(H.edge_ids),
        },
        sort_keys=True,
    )


def from_json(text: str) -> Hypergraph:
    try:
        obj = json.loads(text)
        vertices = obj.get("vertices", range(obj["n"]))
        H = Hypergraph(vertices, obj["edges"], obj.get("edge_ids"))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"malformed hypergraph JSON: {exc}") from None
    return H


def load(path) -> Hypergraph:
    with open(path) as fh:
        text = fh.read()
    return from_json(text) if text.lstrip().startswith("{") else from_text(text)


def save(H: Hypergraph, path) -> None:
    path = str(path)
    text = to_json(H) + "\n" if path.endswith(".json") else to_text(H)
    with open(path, "w") as fh:
        fh.write(text)


def relabel(H: Hypergraph) -> tuple[Hypergraph, dict[int, int]]:
    """Copy of ``H`` with IDs 0..n-1 (ordered as before); returns the new→old map."""
    old = H.vertices
    new_of = {v: i for i, v in enumerate(old)}
    G = Hypergraph(range(len(old)), [[new_of[v] for v in e] for e in H.edges])
    return G, dict(enumerate(old))


# ------------------------------------------------------------------ lifts

class Lift(NamedTuple):
    hypergraph: Hypergraph
    projection: dict[int, int]  # lifted vertex -> original vertex
    copies: int


def _lift(G: Hypergraph, copies: int) -> Lift:
    if any(len(e) != 2 for e in G.edges):
        raise InvalidInput("lifts need a graph: every edge must have exactly 2 vertices")
    proj = {v * copies + i: v for v in G.vertices for i in range(copies)}
    edges = [[u * copies + i for u in e for i in range(copies)] for e in G.edges]
    return Lift(Hypergraph(proj, edges, G.edge_ids), proj, copies)


def lift_graph_even_rank(G: Hypergraph, r: int) -> Lift:
    """Replace each vertex by r/2 copies; each graph edge becomes one r-edge on both copy sets.

    Copy ``i`` of vertex ``v`` gets ID ``v * (r // 2) + i``.
    """
    if r < 2 or r % 2:
        raise InvalidInput(f"rank must be even and >= 2, got {r}")
    return _lift(G, r // 2)


def lift_graph_k_copies(G: Hypergraph, k: int) -> Lift:
    """Replace each vertex by k copies (k odd); each graph edge becomes a 2k-edge."""
    if k < 1 or k % 2 == 0:
        raise InvalidInput(f"k must be odd and >= 1, got {k}")
    return _lift(G, k)


def _copy_counts(lift: Lift, S) -> dict[int, int]:
    counts = {v: 0 for v in set(lift.projection.values())}
    for u in as_members(S):
        counts[lift.projection[u]] += 1
    return counts


def project_even_rank_mis(G: Hypergraph, lift: Lift, S_lifted) -> VertexSet:
    """Vertices of G with at least one copy in a 1-weak MIS of the lift."""
    from .verify import is_k_weak_maximal

    chk = is_k_weak_maximal(lift.hypergraph, S_lifted, 1)
    if not chk:
        raise InvalidInput(f"not a 1-weak MIS of the lift: {chk.witnesses[:3]}")
    S = VertexSet.of(G, [v for v, c in _copy_counts(lift, S_lifted).items() if c > 0], "even-rank-projection")
    assert is_k_weak_maximal(G, S, 1), "projection is not an MIS of G"
    return S


def project_k_weak_majority(G: Hypergraph, lift: Lift, S_lifted, k: int) -> VertexSet:
    """Vertices of G with more than k/2 copies in a k-weak MIS of the k-copy lift."""
    from .verify import is_k_weak_maximal

    chk = is_k_weak_maximal(lift.hypergraph, S_lifted, k)
    if not chk:
        raise InvalidInput(f"not a {k}-weak MIS of the lift: {chk.witnesses[:3]}")
    S = VertexSet.of(G, [v for v, c in _copy_counts(lift, S_lifted).items() if 2 * c > k], "majority-projection")
    assert is_k_weak_maximal(G, S, 1), "projection is not an MIS of G"
    return S
