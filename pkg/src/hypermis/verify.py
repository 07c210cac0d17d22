"""Exact checkers for every output object, plus a brute-force oracle.

All checkers return a :class:`CheckReport` whose witnesses name the violating
vertex or edge together with the predicate it breaks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph, as_members, bfs_distances

MAX_BRUTE_FORCE_N = 20


class InstanceTooLarge(ValueError):
    pass


@dataclass
class CheckReport:
    passed: bool
    witnesses: list[dict] = field(default_factory=list)

    def __bool__(self):
        return self.passed

    @classmethod
    def from_witnesses(cls, witnesses):
        return cls(not witnesses, list(witnesses))

    def to_json(self) -> str:
        return json.dumps({"pass": self.passed, "witnesses": self.witnesses}, sort_keys=True)


def _counts(H: Hypergraph, S) -> list[int]:
    return [sum(1 for v in e if v in S) for e in H.edges]


def is_k_weak(H: Hypergraph, S, k: int) -> CheckReport:
    S = as_members(S)
    bad = [
        {"edge": eid, "predicate": f"|e∩S|={c} > k={k}"}
        for eid, c in zip(H.edge_ids, _counts(H, S))
        if c > k
    ]
    return CheckReport.from_witnesses(bad)


def is_k_weak_maximal(H: Hypergraph, S, k: int) -> CheckReport:
    S = as_members(S)
    rep = is_k_weak(H, S, k)
    counts = _counts(H, S)
    wit = list(rep.witnesses)
    for v in H.vertices:
        if v in S:
            continue
        if not any(counts[i] == k for i in H.vertex_to_edges[v]):
            wit.append({"vertex": v, "predicate": f"no incident edge with {k} members"})
    return CheckReport.from_witnesses(wit)


def is_alpha_beta(H: Hypergraph, S, alpha: int, beta: int, strict: bool = False) -> CheckReport:
    """(α,β)-independence.

    Default form: every edge has at most β members and every vertex is either
    in ``S`` or lies in an edge with at least α members. ``strict=True`` drops
    the ``v ∈ S`` escape and demands the edge condition for members as well.
    """
    S = as_members(S)
    counts = _counts(H, S)
    wit = [
        {"edge": eid, "predicate": f"|e∩S|={c} > β={beta}"}
        for eid, c in zip(H.edge_ids, counts)
        if c > beta
    ]
    for v in H.vertices:
        if v in S and not strict:
            continue
        if not any(counts[i] >= alpha for i in H.vertex_to_edges[v]):
            wit.append({"vertex": v, "predicate": f"no incident edge with >= {alpha} members"})
    return CheckReport.from_witnesses(wit)


def is_ruling_set(H: Hypergraph, S, a: int = 2, b: int = 1) -> CheckReport:
    """Members pairwise at distance >= a; every vertex within distance b of a member."""
    S = as_members(S)
    wit = []
    for u in sorted(S):
        if a > 1:
            near = bfs_distances(H, [u], limit=a - 1)
            for w in sorted(near):
                if w > u and w in S:
                    wit.append({"vertices": [u, w], "predicate": f"distance {near[w]} < a={a}"})
    covered = bfs_distances(H, S, limit=b) if S else {}
    for v in H.vertices:
        if v not in covered:
            wit.append({"vertex": v, "predicate": f"no member within distance {b}"})
    return CheckReport.from_witnesses(wit)


def _assignment(c) -> dict:
    return c.assignment if hasattr(c, "assignment") else dict(c)


def is_proper_coloring(G: Hypergraph, c) -> CheckReport:
    """No edge of the underlying graph of ``G`` is monochromatic."""
    col = _assignment(c)
    wit = [{"vertex": v, "predicate": "uncoloured"} for v in G.vertices if v not in col]
    if wit:
        return CheckReport.from_witnesses(wit)
    for u in G.vertices:
        for w in sorted(G.neighbors[u]):
            if w > u and col[u] == col[w]:
                wit.append({"vertices": [u, w], "predicate": f"both coloured {col[u]}"})
    return CheckReport.from_witnesses(wit)


def is_defective_coloring(H: Hypergraph, c, delta: int) -> CheckReport:
    """Every colour appears at most ``delta`` times in each edge."""
    col = _assignment(c)
    wit = [{"vertex": v, "predicate": "uncoloured"} for v in H.vertices if v not in col]
    if wit:
        return CheckReport.from_witnesses(wit)
    for eid, e in zip(H.edge_ids, H.edges):
        mult: dict[int, int] = {}
        for v in e:
            mult[col[v]] = mult.get(col[v], 0) + 1
        for colour, cnt in sorted(mult.items()):
            if cnt > delta:
                wit.append({"edge": eid, "predicate": f"colour {colour} appears {cnt} > δ={delta} times"})
    return CheckReport.from_witnesses(wit)


def is_maximal_matching(H: Hypergraph, M) -> CheckReport:
    """``M`` (edge IDs or member tuples) is pairwise disjoint and meets every edge."""
    chosen = []
    for m in M:
        if isinstance(m, (int, np.integer)):
            chosen.append((int(m), H.edge_by_id(int(m))))
        else:
            e = tuple(sorted(m))
            if e not in set(H.edges):
                return CheckReport(False, [{"edge": list(e), "predicate": "not an edge of H"}])
            chosen.append((H.edge_ids[H.edges.index(e)], e))
    wit = []
    owner: dict[int, int] = {}
    for eid, e in chosen:
        for v in e:
            if v in owner:
                wit.append({"edges": [owner[v], eid], "predicate": f"share vertex {v}"})
            else:
                owner[v] = eid
    for eid, e in zip(H.edge_ids, H.edges):
        if not any(v in owner for v in e):
            wit.append({"edge": eid, "predicate": "disjoint from every matched edge"})
    return CheckReport.from_witnesses(wit)


# ------------------------------------------------------------ brute force

def _masks(H: Hypergraph):
    if H.n > MAX_BRUTE_FORCE_N:
        raise InstanceTooLarge(f"brute force needs n <= {MAX_BRUTE_FORCE_N}, got {H.n}")
    pos = {v: i for i, v in enumerate(H.vertices)}
    subsets = np.arange(1 << H.n, dtype=np.uint32)
    edge_masks = [np.uint32(sum(1 << pos[v] for v in e)) for e in H.edges]
    return pos, subsets, edge_masks


def brute_force_search(H: Hypergraph, predicate: str, **params) -> list[frozenset[int]]:
    """All subsets satisfying ``predicate`` by exhaustive enumeration.

    ``predicate`` is ``"k-weak-mis"`` (param ``k``) or ``"alpha-beta"``
    (params ``alpha``, ``beta``, optional ``strict``). Evaluation is vectorised
    over all ``2^n`` bitmasks and is independent of the per-set checkers above.
    """
    pos, subsets, edge_masks = _masks(H)
    if predicate == "k-weak-mis":
        lo = hi = params["k"]
        escape = True
    elif predicate == "alpha-beta":
        lo, hi = params["alpha"], params["beta"]
        escape = not params.get("strict", False)
    else:
        raise ValueError(f"unknown predicate {predicate!r}")
    ok = np.ones(subsets.shape, dtype=bool)
    hit = {v: np.zeros(subsets.shape, dtype=bool) for v in H.vertices}
    for e, em in zip(H.edges, edge_masks):
        cnt = np.bitwise_count(subsets & em)
        ok &= cnt <= hi
        # k-weak maximality needs exactly k members; (α,β) needs at least α
        full = cnt == lo if predicate == "k-weak-mis" else cnt >= lo
        for v in e:
            hit[v] |= full
    for v, i in pos.items():
        cover = hit[v]
        if escape:
            cover = cover | ((subsets >> np.uint32(i)) & np.uint32(1)).astype(bool)
        ok &= cover
    verts = H.vertices
    out = []
    for s in np.flatnonzero(ok):
        s = int(s)
        out.append(frozenset(verts[i] for i in range(H.n) if s >> i & 1))
    return out
