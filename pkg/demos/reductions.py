"""Ruling sets, graph lifts and maximal matchings built from weak MIS.

Run:  python demos/reductions.py
"""
from hypermis.algorithms import edge_partition_is, extract_maximal_matching, find_ruling_set
from hypermis.hypergraph import (
    GeneratorConfig,
    Hypergraph,
    generate,
    lift_graph_even_rank,
    lift_graph_k_copies,
    project_even_rank_mis,
    project_k_weak_majority,
)
from hypermis.verify import is_k_weak_maximal, is_maximal_matching, is_ruling_set

H = generate(GeneratorConfig(n=200, r=12, max_degree=3, uniform=False, seed=5))
print(f"hypergraph: n={H.n} m={H.m} rank={H.rank} max degree={H.max_degree}")
for k in (1, 2, 3):
    res = find_ruling_set(H, k)
    levels = [(lv["rank"], lv["survivors"]) for lv in res.info["levels"]]
    print(f"  (2,{k})-ruling set: |S|={len(res.vertices)} rounds={res.rounds} "
          f"rank/survivors per level={levels} valid={bool(is_ruling_set(H, res.vertices, 2, k))}")

# A weak MIS on a lifted graph gives an MIS of the graph itself.
G = Hypergraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
lift = lift_graph_even_rank(G, 4)
S = edge_partition_is(lift.hypergraph, 1, 1).vertices
print(f"\nhexagon with a chord, rank-4 lift: lifted set {sorted(S.members)} "
      f"-> MIS {sorted(project_even_rank_mis(G, lift, S).members)}")
lift = lift_graph_k_copies(G, 3)
S = edge_partition_is(lift.hypergraph, 3, 3).vertices
mis = project_k_weak_majority(G, lift, S, 3)
print(f"three copies, 3-weak MIS of size {len(S)} -> majority MIS {sorted(mis.members)} "
      f"valid={bool(is_k_weak_maximal(G, mis, 1))}")

res = extract_maximal_matching(H)
print(f"\nmaximal matching: {len(res.edges)} edges, {res.info['iterations']} MIS calls "
      f"(max degree {H.max_degree}), rounds={res.rounds} valid={bool(is_maximal_matching(H, res.edges))}")
