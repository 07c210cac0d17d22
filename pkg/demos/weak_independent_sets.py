"""Walk through the deterministic (α,β)-independent set on one random hypergraph.

Run:  python demos/weak_independent_sets.py
"""
from hypermis.algorithms import edge_partition_is, k_weak_mis_large_k
from hypermis.coloring import defective_color
from hypermis.hypergraph import GeneratorConfig, generate
from hypermis.verify import is_alpha_beta, is_defective_coloring, is_k_weak_maximal

H = generate(GeneratorConfig(n=150, r=8, max_degree=4, seed=3))
print(f"hypergraph: n={H.n} m={H.m} rank={H.rank} max degree={H.max_degree}")

# A δ-defective colouring lets a whole colour class join at once: each class
# puts at most δ new members into any edge.
for delta in (1, 2, 4):
    col = defective_color(H, delta)
    assert is_defective_coloring(H, col, delta)
    print(f"  δ={delta}: {col.palette_size} colours after {col.report.rounds} rounds "
          f"(phases {col.report.phases})")

# Wider slack between α and β means fewer classes and fewer rounds.
print("\n(α,β)-IS via defective colouring")
for alpha, beta in ((1, 1), (1, 2), (2, 5), (3, 6)):
    res = edge_partition_is(H, alpha, beta)
    ok = is_alpha_beta(H, res.vertices, alpha, beta)
    print(f"  α={alpha} β={beta}: |S|={len(res.vertices):3d} rounds={res.rounds:3d} "
          f"classes={res.info['classes']:3d} valid={bool(ok)}")

# For k close to r the saturation-phase algorithm needs only a few iterations.
print("\nk-weak MIS for large k")
for k in (7, 6, 4):
    res = k_weak_mis_large_k(H, k)
    ok = is_k_weak_maximal(H, res.vertices, k)
    print(f"  k={k}: |S|={len(res.vertices):3d} iterations={res.info['iterations']} "
          f"(budget {res.info['iteration_budget']}) rounds={res.rounds} valid={bool(ok)}")
