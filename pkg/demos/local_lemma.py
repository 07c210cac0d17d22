"""Random sampling versus Moser-Tardos resampling for (α,β)-independent sets.

Run:  python demos/local_lemma.py
"""
import math

from hypermis.algorithms import high_rank_remove, lll_feasible, moser_tardos_is, zero_round_is
from hypermis.hypergraph import GeneratorConfig, Hypergraph, complete_graph_dual, generate

# When is the local lemma guaranteed to apply?
for r, d, a, b in ((400, 1, 1, 57), (400, 1, 1, 55), (300, 2, 1, 59), (60, 3, 10, 40)):
    rep = lll_feasible(r, d, a, b)
    print(f"r={r:3d} Δ={d} α={a:2d} β={b:2d}: feasible={rep.feasible!s:5} "
          f"(β-α)²/(β+α)={rep.lhs:6.2f} vs {rep.rhs:6.2f}, e·p·(d+1)={rep.epd:.3g}")

H = generate(GeneratorConfig(n=600, r=300, max_degree=2, seed=1))
print(f"\nhypergraph: n={H.n} m={H.m} rank={H.rank}")
for seed in range(5):
    res = moser_tardos_is(H, 1, 59, seed=seed)
    print(f"  seed {seed}: |S|={len(res.vertices)} resamples={res.info['resamples']} "
          f"rounds={res.rounds} valid={res.valid}")

# With a generous gap between α and β a single coin flip per vertex is enough,
# provided every vertex has an edge: an isolated non-member can never be covered.
# Four edges, each leaving out its own window of 20 vertices, cover everything.
beta = math.ceil(18 * math.log(256)) + 18
H = Hypergraph.from_edges(256, [[v for v in range(256) if not 20 * i <= v < 20 * (i + 1)] for i in range(4)])
fails = sum(not zero_round_is(H, 1, beta, s).valid for s in range(300))
print(f"\nzero rounds, n=256 β={beta}: {fails}/300 failed")

# Deleting one random vertex per edge of a linear hypergraph keeps most of each edge.
H = complete_graph_dual(33)
sizes = [c for s in range(50) for c in high_rank_remove(H, 4, s).info["survivors_per_edge"]]
print(f"high-rank removal on r={H.rank}: mean survivors per edge {sum(sizes) / len(sizes):.2f}")
