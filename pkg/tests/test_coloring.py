import pytest
from hypothesis import given, settings, strategies as st

from hypermis.coloring import (
    LINIAL_PALETTE_CONSTANT,
    AdditiveReductionProgram,
    Coloring,
    GreedyClassProgram,
    LinialProgram,
    additive_modulus,
    defect_groups,
    defective_color,
    is_prime,
    linial_color,
    linial_schedule,
    next_prime,
    proper_color,
    reduce_to_deg_plus_one,
)
from hypermis.hypergraph import GeneratorConfig, Hypergraph, InvalidInput, generate, relabel
from hypermis.localsim import locality_audit, run_sync
from hypermis.verify import is_defective_coloring, is_proper_coloring


def test_primes():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(24) == 29 and next_prime(29) == 29 and next_prime(0) == 2


def test_linial_schedule_shrinks_to_fixpoint():
    D = 12
    sched = linial_schedule(2**64, D)
    assert sched
    m = 2**64
    for d, q in sched:
        assert is_prime(q) and q > D * d and q ** (d + 1) >= m
        assert q * q < m
        m = q * q
    # the fixpoint is at most (next prime above 2D)^2 <= 16 D^2
    assert m <= next_prime(2 * D + 1) ** 2 <= 16 * D * D


def test_linial_edgeless():
    c = linial_color(Hypergraph.from_edges(5))
    assert set(c.assignment.values()) == {1} and c.report.rounds == 0


def test_linial_single_edge():
    c = linial_color(Hypergraph.from_edges(3, [(0, 1, 2)]))
    assert len({c[0], c[1], c[2]}) == 3


@pytest.mark.parametrize("seed", range(5))
def test_linial_random_palette(seed):
    H = generate(GeneratorConfig(n=50, r=4, max_degree=3, seed=seed))
    c = linial_color(H, id_space=2**32)
    assert is_proper_coloring(H, c)
    assert c.palette_size <= LINIAL_PALETTE_CONSTANT * (H.max_degree * H.rank) ** 2
    assert c.report.rounds == len(linial_schedule(2**32, H.max_degree * (H.rank - 1)))


def test_linial_rounds_grow_like_log_star():
    H = generate(GeneratorConfig(n=60, r=4, max_degree=3, seed=1))
    rounds = []
    for bits in (16, 32, 64, 128, 256):
        c = linial_color(H, id_space=2**bits)
        assert is_proper_coloring(H, c)
        rounds.append(c.report.rounds)
    assert rounds == sorted(rounds)
    assert all(b - a <= 1 for a, b in zip(rounds, rounds[1:]))


def test_linial_program_is_local():
    H = generate(GeneratorConfig(n=25, r=3, max_degree=2, seed=4))
    assert locality_audit(H, LinialProgram(linial_schedule(2**20, 4)))


def test_additive_reduction():
    H = generate(GeneratorConfig(n=80, r=4, max_degree=3, seed=2))
    D = H.max_underlying_degree
    q = additive_modulus(200, D)
    assert q > 2 * D and q * (q - 1) >= 200
    ids = {v: v for v in H.vertices}
    rep = run_sync(H, AdditiveReductionProgram(q), inputs=ids)
    assert rep.rounds == q
    assert all(0 <= b < q for b in rep.outputs.values())
    assert is_proper_coloring(H, rep.outputs)


def test_greedy_path_example():
    H = Hypergraph.from_edges(3, [(0, 1), (1, 2)])
    c = reduce_to_deg_plus_one(H, Coloring({0: 1, 1: 2, 2: 3}, 3))
    assert c.assignment == {0: 1, 1: 2, 2: 1} and c.palette_size == 2
    assert c.report.rounds == 2


def test_greedy_edgeless_and_clique():
    c = reduce_to_deg_plus_one(Hypergraph.from_edges(3), Coloring({0: 1, 1: 2, 2: 3}, 3))
    assert c.palette_size == 1
    K4 = Hypergraph.from_edges(4, [(0, 1, 2, 3)])
    c = reduce_to_deg_plus_one(K4, Coloring({0: 4, 1: 3, 2: 2, 3: 1}, 4))
    assert c.palette_size == 4 and len(set(c.assignment.values())) == 4


def test_greedy_rejects_improper_input():
    H = Hypergraph.from_edges(2, [(0, 1)])
    with pytest.raises(InvalidInput):
        reduce_to_deg_plus_one(H, Coloring({0: 1, 1: 1}, 1))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), r=st.integers(2, 6), d=st.integers(1, 4))
def test_proper_color_deg_plus_one(seed, r, d):
    H = generate(GeneratorConfig(n=40, r=r, max_degree=d, uniform=False, seed=seed))
    c = proper_color(H)
    assert is_proper_coloring(H, c)
    for v in H.vertices:
        assert c[v] <= len(H.neighbors[v]) + 1


def test_proper_color_from_sparse_ids():
    H, _ = relabel(generate(GeneratorConfig(n=40, r=4, max_degree=3, seed=8)))
    H2 = Hypergraph([v * 1_000_003 for v in H.vertices], [[v * 1_000_003 for v in e] for e in H.edges])
    c = proper_color(H2)
    assert is_proper_coloring(H2, c)
    assert c.report.phases[0][1] > 0  # Linial had work to do


def test_defective_groups_balanced():
    H = Hypergraph.from_edges(7, [(0, 1, 2, 3, 4, 5, 6)])
    assert defect_groups(H, 3).edges == ((0, 1, 2), (3, 4), (5, 6))
    assert defect_groups(H, 7).edges == tuple((v,) for v in range(7))


def test_defective_examples():
    e = Hypergraph([1, 2, 3, 4], [(1, 2, 3, 4)])
    c = defective_color(e, 2)
    assert defect_groups(e, 2).edges == ((1, 2), (3, 4))
    assert is_defective_coloring(e, c, 2)
    assert c.assignment == {1: 1, 2: 2, 3: 1, 4: 2}
    assert defective_color(e, 4).palette_size == 1
    c1 = defective_color(e, 1)
    assert is_proper_coloring(e, c1)


@pytest.mark.parametrize("delta", [0, 5])
def test_defective_out_of_range(delta):
    with pytest.raises(InvalidInput):
        defective_color(Hypergraph.from_edges(4, [(0, 1, 2, 3)]), delta)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), r=st.integers(2, 8), d=st.integers(1, 4), data=st.data())
def test_defective_property(seed, r, d, data):
    H = generate(GeneratorConfig(n=40, r=r, max_degree=d, uniform=data.draw(st.booleans()), seed=seed))
    delta = data.draw(st.integers(1, H.rank or 1))
    c = defective_color(H, delta)
    assert is_defective_coloring(H, c, delta)
    assert c.palette_size <= H.max_degree * -(-H.rank // delta) + 1


def test_coloring_json_round_trip():
    c = Coloring({0: 1, 3: 2}, 2, "defective", 2)
    back = Coloring.from_json(c.to_json())
    assert back.assignment == c.assignment and back.defect == 2 and back.kind == "defective"


def test_greedy_program_rounds():
    H = Hypergraph.from_edges(3, [(0, 1), (1, 2)])
    rep = run_sync(H, GreedyClassProgram(5), inputs={0: 5, 1: 4, 2: 1})
    assert rep.rounds == 4
    assert is_proper_coloring(H, rep.outputs)
