import pytest

from hypermis.hypergraph import Hypergraph, generate, GeneratorConfig
from hypermis.localsim import (
    NodeProgram,
    RoundBudgetExhausted,
    SimReport,
    edge_rng,
    locality_audit,
    run_sync,
    vertex_rng,
)


class EchoId(NodeProgram):
    schedule_length = 0

    def init(self, ctx):
        ctx.halt()
        return ctx.id


class Token(NodeProgram):
    """Vertex 0 starts a token; every vertex passes it to its larger neighbour."""

    def init(self, ctx):
        state = {"got": ctx.id == 0}
        if ctx.id == 0:
            self._pass(ctx)
        return state

    def _pass(self, ctx):
        nxt = [u for u in ctx.neighbors if u > ctx.id]
        if nxt:
            ctx.send(min(nxt), "tok")
        ctx.halt()

    def step(self, state, ctx):
        if ctx.inbox:
            state["got"] = True
            self._pass(ctx)
        return state

    def output(self, state):
        return state["got"]


class Forever(NodeProgram):
    def init(self, ctx):
        return None


class Probe(NodeProgram):
    """Sends its round number each round and checks nothing from this round arrives early."""

    def __init__(self):
        self.sends = 0

    def init(self, ctx):
        ctx.broadcast(0)
        self.sends += len(ctx.neighbors)
        return []

    def step(self, state, ctx):
        for msg in ctx.inbox.values():
            assert msg == ctx.round - 1
        state.append(sorted(ctx.inbox.values()))
        if ctx.round == 3:
            ctx.halt()
        else:
            ctx.broadcast(ctx.round)
            self.sends += len(ctx.neighbors)
        return state


class Cheater(NodeProgram):
    """Reads a registry shared by all vertices: the maximum ID anywhere."""

    def __init__(self):
        self.registry = []
        self.schedule_length = 1

    def init(self, ctx):
        self.registry.append(ctx.id)
        return None

    def step(self, state, ctx):
        ctx.halt()
        return max(self.registry)


class LocalMax(NodeProgram):
    schedule_length = 1

    def init(self, ctx):
        ctx.broadcast(ctx.id)
        return ctx.id

    def step(self, state, ctx):
        ctx.halt()
        return max([state, *ctx.inbox.values()])


def path(n):
    return Hypergraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_zero_round_program():
    H = path(4)
    rep = run_sync(H, EchoId())
    assert rep.rounds == 0 and rep.outputs == {v: v for v in range(4)}
    assert rep.messages_per_round == []


def test_token_along_path():
    for L in (1, 3, 6):
        rep = run_sync(path(L + 1), Token())
        assert rep.rounds == L
        assert all(rep.outputs.values())
        assert rep.messages == L


def test_budget_exhausted():
    with pytest.raises(RoundBudgetExhausted) as info:
        run_sync(path(3), Forever(), max_rounds=0)
    assert info.value.running == [0, 1, 2]
    with pytest.raises(ValueError):
        run_sync(path(3), Forever(), max_rounds=-1)


def test_synchrony_and_message_accounting():
    H = generate(GeneratorConfig(n=20, r=3, max_degree=2, seed=5))
    prog = Probe()
    rep = run_sync(H, prog)
    assert rep.rounds == 3
    assert rep.messages == prog.sends
    assert len(rep.messages_per_round) == rep.rounds


def test_send_to_non_neighbour_rejected():
    class Bad(NodeProgram):
        def init(self, ctx):
            ctx.send(99, "x")

    with pytest.raises(ValueError):
        run_sync(path(3), Bad())


def test_schedule_padding_counts_idle_rounds():
    class Quick(NodeProgram):
        schedule_length = 5

        def init(self, ctx):
            ctx.halt()
            return 0

    rep = run_sync(path(2), Quick(), trace=True)
    assert rep.rounds == 5 and rep.messages_per_round == [0] * 5
    assert [r["round"] for r in rep.trace] == list(range(6))


def test_determinism_including_trace():
    H = generate(GeneratorConfig(n=30, r=4, max_degree=3, seed=1))

    class Coin(NodeProgram):
        schedule_length = 1

        def init(self, ctx):
            x = int(ctx.rng.integers(1000))
            ctx.broadcast(x)
            return x

        def step(self, state, ctx):
            ctx.halt()
            return state + sum(ctx.inbox.values())

    a = run_sync(H, Coin(), seed=9, trace=True)
    b = run_sync(H, Coin(), seed=9, trace=True)
    assert a == b and a.trace_jsonl() == b.trace_jsonl()
    assert run_sync(H, Coin(), seed=10).outputs != a.outputs


def test_rng_streams_are_independent_of_order():
    assert vertex_rng(3, 7).random() == vertex_rng(3, 7).random()
    assert vertex_rng(3, 7).random() != edge_rng(3, 7).random()


def test_edge_rng_only_for_members():
    class Grab(NodeProgram):
        def init(self, ctx):
            ctx.edge_rng(1)

    H = Hypergraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(PermissionError):
        run_sync(H, Grab())


def test_locality_audit():
    H = path(6)
    assert locality_audit(H, LocalMax())
    assert not locality_audit(H, Cheater())
    assert locality_audit(Hypergraph.from_edges(0), LocalMax())


def test_trace_jsonl_fields():
    rep = run_sync(path(3), Token(), trace=True)
    lines = rep.trace_jsonl().splitlines()
    assert len(lines) == rep.rounds + 1
    assert lines[0] == '{"halted_count": 1, "messages": 0, "round": 0}'


def test_chain_offsets_rounds():
    a = run_sync(path(3), Token(), trace=True)
    b = run_sync(path(3), Token(), trace=True)
    c = SimReport.chain([a, SimReport.idle(2), b])
    assert c.rounds == a.rounds + 2 + b.rounds
    assert c.messages == a.messages + b.messages
    assert [p for p, _ in c.phases] == ["program", "idle", "program"]
