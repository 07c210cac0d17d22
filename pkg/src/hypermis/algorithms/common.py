from __future__ import annotations

from dataclasses import dataclass, field

from ..hypergraph import InvalidInput, VertexSet
from ..localsim import NodeProgram, SimReport


class IterationBudgetExceeded(RuntimeError):
    """An algorithm with a proven iteration bound ran past it (an implementation bug)."""


@dataclass(frozen=True)
class AlgoParams:
    alpha: int = 1
    beta: int = 1
    k: int = 1
    seed: int = 0
    iteration_budget: int | None = None

    def __post_init__(self):
        if not 1 <= self.alpha <= self.beta:
            raise InvalidInput(f"need 1 <= α <= β, got α={self.alpha}, β={self.beta}")
        if self.k < 1:
            raise InvalidInput(f"need k >= 1, got {self.k}")
        if self.iteration_budget is not None and self.iteration_budget < 1:
            raise InvalidInput("iteration budget must be positive")

    @property
    def delta(self) -> int:
        return self.beta - self.alpha + 1


@dataclass
class AlgoResult:
    vertices: VertexSet
    report: SimReport
    valid: bool
    info: dict = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return self.report.rounds

    @property
    def messages(self) -> int:
        return self.report.messages


def check_alpha_beta(alpha: int, beta: int) -> None:
    if not 1 <= alpha <= beta:
        raise InvalidInput(f"need 1 <= α <= β, got α={alpha}, β={beta}")


class ClassJoinProgram(NodeProgram):
    """Colour classes take turns; a vertex joins iff every incident edge has
    fewer than ``alpha`` members so far.

    Class ``c`` decides in round ``c - 1`` (class 1 during ``init``), so a run
    occupies ``classes - 1`` rounds. Only joins are announced.
    """

    name = "class-join"

    def __init__(self, alpha: int, classes: int):
        self.alpha = alpha
        self.classes = classes
        self.schedule_length = max(classes - 1, 0)

    def init(self, ctx):
        state = {"cls": ctx.input, "in_S": False, "count": {eid: 0 for eid, _ in ctx.edges}}
        self._maybe_join(state, ctx)
        return state

    def _maybe_join(self, state, ctx):
        if state["cls"] != ctx.round + 1:
            return
        if all(c < self.alpha for c in state["count"].values()):
            state["in_S"] = True
            ctx.broadcast("join")
        ctx.halt()

    def step(self, state, ctx):
        for u in ctx.inbox:
            for eid, members in ctx.edges:
                if u in members:
                    state["count"][eid] += 1
        self._maybe_join(state, ctx)
        return state

    def output(self, state):
        return state["in_S"]
