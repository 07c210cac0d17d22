"""Independent sets and ruling sets in hypergraphs, simulated in the LOCAL model."""
from .hypergraph import (
    GeneratorConfig,
    Hypergraph,
    InfeasibleConfig,
    InvalidInput,
    VertexSet,
    generate,
    induced,
    underlying_graph,
)
from .localsim import NodeProgram, SimReport, locality_audit, run_sync

__version__ = "0.1.0"
