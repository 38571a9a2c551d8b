"""Constraint-based causal discovery under latent confounding and selection
bias, with a query-efficient search for separating sets that need nodes
nonadjacent to both endpoints, plus the reference algorithms to verify it."""

from .graphs import (
    ARROW, CIRCLE, TAIL,
    CausalDag, GraphError, MixedGraph, MixedGraphBuilder, ModelViolationError,
    ancestors, d_separated, latent_project, m_separated,
)
from .oracles import (
    STAGES, DsepOracle, GaussOracle, IndependenceOracle, OracleError,
    OracleStats, fisher_z_test,
)
from .sepsets import SepsetMap
from .pc import pc_adjacency_search
from .augment import augment_graph
from .dsep_search import (
    DsepLog, Hierarchy, dsep_search, find_possible_dsep_links, hie,
    minimal_dsep,
)
from .orientation import apply_fci_rules, orient_v_structures
from .reference import (
    CapExceededError, exhaustive_skeleton, fci_reference, possible_dsep,
)
from .generators import (
    CanonicalExample, ExampleValidationError, GenerationError,
    canonical_examples, has_dsep_link, random_sparse_dag,
)
from .pipelines import run_fci, run_fciplus, run_pc, run_pipeline
from .report import RunReport, compare_runs

__version__ = "0.1.0"
