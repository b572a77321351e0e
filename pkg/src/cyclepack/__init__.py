"""Cycle and cyclic-triangle packings in oriented graphs."""

from .graph import (
    CyclePacking,
    GraphError,
    OrientedGraph,
    PackingError,
    build_graph,
    induced_subgraph,
    is_tournament,
    min_semidegree,
    parse_og,
    read_og,
    semidegree_profile,
    write_og,
)
from .generators import InstanceSpec, extremal_thm1, generate, random_tournament, rotational_tournament
from .triangles import classify_edges, list_triangles, total_cyclic_triangles, triangles_per_vertex
from .nibble import Hypergraph, greedy_complete, run_nibble, triangle_hypergraph
from .absorbing import absorb_quadruple, find_absorbing_cycle_for_path, find_absorbing_triple, splice
from .cycles import find_cycle_of_length, hamilton_path_tournament
from .engine import (
    PackingConfig,
    PackingReport,
    PackingRequest,
    balanced_partition,
    pack_k_cycles,
    pack_long_cycles,
    pack_one_factor,
    pack_prescribed,
    pack_triangles,
)
from .oracle import count_perfect_packings, oracle_max_triangle_packing, oracle_prescribed_feasible

__version__ = "0.1.0"
