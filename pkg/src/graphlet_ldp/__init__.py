"""Edge-LDP graphlet counting."""

from .channel import (
    NoisyAdjacency,
    PrivacyBudget,
    UnbiasedAdjacency,
    debias,
    obfuscate,
    read_noisy,
    write_noisy,
)
from .estimator import Estimate, algorithm1, baseline_rr_count, estimate_from_unbiased
from .gadgets import (
    ScaleError,
    build_clique_gadget,
    build_cycle_gadget,
    build_triangle_gadget,
    clique_lemma_check,
    cycle_structure_check,
)
from .graph import EdgeListError, GeneratorSpec, Graph, build_graph, generate, read_edge_list, write_edge_list
from .kernels import BACKEND
from .patterns import GraphletPattern, automorphism_count, exact_count, parse_pattern, preset_pattern, tuple_count
from .experiment import ExperimentConfig, run_experiment

__version__ = "0.1.0"
