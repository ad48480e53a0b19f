"""Spectral tools for max-cut surplus: eigenvalue threshold sums and their
recursions, Gaussian probes, surplus certificates, a near-clique structure
tester and the density-increment loop."""

__version__ = "0.1.0"

from .graph import (Graph, GraphError, GraphFamilySpec, ParseError, cherry_count, cluster_edit, degeneracy,
                    density, family, generate, induced_subgraph, parse_edge_list, read_edge_list,
                    triangle_count, write_edge_list)
from .spectral import (Spectrum, SpectrumError, ThresholdProfile, decompose, embedding_vectors, energy,
                       flatness_check, threshold_profile)
from .recursion import (RecursionParams, check_top_concentration, solve_recursion, verify_key_recursion,
                        verify_solver_against_spectrum, verify_surplus_recursion)
from .probe import clip, hadamard_identity_check, hadamard_span, sample_gaussian, truncation_effect_estimate
from .surplus import (cubic_certificate, degeneracy_floor, dual_upper, edwards_floor, energy_certificate,
                      maxcut_exact, maxcut_local, mixing_upper, monotonicity_check, sdp_lower)
from .structure import (bad_pair_census, classify_pairs, find_eigen_witness, partition_by_embedding,
                        structure_verdict)
from .increment import densest_neighborhood, increment_loop, increment_step, peel_high_degree, potential

__all__ = [
    "Graph",
    "GraphError",
    "GraphFamilySpec",
    "ParseError",
    "cherry_count",
    "cluster_edit",
    "degeneracy",
    "density",
    "family",
    "generate",
    "induced_subgraph",
    "parse_edge_list",
    "read_edge_list",
    "triangle_count",
    "write_edge_list",
    "Spectrum",
    "SpectrumError",
    "ThresholdProfile",
    "decompose",
    "embedding_vectors",
    "energy",
    "flatness_check",
    "threshold_profile",
    "RecursionParams",
    "check_top_concentration",
    "solve_recursion",
    "verify_key_recursion",
    "verify_solver_against_spectrum",
    "verify_surplus_recursion",
    "clip",
    "hadamard_identity_check",
    "hadamard_span",
    "sample_gaussian",
    "truncation_effect_estimate",
    "cubic_certificate",
    "degeneracy_floor",
    "dual_upper",
    "edwards_floor",
    "energy_certificate",
    "maxcut_exact",
    "maxcut_local",
    "mixing_upper",
    "monotonicity_check",
    "sdp_lower",
    "bad_pair_census",
    "classify_pairs",
    "find_eigen_witness",
    "partition_by_embedding",
    "structure_verdict",
    "densest_neighborhood",
    "increment_loop",
    "increment_step",
    "peel_high_degree",
    "potential",
]
