"""Spectra, density matrices and entangled states of complex-weighted graphs."""
from ._kernels import BACKEND
from .analogies import DiffusionState, coates_determinant, diffuse, permanent, stationary_distribution
from .entanglers import (
    MatrixFunctionSpec,
    ProductRecipe,
    Step,
    bell_pair,
    bell_pair_from_recipe,
    density_from_product,
    product_fg,
    product_multi,
    separability_experiment,
    werner_from_loops,
)
from .errors import ComputeError, GraphError, ParseError, QGraphError
from .graph_dsl import parse_graph, serialize_graph
from .graph_model import (
    Edge,
    GraphKind,
    Loop,
    WeightedDigraph,
    degree,
    enumerate_simple_paths,
    has_odd_cycle,
    is_connected,
    principal_sqrt,
    underlying_components,
)
from .laplacians import (
    MatrixFlavor,
    adjacency,
    incidence,
    laplacian,
    quad_form,
    vertex_weighted_kernel_vector,
    zero_eig_path_predicate,
)
from .quantum_states import (
    DensityMatrix,
    StateKind,
    classify,
    conjugate_by_unitary,
    density_from_graph,
    ppt_separable_2q,
    ppt_verdict,
    pure_state_vector,
    purity,
    spectral_mixture,
)
from .spectra import hermitian_eigen, is_psd, kron, partial_transpose_b

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
