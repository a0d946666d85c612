"""Thermal quantum Fisher information of graph-shaped transverse-field Ising sensors."""

__version__ = "0.1.0"

from .graph import Graph, catalog, catalog_graph, graph_properties, make_graph  # noqa: E402
from .hamiltonian import build_hamiltonian, field_generator  # noqa: E402
from .spectral import degeneracy_blocks, eigenvector_derivatives, eigh  # noqa: E402
from .thermal import boltzmann_rate, energy_moments, gibbs_state  # noqa: E402
from .qfi import qfi_field, qfi_field_fd, qfi_temperature  # noqa: E402
from .deformation import perturbative_qfi_mixed, perturbative_qfi_pure, spectral_deformation  # noqa: E402

__all__ = [
    "Graph",
    "boltzmann_rate",
    "build_hamiltonian",
    "catalog",
    "catalog_graph",
    "degeneracy_blocks",
    "eigenvector_derivatives",
    "eigh",
    "energy_moments",
    "field_generator",
    "gibbs_state",
    "graph_properties",
    "make_graph",
    "perturbative_qfi_mixed",
    "perturbative_qfi_pure",
    "qfi_field",
    "qfi_field_fd",
    "qfi_temperature",
    "spectral_deformation",
]
