"""Spectral deformation under the transverse field and perturbative field QFI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .hamiltonian import build_hamiltonian, field_generator
from .spectral import DEFAULT_TOL_DEG, EigenSystem, eigh

DEFAULT_N_LEVELS = 6


@dataclass(frozen=True)
class DeformationReport:
    graph: str
    J: float
    h: float
    n_levels: int
    D_n: float
    ground_degeneracy: int
    excited_gap_shift: float


def deformation_measure(e_field, e_zero, n_levels: int) -> float:
    """Root-sum-square shift of the ``n_levels`` lowest levels, paired by ascending index."""
    a = np.sort(np.asarray(e_field, dtype=float))[:n_levels]
    b = np.sort(np.asarray(e_zero, dtype=float))[:n_levels]
    return float(np.sqrt(np.sum((a - b) ** 2)))


def spectral_deformation(
    g: Graph, J: float, h: float, n_levels: int = DEFAULT_N_LEVELS, tol_deg: float = DEFAULT_TOL_DEG
) -> DeformationReport:
    dim = 2**g.n_vertices
    if not 1 <= n_levels <= dim:
        raise ValueError(f"n_levels must lie in [1, {dim}], got {n_levels}")
    zero = eigh(build_hamiltonian(g, J, 0.0), tol_deg)
    e_zero = zero.eigenvalues
    e_field = e_zero if h == 0 else eigh(build_hamiltonian(g, J, h), tol_deg).eigenvalues
    shift = float(e_field[1] - e_zero[0])
    return DeformationReport(
        graph=g.name,
        J=float(J),
        h=float(h),
        n_levels=n_levels,
        D_n=deformation_measure(e_field, e_zero, n_levels),
        ground_degeneracy=zero.ground_degeneracy,
        excited_gap_shift=shift,
    )


def _in_eigenbasis(es: EigenSystem, V) -> np.ndarray:
    U = es.eigenvectors
    return U.T @ np.asarray(getattr(V, "matrix", V), dtype=float) @ U


def ground_coupling_strength(es: EigenSystem, V) -> float:
    """(1/g) sum_{j in ground} sum_{k outside} |V_kj / (E_k - E_0)|^2.

    Independent of the basis chosen inside the ground block.
    """
    Vm = _in_eigenbasis(es, V)
    start, stop = es.blocks[0]
    E = es.eigenvalues
    outside = np.r_[0:start, stop : es.dim]
    if outside.size == 0:
        return 0.0
    block = Vm[np.ix_(outside, np.arange(start, stop))]
    gaps = (E[outside] - E[start])[:, None]
    return float(np.sum((block / gaps) ** 2) / (stop - start))


def mixed_coupling_strength(es: EigenSystem, V) -> float:
    """(1/g) sum_{i<j} |V_ij|^2 / (E_i - E_j)^2 over pairs in different degenerate blocks."""
    Vm = _in_eigenbasis(es, V)
    E = es.eigenvalues
    labels = es.block_labels()
    i, j = np.triu_indices(es.dim, k=1)
    cross = labels[i] != labels[j]
    i, j = i[cross], j[cross]
    return float(np.sum(Vm[i, j] ** 2 / (E[i] - E[j]) ** 2) / es.ground_degeneracy)


def _zero_field(g: Graph, J: float, tol_deg: float) -> EigenSystem:
    return eigh(build_hamiltonian(g, J, 0.0), tol_deg)


def perturbative_qfi_pure(g: Graph, J: float, h: float, tol_deg: float = DEFAULT_TOL_DEG) -> float:
    """Leading-order field QFI of the uniform superposition over the zero-field ground space."""
    es = _zero_field(g, J, tol_deg)
    return 4.0 * h * h * ground_coupling_strength(es, field_generator(g.n_vertices))


def perturbative_qfi_mixed(g: Graph, J: float, h: float, tol_deg: float = DEFAULT_TOL_DEG) -> float:
    """Leading-order field QFI for the maximally mixed ground-space state.

    Pairs sharing a degenerate block would divide by zero and are left out.
    """
    es = _zero_field(g, J, tol_deg)
    return 4.0 * h * h * mixed_coupling_strength(es, field_generator(g.n_vertices))
