"""Dense transverse-field Ising Hamiltonians on a graph.

H = -J sum_{(i,j) in E} Z_i Z_j - h sum_i X_i

Basis index ``b`` encodes spin ``i`` in bit ``i``: bit 0 is ``s_i = +1``,
bit 1 is ``s_i = -1``.  Every matrix element is real in this basis, so
plain float64 arrays are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, classical_energies

MAX_QUBITS = 12


@dataclass(frozen=True, eq=False)
class SpinHamiltonian:
    matrix: np.ndarray = field(repr=False)
    n_qubits: int
    J: float
    h: float
    graph: Graph

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class FieldGenerator:
    """``dH/dh = -sum_i X_i``; independent of ``J``, ``h`` and the graph."""

    matrix: np.ndarray = field(repr=False)
    n_qubits: int


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _transverse_sum(n: int) -> np.ndarray:
    """``sum_i X_i``: ones at every Hamming-distance-1 pair of basis states."""
    dim = 2**n
    rows = np.arange(dim)
    out = np.zeros((dim, dim))
    for i in range(n):
        out[rows, rows ^ (1 << i)] = 1.0
    return out


def field_generator(n_qubits: int) -> FieldGenerator:
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"dense representation capped at {MAX_QUBITS} qubits")
    return FieldGenerator(_readonly(-_transverse_sum(n_qubits)), n_qubits)


def build_hamiltonian(g: Graph, J: float, h: float) -> SpinHamiltonian:
    n = g.n_vertices
    if n > MAX_QUBITS:
        raise ValueError(f"dense representation capped at {MAX_QUBITS} qubits")
    J = float(J)
    h = float(h)
    mat = -h * _transverse_sum(n) if h != 0.0 else np.zeros((2**n, 2**n))
    mat[np.diag_indices_from(mat)] = classical_energies(g, J)
    return SpinHamiltonian(_readonly(mat), n, J, h, g)
