"""Quantum Fisher information for field and temperature estimation.

Three routes are provided and cross-check each other:

* :func:`qfi_from_sld` -- the symmetric-logarithmic-derivative sum over
  eigenpairs of rho, fed with any ``d rho``;
* :func:`qfi_split` -- the classical (population) plus quantum
  (eigenvector rotation) decomposition, used by :func:`qfi_field`;
* :func:`qfi_temperature` -- energy variance over ``T**4``.

:func:`qfi_field_fd` builds ``d rho`` by central differences and exists only
as an oracle for :func:`qfi_field`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .graph import Graph
from .hamiltonian import build_hamiltonian, field_generator
from .spectral import DEFAULT_TOL_DEG, eigenvector_derivatives, eigh
from .thermal import boltzmann_populations, energy_moments, gibbs_state, population_temperature_derivative

POPULATION_CUTOFF = 1e-300
# Pairs below this population scale are dominated by rounding in
# (rho(h+d) - rho(h-d)) / 2d; their exact weight is O(cutoff).
FD_POPULATION_CUTOFF = 1e-12
DEFAULT_FD_DELTA = 1e-5

Parameter = Literal["field", "temperature"]


@dataclass(frozen=True)
class QfiBreakdown:
    classical: float
    quantum: float
    total: float
    parameter: Parameter

    @property
    def cramer_rao_bound(self) -> float:
        return cramer_rao_bound(self.total)


def cramer_rao_bound(fisher: float, repetitions: int = 1) -> float:
    """Smallest achievable estimator variance, ``1 / (m F)``."""
    if fisher <= 0:
        return float("inf")
    return 1.0 / (repetitions * fisher)


def qfi_from_sld(populations, eigenvectors, drho, cutoff: float = POPULATION_CUTOFF) -> float:
    """F = 2 sum_{n,m} |<n|d rho|m>|^2 / (p_n + p_m), skipping pairs with p_n + p_m <= cutoff."""
    p = np.asarray(populations, dtype=float)
    U = np.asarray(eigenvectors, dtype=float)
    d = U.T @ np.asarray(drho, dtype=float) @ U
    denom = p[:, None] + p[None, :]
    keep = denom > cutoff
    return float(2.0 * np.sum(d[keep] ** 2 / denom[keep]))


def qfi_split(
    populations,
    dpopulations,
    eigenvectors,
    dvectors,
    cutoff: float = POPULATION_CUTOFF,
    parameter: Parameter = "field",
) -> QfiBreakdown:
    """Classical plus quantum QFI.

    classical = sum_p (d p)^2 / p
    quantum   = 2 sum_{n != m} (p_n - p_m)^2 / (p_n + p_m) |<m|d n>|^2

    ``dvectors`` must be gauge-fixed (no component along their own vector).
    """
    p = np.asarray(populations, dtype=float)
    dp = np.asarray(dpopulations, dtype=float)
    keep = p > cutoff
    classical = float(np.sum(dp[keep] ** 2 / p[keep]))

    overlaps = np.asarray(eigenvectors, dtype=float).T @ np.asarray(dvectors, dtype=float)
    denom = p[:, None] + p[None, :]
    pairs = denom > cutoff
    np.fill_diagonal(pairs, False)
    diff = p[:, None] - p[None, :]
    quantum = float(2.0 * np.sum(diff[pairs] ** 2 / denom[pairs] * overlaps[pairs] ** 2))
    return QfiBreakdown(classical, quantum, classical + quantum, parameter)


def _traceless(H) -> np.ndarray:
    """Drop the identity component; the QFI does not depend on it and small
    level splittings then keep their full precision."""
    H = np.array(getattr(H, "matrix", H), dtype=np.float64)
    H[np.diag_indices_from(H)] -= np.trace(H) / H.shape[0]
    return H


def qfi_field_matrix(H, dH, T: float, tol_deg: float = DEFAULT_TOL_DEG) -> QfiBreakdown:
    """Field QFI of the Gibbs state of ``H`` for the perturbation direction ``dH``."""
    es = eigh(_traceless(H), tol_deg)
    der = eigenvector_derivatives(es, dH)
    ts = gibbs_state(der.eigensystem, T)
    p = ts.populations
    dE = der.denergies
    dp = p * (p @ dE - dE) / T
    return qfi_split(p, dp, der.eigensystem.eigenvectors, der.dvectors, parameter="field")


def qfi_field(g: Graph, J: float, h: float, T: float, tol_deg: float = DEFAULT_TOL_DEG) -> QfiBreakdown:
    H = build_hamiltonian(g, J, h)
    return qfi_field_matrix(H, field_generator(g.n_vertices), T, tol_deg)


def thermal_density_matrix(H, T: float) -> np.ndarray:
    """``exp(-H/T) / Z`` in the computational basis."""
    es = eigh(H)
    p, _ = boltzmann_populations(es.eigenvalues, T)
    U = es.eigenvectors
    return (U * p) @ U.T


def finite_difference_drho(g: Graph, J: float, h: float, T: float, delta: float = DEFAULT_FD_DELTA) -> np.ndarray:
    if not delta > 0:
        raise ValueError("delta must be positive")
    plus = thermal_density_matrix(build_hamiltonian(g, J, h + delta), T)
    minus = thermal_density_matrix(build_hamiltonian(g, J, h - delta), T)
    return (plus - minus) / (2.0 * delta)


def qfi_field_fd(
    g: Graph,
    J: float,
    h: float,
    T: float,
    delta: float = DEFAULT_FD_DELTA,
    cutoff: float = FD_POPULATION_CUTOFF,
) -> float:
    """Validation route: central-difference ``d rho`` fed to :func:`qfi_from_sld`."""
    drho = finite_difference_drho(g, J, h, T, delta)
    es = eigh(build_hamiltonian(g, J, h))
    p, _ = boltzmann_populations(es.eigenvalues, T)
    return qfi_from_sld(p, es.eigenvectors, drho, cutoff=cutoff)


def qfi_temperature_matrix(H, T: float, tol_deg: float = DEFAULT_TOL_DEG) -> QfiBreakdown:
    """Temperature QFI; the eigenbasis does not depend on ``T`` so the quantum term is zero.

    ``classical`` is the population-derivative sum and ``total`` the
    variance form; they agree to rounding.
    """
    ts = gibbs_state(eigh(_traceless(H), tol_deg), T)
    p = ts.populations
    dp = population_temperature_derivative(ts)
    keep = p > POPULATION_CUTOFF
    classical = float(np.sum(dp[keep] ** 2 / p[keep]))
    _, var = energy_moments(ts)
    return QfiBreakdown(classical, 0.0, var / T**4, "temperature")


def qfi_temperature(g: Graph, J: float, h: float, T: float, tol_deg: float = DEFAULT_TOL_DEG) -> QfiBreakdown:
    return qfi_temperature_matrix(build_hamiltonian(g, J, h), T, tol_deg)
