"""Independent reference computations used only by the tests.

Nothing here imports the package's eigensolver, Hamiltonian builder or
thermal code; each function is a separate route to a number the package
also computes.
"""

import itertools
from functools import reduce

import numpy as np

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
I2 = np.eye(2)


def site_operator(op, site, n):
    """Kronecker embedding; qubit ``site`` is bit ``site`` of the basis index (least significant = qubit 0)."""
    factors = [I2] * n
    factors[n - 1 - site] = op
    return reduce(np.kron, factors)


def tfim_kron(n, edges, J, h):
    H = np.zeros((2**n, 2**n))
    for i, j in edges:
        H -= J * site_operator(SZ, i, n) @ site_operator(SZ, j, n)
    for i in range(n):
        H -= h * site_operator(SX, i, n)
    return H


def classical_spectrum(n, edges, J):
    """Sorted classical energies by direct iteration over sign patterns."""
    energies = []
    for spins in itertools.product((1, -1), repeat=n):
        energies.append(-J * sum(spins[i] * spins[j] for i, j in edges))
    return sorted(energies)


def two_level_populations(h, T):
    b = 1.0 / T
    z = 2.0 * np.cosh(b * h)
    return np.exp(b * h) / z, np.exp(-b * h) / z


def two_level_field_qfi(h, T):
    b = 1.0 / T
    return b**2 / np.cosh(b * h) ** 2


def two_level_temperature_qfi(h, T):
    b = 1.0 / T
    return h**2 / T**4 / np.cosh(b * h) ** 2


def two_level_energy_moments(h, T):
    b = 1.0 / T
    return -h * np.tanh(b * h), h**2 / np.cosh(b * h) ** 2


def two_level_boltzmann_rate(h, T):
    b = 1.0 / T
    return -(h / T**2) / (2.0 * np.cosh(b * h) ** 2)


def lapack_gibbs(H, T):
    """Gibbs populations/eigenvectors from numpy's LAPACK eigh."""
    w, v = np.linalg.eigh(H)
    p = np.exp(-(w - w.min()) / T)
    return w, v, p / p.sum()


def ground_population(H, T):
    _, _, p = lapack_gibbs(H, T)
    return p[0]


def fd_eigenvectors(H_of, h, delta):
    """Central-difference eigenvector derivatives, columns sign-aligned to the eigenvectors at ``h``."""
    _, v0 = np.linalg.eigh(H_of(h))
    _, vp = np.linalg.eigh(H_of(h + delta))
    _, vm = np.linalg.eigh(H_of(h - delta))
    vp = vp * np.sign(np.sum(vp * v0, axis=0))
    vm = vm * np.sign(np.sum(vm * v0, axis=0))
    return (vp - vm) / (2.0 * delta)


def reduced_resolvent_bracket(H0, V, tol=1e-9):
    """(1/g) || R V P ||_F^2 with R the pseudo-inverse of (H0 - E0) off the ground space."""
    w, U = np.linalg.eigh(H0)
    ground = np.abs(w - w[0]) <= tol
    P = U[:, ground] @ U[:, ground].T
    Q = np.eye(len(w)) - P
    R = np.linalg.pinv(Q @ (H0 - w[0] * np.eye(len(w))) @ Q, rcond=1e-10)
    return float(np.sum((R @ V @ P) ** 2) / ground.sum())


def random_connected_edges(rng, n):
    """Random spanning tree plus a random subset of the remaining pairs."""
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        u = int(order[k])
        v = int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < 0.4:
            edges.add((u, v))
    return sorted(edges)
