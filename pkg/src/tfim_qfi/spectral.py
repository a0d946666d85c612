"""Exact symmetric eigendecomposition and first-order eigenvector derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

DEFAULT_TOL_DEG = 1e-9
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
_SIGN_EPS = 1e-10


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns.

    ``blocks`` lists half-open ``(start, stop)`` index ranges of maximal
    degenerate runs.
    """

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    blocks: tuple[tuple[int, int], ...]
    tol_deg: float = DEFAULT_TOL_DEG

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def ground_degeneracy(self) -> int:
        start, stop = self.blocks[0]
        return stop - start

    def block_labels(self) -> np.ndarray:
        """Block number of every eigen-index."""
        labels = np.empty(self.dim, dtype=np.int64)
        for k, (start, stop) in enumerate(self.blocks):
            labels[start:stop] = k
        return labels


@dataclass(frozen=True, eq=False)
class EigenDerivatives:
    """Gauge-fixed derivative data for a perturbation ``dH``.

    ``eigensystem`` carries the eigenvectors rotated inside each degenerate
    block so that ``dH`` is diagonal there; ``dvectors[:, n]`` is the
    derivative of column ``n`` of those rotated vectors and ``denergies[n]``
    the first-order energy slope.
    """

    eigensystem: EigenSystem
    dvectors: np.ndarray = field(repr=False)
    denergies: np.ndarray = field(repr=False)


@njit(cache=True)
def _jacobi_kernel(a, rel_tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    scale = np.sqrt(np.sum(a * a))
    threshold = rel_tol * scale
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        off = np.sqrt(off)
        if off <= threshold:
            return np.diag(a).copy(), v, sweep, off, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if np.abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                # Rutishauser's form: diagonal updates by t * a_pq keep the
                # small eigenvalue splittings accurate
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp - s * (akq + tau * akp)
                    a[k, q] = akq + s * (akp - tau * akq)
                    a[p, k] = a[k, p]
                    a[q, k] = a[k, q]
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp - s * (vkq + tau * vkp)
                    v[k, q] = vkq + s * (vkp - tau * vkq)
    return np.diag(a).copy(), v, max_sweeps, off, False


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Make the first clearly nonzero entry of every column positive."""
    big = np.abs(vecs) > _SIGN_EPS
    first = np.argmax(big, axis=0)
    signs = np.sign(vecs[first, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def jacobi_eigh(a: np.ndarray, rel_tol: float = JACOBI_REL_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns ascending eigenvalues and sign-normalized eigenvectors.  Raises
    :class:`ConvergenceError` if the off-diagonal norm is still above
    ``rel_tol * ||a||_F`` after ``max_sweeps`` sweeps.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    w, v, _, off, ok = _jacobi_kernel(a, rel_tol, max_sweeps)
    if not ok:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})", off)
    w = _rayleigh_quotients(a, v)
    order = np.argsort(w, kind="stable")
    return w[order], _fix_signs(v[:, order])


def _rayleigh_quotients(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Eigenvalues re-evaluated as ``v.T a v / v.T v`` in extended precision.

    The quotient is second-order in the eigenvector error, so this recovers
    small splittings (tunnelling doublets) that the rotated diagonal only
    holds to a few ulps of ``||a||``.
    """
    al = a.astype(np.longdouble)
    vl = v.astype(np.longdouble)
    num = np.einsum("ij,ik,kj->j", vl, al, vl)
    den = np.einsum("ij,ij->j", vl, vl)
    return (num / den).astype(np.float64)


def degeneracy_blocks(eigenvalues, tol_deg: float = DEFAULT_TOL_DEG) -> tuple[tuple[int, int], ...]:
    """Maximal runs of ascending eigenvalues chained by ``E[i+1] - E[i] <= tol_deg``."""
    e = np.asarray(eigenvalues, dtype=float)
    if e.size == 0:
        return ()
    cuts = np.flatnonzero(np.diff(e) > tol_deg) + 1
    bounds = np.concatenate(([0], cuts, [e.size]))
    return tuple((int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]))


def eigh(H, tol_deg: float = DEFAULT_TOL_DEG) -> EigenSystem:
    """Full eigendecomposition of a :class:`SpinHamiltonian` or symmetric array."""
    mat = np.asarray(getattr(H, "matrix", H), dtype=np.float64)
    asym = np.max(np.abs(mat - mat.T)) if mat.size else 0.0
    if asym > 1e-12 * max(1.0, np.max(np.abs(mat))):
        raise ValueError(f"matrix not symmetric (max asymmetry {asym:.3e})")
    w, v = jacobi_eigh(mat)
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(w, v, degeneracy_blocks(w, tol_deg), tol_deg)


def gauge_fix(es: EigenSystem, dH: np.ndarray) -> tuple[EigenSystem, np.ndarray]:
    """Rotate each degenerate block so ``dH`` restricted to it is diagonal.

    Inside a block the new vectors are ordered by ascending ``dH``
    eigenvalue.  Returns the rotated system and ``U.T @ dH @ U`` in the
    rotated basis.
    """
    U = np.array(es.eigenvectors)
    for start, stop in es.blocks:
        if stop - start < 2:
            continue
        Ub = U[:, start:stop]
        B = Ub.T @ dH @ Ub
        _, R = jacobi_eigh(0.5 * (B + B.T))
        U[:, start:stop] = Ub @ R
    U = _fix_signs(U)
    U.setflags(write=False)
    rotated = EigenSystem(es.eigenvalues, U, es.blocks, es.tol_deg)
    return rotated, U.T @ dH @ U


def eigenvector_derivatives(es: EigenSystem, dH) -> EigenDerivatives:
    """First-order perturbation theory for every eigenvector.

    |d psi_n> = sum_{m not in block(n)} <psi_m|dH|psi_n> / (E_n - E_m) |psi_m>

    after :func:`gauge_fix`.  Pairs within a degenerate block are excluded,
    never regularized, so ``<psi_n|d psi_n> = 0`` holds exactly.
    """
    dH = np.asarray(getattr(dH, "matrix", dH), dtype=np.float64)
    if dH.shape != (es.dim, es.dim):
        raise ValueError(f"dH shape {dH.shape} does not match dimension {es.dim}")
    rotated, M = gauge_fix(es, dH)
    E = rotated.eigenvalues
    labels = rotated.block_labels()
    coupled = labels[:, None] != labels[None, :]
    gaps = E[None, :] - E[:, None]  # [m, n] -> E_n - E_m
    coeff = np.zeros_like(M)
    coeff[coupled] = M[coupled] / gaps[coupled]
    dvec = rotated.eigenvectors @ coeff
    return EigenDerivatives(rotated, dvec, np.diag(M).copy())
