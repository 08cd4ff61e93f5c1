"""Dense complex matrix substrate.

All higher modules work with plain ``numpy.ndarray`` matrices of dtype
complex128.  Tensor-power indices are flattened lexicographically with the
leftmost factor most significant, which is exactly what ``numpy.kron``
produces.  No function here mutates its arguments.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.linalg

from .errors import NotAProjection

__all__ = [
    "DEFAULT_PROJECTION_TOL",
    "adjoint",
    "cluster_indices",
    "kron",
    "operator_norm",
    "projection_defect",
    "range_basis",
    "scalar_budget",
    "unitary_eigensystem",
]

DEFAULT_PROJECTION_TOL = 1e-9

_DEFAULT_MAX_SCALARS = 1 << 26


def scalar_budget() -> int:
    """Largest number of scalars a single dense matrix may hold.

    The default of 2**26 keeps level-N towers at desk scale; the environment
    variable ``TLSUB_MAX_SCALARS`` overrides it.
    """
    raw = os.environ.get("TLSUB_MAX_SCALARS")
    if raw is None:
        return _DEFAULT_MAX_SCALARS
    return int(raw)


def adjoint(x: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(x)).T


def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor most significant in the flat index."""
    return np.kron(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))


def operator_norm(x: np.ndarray) -> float:
    """Largest singular value.  Accepts rectangular blocks."""
    a = np.asarray(x)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def projection_defect(p: np.ndarray) -> tuple[float, float]:
    """Return (||p^2 - p||, ||p* - p||) in operator norm."""
    p = np.asarray(p, dtype=complex)
    return operator_norm(p @ p - p), operator_norm(adjoint(p) - p)


def range_basis(pmat: np.ndarray, tol: float = DEFAULT_PROJECTION_TOL) -> np.ndarray:
    """Orthonormal basis (as columns of an isometry) of the range of a projection.

    The input must satisfy ``||P^2 - P|| <= tol`` and ``||P* - P|| <= tol``;
    the rank is read off as the number of eigenvalues above 1/2, which is the
    maximally robust threshold for projections whose spectrum clusters at
    {0, 1}.

    Raises:
        NotAProjection: if the precondition fails.
    """
    p = np.asarray(pmat, dtype=complex)
    idem, herm = projection_defect(p)
    if idem > tol or herm > tol:
        raise NotAProjection(
            f"not a projection within {tol:g}: ||P^2-P||={idem:.3e}, ||P*-P||={herm:.3e}"
        )
    w, v = np.linalg.eigh((p + adjoint(p)) / 2.0)
    keep = w > 0.5
    return np.ascontiguousarray(v[:, keep])


def unitary_eigensystem(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and an orthonormal eigenbasis of a (numerically) unitary matrix.

    Uses a complex Schur decomposition; for normal input the Schur form is
    diagonal to machine precision, so the Schur vectors are an orthonormal
    eigenbasis.
    """
    c = np.asarray(c, dtype=complex)
    if c.shape[0] == 0:
        return np.zeros(0, dtype=complex), c.copy()
    t, z = scipy.linalg.schur(c, output="complex")
    return np.diag(t).copy(), z


def cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group indices of ``values`` whose entries lie within ``tol`` of each other.

    Clusters are transitive closures under the |v_i - v_j| <= tol relation
    (values may be complex), returned sorted by the real part of the cluster
    mean, then the imaginary part.
    """
    vals = np.asarray(values)
    n = len(vals)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(groups.values())
    out.sort(key=lambda idx: (np.mean(vals[idx]).real, np.mean(vals[idx]).imag))
    return out
