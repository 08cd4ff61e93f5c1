"""Temperley-Lieb tensors: validation, parameters and normal form.

A quadratic polynomial sum_i a_i X_i X_{m-i+1} (and more generally any
vector xi in H (x) H) is encoded by the anti-linear operator A: xi -> M conj(xi)
on C^m.  The tensor is Temperley-Lieb exactly when A^2 is unitary up to a
positive scalar, and then the rank-one projection e onto C*xi satisfies

    (e (x) 1)(1 (x) e)(e (x) 1) = (1/lambda) e (x) 1

with lambda = alpha^{-1} (Tr A*A)^2.  This module checks that condition,
derives the scalar data (lambda, q, t, tau), extracts the complete unitary
invariant of A as a collection of (beta, Z_beta) pairs, and produces the
canonical antidiagonal normal form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadCoefficients, NotTemperleyLieb
from .linalg import (
    adjoint,
    cluster_indices,
    kron,
    operator_norm,
    range_basis,
    unitary_eigensystem,
)

__all__ = [
    "AntiLinearOp",
    "TLInvariants",
    "TLSystem",
    "invariants_close",
    "invariants_of",
    "normal_form",
    "params_from_polynomial",
    "projection_of",
    "relation_residuals_of_projection",
    "tl_check",
    "tl_relation_residuals",
    "vector_of",
]

TL_TOL = 1e-9
CLUSTER_TOL = 1e-6
COEFF_TOL = 1e-10


@dataclass(frozen=True)
class AntiLinearOp:
    """Anti-linear operator xi -> matrix @ conj(xi) on C^m, m >= 2.

    In this encoding A^2 has matrix M @ conj(M), the anti-linear adjoint A*
    has matrix M^T, and A*A has the positive semidefinite matrix M^T @ conj(M).
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"anti-linear operator needs a square matrix, got shape {m.shape}")
        if m.shape[0] < 2:
            raise ValueError("dimension must be at least 2")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def square_matrix(self) -> np.ndarray:
        """Matrix of the (linear) operator A^2."""
        return self.matrix @ np.conj(self.matrix)

    def gram_matrix(self) -> np.ndarray:
        """Matrix of A*A (positive semidefinite Hermitian)."""
        return self.matrix.T @ np.conj(self.matrix)


@dataclass(frozen=True)
class TLSystem:
    """Validated Temperley-Lieb datum for a polynomial sum_i a_i X_i X_{m-i+1}.

    ``tau`` is +-1 when a_i conj(a_{m-i+1}) is the constant -tau, else None;
    systems without tau are fine for the Jones-Wenzl tower but are rejected
    by the Fock-operator construction, whose relation suite needs the sign.
    """

    m: int
    coeffs: np.ndarray
    lam: float
    q: float
    t: float
    tau: int | None
    xi: np.ndarray
    e: np.ndarray


@dataclass(frozen=True)
class TLInvariants:
    """Complete unitary invariant: pairs (beta, Z_beta).

    beta runs over the spectrum of |A| in (0, 1]; Z_beta is the multiset of
    eigenvalues of U^2 on the beta spectral subspace, where A = U|A|.
    """

    pairs: tuple[tuple[float, tuple[complex, ...]], ...]

    @property
    def total_dim(self) -> int:
        return sum(
            (2 if beta < 1.0 - CLUSTER_TOL else 1) * len(zs) for beta, zs in self.pairs
        )


def tl_check(a: AntiLinearOp, tol: float = TL_TOL) -> tuple[float, float]:
    """Verify (A^2)* A^2 = alpha * 1 and return (alpha, lambda).

    lambda = alpha^{-1} (Tr A*A)^2 is the Temperley-Lieb constant of the
    associated rank-one projection.

    Raises:
        NotTemperleyLieb: if (A^2)*A^2 deviates from a positive scalar matrix
            by more than ``tol`` in operator norm.
    """
    mc = a.square_matrix()
    g = adjoint(mc) @ mc
    m = a.dim
    alpha = float(np.real(np.trace(g)) / m)
    dev = operator_norm(g - alpha * np.eye(m))
    if dev > tol or alpha <= tol:
        raise NotTemperleyLieb(
            f"(A^2)*A^2 is not a positive scalar: alpha={alpha:.3e}, deviation={dev:.3e}"
        )
    hs = float(np.sum(np.abs(a.matrix) ** 2))
    return alpha, hs * hs / alpha


def vector_of(a: AntiLinearOp) -> np.ndarray:
    """The tensor sum_i xi_i (x) A xi_i in C^{m^2}; component (i,j) is M[j,i]."""
    return a.matrix.T.reshape(-1).copy()


def projection_of(system: TLSystem) -> np.ndarray:
    """Rank-one projection onto the line spanned by the system's tensor."""
    xi = system.xi
    return np.outer(xi, np.conj(xi)) / float(np.vdot(xi, xi).real)


def relation_residuals_of_projection(e: np.ndarray, lam: float) -> tuple[float, float]:
    """Residuals of both Temperley-Lieb braiding relations on H^(x)3.

    Returns (||(e(x)1)(1(x)e)(e(x)1) - (e(x)1)/lam||, same with factors swapped).
    Accepts any m^2 x m^2 matrix; a non-Temperley-Lieb projection simply
    yields large residuals.
    """
    m2 = e.shape[0]
    m = round(math.isqrt(m2))
    if m * m != m2:
        raise ValueError(f"projection must act on H (x) H; got size {m2}")
    ident = np.eye(m)
    e1 = kron(e, ident)
    e2 = kron(ident, e)
    r1 = operator_norm(e1 @ e2 @ e1 - e1 / lam)
    r2 = operator_norm(e2 @ e1 @ e2 - e2 / lam)
    return r1, r2


def tl_relation_residuals(system: TLSystem) -> tuple[float, float]:
    """Residuals of the defining relation for the system's projection."""
    return relation_residuals_of_projection(system.e, system.lam)


def _rescaled_matrix(a: AntiLinearOp, tol: float) -> np.ndarray:
    """Matrix of A scaled so that A^2 is exactly unitary (alpha = 1)."""
    alpha, _ = tl_check(a, tol)
    return a.matrix / alpha**0.25


def _polar_parts(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spectral data of the polar decomposition A = U |A|.

    Returns (singular values ascending, eigenvector matrix W of |A|,
    anti-linear matrix of U).  Assumes A^2 unitary, so |A| is invertible.
    """
    gram = m.T @ np.conj(m)
    w, vecs = np.linalg.eigh((gram + adjoint(gram)) / 2.0)
    s = np.sqrt(np.clip(w, 0.0, None))
    if s[0] <= 0:
        raise NotTemperleyLieb("|A| is singular; A^2 cannot be unitary")
    inv_conj = np.conj(vecs) @ np.diag(1.0 / s) @ vecs.T
    m_u = m @ inv_conj
    return s, vecs, m_u


def invariants_of(a: AntiLinearOp, cluster_tol: float = CLUSTER_TOL) -> TLInvariants:
    """Collection of pairs (beta, Z_beta) classifying A up to unitary conjugacy.

    The operator is first rescaled so that A^2 is exactly unitary; beta runs
    over sigma(|A|) in (0, 1] with eigenvalues merged when closer than
    ``cluster_tol``, and Z_beta collects the unit-circle eigenvalues of U^2 on
    the corresponding spectral subspace.
    """
    m = _rescaled_matrix(a, TL_TOL)
    s, vecs, m_u = _polar_parts(m)
    u2 = m_u @ np.conj(m_u)

    pairs = []
    for idx in cluster_indices(s, cluster_tol):
        beta = float(np.mean(s[idx]))
        if beta > 1.0 + cluster_tol:
            continue  # partner of a beta < 1 cluster
        v = vecs[:, idx]
        zs, _ = unitary_eigensystem(adjoint(v) @ u2 @ v)
        zs = zs / np.abs(zs)
        zs_sorted = tuple(sorted(zs, key=lambda z: (cmath.phase(z) % (2 * math.pi), z.real)))
        pairs.append((min(beta, 1.0), zs_sorted))
    pairs.sort(key=lambda p: p[0])
    return TLInvariants(pairs=tuple(pairs))


def invariants_close(x: TLInvariants, y: TLInvariants, tol: float = CLUSTER_TOL) -> bool:
    """Tolerant comparison of two invariant collections."""
    if len(x.pairs) != len(y.pairs):
        return False
    for (bx, zx), (by, zy) in zip(x.pairs, y.pairs):
        if abs(bx - by) > tol or len(zx) != len(zy):
            return False
        remaining = list(zy)
        for z in zx:
            best = min(range(len(remaining)), key=lambda i: abs(remaining[i] - z))
            if abs(remaining[best] - z) > tol:
                return False
            remaining.pop(best)
    return True


class _Pair:
    """One antidiagonal 2x2 block: A xi = a * zeta, A zeta = partner * xi."""

    __slots__ = ("a", "partner", "xi", "zeta")

    def __init__(self, a, partner, xi, zeta):
        self.a = float(a)
        self.partner = complex(partner)
        self.xi = xi
        self.zeta = zeta

    def sort_key(self):
        arg = cmath.phase(self.partner) % (2 * math.pi)
        if arg > 2 * math.pi - 1e-12:
            arg = 0.0
        return (self.a, arg)


def _real_form_basis(b: np.ndarray, m_u: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis of the fixed-point real form of an anti-unitary involution.

    ``b`` spans (as columns) a subspace invariant under U with U^2 = 1 there;
    the realified action of U is an orthogonal symmetric involution whose +1
    eigenspace has real dimension equal to the complex dimension of the block.
    """
    k = b.shape[1]
    cb = adjoint(b) @ m_u @ np.conj(b)
    r = np.block([[cb.real, cb.imag], [cb.imag, -cb.real]])
    w, v = np.linalg.eigh((r + r.T) / 2.0)
    plus = v[:, w > 0.0]
    if plus.shape[1] != k:
        raise NotTemperleyLieb(
            f"real form has dimension {plus.shape[1]}, expected {k}; U^2 != 1 on block"
        )
    return [b @ (plus[:k, j] + 1j * plus[k:, j]) for j in range(k)]


def _wigner_pairs(b: np.ndarray, m_u: np.ndarray) -> tuple[list[_Pair], list[np.ndarray]]:
    """Pairs (1, 1) and optional middle vector for the U^2 = 1 block."""
    g = _real_form_basis(b, m_u)
    k = len(g)
    half = k // 2
    pairs = []
    for j in range(half):
        xi = (g[j] + 1j * g[k - 1 - j]) / math.sqrt(2.0)
        zeta = (g[j] - 1j * g[k - 1 - j]) / math.sqrt(2.0)
        pairs.append(_Pair(1.0, 1.0, xi, zeta))
    middles = [g[half]] if k % 2 else []
    return pairs, middles


def _quaternionic_pairs(b: np.ndarray, m_u: np.ndarray) -> list[_Pair]:
    """Pairs (1, -1) for the U^2 = -1 block; U xi is automatically orthogonal to xi."""
    pairs = []
    cols = b.copy()
    while cols.shape[1] > 0:
        xi = cols[:, 0]
        zeta = m_u @ np.conj(xi)
        zeta = zeta - xi * np.vdot(xi, zeta)
        zeta /= np.linalg.norm(zeta)
        pairs.append(_Pair(1.0, -1.0, xi, zeta))
        if cols.shape[1] <= 2:
            break
        # orthocomplement of span(xi, zeta) inside the block
        comp = cols @ adjoint(cols) - np.outer(xi, np.conj(xi)) - np.outer(zeta, np.conj(zeta))
        cols = range_basis(comp, tol=1e-8)
    return pairs


def normal_form(
    a: AntiLinearOp, cluster_tol: float = CLUSTER_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical antidiagonal form of a Temperley-Lieb anti-linear operator.

    Returns ``(coeffs, basis)`` where ``basis`` is unitary and
    ``adjoint(basis) @ M @ conj(basis)`` is the antidiagonal matrix with
    entries coeffs[0], ..., coeffs[m-1] (coeffs[i] sitting at row m-1-i,
    column i).  The coefficients satisfy |a_i a_{m-i+1}| = 1, 0 < a_i <= 1
    for i <= m//2, a middle coefficient of 1 for odd m, and
    0 <= arg(a_{m-i+1}) <= pi whenever a_i = 1.  Pairs are sorted by
    (a_i, arg of partner) to pick one representative of the permutation class.

    The operator is rescaled so A^2 is exactly unitary before the form is
    extracted; the reported coefficients refer to the rescaled operator.
    """
    m_mat = _rescaled_matrix(a, TL_TOL)
    dim = m_mat.shape[0]
    s, vecs, m_u = _polar_parts(m_mat)
    u2 = m_u @ np.conj(m_u)

    clusters = cluster_indices(s, cluster_tol)
    means = [float(np.mean(s[idx])) for idx in clusters]

    pairs: list[_Pair] = []
    middles: list[np.ndarray] = []
    for mean, idx in zip(means, clusters):
        if mean > 1.0 + cluster_tol:
            continue  # handled together with its inverse cluster
        v = vecs[:, idx]
        if mean < 1.0 - cluster_tol:
            if not any(abs(other - 1.0 / mean) <= cluster_tol * (1 + 1 / mean**2) for other in means):
                raise NotTemperleyLieb(
                    f"spectrum of |A| is not closed under inversion near beta={mean:.6g}"
                )
            zs, y = unitary_eigensystem(adjoint(v) @ u2 @ v)
            for col in range(len(zs)):
                z = zs[col] / abs(zs[col])
                xi = v @ y[:, col]
                zeta = m_u @ np.conj(xi)
                pairs.append(_Pair(mean, z / mean, xi, zeta))
            continue

        # beta = 1 block: split by the spectrum of U^2 and apply the
        # anti-unitary normal forms.
        zs, y = unitary_eigensystem(adjoint(v) @ u2 @ v)
        zs = zs / np.abs(zs)
        for zidx in cluster_indices(zs, cluster_tol):
            z = complex(np.mean(zs[zidx]))
            z /= abs(z)
            block = v @ y[:, zidx]
            if abs(z - 1.0) <= cluster_tol:
                p, mid = _wigner_pairs(block, m_u)
                pairs.extend(p)
                middles.extend(mid)
            elif abs(z + 1.0) <= cluster_tol:
                pairs.extend(_quaternionic_pairs(block, m_u))
            elif cmath.phase(z) > 0:
                for col in range(block.shape[1]):
                    xi = block[:, col]
                    zeta = m_u @ np.conj(xi)
                    pairs.append(_Pair(1.0, z, xi, zeta))
            # lower half-circle eigenvalues ride along as U-images of the
            # conjugate cluster

    if 2 * len(pairs) + len(middles) != dim:
        raise NotTemperleyLieb(
            f"normal form accounted for {2 * len(pairs) + len(middles)} of {dim} dimensions"
        )

    pairs.sort(key=_Pair.sort_key)
    coeffs = np.empty(dim, dtype=complex)
    basis = np.empty((dim, dim), dtype=complex)
    for j, p in enumerate(pairs):
        coeffs[j] = p.a
        coeffs[dim - 1 - j] = p.partner
        basis[:, j] = p.xi
        basis[:, dim - 1 - j] = p.zeta
    if middles:
        coeffs[len(pairs)] = 1.0
        basis[:, len(pairs)] = middles[0]
    return coeffs, basis


def params_from_polynomial(coeffs) -> TLSystem:
    """Build the full Temperley-Lieb datum from antidiagonal coefficients.

    Solves q + 1/q = sum |a_i|^2 with q in (0, 1] and t + 1/t = m with t in
    (0, 1], detects the sign tau when a_i conj(a_{m-i+1}) is constant in
    {-1, +1}, and assembles the tensor xi_P and its rank-one projection.

    Raises:
        BadCoefficients: if some |a_i a_{m-i+1}| differs from 1.
    """
    a = np.asarray(coeffs, dtype=complex).reshape(-1)
    m = len(a)
    if m < 2:
        raise BadCoefficients(f"need at least 2 coefficients, got {m}")
    prods = np.abs(a * a[::-1])
    if np.max(np.abs(prods - 1.0)) > COEFF_TOL:
        raise BadCoefficients(
            f"|a_i a_(m-i+1)| deviates from 1 by {np.max(np.abs(prods - 1.0)):.3e}"
        )

    s = float(np.sum(np.abs(a) ** 2))
    lam = s * s
    q = _inverse_two_q(s)
    t = _inverse_two_q(float(m))

    c = a * np.conj(a[::-1])
    tau: int | None = None
    if np.max(np.abs(c - c[0])) <= COEFF_TOL:
        val = -c[0]
        if abs(val.imag) <= COEFF_TOL and abs(abs(val.real) - 1.0) <= COEFF_TOL:
            tau = int(round(val.real))

    xi = np.zeros(m * m, dtype=complex)
    for i in range(m):
        xi[i * m + (m - 1 - i)] = a[i]
    e = np.outer(xi, np.conj(xi)) / s

    return TLSystem(m=m, coeffs=a.copy(), lam=lam, q=q, t=t, tau=tau, xi=xi, e=e)


def _inverse_two_q(s: float) -> float:
    """The solution q in (0, 1] of q + 1/q = s (requires s >= 2)."""
    if s < 2.0 - 1e-12:
        raise BadCoefficients(f"q + 1/q = {s:.6g} has no solution in (0, 1]")
    if s <= 2.0:
        return 1.0
    return (s - math.sqrt(s * s - 4.0)) / 2.0
