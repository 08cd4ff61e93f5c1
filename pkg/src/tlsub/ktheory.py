"""Fusion rules and K-theory pairing of the free orthogonal quantum group.

The irreducible representations form a spin-n/2 ladder with SU(2)-type
fusion U_l (x) U_k = U_|l-k| + U_{|l-k|+2} + ... + U_{l+k}.  The pairing
matrix expresses the classes pi_*([U_n]) = (n+1)[p_inf] + sum_{k<n} (k-n)[p_k]
in the basis of level projections; its unimodularity at every truncation is
the computable certificate that pi_* is an isomorphism.  Everything here is
exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooSmall

__all__ = [
    "K0Group",
    "KPairingMatrix",
    "RepClass",
    "det_bareiss",
    "fuse",
    "k0_order",
    "mult_in_fock_rep",
    "pi_star_closed",
    "pi_star_from_multiplicities",
    "pi_star_matrix",
]


@dataclass(frozen=True)
class RepClass:
    """Formal nonnegative-integer combination of the spin-n/2 ladder classes."""

    multiplicities: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(d: dict[int, int]) -> "RepClass":
        items = tuple(sorted((n, c) for n, c in d.items() if c != 0))
        if any(n < 0 or c < 0 for n, c in items):
            raise ValueError("spin indices and multiplicities must be nonnegative")
        return RepClass(items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.multiplicities)

    def mult(self, n: int) -> int:
        return self.as_dict().get(n, 0)

    def __add__(self, other: "RepClass") -> "RepClass":
        d = self.as_dict()
        for n, c in other.multiplicities:
            d[n] = d.get(n, 0) + c
        return RepClass.from_dict(d)

    def tensor(self, other: "RepClass") -> "RepClass":
        """Bilinear extension of the ladder fusion rule."""
        d: dict[int, int] = {}
        for l, cl in self.multiplicities:
            for k, ck in other.multiplicities:
                for j, cj in fuse(l, k).multiplicities:
                    d[j] = d.get(j, 0) + cl * ck * cj
        return RepClass.from_dict(d)


def fuse(l: int, k: int) -> RepClass:
    """Decomposition of U_l (x) U_k: multiplicity one at |l-k|, |l-k|+2, ..., l+k."""
    if l < 0 or k < 0:
        raise ValueError("spin indices must be nonnegative")
    return RepClass.from_dict({j: 1 for j in range(abs(l - k), l + k + 1, 2)})


def mult_in_fock_rep(l: int, k: int, trunc: int) -> int:
    """Multiplicity of U_l inside (U_0 + U_1 + ... + U_trunc) (x) U_k.

    Equals min(l, k) + 1 once the truncation covers the support.

    Raises:
        TruncationTooSmall: if trunc <= l + k, where the answer would be cut off.
    """
    if trunc <= l + k:
        raise TruncationTooSmall(f"need trunc > l + k = {l + k}, got {trunc}")
    return sum(fuse(i, k).mult(l) for i in range(trunc + 1))


def pi_star_closed(trunc: int) -> np.ndarray:
    """Pairing matrix from the closed formula.

    Rows are indexed [p_inf], [p_0], ..., [p_{trunc-1}]; columns by
    [U_0], ..., [U_{trunc-1}].  Column n holds n+1 at [p_inf] and k-n at
    [p_k] for k < n.
    """
    mat = np.zeros((trunc + 1, trunc), dtype=object)
    for n in range(trunc):
        mat[0, n] = n + 1
        for k in range(n):
            mat[1 + k, n] = k - n
    return mat


def pi_star_from_multiplicities(trunc: int) -> np.ndarray:
    """Pairing matrix recomputed from fusion multiplicities.

    Column n uses c = n + 1 (the multiplicity of U_n in the regular
    representation) and c_k = m_{nk} - (n+1) m_{0k} evaluated by the
    brute-force representation sum.
    """
    big = 2 * trunc + 2
    mat = np.zeros((trunc + 1, trunc), dtype=object)
    for n in range(trunc):
        mat[0, n] = n + 1
        for k in range(trunc):
            mat[1 + k, n] = mult_in_fock_rep(n, k, big) - (n + 1) * mult_in_fock_rep(0, k, big)
    return mat


@dataclass(frozen=True)
class KPairingMatrix:
    """Integer pairing matrix in the basis ([p_inf], [p_0], ..., [p_{T-1}]).

    The row of [p_{T-1}] is identically zero, so the meaningful square part
    is the first T rows; its determinant is +-1 at every truncation.
    """

    trunc: int
    entries: np.ndarray

    def square(self) -> np.ndarray:
        return self.entries[: self.trunc, :]

    def determinant(self) -> int:
        return det_bareiss(self.square())

    def is_triangular(self) -> bool:
        """Nonzero entries of column n sit in rows 0..n only."""
        sq = self.square()
        return all(
            sq[r, n] == 0 for n in range(self.trunc) for r in range(n + 1, self.trunc)
        )


def pi_star_matrix(trunc: int) -> KPairingMatrix:
    """Build the pairing matrix both ways and insist they agree entrywise."""
    if trunc < 1:
        raise ValueError(f"truncation must be at least 1, got {trunc}")
    closed = pi_star_closed(trunc)
    from_mult = pi_star_from_multiplicities(trunc)
    if not np.array_equal(closed, from_mult):
        raise AssertionError("closed-form and multiplicity constructions disagree")
    return KPairingMatrix(trunc=trunc, entries=closed)


def det_bareiss(mat: np.ndarray) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in np.asarray(mat, dtype=object)]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class K0Group:
    """Finitely generated abelian group Z^free_rank (+) Z/torsion (torsion 1 = none)."""

    free_rank: int
    torsion: int

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank
        if self.torsion > 1:
            parts.append(f"Z/{self.torsion}")
        return " + ".join(parts) if parts else "0"


def k0_order(m: int) -> K0Group:
    """K_0 of the Cuntz-Pimsner quotient: Z for m = 2, Z/(m-2) for m >= 3.

    Computed as the cokernel of multiplication by 2 - m on Z, the Euler
    characteristic of the dimension recurrence d_{n+1} = m d_n - d_{n-1}.
    This shortcut corroborates the known answer; it is not a proof.
    """
    if m < 2:
        raise ValueError(f"dimension must be at least 2, got {m}")
    step = 2 - m
    if step == 0:
        return K0Group(free_rank=1, torsion=1)
    return K0Group(free_rank=0, torsion=abs(step))
