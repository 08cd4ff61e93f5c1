"""Truncated Fock space, creation operators and the relation suite.

The Fock space of a Temperley-Lieb subproduct system is the direct sum of
the fibers H_n.  All operators are stored compressed to the Jones-Wenzl
bases, so blocks have size dims[n] (which grows like t^-n, far slower than
m^n).  The left creation operator S_i maps the level-n block into the
level-(n+1) block via adjoint(V_{n+1}) (xi_i (x) V_n); the right creation
operator R_i uses adjoint(V_{n+1}) (V_n (x) xi_i).

Truncation contract: the top level N has no image under S or R, so every
relation is evaluated compressed to levels 0..N-1; nothing is asserted about
the top level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TauUndefined
from .linalg import adjoint, kron, operator_norm
from .tl import TLSystem
from .wenzl import JWTower, build_tower, phi

__all__ = [
    "FockOperators",
    "FockSpace",
    "GaugeDiagonal",
    "RelationReport",
    "boundary_flatness",
    "build_fock",
    "commutator_norms",
    "gauge_degree",
    "phi_element",
    "psi_map",
    "tail_projections",
    "theta_map",
    "verify_relations",
    "word_matrix",
]


@dataclass(frozen=True)
class FockSpace:
    """Level-block layout of the truncated Fock space."""

    tower: JWTower
    N: int
    dims: list[int]
    offsets: list[int]
    dim: int

    def level_slice(self, n: int) -> slice:
        return slice(self.offsets[n], self.offsets[n] + self.dims[n])

    def block(self, x: np.ndarray, row_level: int, col_level: int | None = None) -> np.ndarray:
        """Submatrix of ``x`` mapping the col-level block into the row-level block."""
        if col_level is None:
            col_level = row_level
        return x[self.level_slice(row_level), self.level_slice(col_level)]

    def compressed_norm(self, x: np.ndarray) -> float:
        """Operator norm of x compressed to levels 0..N-1 (the truncation contract)."""
        cut = self.offsets[self.N]
        return operator_norm(x[:cut, :cut])


@dataclass
class FockOperators:
    """Creation operators, level projections and cached tail projections."""

    space: FockSpace
    S: list[np.ndarray]
    R: list[np.ndarray]
    E: list[np.ndarray]
    p_tail: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def system(self) -> TLSystem:
        return self.space.tower.system


@dataclass(frozen=True)
class GaugeDiagonal:
    """Element of the commutative algebra of level-diagonal scalars.

    ``values[n]`` is the scalar on the level-n block.  The left shift maps
    values[n] -> values[n+1]; on the truncation the top value is frozen in
    place, which only affects the top level excluded from every check.
    """

    values: np.ndarray

    @staticmethod
    def indicator(level: int, n_max: int) -> "GaugeDiagonal":
        v = np.zeros(n_max + 1, dtype=complex)
        v[level] = 1.0
        return GaugeDiagonal(v)

    def shifted(self) -> "GaugeDiagonal":
        return GaugeDiagonal(np.append(self.values[1:], self.values[-1]))

    def to_matrix(self, space: FockSpace) -> np.ndarray:
        diag = np.concatenate(
            [np.full(space.dims[n], self.values[n]) for n in range(space.N + 1)]
        )
        return np.diag(diag)


def phi_element(space: FockSpace) -> GaugeDiagonal:
    """The gauge diagonal whose level-n value is phi(n)."""
    q = space.tower.system.q
    return GaugeDiagonal(np.array([phi(n, q) for n in range(space.N + 1)], dtype=complex))


def build_fock(system: TLSystem, n_max: int) -> tuple[FockSpace, FockOperators]:
    """Assemble the truncated Fock space and its S/R operators.

    Raises:
        TauUndefined: relation checks on this space need the sign tau, so
            systems without it are rejected here (the tower itself is fine).
        MemoryBudgetExceeded: propagated from the tower build.
    """
    if system.tau is None:
        raise TauUndefined(
            "a_i conj(a_{m-i+1}) is not a constant sign; Fock relations need tau"
        )
    if n_max < 2:
        raise ValueError(f"need at least 2 levels, got {n_max}")

    tower = build_tower(system, n_max)
    dims = list(tower.dims)
    offsets = list(np.concatenate([[0], np.cumsum(dims)]).astype(int))
    dim = offsets[n_max + 1]
    space = FockSpace(tower=tower, N=n_max, dims=dims, offsets=offsets, dim=dim)

    m = system.m
    eye_m = np.eye(m, dtype=complex)
    s_ops = [np.zeros((dim, dim), dtype=complex) for _ in range(m)]
    r_ops = [np.zeros((dim, dim), dtype=complex) for _ in range(m)]
    for n in range(n_max):
        vn, vn1 = tower.bases[n], tower.bases[n + 1]
        for i in range(m):
            col = eye_m[:, i : i + 1]
            s_block = adjoint(vn1) @ kron(col, vn)
            r_block = adjoint(vn1) @ kron(vn, col)
            s_ops[i][space.level_slice(n + 1), space.level_slice(n)] = s_block
            r_ops[i][space.level_slice(n + 1), space.level_slice(n)] = r_block

    e_ops = []
    for n in range(n_max + 1):
        e = np.zeros((dim, dim), dtype=complex)
        sl = space.level_slice(n)
        e[sl, sl] = np.eye(dims[n])
        e_ops.append(e)

    return space, FockOperators(space=space, S=s_ops, R=r_ops, E=e_ops)


@dataclass(frozen=True)
class RelationReport:
    """Named residuals of the generator relations; judgment is the caller's."""

    residuals: dict[str, float]
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def all_pass(self) -> bool:
        return self.max_residual <= self.tol


def verify_relations(ops: FockOperators, tol: float = 1e-9) -> RelationReport:
    """Residuals of the four relation families, compressed to levels 0..N-1.

    The families: (level_shift) f S_i = S_i gamma(f) over the spanning family
    of level indicators; (vacuum_complement) sum_i S_i S_i* = 1 - e_0;
    (kernel_polynomial) sum_i a_i S_i S_{m-i+1} = 0; (phi_exchange)
    S_i* S_j + a_i conj(a_j) Phi S_{m-i+1} S_{m-j+1}* = delta_ij.
    """
    space = ops.space
    system = ops.system
    m = system.m
    a = system.coeffs
    dim = space.dim
    eye = np.eye(dim, dtype=complex)

    r_shift = 0.0
    for k in range(space.N + 1):
        g = GaugeDiagonal.indicator(k, space.N)
        gm = g.to_matrix(space)
        gm_shift = g.shifted().to_matrix(space)
        for s in ops.S:
            r_shift = max(r_shift, space.compressed_norm(gm @ s - s @ gm_shift))

    total = sum(s @ adjoint(s) for s in ops.S)
    r_vacuum = space.compressed_norm(total - (eye - ops.E[0]))

    kernel = sum(a[i] * ops.S[i] @ ops.S[m - 1 - i] for i in range(m))
    r_kernel = space.compressed_norm(kernel)

    phi_mat = phi_element(space).to_matrix(space)
    r_phi = 0.0
    for i in range(m):
        for j in range(m):
            lhs = (
                adjoint(ops.S[i]) @ ops.S[j]
                + a[i] * np.conj(a[j]) * phi_mat @ ops.S[m - 1 - i] @ adjoint(ops.S[m - 1 - j])
            )
            rhs = eye if i == j else np.zeros_like(eye)
            r_phi = max(r_phi, space.compressed_norm(lhs - rhs))

    return RelationReport(
        residuals={
            "level_shift": r_shift,
            "vacuum_complement": r_vacuum,
            "kernel_polynomial": r_kernel,
            "phi_exchange": r_phi,
        },
        tol=tol,
    )


def tail_projections(ops: FockOperators) -> list[np.ndarray]:
    """Projections p_n = sum over length-n words w of S_w S_w*, for n = 0..N.

    Computed by the recursion p_{n+1} = sum_i S_i p_n S_i* and cached.
    p_n - p_{n+1} = e_n and p_{n+1} S_i = S_i p_n hold on levels <= N-1.
    """
    if ops.p_tail is None:
        p = [np.eye(ops.space.dim, dtype=complex)]
        for _ in range(ops.space.N):
            p.append(sum(s @ p[-1] @ adjoint(s) for s in ops.S))
        ops.p_tail = p
    return ops.p_tail


def commutator_norms(ops: FockOperators, n: int) -> tuple[float, float]:
    """Max over i, j of (||[S_i, R_j]|_{H_n}||, ||[S_i*, R_j]|_{H_n}||).

    The first vanishes identically; the second decays like q^n.
    """
    space = ops.space
    if n > space.N - 1:
        raise ValueError(f"level {n} too close to the truncation edge N={space.N}")
    sl = space.level_slice(n)
    c1 = 0.0
    c2 = 0.0
    for s in ops.S:
        for r in ops.R:
            c1 = max(c1, operator_norm((s @ r - r @ s)[:, sl]))
            sd = adjoint(s)
            c2 = max(c2, operator_norm((sd @ r - r @ sd)[:, sl]))
    return c1, c2


def psi_map(tower: JWTower, n: int, k: int, x: np.ndarray) -> np.ndarray:
    """Unital cp map B(H_n) -> B(H_{n+k}): compression of x (x) 1 to H_{n+k}.

    Realizes the inclusion H_{n+k} in H_n (x) H_k through the Jones-Wenzl
    bases: adjoint(V_{n+k}) (V_n x adjoint(V_n) (x) 1) V_{n+k}.
    """
    if n + k > tower.N:
        raise ValueError(f"psi_{n},{n + k} needs level {n + k}, tower depth is {tower.N}")
    if k == 0:
        return np.asarray(x, dtype=complex).copy()
    m = tower.system.m
    vn = tower.bases[n]
    vnk = tower.bases[n + k]
    mid = vn @ np.asarray(x, dtype=complex) @ adjoint(vn)
    return adjoint(vnk) @ kron(mid, np.eye(m**k)) @ vnk


def theta_map(ops: FockOperators, x: np.ndarray) -> np.ndarray:
    """Contractive cp map Theta(x) = sum_i R_i x R_i*.

    For block-diagonal x, iterating k times and reading the level-(n+k)
    block reproduces psi_map(tower, n, k, x_n).
    """
    return sum(r @ x @ adjoint(r) for r in ops.R)


def gauge_degree(word) -> int:
    """Degree of a word in the S_i / S_i* under the circle gauge action.

    Words are sequences of signed 1-based indices: +i means S_i, -i means
    S_i*.  The degree (#S - #S*) is the level shift of the word's matrix.
    """
    return sum(1 if w > 0 else -1 for w in word)


def word_matrix(ops: FockOperators, word) -> np.ndarray:
    """Matrix of a word, composed left to right as written."""
    out = np.eye(ops.space.dim, dtype=complex)
    for w in word:
        if w == 0 or abs(w) > len(ops.S):
            raise ValueError(f"word letter {w} out of range 1..{len(ops.S)}")
        s = ops.S[abs(w) - 1]
        out = out @ (s if w > 0 else adjoint(s))
    return out


def boundary_flatness(ops: FockOperators, x: np.ndarray, n0: int) -> float:
    """Distance of a gauge-invariant element from psi-flatness at depth n0.

    Returns max over n0 <= n, k >= 0, n + k <= N-1 of
    ||x_{n+k} - psi_{n,n+k}(x_n)||; zero exactly on elements of the end
    compactification restricted to the truncation.
    """
    space = ops.space
    if n0 + 1 > space.N:
        raise ValueError(f"depth {n0} leaves no levels below the truncation edge")
    tower = space.tower
    worst = 0.0
    for n in range(n0, space.N):
        xn = space.block(x, n)
        for k in range(0, space.N - n):
            target = space.block(x, n + k)
            worst = max(worst, operator_norm(target - psi_map(tower, n, k, xn)))
    return worst
