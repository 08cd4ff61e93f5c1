"""Jones-Wenzl projection tower on tensor powers.

The level-n fiber H_n of the subproduct system is the range of the
Jones-Wenzl projection f_n, built by the Wenzl recursion

    f_{n+1} = 1 (x) f_n - [2]_q phi(n) (1 (x) f_n)(e (x) 1^(n-1))(1 (x) f_n)

with e acting on the first two tensor factors and f_n on the last n.  Ranks
are certified two independent ways: by eigenvalue count and by the integer
recurrence d_{n+1} = m d_n - d_{n-1}; any disagreement aborts the build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MemoryBudgetExceeded, ProjectionDrift
from .linalg import adjoint, kron, operator_norm, scalar_budget
from .tl import TLSystem

__all__ = [
    "JWTower",
    "build_tower",
    "dims_by_recurrence",
    "phi",
    "q_integer",
    "subspace_basis",
    "wenzl_defect",
]

RANK_GAP_TOL = 1e-6


def q_integer(k: int, q: float) -> float:
    """Quantum integer [k]_q = (q^k - q^-k)/(q - q^-1), with [k]_1 = k."""
    if abs(q - 1.0) < 1e-12:
        return float(k)
    return (q**k - q**-k) / (q - 1.0 / q)


def phi(n: int, q: float) -> float:
    """Ratio [n]_q / [n+1]_q of consecutive quantum integers; phi(0) = 0.

    Increases to q (to n/(n+1) when q = 1) and drives the Wenzl recursion.
    """
    if n == 0:
        return 0.0
    return q_integer(n, q) / q_integer(n + 1, q)


def dims_by_recurrence(m: int, n_max: int) -> list[int]:
    """Fiber dimensions d_0..d_{n_max} via d_{n+1} = m d_n - d_{n-1}.

    Each d_n equals the quantum integer [n+1]_t for t + 1/t = m.
    """
    if m < 2:
        raise ValueError(f"dimension must be at least 2, got {m}")
    dims = [1, m]
    while len(dims) <= n_max:
        dims.append(m * dims[-1] - dims[-2])
    return dims[: n_max + 1]


@dataclass(frozen=True)
class JWTower:
    """Projections f_0..f_N with isometric bases of their ranges.

    f[n] acts on H^(x)n (an m^n x m^n matrix); bases[n] is an m^n x dims[n]
    isometry whose columns span H_n = f_n H^(x)n.
    """

    system: TLSystem
    N: int
    f: list[np.ndarray]
    bases: list[np.ndarray]
    dims: list[int]


def build_tower(system: TLSystem, n_max: int) -> JWTower:
    """Run the Wenzl recursion up to level ``n_max`` and certify every rank.

    Raises:
        MemoryBudgetExceeded: if the top-level matrix would hold more than
            the scalar budget (2**26 by default, TLSUB_MAX_SCALARS override).
        ProjectionDrift: if some f_n stops being a projection within 1e-9 or
            its eigenvalue rank disagrees with the integer recurrence.
    """
    if n_max < 1:
        raise ValueError(f"tower needs at least one level, got {n_max}")
    m = system.m
    if m ** (2 * n_max) > scalar_budget():
        raise MemoryBudgetExceeded(
            f"f_{n_max} for m={m} needs {m ** (2 * n_max)} scalars, "
            f"budget is {scalar_budget()}"
        )

    q = system.q
    two_q = q_integer(2, q)
    expected = dims_by_recurrence(m, n_max)

    f = [np.ones((1, 1), dtype=complex), np.eye(m, dtype=complex)]
    bases = [np.ones((1, 1), dtype=complex), np.eye(m, dtype=complex)]
    dims = [1, m]

    for n in range(1, n_max):
        fn = f[n]
        one_fn = kron(np.eye(m), fn)
        e_first = kron(system.e, np.eye(m ** (n - 1)))
        fnext = one_fn - (two_q * phi(n, q)) * (one_fn @ e_first @ one_fn)
        fnext = (fnext + adjoint(fnext)) / 2.0

        w, vecs = np.linalg.eigh(fnext)
        idem = float(np.max(np.abs(w * w - w)))
        if idem > 1e-9:
            raise ProjectionDrift(f"||f_{n + 1}^2 - f_{n + 1}|| = {idem:.3e} at level {n + 1}")
        keep = w > 0.5
        rank = int(np.count_nonzero(keep))
        if rank != expected[n + 1]:
            raise ProjectionDrift(
                f"rank(f_{n + 1}) = {rank} but the recurrence gives {expected[n + 1]}"
            )
        f.append(fnext)
        bases.append(np.ascontiguousarray(vecs[:, keep]))
        dims.append(rank)

    return JWTower(system=system, N=n_max, f=f, bases=bases, dims=dims)


def subspace_basis(tower: JWTower, n: int) -> np.ndarray:
    """Isometry H_n -> H^(x)n whose columns span range(f_n)."""
    if n > tower.N:
        raise ValueError(f"level {n} beyond tower depth {tower.N}")
    return tower.bases[n]


def wenzl_defect(tower: JWTower, n: int) -> float:
    """||f_{n+1} - (1 (x) f_n)(f_n (x) 1)||, the overlap defect of shifted towers.

    Decays like q^n (like n^{-1/2} when q = 1).
    """
    if n + 1 > tower.N:
        raise ValueError(f"defect at level {n} needs f_{n + 1}, tower depth is {tower.N}")
    m = tower.system.m
    fn = tower.f[n]
    left = kron(np.eye(m), fn)
    right = kron(fn, np.eye(m))
    return operator_norm(tower.f[n + 1] - left @ right)
