"""Dense ground truth, independent of every closed-form expression.

The group inverse of a connected Laplacian ``L`` of order ``N`` is obtained
by rank completion, ``(L + J/N)^{-1} - J/N``, with the inverse computed by a
small Gaussian elimination with partial pivoting written here rather than
borrowed from LAPACK.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularMatrixError

__all__ = [
    "ComparisonReport",
    "compare",
    "dense_group_inverse",
    "group_inverse_residuals",
    "lu_factor",
    "lu_solve",
    "solve_dense",
]

PIVOT_RTOL = 1e-13
MAX_ORDER = 2000


def _square(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"{name} must be a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_ORDER:
        raise DomainError(f"order {A.shape[0]} exceeds the dense limit {MAX_ORDER}")
    if not np.all(np.isfinite(A)):
        raise DomainError(f"{name} has non-finite entries")
    return A


def lu_factor(A):
    """Row-pivoted LU factorisation ``P A = L U`` packed into one array.

    Returns ``(lu, perm)`` where ``perm[k]`` is the original row now in
    position ``k``.  Raises :class:`SingularMatrixError` when a pivot falls
    below ``1e-13`` times the largest initial entry.
    """
    lu = _square(A).copy()
    N = lu.shape[0]
    perm = np.arange(N)
    scale = np.abs(lu).max() if N else 0.0
    if scale == 0.0:
        raise SingularMatrixError("matrix is identically zero")
    threshold = PIVOT_RTOL * scale
    for k in range(N):
        piv = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[piv, k]) < threshold:
            raise SingularMatrixError(
                f"pivot {lu[piv, k]:.3e} at step {k} below {threshold:.3e}"
            )
        if piv != k:
            lu[[k, piv]] = lu[[piv, k]]
            perm[[k, piv]] = perm[[piv, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve(factors, b):
    lu, perm = factors
    b = np.asarray(b, dtype=float)
    x = b[perm].copy()
    N = lu.shape[0]
    # forward substitution, unit lower triangle
    for k in range(1, N):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(N - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def solve_dense(A, b):
    """Solve ``A x = b`` by elimination with partial pivoting.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    A = _square(A)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise DomainError(f"right-hand side has {b.shape[0]} rows, matrix has {A.shape[0]}")
    return lu_solve(lu_factor(A), b)


def _is_connected(L):
    N = L.shape[0]
    adj = np.abs(L - np.diag(np.diag(L))) > 0
    seen = np.zeros(N, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adj[v] & ~seen):
            seen[w] = True
            stack.append(int(w))
    return bool(seen.all())


def dense_group_inverse(L):
    """Group inverse of a symmetric Laplacian of a connected network."""
    L = _square(L, "L")
    N = L.shape[0]
    scale = max(np.abs(L).max(), 1.0)
    if np.abs(L - L.T).max() > 1e-10 * scale:
        raise DomainError("Laplacian must be symmetric")
    if np.abs(L.sum(axis=1)).max() > 1e-10 * scale:
        raise DomainError("Laplacian rows must sum to zero")
    if N > 1 and not _is_connected(L):
        raise DomainError("network is disconnected; the kernel is not spanned by the ones vector")
    J = np.full((N, N), 1.0 / N)
    X = solve_dense(L + J, np.eye(N)) - J
    return 0.5 * (X + X.T)


def group_inverse_residuals(L, X) -> dict:
    """Max-abs residuals of the group-inverse identities for ``X`` against ``L``."""
    L = np.asarray(L, dtype=float)
    X = np.asarray(X, dtype=float)
    return {
        "XLX-X": float(np.abs(X @ L @ X - X).max()),
        "LXL-L": float(np.abs(L @ X @ L - L).max()),
        "XL-LX": float(np.abs(X @ L - L @ X).max()),
        "X1": float(np.abs(X.sum(axis=1)).max()),
    }


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    rel_frobenius: float
    argmax_location: tuple
    passed: bool
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "rel_frobenius": self.rel_frobenius,
            "argmax_location": list(self.argmax_location),
            "passed": self.passed,
            "tolerance": self.tolerance,
        }


def compare(A, B, tol: float) -> ComparisonReport:
    """Compare ``A`` against reference ``B``; passes when the relative
    Frobenius distance ``|A - B|_F / |B|_F`` is at most ``tol``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape != B.shape:
        raise DomainError(f"dimension mismatch: {A.shape} vs {B.shape}")
    diff = np.abs(A - B)
    loc = np.unravel_index(int(np.argmax(diff)), diff.shape)
    ref = np.linalg.norm(B)
    num = np.linalg.norm(A - B)
    rel = float(num / ref) if ref > 0 else float(num)
    return ComparisonReport(
        max_abs_diff=float(diff.max()),
        rel_frobenius=rel,
        argmax_location=(int(loc[0]), int(loc[1])),
        passed=bool(rel <= tol),
        tolerance=float(tol),
    )
