"""Closed-form chain from the cycle Green matrix to the wheel Green matrix.

The hub is eliminated with a Schur complement, whose group inverse ``M`` is
``G - G F G`` with ``F`` supported on the spokes.  Every intermediate object
is circulant (order ``m``) or block Toeplitz (``m x m`` blocks of size
``d x d``) and is given entrywise by Chebyshev expressions in
``q = a*d/(2c) + 1``.  :func:`assemble_group_inverse` then borders ``M`` with
the hub row and column.

Block conventions: blocks and rows inside a block are 1-based (``k = 1..m``,
``i = 1..d``), the column offset ``h`` runs over ``0..d-1``.  Block ``k`` of a
family sits at global block position ``(r, s)`` whenever
``(s - r) mod m == k - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AxiomViolationError, DomainError, SingularMatrixError
from .oracle import group_inverse_residuals
from .wheel import WheelParams, build_laplacian, cycle_green_matrix, spoke_vertices

__all__ = [
    "Circulant",
    "assemble_group_inverse",
    "block_toeplitz",
    "dipole_gram",
    "f_coeffs",
    "gs_vector",
    "h_entry",
    "h_first_columns",
    "induced_f",
    "induced_h",
    "induced_k",
    "induced_m",
    "k_block_entry",
    "m_block_entry",
    "mr_matrix",
    "reduced_green",
    "reduced_green_inverse",
    "reduced_green_inverse_row",
]

INVERSE_RESIDUAL_TOL = 1e-8
AXIOM_FAULT_TOL = 1e-6


@dataclass(frozen=True)
class Circulant:
    """Circulant matrix given by its first row; entry ``(i, j)`` is
    ``row[(j - i) mod m]``."""

    row: tuple

    @classmethod
    def from_row(cls, row):
        return cls(tuple(float(v) for v in row))

    @property
    def order(self) -> int:
        return len(self.row)

    def dense(self) -> np.ndarray:
        m = self.order
        r = np.asarray(self.row)
        idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
        return r[idx]

    def is_symmetric(self, tol=0.0) -> bool:
        m = self.order
        return all(abs(self.row[k] - self.row[(m - k) % m]) <= tol for k in range(m))


def join(op: str, left: float, right: float) -> float:
    """Combine two terms across a boundary where a binary operator may be
    missing.  ``'*'`` reads plain juxtaposition as a product."""
    if op == "*":
        return left * right
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    raise DomainError(f"unknown operator {op!r}")


def _check_block_index(p, k, i, h=None):
    if not 1 <= k <= p.m:
        raise DomainError(f"block index k={k} outside [1, {p.m}]")
    if not 1 <= i <= p.d:
        raise DomainError(f"row index i={i} outside [1, {p.d}]")
    if h is not None and not 0 <= h <= p.d - 1:
        raise DomainError(f"column offset h={h} outside [0, {p.d - 1}]")


def reduced_green(p: WheelParams) -> Circulant:
    """Spoke-indexed submatrix of ``G - (n^2-1)/(12cn) J``: first-row entries
    ``-d j (m - j) / (2 c m)``."""
    m = p.m
    return Circulant.from_row(-p.d * j * (m - j) / (2.0 * p.c * m) for j in range(m))


def reduced_green_inverse_row(m: int, reading: str) -> list[float]:
    """Unscaled first row ``(b0, -b1, -1, ..., -1, -b1)`` of the inverse.

    ``reading='printed'`` places ``-b1`` at both neighbours of the diagonal
    and ``-1`` in between, which for ``m = 2`` leaves a single off-diagonal
    slot holding ``-b1``.  ``reading='offset'`` starts from ``-1`` everywhere
    off the diagonal and lowers each diagonal neighbour by ``b1 - 1``; the two
    agree for ``m >= 3`` and only the latter inverts ``G_R`` at ``m = 2``.
    """
    b0 = (m**3 - m - 6) / 6.0
    b1 = (m**3 - m + 12) / 12.0
    if reading == "printed":
        row = [b0] + [-1.0] * (m - 1)
        row[1] = -b1
        row[m - 1] = -b1
        return row
    if reading == "offset":
        row = [b0] + [-1.0] * (m - 1)
        row[1] -= b1 - 1.0
        row[m - 1] -= b1 - 1.0
        return row
    raise DomainError(f"unknown reading {reading!r}")


def reduced_green_inverse(p: WheelParams, reading: str = "auto") -> Circulant:
    """Inverse of :func:`reduced_green`, ``12c/(n(m^2-1)) circ(b0, -b1, -1, ..., -1, -b1)``.

    With ``reading='auto'`` the printed pattern is tried first and the offset
    reading is used when the printed one does not invert ``G_R``.
    """
    readings = ("printed", "offset") if reading == "auto" else (reading,)
    GR = reduced_green(p).dense()
    factor = 12.0 * p.c / (p.n * (p.m**2 - 1))
    worst = None
    for r in readings:
        inv = Circulant.from_row(factor * v for v in reduced_green_inverse_row(p.m, r))
        res = np.abs(GR @ inv.dense() - np.eye(p.m)).max()
        if res <= INVERSE_RESIDUAL_TOL:
            return inv
        worst = res if worst is None else min(worst, res)
    raise SingularMatrixError(
        f"reading(s) {readings} of the reduced inverse leave residual {worst:.3e} at m={p.m}"
    )


def mr_matrix(p: WheelParams) -> Circulant:
    """``(G_R^{-1} + (a/m)(mI - J))^{-1}`` as ``circ(m_1, ..., m_m)``."""
    tb = p.cheb()
    m, d, a, c = p.m, p.d, p.a, p.c
    tm1 = tb.T(m) - 1.0
    shift = (12.0 * c + a * d * (m * m - 1)) / (12.0 * a * c * m)
    return Circulant.from_row(
        (tb.U(j - 2) + tb.U(m - j)) * d / (2.0 * c * tm1) - shift for j in range(1, m + 1)
    )


def f_coeffs(p: WheelParams) -> np.ndarray:
    """Spoke values ``f_1..f_m``; block ``F_i`` is zero except ``(F_i)_{11} = f_i``."""
    tb = p.cheb()
    m, d, a, c = p.m, p.d, p.a, p.c
    tm1 = tb.T(m) - 1.0
    return np.array([
        a * (i == 1) - a * a * d / (2.0 * c) * (tb.U(i - 2) + tb.U(m - i)) / tm1
        for i in range(1, m + 1)
    ])


def h_entry(p: WheelParams, k: int, i: int, op: str = "-") -> float:
    """``(H_k)_{i1}``, the only nonzero column of block ``H_k`` of ``H = G F``.

    ``op`` is the operator joining the two bracketed terms of the ``k >= 2``
    expression; ``'-'`` is correct.
    """
    _check_block_index(p, k, i)
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    tm1 = tb.T(m) - 1.0
    if k == 1:
        inner = (i - 1) * (tb.V(m - 1) - 1.0) - d * tb.U(m - 1)
    else:
        inner = join(
            op,
            (i - 1) * (tb.V(k - 1) - tb.V(m - k)),
            d / c * (a * (i - 1) + c) * (tb.U(k - 2) + tb.U(m - k)),
        )
    return -d / n - a / (2.0 * c) * inner / tm1


def h_first_columns(p: WheelParams) -> np.ndarray:
    """Array of shape ``(m, d)``: row ``k-1`` is the first column of ``H_k``."""
    return np.array([[h_entry(p, k, i) for i in range(1, p.d + 1)] for k in range(1, p.m + 1)])


def k_block_entry(p: WheelParams, k: int, i: int, h: int) -> float:
    """``(K_k)_{i,h+1}`` of ``K = G F G``."""
    _check_block_index(p, k, i, h)
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    tm1 = tb.T(m) - 1.0
    bracket = (
        n * (h - i + 1) * (tb.V(k - 1) - tb.V(m - k))
        - (a * n / c * (i - 1) * (h - d) - n * d) * (tb.U(k - 2) + tb.U(m - k))
        - 2.0 * c * d / a * (tb.V(m - 1) - 1.0)
        - d * d * tb.U(m - 1)
    )
    poly = (
        d * h + n * h - n * d - n * n / 6.0 + d * d / 6.0
        + (2 * k * d - 3 * d + 2 * h - n) * (i - 1)
        + k * d * (n - 2 * h)
        - d * d * (k - 1) ** 2
    )
    return -(bracket / tm1 + poly) / (2.0 * c * n)


def block_offset(p: WheelParams, k: int, i: int, h: int, index: str = "shifted") -> int:
    """Cycle distance argument of the Green-matrix part of a block entry.

    ``'shifted'`` is ``|i - 1 - (k-1)d - h|``, the true index distance;
    ``'printed'`` is the variant ``|i - 1 - k(d-1) - h|``.
    """
    if index == "shifted":
        return abs(i - 1 - (k - 1) * p.d - h)
    if index == "printed":
        return abs(i - 1 - k * (p.d - 1) - h)
    raise DomainError(f"unknown index reading {index!r}")


def block_core(p: WheelParams, k: int, i: int, h: int, op: str = "-", index: str = "shifted") -> float:
    """Shared leading part of the ``M`` and ``N`` block entries (times ``2cn``)."""
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    tm1 = tb.T(m) - 1.0
    x = block_offset(p, k, i, h, index)
    bracket = (
        join(
            op,
            n * (h - i + 1) * (tb.V(k - 1) - tb.V(m - k)),
            (a * n / c * (i - 1) * (h - d) - n * d) * (tb.U(k - 2) + tb.U(m - k)),
        )
        - 2.0 * c * d / a * (tb.V(m - 1) - 1.0)
        - d * d * tb.U(m - 1)
    )
    return -x * (n - x) + bracket / tm1


def block_poly_tail(p: WheelParams, k: int, i: int, h: int) -> float:
    d, n = p.d, p.n
    return (2 * k * d - 3 * d + 2 * h - n) * (i - 1) + k * d * (n - 2 * h) - d * d * (k - 1) ** 2


def m_block_entry(p: WheelParams, k: int, i: int, h: int, op: str = "-", index: str = "shifted") -> float:
    """``(M_k)_{i,h+1}`` of the Schur-complement group inverse ``M = G - G F G``."""
    _check_block_index(p, k, i, h)
    d, c, n = p.d, p.c, p.n
    total = block_core(p, k, i, h, op, index) + d * h + n * h - n * d + block_poly_tail(p, k, i, h)
    return total / (2.0 * c * n) + (d * d - 1) / (12.0 * c * n)


def gs_vector(p: WheelParams) -> np.ndarray:
    """One period of ``G s``; the full product repeats it ``m`` times."""
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    i = np.arange(1, d + 1)
    return -a / (12.0 * c * n) * (n * (6 + d) + 5 * m + 6 * m * i * (i - d - 2))


def block_toeplitz(blocks) -> np.ndarray:
    """Assemble ``m`` blocks (shape ``(m, d, d)``) into the ``md x md`` matrix
    whose block ``(r, s)`` is ``blocks[(s - r) mod m]``."""
    blocks = np.asarray(blocks, dtype=float)
    m, d, _ = blocks.shape
    out = np.empty((m * d, m * d))
    for r in range(m):
        for s in range(m):
            out[r * d:(r + 1) * d, s * d:(s + 1) * d] = blocks[(s - r) % m]
    return out


def _family(p, entry):
    return np.array([
        [[entry(p, k, i, h) for h in range(p.d)] for i in range(1, p.d + 1)]
        for k in range(1, p.m + 1)
    ])


def induced_f(p: WheelParams) -> np.ndarray:
    blocks = np.zeros((p.m, p.d, p.d))
    blocks[:, 0, 0] = f_coeffs(p)
    return block_toeplitz(blocks)


def induced_h(p: WheelParams) -> np.ndarray:
    blocks = np.zeros((p.m, p.d, p.d))
    blocks[:, :, 0] = h_first_columns(p)
    return block_toeplitz(blocks)


def induced_k(p: WheelParams) -> np.ndarray:
    return block_toeplitz(_family(p, k_block_entry))


def induced_m(p: WheelParams) -> np.ndarray:
    return block_toeplitz(_family(p, m_block_entry))


def dipole_gram(p: WheelParams) -> np.ndarray:
    """``Pi Pi^T`` on the cycle: ``(a/m)(mI - J)`` on spoke rows and columns,
    zero elsewhere.  ``Pi`` itself is never formed."""
    n, m = p.n, p.m
    sp = spoke_vertices(p)
    out = np.zeros((n, n))
    out[np.ix_(sp, sp)] = p.a / m * (m * np.eye(m) - np.ones((m, m)))
    return out


def spoke_vector(p: WheelParams) -> np.ndarray:
    """Border column ``s`` of the wheel Laplacian (``-a`` on spokes)."""
    s = np.zeros(p.n)
    s[spoke_vertices(p)] = -p.a
    return s


def assemble_group_inverse(p: WheelParams, check: bool = True) -> np.ndarray:
    """Green matrix of the wheel, order ``n + 1`` with the hub last.

    Borders the closed-form ``M`` with the hub row and column::

        n^2/(alpha^2 (n+1)^2) * [[C M C^T + alpha/n^2 J, -alpha/n j - C M s],
                                 [        (sym)        ,  alpha + s^T M s  ]]

    where ``C = (alpha (n+1) I + j s^T) / n``.  With ``check`` the result is
    tested against the Laplacian and an :class:`AxiomViolationError` is raised
    when a group-inverse identity fails by more than ``1e-6``.
    """
    p.cheb()  # fail on overflow before allocating anything of order n
    n, alpha = p.n, p.alpha
    M = induced_m(p)
    s = spoke_vector(p)
    ones = np.ones(n)
    C = (alpha * (n + 1) * np.eye(n) + np.outer(ones, s)) / n
    CM = C @ M
    A = np.empty((n + 1, n + 1))
    A[:n, :n] = CM @ C.T + alpha / n**2
    border = -alpha / n * ones - CM @ s
    A[:n, n] = border
    A[n, :n] = border
    A[n, n] = alpha + s @ M @ s
    A *= n * n / (alpha * alpha * (1 + n) ** 2)
    A = 0.5 * (A + A.T)
    if check:
        res = group_inverse_residuals(build_laplacian(p), A)
        worst = max(res.values())
        if worst > AXIOM_FAULT_TOL:
            raise AxiomViolationError(f"assembled Green matrix fails identities: {res}")
    return A


def cycle_green(p: WheelParams) -> np.ndarray:
    return cycle_green_matrix(p.n, p.c)
