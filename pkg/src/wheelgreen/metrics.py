"""Effective resistances and Kirchhoff indices of wheels.

Two routes are provided.  The Green-matrix route works for any valid group
inverse: ``R(i, j) = G_ii + G_jj - 2 G_ij`` and ``K = N trace(G)``.  The
closed route evaluates the typeset wheel formulas; their fused term
boundaries and misprinted terms are selected with keyword arguments whose
defaults are the readings confirmed against the Green-matrix route.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .pipeline import join
from .wheel import WheelParams

__all__ = [
    "PAIR_DEFAULT",
    "HUB_DEFAULT",
    "effective_resistance",
    "kirchhoff_closed",
    "kirchhoff_green",
    "kirchhoff_wheel",
    "resistance_closed",
    "resistance_matrix",
]

# op: slot between (V_{k'-1} - V_{m-k'}) and the (a/c^2 h1(h2-d) - d/c) factor
PAIR_DEFAULT = {"op": "-", "index": "shifted", "dcoef": "corrected", "trailing": False}
# op1: slot inside the bracket; tail 'hub' replaces the printed tail by 1/(m a)
HUB_DEFAULT = {"op1": "+", "tail": "hub", "op2": "+"}


def _check_matrix(G):
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DomainError(f"Green matrix must be square, got shape {G.shape}")
    return G


def _check_vertex(name, v, N):
    if isinstance(v, bool) or int(v) != v or not 0 <= v < N:
        raise IndexError(f"vertex {name}={v!r} outside [0, {N})")
    return int(v)


def effective_resistance(G, i: int, j: int) -> float:
    """Resistance between vertices ``i`` and ``j`` (0-based) of a network
    with Green matrix ``G``."""
    G = _check_matrix(G)
    N = G.shape[0]
    i = _check_vertex("i", i, N)
    j = _check_vertex("j", j, N)
    if i == j:
        return 0.0
    return float(G[i, i] + G[j, j] - 2.0 * G[i, j])


def resistance_matrix(G) -> np.ndarray:
    """All pairwise resistances; symmetric with an exactly zero diagonal."""
    G = _check_matrix(G)
    diag = np.diag(G)
    R = diag[:, None] + diag[None, :] - 2.0 * G
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 0.0)
    return R


def kirchhoff_green(G) -> float:
    """Kirchhoff index ``N trace(G)`` of a network of order ``N``."""
    G = _check_matrix(G)
    return float(G.shape[0] * np.trace(G))


def _pair(p, k1, h1, k2, h2, op, index, dcoef, trailing):
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    kp = k2 - k1 + 1
    tm1 = tb.T(m) - 1.0
    if index == "shifted":
        x = abs(h1 - h2 - (kp - 1) * d)
    elif index == "printed":
        x = abs(h1 - h2 - kp * (d - 1))
    else:
        raise DomainError(f"unknown index reading {index!r}")
    bracket = (
        join(
            op,
            (h2 - h1) * (tb.V(kp - 1) - tb.V(m - kp)) / c,
            (a / c**2 * h1 * (h2 - d) - d / c) * (tb.U(kp - 2) + tb.U(m - kp)),
        )
        + (a / (2 * c * c) * (h1 * h1 + h2 * h2 - (h1 + h2) * d) - d / c) * tb.U(m - 1)
    )
    if dcoef == "printed":
        dterm = (3 * h1 - 2 * h2) * d
    elif dcoef == "corrected":
        dterm = 2 * (h1 - h2) * d
    else:
        raise DomainError(f"unknown coefficient reading {dcoef!r}")
    poly = (
        x * (n - x)
        - (2 * kp * d + 2 * h2) * h1
        - kp * d * (n - 2 * h2)
        + d * d * (kp - 1) ** 2
        + h1 * h1 + h2 * h2 + dterm + n * (h1 - h2 + d)
    )
    value = -bracket / tm1 + poly / (c * n)
    if trailing:
        value -= (n - 1) ** 2 * (d * d - 1) / (6 * c * (n + 1) ** 2)
    return value


def _hub(p, h1, op1, tail, op2):
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    tm1 = tb.T(m) - 1.0
    bracket = join(
        op1,
        d / (a * n) * (tb.V(m - 1) - 1.0),
        (a * n / c * (h1 * h1 - h1 * d) - n * d + d * d) * tb.U(m - 1) / (2 * c * n),
    )
    head = -bracket / tm1
    if tail == "hub":
        return head + 1.0 / (m * a)
    if tail != "printed":
        raise DomainError(f"unknown tail reading {tail!r}")
    first = (h1 * h1 - h1 * d) / (c * (n + 1) ** 2)
    left = (12 * c * d * (n * n + 1) + a * n * n * (d * d - 1)) / (12 * a * c * n * (n + 1) ** 2)
    right = (6 * h1 * h1 - 6 * h1 * d - 1) / (6 * c * (n + 1) ** 2) * (a * (d * d - 1) / (12 * c * d) + n + 2)
    return head + first + join(op2, left, right)


def resistance_closed(p: WheelParams, i: int, j: int, pair=None, hub=None) -> float:
    """Closed-form resistance between 0-based vertices ``i`` and ``j``
    (hub is ``n``).  ``pair`` and ``hub`` override the readings in
    :data:`PAIR_DEFAULT` and :data:`HUB_DEFAULT`."""
    N = p.n + 1
    i = _check_vertex("i", i, N)
    j = _check_vertex("j", j, N)
    if i == j:
        return 0.0
    if i > j:
        i, j = j, i
    d = p.d
    if j == p.n:
        opts = dict(HUB_DEFAULT, **(hub or {}))
        return _hub(p, i % d, **opts)
    opts = dict(PAIR_DEFAULT, **(pair or {}))
    return _pair(p, i // d + 1, i % d, j // d + 1, j % d, **opts)


def kirchhoff_closed(p: WheelParams, final: str = "corrected") -> float:
    """Closed-form Kirchhoff index.

    ``final='printed'`` ends with ``-(d-1)^2 n/(12c)``; ``'corrected'`` with
    ``-(d^2-1) n/(12c)``.  Both agree when ``d = 1``.
    """
    tb = p.cheb()
    m, d, a, c, n = p.m, p.d, p.a, p.c, p.n
    tm1 = tb.T(m) - 1.0
    bracket = (a * n / (6 * c) - d * n + d * d) * tb.U(m - 1) + (2 * c * d / a + d * n / 3) * (tb.V(m - 1) - 1)
    if final == "printed":
        last = (d - 1) ** 2 * n / (12 * c)
    elif final == "corrected":
        last = (d * d - 1) * n / (12 * c)
    else:
        raise DomainError(f"unknown final-term reading {final!r}")
    return -(n + 1) / (2 * c * tm1) * bracket + d / a + d * n * (n + 1) / (6 * c) - last


def kirchhoff_wheel(p: WheelParams, op: str = "+") -> float:
    """Kirchhoff index of a complete wheel (``d = 1``, every cycle vertex is
    a spoke).  ``op`` is the operator before the ``1/a`` term."""
    if p.d != 1:
        raise DomainError(f"complete-wheel formula needs d = 1, got d={p.d}")
    tb = p.cheb()
    n, a, c = p.n, p.a, p.c
    tm1 = tb.T(n) - 1.0
    bracket = (a * n / (6 * c) - n + 1) * tb.U(n - 1) + (2 * c / a + n / 3) * (tb.V(n - 1) - 1)
    head = -(n + 1) / (2 * c * tm1) * bracket
    return join(op, head, 1.0 / a) + n * (n + 1) / (6 * c)
