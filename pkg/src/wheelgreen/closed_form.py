"""Direct evaluation of the typeset entry formulas of the wheel Green matrix.

The typeset block entries run several terms together with no operator
between them.  Each such boundary is a slot taking ``'*'`` (plain
juxtaposition read as a product, i.e. the text as printed), ``'+'`` or
``'-'``.  The defaults below are the readings that reproduce
:func:`wheelgreen.pipeline.assemble_group_inverse` over the validation sweep;
:mod:`wheelgreen.errata` re-derives them from scratch on every run.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .pipeline import block_core, block_poly_tail, block_toeplitz, gs_vector, join
from .wheel import WheelParams

__all__ = [
    "BLOCK_DEFAULT",
    "BORDER_DEFAULT",
    "theorem_block_entry",
    "theorem_border_entry",
    "theorem_corner",
    "theorem_matrix",
]

# slot 1: between n(h-i+1)(V..) and (an/c (i-1)(h-d) - nd)(U..)
# slot 2: between "-nd" and (2kd-3d+2h-n)(i-1)
# slot 3: between (1/(n+1))(...) and (a(d^2-1)+12cd)/(6a(n+1)^2)
BLOCK_DEFAULT = {"ops": ("-", "+", "+"), "index": "shifted"}
BORDER_DEFAULT = "corrected"


def theorem_corner(p: WheelParams) -> float:
    """Hub diagonal entry ``(12cdn + an(d^2-1)) / (12ac(n+1)^2)``."""
    n, d, a, c = p.n, p.d, p.a, p.c
    return (12 * c * d * n + a * n * (d * d - 1)) / (12 * a * c * (n + 1) ** 2)


def theorem_border_entry(p: WheelParams, i: int, reading: str = BORDER_DEFAULT) -> float:
    """Hub-column entry for block row position ``i`` (1-based, ``1..d``).

    The column is ``d``-periodic.  ``reading='printed'`` evaluates
    ``-d/(a(n+1)^2) (a(d^2-1)/(12cd) + n + 2) n_i``; ``'corrected'`` evaluates
    ``-d/(a(n+1)^2) (1 + a(d^2-1)/(12cd) + (n+1) n_i)``, where ``n_i`` is the
    period of ``G s``.
    """
    if not 1 <= i <= p.d:
        raise DomainError(f"border index i={i} outside [1, {p.d}]")
    n, d, a, c = p.n, p.d, p.a, p.c
    g = gs_vector(p)[i - 1]
    lead = -d / (a * (n + 1) ** 2)
    shift = a * (d * d - 1) / (12 * c * d)
    if reading == "printed":
        return lead * (shift + n + 2) * g
    if reading == "corrected":
        return lead * (1 + shift + (n + 1) * g)
    raise DomainError(f"unknown border reading {reading!r}")


def theorem_block_entry(p: WheelParams, k: int, i: int, h: int, ops=None, index=None) -> float:
    """``(N_k)_{i,h+1}`` of the top-left block Toeplitz part.

    ``ops`` gives the operator in each of the three fused slots and ``index``
    the reading of the absolute-value argument (see
    :func:`wheelgreen.pipeline.block_offset`).
    """
    if not (1 <= k <= p.m and 1 <= i <= p.d and 0 <= h <= p.d - 1):
        raise DomainError(f"block entry (k={k}, i={i}, h={h}) out of range")
    ops = BLOCK_DEFAULT["ops"] if ops is None else tuple(ops)
    index = BLOCK_DEFAULT["index"] if index is None else index
    if len(ops) != 3:
        raise DomainError("three operator slots are required")
    d, a, c, n = p.d, p.a, p.c, p.n
    core = block_core(p, k, i, h, ops[0], index)
    poly = d * h + n * h + join(ops[1], -n * d, (2 * k * d - 3 * d + 2 * h - n) * (i - 1))
    poly += k * d * (n - 2 * h) - d * d * (k - 1) ** 2
    extra = (n - 1) * (d * d - 1) / 6.0 - (i - 2 - d) * i - h * h + d * h - d - 1
    tail = join(ops[2], extra / (n + 1), (a * (d * d - 1) + 12 * c * d) / (6 * a * (n + 1) ** 2))
    return (core + poly + tail) / (2.0 * c * n)


def theorem_matrix(p: WheelParams, ops=None, index=None, border=BORDER_DEFAULT) -> np.ndarray:
    """Full Green matrix built only from the typeset entry formulas."""
    n, d, m = p.n, p.d, p.m
    blocks = np.array([
        [[theorem_block_entry(p, k, i, h, ops, index) for h in range(d)] for i in range(1, d + 1)]
        for k in range(1, m + 1)
    ])
    A = np.empty((n + 1, n + 1))
    A[:n, :n] = block_toeplitz(blocks)
    col = np.tile([theorem_border_entry(p, i, border) for i in range(1, d + 1)], m)
    A[:n, n] = col
    A[n, :n] = col
    A[n, n] = theorem_corner(p)
    return A
