"""Non-complete wheel networks and the Green matrix of their base cycle.

A wheel ``(n, m)-W`` is a cycle on ``n = m*d`` vertices with conductance ``c``
on every cycle edge, plus a hub joined with conductance ``a`` to the ``m``
cycle vertices ``0, d, 2d, ...`` (0-based).  Internally vertices are numbered
``0..n-1`` along the cycle and the hub is ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import ChebTable, cheb_table, q_of
from .errors import DomainError

__all__ = [
    "WheelParams",
    "build_laplacian",
    "cycle_green_entry",
    "cycle_green_matrix",
    "cycle_laplacian",
    "spoke_vertices",
]


def _positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite conductance, got {value!r}")
    return value


def _integer(name, value, lower):
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < lower:
        raise DomainError(f"{name} must be >= {lower}, got {value}")
    return value


@dataclass(frozen=True)
class WheelParams:
    """Parameters ``(m, d, a, c)`` of a non-complete wheel.

    ``m`` is the number of spokes and must exceed 1 (a single spoke would make
    the hub a pendant vertex, for which the reduced matrix is singular).
    ``n = m*d`` is always derived.  With ``m = 2, d = 1`` the base "cycle" is
    two vertices joined by a doubled edge of total conductance ``2c``.
    """

    m: int
    d: int
    a: float
    c: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m:
            raise DomainError(f"m must be an integer, got {self.m!r}")
        if int(self.m) < 2:
            raise DomainError(
                f"m must satisfy m > 1 (m = 1 attaches the hub as a pendant vertex), got m={self.m}"
            )
        object.__setattr__(self, "m", _integer("m", self.m, 2))
        object.__setattr__(self, "d", _integer("d", self.d, 1))
        object.__setattr__(self, "a", _positive("a", self.a))
        object.__setattr__(self, "c", _positive("c", self.c))

    @property
    def n(self) -> int:
        return self.m * self.d

    @property
    def alpha(self) -> float:
        """Hub degree ``m*a``."""
        return self.m * self.a

    @property
    def hub(self) -> int:
        return self.n

    @property
    def order(self) -> int:
        return self.n + 1

    @property
    def q(self) -> float:
        return q_of(self.a, self.c, self.d)

    def cheb(self) -> ChebTable:
        """Chebyshev values at ``q`` for every index the formulas touch."""
        return cheb_table(self.m, self.q)

    def as_dict(self) -> dict:
        return {"m": self.m, "d": self.d, "a": self.a, "c": self.c, "n": self.n}


def spoke_vertices(p: WheelParams) -> list[int]:
    """0-based cycle vertices adjacent to the hub, ascending."""
    return [k * p.d for k in range(p.m)]


def cycle_laplacian(n: int, c: float) -> np.ndarray:
    """Laplacian ``circ(2c, -c, 0, ..., 0, -c)`` of the cycle on ``n`` vertices."""
    n = _integer("n", n, 2)
    c = _positive("c", c)
    L = np.zeros((n, n))
    for i in range(n):
        j = (i + 1) % n
        L[i, j] -= c
        L[j, i] -= c
        L[i, i] += c
        L[j, j] += c
    return L


def build_laplacian(p: WheelParams) -> np.ndarray:
    """Weighted Laplacian of the wheel, order ``n + 1``, hub last."""
    n = p.n
    L = np.zeros((n + 1, n + 1))
    L[:n, :n] = cycle_laplacian(n, p.c)
    for s in spoke_vertices(p):
        L[s, n] -= p.a
        L[n, s] -= p.a
        L[s, s] += p.a
    L[n, n] = p.alpha
    return L


def cycle_green_entry(n: int, c: float, i: int, j: int) -> float:
    """Entry ``(i, j)`` of the group inverse of the cycle Laplacian.

    ``(n**2 - 1 - 6|i-j|(n-|i-j|)) / (12 c n)`` with 0-based ``i, j < n``.
    """
    n = _integer("n", n, 2)
    c = _positive("c", c)
    for name, v in (("i", i), ("j", j)):
        if isinstance(v, bool) or int(v) != v or not 0 <= v < n:
            raise DomainError(f"{name}={v!r} is not a cycle vertex in [0, {n})")
    x = abs(int(i) - int(j))
    return (n * n - 1 - 6 * x * (n - x)) / (12.0 * c * n)


def cycle_green_matrix(n: int, c: float) -> np.ndarray:
    n = _integer("n", n, 2)
    c = _positive("c", c)
    idx = np.arange(n)
    x = np.abs(idx[:, None] - idx[None, :])
    return (n * n - 1 - 6 * x * (n - x)) / (12.0 * c * n)
