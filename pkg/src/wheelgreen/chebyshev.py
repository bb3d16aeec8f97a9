"""Chebyshev polynomials of the first, second and third kinds.

All three are evaluated with the forward three-term recurrence in double
precision.  The closed-form entries of the wheel Green matrix only ever need
them at the single argument ``q = a*d/(2c) + 1``, so :func:`cheb_table`
returns every index up to a bound in one pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ChebyshevOverflowError, DomainError

__all__ = [
    "OVERFLOW_LIMIT",
    "ChebTable",
    "cheb_T",
    "cheb_U",
    "cheb_V",
    "cheb_table",
    "q_of",
]

OVERFLOW_LIMIT = 1e300


def _check_arg(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"Chebyshev argument must be finite, got {x!r}")
    return x


def _guard(value: float, kind: str, k: int, x: float) -> float:
    if abs(value) > OVERFLOW_LIMIT:
        raise ChebyshevOverflowError(
            f"{kind}_{k}({x!r}) exceeds {OVERFLOW_LIMIT:g}; "
            "parameters are outside the double-precision regime"
        )
    return value


def cheb_T(k: int, x: float) -> float:
    """First-kind Chebyshev polynomial ``T_k(x)``, ``k >= 0``."""
    if k < 0:
        raise DomainError(f"T_k requires k >= 0, got {k}")
    x = _check_arg(x)
    prev, cur = 1.0, x
    if k == 0:
        return prev
    for j in range(2, k + 1):
        prev, cur = cur, _guard(2.0 * x * cur - prev, "T", j, x)
    return _guard(cur, "T", k, x)


def cheb_U(k: int, x: float) -> float:
    """Second-kind Chebyshev polynomial ``U_k(x)``, with ``U_{-1} = 0``."""
    if k < -1:
        raise DomainError(f"U_k requires k >= -1, got {k}")
    x = _check_arg(x)
    prev, cur = 0.0, 1.0
    if k == -1:
        return prev
    for j in range(1, k + 1):
        prev, cur = cur, _guard(2.0 * x * cur - prev, "U", j, x)
    return cur


def cheb_V(k: int, x: float) -> float:
    """Third-kind Chebyshev polynomial ``V_k = U_k - U_{k-1}``."""
    if k < 0:
        raise DomainError(f"V_k requires k >= 0, got {k}")
    return _guard(cheb_U(k, x) - cheb_U(k - 1, x), "V", k, x)


def q_of(a: float, c: float, d: int) -> float:
    """Chebyshev argument ``a*d/(2c) + 1`` of a wheel with the given data."""
    if not (a > 0 and c > 0):
        raise DomainError(f"conductances must be positive, got a={a!r}, c={c!r}")
    if int(d) != d or d < 1:
        raise DomainError(f"spacing d must be an integer >= 1, got {d!r}")
    return a * d / (2.0 * c) + 1.0


@dataclass(frozen=True)
class ChebTable:
    """``T``, ``U`` and ``V`` at one argument for indices up to ``kmax``.

    ``U(-1)`` is available; negative indices below that are rejected.
    """

    x: float
    kmax: int
    t_values: tuple
    u_values: tuple  # u_values[k + 1] == U_k

    def T(self, k: int) -> float:
        if not 0 <= k <= self.kmax:
            raise DomainError(f"T index {k} outside table range [0, {self.kmax}]")
        return self.t_values[k]

    def U(self, k: int) -> float:
        if not -1 <= k <= self.kmax:
            raise DomainError(f"U index {k} outside table range [-1, {self.kmax}]")
        return self.u_values[k + 1]

    def V(self, k: int) -> float:
        if not 0 <= k <= self.kmax:
            raise DomainError(f"V index {k} outside table range [0, {self.kmax}]")
        return self.u_values[k + 1] - self.u_values[k]


@lru_cache(maxsize=256)
def cheb_table(kmax: int, x: float) -> ChebTable:
    """Tabulate ``T_0..T_kmax`` and ``U_{-1}..U_kmax`` at ``x``."""
    if kmax < 0:
        raise DomainError(f"kmax must be >= 0, got {kmax}")
    x = _check_arg(x)
    t = [1.0, x]
    u = [0.0, 1.0, 2.0 * x]
    for j in range(2, kmax + 1):
        t.append(_guard(2.0 * x * t[-1] - t[-2], "T", j, x))
        u.append(_guard(2.0 * x * u[-1] - u[-2], "U", j, x))
    _guard(t[kmax], "T", kmax, x)
    _guard(u[kmax + 1], "U", kmax, x)
    return ChebTable(x=x, kmax=kmax, t_values=tuple(t[: kmax + 1]), u_values=tuple(u[: kmax + 2]))
