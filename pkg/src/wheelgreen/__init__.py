"""Closed-form Green matrix of non-complete wheel networks.

A non-complete wheel is a cycle on ``n = m*d`` vertices with a hub attached to
every ``d``-th vertex.  Its Laplacian is an extended symmetric periodic
Jacobi matrix, and its group inverse has an explicit block Toeplitz form in
terms of Chebyshev polynomials.
"""
from .chebyshev import cheb_T, cheb_U, cheb_V, q_of
from .closed_form import theorem_block_entry, theorem_border_entry, theorem_corner, theorem_matrix
from .errata import ErrataLedger, Reconciliation, default_sweep, errata_report
from .errors import (
    AxiomViolationError,
    ChebyshevOverflowError,
    DomainError,
    LedgerStateError,
    SingularMatrixError,
    UnresolvedReconstructionError,
    WheelError,
)
from .metrics import (
    effective_resistance,
    kirchhoff_closed,
    kirchhoff_green,
    kirchhoff_wheel,
    resistance_closed,
    resistance_matrix,
)
from .oracle import compare, dense_group_inverse, solve_dense
from .pipeline import assemble_group_inverse
from .wheel import WheelParams, build_laplacian, cycle_green_entry, spoke_vertices

__version__ = "0.1.0"
