import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wheelgreen import pipeline as pl
from wheelgreen.errors import ChebyshevOverflowError, DomainError, SingularMatrixError
from wheelgreen.oracle import dense_group_inverse, group_inverse_residuals
from wheelgreen.wheel import WheelParams, build_laplacian, cycle_green_matrix, spoke_vertices

from conftest import K4, W22


def dense_chain(p):
    """Intermediate chain by plain numpy products and inverses."""
    m, n = p.m, p.n
    sp = spoke_vertices(p)
    G = cycle_green_matrix(n, p.c)
    GR = (G - (n * n - 1) / (12 * p.c * n))[np.ix_(sp, sp)]
    P = p.a / m * (m * np.eye(m) - np.ones((m, m)))
    MR = np.linalg.inv(np.linalg.inv(GR) + P)
    F = np.zeros((n, n))
    F[np.ix_(sp, sp)] = P - P @ MR @ P
    return dict(G=G, GR=GR, P=P, MR=MR, F=F, H=G @ F, K=G @ F @ G, M=G - G @ F @ G)


# ---- circulant pieces

def test_circulant_layout():
    C = pl.Circulant.from_row([1, 2, 3])
    assert np.array_equal(C.dense(), [[1, 2, 3], [3, 1, 2], [2, 3, 1]])
    assert not C.is_symmetric()
    assert pl.Circulant.from_row([1, 2, 2]).is_symmetric()


def test_reduced_green_values():
    assert np.allclose(pl.reduced_green(K4).row, (0, -1 / 3, -1 / 3), atol=1e-15)
    assert np.allclose(pl.reduced_green(W22).row, (0, -0.5), atol=1e-15)


def test_reduced_green_matches_cycle_submatrix(sweep_point):
    ref = dense_chain(sweep_point)["GR"]
    assert np.abs(pl.reduced_green(sweep_point).dense() - ref).max() <= 1e-12
    assert pl.reduced_green(sweep_point).is_symmetric()


def test_reduced_inverse_k4():
    inv = pl.reduced_green_inverse(K4)
    assert np.allclose(inv.row, (1.5, -1.5, -1.5), atol=1e-14)
    # circulant eigenvalues of G_R are -2/3, 1/3, 1/3
    assert np.allclose(np.sort(np.linalg.eigvalsh(inv.dense())), [-1.5, 3, 3])


def test_reduced_inverse_identity(sweep_point):
    GR = pl.reduced_green(sweep_point).dense()
    inv = pl.reduced_green_inverse(sweep_point).dense()
    assert np.abs(GR @ inv - np.eye(sweep_point.m)).max() <= 1e-10


def test_two_spoke_reading():
    # the printed pattern leaves -b1 alone off the diagonal when m = 2
    assert pl.reduced_green_inverse_row(2, "printed") == [0.0, -1.5]
    assert pl.reduced_green_inverse_row(2, "offset") == [0.0, -2.0]
    for m in range(3, 9):
        assert pl.reduced_green_inverse_row(m, "printed") == pl.reduced_green_inverse_row(m, "offset")
    with pytest.raises(SingularMatrixError):
        pl.reduced_green_inverse(W22, reading="printed")
    with pytest.raises(DomainError):
        pl.reduced_green_inverse_row(3, "other")


def test_mr_values():
    assert np.allclose(pl.mr_matrix(K4).row, (-1 / 18, -11 / 36, -11 / 36), atol=1e-15)


def test_mr_inverse_and_sum(sweep_point):
    p = sweep_point
    ref = dense_chain(p)
    MR = pl.mr_matrix(p).dense()
    GRinv = pl.reduced_green_inverse(p).dense()
    assert np.abs(MR @ (GRinv + ref["P"]) - np.eye(p.m)).max() <= 1e-10
    assert np.abs(MR - ref["MR"]).max() <= 1e-10
    assert sum(pl.mr_matrix(p).row) == pytest.approx(-p.d * (p.m**2 - 1) / (12 * p.c), abs=1e-10)


def test_f_values():
    assert np.allclose(pl.f_coeffs(K4), (0.5, -0.25, -0.25), atol=1e-15)


def test_f_family(sweep_point):
    p = sweep_point
    F = pl.induced_f(p)
    assert abs(pl.f_coeffs(p).sum()) <= 1e-10
    assert np.abs(F @ np.ones(p.n)).max() <= 1e-10
    assert np.abs(F - dense_chain(p)["F"]).max() <= 1e-10


# ---- block families

def test_h_first_entry_three_spokes():
    assert pl.h_entry(K4, 1, 1) == pytest.approx(1 / 6, abs=1e-15)


def test_h_family(sweep_point):
    p = sweep_point
    H = pl.induced_h(p)
    assert pl.h_first_columns(p).shape == (p.m, p.d)
    assert np.abs(H - dense_chain(p)["H"]).max() <= 1e-10
    assert np.abs(H @ np.ones(p.n)).max() <= 1e-10


def test_h_operator_matters():
    p = WheelParams(4, 2, 1.0, 1.0)
    ref = dense_chain(p)["H"]
    assert pl.h_entry(p, 2, 2) == pytest.approx(ref[1, 2], abs=1e-12)
    assert abs(pl.h_entry(p, 2, 2, op="+") - ref[1, 2]) > 1e-3


def test_k_family(sweep_point):
    p = sweep_point
    K = pl.induced_k(p)
    assert np.abs(K - dense_chain(p)["K"]).max() <= 1e-10
    assert np.abs(K - K.T).max() <= 1e-10


def test_m_family(sweep_point):
    p = sweep_point
    M = pl.induced_m(p)
    ref = dense_chain(p)
    assert np.abs(M - ref["M"]).max() <= 1e-10
    assert np.abs(M - (ref["G"] - pl.induced_k(p))).max() <= 1e-10
    assert np.abs(M - M.T).max() <= 1e-10
    assert np.abs(M @ np.ones(p.n)).max() <= 1e-10


def test_m_is_schur_complement_inverse(sweep_point):
    # group inverse of L + D - s s^T / alpha, computed without the chain
    p = sweep_point
    L = build_laplacian(p)
    n = p.n
    schur = L[:n, :n] - np.outer(L[:n, n], L[n, :n]) / L[n, n]
    assert np.abs(pl.induced_m(p) - dense_group_inverse(schur)).max() <= 1e-10


def test_m_entry_small_wheel():
    ref = dense_chain(W22)["M"]
    assert pl.m_block_entry(W22, 1, 1, 0) == pytest.approx(ref[0, 0], abs=1e-12)
    for k in (1, 2):
        for i in (1, 2):
            for h in (0, 1):
                assert pl.k_block_entry(W22, k, i, h) == pytest.approx(
                    dense_chain(W22)["K"][i - 1, (k - 1) * 2 + h], abs=1e-12)


def test_gs_vector(sweep_point):
    p = sweep_point
    ref = dense_chain(p)
    s = pl.spoke_vector(p)
    Gs = ref["G"] @ s
    full = np.tile(pl.gs_vector(p), p.m)
    assert np.abs(full - Gs).max() <= 1e-10
    assert np.abs(ref["F"] @ Gs).max() <= 1e-10
    assert np.abs(pl.induced_m(p) @ s - Gs).max() <= 1e-10


def test_gs_vanishes_for_k4():
    assert pl.gs_vector(K4)[0] == pytest.approx(0.0, abs=1e-15)


def test_block_toeplitz_closure(sweep_point):
    p = sweep_point
    m, d = p.m, p.d
    ref = dense_chain(p)
    for name, A in (("F", pl.induced_f(p)), ("H", pl.induced_h(p)),
                    ("K", pl.induced_k(p)), ("M", pl.induced_m(p))):
        B = ref[name]
        for r in range(m):
            for s in range(m):
                r2, s2 = (r + 1) % m, (s + 1) % m
                blk = np.s_[r * d:(r + 1) * d, s * d:(s + 1) * d]
                nxt = np.s_[r2 * d:(r2 + 1) * d, s2 * d:(s2 + 1) * d]
                assert np.array_equal(A[blk], A[nxt])
                assert np.abs(B[blk] - B[nxt]).max() <= 1e-10, name


def test_dipole_gram():
    P = pl.dipole_gram(W22)
    want = np.zeros((4, 4))
    want[np.ix_([0, 2], [0, 2])] = [[0.5, -0.5], [-0.5, 0.5]]
    assert np.allclose(P, want)


@pytest.mark.parametrize("args", [(0, 1, 0), (1, 0, 0), (1, 1, 2), (3, 1, 0)])
def test_block_index_domain(args):
    with pytest.raises(DomainError):
        pl.m_block_entry(W22, *args)


def test_join():
    assert pl.join("*", 2, 3) == 6
    assert pl.join("+", 2, 3) == 5
    assert pl.join("-", 2, 3) == -1
    with pytest.raises(DomainError):
        pl.join("/", 2, 3)


# ---- assembly

def test_assembly_k4():
    A = pl.assemble_group_inverse(K4)
    assert np.allclose(A, 0.25 * (np.eye(4) - 0.25), atol=1e-14)


def test_assembly_small_wheel_hub():
    assert pl.assemble_group_inverse(W22)[4, 4] == pytest.approx(9 / 25, abs=1e-14)


def test_assembly_axioms(sweep_point):
    A = pl.assemble_group_inverse(sweep_point)
    res = group_inverse_residuals(build_laplacian(sweep_point), A)
    assert max(res.values()) <= 1e-9
    assert np.abs(A - A.T).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(
    m=st.integers(2, 9),
    d=st.integers(1, 6),
    a=st.floats(0.05, 20),
    c=st.floats(0.05, 20),
)
def test_assembly_random_params(m, d, a, c):
    p = WheelParams(m, d, a, c)
    A = pl.assemble_group_inverse(p)
    X = dense_group_inverse(build_laplacian(p))
    scale = np.abs(X).max()
    assert np.abs(A - X).max() <= 1e-8 * max(scale, 1.0)


def test_assembly_overflow():
    with pytest.raises(ChebyshevOverflowError):
        pl.assemble_group_inverse(WheelParams(150, 2, 1e6, 1e-6))
