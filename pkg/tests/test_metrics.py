import itertools

import numpy as np
import pytest

from wheelgreen import metrics
from wheelgreen.errors import DomainError
from wheelgreen.oracle import dense_group_inverse
from wheelgreen.pipeline import assemble_group_inverse
from wheelgreen.wheel import WheelParams, build_laplacian

from conftest import K4, W22


def test_k4_resistances():
    G = assemble_group_inverse(K4)
    for i, j in itertools.combinations(range(4), 2):
        assert metrics.effective_resistance(G, i, j) == pytest.approx(0.5, abs=1e-14)
        assert metrics.resistance_closed(K4, i, j) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("i, j, want", [(0, 2, 2 / 3), (1, 4, 1.0), (1, 3, 1.0), (2, 2, 0.0)])
def test_small_wheel_resistances(i, j, want):
    G = assemble_group_inverse(W22)
    assert metrics.effective_resistance(G, i, j) == pytest.approx(want, abs=1e-14)
    assert metrics.resistance_closed(W22, i, j) == pytest.approx(want, abs=1e-12)


def test_spectrum_of_small_wheel():
    # independent of every Green-matrix route
    ev = np.linalg.eigvalsh(build_laplacian(W22))
    assert np.allclose(ev, [0, 2, 2, 3, 5], atol=1e-12)
    assert 5 * sum(1 / x for x in ev[1:]) == pytest.approx(23 / 3, abs=1e-12)


def test_kirchhoff_values():
    assert metrics.kirchhoff_green(assemble_group_inverse(K4)) == pytest.approx(3, abs=1e-13)
    assert metrics.kirchhoff_green(assemble_group_inverse(W22)) == pytest.approx(23 / 3, abs=1e-13)
    assert metrics.kirchhoff_closed(K4) == pytest.approx(3, abs=1e-12)
    assert metrics.kirchhoff_closed(W22) == pytest.approx(23 / 3, abs=1e-12)


def test_printed_kirchhoff_tail():
    assert metrics.kirchhoff_closed(W22, final="printed") == pytest.approx(25 / 3, abs=1e-12)
    for m in (3, 4, 5):
        p = WheelParams(m, 1, 1.3, 0.7)
        assert metrics.kirchhoff_closed(p, "printed") == metrics.kirchhoff_closed(p, "corrected")


@pytest.mark.parametrize("p", [WheelParams(3, 1, 1, 1), WheelParams(4, 1, 1, 1), WheelParams(5, 1, 2, 0.5)])
def test_complete_wheel(p):
    want = metrics.kirchhoff_green(dense_group_inverse(build_laplacian(p)))
    assert metrics.kirchhoff_wheel(p) == pytest.approx(want, abs=1e-9)


def test_complete_wheel_k4_value():
    assert metrics.kirchhoff_wheel(K4) == pytest.approx(3, abs=1e-12)
    with pytest.raises(DomainError):
        metrics.kirchhoff_wheel(W22)


def test_closed_forms_on_sweep(sweep_point):
    p = sweep_point
    R = metrics.resistance_matrix(assemble_group_inverse(p))
    N = p.n + 1
    closed = np.array([[metrics.resistance_closed(p, i, j) for j in range(N)] for i in range(N)])
    assert np.abs(closed - R).max() <= 1e-9
    assert metrics.kirchhoff_closed(p) == pytest.approx(0.5 * R.sum(), abs=1e-9)


def test_metric_properties(sweep_point):
    p = sweep_point
    G = assemble_group_inverse(p)
    R = metrics.resistance_matrix(G)
    N = p.n + 1
    assert R.min() >= 0
    assert np.array_equal(R, R.T)
    assert np.all(np.diag(R) == 0)
    off = R + np.eye(N)
    assert off.min() > 0
    # R[i, k] <= R[i, j] + R[j, k] for every triple (i, j, k)
    assert (R[:, None, :] - R[:, :, None] - R[None, :, :]).max() <= 1e-9
    assert metrics.kirchhoff_green(G) == pytest.approx(0.5 * R.sum(), abs=1e-9)


def test_rotation_invariance(sweep_point):
    p = sweep_point
    R = metrics.resistance_matrix(assemble_group_inverse(p))
    n = p.n
    perm = np.append((np.arange(n) + p.d) % n, n)
    assert np.abs(R[np.ix_(perm, perm)] - R).max() <= 1e-10


def test_hub_series_bound(sweep_point):
    p = sweep_point
    R = metrics.resistance_matrix(assemble_group_inverse(p))
    spokes = np.arange(0, p.n, p.d)
    for i in range(p.n):
        assert R[i, p.n] <= 1 / p.a + R[i, spokes].min() + 1e-9


def test_oracle_resistances_agree(sweep_point):
    p = sweep_point
    R1 = metrics.resistance_matrix(assemble_group_inverse(p))
    R2 = metrics.resistance_matrix(dense_group_inverse(build_laplacian(p)))
    assert np.abs(R1 - R2).max() <= 1e-9


def test_index_errors():
    G = assemble_group_inverse(W22)
    with pytest.raises(IndexError):
        metrics.effective_resistance(G, 0, 5)
    with pytest.raises(IndexError):
        metrics.resistance_closed(W22, -1, 2)
    with pytest.raises(DomainError):
        metrics.effective_resistance(np.ones((2, 3)), 0, 1)
