import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from helson import catalog
from helson.matrix import build_truncation
from helson.spectral import SpectralError, eig_sym, jacobi_eigh, lambda_max, matrix_functionals


def test_diagonal_example():
    rep = eig_sym([[2.0, 0.0], [0.0, 1.0]])
    assert rep.eigenvalues == [2.0, 1.0]
    assert rep.trace == 3.0


def test_swap_example():
    rep = eig_sym([[0.0, 1.0], [1.0, 0.0]], want_vectors=True)
    assert rep.eigenvalues == pytest.approx([1.0, -1.0], abs=1e-15)
    assert rep.trace_norm_lower == pytest.approx(2.0)
    v = rep.eigenvectors[:, 0]
    assert abs(v[0]) == pytest.approx(abs(v[1]))


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        eig_sym([[1.0, 2.0], [0.0, 1.0]])


def test_report_json():
    rep = eig_sym(np.eye(3))
    doc = rep.to_json()
    assert set(doc) == {"eigenvalues", "trace", "hs_norm", "trace_norm_lower", "max_residual"}
    assert doc["hs_norm"] == pytest.approx(math.sqrt(3))


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(-5, 5)))
def test_reconstruction_and_jacobi_agree(M):
    A = (M + M.T) / 2
    rep = eig_sym(A, want_vectors=True)
    w = np.array(rep.eigenvalues)
    V = rep.eigenvectors
    scale = max(1.0, float(np.abs(A).max()))
    assert np.allclose(V @ np.diag(w) @ V.T, A, atol=1e-11 * scale)
    assert np.allclose(V.T @ V, np.eye(6), atol=1e-12)
    wj, _ = jacobi_eigh(A)
    assert np.allclose(wj, w, atol=1e-11 * scale)
    assert np.all(np.diff(w) <= 0)


def test_jacobi_on_helson_section():
    H = build_truncation(catalog.exponential(1.0), 24)
    wj, Vj = jacobi_eigh(H.entries)
    rep = eig_sym(H)
    assert np.allclose(wj, rep.eigenvalues, atol=1e-13)
    assert np.allclose(H.entries @ Vj, Vj * wj, atol=1e-12)


def test_residuals_small():
    H = build_truncation(catalog.lebesgue(), 300)
    rep = eig_sym(H)
    assert rep.max_residual <= 1e-12
    assert rep.trace == pytest.approx(math.fsum(H.diagonal))


def test_lambda_max_matches_full_spectrum():
    H = build_truncation(catalog.lebesgue(), 256)
    lm = lambda_max(H, tol=1e-12)
    assert lm == pytest.approx(eig_sym(H).eigenvalues[0], abs=1e-10)
    assert lm == pytest.approx(1.1338, abs=1e-4)


def test_lambda_max_zero_and_stall():
    assert lambda_max(np.zeros((3, 3))) == 0.0
    with pytest.raises(SpectralError):
        lambda_max(np.array([[0.0, 1.0], [1.0, 0.0]]), tol=1e-14, max_iter=50)


def test_lambda_max_grows_with_N():
    vals = [lambda_max(build_truncation(catalog.lebesgue(), N)) for N in (64, 256, 1024)]
    assert vals[0] < vals[1] < vals[2] < math.pi


def test_functionals():
    f = matrix_functionals(np.diag([1.0, -2.0]))
    assert (f.trace, f.trace_norm_lower) == (-1.0, 3.0)
    assert f.hs_norm == pytest.approx(math.sqrt(5))


def test_point_mass_section_rank_one():
    H = build_truncation(catalog.point_mass(0.5), 100)
    rep = eig_sym(H)
    m = np.arange(2, 102, dtype=float)
    assert rep.eigenvalues[0] == pytest.approx(math.fsum(m ** -2.0), rel=1e-13)
    assert max(abs(v) for v in rep.eigenvalues[1:]) <= 1e-10


def test_lambda_max_rank_one_and_identity():
    a = np.linspace(0.1, 1.0, 7)
    assert lambda_max(np.outer(a, a)) == pytest.approx(a @ a, rel=1e-12)
    assert lambda_max(np.eye(3)) == pytest.approx(1.0, rel=1e-14)
