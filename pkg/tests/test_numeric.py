import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from quatloops.numeric import (ConvergenceError, ShapeError, blocks, charpoly_residual, dagger, eig, hessenberg,
                               identity, mat_mul, singular_values, svd)

from conftest import random_complex


def test_mat_mul_matches_numpy(rng):
    a = random_complex(rng, 5)
    b = random_complex(rng, 5)
    np.testing.assert_allclose(mat_mul(a, b), a @ b, atol=1e-12)


def test_mat_mul_rejects_mismatch():
    with pytest.raises(ShapeError):
        mat_mul(np.eye(3), np.eye(4))


def test_dagger_and_identity():
    a = np.array([[1, 2j], [3, 4 - 1j]])
    np.testing.assert_array_equal(dagger(a), a.conj().T)
    np.testing.assert_array_equal(identity(3), np.eye(3))


def test_blocks_layout():
    a, b, c, d = (np.full((2, 2), v) for v in (1, 2, 3, 4))
    m = blocks(a, b, c, d)
    assert m.shape == (4, 4)
    assert m[0, 3] == 2 and m[3, 0] == 3 and m[3, 3] == 4


def test_eig_diagonal_and_triangular():
    np.testing.assert_allclose(np.sort_complex(eig(np.diag([3, -1, 2]))), [-1, 2, 3], atol=1e-12)
    t = np.triu(np.arange(1, 17).reshape(4, 4)).astype(complex)
    np.testing.assert_allclose(np.sort(eig(t).real), [1, 6, 11, 16], atol=1e-10)


def test_eig_sorted_by_decreasing_modulus(rng):
    v = eig(random_complex(rng, 6))
    assert np.all(np.diff(np.abs(v)) <= 1e-12)


def test_eig_rotation_pair():
    v = eig(np.array([[0, -1], [1, 0]]))
    np.testing.assert_allclose(np.sort_complex(v), [-1j, 1j], atol=1e-12)


def test_eig_against_numpy(rng):
    for n in (2, 4, 8, 16):
        a = random_complex(rng, n)
        ours = np.sort_complex(eig(a))
        ref = np.sort_complex(np.linalg.eigvals(a))
        np.testing.assert_allclose(ours, ref, atol=1e-8 * np.linalg.norm(a))


def test_eig_rejects_bad_input():
    with pytest.raises(ShapeError):
        eig(np.ones((2, 3)))
    with pytest.raises(ShapeError):
        eig(np.eye(17))
    with pytest.raises(ValueError):
        eig(np.array([[np.nan, 0], [0, 1]]))


def test_eig_iteration_cap():
    a = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    with pytest.raises(ConvergenceError):
        eig(a + 1e-3 * np.arange(9).reshape(3, 3), max_iter=0)


def test_hessenberg_preserves_spectrum(rng):
    a = random_complex(rng, 6)
    h = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(h)), np.sort_complex(np.linalg.eigvals(a)),
                               atol=1e-9)


def test_charpoly_residual_at_eigenvalues(rng):
    a = random_complex(rng, 4)
    for lam in eig(a):
        assert charpoly_residual(a, lam) <= 1e-8 * np.linalg.norm(a) ** 4


def test_svd_reconstruction_and_unitarity(rng):
    for n in (1, 3, 4, 8):
        a = random_complex(rng, n)
        u, s, v = svd(a)
        np.testing.assert_allclose(u @ np.diag(s) @ v.conj().T, a, atol=1e-10 * np.linalg.norm(a))
        np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-10)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)


def test_svd_rank_deficient():
    a = np.outer([1, 2j, 0, 1], [1, 0, 1, 1j])
    u, s, v = svd(a)
    assert np.count_nonzero(s > 1e-12) == 1
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(u @ np.diag(s) @ v.conj().T, a, atol=1e-12)


def test_singular_values_of_zero():
    np.testing.assert_array_equal(singular_values(np.zeros((4, 4))), np.zeros(4))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=st.floats(-10, 10)))
def test_singular_values_match_numpy(x):
    a = x[0] + 1j * x[1]
    np.testing.assert_allclose(singular_values(a), np.linalg.svd(a, compute_uv=False),
                               atol=1e-9 * max(1.0, np.linalg.norm(a)))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=st.floats(-10, 10)))
def test_eig_trace_and_determinant(x):
    a = x[0] + 1j * x[1]
    v = eig(a)
    scale = max(1.0, np.linalg.norm(a))
    assert abs(v.sum() - np.trace(a)) <= 1e-9 * scale
    assert abs(np.prod(v) - np.linalg.det(a)) <= 1e-8 * scale ** 4


def test_mat_mul_associative_and_distributive(rng):
    a, b, c = (random_complex(rng, 8) for _ in range(3))
    lhs, rhs = mat_mul(mat_mul(a, b), c), mat_mul(a, mat_mul(b, c))
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(lhs)
    np.testing.assert_allclose(mat_mul(a, b + c), mat_mul(a, b) + mat_mul(a, c), atol=1e-12)
    np.testing.assert_allclose(dagger(mat_mul(a, b)), mat_mul(dagger(b), dagger(a)), atol=1e-12)


def test_eig_similarity_invariance(rng):
    a = random_complex(rng, 6)
    p = random_complex(rng, 6) + 6 * np.eye(6)
    b = p @ a @ np.linalg.inv(p)
    np.testing.assert_allclose(np.sort_complex(eig(b)), np.sort_complex(eig(a)), atol=1e-8 * np.linalg.norm(a))


def test_svd_small_cases():
    np.testing.assert_allclose(singular_values(np.diag([3, -2])), [3, 2])
    with pytest.raises(ValueError):
        svd(np.array([[np.inf, 0], [0, 1]]))


def test_eig_tiny_scale():
    np.testing.assert_allclose(eig(np.diag([1e-300, 2e-300])), [2e-300, 1e-300], rtol=1e-14, atol=0)
    np.testing.assert_array_equal(eig(np.zeros((3, 3))), np.zeros(3))
    v = eig(np.diag([1e200, -1e200, 1e-200]))
    assert abs(v[0]) == 1e200 and abs(v[-1]) < 1e-100
