import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympolar.matcore import (
    NotPositiveDefiniteError,
    NotSymmetricError,
    as_posdef,
    block_inverse,
    block_split,
    loewner_leq,
    mat_inv_sqrt,
    mat_sqrt,
    schur_complement,
    sym_eigen,
    sym_eigvals,
    symmetrize,
)
from sympolar.symplectic import random_posdef


def gauss_jordan_inverse(a):
    """Textbook Gauss-Jordan elimination with partial pivoting (test oracle)."""
    a = np.array(a, dtype=float)
    d = a.shape[0]
    aug = np.hstack([a, np.eye(d)])
    for col in range(d):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for row in range(d):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, d:]


def test_sym_eigen_diagonal():
    w, v = sym_eigen(np.diag([2.0, 1.0]))
    np.testing.assert_allclose(w, [1.0, 2.0])
    np.testing.assert_allclose(np.abs(v), [[0.0, 1.0], [1.0, 0.0]])


def test_sym_eigen_identity_and_2x2():
    np.testing.assert_allclose(sym_eigvals(np.eye(3)), [1.0, 1.0, 1.0])
    np.testing.assert_allclose(sym_eigvals([[2.0, 1.0], [1.0, 2.0]]), [1.0, 3.0], atol=1e-14)


@pytest.mark.parametrize("d", [1, 2, 5, 8, 12])
def test_sym_eigen_matches_lapack(d):
    rng = np.random.default_rng(d)
    a = rng.normal(size=(d, d))
    a = a + a.T
    w, v = sym_eigen(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-12 * np.linalg.norm(a))
    np.testing.assert_allclose(v.T @ v, np.eye(d), atol=1e-12)
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-10 * np.linalg.norm(a)


def test_sym_eigen_zero_matrix():
    w, v = sym_eigen(np.zeros((3, 3)))
    np.testing.assert_array_equal(w, 0.0)
    np.testing.assert_array_equal(v, np.eye(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_eigen_reconstruction(d, seed):
    a = np.random.default_rng(seed).normal(size=(d, d))
    a = a + a.T
    w, v = sym_eigen(a)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-10 * max(1.0, np.linalg.norm(a))


def test_symmetrize_and_rejection():
    a = np.array([[1.0, 2.0 + 1e-12], [2.0, 1.0]])
    s = symmetrize(a)
    assert s[0, 1] == s[1, 0]
    with pytest.raises(NotSymmetricError):
        symmetrize([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotSymmetricError):
        as_posdef([[1.0, 0.5], [0.0, 1.0]])


def test_as_posdef_rejects():
    with pytest.raises(NotPositiveDefiniteError):
        as_posdef(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefiniteError):
        as_posdef(np.diag([1.0, 1e-14]))
    a = np.eye(2)
    as_posdef(a)[0, 0] = 5.0
    assert a[0, 0] == 1.0


def test_mat_sqrt_examples():
    np.testing.assert_allclose(mat_sqrt(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(mat_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    r = mat_sqrt(a)
    np.testing.assert_allclose(r @ r, a, rtol=1e-13)


@pytest.mark.parametrize("cond", [10.0, 1e3, 1e6])
def test_mat_sqrt_conditioned(cond):
    a = random_posdef(6, 11, cond=cond)
    r = mat_sqrt(a)
    assert np.linalg.norm(r @ r - a) <= 1e-9 * np.linalg.norm(a)
    ri = mat_inv_sqrt(a)
    assert np.linalg.norm(ri @ a @ ri - np.eye(6)) <= 1e-9 * cond


def test_loewner_examples():
    assert loewner_leq(np.eye(2), 2 * np.eye(2))
    assert not loewner_leq(2 * np.eye(2), np.eye(2))
    assert not loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0]))


def test_loewner_reflexive_transitive():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = random_posdef(4, rng)
        b = a + random_posdef(4, rng)
        c = b + random_posdef(4, rng)
        assert loewner_leq(a, a)
        assert loewner_leq(a, b) and loewner_leq(b, c) and loewner_leq(a, c)
        assert not loewner_leq(c, a)


def test_block_split_and_schur():
    m = np.arange(16.0).reshape(4, 4)
    blocks = block_split(m)
    np.testing.assert_array_equal(blocks.xp, m[:2, 2:])
    np.testing.assert_array_equal(blocks.px, m[2:, :2])
    np.testing.assert_allclose(schur_complement(np.eye(4), "PP"), np.eye(2))
    np.testing.assert_allclose(schur_complement([[2.0, 1.0], [1.0, 1.0]], "PP"), [[1.0]])
    np.testing.assert_allclose(schur_complement(np.diag([3.0, 4.0, 5.0, 6.0]), "PP"), np.diag([3.0, 4.0]))
    with pytest.raises(ValueError):
        schur_complement(np.eye(2), "XP")


def test_block_inverse_examples():
    np.testing.assert_allclose(block_inverse(np.eye(4)), np.eye(4))
    np.testing.assert_allclose(block_inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))


def test_block_inverse_against_gauss_jordan():
    rng = np.random.default_rng(17)
    for _ in range(20):
        m = random_posdef(4, rng, cond=100.0)
        expected = gauss_jordan_inverse(m)
        assert np.linalg.norm(block_inverse(m) - expected) <= 1e-9 * np.linalg.norm(expected)


def test_block_inverse_against_eigendecomposition():
    rng = np.random.default_rng(18)
    for d in (2, 4, 6, 8):
        m = random_posdef(d, rng, cond=1e3)
        w, v = sym_eigen(m)
        expected = (v / w) @ v.T
        assert np.linalg.norm(block_inverse(m) - expected) <= 1e-9 * np.linalg.norm(expected)
