import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fside.linalg import (
    IllConditionedWarning,
    SingularMatrixError,
    condition_estimate,
    kron,
    matmul,
    matvec,
    solve_linear,
    transpose,
)


def hilbert(n):
    i = np.arange(n)
    return 1.0 / (i[:, None] + i[None, :] + 1)


def test_kron_identities():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    b = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(kron([[2.0]], b), 2 * b)


def test_kron_block_definition():
    a = np.eye(2)
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    k = kron(a, b)
    assert k.shape == (4, 4)
    for i in range(2):
        for j in range(2):
            np.testing.assert_array_equal(k[2 * i : 2 * i + 2, 2 * j : 2 * j + 2], a[i, j] * b)


def test_kron_shape_and_blocks_rectangular(rng):
    a, b = rng.normal(size=(2, 3)), rng.normal(size=(4, 5))
    k = kron(a, b)
    assert k.shape == (8, 15)
    np.testing.assert_allclose(k[4:8, 10:15], a[1, 2] * b)


def test_kron_associative(rng):
    a, b, c = rng.normal(size=(2, 3)), rng.normal(size=(3, 2)), rng.normal(size=(2, 2))
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_kron_rejects_nonfinite():
    with pytest.raises(ValueError):
        kron([[np.nan]], [[1.0]])


def test_solve_identity_and_diagonal():
    b = np.array([3.0, -1.0, 2.0])
    np.testing.assert_array_equal(solve_linear(np.eye(3), b), b)
    np.testing.assert_allclose(solve_linear([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])


def test_solve_hilbert4():
    h = hilbert(4)
    np.testing.assert_allclose(solve_linear(h, h @ np.ones(4)), np.ones(4), atol=1e-7)


def test_solve_needs_pivoting():
    a = np.array([[0.0, 1.0], [1.0, 1.0]])
    np.testing.assert_allclose(solve_linear(a, [1.0, 2.0]), [1.0, 1.0])


def test_singular_matrix_reports_column():
    a = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]])
    with pytest.raises(SingularMatrixError) as info, pytest.warns(IllConditionedWarning):
        solve_linear(a, np.ones(3))
    assert info.value.column == 1


def test_ill_conditioned_warning():
    with pytest.warns(IllConditionedWarning):
        solve_linear(hilbert(9), np.ones(9))


def test_warning_can_be_disabled():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        solve_linear(hilbert(9), np.ones(9), warn=False)


def test_solve_dimension_errors():
    with pytest.raises(ValueError):
        solve_linear(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        solve_linear(np.eye(2), np.ones(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_solve_residual_property(seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(10, 10)) + 10 * np.eye(10)
    b = r.normal(size=10) * 10 ** r.uniform(-3, 3)
    x = solve_linear(a, b)
    assert np.max(np.abs(a @ x - b)) <= 1e-10 * (1 + np.max(np.abs(b)))


def test_matmul_matches_triple_loop(rng):
    a, b = rng.normal(size=(8, 8)), rng.normal(size=(8, 8))
    ref = np.zeros((8, 8))
    for i in range(8):
        for j in range(8):
            for k in range(8):
                ref[i, j] += a[i, k] * b[k, j]
    np.testing.assert_allclose(matmul(a, b), ref, atol=1e-12)


def test_plumbing_identities(rng):
    a = rng.normal(size=(3, 4))
    v = rng.normal(size=4)
    np.testing.assert_array_equal(matvec(np.eye(4), v), v)
    np.testing.assert_array_equal(transpose(transpose(a)), a)
    np.testing.assert_array_equal(matmul(a, np.eye(4)), a)
    with pytest.raises(ValueError):
        matmul(a, a)
    with pytest.raises(ValueError):
        matvec(a, np.ones(3))


def test_condition_estimate_of_identity():
    assert condition_estimate(np.eye(5)) == pytest.approx(1.0)
