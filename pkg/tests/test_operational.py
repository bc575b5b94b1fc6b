from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import integrate

from fside.legendre import BasisSpec, eval_basis, eval_basis_vector, monomial_coefficients, project
from fside.operational import (
    antiderivative_matrix,
    caputo_matrix,
    derivative_matrix,
    integration_matrix_1d,
    integration_stencil,
    q3_matrix,
    q4_matrix,
    w_matrix,
)
from fside.special import caputo_monomial, gamma

GRID = np.linspace(0.0, 1.0, 50)


def antiderivative_values(spec, i, x):
    """``integral_a^x P_i`` from the exact power form."""
    u = (np.asarray(x) - spec.a) / spec.length
    c = monomial_coefficients(i)
    return spec.length * sum(float(Fraction(ck, k + 1)) * u ** (k + 1) for k, ck in enumerate(c))


def derivative_values(spec, i, x, order=1):
    u = (np.asarray(x) - spec.a) / spec.length
    c = np.polynomial.Polynomial([float(v) for v in monomial_coefficients(i)])
    return c.deriv(order)(u) / spec.length**order if i >= order else np.zeros_like(u)


def caputo_oracle(m, alpha):
    """Entry (i, j): (2j+1) * int_0^1 D^alpha P_i P_j dt, summed termwise in high precision."""
    out = np.zeros((m + 1, m + 1))
    with mpmath.workdps(50):
        a = mpmath.mpf(alpha)
        for i in range(m + 1):
            ci = monomial_coefficients(i)
            for j in range(m + 1):
                cj = monomial_coefficients(j)
                total = mpmath.mpf(0)
                for k, c in enumerate(ci):
                    if k < np.ceil(alpha) or c == 0:
                        continue
                    coef = mpmath.gamma(k + 1) / mpmath.gamma(k + 1 - a)
                    total += c * coef * sum(d / (k - a + l + 1) for l, d in enumerate(cj))
                out[i, j] = float((2 * j + 1) * total)
    return out


@pytest.mark.parametrize("m", [1, 4, 10])
@pytest.mark.parametrize("interval", [(0.0, 1.0), (-1.0, 2.0)])
def test_derivative_identity(m, interval):
    spec = BasisSpec(*interval, m)
    x = np.linspace(*interval, 50)
    lam = derivative_matrix(spec).data
    for i in range(m + 1):
        np.testing.assert_allclose(lam[i] @ eval_basis_vector(spec, x), derivative_values(spec, i, x), atol=1e-9)


def test_derivative_rows_on_unit_interval():
    lam = derivative_matrix(BasisSpec(0.0, 1.0, 6)).data
    np.testing.assert_array_equal(lam[0], 0)
    np.testing.assert_array_equal(lam[1], [2, 0, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(lam[2], [0, 6, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(lam[5], [2, 0, 10, 0, 18, 0, 0])


def test_second_derivative_is_square():
    spec = BasisSpec(0.0, 1.0, 8)
    lam2 = derivative_matrix(spec).data @ derivative_matrix(spec).data
    psi = eval_basis_vector(spec, GRID)
    for i in range(9):
        np.testing.assert_allclose(lam2[i] @ psi, derivative_values(spec, i, GRID, 2), atol=1e-8)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.5])
def test_caputo_matrix_matches_termwise_oracle(alpha):
    np.testing.assert_allclose(caputo_matrix(BasisSpec(0.0, 1.0, 8), alpha).data, caputo_oracle(8, alpha), rtol=1e-12, atol=1e-10)


def test_caputo_order_one_is_derivative_matrix():
    spec = BasisSpec(0.0, 1.0, 10)
    np.testing.assert_allclose(caputo_matrix(spec, 1.0).data, derivative_matrix(spec).data, atol=1e-8)


def test_caputo_zero_rows():
    d = caputo_matrix(BasisSpec(0.0, 1.0, 6), 0.75).data
    np.testing.assert_array_equal(d[0], 0)
    assert np.any(d[1] != 0)
    d = caputo_matrix(BasisSpec(0.0, 1.0, 6), 1.5).data
    np.testing.assert_array_equal(d[:2], 0)


def test_caputo_annihilates_constants():
    spec = BasisSpec(0.0, 1.0, 8)
    one = project(spec, lambda t: np.ones_like(t)).coeffs
    values = one @ caputo_matrix(spec, 0.6).data @ eval_basis_vector(spec, GRID)
    assert np.max(np.abs(values)) <= 1e-8


def test_caputo_interval_scaling():
    # on [0, L]: D^a P_i(t) = L^-a (D^a Q_i)(t / L) with Q_i on [0, 1]
    d1 = caputo_matrix(BasisSpec(0.0, 1.0, 5), 0.4).data
    d2 = caputo_matrix(BasisSpec(0.0, 2.5, 5), 0.4).data
    np.testing.assert_allclose(d2, d1 * 2.5**-0.4, rtol=1e-14)


def test_caputo_rejects_bad_arguments():
    with pytest.raises(ValueError):
        caputo_matrix(BasisSpec(0.0, 1.0, 4), 0.0)
    with pytest.raises(ValueError):
        caputo_matrix(BasisSpec(0.5, 1.0, 4), 0.5)


def test_caputo_matrix_is_immutable():
    d = caputo_matrix(BasisSpec(0.0, 1.0, 4), 0.5)
    with pytest.raises(ValueError):
        d.data[1, 1] = 0.0


def caputo_grid_error(m, alpha, power):
    spec = BasisSpec(0.0, 1.0, m)
    c = project(spec, lambda t: t**power).coeffs
    approx = c @ caputo_matrix(spec, alpha).data @ eval_basis_vector(spec, GRID)
    coef, expo = caputo_monomial(power, alpha)
    return np.max(np.abs(approx - coef * GRID**expo))


@pytest.mark.parametrize("power", [1, 3])
def test_caputo_error_non_increasing_in_m(power):
    errors = [caputo_grid_error(m, 0.75, power) for m in (4, 6, 8, 10)]
    assert all(b <= a for a, b in zip(errors, errors[1:]))


def test_caputo_of_t_cubed_accuracy():
    assert caputo_grid_error(10, 0.75, 3) <= 1e-3


def test_caputo_half_of_t_decreases():
    # the projected D^0.5 t = t^0.5 / Gamma(1.5) has a square-root cusp at 0,
    # so the sup error decays slowly (0.087, 0.075, 0.063, 0.057 at m = 4..10)
    errors = [caputo_grid_error(m, 0.5, 1) for m in (4, 6, 8, 10)]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    assert errors[2] == pytest.approx(0.0632, abs=5e-4)
    inner = GRID > 0.2
    spec = BasisSpec(0.0, 1.0, 8)
    approx = np.array([0.5, 0.5] + [0] * 7) @ caputo_matrix(spec, 0.5).data @ eval_basis_vector(spec, GRID)
    assert np.max(np.abs(approx - GRID**0.5 / gamma(1.5))[inner]) < 1e-2


def test_integration_rows():
    p = integration_matrix_1d(BasisSpec(0.0, 1.0, 5)).data
    np.testing.assert_allclose(p[0], [0.5, 0.5, 0, 0, 0, 0])
    np.testing.assert_allclose(p[1], [-1 / 6, 0, 1 / 6, 0, 0, 0])
    for i in range(1, 5):
        assert p[i, i - 1] == pytest.approx(-1 / (2 * (2 * i + 1)))
        assert p[i, i + 1] == pytest.approx(1 / (2 * (2 * i + 1)))
    # last row keeps only the lower neighbour
    assert np.count_nonzero(p[5]) == 1


@pytest.mark.parametrize("interval", [(0.0, 1.0), (-1.0, 3.0)])
def test_integration_identity(interval):
    spec = BasisSpec(*interval, 10)
    x = np.linspace(*interval, 50)
    p = integration_matrix_1d(spec).data
    psi = eval_basis_vector(spec, x)
    for i in range(10):
        np.testing.assert_allclose(p[i] @ psi, antiderivative_values(spec, i, x), atol=1e-8)


def test_integration_against_quadrature_oracle():
    spec = BasisSpec(0.0, 1.0, 6)
    p = integration_matrix_1d(spec).data
    for x in (0.13, 0.5, 0.91):
        for i in range(6):
            ref = integrate.quad(lambda s: eval_basis(spec, i, s), 0, x)[0]
            assert p[i] @ eval_basis_vector(spec, x) == pytest.approx(ref, abs=1e-12)


def test_antiderivative_matrix_exact_for_all_rows():
    spec = BasisSpec(0.0, 2.0, 6)
    anti = antiderivative_matrix(spec)
    x = np.linspace(0, 2, 50)
    psi = eval_basis_vector(spec.with_degree(7), x)
    for i in range(7):
        np.testing.assert_allclose(anti[i] @ psi, antiderivative_values(spec, i, x), atol=1e-9)


def test_integration_applied_twice():
    spec = BasisSpec(0.0, 1.0, 8)
    p = integration_matrix_1d(spec).data
    c = np.zeros(9)
    c[0] = 1.0
    twice = p.T @ (p.T @ c)
    np.testing.assert_allclose(twice @ eval_basis_vector(spec, GRID), GRID**2 / 2, atol=1e-12)


def test_stencil_shape():
    assert integration_stencil(0).shape == (1, 1)
    assert integration_stencil(3)[0, 1] == 1.0


def two_d(spec, x, t):
    return np.kron(eval_basis_vector(spec, x), eval_basis_vector(spec, t))


def test_q3_identity_on_grid(rng):
    spec = BasisSpec(0.0, 1.0, 5)
    q3 = q3_matrix(spec, spec).data
    assert q3.shape == (36, 36)
    for x, t in rng.uniform(0, 1, (10, 2)):
        lhs = q3 @ two_d(spec, x, t)
        for r in range(5):
            for s in range(6):
                ref = antiderivative_values(spec, r, x) * eval_basis(spec, s, t)
                assert lhs[r * 6 + s] == pytest.approx(ref, abs=1e-8)


def test_q4_identity_on_grid(rng):
    spec = BasisSpec(0.0, 1.0, 5)
    q4 = q4_matrix(spec, spec).data
    for x, t in rng.uniform(0, 1, (10, 2)):
        lhs = q4 @ two_d(spec, x, t)
        for r in range(6):
            for s in range(5):
                ref = eval_basis(spec, r, x) * antiderivative_values(spec, s, t)
                assert lhs[r * 6 + s] == pytest.approx(ref, abs=1e-8)


def test_q3_on_constant_and_p1():
    spec = BasisSpec(0.0, 1.0, 4)
    q3 = q3_matrix(spec, spec).data
    one = np.zeros(25)
    one[0] = 1.0
    x, t = 0.3, 0.8
    assert (q3.T @ one) @ two_d(spec, x, t) == pytest.approx(x)
    p1 = np.zeros(25)
    p1[5] = 1.0  # P_1(x) P_0(t)
    expected = np.zeros(25)
    expected[10], expected[0] = 1 / 6, -1 / 6
    np.testing.assert_allclose(q3.T @ p1, expected, atol=1e-15)


def test_w_double_integral_of_one():
    spec = BasisSpec(0.0, 1.0, 4)
    w = w_matrix(spec, spec).data
    one = np.zeros(25)
    one[0] = 1.0
    for s, z in [(0.2, 0.7), (1.0, 1.0), (0.5, 0.1)]:
        assert (w.T @ one) @ two_d(spec, s, z) == pytest.approx(s * z)


def test_w_is_product_of_partial_integrations():
    spec = BasisSpec(0.0, 1.0, 3)
    w = w_matrix(spec, spec).data
    np.testing.assert_allclose(w, q3_matrix(spec, spec).data @ q4_matrix(spec, spec).data, atol=1e-15)


def test_two_d_operators_need_equal_degrees():
    with pytest.raises(ValueError):
        q3_matrix(BasisSpec(0, 1, 3), BasisSpec(0, 1, 4))


def test_caputo_cache_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    spec = BasisSpec(0.0, 1.0, 9)
    with ThreadPoolExecutor(8) as pool:
        results = list(pool.map(lambda a: caputo_matrix(spec, a).data, [0.33, 0.66] * 8))
    for k, r in enumerate(results):
        np.testing.assert_array_equal(r, results[k % 2])
