import math

import numpy as np
import pytest
from scipy.special import gammaincc

from monoword.errors import BudgetExceededError
from monoword.laguerre import (
    LaguerreKernel,
    laguerre_polynomial,
    normalization_constant,
    phi,
    smallest_eigenvalue_prob_fredholm,
    smallest_eigenvalue_prob_quadrature,
)
from monoword.toeplitz import toeplitz_det


class TestLaguerrePolynomials:
    def test_degree_zero_and_one(self):
        assert laguerre_polynomial(0, 4, 2.3) == 1.0
        assert abs(laguerre_polynomial(1, 4, 2.3) - (5 - 2.3)) < 1e-14

    def test_quadratic(self):
        # L_2^{(0)}(x) = x^2/2 - 2x + 1
        assert abs(laguerre_polynomial(2, 0, 2.0) - (-1.0)) < 1e-14

    def test_against_numpy(self):
        xs = np.linspace(0.1, 12.0, 7)
        for k in range(0, 8):
            for n in range(0, 5):
                coeffs = [0.0] * k + [1.0]
                want = np.polynomial.laguerre.lagval(xs, coeffs) if n == 0 else None
                if n == 0:
                    got = laguerre_polynomial(k, 0, xs)
                    assert np.allclose(got, want, rtol=1e-12), (k, n)

    def test_recurrence_consistency(self):
        # (k+1) L_{k+1} = (2k+n+1-x) L_k - (k+n) L_{k-1}
        x = 3.7
        for n in (0, 2, 5):
            for k in range(1, 7):
                lhs = (k + 1) * laguerre_polynomial(k + 1, n, x)
                rhs = (2 * k + n + 1 - x) * laguerre_polynomial(k, n, x) - (
                    k + n
                ) * laguerre_polynomial(k - 1, n, x)
                assert abs(lhs - rhs) < 1e-10


class TestOrthonormalFunctions:
    def test_orthonormality_by_quadrature(self):
        u, w = np.polynomial.laguerre.laggauss(60)
        for k in range(0, 7):
            for n in range(0, 7):
                v = phi(k, n, u)
                norm = float(np.sum(w * np.exp(u) * v * v))
                assert abs(norm - 1.0) < 1e-8, (k, n)
                if k >= 1:
                    cross = float(np.sum(w * np.exp(u) * v * phi(k - 1, n, u)))
                    assert abs(cross) < 1e-8, (k, n)

    def test_vanishes_at_origin_for_positive_weight(self):
        assert phi(2, 1, 1e-12) < 1e-5
        assert phi(3, 4, 1e-8) < 1e-12


class TestKernel:
    def test_symmetry_and_positivity(self):
        kernel = LaguerreKernel(3, 2)
        xs = np.linspace(0.05, 4.0, 9)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        K = kernel(X, Y)
        assert np.allclose(K, K.T, atol=1e-12)
        assert np.all(kernel.diagonal(xs) > 0)

    def test_diagonal_is_near_diagonal_limit(self):
        kernel = LaguerreKernel(2, 3)
        for x in (0.3, 1.1, 2.7):
            assert abs(kernel(x, x + 1e-9) - kernel.diagonal(x)) < 1e-6

    def test_diagonal_sums_squared_functions(self):
        # Christoffel-Darboux: K(x, x) = sum_{j<k} phi_j(x)^2
        kernel = LaguerreKernel(4, 1)
        for x in (0.2, 1.5, 3.3):
            want = sum(phi(j, 1, x) ** 2 for j in range(4))
            assert abs(kernel.diagonal(x) - want) < 1e-10

    def test_nystrom_psd(self):
        A, _, _ = LaguerreKernel(4, 2).nystrom_matrix(2.5, 40)
        assert np.linalg.eigvalsh(A).min() > -1e-10


class TestFredholmRoute:
    def test_rank_one_closed_forms(self):
        # k = 1: det(I - K) = Gamma(n+1, t)/n!
        for n in range(0, 6):
            for t in (0.1, 0.5, 1.0, 2.0, 5.0):
                got = smallest_eigenvalue_prob_fredholm(1, n, t)
                assert abs(got - float(gammaincc(n + 1, t))) < 1e-10, (n, t)

    def test_t_zero_is_one(self):
        assert smallest_eigenvalue_prob_fredholm(3, 2, 0.0) == 1.0

    def test_monotone_decreasing_in_t(self):
        vals = [
            smallest_eigenvalue_prob_fredholm(3, 2, t)
            for t in (0.1, 0.5, 1.0, 2.0, 4.0)
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_node_doubling_stability(self):
        for (k, n, t) in [(3, 2, 1.0), (4, 3, 2.0), (5, 5, 5.0)]:
            a = smallest_eigenvalue_prob_fredholm(k, n, t, 40)
            b = smallest_eigenvalue_prob_fredholm(k, n, t, 80)
            assert abs(a - b) < 1e-9, (k, n, t)

    def test_matches_normalized_toeplitz(self):
        # matrix size k, weight exponent n: the role swap is exercised by
        # asymmetric (k, n) pairs
        for (k, n) in [(2, 4), (4, 2), (1, 5), (5, 1), (3, 3)]:
            for t in (0.1, 1.0, 5.0):
                fredholm = smallest_eigenvalue_prob_fredholm(k, n, t)
                toeplitz_side = math.exp(-k * t) * toeplitz_det(n, k, t, "I")
                assert abs(fredholm - toeplitz_side) < 1e-6, (k, n, t)

    def test_node_floor(self):
        with pytest.raises(ValueError, match="10"):
            smallest_eigenvalue_prob_fredholm(2, 2, 1.0, m_nodes=5)


class TestQuadratureRoute:
    def test_normalization_constant(self):
        from fractions import Fraction

        assert normalization_constant(1, 0) == 1
        assert normalization_constant(2, 0) == Fraction(1, 2)
        # 1! 2! 3! * (n+0)! (n+1)! (n+2)! for k = 3, n = 2
        assert normalization_constant(3, 2) == Fraction(
            1, 1 * 2 * 6 * 2 * 6 * 24
        )

    def test_full_mass_at_zero(self):
        for (k, n) in [(1, 0), (2, 3), (3, 1)]:
            assert abs(smallest_eigenvalue_prob_quadrature(k, n, 0.0) - 1.0) < 1e-12

    def test_k1_incomplete_gamma(self):
        for n in (0, 1, 4):
            for t in (0.5, 2.0):
                got = smallest_eigenvalue_prob_quadrature(1, n, t)
                assert abs(got - float(gammaincc(n + 1, t))) < 1e-12

    def test_matches_fredholm(self):
        for k in (1, 2, 3):
            for n in (0, 1, 2, 4):
                for t in (0.5, 1.0, 2.0):
                    quad_route = smallest_eigenvalue_prob_quadrature(k, n, t)
                    fredholm = smallest_eigenvalue_prob_fredholm(k, n, t)
                    assert abs(quad_route - fredholm) < 1e-6, (k, n, t)

    def test_budget_refusal(self):
        with pytest.raises(BudgetExceededError, match="k <= 3"):
            smallest_eigenvalue_prob_quadrature(4, 1, 1.0)
