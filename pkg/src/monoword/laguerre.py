"""Smallest-eigenvalue distribution of the k x k Laguerre ensemble.

With eigenvalue weight x^n e^{-x}, the probability that the smallest
eigenvalue is at least t equals the Fredholm determinant det(I - K) of the
Christoffel-Darboux projection kernel built from the orthonormal Laguerre
functions

    phi_j(x) = sqrt(j!/(n+j)!) x^{n/2} e^{-x/2} L_j^{(n)}(x),

restricted to (0, t).  The same probability is the k-fold integral

    c_{k,n} int_t^inf ... int_t^inf prod x_j^n e^{-sum x_j} Delta(x)^2 dx,

and both equal e^{-kt} D_n(t) from the Toeplitz/Painleve routes.  Note the
role swap relative to the word problem: the matrix size is the alphabet
size k, while the word-length parameter n sits in the weight exponent.

The kernel here is oriented as the positive semidefinite projection
sum_{j<k} phi_j (x) phi_j(y); its difference-quotient form is

    K(x, y) = sqrt(k(k+n)) (phi_k(x) phi_{k-1}(y) - phi_{k-1}(x) phi_k(y))
              / (y - x),

pinned by the k = 1 closed form det(I - K) = Gamma(n+1, t)/n!.  The
diagonal is the derivative limit, with Laguerre derivatives from the
recurrence x L_k' = k L_k - (k+n) L_{k-1} (no finite differences).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError

DEFAULT_NODES = 40
_NEAR_DIAGONAL = 1e-6


def laguerre_polynomial(k: int, n: int, x):
    """Generalized Laguerre polynomial L_k^{(n)}(x), three-term recurrence."""
    if k < 0 or n < 0:
        raise ValueError("need k >= 0 and n >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = n + 1.0 - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + n + 1 - x) * cur - (j + n) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def _phi_pair(k: int, n: int, x):
    """(phi_k, phi_{k-1}, phi_k', phi_{k-1}') at x, k >= 1.

    Prefactors sqrt(j!/(n+j)!) are evaluated in log space so large n, k do
    not overflow; derivatives use x L_j' = j L_j - (j+n) L_{j-1}.
    """
    x = np.asarray(x, dtype=float)
    lk = laguerre_polynomial(k, n, x)
    lkm = laguerre_polynomial(k - 1, n, x)
    lkmm = laguerre_polynomial(k - 2, n, x) if k >= 2 else np.zeros_like(x)

    def weight(j):
        logc = 0.5 * (math.lgamma(j + 1) - math.lgamma(n + j + 1))
        return np.exp(logc + 0.5 * n * np.log(x) - 0.5 * x)

    wk, wkm = weight(k), weight(k - 1)
    phi_k = wk * lk
    phi_km = wkm * lkm
    # phi_j' = phi_j (n/(2x) - 1/2) + w_j L_j'
    half = n / (2.0 * x) - 0.5
    dlk = (k * lk - (k + n) * lkm) / x
    dlkm = ((k - 1) * lkm - (k - 1 + n) * lkmm) / x if k >= 2 else np.zeros_like(x)
    dphi_k = phi_k * half + wk * dlk
    dphi_km = phi_km * half + wkm * dlkm
    return phi_k, phi_km, dphi_k, dphi_km


def phi(k: int, n: int, x):
    """Orthonormal Laguerre function phi_k(x) = c x^{n/2} e^{-x/2} L_k^{(n)}(x)."""
    x = np.asarray(x, dtype=float)
    logc = 0.5 * (math.lgamma(k + 1) - math.lgamma(n + k + 1))
    val = np.exp(logc + 0.5 * n * np.log(x) - 0.5 * x) * laguerre_polynomial(k, n, x)
    return val if val.ndim else float(val)


class LaguerreKernel:
    """Christoffel-Darboux kernel of the k lowest Laguerre functions."""

    def __init__(self, k: int, n: int):
        if k < 1 or n < 0:
            raise ValueError("need k >= 1 and n >= 0")
        self.k, self.n = k, n
        self._scale = math.sqrt(k * (k + n))

    def diagonal(self, x):
        pk, pkm, dpk, dpkm = _phi_pair(self.k, self.n, x)
        return self._scale * (pk * dpkm - pkm * dpk)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        near = np.abs(x - y) < _NEAR_DIAGONAL * np.maximum(1.0, np.abs(x) + np.abs(y))
        # off-diagonal difference quotient; near-diagonal entries switch to
        # the derivative form at the midpoint to dodge the cancellation
        denom = np.where(near, 1.0, y - x)
        pk_x, pkm_x, _, _ = _phi_pair(self.k, self.n, x)
        pk_y, pkm_y, _, _ = _phi_pair(self.k, self.n, y)
        off = self._scale * (pk_x * pkm_y - pkm_x * pk_y) / denom
        if np.any(near):
            mid = 0.5 * (x + y)
            off = np.where(near, self.diagonal(np.maximum(mid, 1e-300)), off)
        return off if off.ndim else float(off)

    def nystrom_matrix(self, t: float, m_nodes: int):
        """Symmetrized Nystrom discretization on (0, t) with Gauss-Legendre."""
        u, w = np.polynomial.legendre.leggauss(m_nodes)
        x = 0.5 * t * (u + 1.0)
        wt = 0.5 * t * w
        X, Y = np.meshgrid(x, x, indexing="ij")
        K = self(X, Y)
        rw = np.sqrt(wt)
        return rw[:, None] * K * rw[None, :], x, wt


def smallest_eigenvalue_prob_fredholm(
    k: int, n: int, t: float, m_nodes: int = DEFAULT_NODES
) -> float:
    """Prob(lambda_min >= t) = det(I - K) by Nystrom discretization.

    Converges spectrally in m_nodes: the determinant of the symmetrized
    matrix coincides with the one built from the smooth kernel
    S(x,y) y^n e^{-y} (similarity), so the x^{n/2} endpoint factor does not
    degrade it.
    """
    if m_nodes < 10:
        raise ValueError("need at least 10 quadrature nodes")
    if t <= 0:
        return 1.0
    A, _, _ = LaguerreKernel(k, n).nystrom_matrix(t, m_nodes)
    return float(np.linalg.det(np.eye(m_nodes) - A))


def normalization_constant(k: int, n: int) -> Fraction:
    """c_{k,n} = 1 / (1! 2! ... k! * prod_{j=0}^{k-1} (n+j)!), exact."""
    denom = 1
    for j in range(1, k + 1):
        denom *= math.factorial(j)
    for j in range(k):
        denom *= math.factorial(n + j)
    return Fraction(1, denom)


def smallest_eigenvalue_prob_quadrature(
    k: int, n: int, t: float, m_nodes: int = 48
) -> float:
    """Prob(lambda_min >= t) by direct k-dimensional Gauss-Laguerre.

    Shifting x_j = t + u_j gives e^{-kt} c_{k,n} times the integral of
    prod (t+u_j)^n Delta(u)^2 against prod e^{-u_j}, a polynomial, so
    tensor Gauss-Laguerre is exact once 2 m_nodes - 1 covers the degree.
    Budgeted to k <= 3.
    """
    if k > 3:
        raise BudgetExceededError(
            f"direct quadrature is budgeted to k <= 3 dimensions, got k = {k}"
        )
    if t < 0:
        raise ValueError("t must be nonnegative")
    u, w = np.polynomial.laguerre.laggauss(m_nodes)
    grids = np.meshgrid(*([u] * k), indexing="ij")
    weight = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * k), indexing="ij"):
        weight = weight * g
    integrand = np.ones_like(grids[0])
    for g in grids:
        integrand = integrand * (t + g) ** n
    for i in range(k):
        for j in range(i + 1, k):
            integrand = integrand * (grids[i] - grids[j]) ** 2
    total = float(np.sum(weight * integrand))
    return math.exp(-k * t) * float(normalization_constant(k, n)) * total
