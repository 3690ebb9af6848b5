"""Exact small-size checks of the determinantal identities behind the
generating functions.

The sum of Schur-function products over partitions with at most n rows,

    R_n(x, y) = sum_{len(lambda) <= n} s_lambda(x) s_lambda(y),

equals the n x n Toeplitz determinant det(A_{i-j}) with
A_i = sum_l h_{l+i}(x) h_l(y), by Cauchy-Binet applied to Jacobi-Trudi
minors.  Its dual replaces complete homogeneous by elementary symmetric
functions and caps the first row instead of the first column.  Both are
verified here over exact rationals; floats appear only in reported
truncation-error estimates.  The specializations of these identities to
the word/permutation symbols live in the series module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .combinatorics import Partition, partitions


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def det_rational(rows):
    """Exact determinant of a square matrix of Fractions."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            det = -det
        pivot = a[col][col]
        det *= pivot
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / pivot
                for c in range(col + 1, n):
                    a[r][c] -= factor * a[col][c]
    return det


def matmul_rational(A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    return [
        [sum((A[i][l] * B[l][j] for l in range(inner)), Fraction(0)) for j in range(cols)]
        for i in range(rows)
    ]


def cauchy_binet(A, B):
    """det(AB) expanded as a sum over column subsets.

    A is m x n, B is n x m with n >= m; returns
    sum_S det(B rows S) det(A columns S), which the tests compare with the
    directly computed det(AB).
    """
    m, n = len(A), len(B)
    if any(len(row) != n for row in A) or any(len(row) != m for row in B):
        raise ValueError("shapes must be m x n and n x m")
    if n < m:
        raise ValueError(f"need n >= m, got m = {m}, n = {n}")
    total = Fraction(0)
    for S in combinations(range(n), m):
        b_minor = [[Fraction(B[s][j]) for j in range(m)] for s in S]
        a_minor = [[Fraction(A[i][s]) for s in S] for i in range(m)]
        total += det_rational(b_minor) * det_rational(a_minor)
    return total


# ---------------------------------------------------------------------------
# symmetric function tables
# ---------------------------------------------------------------------------

def homogeneous_table(xs, rmax: int):
    """h_0 .. h_rmax of the variables, exact."""
    h = [Fraction(1)] + [Fraction(0)] * rmax
    for x in xs:
        x = Fraction(x)
        for r in range(1, rmax + 1):
            h[r] += x * h[r - 1]
    return h


def elementary_table(xs, rmax: int):
    """e_0 .. e_rmax of the variables, exact (zero beyond len(xs))."""
    e = [Fraction(1)] + [Fraction(0)] * rmax
    for x in xs:
        x = Fraction(x)
        for r in range(min(rmax, len(xs)), 0, -1):
            e[r] += x * e[r - 1]
    return e


def schur_polynomial(shape, xs):
    """s_lambda(xs) by the Jacobi-Trudi determinant det(h_{lambda_i + j - i})."""
    lam = Partition(shape.parts if isinstance(shape, Partition) else shape)
    p = len(lam)
    if p == 0:
        return Fraction(1)
    if p > len(xs):
        return Fraction(0)
    h = homogeneous_table(xs, lam[0] + p)
    rows = [
        [h[lam[i] + j - i] if 0 <= lam[i] + j - i else Fraction(0) for j in range(p)]
        for i in range(p)
    ]
    return det_rational(rows)


# ---------------------------------------------------------------------------
# symbol coefficients and Gessel's identity
# ---------------------------------------------------------------------------

def _check_assignment(xs, ys):
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    if any(abs(v) >= 1 for v in xs + ys):
        raise ValueError("all variables must satisfy |v| < 1 for convergence")
    return xs, ys


def symbol_coefficient_general(i: int, xs, ys, terms: int):
    """A_i = sum_{l=0}^{terms} h_{l+i}(x) h_l(y), exact partial sum."""
    xs, ys = _check_assignment(xs, ys)
    hx = homogeneous_table(xs, terms + max(i, 0))
    hy = homogeneous_table(ys, terms)
    total = Fraction(0)
    for l in range(terms + 1):
        li = l + i
        if li < 0 or li >= len(hx):
            continue
        total += hx[li] * hy[l]
    return total


def dual_symbol_coefficient(i: int, xs, ys):
    """sum_l e_{l+i}(x) e_l(y); a finite sum, so exact with no tail."""
    xs, ys = _check_assignment(xs, ys)
    rmax = len(xs) + len(ys)
    ex = elementary_table(xs, rmax)
    ey = elementary_table(ys, rmax)
    total = Fraction(0)
    for l in range(len(ys) + 1):
        if 0 <= l + i <= len(xs):
            total += ex[l + i] * ey[l]
    return total


def _cauchy_weight_tail(g: float, p: int, start: int) -> float:
    """Upper bound on sum_{w >= start} C(w+p-1, p-1) g^w for 0 <= g < 1.

    Terms are summed until the term ratio g (w+p)/(w+1) drops below 1 and
    the remainder is closed geometrically.
    """
    if g == 0:
        return 0.0
    if g >= 1:
        raise ValueError("nonconvergent tail: need max|x| * max|y| < 1")
    total = 0.0
    w = start
    term = math.comb(w + p - 1, p - 1) * g**w
    for _ in range(10000):
        total += term
        ratio = g * (w + p) / (w + 1)
        if ratio < 1:
            # slack keeps this an upper bound under float evaluation (the
            # bound is tight for one variable, where it IS the exact tail)
            return (total + term * ratio / (1 - ratio)) * (1 + 1e-9)
        w += 1
        term *= ratio
    raise ValueError("tail bound failed to converge in 10000 terms")


def schur_sum_truncated(n: int, xs, ys, max_weight: int, first_row_cap=None):
    """sum of s_lambda(x) s_lambda(y) over len(lambda) <= n, |lambda| <= W.

    An optional cap on lambda_1 gives the dual-side sums.
    """
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    total = Fraction(0)
    for w in range(max_weight + 1):
        for lam in partitions(w, max_len=n, max_part=first_row_cap):
            sx = schur_polynomial(lam, xs)
            if sx:
                total += sx * schur_polynomial(lam, ys)
    return total


@dataclass
class GesselCheck:
    """Both sides of the determinant identity plus a truncation-error bound."""

    n: int
    schur_side: Fraction
    determinant_side: Fraction
    tail_bound: float

    @property
    def residual(self) -> float:
        return abs(float(self.schur_side - self.determinant_side))


def gessel_check(n: int, xs, ys, max_weight: int = 12) -> GesselCheck:
    """Compare the truncated Schur sum with det(A_{i-j}), with a tail bound.

    Both sides are computed exactly; they differ only through truncation
    (partitions above max_weight on one side, the l-tails of the A_i on the
    other), and the bound covers both effects.
    """
    xs, ys = _check_assignment(xs, ys)
    if n == 0:
        return GesselCheck(0, Fraction(1), Fraction(1), 0.0)
    lhs = schur_sum_truncated(n, xs, ys, max_weight)

    terms = max_weight + n + 40
    coeffs = {
        d: symbol_coefficient_general(d, xs, ys, terms) for d in range(-(n - 1), n)
    }
    rhs = det_rational([[coeffs[i - j] for j in range(n)] for i in range(n)])

    rho_x = max((abs(float(x)) for x in xs), default=0.0)
    rho_y = max((abs(float(y)) for y in ys), default=0.0)
    g = rho_x * rho_y
    p = max(len(xs) * len(ys), 1)
    # Schur side: everything above max_weight is bounded by the Cauchy tail.
    schur_tail = _cauchy_weight_tail(g, p, max_weight + 1)
    # Determinant side: each truncated entry is off by at most the l-tail of
    # its series; propagate through multilinearity of the determinant.
    entry_tail = _cauchy_weight_tail(g, p, terms + 1) / (rho_y**0 or 1.0)
    max_entry = max(abs(float(c)) for c in coeffs.values()) + entry_tail
    det_tail = (
        n * n * entry_tail * math.factorial(n - 1) * max_entry ** (n - 1)
        if n > 1
        else entry_tail
    )
    return GesselCheck(n, lhs, rhs, schur_tail + det_tail)


def dual_gessel_check(n: int, xs, ys) -> GesselCheck:
    """Elementary-symmetric version; both sides are finite, so exact.

    The Schur sum runs over partitions with first row at most n (rows are
    bounded by the variable counts), the determinant uses the e-coefficients.
    """
    xs, ys = _check_assignment(xs, ys)
    if n == 0:
        return GesselCheck(0, Fraction(1), Fraction(1), 0.0)
    rows = min(len(xs), len(ys))
    lhs = Fraction(0)
    for w in range(rows * n + 1):
        for lam in partitions(w, max_len=rows, max_part=n):
            sx = schur_polynomial(lam, xs)
            if sx:
                lhs += sx * schur_polynomial(lam, ys)
    coeffs = {d: dual_symbol_coefficient(d, xs, ys) for d in range(-(n - 1), n)}
    rhs = det_rational([[coeffs[i - j] for j in range(n)] for i in range(n)])
    return GesselCheck(n, lhs, rhs, 0.0)


# ---------------------------------------------------------------------------
# Cauchy identity limits
# ---------------------------------------------------------------------------

@dataclass
class CauchyLimitReport:
    """Errors |R_n - limit| for n = 1..n_max; should decrease in n."""

    errors: list
    limit: Fraction
    dual_exact_from: int | None = None

    @property
    def monotone(self) -> bool:
        return all(a >= b for a, b in zip(self.errors, self.errors[1:]))


def cauchy_limit_check(xs, ys, n_max: int, max_weight: int = 14) -> CauchyLimitReport:
    """R_n against its n -> infinity limit prod (1 - x_i y_j)^(-1)."""
    xs, ys = _check_assignment(xs, ys)
    limit = Fraction(1)
    for x in xs:
        for y in ys:
            limit /= 1 - x * y
    errors = []
    for n in range(1, n_max + 1):
        rn = schur_sum_truncated(n, xs, ys, max_weight)
        errors.append(abs(float(limit - rn)))
    return CauchyLimitReport(errors=errors, limit=limit)


def dual_cauchy_limit_check(xs, ys, n_max: int) -> CauchyLimitReport:
    """The one-sided dual sum against prod (1 + x_i y_j).

    sum_{len(lambda) <= n} s_lambda(x) s_{lambda'}(y) is a finite sum (the
    conjugate bounds both directions), so it reaches the product exactly
    once n >= len(xs).
    """
    xs, ys = _check_assignment(xs, ys)
    limit = Fraction(1)
    for x in xs:
        for y in ys:
            limit *= 1 + x * y
    errors = []
    for n in range(1, n_max + 1):
        total = Fraction(0)
        for w in range(len(xs) * len(ys) + 1):
            for lam in partitions(w, max_len=min(n, len(xs)), max_part=len(ys)):
                sx = schur_polynomial(lam, xs)
                if sx:
                    total += sx * schur_polynomial(Partition(lam).conjugate(), ys)
        errors.append(abs(float(limit - total)))
    return CauchyLimitReport(
        errors=errors, limit=limit, dual_exact_from=min(len(xs), n_max)
    )
