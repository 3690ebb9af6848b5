"""Exact power-series route to the word distributions.

The exponential generating functions of F_I and F_D are Toeplitz
determinants:

    sum_N F_I(n;k,N) (kt)^N / N!  =  det T_n(f),  f(z) = exp(t/z) (1+z)^k
    sum_N F_D(n;k,N) (kt)^N / N!  =  det T_n(f),  f(z) = exp(t/z) (1-z)^(-k)

and the permutation analogue uses f(z) = exp(t(z + 1/z)), where the
coefficient of t^(2N) times (N!)^2 counts permutations of N with longest
increasing subsequence at most n.  This module does the whole computation
exactly: Fourier coefficients of the symbols are explicit binomial sums,
assembled as truncated power series in t with Fraction coefficients, and
the determinant is taken over that series ring.  Extracting the t^N
coefficient and rescaling by N!/k^N yields exact rational probabilities,
checked against the enumeration oracle.

The (kt) <-> t rescaling is handled at extraction time only, never by
substituting into the series, so nothing ever leaves exact arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

DEFAULT_ORDER = 12

_ZERO = Fraction(0)
_ONE = Fraction(1)


class RationalSeries:
    """Power series in t truncated at a fixed order, coefficients Fraction.

    Arithmetic between series of different orders truncates to the shorter
    one.  Instances are immutable value objects.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    @classmethod
    def zero(cls, order):
        return cls([_ZERO] * (order + 1))

    @classmethod
    def one(cls, order):
        return cls([_ONE] + [_ZERO] * order)

    @classmethod
    def constant(cls, value, order):
        return cls([Fraction(value)] + [_ZERO] * order)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def coefficient(self, j):
        if j > self.order:
            raise IndexError(
                f"coefficient {j} requested beyond truncation order {self.order}"
            )
        return self.coeffs[j]

    def truncate(self, order):
        if order >= self.order:
            return self
        return RationalSeries(self.coeffs[: order + 1])

    def __eq__(self, other):
        return isinstance(other, RationalSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        m = min(self.order, other.order)
        return RationalSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(m + 1)]
        )

    def __sub__(self, other):
        m = min(self.order, other.order)
        return RationalSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(m + 1)]
        )

    def __neg__(self):
        return RationalSeries([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, RationalSeries):
            m = min(self.order, other.order)
            a, b = self.coeffs, other.coeffs
            out = [_ZERO] * (m + 1)
            for i in range(m + 1):
                ai = a[i]
                if not ai:
                    continue
                for j in range(m + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
            return RationalSeries(out)
        return RationalSeries([c * Fraction(other) for c in self.coeffs])

    __rmul__ = __mul__

    def reciprocal(self):
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [_ZERO] * self.order
        for m in range(1, self.order + 1):
            acc = _ZERO
            for i in range(1, m + 1):
                if self.coeffs[i]:
                    acc += self.coeffs[i] * out[m - i]
            out[m] = -inv0 * acc
        return RationalSeries(out)

    def __truediv__(self, other):
        if isinstance(other, RationalSeries):
            return self * other.reciprocal()
        return RationalSeries([c / Fraction(other) for c in self.coeffs])

    def derivative(self):
        if self.order == 0:
            return RationalSeries([_ZERO])
        return RationalSeries(
            [i * self.coeffs[i] for i in range(1, self.order + 1)]
        )

    def __call__(self, t):
        """Evaluate by Horner; exact for Fraction/int input, float otherwise."""
        acc = self.coeffs[-1] if not isinstance(t, float) else float(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + (c if not isinstance(t, float) else float(c))
        return acc

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:5])
        tail = ", ..." if self.order >= 5 else ""
        return f"RationalSeries([{head}{tail}], order={self.order})"


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

def symbol_coefficient(kind: str, j: int, order: int, k: int | None = None):
    """j-th Fourier coefficient of a symbol, as a series in t.

    kind "I": exp(t/z)(1+z)^k   -> sum_m t^m/m! C(k, j+m), a finite sum;
    kind "D": exp(t/z)(1-z)^-k  -> sum_m t^m/m! C(k+j+m-1, j+m);
    kind "P": exp(t(z+1/z))     -> sum_r t^(2r+|j|) / (r! (r+|j|)!).
    """
    c = [_ZERO] * (order + 1)
    if kind == "I":
        if k is None or k < 1:
            raise ValueError("kind 'I' needs an alphabet size k >= 1")
        for m in range(max(0, -j), min(order, k - j) + 1):
            c[m] = Fraction(math.comb(k, j + m), math.factorial(m))
    elif kind == "D":
        if k is None or k < 1:
            raise ValueError("kind 'D' needs an alphabet size k >= 1")
        for m in range(max(0, -j), order + 1):
            c[m] = Fraction(math.comb(k + j + m - 1, j + m), math.factorial(m))
    elif kind == "P":
        a = abs(j)
        r = 0
        while 2 * r + a <= order:
            c[2 * r + a] = Fraction(1, math.factorial(r) * math.factorial(r + a))
            r += 1
    else:
        raise ValueError(f"unknown symbol kind {kind!r}")
    return RationalSeries(c)


# ---------------------------------------------------------------------------
# determinants over the series ring
# ---------------------------------------------------------------------------

def series_determinant(matrix):
    """Exact determinant of a square matrix of RationalSeries.

    Gaussian elimination, dividing by pivots; a pivot is usable only when
    its constant term is nonzero (the series is then invertible).  If no
    row supplies such a pivot the routine falls back to a bitmask Laplace
    expansion, which is division-free and always correct.
    """
    n = len(matrix)
    if n == 0:
        return RationalSeries([_ONE])
    order = min(s.order for row in matrix for s in row)
    a = [[s.truncate(order) for s in row] for row in matrix]
    det = RationalSeries.one(order)
    sign = 1
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if a[r][col].coeffs[0] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return _determinant_expansion(a, order)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        det = det * pivot
        inv = pivot.reciprocal()
        for r in range(col + 1, n):
            if all(c == 0 for c in a[r][col].coeffs):
                continue
            factor = a[r][col] * inv
            for c in range(col + 1, n):
                a[r][c] = a[r][c] - factor * a[col][c]
    if sign < 0:
        det = -det
    return det


def _determinant_expansion(a, order):
    # Laplace expansion down the rows, memoized on the set of unused columns.
    n = len(a)
    if n > 20:
        raise ValueError("expansion fallback limited to n <= 20")
    memo = {0: RationalSeries.one(order)}

    def minor(cols_mask, row):
        if cols_mask in memo:
            return memo[cols_mask]
        acc = RationalSeries.zero(order)
        sign = 1
        m = cols_mask
        while m:
            col_bit = m & -m
            col = col_bit.bit_length() - 1
            entry = a[row][col]
            if any(entry.coeffs):
                acc = acc + sign * (entry * minor(cols_mask ^ col_bit, row - 1))
            sign = -sign
            m ^= col_bit
        memo[cols_mask] = acc
        return acc

    return minor((1 << n) - 1, n - 1)


def toeplitz_det_series(n: int, kind: str, order: int = DEFAULT_ORDER, k=None):
    """det of the n x n Toeplitz matrix of symbol coefficients, exactly.

    The (i, j) entry is the (i-j)-th coefficient series; n = 0 gives the
    empty determinant 1.
    """
    if n < 0:
        raise ValueError("matrix size must be nonnegative")
    diag = {
        d: symbol_coefficient(kind, d, order, k) for d in range(-(n - 1), n)
    }
    matrix = [[diag[i - j] for j in range(n)] for i in range(n)]
    return series_determinant(matrix) if n else RationalSeries.one(order)


# ---------------------------------------------------------------------------
# distribution extraction
# ---------------------------------------------------------------------------

def extract_distribution(n: int, k: int, kind: str, N: int, det=None) -> Fraction:
    """Exact F(n; k, N) from the generating-function determinant.

    det T_n carries sum_N F(n;k,N) (kt)^N / N! as a series in t, so the
    probability is the t^N coefficient times N!/k^N.  Pass a precomputed
    determinant series to amortize over many N.
    """
    if kind not in ("I", "D"):
        raise ValueError(f"kind must be 'I' or 'D', got {kind!r}")
    if det is None:
        det = toeplitz_det_series(n, kind, order=N, k=k)
    if N > det.order:
        raise ValueError(
            f"N = {N} beyond the determinant's truncation order {det.order}"
        )
    return det.coefficient(N) * math.factorial(N) / Fraction(k**N)


def distribution_table(n: int, k: int, kind: str, order: int = DEFAULT_ORDER):
    """F(n; k, N) for all N <= order, from a single determinant."""
    det = toeplitz_det_series(n, kind, order=order, k=k)
    return [extract_distribution(n, k, kind, N, det=det) for N in range(order + 1)]


def permutation_count(n: int, N: int) -> int:
    """Number of permutations of N with longest increasing subsequence <= n.

    Uses the t^(2N) coefficient of the permutation symbol determinant,
    scaled by (N!)^2.
    """
    det = toeplitz_det_series(n, "P", order=2 * N)
    value = det.coefficient(2 * N) * math.factorial(N) ** 2
    if value.denominator != 1:
        raise ArithmeticError(f"permutation count came out non-integer: {value}")
    return value.numerator
