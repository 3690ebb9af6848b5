"""Floating-point Toeplitz determinants and the identity calculus on their
inverses.

For a symbol f with Fourier coefficients f_j, T_n(f) is the n x n matrix
(f_{i-j}).  The quantities

    U+-_n = (T^-1 f+, delta+-)      V+-_n = (T^-1 delta+, delta+-)

(with tilde versions built from the transposed matrix, i.e. the symbol
f(1/z)) satisfy a web of recursion relations, plus differentiation
formulas in t when df/dt = f/z, which both word symbols satisfy.  Every
relation is exposed here as a named residual so tests and the command line
can sweep them.  Differentiating the log-determinant gives U+_n, and for
the weakly-increasing symbol sigma(t) = k t - t U+_n is the Painleve V
sigma-function integrated in the painleve module.

Fourier coefficients come from exact binomial sums, never quadrature: for
exp(t/z)(1+z)^k the sum is finite; for exp(t/z)(1-z)^(-k) the positive
terms decay factorially and are summed until they fall below machine
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import SingularMatrixError

_TRUNCATION_EPS = 1e-19


def fourier_coefficient(kind: str, k: int, j: int, t: float) -> float:
    """f_j(t) for the word symbols; exact finite/binomial sums in float.

    All terms are nonnegative for t >= 0, so there is no cancellation.
    """
    if kind == "I":
        total = 0.0
        for m in range(max(0, -j), k - j + 1):
            total += t**m / math.factorial(m) * math.comb(k, j + m)
        return total
    if kind == "D":
        total = 0.0
        m = max(0, -j)
        while True:
            term = t**m / math.factorial(m) * math.comb(k + j + m - 1, j + m)
            total += term
            # once m dominates t the terms decay faster than geometrically
            if m > 2 * abs(t) + 10 and term < _TRUNCATION_EPS * max(total, 1.0):
                return total
            m += 1
    if kind == "P":
        total = 0.0
        a = abs(j)
        r = 0
        while True:
            term = t ** (2 * r + a) / (math.factorial(r) * math.factorial(r + a))
            total += term
            if 2 * r + a > 2 * abs(t) + 10 and term < _TRUNCATION_EPS * max(total, 1.0):
                return total
            r += 1
    raise ValueError(f"unknown symbol kind {kind!r}")


def fourier_coefficient_signed(k: int, j: int, t: float) -> float:
    """The weakly-increasing formula sum_m t^m/m! C(k, j+m) for any integer k
    and real t; used to exercise the (k, t) -> (-k, -t) symbol transform."""
    if k >= 1 and t >= 0:
        return fourier_coefficient("I", k, j, t)
    total = 0.0
    m = max(0, -j)
    while True:
        num = 1
        for i in range(j + m):
            num *= k - i
        term = t**m / math.factorial(m) * (num / math.factorial(j + m))
        total += term
        if m > 2 * abs(t) + 10 + abs(k) and abs(term) < _TRUNCATION_EPS * max(
            abs(total), 1.0
        ):
            return total
        m += 1


class ToeplitzContext:
    """T_n(f) for one (n, k, t, kind), with a shared LU factorization.

    The matrix is built once and every inner product reuses the same
    factorization (one solve per right-hand side, transposed solves for the
    tilde quantities).
    """

    def __init__(self, n: int, k: int, t: float, kind: str = "I"):
        if n < 0:
            raise ValueError("matrix size must be nonnegative")
        if t < 0:
            raise ValueError("t must be nonnegative")
        self.n, self.k, self.t, self.kind = n, k, float(t), kind
        self._coeff = lru_cache(maxsize=None)(
            lambda j: fourier_coefficient(kind, k, j, self.t)
        )
        self.matrix = np.array(
            [[self._coeff(i - j) for j in range(n)] for i in range(n)], dtype=float
        )
        self._lu = None

    def coefficient(self, j: int) -> float:
        return self._coeff(j)

    @property
    def lu(self):
        if self._lu is None:
            if self.n == 0:
                raise ValueError("no factorization of the empty matrix")
            try:
                self._lu = lu_factor(self.matrix)
            except Exception as exc:  # LinAlgError on exact singularity
                raise SingularMatrixError(
                    f"LU factorization failed for T_{self.n}", self.condition_estimate()
                ) from exc
        return self._lu

    def solve(self, rhs, transpose: bool = False):
        return lu_solve(self.lu, rhs, trans=1 if transpose else 0)

    def determinant(self) -> float:
        """det T_n via the LU diagonal; D_0 = 1."""
        if self.n == 0:
            return 1.0
        lu, piv = self.lu
        diag = np.diag(lu)
        if not np.all(np.isfinite(diag)) or np.any(diag == 0.0):
            raise SingularMatrixError(
                f"T_{self.n} is numerically singular", self.condition_estimate()
            )
        sign = 1.0 if np.count_nonzero(piv != np.arange(self.n)) % 2 == 0 else -1.0
        return sign * float(np.prod(diag))

    def condition_estimate(self) -> float:
        if self.n == 0:
            return 1.0
        try:
            return float(np.linalg.cond(self.matrix))
        except np.linalg.LinAlgError:
            return float("inf")

    def f_plus(self):
        return np.array([self._coeff(j) for j in range(1, self.n + 1)])

    def f_minus(self):
        return np.array([self._coeff(j) for j in range(self.n, 0, -1)])

    def ft_plus(self):
        return np.array([self._coeff(-j) for j in range(1, self.n + 1)])

    def ft_minus(self):
        return np.array([self._coeff(-j) for j in range(self.n, 0, -1)])


def toeplitz_det(n: int, k: int, t: float, kind: str = "I") -> float:
    """Determinant of T_n(f) for the word symbols."""
    return ToeplitzContext(n, k, t, kind).determinant()


# ---------------------------------------------------------------------------
# recursion quantities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecursionQuantities:
    """The scalar inner products extracted from one inverted Toeplitz matrix.

    At n = 0 every field is zero (the convention under which the recursion
    relations extend to n = 1).  phi = 1 - u_minus * ut_minus, and v_plus
    (the upper-left entry of the inverse) is the minor ratio
    D_{n-1}/D_n; the identities below consistently use the size-(n+1)
    quantity V+_{n+1} = D_n/D_{n+1}.
    """

    n: int
    k: int
    t: float
    kind: str
    u_plus: float
    u_minus: float
    ut_plus: float
    ut_minus: float
    v_plus: float
    v_minus: float
    vt_minus: float

    @property
    def phi(self) -> float:
        return 1.0 - self.u_minus * self.ut_minus


def recursion_quantities(n: int, k: int, t: float, kind: str = "I",
                         ctx: ToeplitzContext | None = None) -> RecursionQuantities:
    """All inner products at size n, from one LU factorization."""
    if n == 0:
        return RecursionQuantities(0, k, t, kind, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    if ctx is None:
        ctx = ToeplitzContext(n, k, t, kind)
    delta_plus = np.zeros(n)
    delta_plus[0] = 1.0
    x = ctx.solve(ctx.f_plus())
    y = ctx.solve(delta_plus)
    xt = ctx.solve(ctx.ft_plus(), transpose=True)
    yt = ctx.solve(delta_plus, transpose=True)
    return RecursionQuantities(
        n=n, k=k, t=t, kind=kind,
        u_plus=float(x[0]), u_minus=float(x[-1]),
        ut_plus=float(xt[0]), ut_minus=float(xt[-1]),
        v_plus=float(y[0]), v_minus=float(y[-1]),
        vt_minus=float(yt[-1]),
    )


def sigma_from_toeplitz(n: int, k: int, t: float) -> float:
    """sigma(t) = k t - t U+_n = -t d/dt log(e^{-kt} D_n(t)), weakly
    increasing symbol."""
    q = recursion_quantities(n, k, t, "I")
    return k * t - t * q.u_plus


# ---------------------------------------------------------------------------
# identity residuals
# ---------------------------------------------------------------------------

def universal_identity_residuals(n: int, k: int, t: float, kind: str = "I") -> dict:
    """Residuals of the relations that hold for any symbol, at size n >= 1.

    Keys name what each relation says:
      uminus_vratio   -U-_n = V-_{n+1} D_{n+1} / D_n
      f0_resolvent    f_0 - (T^-1 f+, ft+) = 1 / V+_{n+1}
      corner_minor    (V+_{n+2})^2 - V-_{n+2} Vt-_{n+2} = V+_{n+1} V+_{n+2}
      fn_resolvent    f_{n+1} - (T^-1 f+, f-) = -V-_{n+2}/(V+_{n+1} V+_{n+2})
      phi_vratio      1 - U-_n Ut-_n = V+_n / V+_{n+1}
      uplus_step      U+_n - U+_{n+1} = Ut-_n U-_{n+1}
      shifted_corner  (T_{n+1}^-1)[1, n] = Vt-_n + Ut-_n U+_n V+_{n+1}
    """
    if n < 1:
        raise ValueError("universal identities need n >= 1")
    ctx = ToeplitzContext(n, k, t, kind)
    ctx1 = ToeplitzContext(n + 1, k, t, kind)
    q = recursion_quantities(n, k, t, kind, ctx)
    q1 = recursion_quantities(n + 1, k, t, kind, ctx1)
    q2 = recursion_quantities(n + 2, k, t, kind)
    d_ratio = ctx1.determinant() / ctx.determinant()

    x = ctx.solve(ctx.f_plus())
    ip_f_ftp = float(x @ ctx.ft_plus())
    ip_f_fm = float(x @ ctx.f_minus())

    e_last = np.zeros(n + 1)
    e_last[-1] = 1.0
    corner = float(ctx1.solve(e_last)[1])

    return {
        "uminus_vratio": abs(-q.u_minus - q1.v_minus * d_ratio),
        "f0_resolvent": abs(ctx.coefficient(0) - ip_f_ftp - 1.0 / q1.v_plus),
        "corner_minor": abs(
            q2.v_plus**2 - q2.v_minus * q2.vt_minus - q1.v_plus * q2.v_plus
        ),
        "fn_resolvent": abs(
            ctx.coefficient(n + 1)
            - ip_f_fm
            + q2.v_minus / (q1.v_plus * q2.v_plus)
        ),
        "phi_vratio": abs(q.phi - q.v_plus / q1.v_plus),
        "uplus_step": abs(q.u_plus - q1.u_plus - q.ut_minus * q1.u_minus),
        "shifted_corner": abs(corner - (q.vt_minus + q.ut_minus * q.u_plus * q1.v_plus)),
    }


def nonuniversal_identity_residuals(n: int, k: int, t: float) -> dict:
    """Residuals of the relations special to the symbol exp(t/z)(1+z)^k.

    They come from integrating the coefficient integral by parts, which
    gives a full matrix identity ("matrix_identity", tested in operator
    norm) and scalar consequences:
      linear_ut            n t - (k+n) Ut+_n + t U+_n = 0
      mixed_recurrence_high t + (k-1) Ut+_n + (n+1) U-_n Ut-_{n+1}
                             - k Ut+_{n+1} - t U-_{n+1} Ut-_n = 0
    and, for n >= 2 (they reference size n-1):
      ut_minus_recurrence  -(t+n) Ut-_n + t (Ut-_n)^2 U-_{n+1}
                             - t Ut-_{n-1} phi - (k+n+1) Ut-_{n+1} = 0
      mixed_recurrence_low t + (n-1) Ut+_{n-1} + k U-_{n-1} Ut-_n
                             - n Ut+_n - t U-_n Ut-_{n-1} = 0
      ut_minus_threeterm   n Ut-_n + Ut-_n Ut+_n
                             + phi ((k+n+1) Ut-_{n+1} + t Ut-_{n-1}) = 0
    """
    if n < 1:
        raise ValueError("nonuniversal identities need n >= 1")
    ctx = ToeplitzContext(n, k, t, "I")
    q = recursion_quantities(n, k, t, "I", ctx)
    q1 = recursion_quantities(n + 1, k, t, "I")
    out = {
        "matrix_identity": _matrix_identity_residual(ctx),
        "linear_ut": abs(n * t - (k + n) * q.ut_plus + t * q.u_plus),
        "mixed_recurrence_high": abs(
            t
            + (k - 1) * q.ut_plus
            + (n + 1) * q.u_minus * q1.ut_minus
            - k * q1.ut_plus
            - t * q1.u_minus * q.ut_minus
        ),
    }
    if n >= 2:
        qm = recursion_quantities(n - 1, k, t, "I")
        out["ut_minus_recurrence"] = abs(
            -(t + n) * q.ut_minus
            + t * q.ut_minus**2 * q1.u_minus
            - t * qm.ut_minus * q.phi
            - (k + n + 1) * q1.ut_minus
        )
        out["mixed_recurrence_low"] = abs(
            t
            + (n - 1) * qm.ut_plus
            + k * qm.u_minus * q.ut_minus
            - n * q.ut_plus
            - t * q.u_minus * qm.ut_minus
        )
        out["ut_minus_threeterm"] = abs(
            n * q.ut_minus
            + q.ut_minus * q.ut_plus
            + q.phi * ((k + n + 1) * q1.ut_minus + t * qm.ut_minus)
        )
    return out


def _matrix_identity_residual(ctx: ToeplitzContext) -> float:
    """Operator-norm residual of the integrated-by-parts matrix identity.

    With M = diag(1..n), L the backward and L' the forward shift:
      T^-1 (M + t) - M T^-1 + T^-1 (M - k - 1) L' - L' M T^-1 + t L T^-1
      - k (T^-1 d+) o (T^-t ft+) - n (T^-1 ft-) o (T^-t d-)
      + t (T^-1 f+) o (T^-t d+) = 0.
    """
    n, k, t = ctx.n, ctx.k, ctx.t
    inv = ctx.solve(np.eye(n))
    M = np.diag(np.arange(1.0, n + 1))
    shift_back = np.eye(n, k=1)
    shift_fwd = np.eye(n, k=-1)
    d_plus = np.zeros(n)
    d_plus[0] = 1.0
    d_minus = np.zeros(n)
    d_minus[-1] = 1.0

    S = (
        inv @ (M + t * np.eye(n))
        - M @ inv
        + inv @ (M - (k + 1) * np.eye(n)) @ shift_fwd
        - shift_fwd @ M @ inv
        + t * shift_back @ inv
        - k * np.outer(ctx.solve(d_plus), ctx.solve(ctx.ft_plus(), transpose=True))
        - n * np.outer(ctx.solve(ctx.ft_minus()), ctx.solve(d_minus, transpose=True))
        + t * np.outer(ctx.solve(ctx.f_plus()), ctx.solve(d_plus, transpose=True))
    )
    return float(np.linalg.norm(S, 2))


def differentiation_residuals(
    n: int, k: int, t: float, h: float | None = None, kind: str = "I"
) -> dict:
    """Centered-difference checks of the t-derivative formulas.

    Left sides are second-order central differences of the recursion
    quantities; right sides are evaluated at t.  Valid for both word
    symbols (the t-derivative relation df/dt = f/z is shared); the local
    forms (duminus_local, dutilde_minus_local) additionally use the
    weakly-increasing-only recursions, so they are reported for kind "I".
      dlog_det            (log D_n)' = U+_n
      duplus              (U+_n)' = -phi Ut-_{n-1} U-_{n+1}      [n >= 2]
      duminus             (U-_n)' = phi U-_{n+1}
      dutilde_plus        (Ut+_n)' = phi
      dutilde_minus       (Ut-_n)' = -phi Ut-_{n-1}              [n >= 2]
      duminus_local       (U-_n)' via sizes n, n-1 only          [n >= 2, I]
      dutilde_minus_local (Ut-_n)' via sizes n, n+1 only         [I]
    """
    if h is None:
        h = 1e-4 * max(1.0, t)
    if t - h <= 0:
        raise ValueError("need t - h > 0 for the centered difference")
    q = recursion_quantities(n, k, t, kind)
    q1 = recursion_quantities(n + 1, k, t, kind)
    qp = recursion_quantities(n, k, t + h, kind)
    qm = recursion_quantities(n, k, t - h, kind)
    dlog = (
        math.log(abs(toeplitz_det(n, k, t + h, kind)))
        - math.log(abs(toeplitz_det(n, k, t - h, kind)))
    ) / (2 * h)

    def diff(attr):
        return (getattr(qp, attr) - getattr(qm, attr)) / (2 * h)

    phi = q.phi
    out = {
        "dlog_det": abs(dlog - q.u_plus),
        "duminus": abs(diff("u_minus") - phi * q1.u_minus),
        "dutilde_plus": abs(diff("ut_plus") - phi),
    }
    if n >= 2:
        qnm = recursion_quantities(n - 1, k, t, kind)
        out["duplus"] = abs(diff("u_plus") + phi * qnm.ut_minus * q1.u_minus)
        out["dutilde_minus"] = abs(diff("ut_minus") + phi * qnm.ut_minus)
    if kind == "I":
        if n >= 2:
            qnm = recursion_quantities(n - 1, k, t, kind)
            out["duminus_local"] = abs(
                diff("u_minus")
                - (
                    -(n / t) * q.u_minus
                    + (q.ut_plus - t * phi) * q.u_minus / ((phi - 1.0) * t)
                    + phi / (phi - 1.0) * qnm.ut_minus * q.u_minus**2
                )
            )
        out["dutilde_minus_local"] = abs(
            diff("ut_minus")
            - (
                (n / t) * q.ut_minus
                + q.ut_plus * q.ut_minus / t
                + (k + 1 + n) * phi * q1.ut_minus / t
            )
        )
    return out
