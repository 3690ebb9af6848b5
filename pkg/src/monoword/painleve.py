"""Painleve V sigma-form route to the normalized Toeplitz determinants.

For the weakly-increasing symbol exp(t/z)(1+z)^k,

    sigma(t) = -t d/dt log(e^{-kt} D_n(t)) = k t - t U+_n

satisfies the Jimbo-Miwa-Okamoto sigma-form

    (t s'')^2 = (s - t s' - 2 (s')^2 + (2k+n) s')^2
                - 4 (s')^2 (s' - k) (s' - k - n)

with boundary behaviour sigma(t) = a t^{n+1} + O(t^{n+2}),
a = k/(n+1)! * C(n+k, n).  Integrating sigma(t')/t' recovers

    e^{-kt} D_n(t) = exp(-int_0^t sigma(t')/t' dt'),

an entirely Toeplitz-free route to the distributions.  The substitution
w = t - sigma/(k+n) (on the Toeplitz side w equals Ut+_n) turns the
sigma-form into a first integral of a third-order equation for w; residual
evaluators for all three forms live here.

Integration uses the third-order ODE obtained by differentiating the
sigma-form.  Every term of that derivative carries a factor sigma'', so the
explicit equation for sigma''' is regular even where sigma'' vanishes, and
the sigma-form residual is an exact first integral of it (conserved along
trajectories).  A restart-from-Toeplitz fallback is kept behind a residual
monitor for robustness; trajectories that used it are flagged hybrid.

The strictly-decreasing determinants follow from the same machinery with
k -> -k and t -> -t, which flips the sign of n in the coefficients; see
integrate_sigma(kind="D").
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError
from .series import RationalSeries, toeplitz_det_series
from .toeplitz import recursion_quantities

DEFAULT_TOL = 1e-11
_SEED_EXTRA_TERMS = 7


@dataclass(frozen=True)
class SigmaState:
    """(t, sigma, sigma', sigma'') plus the parameters (n, k)."""

    t: float
    sigma: float
    dsigma: float
    d2sigma: float
    n: int
    k: int


@dataclass(frozen=True)
class WState:
    """(t, w, w', w'') for the third-order form; w = t - sigma/(k+n)."""

    t: float
    w: float
    dw: float
    d2w: float
    n: int
    k: int


def w_from_sigma(s: SigmaState) -> WState:
    c = s.n + s.k
    return WState(
        t=s.t,
        w=s.t - s.sigma / c,
        dw=1.0 - s.dsigma / c,
        d2w=-s.d2sigma / c,
        n=s.n,
        k=s.k,
    )


def seed_coefficient(n: int, k: int, kind: str = "I") -> Fraction:
    """Leading coefficient a of sigma = a t^{n+1} + O(t^{n+2}).

    Weakly increasing: a = k C(n+k, n)/(n+1)!.  Strictly decreasing (after
    the k -> -k, t -> -t flip): a = k C(k-1, n)/(n+1)!, which vanishes for
    n >= k, where the normalized determinant is identically 1.
    """
    if kind == "I":
        return Fraction(k * math.comb(n + k, n), math.factorial(n + 1))
    if kind == "D":
        return Fraction(k * math.comb(k - 1, n) if n < k else 0, math.factorial(n + 1))
    raise ValueError(f"kind must be 'I' or 'D', got {kind!r}")


def sigma_series(n: int, k: int, kind: str = "I",
                 order: int | None = None) -> RationalSeries:
    """Exact power series of sigma(t) = k t - t (log D_n)'(t).

    Computed from the exact determinant series, so the boundary condition
    comes with as many subleading terms as requested; the one-term
    asymptotics alone would leave a persistent relative seeding error of
    order t_start.  The t^{n+1} coefficient equals seed_coefficient exactly.
    """
    if order is None:
        order = n + 1 + _SEED_EXTRA_TERMS
    det = toeplitz_det_series(n, kind, order=order + 1, k=k)
    # k t - t D'/D, truncated back to `order`
    logderiv = det.derivative() * det.reciprocal()
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[1] = Fraction(k)
    for j in range(1, order + 1):
        coeffs[j] -= logderiv.coefficient(j - 1)
    return RationalSeries(coeffs)


def _parameters(n: int, k: int, kind: str):
    # sigma-form written as (t s'')^2 = (s - t s' - 2 s'^2 + p s')^2
    #                                   - 4 s'^2 (s' - r1)(s' - r2)
    if kind == "I":
        return 2 * k + n, float(k), float(k + n)
    if kind == "D":
        return 2 * k - n, float(k), float(k - n)
    raise ValueError(f"kind must be 'I' or 'D', got {kind!r}")


def _sigma_form_residual(t, s, s1, s2, p, r1, r2) -> float:
    bracket = s - t * s1 - 2.0 * s1**2 + p * s1
    return (t * s2) ** 2 - bracket**2 + 4.0 * s1**2 * (s1 - r1) * (s1 - r2)


def _sigma_form_scale(t, s, s1, s2, p, r1, r2) -> float:
    # magnitude of the individual terms, for relative residual monitoring
    bracket = s - t * s1 - 2.0 * s1**2 + p * s1
    return max(
        1.0,
        (t * s2) ** 2 + bracket**2 + abs(4.0 * s1**2 * (s1 - r1) * (s1 - r2)),
    )


def sigma_form_residual(state: SigmaState) -> float:
    """Signed residual of the sigma-form; zero on exact solutions."""
    p, r1, r2 = _parameters(state.n, state.k, "I")
    return _sigma_form_residual(
        state.t, state.sigma, state.dsigma, state.d2sigma, p, r1, r2
    )


def first_integral_residual(ws: WState) -> float:
    """Signed residual of the first integral of the third-order equation:

    t^2 (w'')^2 = -4(k+n) t (w')^3
                  + {4(k+n) w + t^2 + 2(2k+3n) t + n^2} (w')^2
                  - {2(t+2k+3n) w + 2nt + 2n^2} w' + (w+n)^2.
    """
    t, w, w1, w2, n, k = ws.t, ws.w, ws.dw, ws.d2w, ws.n, ws.k
    rhs = (
        -4.0 * (k + n) * t * w1**3
        + (4.0 * (k + n) * w + t**2 + 2.0 * (2 * k + 3 * n) * t + n**2) * w1**2
        - (2.0 * (t + 2 * k + 3 * n) * w + 2.0 * n * t + 2.0 * n**2) * w1
        + (w + n) ** 2
    )
    return (t * w2) ** 2 - rhs


def de3_residual(ws: WState, d3w: float) -> float:
    """w''' minus the right side of the third-order equation.

    The equation has poles at w' = 0 and w' = 1; evaluating there raises.
    """
    t, w, w1, w2, n, k = ws.t, ws.w, ws.dw, ws.d2w, ws.n, ws.k
    if abs(w1) < 1e-12:
        raise ZeroDivisionError("third-order form is singular at w' = 0")
    if abs(w1 - 1.0) < 1e-12:
        raise ZeroDivisionError("third-order form is singular at w' = 1")
    rhs = (
        0.5 * (1.0 / w1 + 1.0 / (w1 - 1.0)) * w2**2
        - w2 / t
        + 2.0 * (k + n) / t * w1
        - 2.0 * (k + n) / t * w1**2
        + (t + n) / (2.0 * t**2) * (n - t + 2.0 * w)
        - (w + n) ** 2 / (2.0 * t**2 * w1)
        - (t - w) ** 2 / (2.0 * t**2 * (w1 - 1.0))
    )
    return d3w - rhs


def _sigma_third_derivative(t, s, s1, s2, p, r1, r2) -> float:
    # d/dt of the sigma-form; every term carries s'', which cancels.
    bracket = s - t * s1 - 2.0 * s1**2 + p * s1
    poly = 2.0 * s1 * (s1 - r1) * (s1 - r2) + s1**2 * (2.0 * s1 - r1 - r2)
    return (bracket * (p - t - 4.0 * s1) - 2.0 * poly - t * s2) / t**2


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

class SigmaTrajectory:
    """Dense solution of the sigma-form ODE on [t_start, t_end].

    Below t_start the exact boundary series is evaluated directly; its
    truncation error at t_start is many orders below the integration
    tolerance, so the two pieces join smoothly.
    """

    def __init__(self, n, k, kind, seed_series, t_start, t_end, sol,
                 hybrid=False, splices=()):
        self.n, self.k, self.kind = n, k, kind
        self.seed_series = seed_series
        self.a = seed_series.coefficient(n + 1)
        self.t_start, self.t_end = t_start, t_end
        self._sol = sol
        self.hybrid = hybrid
        self.splices = tuple(splices)
        self._params = _parameters(n, k, kind)
        self._c = [float(c) for c in seed_series.coeffs]

    def raw(self, t: float):
        """(sigma, sigma', sigma'') at t; boundary series below t_start."""
        if t <= self.t_start:
            return (
                _poly_eval(self._c, t, 0),
                _poly_eval(self._c, t, 1),
                _poly_eval(self._c, t, 2),
            )
        y = self._sol(min(t, self.t_end))
        return float(y[0]), float(y[1]), float(y[2])

    def state(self, t: float) -> SigmaState:
        s, s1, s2 = self.raw(t)
        return SigmaState(t=t, sigma=s, dsigma=s1, d2sigma=s2, n=self.n, k=self.k)

    def w_state(self, t: float) -> WState:
        return w_from_sigma(self.state(t))

    def third_derivative(self, t: float) -> float:
        if t <= self.t_start:
            return _poly_eval(self._c, t, 3)
        s, s1, s2 = self.raw(t)
        return _sigma_third_derivative(t, s, s1, s2, *self._params)

    def residual(self, t: float) -> float:
        s, s1, s2 = self.raw(t)
        return _sigma_form_residual(t, s, s1, s2, *self._params)

    def log_integral(self, t: float) -> float:
        """int_0^t sigma(t')/t' dt'; the series coefficients integrate
        termwise (sigma starts at t^{n+1}, so sigma/t' is regular)."""
        head_at = min(t, self.t_start)
        head = sum(
            c * head_at**j / j for j, c in enumerate(self._c) if j and c
        )
        if t <= self.t_start:
            return head
        return head + float(self._sol(min(t, self.t_end))[3])

    def normalized_determinant(self, t: float) -> float:
        """e^{-kt} D_n(t) (weakly increasing) or its k->-k, t->-t analogue."""
        return math.exp(-self.log_integral(t))

    def sample(self, num: int = 50):
        ts = np.linspace(self.t_start, self.t_end, num)
        return [self.state(float(t)) for t in ts]


def _poly_eval(coeffs, t: float, deriv: int) -> float:
    """Value of the deriv-th derivative of sum c_j t^j, by Horner."""
    acc = 0.0
    for j in range(len(coeffs) - 1, deriv - 1, -1):
        fall = 1.0
        for i in range(deriv):
            fall *= j - i
        acc = acc * t + coeffs[j] * fall
    return acc


class _ZeroTrajectory(SigmaTrajectory):
    """sigma identically zero (strictly-decreasing case with n >= k)."""

    def __init__(self, n, k, kind, t_end):
        super().__init__(
            n, k, kind, RationalSeries.zero(n + 1), t_end, t_end, None
        )

    def raw(self, t):
        return 0.0, 0.0, 0.0

    def third_derivative(self, t):
        return 0.0

    def log_integral(self, t):
        return 0.0


def _toeplitz_state(n: int, k: int, t: float, h: float = 1e-5):
    """(sigma, sigma', sigma'') from determinants, for hybrid restarts."""
    vals = [k * s - s * recursion_quantities(n, k, s, "I").u_plus
            for s in (t - h, t, t + h)]
    return (
        vals[1],
        (vals[2] - vals[0]) / (2 * h),
        (vals[2] - 2 * vals[1] + vals[0]) / h**2,
    )


def integrate_sigma(
    n: int,
    k: int,
    t_end: float,
    tol: float = DEFAULT_TOL,
    t_start: float | None = None,
    kind: str = "I",
    max_restarts: int = 3,
) -> SigmaTrajectory:
    """Integrate the sigma-form from its boundary series up to t_end.

    State vector (sigma, sigma', sigma'', I) with I' = sigma/t accumulating
    the log-integral.  RK45 with rtol = atol = tol.  The returned trajectory
    is validated against the sigma-form residual; if the residual ever
    exceeds 10 * tol (it is conserved in exact arithmetic, so this signals
    numerical trouble), the integration restarts from a Toeplitz-derived
    state at the failure point and the result is flagged hybrid.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if seed_coefficient(n, k, kind) == 0:
        return _ZeroTrajectory(n, k, kind, t_end)
    p, r1, r2 = _parameters(n, k, kind)
    if t_start is None:
        t_start = 1e-2
    if t_end <= t_start:
        raise ValueError(f"t_end = {t_end} must exceed t_start = {t_start}")
    seed = sigma_series(n, k, kind)
    coeffs = [float(c) for c in seed.coeffs]

    def rhs(t, y):
        s, s1, s2, _ = y
        return (s1, s2, _sigma_third_derivative(t, s, s1, s2, p, r1, r2), s / t)

    y0 = (
        _poly_eval(coeffs, t_start, 0),
        _poly_eval(coeffs, t_start, 1),
        _poly_eval(coeffs, t_start, 2),
        0.0,
    )

    splices = []
    start, state = t_start, y0
    pieces = []
    for attempt in range(max_restarts + 1):
        # near the origin the state scales like t^{n+1}; a pure-absolute
        # tolerance at that size would perturb the effective boundary
        # coefficient, so atol is kept well below rtol
        sol = solve_ivp(
            rhs, (start, t_end), state, method="RK45",
            rtol=tol, atol=tol * 1e-4, dense_output=True,
        )
        if not sol.success:
            raise IntegrationError(
                f"sigma-form integration failed at t = {sol.t[-1]:.4g}: "
                f"{sol.message}; restart from a larger t_start or looser tol"
            )
        # the residual is a first integral of the ODE, so growth beyond the
        # tolerance (relative to the term sizes) flags numerical trouble
        bad_t = None
        for t in np.linspace(start, sol.t[-1], 40):
            y = sol.sol(t)
            res = _sigma_form_residual(t, y[0], y[1], y[2], p, r1, r2)
            scale = _sigma_form_scale(t, y[0], y[1], y[2], p, r1, r2)
            if abs(res) > 10.0 * tol * scale:
                bad_t = float(t)
                break
        if bad_t is None:
            pieces.append((start, t_end, sol.sol))
            break
        if kind != "I" or attempt == max_restarts:
            raise IntegrationError(
                f"sigma-form residual exceeded 10 x tol = {10 * tol:.2e} "
                f"(relative) near t = {bad_t:.4g}; loosen tol or restart "
                "from a Toeplitz-derived state there"
            )
        # splice: keep the good piece, restart from Toeplitz data
        pieces.append((start, bad_t, sol.sol))
        s, s1, s2 = _toeplitz_state(n, k, bad_t)
        integral = float(sol.sol(bad_t)[3])
        state = (s, s1, s2, integral)
        start = bad_t
        splices.append(bad_t)

    if len(pieces) == 1:
        dense = pieces[0][2]
    else:
        segments = pieces

        def dense(t, _segments=segments):
            for lo, hi, f in _segments:
                if t <= hi:
                    return f(max(t, lo))
            return _segments[-1][2](hi)

    return SigmaTrajectory(
        n, k, kind, seed, t_start, t_end, dense,
        hybrid=bool(splices), splices=splices,
    )


def determinant_from_sigma(trajectory: SigmaTrajectory, t: float) -> float:
    """e^{-kt} D_n(t) from the integrated trajectory (t inside its range)."""
    if t > trajectory.t_end + 1e-12:
        raise ValueError(f"t = {t} beyond the trajectory end {trajectory.t_end}")
    return trajectory.normalized_determinant(t)
