"""Limit laws: traceless GUE, the GUE convolution identity, finite-N
convergence, and the large-k Tracy-Widom limit.

The centered, normalized longest weakly increasing subsequence length,
(l - N/k)/sqrt(2N/k), converges as N -> infinity to the largest-eigenvalue
law of the k x k GUE conditioned on trace zero,

    F0(s, k) = gamma_k int_{Z_s} e^{-sum x_j^2} Delta(x)^2 dH(x),

where Z_s is the trace-zero hyperplane cut at max x_j <= s and
1/gamma_k = 1! 2! ... k! (2 pi)^{(k-1)/2} 2^{-(k^2-1)/2}.  The hyperplane
carries (k-1)-dimensional Lebesgue measure; parametrizing by x_1..x_{k-1}
(with x_k = -sum) contributes a Jacobian sqrt(k), and the convention is
pinned by the normalization F0(inf, k) = 1.  The unconditioned GUE law
F(s, k) is the Gaussian smoothing sqrt(k/pi) int e^{-k y^2} F0(s-y, k) dy.

As k -> infinity, F0(sqrt(2k) + s/(sqrt(2) k^{1/6}), k) -> F2(s), the
Tracy-Widom law, computed from the Hastings-McLeod solution of
q'' = s q + 2 q^3 with q ~ Ai at +infinity.  That solution is a separatrix:
integrating backward, perturbations grow like exp(2 sqrt 2 |s|^{3/2} / 3),
which costs roughly nine digits by s = -8; the integration therefore runs
at tight tolerance and is only offered down to s = -8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.special import airy, erf, ndtri

from .combinatorics import first_row_distribution
from .errors import BudgetExceededError, IntegrationError, PrecisionNotReachedError

_CUTOFF = 8.5  # |x| beyond which exp(-x^2) is below 3e-32


def log_gamma_k(k: int) -> float:
    """log of the traceless-GUE normalization constant gamma_k."""
    acc = 0.5 * (k * k - 1) * math.log(2.0) - 0.5 * (k - 1) * math.log(2.0 * math.pi)
    for j in range(1, k + 1):
        acc -= math.lgamma(j + 1)
    return acc


def gamma_k(k: int) -> float:
    return math.exp(log_gamma_k(k))


def _vandermonde_sq(columns):
    """Delta(x)^2 over the full coordinate list (arrays broadcast)."""
    out = 1.0
    for i in range(len(columns)):
        for j in range(i + 1, len(columns)):
            out = out * (columns[i] - columns[j]) ** 2
    return out


def f0_closed_form_k2(s: float) -> float:
    """F0(s, 2) = erf(sqrt(2) s) - (2 sqrt 2/sqrt pi) s exp(-2 s^2), s >= 0."""
    if s <= 0:
        return 0.0
    return float(
        erf(math.sqrt(2.0) * s)
        - (2.0 * math.sqrt(2.0) / math.sqrt(math.pi)) * s * math.exp(-2.0 * s * s)
    )


def _f0_integral(s: float, k: int, order: int) -> float:
    """Nested Gauss-Legendre over {x_j <= s, sum_{j<k} x_j >= -s} in k-1 dims.

    The integrand (Gaussian times Delta^2 with x_k = -sum) is smooth and the
    region is a polytope, so iterated integrals with affine limits converge
    spectrally.  Bounds are clipped to +-_CUTOFF where the Gaussian is
    negligible.
    """
    dim = k - 1
    hi = min(s, _CUTOFF)
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def integrate(level, prefix, prefix_sum):
        # remaining coordinates after this one can contribute at most
        # (dim - level - 1) * hi to the sum constraint
        lo = max(-s - prefix_sum - (dim - level - 1) * hi, -_CUTOFF)
        if lo >= hi:
            return 0.0
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        xs = mid + half * nodes
        if level == dim - 1:
            # last free coordinate: vectorize, appending x_k = -sum
            columns = [np.full_like(xs, v) for v in prefix] + [xs]
            columns.append(-(prefix_sum + xs))
            expo = sum(c * c for c in columns)
            vals = np.exp(-expo) * _vandermonde_sq(columns)
            return half * float(weights @ vals)
        acc = 0.0
        for xv, wv in zip(xs, weights):
            acc += wv * integrate(level + 1, prefix + [xv], prefix_sum + xv)
        return half * acc

    return integrate(0, [], 0.0)


def f0(s: float, k: int, method: str = "quadrature", order: int = 64,
       samples: int = 200_000, seed: int = 0, strata: int = 64,
       target_se: float | None = None):
    """Largest-eigenvalue law of the trace-zero k x k GUE at s.

    Quadrature (k <= 4) returns a float; Monte Carlo returns a
    MonteCarloResult carrying the value and its standard error.
    F0 vanishes for s <= 0: on the trace-zero hyperplane max x_j >= 0.
    """
    if k < 2:
        raise ValueError("the trace-zero ensemble is degenerate below k = 2")
    if method == "quadrature":
        if k > 4:
            raise BudgetExceededError(
                f"quadrature is budgeted to k <= 4 (a {k - 1}-dim region integral)"
            )
        if s <= 0:
            return 0.0
        return math.exp(log_gamma_k(k)) * math.sqrt(k) * _f0_integral(s, k, order)
    if method == "montecarlo":
        return f0_montecarlo(s, k, samples=samples, seed=seed, strata=strata,
                             target_se=target_se)
    raise ValueError(f"method must be 'quadrature' or 'montecarlo', got {method!r}")


class MonteCarloResult(NamedTuple):
    value: float
    standard_error: float
    samples: int

    def __float__(self):
        return self.value


def f0_montecarlo(s: float, k: int, samples: int = 200_000, seed: int = 0,
                  strata: int = 64, target_se: float | None = None) -> MonteCarloResult:
    """F0(s, k) by stratified Gaussian importance sampling.

    Sampling density is proportional to the Gaussian factor
    exp(-(sum x^2 + (sum x)^2)) on the k-1 coordinates; the first standard
    normal coordinate is stratified by inverse CDF into equal-probability
    strata, each driven by its own counter-based (Philox) stream, so
    results are reproducible for a given seed regardless of scheduling.
    """
    if k < 2:
        raise ValueError("the trace-zero ensemble is degenerate below k = 2")
    if s <= 0:
        return MonteCarloResult(0.0, 0.0, samples)
    dim = k - 1
    # covariance of exp(-x^T A x) with A = I + ones: A^-1/2 = (I - J/k)/2
    cov = 0.5 * (np.eye(dim) - np.ones((dim, dim)) / k)
    chol = np.linalg.cholesky(cov)
    prefactor = math.exp(log_gamma_k(k)) * math.pi ** (0.5 * dim)

    per = max(samples // strata, 2)
    means = np.empty(strata)
    variances = np.empty(strata)
    base = np.random.Philox(key=seed)
    for i in range(strata):
        rng = np.random.Generator(base.jumped(i))
        u = (i + rng.random(per)) / strata
        z = rng.standard_normal((per, dim))
        z[:, 0] = ndtri(u)
        x = z @ chol.T
        total = x.sum(axis=1)
        ok = (x.max(axis=1, initial=-np.inf) <= s) & (-total <= s)
        columns = [x[:, j] for j in range(dim)] + [-total]
        vals = _vandermonde_sq(columns) * ok
        means[i] = vals.mean()
        variances[i] = vals.var(ddof=1) / per
    value = prefactor * float(means.mean())
    stderr = prefactor * float(np.sqrt(variances.sum()) / strata)
    if target_se is not None and stderr > target_se:
        raise PrecisionNotReachedError(
            f"Monte Carlo missed the requested precision {target_se:.3e}",
            value, stderr,
        )
    return MonteCarloResult(value, stderr, per * strata)


# ---------------------------------------------------------------------------
# unconditioned GUE
# ---------------------------------------------------------------------------

def _gue_direct(s: float, k: int, order: int) -> float:
    """c_k int_{(-inf, s]^k} e^{-sum x^2} Delta^2, nested Gauss-Legendre."""
    if k > 3:
        raise BudgetExceededError(
            f"direct GUE quadrature is budgeted to k <= 3, got k = {k}"
        )
    hi = min(s, _CUTOFF)
    lo = -_CUTOFF
    if hi <= lo:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(order)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    xs = mid + half * nodes

    def integrate(level, prefix):
        if level == k - 1:
            columns = [np.full_like(xs, v) for v in prefix] + [xs]
            expo = sum(c * c for c in columns)
            vals = np.exp(-expo) * _vandermonde_sq(columns)
            return half * float(weights @ vals)
        return half * sum(
            wv * integrate(level + 1, prefix + [xv]) for xv, wv in zip(xs, weights)
        )

    c_k = math.exp(log_gamma_k(k)) / math.sqrt(math.pi)
    return c_k * integrate(0, [])


def gue_F(s: float, k: int, route: str = "convolution", order: int = 64,
          f0_eval: Callable | None = None) -> float:
    """Prob(largest GUE eigenvalue <= s) for the k x k ensemble.

    The convolution route smooths F0 with the Gaussian weight of the trace,
    F = sqrt(k/pi) int e^{-k y^2} F0(s - y, k) dy, evaluated by
    Gauss-Hermite; the direct route does the full k-dim integral.
    """
    if k < 2:
        raise ValueError("need k >= 2 (use the error function for k = 1)")
    if route == "direct":
        return _gue_direct(s, k, order)
    if route != "convolution":
        raise ValueError(f"route must be 'convolution' or 'direct', got {route!r}")
    if f0_eval is None:
        if k == 2:
            f0_eval = f0_closed_form_k2
        else:
            f0_eval = lambda v: f0(v, k, order=order)
    u, w = np.polynomial.hermite.hermgauss(80)
    scale = 1.0 / math.sqrt(k)
    vals = np.array([f0_eval(s - ui * scale) for ui in u])
    return float(w @ vals) / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# finite-N convergence
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    """Sup-norm distance between exact scaled distributions and the limit."""

    k: int
    N_list: list
    s_grid: np.ndarray
    sup_errors: list
    tables: list = field(repr=False, default_factory=list)

    @property
    def decreasing(self) -> bool:
        return all(a > b for a, b in zip(self.sup_errors, self.sup_errors[1:]))


def scaled_cdf_exact(k: int, N: int, s_values, cumulative=None):
    """Prob((l - N/k)/sqrt(2N/k) <= s) exactly, as floats, on a grid of s."""
    if cumulative is None:
        cumulative = first_row_distribution(k, N)
    sigma = math.sqrt(2.0 * N / k)
    out = []
    for s in np.atleast_1d(s_values):
        n = math.floor(N / k + s * sigma)
        if n < 0:
            out.append(0.0)
        elif n >= N:
            out.append(1.0)
        else:
            out.append(float(cumulative[n]))
    return np.array(out)


def theorem4_convergence(k: int, N_list, s_grid=None,
                         reference: Callable | None = None,
                         continuity_correction: bool = False) -> ConvergenceReport:
    """Exact scaled distributions against F0(., k) for increasing N.

    The sup error over the grid must shrink along N_list.  The exact law is
    a staircase with jumps of height ~ density / sqrt(2N/k); comparing at
    the stated s (the literal reading of Prob(... <= s)) makes the sup
    error saturate at the full local jump, while the standard lattice
    continuity correction (continuity_correction=True) evaluates the limit
    law at the midpoint of the stair containing s and halves it.
    """
    if s_grid is None:
        s_grid = np.linspace(-2.4, 2.4, 49)
    s_grid = np.asarray(s_grid, dtype=float)
    if reference is None:
        if k == 2:
            reference = f0_closed_form_k2
        else:
            reference = lambda s: f0(s, k)
    sup_errors, tables = [], []
    for N in N_list:
        cumulative = first_row_distribution(k, N)
        exact = scaled_cdf_exact(k, N, s_grid, cumulative=cumulative)
        if continuity_correction:
            sigma = math.sqrt(2.0 * N / k)
            ref_at = [(math.floor(N / k + s * sigma) + 0.5 - N / k) / sigma
                      for s in s_grid]
        else:
            ref_at = s_grid
        ref_vals = np.array([reference(float(s)) for s in ref_at])
        sup_errors.append(float(np.max(np.abs(exact - ref_vals))))
        tables.append(exact)
    return ConvergenceReport(k=k, N_list=list(N_list), s_grid=s_grid,
                             sup_errors=sup_errors, tables=tables)


# ---------------------------------------------------------------------------
# Tracy-Widom F2 via Painleve II
# ---------------------------------------------------------------------------

@dataclass
class F2Result:
    """Dense Hastings-McLeod trajectory and the distribution built on it.

    value(s) = exp(-I(s)) with I(s) = int_s^inf (x-s) q(x)^2 dx carried as
    an extra ODE component (I' = -J, J' = -q^2, J the integral of q^2).
    """

    s_min: float
    s_max: float
    _sol: object = field(repr=False)

    def q(self, s):
        return self._sol(np.clip(s, self.s_min, self.s_max))[0]

    def value(self, s):
        s = np.asarray(s, dtype=float)
        y = self._sol(np.clip(s, self.s_min, self.s_max))
        out = np.exp(-y[3])
        return out if out.ndim else float(out)

    def q_residual(self, s, h=1e-3):
        """Finite-difference check of q'' = s q + 2 q^3 along the trajectory."""
        q = self.q
        d2 = (q(s + h) - 2.0 * q(s) + q(s - h)) / h**2
        return float(d2 - s * q(s) - 2.0 * q(s) ** 3)


def hastings_mcleod(s_min: float = -8.0, s_max: float = 6.0,
                    tol: float = 1e-13) -> F2Result:
    """Integrate q'' = s q + 2 q^3 backward from q ~ Ai at s_max.

    Airy seeds come from scipy's hybrid series/asymptotic implementation
    (validated in the tests against the defining ODE).  The tail pieces of
    J and I beyond s_max use int_s^inf Ai^2 = Ai'(s)^2 - s Ai(s)^2 and a
    direct quadrature.

    Errors injected near s = 0 are amplified by ~1e9 at s = -8, so the
    default is an 8th-order method at rtol 1e-13; looser tolerances can
    leave the separatrix (and blow up) before -8.
    """
    if s_min < -8.0 - 1e-9:
        raise ValueError(
            "backward integration loses ~9 digits by s = -8; refuse below"
        )
    ai, aip, _, _ = airy(s_max)
    j0 = aip**2 - s_max * ai**2
    i0, _ = quad(lambda x: (x - s_max) * airy(x)[0] ** 2, s_max, s_max + 30.0)

    def rhs(s, y):
        q, dq, j, _ = y
        return (dq, s * q + 2.0 * q**3, -q * q, -j)

    blow_up = lambda s, y: abs(y[0]) - 1e3
    blow_up.terminal = True
    sol = solve_ivp(
        rhs, (s_max, s_min), (ai, aip, j0, i0), method="DOP853",
        rtol=tol, atol=tol * 1e-2, dense_output=True, events=blow_up,
    )
    if not sol.success or sol.t[-1] > s_min:
        raise IntegrationError(
            f"Hastings-McLeod trajectory blew up near s = {sol.t[-1]:.3f}; "
            "tighten tol or seed from a larger s_max"
        )
    return F2Result(s_min=s_min, s_max=s_max, _sol=sol.sol)


def f2(s_grid, tol: float = 1e-13, solution: F2Result | None = None):
    """Tracy-Widom F2 on a grid inside [-8, 6]."""
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.min() < -8.0 - 1e-9 or s_grid.max() > 6.0 + 1e-9:
        raise ValueError("grid must lie within [-8, 6]")
    if solution is None:
        solution = hastings_mcleod(tol=tol)
    return np.array([solution.value(float(s)) for s in s_grid])


# ---------------------------------------------------------------------------
# large-k limit
# ---------------------------------------------------------------------------

@dataclass
class FklimReport:
    k_list: list
    s_grid: np.ndarray
    errors: dict  # k -> max |F0(edge-scaled) - F2| over the grid


def edge_scaled_argument(s: float, k: int) -> float:
    """The Tracy-Widom scaling sqrt(2k) + s / (sqrt 2 k^{1/6})."""
    return math.sqrt(2.0 * k) + s / (math.sqrt(2.0) * k ** (1.0 / 6.0))


def fklim_check(k_list, s_grid=None, order: int = 48,
                solution: F2Result | None = None) -> FklimReport:
    """Tabulate F0 at the edge scaling against F2; errors shrink slowly in k."""
    if s_grid is None:
        s_grid = np.linspace(-2.0, 2.0, 9)
    s_grid = np.asarray(s_grid, dtype=float)
    if solution is None:
        solution = hastings_mcleod()
    f2_vals = np.array([solution.value(float(s)) for s in s_grid])
    errors = {}
    for k in k_list:
        if k == 2:
            vals = np.array(
                [f0_closed_form_k2(edge_scaled_argument(float(s), k)) for s in s_grid]
            )
        else:
            vals = np.array(
                [f0(edge_scaled_argument(float(s), k), k, order=order) for s in s_grid]
            )
        errors[k] = float(np.max(np.abs(vals - f2_vals)))
    return FklimReport(k_list=list(k_list), s_grid=s_grid, errors=errors)
