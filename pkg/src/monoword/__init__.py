"""Distributions of the longest monotone subsequences in random words.

For words of length N over a k-letter alphabet, the distributions of the
longest weakly increasing and longest strictly decreasing subsequence
lengths are computed by five mathematically independent routes:

* ``combinatorics`` -- exact enumeration and RSK/tableaux counting,
* ``series``        -- exact Toeplitz determinants over truncated rational
                       power series (the exponential generating functions),
* ``toeplitz``      -- floating-point Toeplitz determinants plus the full
                       recursion/differentiation identity calculus,
* ``painleve``      -- a Painleve V sigma-form ODE integrated from its
                       boundary condition at t = 0,
* ``laguerre``      -- smallest-eigenvalue probabilities of the k x k
                       Laguerre ensemble (Fredholm determinant and direct
                       quadrature),

with ``limits`` covering the N -> infinity traceless-GUE law, the GUE
convolution identity, and the large-k Tracy-Widom limit.  Every route is
cross-validated against the others; ``gessel`` holds the exact small-size
checks of the determinantal identities the generating functions rest on.
"""

from . import combinatorics, gessel, laguerre, limits, painleve, series, toeplitz
from .errors import (
    BudgetExceededError,
    IntegrationError,
    PrecisionNotReachedError,
    SingularMatrixError,
)

__all__ = [
    "combinatorics",
    "gessel",
    "laguerre",
    "limits",
    "painleve",
    "series",
    "toeplitz",
    "BudgetExceededError",
    "IntegrationError",
    "PrecisionNotReachedError",
    "SingularMatrixError",
]

__version__ = "0.1.0"
