"""Exact combinatorics of monotone subsequences in words over a k-letter alphabet.

A word of length N is a sequence of letters from {1, ..., k}, each word
carrying probability k^(-N).  The two statistics of interest are the length
of the longest weakly increasing subsequence and the length of the longest
strictly decreasing subsequence.  Their distribution functions

    F_I(n; k, N) = Prob(longest weakly increasing <= n)
    F_D(n; k, N) = Prob(longest strictly decreasing <= n)

are computed here two independent ways: by enumerating every word, and by
summing hook-length / hook-content products over partition shapes (the RSK
image).  Everything in this module is exact: probabilities are Fractions,
counts are Python big integers.  The other routes in the package are tested
against these values.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import BudgetExceededError

DEFAULT_ENUMERATION_BUDGET = 10**7
DEFAULT_PARTITION_BUDGET = 500


# ---------------------------------------------------------------------------
# subsequence statistics
# ---------------------------------------------------------------------------

def longest_weakly_increasing(word) -> int:
    """Length of the longest weakly increasing subsequence.

    Patience-sorting pile tops, O(N log N).  The empty word returns 0.
    """
    tails = []
    for x in word:
        i = bisect_right(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def longest_strictly_decreasing(word) -> int:
    """Length of the longest strictly decreasing subsequence.

    Reversing the word turns strictly decreasing subsequences into strictly
    increasing ones, so this is patience sorting with strict comparison.
    """
    tails = []
    for x in reversed(word):
        i = bisect_left(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def longest_monotone_bruteforce(word, which: str) -> int:
    """Exponential-time reference that scans all 2^N - 1 subsequences.

    Kept as the independent oracle for the fast functions above; only
    usable for short words.
    """
    if which not in ("I", "D"):
        raise ValueError(f"which must be 'I' or 'D', got {which!r}")
    n = len(word)
    best = 0
    for mask in range(1, 1 << n):
        sub = [word[i] for i in range(n) if (mask >> i) & 1]
        if which == "I":
            ok = all(a <= b for a, b in zip(sub, sub[1:]))
        else:
            ok = all(a > b for a, b in zip(sub, sub[1:]))
        if ok and len(sub) > best:
            best = len(sub)
    return best


# ---------------------------------------------------------------------------
# partitions and tableaux counts
# ---------------------------------------------------------------------------

class Partition:
    """A partition: weakly decreasing positive parts.

    Accepts any iterable of nonnegative integers (trailing zeros are
    dropped); raises on increasing or negative parts.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        self.parts = parts

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other):
        other_parts = other.parts if isinstance(other, Partition) else tuple(other)
        return self.parts == other_parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        cols = [0] * self.parts[0]
        for p in self.parts:
            for j in range(p):
                cols[j] += 1
        return Partition(cols)

    def hook_lengths(self):
        """Hook length of every cell, row by row."""
        conj = self.conjugate().parts
        return [
            [self.parts[i] - j + conj[j] - i - 1 for j in range(self.parts[i])]
            for i in range(len(self.parts))
        ]


def _as_parts(shape):
    return shape.parts if isinstance(shape, Partition) else Partition(shape).parts


def standard_tableaux_count(shape) -> int:
    """Number of standard Young tableaux of the given shape (hook lengths)."""
    lam = Partition(_as_parts(shape))
    n = lam.weight
    if n == 0:
        return 1
    hooks = 1
    for row in lam.hook_lengths():
        for h in row:
            hooks *= h
    return math.factorial(n) // hooks


def semistandard_tableaux_count(shape, k: int) -> int:
    """Number of semistandard tableaux of the shape with entries <= k.

    Hook-content formula; zero whenever the shape has more than k rows.
    """
    lam = Partition(_as_parts(shape))
    if len(lam) > k:
        return 0
    contents = 1
    hooks = 1
    for i, row in enumerate(lam.hook_lengths()):
        for j, h in enumerate(row):
            contents *= k + j - i
            hooks *= h
    return contents // hooks


def partitions(n: int, max_len=None, max_part=None):
    """Yield all partitions of n as tuples, optionally bounded in length/part."""
    if max_len is None:
        max_len = n
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_len <= 0 or max_part <= 0:
        return

    def rec(remaining, largest, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        top = min(largest, remaining)
        # smallest usable part: ceil(remaining / slots)
        low = -(-remaining // slots)
        for p in range(top, low - 1, -1):
            for rest in rec(remaining - p, p, slots - 1):
                yield (p,) + rest

    yield from rec(n, max_part, max_len)


# ---------------------------------------------------------------------------
# RSK row insertion
# ---------------------------------------------------------------------------

@dataclass
class TableauPair:
    """Output of RSK: P semistandard (letters), Q standard (positions)."""

    P: list
    Q: list

    @property
    def shape(self):
        return Partition(len(row) for row in self.P)


def rsk(word) -> TableauPair:
    """Robinson-Schensted-Knuth row insertion of a word.

    The first row of the common shape has length equal to the longest weakly
    increasing subsequence; the number of rows equals the longest strictly
    decreasing subsequence.
    """
    P, Q = [], []
    for pos, x in enumerate(word, start=1):
        row = 0
        while True:
            if row == len(P):
                P.append([x])
                Q.append([pos])
                break
            r = P[row]
            i = bisect_right(r, x)
            if i == len(r):
                r.append(x)
                Q[row].append(pos)
                break
            x, r[i] = r[i], x
            row += 1
    return TableauPair(P, Q)


# ---------------------------------------------------------------------------
# exact distributions
# ---------------------------------------------------------------------------

@dataclass
class DistributionTable:
    """Map (n, k, N) -> exact probability, tagged with the route that made it."""

    which: str
    route: str
    entries: dict = field(default_factory=dict)

    def value(self, n: int, k: int, N: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n >= N:
            return Fraction(1)
        return self.entries[(n, k, N)]


def exact_distribution_enumeration(
    k: int, N: int, which: str = "I", budget: int = DEFAULT_ENUMERATION_BUDGET
) -> DistributionTable:
    """F(n; k, N) for all n, by visiting every one of the k^N words."""
    if k**N > budget:
        raise BudgetExceededError(
            f"k^N = {k**N} words exceeds the enumeration budget of {budget}"
        )
    stat = longest_weakly_increasing if which == "I" else longest_strictly_decreasing
    if which not in ("I", "D"):
        raise ValueError(f"which must be 'I' or 'D', got {which!r}")
    counts = [0] * (N + 1)
    for w in product(range(1, k + 1), repeat=N):
        counts[stat(w)] += 1
    total = k**N
    table = DistributionTable(which=which, route="enumeration")
    cum = 0
    for n in range(N + 1):
        cum += counts[n]
        table.entries[(n, k, N)] = Fraction(cum, total)
    return table


def distribution_via_tableaux(
    n: int, k: int, N: int, which: str = "I", budget: int = DEFAULT_PARTITION_BUDGET
) -> Fraction:
    """F(n; k, N) as a sum of d_lambda(k) * f^lambda over partition shapes.

    Weakly increasing caps the first row (lambda_1 <= n); strictly
    decreasing caps the number of rows.  Shapes with more than k rows carry
    no semistandard fillings and are skipped up front.
    """
    if which not in ("I", "D"):
        raise ValueError(f"which must be 'I' or 'D', got {which!r}")
    if N > budget:
        raise BudgetExceededError(
            f"N = {N} exceeds the partition enumeration budget of {budget}"
        )
    if n < 0:
        return Fraction(0)
    if N == 0 or n >= N:
        return Fraction(1)
    if which == "I":
        shapes = partitions(N, max_len=k, max_part=n)
    else:
        shapes = partitions(N, max_len=min(n, k))
    total = 0
    for lam in shapes:
        total += semistandard_tableaux_count(lam, k) * standard_tableaux_count(lam)
    return Fraction(total, k**N)


def first_row_distribution(k: int, N: int, budget: int = DEFAULT_PARTITION_BUDGET):
    """Exact cumulative distribution of the first RSK row length at (k, N).

    Returns a list c with c[n] = F_I(n; k, N) as a Fraction, n = 0..N.
    One pass over all shapes, bucketed by first-row length; this is what
    makes N in the hundreds affordable.
    """
    if N > budget:
        raise BudgetExceededError(
            f"N = {N} exceeds the partition enumeration budget of {budget}"
        )
    weights = [0] * (N + 1)
    for lam in partitions(N, max_len=k):
        weights[lam[0] if lam else 0] += (
            semistandard_tableaux_count(lam, k) * standard_tableaux_count(lam)
        )
    total = k**N
    out = []
    cum = 0
    for n in range(N + 1):
        cum += weights[n]
        out.append(Fraction(cum, total))
    return out
