import math
import random
from fractions import Fraction

import pytest

from monoword.combinatorics import (
    DistributionTable,
    Partition,
    distribution_via_tableaux,
    exact_distribution_enumeration,
    first_row_distribution,
    longest_monotone_bruteforce,
    longest_strictly_decreasing,
    longest_weakly_increasing,
    partitions,
    rsk,
    semistandard_tableaux_count,
    standard_tableaux_count,
)
from monoword.errors import BudgetExceededError


class TestSubsequenceStatistics:
    def test_known_values(self):
        assert longest_weakly_increasing([1, 1, 2]) == 3
        assert longest_weakly_increasing([2, 1]) == 1
        assert longest_weakly_increasing([2, 1, 2, 1, 1]) == 3
        assert longest_strictly_decreasing([1, 1, 1]) == 1
        assert longest_strictly_decreasing([3, 2, 1]) == 3
        assert longest_strictly_decreasing([2, 1, 2, 1]) == 2

    def test_empty_word_convention(self):
        assert longest_weakly_increasing([]) == 0
        assert longest_strictly_decreasing([]) == 0

    def test_against_bruteforce(self):
        rng = random.Random(1234)
        for _ in range(400):
            n = rng.randint(1, 11)
            k = rng.randint(1, 5)
            w = [rng.randint(1, k) for _ in range(n)]
            assert longest_weakly_increasing(w) == longest_monotone_bruteforce(w, "I")
            assert longest_strictly_decreasing(w) == longest_monotone_bruteforce(w, "D")


class TestPartition:
    def test_validation(self):
        assert Partition([3, 1, 0]).parts == (3, 1)
        with pytest.raises(ValueError):
            Partition([1, 2])
        with pytest.raises(ValueError):
            Partition([2, -1])

    def test_conjugate(self):
        assert Partition([3, 2]).conjugate().parts == (2, 2, 1)
        assert Partition([]).conjugate().parts == ()

    def test_hooks(self):
        assert Partition([3, 2]).hook_lengths() == [[4, 3, 1], [2, 1]]

    def test_partition_generator_counts(self):
        # p(n) for n = 0..9
        expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
        for n, want in enumerate(expected):
            assert sum(1 for _ in partitions(n)) == want
        assert list(partitions(4, max_len=2)) == [(4,), (3, 1), (2, 2)]
        assert list(partitions(4, max_part=2)) == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]


class TestTableauxCounts:
    def test_standard_small(self):
        assert standard_tableaux_count((1,)) == 1
        assert standard_tableaux_count((2, 1)) == 2
        assert standard_tableaux_count((3, 2)) == 5

    def test_standard_vs_enumeration(self):
        # brute force: count standard fillings directly
        def count_standard(shape):
            shape = tuple(shape)
            cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
            total = 0

            def place(step, filled):
                nonlocal total
                if step == len(cells):
                    total += 1
                    return
                for (i, j) in cells:
                    if filled.get((i, j)) is None:
                        if j and filled.get((i, j - 1)) is None:
                            continue
                        if i and filled.get((i - 1, j)) is None:
                            continue
                        filled[(i, j)] = step
                        place(step + 1, filled)
                        del filled[(i, j)]

            place(0, {})
            return total

        for shape in [(2, 2), (3, 1), (4, 2), (2, 2, 1), (3, 2, 1)]:
            assert standard_tableaux_count(shape) == count_standard(shape)

    def test_semistandard_small(self):
        assert semistandard_tableaux_count((1,), 3) == 3
        assert semistandard_tableaux_count((2,), 2) == 3
        assert semistandard_tableaux_count((1, 1), 2) == 1
        assert semistandard_tableaux_count((1, 1, 1), 2) == 0

    def test_rsk_partition_of_unity(self):
        # sum over shapes of d_lambda(k) f^lambda = k^N
        for k in (1, 2, 3, 4):
            for N in range(0, 9):
                total = sum(
                    semistandard_tableaux_count(lam, k) * standard_tableaux_count(lam)
                    for lam in partitions(N, max_len=k)
                )
                assert total == k**N


class TestRSK:
    def test_sorted_word_single_row(self):
        pair = rsk([1, 2, 3])
        assert pair.P == [[1, 2, 3]]
        assert pair.Q == [[1, 2, 3]]
        assert pair.shape.parts == (3,)

    def test_single_bump(self):
        assert rsk([2, 1]).shape.parts == (1, 1)

    def test_tableau_validity(self):
        rng = random.Random(99)
        for _ in range(200):
            n = rng.randint(1, 20)
            k = rng.randint(1, 6)
            w = [rng.randint(1, k) for _ in range(n)]
            pair = rsk(w)
            for row in pair.P:
                assert all(a <= b for a, b in zip(row, row[1:]))
            for upper, lower in zip(pair.P, pair.P[1:]):
                assert all(a < b for a, b in zip(upper, lower))
            flat = sorted(x for row in pair.Q for x in row)
            assert flat == list(range(1, n + 1))
            for row in pair.Q:
                assert all(a < b for a, b in zip(row, row[1:]))

    def test_shape_encodes_subsequence_lengths(self):
        rng = random.Random(7)
        for _ in range(10_000):
            n = rng.randint(1, 14)
            k = rng.randint(1, 6)
            w = [rng.randint(1, k) for _ in range(n)]
            shape = rsk(w).shape
            assert shape[0] == longest_weakly_increasing(w)
            assert len(shape) == longest_strictly_decreasing(w)


class TestDistributions:
    def test_enumeration_examples(self):
        table = exact_distribution_enumeration(2, 2, "I")
        assert table.value(1, 2, 2) == Fraction(1, 4)
        assert exact_distribution_enumeration(2, 2, "D").value(1, 2, 2) == Fraction(3, 4)

    def test_budget_refusal_names_budget(self):
        with pytest.raises(BudgetExceededError, match="budget of 100"):
            exact_distribution_enumeration(10, 12, "I", budget=100)

    def test_table_conventions(self):
        table = exact_distribution_enumeration(3, 4, "I")
        assert table.value(4, 3, 4) == 1
        assert table.value(9, 3, 4) == 1
        assert table.value(-1, 3, 4) == 0
        values = [table.value(n, 3, 4) for n in range(5)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_tableaux_equals_enumeration(self):
        for which in ("I", "D"):
            for k in range(1, 5):
                for N in range(0, 9):
                    table = exact_distribution_enumeration(k, N, which)
                    for n in range(0, N + 1):
                        assert distribution_via_tableaux(n, k, N, which) == table.value(
                            n, k, N
                        ), (which, n, k, N)

    def test_closed_forms(self):
        # only strictly decreasing words have no weak rise; only weakly
        # increasing words have no strict descent
        for k in range(1, 6):
            for N in range(0, 9):
                table_i = exact_distribution_enumeration(k, N, "I")
                assert table_i.value(1, k, N) == Fraction(math.comb(k, N), k**N) or N == 0
                table_d = exact_distribution_enumeration(k, N, "D")
                assert (
                    table_d.value(1, k, N)
                    == Fraction(math.comb(N + k - 1, N), k**N)
                    or N == 0
                )

    def test_first_row_distribution_matches(self):
        for k in (2, 3):
            for N in (5, 8):
                cum = first_row_distribution(k, N)
                table = exact_distribution_enumeration(k, N, "I")
                for n in range(N + 1):
                    assert cum[n] == table.value(n, k, N)

    def test_empty_word(self):
        table = exact_distribution_enumeration(3, 0, "I")
        assert table.value(0, 3, 0) == 1
