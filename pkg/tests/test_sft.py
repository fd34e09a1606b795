import itertools

import numpy as np
import pytest

import sftflow as sf
from sftflow.errors import (
    NonBinaryEntry,
    NotAdmissible,
    NotIrreducible,
    StrandedSymbol,
    SymbolOutOfRange,
)

from conftest import brute_words, random_irreducible


class TestNewSft:
    def test_full_shift(self):
        s = sf.new_sft(2, [[1, 1], [1, 1]])
        assert s.k == 2
        assert s.matrix.tolist() == [[1, 1], [1, 1]]

    def test_golden_mean(self):
        s = sf.new_sft(2, [[1, 1], [1, 0]])
        assert s.matrix[1, 1] == 0

    def test_zero_row_rejected(self):
        with pytest.raises(StrandedSymbol):
            sf.new_sft(2, [[1, 1], [0, 0]])

    def test_zero_column_rejected(self):
        with pytest.raises(StrandedSymbol):
            sf.new_sft(2, [[1, 0], [1, 0]])

    def test_non_binary_entry(self):
        with pytest.raises(NonBinaryEntry):
            sf.new_sft(2, [[1, 2], [1, 0]])

    def test_shape_mismatch(self):
        with pytest.raises(NonBinaryEntry):
            sf.new_sft(3, [[1, 1], [1, 1]])

    def test_matrix_is_readonly(self, golden_mean):
        with pytest.raises(ValueError):
            golden_mean.matrix[0, 0] = 0


class TestAdmissibility:
    def test_golden_mean_examples(self, golden_mean):
        assert sf.is_admissible(golden_mean, (0, 1, 0))
        assert not sf.is_admissible(golden_mean, (1, 1))

    def test_full_shift_everything(self, full2):
        for n in range(1, 5):
            for w in itertools.product(range(2), repeat=n):
                assert sf.is_admissible(full2, w)

    def test_single_symbols(self, golden_mean):
        assert sf.is_admissible(golden_mean, (0,))
        assert sf.is_admissible(golden_mean, (1,))

    def test_symbol_out_of_range(self, golden_mean):
        with pytest.raises(SymbolOutOfRange):
            sf.is_admissible(golden_mean, (0, 2))

    def test_empty_word(self, golden_mean):
        with pytest.raises(NotAdmissible):
            sf.is_admissible(golden_mean, ())


class TestAdmissibleWords:
    def test_full2_pairs(self, full2):
        assert len(sf.admissible_words(full2, 2)) == 4

    def test_golden_mean_pairs(self, golden_mean):
        assert sf.admissible_words(golden_mean, 2) == [(0, 0), (0, 1), (1, 0)]

    def test_golden_mean_triples_against_enumeration(self, golden_mean):
        # brute-force oracle; the count follows the Fibonacci numbers
        expect = brute_words(golden_mean.matrix.tolist(), 3)
        assert sf.admissible_words(golden_mean, 3) == expect
        assert len(expect) == 5

    def test_fibonacci_growth(self, golden_mean):
        # counts 2, 3, 5, 8, 13, ... for the golden mean shift
        fib = [2, 3, 5, 8, 13, 21, 34]
        for n, f in enumerate(fib, start=1):
            assert len(sf.admissible_words(golden_mean, n)) == f

    def test_lexicographic_order(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            s = random_irreducible(rng, 4)
            words = sf.admissible_words(s, 4)
            assert words == sorted(words)

    def test_count_matches_matrix_power(self):
        # words of n symbols are paths of n-1 edges
        rng = np.random.default_rng(11)
        for k in (2, 3, 4):
            s = random_irreducible(rng, k)
            for n in range(2, 7):
                count = int(np.linalg.matrix_power(s.matrix, n - 1).sum())
                assert len(sf.admissible_words(s, n)) == count
                assert sf.word_count(s, n) == count

    def test_closure_under_admissibility(self):
        rng = np.random.default_rng(13)
        for k in (2, 3):
            s = random_irreducible(rng, k)
            for n in (1, 2, 3, 4):
                listed = set(sf.admissible_words(s, n))
                for w in itertools.product(range(k), repeat=n):
                    assert (w in listed) == sf.is_admissible(s, w)


class TestIrreducibility:
    def test_examples(self, golden_mean, cycle2):
        assert sf.is_irreducible(golden_mean)
        assert sf.is_irreducible(cycle2)
        assert not sf.is_irreducible(sf.new_sft(2, [[1, 0], [0, 1]]))

    def test_exhaustive_small_against_power_test(self):
        # direct criterion: for every (i, j) some A^m with m <= k has
        # positive (i, j) entry
        for k in (1, 2, 3):
            for bits in itertools.product((0, 1), repeat=k * k):
                m = np.array(bits).reshape(k, k)
                if (m.sum(axis=0) == 0).any() or (m.sum(axis=1) == 0).any():
                    continue
                s = sf.new_sft(k, m)
                reach = np.zeros((k, k), dtype=bool)
                power = np.eye(k, dtype=np.int64)
                for _ in range(k):
                    power = power @ m
                    reach |= power > 0
                assert sf.is_irreducible(s) == bool(reach.all())


class TestAperiodicity:
    def test_examples(self, golden_mean, full2, cycle2):
        assert not sf.is_aperiodic(cycle2)
        assert sf.is_aperiodic(golden_mean)
        assert sf.is_aperiodic(full2)

    def test_period_three(self):
        s = sf.new_sft(3, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        assert not sf.is_aperiodic(s)

    def test_requires_irreducible(self):
        with pytest.raises(NotIrreducible):
            sf.is_aperiodic(sf.new_sft(2, [[1, 0], [0, 1]]))
