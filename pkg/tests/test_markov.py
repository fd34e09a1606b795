import math

import numpy as np
import pytest

import sftflow as sf
from sftflow.errors import (
    NotIrreducible,
    NotStationary,
    NotStochastic,
    SupportViolation,
)

from conftest import GOLDEN, random_chain_on, random_irreducible


def bernoulli_half(full2):
    return sf.validate_chain([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], full2)


class TestValidateChain:
    def test_bernoulli(self, full2):
        mc = bernoulli_half(full2)
        assert mc.k == 2

    def test_two_components_is_valid(self, full2):
        mc = sf.validate_chain([0.5, 0.5], [[1, 0], [0, 1]], full2)
        assert not sf.is_ergodic(mc)

    def test_not_stationary(self, full2):
        with pytest.raises(NotStationary):
            sf.validate_chain([1.0, 0.0], [[0.5, 0.5], [1.0, 0.0]], full2)

    def test_not_stochastic(self, full2):
        with pytest.raises(NotStochastic):
            sf.validate_chain([0.5, 0.5], [[0.5, 0.6], [0.5, 0.5]], full2)
        with pytest.raises(NotStochastic):
            sf.validate_chain([0.7, 0.7], [[0.5, 0.5], [0.5, 0.5]], full2)

    def test_support_violation(self, golden_mean):
        with pytest.raises(SupportViolation):
            sf.validate_chain([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], golden_mean)


class TestCylinderMeasure:
    def test_bernoulli_triple(self, full2):
        mc = bernoulli_half(full2)
        assert sf.cylinder_measure(mc, (0, 1, 1)) == pytest.approx(0.125, abs=1e-15)

    def test_forbidden_word_is_zero(self, golden_mean):
        mc = sf.parry_measure(golden_mean)
        assert sf.cylinder_measure(mc, (1, 1)) == 0.0

    def test_single_symbol_is_uv(self, golden_mean):
        pd = sf.perron_data(golden_mean)
        mc = sf.parry_measure(golden_mean)
        assert sf.cylinder_measure(mc, (0,)) == pytest.approx(pd.u[0] * pd.v[0], abs=1e-12)

    def test_offset_irrelevant(self, full2):
        mc = bernoulli_half(full2)
        a = sf.cylinder_measure(mc, sf.Cylinder((0, 1), offset=0))
        b = sf.cylinder_measure(mc, sf.Cylinder((0, 1), offset=-3))
        assert a == b


class TestEntropy:
    def test_bernoulli(self, full2):
        assert sf.entropy(bernoulli_half(full2)) == pytest.approx(math.log(2), abs=1e-15)

    def test_deterministic_chain_is_zero(self, cycle2):
        mc = sf.validate_chain([0.5, 0.5], [[0, 1], [1, 0]], cycle2)
        assert sf.entropy(mc) == 0.0

    def test_parry_reaches_top_entropy(self, golden_mean):
        mc = sf.parry_measure(golden_mean)
        assert sf.entropy(mc) == pytest.approx(sf.top_entropy(golden_mean), abs=1e-10)


class TestParryMeasure:
    def test_full_shift_is_uniform(self, full2):
        mc = sf.parry_measure(full2)
        assert np.allclose(mc.p, 0.5, atol=1e-12)
        assert np.allclose(mc.P, 0.5, atol=1e-12)

    def test_golden_mean_rows(self, golden_mean):
        mc = sf.parry_measure(golden_mean)
        assert mc.P[1, 0] == pytest.approx(1.0, abs=1e-12)
        assert mc.P[1, 1] == 0.0
        assert np.abs(mc.P.sum(axis=1) - 1.0).max() <= 1e-14
        # p_00 = 1/golden, p_01 = 1/golden^2
        assert mc.P[0, 0] == pytest.approx(1 / GOLDEN, abs=1e-12)
        assert mc.P[0, 1] == pytest.approx(1 / GOLDEN**2, abs=1e-12)

    def test_permutation_shift(self, cycle2):
        mc = sf.parry_measure(cycle2)
        assert np.allclose(mc.p, 0.5, atol=1e-12)
        assert np.allclose(mc.P, [[0, 1], [1, 0]], atol=1e-12)
        assert sf.entropy(mc) == pytest.approx(0.0, abs=1e-15)

    def test_always_ergodic(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            s = random_irreducible(rng, int(rng.integers(2, 7)))
            assert sf.is_ergodic(sf.parry_measure(s))


class TestStationaryOf:
    def test_symmetric(self):
        assert np.allclose(sf.stationary_of([[0.5, 0.5], [0.5, 0.5]]), [0.5, 0.5])

    def test_permutation(self):
        assert np.allclose(sf.stationary_of([[0, 1], [1, 0]]), [0.5, 0.5])

    def test_hand_solved(self):
        # balance equations of [[.9,.1],[.5,.5]] give (5/6, 1/6)
        p = sf.stationary_of([[0.9, 0.1], [0.5, 0.5]])
        assert np.allclose(p, [5 / 6, 1 / 6], atol=1e-12)

    def test_residual_contract(self):
        rng = np.random.default_rng(29)
        for k in (3, 8, 40):
            s = random_irreducible(rng, k)
            mc = random_chain_on(rng, s)
            p = sf.stationary_of(mc.P)
            assert np.abs(p @ mc.P - p).max() <= 1e-12

    def test_large_k_power_iteration_path(self):
        rng = np.random.default_rng(31)
        s = random_irreducible(rng, 80, density=0.2)
        mc = random_chain_on(rng, s)
        p = sf.stationary_of(mc.P)
        assert np.abs(p @ mc.P - p).max() <= 1e-12

    def test_not_irreducible(self):
        with pytest.raises(NotIrreducible):
            sf.stationary_of([[1.0, 0.0], [0.0, 1.0]])


class TestMeasureConsistency:
    def test_total_mass_by_length(self, golden_mean):
        mc = sf.parry_measure(golden_mean)
        for n in range(1, 9):
            total = math.fsum(
                sf.cylinder_measure(mc, w) for w in sf.admissible_words(golden_mean, n)
            )
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_refinement(self):
        rng = np.random.default_rng(37)
        s = random_irreducible(rng, 3)
        mc = random_chain_on(rng, s)
        for n in range(1, 7):
            for w in sf.admissible_words(s, n):
                refined = math.fsum(
                    sf.cylinder_measure(mc, w + (j,)) for j in range(s.k)
                )
                assert refined == pytest.approx(sf.cylinder_measure(mc, w), abs=1e-13)

    def test_block_entropy_identity(self, golden_mean):
        # H_n = H_1 + (n-1) h exactly for Markov chains; H_n from the word
        # distribution built directly off (p, P)
        rng = np.random.default_rng(41)
        chains = [
            sf.parry_measure(golden_mean),
            random_chain_on(rng, random_irreducible(rng, 3, density=0.5)),
        ]
        for mc in chains:
            n = 12
            dist = {(i,): float(mc.p[i]) for i in range(mc.k) if mc.p[i] > 0}
            for _ in range(n - 1):
                dist = {
                    w + (j,): q * float(mc.P[w[-1], j])
                    for w, q in dist.items()
                    for j in range(mc.k)
                    if mc.P[w[-1], j] > 0
                }
            h_n = -math.fsum(q * math.log(q) for q in dist.values())
            h_1 = -math.fsum(
                float(p) * math.log(float(p)) for p in mc.p if p > 0
            )
            assert h_n == pytest.approx(h_1 + (n - 1) * sf.entropy(mc), abs=1e-6)
