import math

import numpy as np
import pytest

import sftflow as sf
from sftflow.errors import ParameterOutOfRange, SupportViolation, TargetOutOfRange

from conftest import GOLDEN, random_irreducible


def test_default_drain_is_smallest_successor(golden_mean):
    path = sf.build_path(golden_mean)
    assert path.drain.tolist() == [0, 0]


def test_custom_drain_validation(golden_mean):
    sf.build_path(golden_mean, drain=[1, 0])
    with pytest.raises(SupportViolation):
        sf.build_path(golden_mean, drain=[0, 1])  # 1->1 is forbidden


class TestPathMatrix:
    def test_endpoint_one_is_base(self, full2):
        path = sf.build_path(full2)
        assert (sf.path_matrix(path, 1.0) == path.base.P).all()

    def test_endpoint_zero_is_zero_one(self, golden_mean):
        path = sf.build_path(golden_mean)
        q = sf.path_matrix(path, 0.0)
        assert sorted(set(q.ravel().tolist())) == [0.0, 1.0]
        for i in range(2):
            assert q[i, path.drain[i]] == 1.0
            assert q[i].sum() == 1.0

    def test_halfway_full_shift(self, full2):
        # plugging t=1/2 into the displayed update of the Parry matrix
        path = sf.build_path(full2)
        q = sf.path_matrix(path, 0.5)
        assert np.allclose(q, [[0.75, 0.25], [0.75, 0.25]], atol=1e-15)

    def test_rows_sum_to_one_on_grid(self, golden_mean):
        path = sf.build_path(golden_mean)
        for t in np.linspace(0.0, 1.0, 101):
            q = sf.path_matrix(path, float(t))
            assert np.abs(q.sum(axis=1) - 1.0).max() <= 1e-14

    def test_support_stability_on_grid(self):
        rng = np.random.default_rng(53)
        for k in (2, 3, 5):
            s = random_irreducible(rng, k)
            path = sf.build_path(s)
            base_support = path.base.P > 0
            for t in np.linspace(0.0, 1.0, 101)[1:]:
                assert ((sf.path_matrix(path, float(t)) > 0) == base_support).all()

    def test_parameter_out_of_range(self, full2):
        path = sf.build_path(full2)
        for t in (-0.1, 1.1):
            with pytest.raises(ParameterOutOfRange):
                sf.path_matrix(path, t)


class TestPathMeasure:
    def test_endpoint_is_parry(self, golden_mean):
        path = sf.build_path(golden_mean)
        mc = sf.path_measure(path, 1.0)
        assert np.allclose(mc.p, path.base.p, atol=1e-12)
        assert np.allclose(mc.P, path.base.P, atol=1e-15)

    def test_halfway_stationary_vector(self, full2):
        path = sf.build_path(full2)
        mc = sf.path_measure(path, 0.5)
        assert np.allclose(mc.p, [0.75, 0.25], atol=1e-12)

    def test_ergodic_on_open_interval(self, golden_mean):
        path = sf.build_path(golden_mean)
        for t in (1e-9, 0.01, 0.3, 0.75, 1.0):
            assert sf.is_ergodic(sf.path_measure(path, t))


class TestPathEntropy:
    def test_zero_at_origin(self, golden_mean, full2, full3):
        for s in (golden_mean, full2, full3):
            path = sf.build_path(s)
            assert sf.path_entropy(path, 0.0) == 0.0

    def test_top_entropy_at_one(self, golden_mean, full2):
        for s, lam in ((golden_mean, GOLDEN), (full2, 2.0)):
            path = sf.build_path(s)
            assert sf.path_entropy(path, 1.0) == pytest.approx(math.log(lam), abs=1e-10)

    def test_halfway_full_shift_value(self, full2):
        path = sf.build_path(full2)
        expected = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
        assert sf.path_entropy(path, 0.5) == pytest.approx(expected, abs=1e-12)


class TestSolveEntropy:
    def test_target_at_top_rejected(self, full2):
        path = sf.build_path(full2)
        with pytest.raises(TargetOutOfRange):
            sf.solve_entropy(path, math.log(2.0), 1e-10)
        with pytest.raises(TargetOutOfRange):
            sf.solve_entropy(path, 0.0, 1e-10)

    def test_half_log_two(self, full2):
        path = sf.build_path(full2)
        h = 0.5 * math.log(2.0)
        t = sf.solve_entropy(path, h, 1e-10)
        assert 0.0 < t <= 1.0
        assert sf.path_entropy(path, t) == pytest.approx(h, abs=1e-10)
        assert sf.is_ergodic(sf.path_measure(path, t))

    def test_golden_mean_target(self, golden_mean):
        path = sf.build_path(golden_mean)
        t = sf.solve_entropy(path, 0.24, 1e-10)
        assert sf.path_entropy(path, t) == pytest.approx(0.24, abs=1e-10)

    def test_solver_soundness_random_targets(self, golden_mean, full3):
        rng = np.random.default_rng(59)
        for s in (golden_mean, full3):
            path = sf.build_path(s)
            top = path.log_lam
            for h in rng.uniform(0.01 * top, 0.99 * top, size=25):
                t = sf.solve_entropy(path, float(h), 1e-8)
                assert abs(sf.path_entropy(path, t) - h) <= 1e-8

    def test_deterministic(self, golden_mean):
        path = sf.build_path(golden_mean)
        assert sf.solve_entropy(path, 0.3, 1e-10) == sf.solve_entropy(path, 0.3, 1e-10)
