import numpy as np
import pytest
from numpy.testing import assert_allclose

from hltlab.errors import DomainError, PartitionError
from hltlab.fields import ScalarField, generate_field, make_grid
from hltlab.oracles import (TRIALS, bks_check, ims_identity_check, monotonicity_check, pullout_check,
                            random_partition, random_psd, run_oracle, smooth_partition, trace_product_lemma_check,
                            trace_sum_lemma_check)


def rng(seed=0):
    return np.random.default_rng(seed)


class TestPullout:
    def test_equal_blocks_are_tight(self):
        A = random_psd(rng(), 6)
        S = [np.eye(6) / np.sqrt(2)] * 2
        v = pullout_check(S, [A, A], 0.5)
        assert v.passed
        assert abs(v.min_eigenvalue_of_gap) <= 1e-10 * np.abs(A).max()

    def test_commuting_diagonal(self):
        a, b = np.array([1.0, 4.0, 9.0]), np.array([9.0, 0.0, 1.0])
        S = [np.eye(3) / np.sqrt(2)] * 2
        v = pullout_check(S, [np.diag(a), np.diag(b)], 0.5)
        expected = np.min(np.sqrt((a + b) / 2) - (np.sqrt(a) + np.sqrt(b)) / 2)
        assert_allclose(v.min_eigenvalue_of_gap, expected, atol=1e-12)

    def test_random_partition_sums_to_identity(self):
        S = random_partition(rng(1), 7, 3)
        assert_allclose(sum(x @ x for x in S), np.eye(7), atol=1e-12)

    def test_rejects_bad_partition(self):
        with pytest.raises(PartitionError):
            pullout_check([np.eye(2), np.eye(2)], [np.eye(2)] * 2, 0.5)

    def test_rejects_exponent(self):
        with pytest.raises(DomainError):
            pullout_check([np.eye(2)], [np.eye(2)], 1.0)


class TestBKS:
    def test_equal_matrices(self):
        A = random_psd(rng(), 5)
        v = bks_check(A, A, 0.5)
        assert v.passed and abs(v.min_eigenvalue_of_gap) <= v.tolerance

    def test_zero_subtrahend(self):
        assert bks_check(random_psd(rng(), 5), np.zeros((5, 5)), 1 / 3).min_eigenvalue_of_gap == 0

    def test_commuting_diagonal(self):
        a, b = np.array([1.0, 0.0, 4.0]), np.array([0.0, 4.0, 9.0])
        v = bks_check(np.diag(a), np.diag(b), 0.5)
        lhs = np.sum(np.clip(b - a, 0, None))
        rhs = np.sum(np.clip(b ** 2 - a ** 2, 0, None) ** 0.5)
        assert_allclose(v.min_eigenvalue_of_gap, rhs - lhs, atol=1e-12)

    def test_rejects_indefinite(self):
        with pytest.raises(DomainError):
            bks_check(np.diag([1.0, -1.0]), np.eye(2), 0.5)


class TestMonotonicity:
    def test_square_root_preserves_order(self):
        B = random_psd(rng(2), 6)
        assert monotonicity_check(B + random_psd(rng(3), 6, rank=1), B, 0.5).passed

    def test_square_fails_for_some_pair(self):
        A = np.array([[2.0, 1.0], [1.0, 1.0]])
        B = np.array([[1.0, 0.0], [0.0, 0.0]])
        assert not monotonicity_check(A, B, 2.0).passed

    def test_rejects_unordered(self):
        with pytest.raises(DomainError):
            monotonicity_check(np.eye(2), 2 * np.eye(2), 0.5)


class TestTraceLemmas:
    def test_single_term_is_equality(self):
        T = np.diag([-2.0, 1.0])
        assert trace_sum_lemma_check([T]).min_eigenvalue_of_gap == 0

    def test_opposite_terms(self):
        T = np.diag([-2.0, 1.0])
        v = trace_sum_lemma_check([T, -T])
        assert_allclose(v.min_eigenvalue_of_gap, 3.0)

    def test_product_with_identity_partition(self):
        T = np.diag([-2.0, 3.0, -0.5])
        v = trace_product_lemma_check([np.eye(3)], T)
        assert v.min_eigenvalue_of_gap == 0

    def test_product_rejects_oversized(self):
        with pytest.raises(PartitionError):
            trace_product_lemma_check([np.eye(2), np.eye(2)], np.eye(2))

    @pytest.mark.parametrize("c", [0.1, 10.0])
    def test_scale_covariance(self, c):
        r = rng(4)
        T = [r.normal(size=(5, 5)) for _ in range(3)]
        T = [x + x.T for x in T]
        base = trace_sum_lemma_check(T)
        scaled = trace_sum_lemma_check([c * x for x in T])
        assert_allclose(scaled.min_eigenvalue_of_gap, c * base.min_eigenvalue_of_gap, rtol=1e-10)
        assert scaled.passed == base.passed

    @pytest.mark.parametrize("c", [0.1, 10.0])
    def test_pullout_scale_covariance(self, c):
        r = rng(5)
        S = random_partition(r, 5, 2)
        A = [random_psd(r, 5) for _ in range(2)]
        base = pullout_check(S, A, 0.5)
        scaled = pullout_check(S, [c * x for x in A], 0.5)
        assert_allclose(scaled.min_eigenvalue_of_gap, c ** 0.5 * base.min_eigenvalue_of_gap, rtol=1e-8)


class TestIMS:
    def test_trivial_partition_is_exact(self):
        g = make_grid(4)
        one = ScalarField(g, np.ones((4, 4, 4)))
        zero = ScalarField(g, np.zeros((4, 4, 4)))
        v = ims_identity_check(g, None, one, zero)
        assert v.min_eigenvalue_of_gap == 0 or abs(v.min_eigenvalue_of_gap) < 1e-14

    def test_smooth_partition_free(self):
        g = make_grid(8)
        assert ims_identity_check(g, None, *smooth_partition(g, seed=1)).passed

    @pytest.mark.parametrize("seed", range(2))
    def test_smooth_partition_magnetic(self, seed):
        g = make_grid(8)
        A = generate_field(seed, "A", g, amplitude=0.5, bandlimit="half")
        assert ims_identity_check(g, A, *smooth_partition(g, seed=seed)).passed

    def test_rejects_non_partition(self):
        g = make_grid(4)
        one = ScalarField(g, np.ones((4, 4, 4)))
        with pytest.raises(PartitionError):
            ims_identity_check(g, None, one, one)


class TestSuites:
    @pytest.mark.parametrize("name", ["pullout", "bks", "monotonicity", "trace_sum", "trace_product"])
    def test_no_failures(self, name):
        summary = run_oracle(name, trials=40, seed=11)
        assert summary.failures == 0
        assert summary.worst_gap_ratio >= -1

    def test_control_fails(self):
        summary = run_oracle("monotonicity_control", trials=40, seed=11)
        assert summary.failures >= 1
        assert len(summary.failure_seeds) == summary.failures

    def test_reproducible(self):
        a = run_oracle("bks", trials=10, seed=3).as_dict()
        b = run_oracle("bks", trials=10, seed=3).as_dict()
        assert a == b

    def test_unknown_name(self):
        with pytest.raises(DomainError):
            run_oracle("nonexistent")

    def test_registry(self):
        assert "monotonicity_control" in TRIALS
