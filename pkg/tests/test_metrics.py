import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import kendall_counts_quadratic
from stacknas import _backend
from stacknas.errors import DataError, MetricUndefinedError
from stacknas.metrics import (
    kendall_tau,
    kendall_tau_b,
    multi_rmse,
    pair_counts,
    pair_counts_bruteforce,
    per_task_report,
)

tie_vectors = st.lists(st.integers(0, 6), min_size=2, max_size=40)


class TestKendall:
    def test_identity(self, rng):
        a = rng.permutation(50).astype(float)
        assert kendall_tau_b(a, a) == 1.0

    def test_reverse(self):
        a = np.arange(10.0)
        assert kendall_tau_b(a, a[::-1]) == -1.0

    def test_hand_case(self):
        assert kendall_tau_b([1, 2, 3], [3, 1, 2]) == -1 / 3

    def test_all_ties_undefined(self):
        with pytest.raises(MetricUndefinedError):
            kendall_tau_b([1, 1, 1], [1, 2, 3])
        assert kendall_tau([1, 1, 1], [1, 2, 3], "a") == 0.0

    def test_input_errors(self):
        with pytest.raises(DataError):
            kendall_tau_b([1.0], [1.0])
        with pytest.raises(DataError):
            kendall_tau_b([1.0, 2.0], [1.0])
        with pytest.raises(DataError):
            kendall_tau_b([1.0, np.nan], [1.0, 2.0])
        with pytest.raises(ValueError):
            kendall_tau([1, 2], [1, 2], "c")

    def test_tie_correction(self):
        # C=2, D=0, one tie in a only, T0=3
        assert kendall_tau_b([1, 1, 2], [1, 2, 3]) == pytest.approx(2 / math.sqrt(2 * 3))
        assert kendall_tau([1, 1, 2], [1, 2, 3], "a") == pytest.approx(2 / 3)

    @settings(max_examples=200, deadline=None)
    @given(tie_vectors, st.data())
    def test_counts_match_pure_python(self, a, data):
        b = data.draw(st.lists(st.integers(0, 6), min_size=len(a), max_size=len(a)))
        c, d, ta, tb, tab = kendall_counts_quadratic(a, b)
        fast = pair_counts(a, b)
        assert (fast.concordant, fast.discordant) == (c, d)
        assert (fast.ties_a, fast.ties_b, fast.ties_both) == (ta + tab, tb + tab, tab)
        assert fast == pair_counts_bruteforce(a, b)

    def test_fast_matches_reference_large(self, backend):
        rng = np.random.default_rng(5)
        for n in (2, 3, 100, 1000, 3000):
            a = rng.integers(0, max(2, n // 10), size=n)
            b = a + rng.integers(0, 5, size=n)
            assert pair_counts(a, b, backend) == pair_counts_bruteforce(a, b)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30, unique=True), st.data())
    def test_symmetry_and_sign(self, a, data):
        b = data.draw(st.permutations(a))
        assert kendall_tau_b(a, b) == kendall_tau_b(b, a)
        assert kendall_tau_b(a, -np.array(b)) == -kendall_tau_b(a, b)

    @settings(max_examples=100, deadline=None)
    @given(tie_vectors, st.data())
    def test_monotone_invariance(self, a, data):
        b = data.draw(st.lists(st.integers(0, 6), min_size=len(a), max_size=len(a)))
        if len(set(a)) < 2 or len(set(b)) < 2:
            return
        ta = np.exp(np.array(a, dtype=float)) * 3 + 1
        assert kendall_tau_b(ta, b) == kendall_tau_b(a, b)

    def test_inversion_kernels(self, backend, rng):
        x = rng.integers(0, 50, size=2000).astype(np.int64)
        k = _backend.get_kernels(backend)
        brute = sum(int((x[i] > x[i + 1:]).sum()) for i in range(len(x)))
        assert k.count_inversions(x) == brute
        assert k.count_inversions(np.zeros(0, dtype=np.int64)) == 0


class TestMultiRMSE:
    def test_zero(self, rng):
        p = rng.normal(size=(5, 3))
        assert multi_rmse(p, p) == 0.0

    def test_ordinary_rmse(self):
        assert multi_rmse([0.0, 3.0], [0.0, 0.0]) == pytest.approx(math.sqrt(4.5), rel=1e-15)

    def test_single_row_weight(self, rng):
        p, t = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
        w = np.array([0.0, 0.0, 2.0, 0.0])
        assert multi_rmse(p, t, w) == pytest.approx(np.linalg.norm(p[2] - t[2]), rel=1e-14)

    def test_weight_scaling(self, rng):
        p, t = rng.normal(size=(6, 2)), rng.normal(size=(6, 2))
        w = rng.random(6)
        assert multi_rmse(p, t, 7.5 * w) == pytest.approx(multi_rmse(p, t, w), rel=1e-14)

    def test_errors(self):
        with pytest.raises(DataError):
            multi_rmse([1.0, 2.0], [1.0, 2.0], [0.0, 0.0])
        with pytest.raises(DataError):
            multi_rmse(np.ones((2, 2)), np.ones((2, 3)))
        with pytest.raises(DataError):
            multi_rmse([1.0], [1.0], [-1.0])


class TestReport:
    def test_single(self):
        r = per_task_report([("t", [1, 2, 3], [1, 2, 3])])
        assert r.mean_tau == 1.0

    def test_mean(self):
        r = per_task_report([("b", [1, 2, 3, 4], [1, 2, 3, 4]), ("a", [1, 2, 3, 4], [1, 4, 3, 2])])
        assert [t.task_id for t in r.tasks] == ["a", "b"]
        assert [t.tau for t in r.tasks] == [0.0, 1.0]
        assert r.mean_tau == 0.5

    def test_natural_order(self):
        tasks = [(f"task{i}", [1, 2], [1, 2]) for i in (10, 2, 1)]
        assert [t.task_id for t in per_task_report(tasks).tasks] == ["task1", "task2", "task10"]

    def test_recomputation(self, rng):
        tasks = []
        for i in range(1, 9):
            actual = rng.permutation(200)
            pred = np.round(actual + rng.normal(scale=40, size=200))
            tasks.append((f"task{i}", pred, actual))
        r = per_task_report(tasks)
        for score, (_, pred, actual) in zip(r.tasks, tasks):
            c = pair_counts_bruteforce(pred, actual)
            denom = math.sqrt((c.n_pairs - c.ties_a) * (c.n_pairs - c.ties_b))
            assert score.tau == (c.concordant - c.discordant) / denom

    def test_error_names_task(self):
        with pytest.raises(MetricUndefinedError, match="task7"):
            per_task_report([("task7", [1, 1], [1, 2])])
        with pytest.raises(DataError):
            per_task_report([])

    def test_text_and_dict(self):
        r = per_task_report([("task1", [1, 2, 3], [3, 1, 2])])
        assert r.to_text().splitlines()[1] == "task1\t3\t-0.333333"
        assert r.to_dict()["mean_tau"] == -1 / 3
