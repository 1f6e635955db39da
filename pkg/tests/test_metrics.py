from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pursuitkb.metrics import (
    SessionMetrics,
    TrialRecord,
    adj_wpm,
    aggregate_session,
    cer,
    keystroke_savings,
    msd,
    trial_metrics,
    uer,
    wpm,
)


def msd_oracle(a: str, b: str) -> int:
    """Exhaustive recursive edit distance, independent of the DP kernel."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


class TestWpm:
    def test_examples(self):
        assert wpm(25, 60000) == pytest.approx(5.0)
        assert wpm(24, 120000) == pytest.approx(2.4)
        assert wpm(0, 30000) == 0.0

    def test_zero_duration_rejected(self):
        with pytest.raises(ValueError):
            wpm(10, 0)

    def test_scales_inversely_with_duration(self):
        assert wpm(20, 30000) == pytest.approx(2 * wpm(20, 60000))


class TestAdjWpm:
    def test_examples(self):
        assert adj_wpm(5.0, 0.0) == 5.0
        assert adj_wpm(5.0, 1.0) == 0.0
        assert adj_wpm(5.0, 0.1, a=1.0) == pytest.approx(4.5)

    def test_domain(self):
        with pytest.raises(ValueError):
            adj_wpm(5.0, 1.5)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_monotone_decreasing_in_uer(self, u1, u2):
        lo, hi = sorted((u1, u2))
        assert adj_wpm(5.0, hi) <= adj_wpm(5.0, lo) + 1e-12


class TestMsd:
    def test_examples(self):
        assert msd("hello", "hello") == 0
        assert msd("hello", "hellp") == 1

    def test_against_recursive_oracle(self):
        rng = np.random.default_rng(11)
        alphabet = "abcd"
        for _ in range(300):
            a = "".join(rng.choice(list(alphabet), size=int(rng.integers(0, 9))))
            b = "".join(rng.choice(list(alphabet), size=int(rng.integers(0, 9))))
            assert msd(a, b) == msd_oracle(a, b)

    @given(
        st.text(alphabet="abc", max_size=12),
        st.text(alphabet="abc", max_size=12),
        st.text(alphabet="abc", max_size=12),
    )
    @settings(max_examples=150, deadline=None)
    def test_metric_properties(self, a, b, c):
        assert msd(a, a) == 0
        assert msd(a, b) == msd(b, a)
        assert msd(a, c) <= msd(a, b) + msd(b, c)


class TestUer:
    def test_examples(self):
        assert uer("hello", "hello") == 0.0
        assert uer("hello", "hellp") == pytest.approx(0.2)
        assert uer("ab", "") == 1.0

    def test_empty_target_rejected(self):
        with pytest.raises(ValueError):
            uer("", "x")


class TestCer:
    def _record(self, dels, total):
        return TrialRecord("abcdefgh", "abcdefgh", 1000, total, dels, 0)

    def test_examples(self):
        assert cer(self._record(2, 20)) == pytest.approx(0.1)
        assert cer(self._record(0, 20)) == 0.0
        assert cer(self._record(20, 20)) == 1.0


class TestKeystrokeSavings:
    def test_appointment_fixture(self):
        assert keystroke_savings(len("appointment "), 4) == pytest.approx(1 - 4 / 12)

    def test_letter_by_letter_is_zero(self):
        assert keystroke_savings(6, 6) == 0.0

    def test_corrections_go_negative(self):
        assert keystroke_savings(6, 9) < 0.0

    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            keystroke_savings(0, 3)


class TestAggregate:
    def test_single_trial_identity(self):
        r = TrialRecord("hello there", "hello there", 30000, 12, 0, 0)
        assert aggregate_session([r]) == trial_metrics(r)

    def test_mean_of_two(self):
        r1 = TrialRecord("aaaaaaaaaa", "aaaaaaaaaa", 60000, 11, 0, 0)  # 2.0 wpm
        r2 = TrialRecord("aaaaaaaaaaaaaaaaaaaa", "aaaaaaaaaaaaaaaaaaaa", 60000, 21, 0, 0)
        agg = aggregate_session([r1, r2])
        assert agg.wpm == pytest.approx((2.0 + 4.0) / 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_session([])

    def test_record_invariants(self):
        with pytest.raises(ValueError):
            TrialRecord("a", "a", 0, 1, 0, 0)
        with pytest.raises(ValueError):
            TrialRecord("a", "a", 10, 1, 2, 0)


def test_session_metrics_invariants():
    r = TrialRecord("hello world", "hello wrld", 20000, 14, 2, 1)
    m = trial_metrics(r)
    assert isinstance(m, SessionMetrics)
    assert m.wpm >= 0 and 0 <= m.uer <= 1 and m.adj_wpm <= m.wpm and m.ks <= 1
