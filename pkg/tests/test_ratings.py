import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skintone import ratings
from skintone.errors import InvalidRatingError, NoOverlapError


def rec(image_id, rater_id, fst, variant="exemplar_corrected", ts="2024-01-01T00:00:00"):
    return ratings.RatingRecord(image_id, rater_id, fst, variant, ts)


class TestConsensus:
    def test_unanimous(self):
        c = ratings.consensus(3, 3, 3)
        assert (c.consensus_fst, c.mode) == (3, "unanimous")

    def test_majority(self):
        c = ratings.consensus(2, 3, 3)
        assert (c.consensus_fst, c.mode) == (3, "majority")

    def test_median(self):
        c = ratings.consensus(1, 4, 6)
        assert (c.consensus_fst, c.mode) == (4, "median")

    def test_all_216_triples_against_brute_force(self):
        for triple in itertools.product(range(1, 7), repeat=3):
            got = ratings.consensus(*triple)
            assert got.consensus_fst == sorted(triple)[1]
            assert got.consensus_fst in triple

    @given(st.tuples(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6)))
    def test_permutation_invariance(self, triple):
        outputs = {ratings.consensus(*perm) for perm in itertools.permutations(triple)}
        assert len(outputs) == 1

    def test_invalid_rating(self):
        with pytest.raises(InvalidRatingError):
            ratings.consensus(0, 3, 3)
        with pytest.raises(InvalidRatingError):
            ratings.consensus(1, 7, 3)


class TestLatestRatings:
    def test_latest_wins(self):
        records = [
            rec("i1", "a", 2, ts="2024-01-01T10:00:00"),
            rec("i1", "a", 4, ts="2024-01-02T10:00:00"),
        ]
        latest = ratings.latest_ratings(records)
        assert len(latest) == 1 and latest[0].fst == 4

    def test_tie_broken_by_log_position(self):
        records = [rec("i1", "a", 2), rec("i1", "a", 5)]
        assert ratings.latest_ratings(records)[0].fst == 5

    def test_variants_kept_separate(self):
        records = [rec("i1", "a", 2, variant="baseline"), rec("i1", "a", 5)]
        assert len(ratings.latest_ratings(records)) == 2


class TestConsensusForVariant:
    def test_groups_by_image(self):
        records = [rec("i1", r, f) for r, f in zip("abc", (2, 3, 3))]
        records += [rec("i2", r, f) for r, f in zip("abc", (1, 4, 6))]
        results = ratings.consensus_for_variant(records, "exemplar_corrected")
        assert [(c.image_id, c.consensus_fst, c.mode) for c in results] == [
            ("i1", 3, "majority"),
            ("i2", 4, "median"),
        ]

    def test_incomplete_image_skipped_with_warning(self):
        records = [rec("i1", "a", 2), rec("i1", "b", 3)]
        with pytest.warns(UserWarning, match="i1"):
            assert ratings.consensus_for_variant(records, "exemplar_corrected") == []


class TestAgreement:
    def test_identical_lists(self):
        a = [rec(f"i{k}", "a", (k % 6) + 1) for k in range(12)]
        b = [rec(f"i{k}", "b", (k % 6) + 1) for k in range(12)]
        m = ratings.agreement(a, b)
        assert m.total == 12
        assert m.exact_pct == 100.0
        assert m.within_one_pct == 100.0

    def test_shift_by_one(self):
        a = [rec(f"i{k}", "a", k + 1) for k in range(5)]  # ratings 1..5
        b = [rec(f"i{k}", "b", k + 2) for k in range(5)]  # ratings 2..6
        m = ratings.agreement(a, b)
        assert m.exact_pct == 0.0
        assert m.within_one_pct == 100.0

    def test_hand_built_matrix(self):
        pairs = [(1, 1), (1, 2), (2, 2), (2, 2), (3, 5), (6, 6), (6, 4), (5, 5), (4, 4), (1, 1)]
        a = [rec(f"i{k}", "a", x) for k, (x, _) in enumerate(pairs)]
        b = [rec(f"i{k}", "b", y) for k, (_, y) in enumerate(pairs)]
        m = ratings.agreement(a, b)
        expected = np.zeros((6, 6), dtype=int)
        for x, y in pairs:
            expected[x - 1, y - 1] += 1
        assert np.array_equal(m.counts, expected)
        assert m.exact_pct == pytest.approx(70.0)
        assert m.within_one_pct == pytest.approx(80.0)
        assert m.beyond_one_pct == pytest.approx(20.0)

    def test_symmetry_is_transposition(self):
        rng = np.random.default_rng(5)
        a = [rec(f"i{k}", "a", int(v)) for k, v in enumerate(rng.integers(1, 7, 30))]
        b = [rec(f"i{k}", "b", int(v)) for k, v in enumerate(rng.integers(1, 7, 30))]
        m_ab = ratings.agreement(a, b)
        m_ba = ratings.agreement(b, a)
        assert np.array_equal(m_ab.counts, m_ba.counts.T)
        assert m_ab.exact_pct == m_ba.exact_pct
        assert m_ab.within_one_pct == m_ba.within_one_pct

    def test_no_overlap(self):
        with pytest.raises(NoOverlapError):
            ratings.agreement([rec("i1", "a", 3)], [rec("i2", "b", 3)])

    def test_percentages_sum(self):
        rng = np.random.default_rng(9)
        a = [rec(f"i{k}", "a", int(v)) for k, v in enumerate(rng.integers(1, 7, 50))]
        b = [rec(f"i{k}", "b", int(v)) for k, v in enumerate(rng.integers(1, 7, 50))]
        m = ratings.agreement(a, b)
        assert m.within_one_pct + m.beyond_one_pct == pytest.approx(100.0)
        assert m.within_one_pct >= m.exact_pct


class TestAgreementDistribution:
    def test_single_record(self):
        assert ratings.agreement_distribution([rec("i1", "a", 4)]) == {"a": [0, 0, 0, 1, 0, 0]}

    def test_balanced_set(self):
        records = [rec(f"i{f}", r, f) for r in "ab" for f in range(1, 7)]
        hists = ratings.agreement_distribution(records)
        assert hists == {"a": [1] * 6, "b": [1] * 6}

    def test_hand_tally(self):
        records = [rec("i1", "a", 2), rec("i2", "a", 2), rec("i1", "b", 6), rec("i1", "c", 1)]
        hists = ratings.agreement_distribution(records)
        assert hists["a"] == [0, 2, 0, 0, 0, 0]
        assert hists["b"] == [0, 0, 0, 0, 0, 1]
        assert hists["c"] == [1, 0, 0, 0, 0, 0]
        assert sum(hists["a"]) == 2


class TestManualVsAuto:
    def test_all_equal(self):
        manual = {f"i{k}": (k % 6) + 1 for k in range(10)}
        dist = ratings.manual_vs_auto(manual, dict(manual))
        assert dist.counts == {"0": 10, "1": 0, "2": 0, "3+": 0}
        assert dist.exact_pct == 100.0

    def test_all_differ_by_two(self):
        manual = {f"i{k}": 2 for k in range(5)}
        auto = {f"i{k}": 4 for k in range(5)}
        dist = ratings.manual_vs_auto(manual, auto)
        assert dist.counts["2"] == 5
        assert dist.within_one_pct == 0.0

    def test_mixed_with_failures(self):
        # 18 rated images with hand-chosen differences, 2 pipeline failures.
        diffs = [0, 0, 1, 1, 1, 2, 3, 0, 1, 2, 0, 0, 1, 5, 0, 1, 2, 1]
        manual = {f"i{k}": 1 for k in range(18)}
        auto = {f"i{k}": min(1 + d, 6) for k, d in enumerate(diffs)}
        manual["fail1"] = 3
        manual["fail2"] = 4
        dist = ratings.manual_vs_auto(manual, auto, failures=["fail1", "fail2"])
        assert dist.counts == {"0": 6, "1": 7, "2": 3, "3+": 2}
        assert dist.failures == 2
        assert dist.rated == 18
        assert dist.within_one_pct == pytest.approx(100.0 * 13 / 18)

    def test_histogram_plus_failures_covers_total(self):
        manual = {f"i{k}": 3 for k in range(7)}
        auto = {f"i{k}": 3 for k in range(5)}
        dist = ratings.manual_vs_auto(manual, auto, failures=[f"i{k}" for k in range(5, 7)])
        assert dist.rated + dist.failures == 7


class TestJsonlRoundTrip:
    def test_round_trip(self, tmp_path):
        records = [rec("i1", "a", 3), rec("i2", "b", 5, variant="baseline")]
        path = tmp_path / "log.jsonl"
        ratings.save_ratings(path, records)
        assert ratings.load_ratings(path) == records

    def test_invalid_variant_rejected(self):
        with pytest.raises(InvalidRatingError):
            rec("i1", "a", 3, variant="nonsense")
