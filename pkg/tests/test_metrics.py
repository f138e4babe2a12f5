"""Descriptive statistics, Price index, aging profile, concentration."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cocimap import metrics
from cocimap.errors import EmptyInput, ZeroTotal

from conftest import make_corpus
from oracles import brute_describe, brute_price_fraction


class TestDescribe:
    def test_four_values(self):
        d = metrics.describe([1, 2, 3, 4])
        assert d.mean == 2.5
        assert d.median == 2.5
        assert d.sd == pytest.approx(1.290994, abs=1e-6)
        assert d.iqr == pytest.approx(1.5)

    def test_single_value(self):
        d = metrics.describe([7])
        assert (d.mean, d.median, d.sd, d.iqr) == (7.0, 7.0, 0.0, 0.0)

    def test_constant(self):
        d = metrics.describe([5, 5, 5, 5])
        assert d.sd == 0.0 and d.iqr == 0.0

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            metrics.describe([])

    def test_matches_brute_force_on_random_vectors(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            n = int(rng.integers(1, 101))
            values = rng.normal(0, 100, size=n)
            d = metrics.describe(values)
            mean, median, sd, iqr = brute_describe(values)
            assert d.mean == pytest.approx(mean, abs=1e-9)
            assert d.median == pytest.approx(median, abs=1e-9)
            assert d.sd == pytest.approx(sd, abs=1e-9)
            assert d.iqr == pytest.approx(iqr, abs=1e-9)


def _age_corpus(ages):
    """One entry per reference; publication year backdated by the age."""
    entry_cites = {f"E{i}": [f"W{i}"] for i in range(len(ages))}
    cit_years = {(f"E{i}", f"W{i}"): 2015 for i in range(len(ages))}
    pub_years = {f"W{i}": 2015 - a for i, a in enumerate(ages)}
    return make_corpus(entry_cites, cit_years=cit_years, pub_years=pub_years)


class TestPriceIndex:
    def test_ten_age_fixture_strict(self):
        # under the strict (age < N) window this fixture gives 0.3/0.5/0.7:
        # ages below 20 are 0,1,4,5,9,10,19
        corpus = _age_corpus([0, 1, 4, 5, 9, 10, 19, 20, 25, 30])
        [report] = metrics.price_index(corpus, windows=(5, 10, 20))
        assert report.fractions == (0.3, 0.5, 0.7)

    def test_inclusive_flag(self):
        corpus = _age_corpus([0, 1, 4, 5, 9, 10, 19, 20, 25, 30])
        [report] = metrics.price_index(corpus, windows=(5, 10, 20),
                                       inclusive=True)
        assert report.fractions == (0.4, 0.6, 0.8)

    def test_all_same_year(self):
        corpus = _age_corpus([0] * 6)
        [report] = metrics.price_index(corpus, windows=(1, 5, 20))
        assert report.fractions == (1.0, 1.0, 1.0)

    def test_negative_ages_excluded(self):
        corpus = _age_corpus([-2, -1, 0, 3])
        [report] = metrics.price_index(corpus, windows=(5,))
        assert report.excluded_negative_age == 2
        assert report.n_eligible == 2
        assert report.fractions == (1.0,)

    def test_monotone_in_window(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            ages = rng.integers(-3, 40, size=int(rng.integers(1, 30))).tolist()
            if all(a < 0 for a in ages):
                continue
            corpus = _age_corpus(ages)
            [report] = metrics.price_index(corpus, windows=(5, 10, 15, 20))
            assert list(report.fractions) == sorted(report.fractions)
            for w, f in zip(report.windows, report.fractions):
                assert f == pytest.approx(brute_price_fraction(ages, w))

    def test_grouped_full_counting(self):
        corpus = make_corpus(
            {"E1": ["W1", "W2"]},
            journal_codes={"J_W1": ["2701"], "J_W2": ["2701", "1301"]},
            cit_years={("E1", "W1"): 2015, ("E1", "W2"): 2015},
            pub_years={"W1": 2014, "W2": 2000})
        reports = {r.group: r for r in
                   metrics.price_index(corpus, windows=(5,),
                                       group_by="main_field")}
        assert reports["Medicine"].fractions == (0.5,)       # ages 1 and 15
        assert reports["Biochemistry"].fractions == (0.0,)   # age 15 only
        assert reports["Medicine"].n_eligible == 2

    def test_empty_group_omitted(self):
        corpus = make_corpus({"E1": ["W1"]},
                             journal_codes={"J_W1": ["2701"]},
                             cit_years={("E1", "W1"): 2000},
                             pub_years={"W1": 2010})  # negative age only
        assert metrics.price_index(corpus, windows=(5,),
                                   group_by="main_field") == []


class TestAgingProfile:
    def test_single_entry_one_year(self):
        corpus = make_corpus({"E1": ["W1", "W2", "W3"]},
                             cit_years={("E1", w): 2012
                                        for w in ("W1", "W2", "W3")})
        profile = metrics.citation_aging_profile(corpus)
        assert profile.offsets == (0,)
        assert profile.mean_citations == (3.0,)
        assert profile.shares == (1.0,)

    def test_two_entry_fixture(self):
        corpus = make_corpus(
            {"E1": ["W1", "W2", "W3"], "E2": ["W4"]},
            cit_years={("E1", "W1"): 2010, ("E1", "W2"): 2010,
                       ("E1", "W3"): 2011, ("E2", "W4"): 2011})
        profile = metrics.citation_aging_profile(corpus)
        assert profile.offsets == (0, 1)
        assert profile.mean_citations == (1.5, 0.5)
        assert profile.shares == (0.75, 0.25)

    def test_shares_sum_to_one(self):
        rng = np.random.default_rng(11)
        entry_cites = {}
        cit_years = {}
        for e in range(20):
            works = [f"W{e}_{k}" for k in range(int(rng.integers(1, 8)))]
            entry_cites[f"E{e}"] = works
            for w in works:
                cit_years[(f"E{e}", w)] = int(rng.integers(2005, 2018))
        corpus = make_corpus(entry_cites, cit_years=cit_years)
        profile = metrics.citation_aging_profile(corpus)
        assert sum(profile.shares) == pytest.approx(1.0, abs=1e-12)


class TestBoxSummary:
    def test_five_numbers_and_outliers(self):
        values = [1, 2, 3, 4, 5, 6, 7, 8, 100]
        box = metrics.box_summary(values)
        assert box["minimum"] == 1.0 and box["maximum"] == 100.0
        assert box["median"] == 5.0
        assert box["outliers"] == [100.0]
        assert box["whisker_high"] == 8.0

    def test_no_outliers(self):
        box = metrics.box_summary([1, 2, 3, 4])
        assert box["outliers"] == []
        assert box["whisker_low"] == 1.0 and box["whisker_high"] == 4.0


class TestConcentrationShare:
    def test_uniform_half(self):
        assert metrics.concentration_share([3] * 10, 0.5) == pytest.approx(0.5)

    def test_hand_computed(self):
        values = [10] + [1] * 9
        assert metrics.concentration_share(values, 0.1) == pytest.approx(10 / 19)

    def test_zero_total(self):
        with pytest.raises(ZeroTotal):
            metrics.concentration_share([0.0, 0.0], 0.5)

    @given(st.lists(st.floats(min_value=0.01, max_value=1e6), min_size=1,
                    max_size=50),
           st.floats(min_value=0.01, max_value=1.0),
           st.floats(min_value=0.1, max_value=100.0))
    @settings(max_examples=200, deadline=None)
    def test_scale_invariance(self, values, fraction, c):
        base = metrics.concentration_share(values, fraction)
        scaled = metrics.concentration_share([v * c for v in values], fraction)
        assert scaled == pytest.approx(base, rel=1e-9)
