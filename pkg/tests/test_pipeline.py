"""Pipeline helpers: window counts, field counts, config validation."""

import pytest

from cocimap.errors import ConfigError
from cocimap.pipeline import (
    PipelineConfig,
    wiki_field_article_counts,
    wiki_window_counts,
)

from conftest import make_corpus


class TestWindowCounts:
    def test_citation_and_article_counts(self):
        corpus = make_corpus(
            {"E1": ["W1", "W2", "W3"], "E2": ["W1"]},
            work_journal={"W1": ["J1"], "W2": ["J1"], "W3": ["J2"]},
            cit_years={("E1", "W1"): 2016, ("E1", "W2"): 2016,
                       ("E1", "W3"): 2016, ("E2", "W1"): 2017},  # out of window
            pub_years={"W1": 2014, "W2": 2015, "W3": 2010})  # W3 out of window
        cites, articles = wiki_window_counts(corpus, 2016, 2013, 2015)
        assert cites == {"J1": 2}
        assert articles == {"J1": 2}

    def test_multi_journal_work_counts_in_both(self):
        corpus = make_corpus(
            {"E1": ["W1"]}, work_journal={"W1": ["JA", "JB"]},
            cit_years={("E1", "W1"): 2016}, pub_years={"W1": 2014})
        cites, articles = wiki_window_counts(corpus, 2016, 2013, 2015)
        assert cites == {"JA": 1, "JB": 1}
        assert articles == {"JA": 1, "JB": 1}


class TestFieldArticleCounts:
    def test_distinct_works_full_counting(self):
        corpus = make_corpus(
            {"E1": ["W1", "W2"], "E2": ["W1"]},
            journal_codes={"J_W1": ["2701", "1301"], "J_W2": ["2701"]})
        counts = wiki_field_article_counts(corpus)
        # W1 counts once for Medicine and once for Biochemistry even though
        # it is cited twice; W2 once for Medicine
        assert counts == {"Medicine": 2, "Biochemistry": 1}


class TestConfigValidation:
    def _base(self, tmp_path):
        for name in ("refs", "journals", "scheme"):
            (tmp_path / f"{name}.csv").write_text("x\n")
        return dict(refs=str(tmp_path / "refs.csv"),
                    journals=str(tmp_path / "journals.csv"),
                    scheme=str(tmp_path / "scheme.csv"), seed=1)

    def test_ok(self, tmp_path):
        PipelineConfig(**self._base(tmp_path)).validate()

    def test_bad_windows(self, tmp_path):
        cfg = PipelineConfig(windows=(5, 0), **self._base(tmp_path))
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_bad_level(self, tmp_path):
        cfg = PipelineConfig(level="nope", **self._base(tmp_path))
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_low_nsims(self, tmp_path):
        cfg = PipelineConfig(n_sims=10, **self._base(tmp_path))
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_seed_required_for_bootstrap(self, tmp_path):
        base = self._base(tmp_path)
        base.pop("seed")
        cfg = PipelineConfig(**base)
        with pytest.raises(ConfigError):
            cfg.validate()
        cfg.validate(require_bootstrap_seed=False)
