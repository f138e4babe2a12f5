"""Cross-source comparisons: percentile ratios, field shares, OLS, Q-Q points.

Percentiles are fractional mean ranks: the rank of a journal among the
eligible journals (ties share the mean rank) divided by the eligible
count.  With most journals tied at very low counts the tie policy
materially changes the ratios, so every report names it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.stats import rankdata

from .errors import ConstantPredictor, EmptySource

TIE_POLICY = "mean rank (fractional percentile over eligible journals)"

DEFAULT_THRESHOLDS = (3, 3, 2)  # wiki citations, scopus citations, articles cited


@dataclass(frozen=True)
class JournalComparison:
    journal_id: str
    wiki_citations: int
    scopus_citations: int
    wiki_articles_cited: int
    wiki_percentile: float
    scopus_percentile: float
    ratio: float

    def to_dict(self) -> dict:
        return {
            "journal_id": self.journal_id,
            "wiki_citations": self.wiki_citations,
            "scopus_citations": self.scopus_citations,
            "wiki_articles_cited": self.wiki_articles_cited,
            "wiki_percentile": self.wiki_percentile,
            "scopus_percentile": self.scopus_percentile,
            "ratio": self.ratio,
        }


def percentile_ratio(wiki_citations: Mapping[str, int],
                     wiki_articles: Mapping[str, int],
                     scopus_citations: Mapping[str, int],
                     thresholds: tuple[int, int, int] = DEFAULT_THRESHOLDS,
                     ) -> list[JournalComparison]:
    """Wiki-vs-Scopus citation percentile ratios per journal.

    A journal is eligible when it has at least ``thresholds[0]`` wiki
    citations, ``thresholds[1]`` scopus citations and ``thresholds[2]``
    distinct articles cited.  Results are sorted by descending ratio
    (journal id breaks ties).
    """
    t_wiki, t_scopus, t_articles = thresholds
    eligible = sorted(
        j for j in set(wiki_citations) | set(scopus_citations)
        if wiki_citations.get(j, 0) >= t_wiki
        and scopus_citations.get(j, 0) >= t_scopus
        and wiki_articles.get(j, 0) >= t_articles
    )
    if not eligible:
        return []
    n = len(eligible)
    wiki = np.array([wiki_citations[j] for j in eligible], dtype=np.float64)
    scopus = np.array([scopus_citations[j] for j in eligible], dtype=np.float64)
    wiki_pct = rankdata(wiki, method="average") / n
    scopus_pct = rankdata(scopus, method="average") / n
    out = [
        JournalComparison(
            journal_id=j,
            wiki_citations=int(wiki[i]),
            scopus_citations=int(scopus[i]),
            wiki_articles_cited=int(wiki_articles[j]),
            wiki_percentile=float(wiki_pct[i]),
            scopus_percentile=float(scopus_pct[i]),
            ratio=float(wiki_pct[i] / scopus_pct[i]),
        )
        for i, j in enumerate(eligible)
    ]
    out.sort(key=lambda c: (-c.ratio, c.journal_id))
    return out


@dataclass(frozen=True)
class FieldShareDiff:
    main_field: str
    share_a: float
    share_b: float
    diff_points: float  # (share_a - share_b) in percentage points

    def to_dict(self) -> dict:
        return {"main_field": self.main_field, "share_a": self.share_a,
                "share_b": self.share_b, "diff_points": self.diff_points}


def field_share_diff(counts_a: Mapping[str, float],
                     counts_b: Mapping[str, float]) -> list[FieldShareDiff]:
    """Per-field share difference between two sources, in percentage points.

    Shares are normalized within each source (full counting upstream:
    multi-field articles count once per field); missing fields count as 0.
    Sorted by field name; the diffs sum to 0.
    """
    fields = sorted(set(counts_a) | set(counts_b))
    total_a = float(sum(counts_a.values()))
    total_b = float(sum(counts_b.values()))
    if total_a <= 0 or total_b <= 0:
        raise EmptySource("both sources need a positive article total")
    out = []
    for f in fields:
        share_a = counts_a.get(f, 0) / total_a
        share_b = counts_b.get(f, 0) / total_b
        out.append(FieldShareDiff(main_field=f, share_a=share_a,
                                  share_b=share_b,
                                  diff_points=100.0 * (share_a - share_b)))
    return out


def linear_fit(x, y) -> tuple[float, float, float]:
    """Ordinary least squares: (slope, intercept, r_squared)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise ValueError("x and y must have equal length")
    if x.size < 3:
        raise ValueError("need at least 3 points")
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0.0:
        raise ConstantPredictor("x is constant")
    sxy = float(((x - x.mean()) * (y - y.mean())).sum())
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float((residuals ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


def qq_points(x, y, n_quantiles: int = 100) -> list[tuple[float, float]]:
    """Matched quantile pairs at probabilities (i - 0.5) / n_quantiles.

    Quantiles interpolate linearly between order statistics (the same
    convention as the descriptive statistics).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise EmptySource("qq_points needs non-empty inputs")
    if n_quantiles < 1:
        raise ValueError("n_quantiles must be >= 1")
    probs = (np.arange(1, n_quantiles + 1) - 0.5) / n_quantiles
    qx = np.quantile(x, probs, method="linear")
    qy = np.quantile(y, probs, method="linear")
    return [(float(a), float(b)) for a, b in zip(qx, qy)]
