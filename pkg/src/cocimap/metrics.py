"""Descriptive statistics, concentration, citation aging and obsolescence.

Ages are calendar-year differences (citation year minus publication year);
day precision would fabricate resolution the year-granular comparison
baselines lack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import LinkedCorpus, _ramp
from .errors import EmptyInput, ZeroTotal


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    median: float
    sd: float
    iqr: float

    def to_dict(self) -> dict:
        return {"n": self.n, "mean": self.mean, "median": self.median,
                "sd": self.sd, "iqr": self.iqr}


def describe(values) -> DescriptiveStats:
    """Mean, median, sample SD (n-1 denominator) and IQR of a value list.

    Quantiles use linear interpolation between order statistics (quantile p
    sits at position 1+(n-1)p).  SD is defined as 0 for n=1.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("describe() requires at least one value")
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0], method="linear")
    sd = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return DescriptiveStats(
        n=int(arr.size),
        mean=float(arr.mean()),
        median=float(med),
        sd=sd,
        iqr=float(q3 - q1),
    )


@dataclass(frozen=True)
class PriceIndexReport:
    """Fraction of references not older than each window length, in years."""

    windows: tuple[int, ...]
    fractions: tuple[float, ...]
    group: str | None
    n_eligible: int
    excluded_negative_age: int

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "windows": list(self.windows),
            "fractions": list(self.fractions),
            "n_eligible": self.n_eligible,
            "excluded_negative_age": self.excluded_negative_age,
        }


def _price_fractions(ages: np.ndarray, windows, inclusive: bool):
    neg = int((ages < 0).sum())
    eligible = ages[ages >= 0]
    if eligible.size == 0:
        return None, neg
    fractions = []
    for n_years in windows:
        if inclusive:
            count = int((eligible <= n_years).sum())
        else:
            count = int((eligible < n_years).sum())
        fractions.append(count / eligible.size)
    return (tuple(fractions), eligible.size), neg


def price_index(corpus: LinkedCorpus, windows=(5, 10, 15, 20),
                group_by: str | None = None,
                inclusive: bool = False) -> list[PriceIndexReport]:
    """Obsolescence of the cited literature at the given window lengths.

    A reference of age a = citation year - publication year counts toward
    window N iff 0 <= a < N (or a <= N under ``inclusive``).  Negative ages
    are excluded from numerator and denominator and tallied.  With
    ``group_by`` in {'field', 'main_field', 'area'} one report is emitted
    per group under full counting (a reference counts once per group of its
    journal); groups with no eligible references are omitted.
    """
    windows = tuple(int(w) for w in windows)
    if any(w <= 0 for w in windows):
        raise ValueError("window lengths must be positive")
    ages = (corpus.rec_cit_year - corpus.rec_pub_year).astype(np.int64)

    if group_by is None:
        packed, neg = _price_fractions(ages, windows, inclusive)
        if packed is None:
            return []
        fractions, n_eligible = packed
        return [PriceIndexReport(windows, fractions, None, n_eligible, neg)]

    # full counting: expand each record to one row per unit of its work
    unit_ids, indptr, unit_idx = corpus.units_for_level(group_by)
    sizes = np.diff(indptr)
    rec_sizes = sizes[corpus.rec_work]
    exp_unit = unit_idx[np.repeat(indptr[corpus.rec_work], rec_sizes)
                        + _ramp(rec_sizes)]
    exp_age = np.repeat(ages, rec_sizes)
    order = np.argsort(exp_unit, kind="stable")
    exp_unit = exp_unit[order]
    exp_age = exp_age[order]
    bounds = np.flatnonzero(np.diff(exp_unit)) + 1
    starts = np.concatenate(([0], bounds))
    ends = np.concatenate((bounds, [exp_unit.size])) if exp_unit.size else starts

    reports = []
    for s, e in zip(starts, ends):
        packed, neg = _price_fractions(exp_age[s:e], windows, inclusive)
        if packed is None:
            continue
        fractions, n_eligible = packed
        reports.append(PriceIndexReport(windows, fractions,
                                        unit_ids[int(exp_unit[s])],
                                        n_eligible, neg))
    reports.sort(key=lambda r: r.group)
    return reports


@dataclass(frozen=True)
class AgingProfile:
    """Citations per entry by years since the entry's first citation."""

    offsets: tuple[int, ...]
    mean_citations: tuple[float, ...]
    shares: tuple[float, ...]
    n_entries: int
    n_references: int

    def to_dict(self) -> dict:
        return {
            "offsets": list(self.offsets),
            "mean_citations": list(self.mean_citations),
            "shares": list(self.shares),
            "n_entries": self.n_entries,
            "n_references": self.n_references,
        }


def citation_aging_profile(corpus: LinkedCorpus) -> AgingProfile:
    """Mean citations and share of all references per year offset.

    The offset of a reference is citation year minus the entry's first
    citation year; the mean at each offset is the reference count divided
    by the total number of entries.
    """
    if corpus.n_records == 0:
        raise EmptyInput("aging profile requires a non-empty corpus")
    first = np.full(corpus.n_entries, np.iinfo(np.int32).max, dtype=np.int32)
    np.minimum.at(first, corpus.rec_entry, corpus.rec_cit_year)
    offsets = corpus.rec_cit_year - first[corpus.rec_entry]
    counts = np.bincount(offsets)
    offs = np.flatnonzero(counts)
    return AgingProfile(
        offsets=tuple(int(o) for o in offs),
        mean_citations=tuple(float(counts[o] / corpus.n_entries) for o in offs),
        shares=tuple(float(counts[o] / corpus.n_records) for o in offs),
        n_entries=corpus.n_entries,
        n_references=corpus.n_records,
    )


def concentration_share(values, top_fraction: float) -> float:
    """Share of the total held by the top ``top_fraction`` of values.

    Takes the ceil(top_fraction * n) largest values.  A tiny epsilon guards
    the ceil against float dust on exact-integer products.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("concentration_share() requires values")
    if not 0.0 < top_fraction <= 1.0:
        raise ValueError("top_fraction must be in (0, 1]")
    if np.any(arr < 0):
        raise ValueError("values must be nonnegative")
    total = float(arr.sum())
    if total == 0.0:
        raise ZeroTotal("concentration share undefined for a zero total")
    k = max(1, math.ceil(top_fraction * arr.size - 1e-9))
    k = min(k, arr.size)
    top = np.sort(arr)[::-1][:k]
    return float(top.sum() / total)


def box_summary(values) -> dict:
    """Five-number summary plus the outlier list (1.5 IQR whisker rule).

    This is the plot-ready payload behind box/violin figures; no rendering
    happens here.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("box_summary() requires values")
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0], method="linear")
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = np.sort(arr[(arr < lo_fence) | (arr > hi_fence)])
    return {
        "minimum": float(arr.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "maximum": float(arr.max()),
        "whisker_low": float(inside.min()),
        "whisker_high": float(inside.max()),
        "outliers": [float(v) for v in outliers],
    }


def references_per_entry(corpus: LinkedCorpus) -> np.ndarray:
    return np.bincount(corpus.rec_entry, minlength=corpus.n_entries).astype(np.int64)


def citations_per_work(corpus: LinkedCorpus) -> np.ndarray:
    return np.bincount(corpus.rec_work, minlength=corpus.n_works).astype(np.int64)
