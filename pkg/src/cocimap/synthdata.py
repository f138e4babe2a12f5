"""Seeded synthetic corpora: input files for the pipeline and in-memory
corpora for the scale benchmark.

The bundled classification scheme follows the public three-tier structure
(5 areas, 27 main fields keyed by 2-digit prefixes 10..36, 330 fields) so
shape validation runs against realistic data.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .corpus import (
    ClassificationScheme,
    Funnel,
    JournalRecord,
    LinkedCorpus,
    issn_check_digit,
)

AREA_OF_MAIN_FIELD = {
    "Multidisciplinary": "Multidisciplinary",
    "Agricultural and Biological Sciences": "Life Sciences",
    "Arts and Humanities": "Social Sciences & Humanities",
    "Biochemistry, Genetics and Molecular Biology": "Life Sciences",
    "Business, Management and Accounting": "Social Sciences & Humanities",
    "Chemical Engineering": "Physical Sciences",
    "Chemistry": "Physical Sciences",
    "Computer Science": "Physical Sciences",
    "Decision Sciences": "Social Sciences & Humanities",
    "Earth and Planetary Sciences": "Physical Sciences",
    "Economics, Econometrics and Finance": "Social Sciences & Humanities",
    "Energy": "Physical Sciences",
    "Engineering": "Physical Sciences",
    "Environmental Science": "Physical Sciences",
    "Immunology and Microbiology": "Life Sciences",
    "Materials Science": "Physical Sciences",
    "Mathematics": "Physical Sciences",
    "Medicine": "Health Sciences",
    "Neuroscience": "Life Sciences",
    "Nursing": "Health Sciences",
    "Pharmacology, Toxicology and Pharmaceutics": "Life Sciences",
    "Physics and Astronomy": "Physical Sciences",
    "Psychology": "Social Sciences & Humanities",
    "Social Sciences": "Social Sciences & Humanities",
    "Veterinary": "Health Sciences",
    "Dentistry": "Health Sciences",
    "Health Professions": "Health Sciences",
}

_MAIN_FIELD_ORDER = list(AREA_OF_MAIN_FIELD)


def reference_scheme_rows():
    """330 field rows over the 27 main fields and 5 areas."""
    rows = []
    # Multidisciplinary (prefix 10) has the single code 1000; the other
    # 329 fields split across the remaining 26 main fields (17x13 + 9x12).
    rows.append(("1000", "Multidisciplinary", "Multidisciplinary",
                 "Multidisciplinary"))
    others = _MAIN_FIELD_ORDER[1:]
    for i, mf in enumerate(others):
        prefix = 11 + i
        n_fields = 13 if i < 17 else 12
        area = AREA_OF_MAIN_FIELD[mf]
        for k in range(n_fields):
            code = f"{prefix}{k:02d}"
            name = f"General {mf}" if k == 0 else f"{mf} Specialty {k}"
            rows.append((code, name, mf, area))
    return rows


def write_reference_scheme(path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["code", "field", "main_field", "area"])
        writer.writerows(reference_scheme_rows())


def reference_scheme() -> ClassificationScheme:
    rows = reference_scheme_rows()
    field_of = {c: f for c, f, _, _ in rows}
    main_field_of = {c[:2]: m for c, _, m, _ in rows}
    area_of = {m: a for _, _, m, a in rows}
    return ClassificationScheme(field_of, main_field_of, area_of)


def _issn_for(index: int) -> str:
    body = f"{1000000 + index:07d}"
    return body + issn_check_digit(body)


def _journal_codes(rng, all_codes):
    n = int(rng.integers(1, 4))
    return sorted(rng.choice(len(all_codes), size=n, replace=False))


def generate_input_files(out_dir, seed: int = 0, n_entries: int = 1000,
                         n_references: int = 5000, n_journals: int = 200,
                         n_works: int = 2500,
                         duplicate_fraction: float = 0.02,
                         missing_date_fraction: float = 0.02):
    """Write refs.csv, journals.csv, scheme.csv and scopus.csv under out_dir.

    Returns the four paths.  Content is fully determined by the seed; a
    small fraction of duplicate rows and missing publication dates
    exercises the ingestion funnel.
    """
    rng = np.random.default_rng(seed)
    os.makedirs(out_dir, exist_ok=True)
    scheme_rows = reference_scheme_rows()
    all_codes = [r[0] for r in scheme_rows]

    journals = []
    for j in range(n_journals):
        codes = [all_codes[i] for i in _journal_codes(rng, all_codes)]
        journals.append({
            "journal_id": f"J{j:05d}",
            "title": f"Journal of Synthetic Studies {j}",
            "issns": _issn_for(j),
            "asjc_codes": ";".join(codes),
            "open_access": "1" if rng.random() < 0.15 else "0",
            "window_citations": int(rng.pareto(1.2) * 20),
            "window_articles": int(rng.pareto(1.5) * 15) + 1,
        })

    # works: heavy-tailed popularity, one journal each
    work_journal = (rng.zipf(1.6, size=n_works) - 1) % n_journals
    work_pub_year = 2018 - np.minimum(
        rng.exponential(8.0, size=n_works).astype(np.int64), 60)

    # references: entries draw works with zipf popularity
    sizes = np.minimum(rng.zipf(2.2, size=n_entries), 60)
    total = int(sizes.sum())
    while total < n_references:
        extra = np.minimum(rng.zipf(2.2, size=n_entries), 60)
        sizes = sizes + extra
        total = int(sizes.sum())
    # trim to the requested reference count
    cum = np.cumsum(sizes)
    over = int(cum[-1] - n_references)
    if over > 0:
        for e in range(n_entries - 1, -1, -1):
            take = min(over, int(sizes[e]) - 1)
            sizes[e] -= take
            over -= take
            if over == 0:
                break

    rows = []
    for e in range(n_entries):
        k = int(sizes[e])
        works = np.unique((rng.zipf(1.5, size=k) - 1) % n_works)
        entry_year = int(rng.integers(2005, 2019))
        for w in works:
            pub_year = int(work_pub_year[w])
            cit_year = min(2018, max(entry_year, pub_year)
                           + int(rng.exponential(1.5)))
            month = int(rng.integers(1, 13))
            day = int(rng.integers(1, 29))
            pub = f"{pub_year:04d}-{int(rng.integers(1, 13)):02d}-01"
            if rng.random() < missing_date_fraction:
                pub = ""
            rows.append({
                "citing_entry_id": f"E{e:06d}",
                "cited_work_id": f"W{int(w):06d}",
                "citation_date": f"{cit_year:04d}-{month:02d}-{day:02d}",
                "publication_date": pub,
                "issns": journals[int(work_journal[w])]["issns"],
            })
    # inject duplicates (same entry/work, later citation date)
    n_dup = int(len(rows) * duplicate_fraction)
    for i in range(n_dup):
        src = dict(rows[int(rng.integers(0, len(rows)))])
        src["citation_date"] = "2018-12-31"
        rows.append(src)

    refs_path = os.path.join(out_dir, "refs.csv")
    with open(refs_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["citing_entry_id",
                                                "cited_work_id",
                                                "citation_date",
                                                "publication_date", "issns"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    journals_path = os.path.join(out_dir, "journals.csv")
    with open(journals_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(journals[0]),
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(journals)

    scheme_path = os.path.join(out_dir, "scheme.csv")
    write_reference_scheme(scheme_path)

    scopus_path = os.path.join(out_dir, "scopus.csv")
    with open(scopus_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["journal_id", "citations", "articles"])
        for j in journals:
            writer.writerow([j["journal_id"], j["window_citations"],
                             j["window_articles"]])
    return refs_path, journals_path, scheme_path, scopus_path


def generate_linked_corpus(seed: int = 0, n_references: int = 1_000_000,
                           n_journals: int = 10_000,
                           n_entries: int | None = None,
                           n_works: int | None = None) -> LinkedCorpus:
    """In-memory corpus at benchmark scale, built columnar (no file round trip).

    Reference counts are exact: draws are oversampled, duplicate
    (entry, work) pairs collapse, and the result is trimmed back to
    ``n_references`` records.  Work and journal popularity are heavy-tailed
    (inverse-power CDF) so co-citation structure resembles real corpora.
    """
    rng = np.random.default_rng(seed)
    n_entries = n_entries or max(n_references // 8, 1)
    n_works = n_works or max(n_references // 3, 1)

    # entry sizes: heavy tail, mean ~8; oversample for the dedup loss
    sizes = np.minimum(rng.zipf(1.8, size=n_entries), 300).astype(np.int64)
    while int(sizes.sum()) < int(1.15 * n_references):
        sizes += np.minimum(rng.zipf(1.8, size=n_entries), 300)

    rec_entry = np.repeat(np.arange(n_entries, dtype=np.int64), sizes)
    # inverse-power popularity: dense head without a single dominating work
    rec_work = (n_works * rng.random(rec_entry.size) ** 2.2).astype(np.int64)
    keys = np.unique(rec_entry * n_works + rec_work)
    if keys.size < n_references:
        raise ValueError("oversampling insufficient; raise the inflation factor")
    keys = keys[
        np.sort(rng.choice(keys.size, size=n_references, replace=False))]
    rec_entry = (keys // n_works).astype(np.int64)
    rec_work = (keys % n_works).astype(np.int64)
    n = rec_entry.size

    # restrict id tables to entries/works that actually occur
    present_e, rec_entry = np.unique(rec_entry, return_inverse=True)
    present_w, rec_work = np.unique(rec_work, return_inverse=True)
    rec_entry = rec_entry.astype(np.int32)
    rec_work = rec_work.astype(np.int32)
    n_entries = len(present_e)
    n_works = len(present_w)

    work_journal = (n_journals
                    * rng.random(n_works) ** 2.0).astype(np.int32)
    work_pub_year = (2018 - np.minimum(
        rng.exponential(8.0, size=n_works), 60.0).astype(np.int64)).astype(np.int32)
    rec_pub_year = work_pub_year[rec_work]
    rec_cit_year = np.minimum(
        rec_pub_year + rng.exponential(4.0, size=n).astype(np.int32), 2018)

    scheme = reference_scheme()
    all_codes = sorted(scheme.field_of)
    journals = []
    code_pick = rng.integers(0, len(all_codes), size=n_journals)
    for j in range(n_journals):
        journals.append(JournalRecord(
            journal_id=f"J{j:05d}",
            title=f"Journal {j}",
            issns=(_issn_for(j),),
            asjc_codes=(all_codes[int(code_pick[j])],),
            open_access=bool(j % 7 == 0),
            window_citations=int(j % 97),
            window_articles=int(j % 53) + 1,
        ))

    entry_ids = [f"E{int(i):06d}" for i in present_e]
    work_ids = [f"W{int(i):06d}" for i in present_w]
    indptr = np.arange(n_works + 1, dtype=np.int64)
    funnel = Funnel(raw=n, kept=n, linked=n)
    return LinkedCorpus.from_arrays(
        entry_ids, work_ids, rec_entry, rec_work, rec_cit_year, rec_pub_year,
        indptr, work_journal, journals, scheme, funnel)
