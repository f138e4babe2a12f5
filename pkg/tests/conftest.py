"""Shared builders for corpus fixtures."""

from __future__ import annotations

from datetime import date

import pytest

from cocimap.corpus import (
    ClassificationScheme,
    JournalRecord,
    LinkedCorpus,
    ReferenceRecord,
    issn_check_digit,
)


def valid_issn(index: int) -> str:
    body = f"{3000000 + index:07d}"
    return body + issn_check_digit(body)


def small_scheme() -> ClassificationScheme:
    field_of = {
        "1000": "Multidisciplinary",
        "2701": "General Medicine",
        "2702": "Cardiology",
        "1301": "Molecular Biology",
        "1302": "Genetics",
        "3101": "Astronomy",
        "1201": "History",
    }
    main_field_of = {
        "10": "Multidisciplinary",
        "27": "Medicine",
        "13": "Biochemistry",
        "31": "Physics",
        "12": "Arts",
    }
    area_of = {
        "Multidisciplinary": "Multidisciplinary",
        "Medicine": "Health Sciences",
        "Biochemistry": "Life Sciences",
        "Physics": "Physical Sciences",
        "Arts": "Social Sciences & Humanities",
    }
    return ClassificationScheme(field_of, main_field_of, area_of)


def make_corpus(entry_cites: dict, work_journal: dict | None = None,
                journal_codes: dict | None = None,
                cit_years: dict | None = None,
                pub_years: dict | None = None,
                scheme: ClassificationScheme | None = None) -> LinkedCorpus:
    """Build a linked corpus from compact dict specs.

    entry_cites: entry id -> list of work ids.
    work_journal: work id -> list of journal ids (default: one journal per
    work, derived from the work id).
    journal_codes: journal id -> list of scheme codes (default ['2701']).
    cit_years / pub_years: (entry, work) -> year and work -> year overrides.
    """
    scheme = scheme or small_scheme()
    works = sorted({w for cites in entry_cites.values() for w in cites})
    if work_journal is None:
        work_journal = {w: [f"J_{w}"] for w in works}
    journal_ids = sorted({j for js in work_journal.values() for j in js})
    journal_codes = journal_codes or {}
    journals = []
    issn_of = {}
    for i, jid in enumerate(journal_ids):
        issn_of[jid] = valid_issn(i)
        journals.append(JournalRecord(
            journal_id=jid, title=f"Title of {jid}", issns=(issn_of[jid],),
            asjc_codes=tuple(journal_codes.get(jid, ["2701"])),
            open_access=False, window_citations=0, window_articles=1))
    records = []
    for entry, cites in sorted(entry_cites.items()):
        for work in cites:
            cit_year = (cit_years or {}).get((entry, work), 2015)
            pub_year = (pub_years or {}).get(work, 2010)
            issns = tuple(issn_of[j] for j in work_journal[work])
            records.append(ReferenceRecord(
                citing_entry_id=entry, cited_work_id=work,
                citation_date=date(cit_year, 6, 15),
                publication_date=date(pub_year, 1, 1),
                issns=issns))
    return LinkedCorpus.link_and_classify(records, journals, scheme)


@pytest.fixture
def scheme():
    return small_scheme()
