"""Corpus ingestion: reference records, journal metadata, subject classification.

The pre-processing funnel is: parse raw rows -> deduplicate on
(citing_entry_id, cited_work_id) -> drop records without a publication date
-> resolve records to journals through ISSNs -> attribute fields, main
fields and areas through the classification scheme.  Every stage records
its counts in a :class:`Funnel` so the identity

    raw == kept + dropped_duplicates + dropped_missing_date + malformed

holds exactly (``malformed`` is zero for clean inputs).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    ChecksumFailure,
    DuplicateIssn,
    InputError,
    MalformedIssn,
    ParseError,
)

LEVELS = ("work", "journal", "field", "main_field", "area")

_ISSN_WEIGHTS = (8, 7, 6, 5, 4, 3, 2)


def normalize_issn(raw: str) -> str:
    """Normalize an ISSN to its 8-character uppercase form.

    Hyphens and whitespace are removed and the mod-11 check digit is
    validated ('X' stands for the value 10 in the final position).
    Raises MalformedIssn or ChecksumFailure.
    """
    if not isinstance(raw, str):
        raise MalformedIssn(f"ISSN must be a string, got {type(raw).__name__}")
    compact = "".join(raw.upper().split()).replace("-", "")
    if len(compact) != 8:
        raise MalformedIssn(f"ISSN {raw!r} does not have 8 significant characters")
    if not compact[:7].isdigit():
        raise MalformedIssn(f"ISSN {raw!r} has non-digit characters in its body")
    check_char = compact[7]
    if check_char != "X" and not check_char.isdigit():
        raise MalformedIssn(f"ISSN {raw!r} has an invalid check character")
    weighted = sum(w * int(c) for w, c in zip(_ISSN_WEIGHTS, compact[:7]))
    expected = (11 - weighted % 11) % 11
    actual = 10 if check_char == "X" else int(check_char)
    if expected != actual:
        raise ChecksumFailure(
            f"ISSN {raw!r}: check digit is {check_char}, expected "
            f"{'X' if expected == 10 else expected}"
        )
    return compact


def issn_check_digit(body: str) -> str:
    """Return the check character for a 7-digit ISSN body."""
    if len(body) != 7 or not body.isdigit():
        raise MalformedIssn(f"ISSN body {body!r} must be 7 digits")
    weighted = sum(w * int(c) for w, c in zip(_ISSN_WEIGHTS, body))
    value = (11 - weighted % 11) % 11
    return "X" if value == 10 else str(value)


@dataclass(slots=True)
class ReferenceRecord:
    """One citation event from a citing entry to a cited work."""

    citing_entry_id: str
    cited_work_id: str
    citation_date: date
    publication_date: date | None
    issns: tuple[str, ...]


@dataclass(slots=True)
class JournalRecord:
    """One journal with its ISSNs, classification codes and window counts."""

    journal_id: str
    title: str
    issns: tuple[str, ...]
    asjc_codes: tuple[str, ...]
    open_access: bool
    window_citations: int
    window_articles: int

    def __post_init__(self):
        if not self.issns:
            raise InputError(f"journal {self.journal_id}: no ISSNs")
        if not self.asjc_codes:
            raise InputError(f"journal {self.journal_id}: no classification codes")
        if self.window_citations < 0 or self.window_articles < 0:
            raise InputError(f"journal {self.journal_id}: negative window counts")


@dataclass
class Funnel:
    """Record counts at each pre-processing stage."""

    raw: int = 0
    malformed: int = 0
    dropped_duplicates: int = 0
    dropped_missing_date: int = 0
    kept: int = 0
    linked: int = 0
    unresolved: int = 0
    invalid_issns: int = 0
    multi_journal_works: int = 0
    issn_conflicts: int = 0

    def check(self) -> None:
        assert self.raw == (
            self.kept
            + self.dropped_duplicates
            + self.dropped_missing_date
            + self.malformed
        ), "funnel conservation violated at the ingest stage"
        if self.linked or self.unresolved:
            assert self.kept == self.linked + self.unresolved, (
                "funnel conservation violated at the link stage"
            )

    def to_dict(self) -> dict:
        return {
            "raw": self.raw,
            "malformed": self.malformed,
            "dropped_duplicates": self.dropped_duplicates,
            "dropped_missing_date": self.dropped_missing_date,
            "kept": self.kept,
            "linked": self.linked,
            "unresolved": self.unresolved,
            "invalid_issns": self.invalid_issns,
            "multi_journal_works": self.multi_journal_works,
            "issn_conflicts": self.issn_conflicts,
        }


class ClassificationScheme:
    """Three-tier subject classification: 4-digit code -> field -> main field -> area.

    Main fields are keyed by the 2-digit code prefix.  The multidisciplinary
    main field carries its own area, so the reference scheme resolves to 5
    areas, 27 main fields and 330 fields.
    """

    def __init__(self, field_of: Mapping[str, str], main_field_of: Mapping[str, str],
                 area_of: Mapping[str, str]):
        self.field_of = dict(field_of)
        self.main_field_of = dict(main_field_of)
        self.area_of = dict(area_of)
        for code in self.field_of:
            if len(code) != 4 or not code.isdigit():
                raise InputError(f"classification code {code!r} is not 4 digits")
            if code[:2] not in self.main_field_of:
                raise InputError(f"code {code}: prefix {code[:2]} has no main field")
        for prefix, mf in self.main_field_of.items():
            if mf not in self.area_of:
                raise InputError(f"main field {mf!r} has no area")

    @property
    def n_fields(self) -> int:
        return len(set(self.field_of.values()))

    @property
    def n_main_fields(self) -> int:
        return len(set(self.main_field_of.values()))

    @property
    def n_areas(self) -> int:
        return len(set(self.area_of.values()))

    def shape(self) -> tuple[int, int, int]:
        return (self.n_areas, self.n_main_fields, self.n_fields)

    def validate_reference_shape(self) -> None:
        """Assert the reference-scheme shape of 5 areas, 27 main fields, 330 fields."""
        if self.shape() != (5, 27, 330):
            raise InputError(
                f"scheme shape {self.shape()} != reference shape (5, 27, 330)"
            )

    def main_field_of_code(self, code: str) -> str:
        return self.main_field_of[code[:2]]

    def area_of_code(self, code: str) -> str:
        return self.area_of[self.main_field_of[code[:2]]]


def load_scheme(path, require_reference_shape: bool = False) -> ClassificationScheme:
    """Load a classification scheme from a CSV of code,field,main_field,area."""
    field_of: dict[str, str] = {}
    main_field_of: dict[str, str] = {}
    area_of: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"code", "field", "main_field", "area"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InputError(f"{path}: scheme CSV must have columns {sorted(required)}")
        for row in reader:
            code = row["code"].strip()
            if code in field_of:
                raise InputError(f"{path}: duplicate classification code {code}")
            field_of[code] = row["field"].strip()
            prefix = code[:2]
            mf = row["main_field"].strip()
            if main_field_of.setdefault(prefix, mf) != mf:
                raise InputError(
                    f"{path}: prefix {prefix} maps to both "
                    f"{main_field_of[prefix]!r} and {mf!r}"
                )
            area = row["area"].strip()
            if area_of.setdefault(mf, area) != area:
                raise InputError(
                    f"{path}: main field {mf!r} maps to both "
                    f"{area_of[mf]!r} and {area!r}"
                )
    scheme = ClassificationScheme(field_of, main_field_of, area_of)
    if require_reference_shape:
        scheme.validate_reference_shape()
    return scheme


def load_journals(path) -> list[JournalRecord]:
    """Load journal metadata from a CSV.

    Columns: journal_id, title, issns (semicolon-separated), asjc_codes
    (semicolon-separated 4-digit codes), open_access (0/1),
    window_citations, window_articles.
    """
    journals: list[JournalRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"journal_id", "title", "issns", "asjc_codes", "open_access",
                    "window_citations", "window_articles"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InputError(f"{path}: journal CSV must have columns {sorted(required)}")
        for i, row in enumerate(reader, start=2):
            try:
                issns = tuple(
                    normalize_issn(t) for t in row["issns"].split(";") if t.strip()
                )
                codes = tuple(t.strip() for t in row["asjc_codes"].split(";") if t.strip())
                journals.append(JournalRecord(
                    journal_id=row["journal_id"].strip(),
                    title=row["title"].strip(),
                    issns=issns,
                    asjc_codes=codes,
                    open_access=row["open_access"].strip() == "1",
                    window_citations=int(row["window_citations"]),
                    window_articles=int(row["window_articles"]),
                ))
            except (MalformedIssn, ChecksumFailure, ValueError, InputError) as exc:
                raise InputError(f"{path}:{i}: {exc}") from exc
    return journals


def _parse_date(text: str) -> date:
    return date.fromisoformat(text.strip())


def _row_to_record(row: Mapping[str, str], line_no: int) -> tuple[ReferenceRecord, int]:
    """Parse one raw row.  Returns (record, n_invalid_issns)."""
    try:
        citing = (row.get("citing_entry_id") or "").strip()
        cited = (row.get("cited_work_id") or "").strip()
        if not citing or not cited:
            raise ValueError("citing_entry_id and cited_work_id must be non-empty")
        citation_date = _parse_date(row["citation_date"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"line {line_no}: {exc}", line_no) from exc

    pub_raw = (row.get("publication_date") or "").strip()
    publication_date: date | None
    try:
        publication_date = _parse_date(pub_raw) if pub_raw else None
    except ValueError:
        # An unparseable publication date counts as missing, not malformed:
        # the record is dropped at the date-validation stage.
        publication_date = None

    issns = []
    invalid = 0
    raw_issns = row.get("issns") or ""
    if isinstance(raw_issns, (list, tuple)):
        tokens = [str(t) for t in raw_issns]
    else:
        tokens = str(raw_issns).split(";")
    for token in tokens:
        token = token.strip()
        if not token:
            continue
        try:
            issns.append(normalize_issn(token))
        except (MalformedIssn, ChecksumFailure):
            invalid += 1
    record = ReferenceRecord(citing, cited, citation_date, publication_date,
                             tuple(dict.fromkeys(issns)))
    return record, invalid


def _iter_rows(source) -> Iterator[tuple[Mapping[str, str], int]]:
    """Yield (row-mapping, line_no) from a path, file object, or row iterable."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        path = str(source)
        try:
            fh = open(path, newline="", encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read references: {exc}") from exc
        with fh:
            if path.endswith((".jsonl", ".ndjson", ".json")):
                yield from _iter_jsonl(fh)
            else:
                yield from _iter_csv(fh)
        return
    if isinstance(source, io.TextIOBase):
        head = source.read(1)
        source.seek(0)
        if head == "{":
            yield from _iter_jsonl(source)
        else:
            yield from _iter_csv(source)
        return
    for i, row in enumerate(source, start=1):
        yield row, i


def _iter_jsonl(fh) -> Iterator[tuple[Mapping[str, str], int]]:
    for i, line in enumerate(fh, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield {"__malformed__": str(exc)}, i
            continue
        yield obj, i


def _iter_csv(fh) -> Iterator[tuple[Mapping[str, str], int]]:
    reader = csv.DictReader(fh)
    for i, row in enumerate(reader, start=2):
        yield row, i


def ingest_references(source, strict: bool = False,
                      ) -> tuple[list[ReferenceRecord], Funnel, list[ParseError]]:
    """Parse, deduplicate and date-validate a stream of raw reference rows.

    ``source`` is a path to a JSON Lines or CSV file, an open text handle,
    or an iterable of row mappings.  Duplicates on (citing_entry_id,
    cited_work_id) keep the copy with the earliest citation date; records
    without a parseable publication date are dropped and counted.  Parse
    errors are collected and returned unless ``strict`` is set, in which
    case the first one is raised.
    """
    funnel = Funnel()
    errors: list[ParseError] = []
    best: dict[tuple[str, str], ReferenceRecord] = {}

    for row, line_no in _iter_rows(source):
        funnel.raw += 1
        if "__malformed__" in row:
            err = ParseError(f"line {line_no}: {row['__malformed__']}", line_no)
            if strict:
                raise err
            errors.append(err)
            funnel.malformed += 1
            continue
        try:
            record, invalid = _row_to_record(row, line_no)
        except ParseError as err:
            if strict:
                raise
            errors.append(err)
            funnel.malformed += 1
            continue
        funnel.invalid_issns += invalid
        key = (record.citing_entry_id, record.cited_work_id)
        if key in best:
            funnel.dropped_duplicates += 1
            if record.citation_date < best[key].citation_date:
                best[key] = record
        else:
            best[key] = record

    records = []
    for record in best.values():  # dict preserves first-seen order
        if record.publication_date is None:
            funnel.dropped_missing_date += 1
        else:
            records.append(record)
    funnel.kept = len(records)
    funnel.check()
    return records, funnel, errors


def records_to_rows(records: Iterable[ReferenceRecord]) -> Iterator[dict]:
    """Serialize records back to the external row format (for re-ingestion)."""
    for r in records:
        yield {
            "citing_entry_id": r.citing_entry_id,
            "cited_work_id": r.cited_work_id,
            "citation_date": r.citation_date.isoformat(),
            "publication_date": (
                r.publication_date.isoformat() if r.publication_date else ""
            ),
            "issns": ";".join(r.issns),
        }


class LinkedCorpus:
    """Deduplicated records joined to journals and the classification scheme.

    Record data is held columnar (NumPy arrays coded against id tables) so
    million-record corpora stay compact and the co-citation builder can
    work on integer arrays directly.  Instances are immutable after
    construction and safe for concurrent reads.
    """

    def __init__(self, entry_ids, work_ids, rec_entry, rec_work, rec_cit_year,
                 rec_pub_year, work_journal_indptr, work_journal_idx, journals,
                 scheme, funnel):
        self.entry_ids: list[str] = entry_ids
        self.work_ids: list[str] = work_ids
        self.rec_entry = rec_entry
        self.rec_work = rec_work
        self.rec_cit_year = rec_cit_year
        self.rec_pub_year = rec_pub_year
        self.work_journal_indptr = work_journal_indptr
        self.work_journal_idx = work_journal_idx
        self.journals: list[JournalRecord] = journals
        self.scheme = scheme
        self.funnel = funnel
        self._journal_units: dict[str, tuple[tuple[str, ...], ...]] = {}
        self._units_cache: dict[str, tuple] = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def link_and_classify(cls, records: Sequence[ReferenceRecord],
                          journals: Sequence[JournalRecord],
                          scheme: ClassificationScheme,
                          funnel: Funnel | None = None,
                          lenient_issn: bool = True) -> "LinkedCorpus":
        """Resolve records to journals via ISSN and attribute classifications.

        Records whose ISSNs match no journal are dropped and counted as
        unresolved.  When two journals claim the same ISSN the first-loaded
        one wins under ``lenient_issn`` (the conflict is counted);
        otherwise DuplicateIssn is raised.
        """
        funnel = funnel or Funnel(raw=len(records), kept=len(records))
        issn_to_journal: dict[str, int] = {}
        conflicts = 0
        for j, journal in enumerate(journals):
            for issn in journal.issns:
                if issn in issn_to_journal and issn_to_journal[issn] != j:
                    if not lenient_issn:
                        raise DuplicateIssn(
                            f"ISSN {issn} claimed by journals "
                            f"{journals[issn_to_journal[issn]].journal_id} "
                            f"and {journal.journal_id}"
                        )
                    conflicts += 1
                    continue
                issn_to_journal[issn] = j
        funnel.issn_conflicts = conflicts

        entry_code: dict[str, int] = {}
        work_code: dict[str, int] = {}
        work_journals: dict[int, set[int]] = {}
        rec_entry, rec_work, cit_years, pub_years = [], [], [], []

        for record in records:
            matches = {issn_to_journal[i] for i in record.issns if i in issn_to_journal}
            if not matches:
                funnel.unresolved += 1
                continue
            if record.publication_date is None:
                raise InputError(
                    f"record {record.citing_entry_id}->{record.cited_work_id} "
                    "has no publication date; run ingest_references first"
                )
            e = entry_code.setdefault(record.citing_entry_id, len(entry_code))
            w = work_code.setdefault(record.cited_work_id, len(work_code))
            work_journals.setdefault(w, set()).update(matches)
            rec_entry.append(e)
            rec_work.append(w)
            cit_years.append(record.citation_date.year)
            pub_years.append(record.publication_date.year)

        funnel.linked = len(rec_entry)
        funnel.check()

        n_works = len(work_code)
        indptr = np.zeros(n_works + 1, dtype=np.int64)
        for w, js in work_journals.items():
            indptr[w + 1] = len(js)
        np.cumsum(indptr, out=indptr)
        jidx = np.empty(indptr[-1], dtype=np.int32)
        for w, js in work_journals.items():
            jidx[indptr[w]:indptr[w + 1]] = sorted(js)
        funnel.multi_journal_works = int(sum(len(js) > 1 for js in work_journals.values()))

        return cls(
            entry_ids=list(entry_code),
            work_ids=list(work_code),
            rec_entry=np.asarray(rec_entry, dtype=np.int32),
            rec_work=np.asarray(rec_work, dtype=np.int32),
            rec_cit_year=np.asarray(cit_years, dtype=np.int32),
            rec_pub_year=np.asarray(pub_years, dtype=np.int32),
            work_journal_indptr=indptr,
            work_journal_idx=jidx,
            journals=list(journals),
            scheme=scheme,
            funnel=funnel,
        )

    @classmethod
    def from_arrays(cls, entry_ids, work_ids, rec_entry, rec_work, rec_cit_year,
                    rec_pub_year, work_journal_indptr, work_journal_idx,
                    journals, scheme, funnel=None) -> "LinkedCorpus":
        """Columnar constructor for generated corpora; skips record objects."""
        n = len(rec_entry)
        funnel = funnel or Funnel(raw=n, kept=n, linked=n)
        return cls(list(entry_ids), list(work_ids),
                   np.asarray(rec_entry, dtype=np.int32),
                   np.asarray(rec_work, dtype=np.int32),
                   np.asarray(rec_cit_year, dtype=np.int32),
                   np.asarray(rec_pub_year, dtype=np.int32),
                   np.asarray(work_journal_indptr, dtype=np.int64),
                   np.asarray(work_journal_idx, dtype=np.int32),
                   list(journals), scheme, funnel)

    # -- basic accessors ------------------------------------------------------

    @property
    def n_records(self) -> int:
        return len(self.rec_entry)

    @property
    def n_entries(self) -> int:
        return len(self.entry_ids)

    @property
    def n_works(self) -> int:
        return len(self.work_ids)

    def journals_of_work(self, w: int) -> np.ndarray:
        return self.work_journal_idx[
            self.work_journal_indptr[w]:self.work_journal_indptr[w + 1]
        ]

    # -- classification labels ------------------------------------------------

    def journal_fields(self, j: int) -> tuple[str, ...]:
        return tuple(sorted({self.scheme.field_of[c]
                             for c in self.journals[j].asjc_codes}))

    def journal_main_fields(self, j: int) -> tuple[str, ...]:
        return tuple(sorted({self.scheme.main_field_of_code(c)
                             for c in self.journals[j].asjc_codes}))

    def journal_areas(self, j: int) -> tuple[str, ...]:
        return tuple(sorted({self.scheme.area_of_code(c)
                             for c in self.journals[j].asjc_codes}))

    def journal_area_label(self, j: int) -> str:
        """Single area name, or the sorted combined label joined with " & "."""
        return " & ".join(self.journal_areas(j))

    def _units_of_journal(self, j: int, level: str) -> tuple[str, ...]:
        if level == "journal":
            return (self.journals[j].journal_id,)
        if level == "field":
            return self.journal_fields(j)
        if level == "main_field":
            return self.journal_main_fields(j)
        if level == "area":
            return self.journal_areas(j)
        raise ValueError(f"unknown level {level!r}")

    def units_for_level(self, level: str):
        """Map works to aggregation units at ``level``.

        Returns (unit_ids, indptr, unit_idx): unit_idx[indptr[w]:indptr[w+1]]
        lists the sorted distinct unit indices of work w.  At 'work' level
        each work is its own unit; at 'area' level combined-area journals
        contribute each constituent area.
        """
        if level not in LEVELS:
            raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
        cached = self._units_cache.get(level)
        if cached is not None:
            return cached
        if level == "work":
            n = self.n_works
            indptr = np.arange(n + 1, dtype=np.int64)
            result = (list(self.work_ids), indptr, np.arange(n, dtype=np.int32))
            self._units_cache[level] = result
            return result
        if level == "journal":
            # journals_of_work lists are already sorted unique journal indices
            present = np.unique(self.work_journal_idx)
            remap = np.full(len(self.journals), -1, dtype=np.int32)
            remap[present] = np.arange(len(present), dtype=np.int32)
            result = ([self.journals[p].journal_id for p in present],
                      self.work_journal_indptr,
                      remap[self.work_journal_idx])
            self._units_cache[level] = result
            return result

        journal_units = self._journal_units.get(level)
        if journal_units is None:
            journal_units = tuple(self._units_of_journal(j, level)
                                  for j in range(len(self.journals)))
            self._journal_units[level] = journal_units

        unit_code: dict[str, int] = {}
        per_work: list[list[int]] = []
        for w in range(self.n_works):
            units = {u for j in self.journals_of_work(w) for u in journal_units[j]}
            per_work.append(sorted(unit_code.setdefault(u, len(unit_code))
                                   for u in sorted(units)))
        indptr = np.zeros(self.n_works + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(u) for u in per_work])
        unit_idx = np.empty(indptr[-1], dtype=np.int32)
        for w, units in enumerate(per_work):
            unit_idx[indptr[w]:indptr[w + 1]] = units
        result = (list(unit_code), indptr, unit_idx)
        self._units_cache[level] = result
        return result

    def unit_citations(self, level: str):
        """Citations received per unit at ``level`` (full counting).

        Each record adds one citation to every unit its work belongs to.
        Returns (unit_ids, counts).
        """
        unit_ids, indptr, unit_idx = self.units_for_level(level)
        sizes = np.diff(indptr)
        expanded = unit_idx[
            np.repeat(indptr[self.rec_work], sizes[self.rec_work])
            + _ramp(sizes[self.rec_work])
        ]
        counts = np.bincount(expanded, minlength=len(unit_ids)).astype(np.int64)
        return unit_ids, counts


def _ramp(sizes: np.ndarray) -> np.ndarray:
    """[0..s0-1, 0..s1-1, ...] for the given segment sizes."""
    sizes = np.asarray(sizes, dtype=np.int64)
    total = int(sizes.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    out = np.ones(total, dtype=np.int64)
    out[0] = 0
    starts = np.cumsum(sizes)[:-1]
    starts = starts[starts < total]
    # subtract.at accumulates, which keeps zero-size segments correct
    np.subtract.at(out, starts, sizes[:-1][: len(starts)])
    return np.cumsum(out)
