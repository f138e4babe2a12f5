"""Full pipeline: ingest -> link -> metrics -> co-citation -> Pathfinder ->
threshold filter -> centralities -> tail fits (-> comparisons), with every
artifact written deterministically and digested into a manifest."""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, fields

import numpy as np

from . import _kernels, compare, heavytail, metrics
from .cocitation import build_cocitation, filter_edges_min_weight, giant_component, \
    intra_inter_shares
from .corpus import LEVELS, LinkedCorpus, ingest_references, load_journals, \
    load_scheme
from .errors import (
    CocimapError,
    ConfigError,
    DegenerateInput,
    EmptyInput,
    InputError,
    InvariantViolation,
)
from .exports import export_network, export_report, json_dumps_stable, write_csv
from .netmetrics import centralities
from .pathfinder import pfnet_sparsify, to_distance


@dataclass
class PipelineConfig:
    refs: str = ""
    journals: str = ""
    scheme: str = ""
    scopus: str | None = None
    out_dir: str = "out"
    level: str = "journal"
    mode: str = "set"
    min_weight: int = 50
    windows: tuple[int, ...] = (5, 10, 15, 20)
    n_sims: int = 1000
    seed: int | None = None
    strict: bool = False
    workers: int | None = None
    inclusive_price: bool = False
    top_fraction: float = 0.01
    comparison_citation_year: int = 2016
    comparison_pub_start: int = 2013
    comparison_pub_end: int = 2015

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.merged(data, overrides or {})

    @classmethod
    def merged(cls, base: dict, overrides: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        data = dict(base)
        data.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.windows = tuple(int(w) for w in cfg.windows)
        return cfg

    def validate(self, require_bootstrap_seed: bool = True) -> None:
        for name in ("refs", "journals", "scheme"):
            path = getattr(self, name)
            if not path:
                raise ConfigError(f"missing required input path: --{name}")
            if not os.path.isfile(path):
                raise ConfigError(f"{name} file not readable: {path}")
        if self.scopus and not os.path.isfile(self.scopus):
            raise ConfigError(f"scopus file not readable: {self.scopus}")
        if self.level not in LEVELS:
            raise ConfigError(f"invalid level {self.level!r}")
        if self.mode not in ("set", "pair_sum"):
            raise ConfigError(f"invalid mode {self.mode!r}")
        if self.min_weight < 1:
            raise ConfigError("min_weight must be >= 1")
        if not self.windows or any(w <= 0 for w in self.windows):
            raise ConfigError("windows must be positive integers")
        if self.n_sims < 100:
            raise ConfigError("n_sims must be >= 100")
        if require_bootstrap_seed and self.seed is None:
            raise ConfigError("an explicit --seed is mandatory when the "
                              "bootstrap stage runs")

    def to_dict(self) -> dict:
        # out_dir is deliberately not echoed: artifact bytes must not depend
        # on where they are written
        return {
            "refs": self.refs, "journals": self.journals, "scheme": self.scheme,
            "scopus": self.scopus,
            "level": self.level, "mode": self.mode,
            "min_weight": self.min_weight, "windows": list(self.windows),
            "n_sims": self.n_sims, "seed": self.seed, "strict": self.strict,
            "workers": self.workers, "inclusive_price": self.inclusive_price,
            "top_fraction": self.top_fraction,
            "comparison_citation_year": self.comparison_citation_year,
            "comparison_pub_start": self.comparison_pub_start,
            "comparison_pub_end": self.comparison_pub_end,
            "kernel_backend": _kernels.BACKEND,
        }


def load_corpus(config: PipelineConfig) -> LinkedCorpus:
    records, funnel, errors = ingest_references(config.refs, strict=config.strict)
    journals = load_journals(config.journals)
    scheme = load_scheme(config.scheme)
    corpus = LinkedCorpus.link_and_classify(records, journals, scheme,
                                            funnel=funnel)
    corpus.parse_errors = [str(e) for e in errors]
    return corpus


def load_scopus_counts(path):
    """Per-journal scopus counts: CSV of journal_id, citations, articles."""
    citations, articles = {}, {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"journal_id", "citations", "articles"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise InputError(f"{path}: scopus CSV must have columns "
                             f"{sorted(required)}")
        for row in reader:
            jid = row["journal_id"].strip()
            citations[jid] = int(row["citations"])
            articles[jid] = int(row["articles"])
    return citations, articles


def wiki_window_counts(corpus: LinkedCorpus, citation_year: int,
                       pub_start: int, pub_end: int):
    """Window-restricted per-journal citation and distinct-article counts."""
    mask = ((corpus.rec_cit_year == citation_year)
            & (corpus.rec_pub_year >= pub_start)
            & (corpus.rec_pub_year <= pub_end))
    cites: dict[str, int] = {}
    articles: dict[str, set] = {}
    for w in np.unique(corpus.rec_work[mask]):
        for j in corpus.journals_of_work(int(w)):
            jid = corpus.journals[int(j)].journal_id
            articles.setdefault(jid, set()).add(int(w))
    for r in np.flatnonzero(mask):
        for j in corpus.journals_of_work(int(corpus.rec_work[r])):
            jid = corpus.journals[int(j)].journal_id
            cites[jid] = cites.get(jid, 0) + 1
    return cites, {j: len(s) for j, s in articles.items()}


def wiki_field_article_counts(corpus: LinkedCorpus, tier: str = "main_field"):
    """Distinct cited works per group (full counting)."""
    unit_ids, indptr, unit_idx = corpus.units_for_level(tier)
    cited = np.unique(corpus.rec_work)
    counts = np.zeros(len(unit_ids), dtype=np.int64)
    for w in cited:
        w = int(w)
        for u in np.unique(unit_idx[indptr[w]:indptr[w + 1]]):
            counts[u] += 1
    return {unit_ids[i]: int(counts[i]) for i in range(len(unit_ids))}


def scopus_field_article_counts(corpus: LinkedCorpus, articles_by_journal,
                                tier: str = "main_field"):
    """Scopus-side article counts per group via journal classifications."""
    counts: dict[str, int] = {}
    for j, journal in enumerate(corpus.journals):
        n = articles_by_journal.get(journal.journal_id, 0)
        if not n:
            continue
        for unit in corpus._units_of_journal(j, tier):
            counts[unit] = counts.get(unit, 0) + n
    return counts


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


class _ArtifactSink:
    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.names: list[str] = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        self.names.append(name)
        return os.path.join(self.out_dir, name)

    def manifest(self) -> dict:
        artifacts = []
        for name in sorted(self.names):
            full = os.path.join(self.out_dir, name)
            artifacts.append({
                "name": name,
                "sha256": _sha256(full),
                "bytes": os.path.getsize(full),
            })
        return {"artifacts": artifacts, "count": len(artifacts)}


def run_pipeline(config: PipelineConfig):
    """Execute every stage and write the artifact manifest.

    Returns (manifest dict, manifest path).  Raises ConfigError, InputError
    or InvariantViolation; the CLI maps these to exit codes 2, 1 and 3.
    """
    config.validate()
    sink = _ArtifactSink(config.out_dir)
    cfg = config.to_dict()

    corpus = load_corpus(config)
    try:
        corpus.funnel.check()
    except AssertionError as exc:
        raise InvariantViolation(str(exc)) from exc

    funnel_payload = corpus.funnel.to_dict()
    funnel_payload["parse_errors"] = getattr(corpus, "parse_errors", [])
    export_report(funnel_payload, sink.path("funnel.json"), config=cfg)

    # descriptive statistics
    graph = build_cocitation(corpus, level=config.level, mode=config.mode)
    descriptives: dict = {"n_records": corpus.n_records,
                          "n_entries": corpus.n_entries,
                          "n_works": corpus.n_works}
    if corpus.n_records:
        refs_per_entry = metrics.references_per_entry(corpus)
        cites_per_work = metrics.citations_per_work(corpus)
        descriptives.update({
            "references_per_entry": metrics.describe(refs_per_entry),
            "citations_per_work": metrics.describe(cites_per_work),
            "publication_years": metrics.describe(corpus.rec_pub_year),
            "publication_year_box": metrics.box_summary(corpus.rec_pub_year),
            "citation_years": metrics.describe(corpus.rec_cit_year),
            "top_fraction": config.top_fraction,
            "top_share_of_references": metrics.concentration_share(
                refs_per_entry, config.top_fraction),
        })
        if graph.n_nodes:
            giant, census = giant_component(graph)
            descriptives["graph"] = {
                "level": config.level, "mode": config.mode,
                "nodes": graph.n_nodes, "edges": graph.n_edges,
                "total_cocitations": graph.total_weight,
                "giant_component_nodes": giant.n_nodes,
                "giant_component_edges": giant.n_edges,
                "component_census_head": census[:20],
            }
            try:
                shares = intra_inter_shares(graph, "area")
                descriptives["area_shares"] = {
                    g: {"intra": s[0], "inter": s[1]} for g, s in shares.items()
                }
            except CocimapError:
                pass
    export_report(descriptives, sink.path("descriptives.json"), config=cfg)

    # obsolescence
    price_rows = []
    for report in metrics.price_index(corpus, config.windows,
                                      inclusive=config.inclusive_price):
        for w, f in zip(report.windows, report.fractions):
            price_rows.append([w, "", f])
    for report in metrics.price_index(corpus, config.windows,
                                      group_by="main_field",
                                      inclusive=config.inclusive_price):
        for w, f in zip(report.windows, report.fractions):
            price_rows.append([w, report.group, f])
    price_rows.sort(key=lambda r: (str(r[1]), int(r[0])))
    write_csv(sink.path("price_index.csv"), ["window", "group", "fraction"],
              price_rows)

    if corpus.n_records:
        profile = metrics.citation_aging_profile(corpus)
        aging_rows = [[o, m, s] for o, m, s in
                      zip(profile.offsets, profile.mean_citations, profile.shares)]
    else:
        aging_rows = []
    write_csv(sink.path("aging_profile.csv"),
              ["offset_years", "mean_citations", "share"], aging_rows)

    # networks
    export_network(graph, "graphml", sink.path("cocitation.graphml"))
    pfn = pfnet_sparsify(to_distance(graph))
    export_network(pfn, "graphml", sink.path("pfnet.graphml"))
    filtered = filter_edges_min_weight(pfn.to_graph(), config.min_weight)
    export_network(filtered, "edge_csv", sink.path("pfnet_filtered_edges.csv"))

    # centralities on the pruned network
    if filtered.n_nodes:
        report = centralities(filtered)
        cent_rows = sorted(
            ([r["node_id"], r["label"], r["citations"], r["weighted_degree"],
              r["betweenness"], r["closeness"], r["eigenvector"]]
             for r in report.to_rows()),
            key=lambda r: r[0])
    else:
        cent_rows = []
    write_csv(sink.path("centralities.csv"),
              ["node_id", "label", "citations", "weighted_degree",
               "betweenness", "closeness", "eigenvector"], cent_rows)

    # heavy-tail fits over per-journal citation counts
    _, journal_citations = corpus.unit_citations("journal")
    tail_payload: dict = {"population": "citations per journal",
                          "n": int(journal_citations.size)}
    try:
        pl = heavytail.fit_power_law(journal_citations)
        gof = heavytail.gof_bootstrap(pl, journal_citations,
                                      n_sims=config.n_sims, seed=config.seed,
                                      workers=config.workers)
        ln = heavytail.fit_lognormal_tail(journal_citations, pl.xmin)
        vuong = heavytail.vuong_compare(pl, ln, journal_citations)
        tail_payload.update({
            "power_law": pl, "log_normal": ln,
            "gof": gof, "vuong": vuong,
        })
    except (DegenerateInput, EmptyInput) as exc:
        tail_payload["degenerate"] = str(exc)
    export_report(tail_payload, sink.path("tailfit.json"), config=cfg)

    # cross-source comparison (only with a scopus counts file)
    if config.scopus:
        scopus_cites, scopus_articles = load_scopus_counts(config.scopus)
        wiki_cites, wiki_articles = wiki_window_counts(
            corpus, config.comparison_citation_year,
            config.comparison_pub_start, config.comparison_pub_end)
        comparisons = compare.percentile_ratio(wiki_cites, wiki_articles,
                                               scopus_cites)
        write_csv(sink.path("comparison.csv"),
                  ["journal_id", "wiki_citations", "scopus_citations",
                   "wiki_articles_cited", "wiki_percentile",
                   "scopus_percentile", "ratio"],
                  [[c.journal_id, c.wiki_citations, c.scopus_citations,
                    c.wiki_articles_cited, c.wiki_percentile,
                    c.scopus_percentile, c.ratio] for c in comparisons])
        wiki_fields = wiki_field_article_counts(corpus)
        scopus_fields = scopus_field_article_counts(corpus, scopus_articles)
        diffs = compare.field_share_diff(wiki_fields, scopus_fields)
        write_csv(sink.path("field_share_diff.csv"),
                  ["main_field", "share_wiki", "share_scopus", "diff_points"],
                  [[d.main_field, d.share_a, d.share_b, d.diff_points]
                   for d in diffs])

    manifest = sink.manifest()
    manifest_path = os.path.join(config.out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(json_dumps_stable(manifest) + "\n")
    return manifest, manifest_path
