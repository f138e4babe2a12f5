"""Command-line surface.

Subcommands mirror the methodological stages (ingest, stats, cocite,
pfnet, centrality, tailfit, compare, pipeline) plus a synthetic-corpus
generator.  Exit codes: 0 success, 1 input/parse failure, 2 invalid
configuration, 3 internal invariant violation.  Every failure prints one
machine-parseable line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import _kernels, compare, heavytail, metrics, synthdata
from .cocitation import (
    build_cocitation,
    filter_edges_min_weight,
    filter_nodes_min_strength,
)
from .corpus import ingest_references, records_to_rows
from .errors import (
    CocimapError,
    ConfigError,
    InputError,
    InvariantViolation,
    ParseError,
)
from .exports import export_network, export_report, write_csv
from .netmetrics import centralities
from .pathfinder import pfnet_sparsify, to_distance
from .pipeline import (
    PipelineConfig,
    load_corpus,
    load_scopus_counts,
    run_pipeline,
    wiki_field_article_counts,
    wiki_window_counts,
    scopus_field_article_counts,
)


def _add_corpus_args(p):
    p.add_argument("--refs", help="reference rows (CSV or JSON Lines)")
    p.add_argument("--journals", help="journal metadata CSV")
    p.add_argument("--scheme", help="classification scheme CSV")
    p.add_argument("--strict", action="store_true",
                   help="fail on the first malformed row")


def _add_level_args(p):
    p.add_argument("--level", default="journal",
                   choices=["work", "journal", "field", "main_field", "area"])
    p.add_argument("--mode", default="set", choices=["set", "pair_sum"])


def _windows(text: str):
    return tuple(int(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cocimap",
        description="Co-citation networks, Pathfinder pruning and "
                    "heavy-tail citation statistics.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s 0.1.0 (kernels: {_kernels.BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, deduplicate and date-validate")
    _add_corpus_args(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="descriptives, Price index, aging profile")
    _add_corpus_args(p)
    p.add_argument("--windows", type=_windows, default=(5, 10, 15, 20))
    p.add_argument("--inclusive", action="store_true",
                   help="count age <= N instead of age < N")
    p.add_argument("--out", required=True)

    p = sub.add_parser("cocite", help="build the co-citation network")
    _add_corpus_args(p)
    _add_level_args(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pfnet", help="Pathfinder sparsification")
    _add_corpus_args(p)
    _add_level_args(p)
    p.add_argument("--min-weight", type=int, default=1,
                   help="second pruning threshold on co-citation weight")
    p.add_argument("--prune", default="edge_weight",
                   choices=["edge_weight", "node_strength"],
                   help="what the --min-weight threshold applies to")
    p.add_argument("--out", required=True)

    p = sub.add_parser("centrality", help="centralities over the pruned network")
    _add_corpus_args(p)
    _add_level_args(p)
    p.add_argument("--min-weight", type=int, default=1)
    p.add_argument("--prune", default="edge_weight",
                   choices=["edge_weight", "node_strength"])
    p.add_argument("--closeness", default="component",
                   choices=["component", "harmonic"])
    p.add_argument("--raw", action="store_true",
                   help="measure the raw co-citation graph instead of the PFNET")
    p.add_argument("--out", required=True)

    p = sub.add_parser("tailfit", help="power-law and log-normal tail fits")
    p.add_argument("--counts", required=True,
                   help="one-column file of positive integer counts")
    p.add_argument("--nsims", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="cross-source comparisons")
    _add_corpus_args(p)
    p.add_argument("--scopus", help="scopus counts CSV "
                                    "(journal_id,citations,articles)")
    p.add_argument("--cite-year", type=int, default=2016)
    p.add_argument("--pub-start", type=int, default=2013)
    p.add_argument("--pub-end", type=int, default=2015)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pipeline", help="run every stage and write a manifest")
    _add_corpus_args(p)
    _add_level_args(p)
    p.add_argument("--config", help="JSON config file (flags win)")
    p.add_argument("--scopus")
    p.add_argument("--min-weight", type=int)
    p.add_argument("--windows", type=_windows)
    p.add_argument("--nsims", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--entries", type=int, default=1000)
    p.add_argument("--references", type=int, default=5000)
    p.add_argument("--journals-count", type=int, default=200)
    p.add_argument("--works", type=int, default=2500)
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required")


def _corpus_config(args, **extra) -> PipelineConfig:
    _require(args, "refs", "journals", "scheme")
    cfg = PipelineConfig(refs=args.refs, journals=args.journals,
                         scheme=args.scheme, strict=args.strict,
                         out_dir=args.out, **extra)
    cfg.validate(require_bootstrap_seed=False)
    return cfg


def _cmd_ingest(args) -> int:
    _require(args, "refs")
    if not os.path.isfile(args.refs):
        raise ConfigError(f"refs file not readable: {args.refs}")
    os.makedirs(args.out, exist_ok=True)
    records, funnel, errors = ingest_references(args.refs, strict=args.strict)
    out_rows = os.path.join(args.out, "records.csv")
    with open(out_rows, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["citing_entry_id",
                                                "cited_work_id",
                                                "citation_date",
                                                "publication_date", "issns"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(records_to_rows(records))
    payload = funnel.to_dict()
    payload["parse_errors"] = [str(e) for e in errors]
    export_report(payload, os.path.join(args.out, "funnel.json"),
                  config={"refs": args.refs, "strict": args.strict})
    print(f"kept {funnel.kept} of {funnel.raw} rows -> {out_rows}")
    return 0


def _cmd_stats(args) -> int:
    cfg = _corpus_config(args, windows=args.windows,
                         inclusive_price=args.inclusive)
    corpus = load_corpus(cfg)
    os.makedirs(args.out, exist_ok=True)
    refs_per_entry = metrics.references_per_entry(corpus)
    payload = {
        "references_per_entry": metrics.describe(refs_per_entry),
        "citations_per_work": metrics.describe(metrics.citations_per_work(corpus)),
        "publication_years": metrics.describe(corpus.rec_pub_year),
        "citation_years": metrics.describe(corpus.rec_cit_year),
        "top_1pct_share": metrics.concentration_share(refs_per_entry, 0.01),
    }
    export_report(payload, os.path.join(args.out, "descriptives.json"),
                  config=cfg.to_dict())
    rows = []
    for rep in metrics.price_index(corpus, cfg.windows,
                                   inclusive=cfg.inclusive_price):
        rows += [[w, "", f] for w, f in zip(rep.windows, rep.fractions)]
    for rep in metrics.price_index(corpus, cfg.windows, group_by="main_field",
                                   inclusive=cfg.inclusive_price):
        rows += [[w, rep.group, f] for w, f in zip(rep.windows, rep.fractions)]
    rows.sort(key=lambda r: (str(r[1]), int(r[0])))
    write_csv(os.path.join(args.out, "price_index.csv"),
              ["window", "group", "fraction"], rows)
    profile = metrics.citation_aging_profile(corpus)
    write_csv(os.path.join(args.out, "aging_profile.csv"),
              ["offset_years", "mean_citations", "share"],
              zip(profile.offsets, profile.mean_citations, profile.shares))
    print(f"stats written to {args.out}")
    return 0


def _cmd_cocite(args) -> int:
    cfg = _corpus_config(args, level=args.level, mode=args.mode)
    corpus = load_corpus(cfg)
    os.makedirs(args.out, exist_ok=True)
    graph = build_cocitation(corpus, level=cfg.level, mode=cfg.mode)
    export_network(graph, "graphml", os.path.join(args.out, "cocitation.graphml"))
    export_network(graph, "edge_csv",
                   os.path.join(args.out, "cocitation_edges.csv"))
    print(f"{graph.n_nodes} nodes, {graph.n_edges} edges "
          f"({cfg.level}, {cfg.mode} mode) -> {args.out}")
    return 0


def _cmd_pfnet(args) -> int:
    cfg = _corpus_config(args, level=args.level, mode=args.mode,
                         min_weight=args.min_weight)
    corpus = load_corpus(cfg)
    os.makedirs(args.out, exist_ok=True)
    graph = build_cocitation(corpus, level=cfg.level, mode=cfg.mode)
    pfn = pfnet_sparsify(to_distance(graph))
    export_network(pfn, "graphml", os.path.join(args.out, "pfnet.graphml"))
    export_network(pfn, "graphml",
                   os.path.join(args.out, "pfnet_alongside_source.graphml"),
                   alongside_source=True)
    prune = (filter_nodes_min_strength if args.prune == "node_strength"
             else filter_edges_min_weight)
    filtered = prune(pfn.to_graph(), cfg.min_weight)
    export_network(filtered, "edge_csv",
                   os.path.join(args.out, "pfnet_filtered_edges.csv"))
    print(f"retained {pfn.n_retained} of {graph.n_edges} edges; "
          f"{filtered.n_edges} left after the >={cfg.min_weight} filter")
    return 0


def _cmd_centrality(args) -> int:
    cfg = _corpus_config(args, level=args.level, mode=args.mode,
                         min_weight=args.min_weight)
    corpus = load_corpus(cfg)
    os.makedirs(args.out, exist_ok=True)
    graph = build_cocitation(corpus, level=cfg.level, mode=cfg.mode)
    if not args.raw:
        prune = (filter_nodes_min_strength if args.prune == "node_strength"
                 else filter_edges_min_weight)
        graph = prune(pfnet_sparsify(to_distance(graph)).to_graph(),
                      cfg.min_weight)
    report = (centralities(graph, closeness_variant=args.closeness)
              if graph.n_nodes else None)
    rows = []
    if report is not None:
        rows = sorted(([r["node_id"], r["label"], r["citations"],
                        r["weighted_degree"], r["betweenness"], r["closeness"],
                        r["eigenvector"]] for r in report.to_rows()),
                      key=lambda r: r[0])
    write_csv(os.path.join(args.out, "centralities.csv"),
              ["node_id", "label", "citations", "weighted_degree",
               "betweenness", "closeness", "eigenvector"], rows)
    if report is not None:
        export_report(report.flags, os.path.join(args.out, "centrality_flags.json"),
                      config=cfg.to_dict())
    print(f"centralities for {len(rows)} nodes -> {args.out}")
    return 0


def _read_counts(path) -> np.ndarray:
    values = []
    try:
        with open(path, encoding="utf-8") as fh:
            for i, line in enumerate(fh, start=1):
                token = line.strip()
                if not token:
                    continue
                if i == 1 and not token.lstrip("-").isdigit():
                    continue  # header line
                try:
                    values.append(int(token))
                except ValueError as exc:
                    raise ParseError(f"{path}:{i}: not an integer: {token!r}",
                                     i) from exc
    except OSError as exc:
        raise ConfigError(f"counts file not readable: {path}") from exc
    if not values:
        raise InputError(f"{path}: no counts found")
    return np.asarray(values, dtype=np.int64)


def _cmd_tailfit(args) -> int:
    if args.seed is None:
        raise ConfigError("--seed is mandatory when the bootstrap runs")
    if args.nsims < 100:
        raise ConfigError("--nsims must be >= 100")
    counts = _read_counts(args.counts)
    os.makedirs(args.out, exist_ok=True)
    pl = heavytail.fit_power_law(counts)
    gof = heavytail.gof_bootstrap(pl, counts, n_sims=args.nsims,
                                  seed=args.seed, workers=args.workers)
    ln = heavytail.fit_lognormal_tail(counts, pl.xmin)
    vuong = heavytail.vuong_compare(pl, ln, counts)
    payload = {"n": int(counts.size), "power_law": pl, "log_normal": ln,
               "gof": gof, "vuong": vuong}
    export_report(payload, os.path.join(args.out, "tailfit.json"),
                  config={"counts": args.counts, "nsims": args.nsims,
                          "seed": args.seed})
    pl_points = heavytail.empirical_vs_fitted_cdf(pl, counts)
    values = np.array([v for v, _, _ in pl_points], dtype=np.float64)
    ln_cdf = heavytail.lognormal_cdf(ln.mu, ln.sigma, ln.xmin, values)
    write_csv(os.path.join(args.out, "cdf.csv"),
              ["value", "empirical_cdf", "fitted_power_law",
               "fitted_log_normal"],
              [[v, e, f, float(c)] for (v, e, f), c in zip(pl_points, ln_cdf)])
    print(f"alpha={pl.alpha:.4f} xmin={pl.xmin} ks={pl.ks_stat:.4f} "
          f"gof_p={gof.p_value:.3f} vuong_p={vuong.p_value:.3f} "
          f"preferred={vuong.preferred}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _corpus_config(args, scopus=args.scopus,
                         comparison_citation_year=args.cite_year,
                         comparison_pub_start=args.pub_start,
                         comparison_pub_end=args.pub_end)
    corpus = load_corpus(cfg)
    os.makedirs(args.out, exist_ok=True)
    if cfg.scopus:
        scopus_cites, scopus_articles = load_scopus_counts(cfg.scopus)
    else:
        scopus_cites = {j.journal_id: j.window_citations for j in corpus.journals}
        scopus_articles = {j.journal_id: j.window_articles for j in corpus.journals}
    wiki_cites, wiki_articles = wiki_window_counts(
        corpus, cfg.comparison_citation_year, cfg.comparison_pub_start,
        cfg.comparison_pub_end)
    comparisons = compare.percentile_ratio(wiki_cites, wiki_articles,
                                           scopus_cites)
    write_csv(os.path.join(args.out, "comparison.csv"),
              ["journal_id", "wiki_citations", "scopus_citations",
               "wiki_articles_cited", "wiki_percentile", "scopus_percentile",
               "ratio"],
              [[c.journal_id, c.wiki_citations, c.scopus_citations,
                c.wiki_articles_cited, c.wiki_percentile, c.scopus_percentile,
                c.ratio] for c in comparisons])
    diffs = compare.field_share_diff(
        wiki_field_article_counts(corpus),
        scopus_field_article_counts(corpus, scopus_articles))
    write_csv(os.path.join(args.out, "field_share_diff.csv"),
              ["main_field", "share_wiki", "share_scopus", "diff_points"],
              [[d.main_field, d.share_a, d.share_b, d.diff_points]
               for d in diffs])
    print(f"{len(comparisons)} eligible journals; tie policy: {compare.TIE_POLICY}")
    return 0


def _cmd_pipeline(args) -> int:
    overrides = {
        "refs": args.refs, "journals": args.journals, "scheme": args.scheme,
        "scopus": args.scopus, "level": args.level, "mode": args.mode,
        "min_weight": args.min_weight, "windows": args.windows,
        "n_sims": args.nsims, "seed": args.seed, "workers": args.workers,
        "out_dir": args.out, "strict": args.strict or None,
    }
    if args.config:
        cfg = PipelineConfig.from_file(args.config, overrides)
    else:
        cfg = PipelineConfig.merged({}, overrides)
    manifest, path = run_pipeline(cfg)
    print(f"{manifest['count']} artifacts -> {path}")
    return 0


def _cmd_synth(args) -> int:
    paths = synthdata.generate_input_files(
        args.out, seed=args.seed, n_entries=args.entries,
        n_references=args.references, n_journals=args.journals_count,
        n_works=args.works)
    print("wrote " + ", ".join(paths))
    return 0


_HANDLERS = {
    "ingest": _cmd_ingest,
    "stats": _cmd_stats,
    "cocite": _cmd_cocite,
    "pfnet": _cmd_pfnet,
    "centrality": _cmd_centrality,
    "tailfit": _cmd_tailfit,
    "compare": _cmd_compare,
    "pipeline": _cmd_pipeline,
    "synth": _cmd_synth,
}


def _fail(code: int, exc: BaseException) -> int:
    kind = type(exc).__name__
    msg = str(exc).replace("\n", " ")
    sys.stderr.write(f"cocimap: error\tcode={code}\tkind={kind}\tmsg={msg}\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        return _fail(2, exc)
    except (InputError, ParseError, OSError) as exc:
        return _fail(1, exc)
    except (InvariantViolation, AssertionError) as exc:
        return _fail(3, exc)
    except CocimapError as exc:
        return _fail(1, exc)
    except Exception as exc:  # internal failure
        return _fail(3, exc)


if __name__ == "__main__":
    sys.exit(main())
