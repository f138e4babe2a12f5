"""Co-citation graphs at work, journal, field, main-field or area level.

Two counting modes are supported and every report names the one used:

* ``set`` (default): each citing entry contributes exactly 1 to each
  unordered pair of distinct units it cites at the chosen level.
* ``pair_sum``: unit-pair weights are the sum of the underlying work-pair
  co-citation counts (each distinct unit pair reachable from a work pair
  receives that pair's full count).

The pair accumulation runs through the kernel backend (compiled extension
or NumPy fallback, selected at import).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .corpus import LEVELS, LinkedCorpus, _ramp
from .errors import EmptyInput, GroupMissing

_TIER_RANK = {lvl: i for i, lvl in enumerate(LEVELS)}

MODES = ("set", "pair_sum")


@dataclass
class CoCitationGraph:
    """Undirected integer-weighted graph over aggregation units.

    Edges are stored canonically (edge_u < edge_v, sorted by the index
    pair); instances are immutable by convention after construction.
    """

    level: str
    node_ids: list[str]
    labels: list[str]
    citations: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    groups: dict[str, list[str]] = field(default_factory=dict)
    open_access: list | None = None
    mode: str | None = None
    kind: str = "cocitation"

    def __post_init__(self):
        self._index = None
        self._adj = None

    # -- basic accessors ----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edge_w)

    @property
    def total_weight(self) -> int:
        return int(self.edge_w.sum())

    def node_index(self, node_id: str) -> int:
        if self._index is None:
            self._index = {nid: i for i, nid in enumerate(self.node_ids)}
        return self._index[node_id]

    def weight(self, a: str, b: str) -> int:
        """Co-citation weight between two node ids (0 if not adjacent)."""
        ia, ib = self.node_index(a), self.node_index(b)
        if ia == ib:
            return 0
        u, v = (ia, ib) if ia < ib else (ib, ia)
        lo = np.searchsorted(self.edge_u, u, side="left")
        hi = np.searchsorted(self.edge_u, u, side="right")
        k = lo + np.searchsorted(self.edge_v[lo:hi], v, side="left")
        if k < hi and self.edge_v[k] == v:
            return int(self.edge_w[k])
        return 0

    def area_label(self, i: int) -> str:
        areas = self.groups.get("area")
        if self.level == "area":
            return self.node_ids[i]
        return areas[i] if areas else ""

    def adjacency(self):
        """CSR adjacency over both edge directions, neighbor lists sorted.

        Returns (indptr, neighbors, weights).
        """
        if self._adj is None:
            n = self.n_nodes
            src = np.concatenate((self.edge_u, self.edge_v))
            dst = np.concatenate((self.edge_v, self.edge_u))
            wb = np.concatenate((self.edge_w, self.edge_w))
            order = np.lexsort((dst, src))
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
            self._adj = (indptr, dst[order].astype(np.int32), wb[order])
        return self._adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        np.add.at(deg, self.edge_u, 1)
        np.add.at(deg, self.edge_v, 1)
        return deg

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Sequence[tuple], node_ids: Sequence[str] | None = None,
                   level: str = "journal", citations: Mapping[str, int] | None = None,
                   groups: Mapping[str, str] | None = None,
                   mode: str | None = None, kind: str = "cocitation"):
        """Small-graph constructor from (a_id, b_id, weight) triples."""
        ids: dict[str, int] = {}
        if node_ids is not None:
            for nid in node_ids:
                ids.setdefault(str(nid), len(ids))
        for a, b, _ in edges:
            ids.setdefault(str(a), len(ids))
            ids.setdefault(str(b), len(ids))
        acc: dict[tuple[int, int], int] = {}
        for a, b, w in edges:
            ia, ib = ids[str(a)], ids[str(b)]
            if ia == ib:
                raise ValueError(f"self-loop on {a!r}")
            key = (ia, ib) if ia < ib else (ib, ia)
            acc[key] = acc.get(key, 0) + int(w)
        order = sorted(acc)
        eu = np.array([k[0] for k in order], dtype=np.int32)
        ev = np.array([k[1] for k in order], dtype=np.int32)
        ew = np.array([acc[k] for k in order], dtype=np.int64)
        id_list = list(ids)
        cit = np.array([int((citations or {}).get(nid, 0)) for nid in id_list],
                       dtype=np.int64)
        grp = {}
        if groups is not None:
            grp["area"] = [str(groups.get(nid, "")) for nid in id_list]
        return cls(level=level, node_ids=id_list, labels=list(id_list),
                   citations=cit, edge_u=eu, edge_v=ev, edge_w=ew,
                   groups=grp, mode=mode, kind=kind)

    def subgraph(self, node_mask: np.ndarray) -> "CoCitationGraph":
        """Induced subgraph on the masked nodes, reindexed."""
        keep_nodes = np.flatnonzero(node_mask)
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[keep_nodes] = np.arange(len(keep_nodes))
        emask = node_mask[self.edge_u] & node_mask[self.edge_v]
        return CoCitationGraph(
            level=self.level,
            node_ids=[self.node_ids[i] for i in keep_nodes],
            labels=[self.labels[i] for i in keep_nodes],
            citations=self.citations[keep_nodes],
            edge_u=remap[self.edge_u[emask]].astype(np.int32),
            edge_v=remap[self.edge_v[emask]].astype(np.int32),
            edge_w=self.edge_w[emask].copy(),
            groups={t: [g[i] for i in keep_nodes] for t, g in self.groups.items()},
            open_access=([self.open_access[i] for i in keep_nodes]
                         if self.open_access is not None else None),
            mode=self.mode,
            kind=self.kind,
        )

    def edge_subset(self, edge_mask: np.ndarray) -> "CoCitationGraph":
        """Same nodes, masked edges."""
        return CoCitationGraph(
            level=self.level, node_ids=list(self.node_ids), labels=list(self.labels),
            citations=self.citations.copy(),
            edge_u=self.edge_u[edge_mask].copy(),
            edge_v=self.edge_v[edge_mask].copy(),
            edge_w=self.edge_w[edge_mask].copy(),
            groups={t: list(g) for t, g in self.groups.items()},
            open_access=list(self.open_access) if self.open_access is not None else None,
            mode=self.mode, kind=self.kind,
        )


def _rle(sorted_arr: np.ndarray):
    """(values, run lengths) of a sorted array."""
    if sorted_arr.size == 0:
        return (np.zeros(0, dtype=sorted_arr.dtype), np.zeros(0, dtype=np.int64))
    bounds = np.flatnonzero(np.diff(sorted_arr)) + 1
    starts = np.concatenate(([0], bounds))
    counts = np.diff(np.concatenate((starts, [sorted_arr.size])))
    return sorted_arr[starts], counts.astype(np.int64)


def _entry_unit_csr(corpus: LinkedCorpus, level: str):
    """Distinct units cited per entry: (unit_ids, indptr, units)."""
    unit_ids, indptr, unit_idx = corpus.units_for_level(level)
    n_units = len(unit_ids)
    sizes = np.diff(indptr)
    rec_sizes = sizes[corpus.rec_work]
    pair_entry = np.repeat(corpus.rec_entry.astype(np.int64), rec_sizes)
    pair_unit = unit_idx[np.repeat(indptr[corpus.rec_work], rec_sizes)
                         + _ramp(rec_sizes)]
    keys = np.unique(pair_entry * n_units + pair_unit)
    entries = keys // n_units
    units = (keys % n_units).astype(np.int32)
    counts = np.bincount(entries, minlength=corpus.n_entries)
    eptr = np.zeros(corpus.n_entries + 1, dtype=np.int64)
    np.cumsum(counts, out=eptr[1:])
    return unit_ids, eptr, units


def _accumulate_set_mode(eptr, units, n_units, kernels):
    sizes = np.diff(eptr)
    total = int((sizes * (sizes - 1) // 2).sum())
    out = np.empty(total, dtype=np.int64)
    written = kernels.emit_pair_keys(eptr, units, n_units, out)
    assert written == total, "pair emission count mismatch"
    out.sort()
    return _rle(out)


def _accumulate_pair_sum(corpus: LinkedCorpus, level, unit_ids, kernels):
    # work-pair co-citation counts first
    n_works = corpus.n_works
    keys = np.unique(corpus.rec_entry.astype(np.int64) * n_works + corpus.rec_work)
    entries = keys // n_works
    works = (keys % n_works).astype(np.int32)
    counts = np.bincount(entries, minlength=corpus.n_entries)
    eptr = np.zeros(corpus.n_entries + 1, dtype=np.int64)
    np.cumsum(counts, out=eptr[1:])
    wkeys, wcounts = _accumulate_set_mode(eptr, works, n_works, kernels)
    wa = (wkeys // n_works).astype(np.int64)
    wb = (wkeys % n_works).astype(np.int64)

    _, uptr, uidx = corpus.units_for_level(level)
    usizes = np.diff(uptr)
    n_units = len(unit_ids)

    single = (usizes[wa] == 1) & (usizes[wb] == 1)
    ua = uidx[uptr[wa[single]]].astype(np.int64)
    ub = uidx[uptr[wb[single]]].astype(np.int64)
    keep = ua != ub
    lo = np.minimum(ua[keep], ub[keep])
    hi = np.maximum(ua[keep], ub[keep])
    pair_keys = [lo * n_units + hi]
    pair_wgts = [wcounts[single][keep]]

    multi = np.flatnonzero(~single)
    if multi.size:
        mkeys, mwgts = [], []
        for k in multi:
            units_a = uidx[uptr[wa[k]]:uptr[wa[k] + 1]]
            units_b = uidx[uptr[wb[k]]:uptr[wb[k] + 1]]
            seen = {(min(x, y), max(x, y))
                    for x in units_a for y in units_b if x != y}
            c = int(wcounts[k])
            for x, y in seen:
                mkeys.append(int(x) * n_units + int(y))
                mwgts.append(c)
        pair_keys.append(np.asarray(mkeys, dtype=np.int64))
        pair_wgts.append(np.asarray(mwgts, dtype=np.int64))

    all_keys = np.concatenate(pair_keys)
    all_wgts = np.concatenate(pair_wgts)
    order = np.argsort(all_keys, kind="stable")
    all_keys = all_keys[order]
    all_wgts = all_wgts[order]
    ukeys, runs = _rle(all_keys)
    starts = np.concatenate(([0], np.cumsum(runs)[:-1]))
    sums = np.add.reduceat(all_wgts, starts) if all_wgts.size else all_wgts
    return ukeys, sums


def _node_groups(corpus: LinkedCorpus, level: str, unit_ids: list[str]):
    """Combined group labels per node for every tier above ``level``.

    Work and journal nodes take the union over their journals' codes; field
    and main-field nodes resolve through the scheme (a field's main field
    is fixed by its code prefix, not by which journals carry it).
    """
    scheme = corpus.scheme
    tiers = [t for t in ("journal", "field", "main_field", "area")
             if _TIER_RANK[t] > _TIER_RANK[level]]
    if not tiers:
        return {}

    if level in ("work", "journal"):
        sets: dict[str, list[set]] = {t: [set() for _ in unit_ids] for t in tiers}
        if level == "work":
            # unit order equals work order at work level
            for i in range(len(unit_ids)):
                for j in corpus.journals_of_work(i):
                    for t in tiers:
                        sets[t][i].update(corpus._units_of_journal(j, t))
        else:
            pos = {u: i for i, u in enumerate(unit_ids)}
            for j, journal in enumerate(corpus.journals):
                i = pos.get(journal.journal_id)
                if i is None:
                    continue
                for t in tiers:
                    sets[t][i].update(corpus._units_of_journal(j, t))
        return {t: [" & ".join(sorted(s)) for s in sets[t]] for t in tiers}

    if level == "field":
        mf_sets = []
        for name in unit_ids:
            mf_sets.append({scheme.main_field_of_code(c)
                            for c, f in scheme.field_of.items() if f == name})
        return {
            "main_field": [" & ".join(sorted(s)) for s in mf_sets],
            "area": [" & ".join(sorted({scheme.area_of[m] for m in s}))
                     for s in mf_sets],
        }
    # main_field level: single area per main field
    return {"area": [scheme.area_of.get(m, "") for m in unit_ids]}


def build_cocitation(corpus: LinkedCorpus, level: str = "journal",
                     mode: str = "set") -> CoCitationGraph:
    """Build the undirected co-citation graph of ``corpus`` at ``level``.

    An entry citing a single unit contributes no pairs; units identical
    under aggregation never produce self-loops.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    kernels = _kernels.get_kernels()

    unit_ids, eptr, units = _entry_unit_csr(corpus, level)
    n_units = len(unit_ids)
    if mode == "set":
        keys, weights = _accumulate_set_mode(eptr, units, n_units, kernels)
    else:
        keys, weights = _accumulate_pair_sum(corpus, level, unit_ids, kernels)

    edge_u = (keys // n_units).astype(np.int32)
    edge_v = (keys % n_units).astype(np.int32)

    cit_ids, citations = corpus.unit_citations(level)
    assert cit_ids == unit_ids, "unit ordering must be stable across passes"

    labels = list(unit_ids)
    open_access = None
    if level == "journal":
        jpos = {j.journal_id: j for j in corpus.journals}
        labels = [jpos[u].title for u in unit_ids]
        open_access = [jpos[u].open_access for u in unit_ids]

    return CoCitationGraph(
        level=level, node_ids=list(unit_ids), labels=labels,
        citations=citations, edge_u=edge_u, edge_v=edge_v,
        edge_w=weights.astype(np.int64),
        groups=_node_groups(corpus, level, unit_ids),
        open_access=open_access, mode=mode,
    )


def _components(graph: CoCitationGraph):
    n = graph.n_nodes
    data = np.ones(graph.n_edges, dtype=np.int8)
    mat = csr_matrix((data, (graph.edge_u, graph.edge_v)), shape=(n, n))
    return connected_components(mat, directed=False)


def giant_component(graph: CoCitationGraph):
    """Largest connected component and the component size census.

    Ties between equally large components go to the one holding the
    smallest node id.  Returns (subgraph, sizes sorted descending).
    """
    if graph.n_nodes == 0:
        raise EmptyInput("giant_component() requires a non-empty graph")
    n_comp, comp = _components(graph)
    sizes = np.bincount(comp, minlength=n_comp)
    census = sorted((int(s) for s in sizes), reverse=True)
    best = None
    max_size = sizes.max()
    for c in np.flatnonzero(sizes == max_size):
        min_id = min(graph.node_ids[i] for i in np.flatnonzero(comp == c))
        if best is None or min_id < best[1]:
            best = (c, min_id)
    return graph.subgraph(comp == best[0]), census


def filter_edges_min_weight(graph: CoCitationGraph, threshold: int) -> CoCitationGraph:
    """Drop edges below ``threshold``, then drop nodes the filter isolated.

    Nodes that were already isolated in the input survive, so threshold 1
    is the identity.  The input graph is untouched.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    emask = graph.edge_w >= threshold
    deg_before = graph.degrees()
    filtered = graph.edge_subset(emask)
    deg_after = filtered.degrees()
    newly_isolated = (deg_before > 0) & (deg_after == 0)
    return filtered.subgraph(~newly_isolated)


def filter_nodes_min_strength(graph: CoCitationGraph,
                              threshold: int) -> CoCitationGraph:
    """Node-strength variant of the second pruning: drop nodes whose total
    incident co-citation weight is below ``threshold`` (with their edges),
    then drop nodes the filter isolated."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    strength = np.zeros(graph.n_nodes, dtype=np.int64)
    np.add.at(strength, graph.edge_u, graph.edge_w)
    np.add.at(strength, graph.edge_v, graph.edge_w)
    keep = strength >= threshold
    pruned = graph.edge_subset(keep[graph.edge_u] & keep[graph.edge_v])
    survivors = keep & (pruned.degrees() > 0)
    return pruned.subgraph(survivors)


def intra_inter_shares(graph: CoCitationGraph, grouping: str = "area",
                       decompose: bool = False) -> dict[str, tuple[float, float]]:
    """Per-group split of incident edge weight into same- and cross-group shares.

    Combined labels ("A & B") count as their own group unless ``decompose``
    expands each node to its constituent groups (an edge is then intra for
    group g iff both endpoints carry g).  Groups with no incident weight
    are omitted; shares sum to 1 per group.
    """
    if graph.level == grouping:
        labels = list(graph.node_ids)
    else:
        labels = graph.groups.get(grouping)
        if labels is None:
            raise GroupMissing(f"graph carries no {grouping!r} labels")
    missing = [graph.node_ids[i] for i, g in enumerate(labels) if not g]
    if missing:
        raise GroupMissing(f"nodes without {grouping!r} label: {missing[:5]}")

    intra: dict[str, int] = {}
    inter: dict[str, int] = {}
    if decompose:
        node_groups = [frozenset(g.split(" & ")) for g in labels]
        for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
            gu, gv = node_groups[u], node_groups[v]
            for g in gu | gv:
                if g in gu and g in gv:
                    intra[g] = intra.get(g, 0) + int(w)
                else:
                    inter[g] = inter.get(g, 0) + int(w)
    else:
        names, inv = np.unique(np.asarray(labels, dtype=object), return_inverse=True)
        gu, gv = inv[graph.edge_u], inv[graph.edge_v]
        same = gu == gv
        intra_w = np.zeros(len(names), dtype=np.int64)
        inter_w = np.zeros(len(names), dtype=np.int64)
        np.add.at(intra_w, gu[same], graph.edge_w[same])
        np.add.at(inter_w, gu[~same], graph.edge_w[~same])
        np.add.at(inter_w, gv[~same], graph.edge_w[~same])
        intra = {str(names[i]): int(intra_w[i]) for i in range(len(names))}
        inter = {str(names[i]): int(inter_w[i]) for i in range(len(names))}

    shares = {}
    for g in sorted(set(intra) | set(inter)):
        total = intra.get(g, 0) + inter.get(g, 0)
        if total == 0:
            continue
        shares[g] = (intra.get(g, 0) / total, inter.get(g, 0) / total)
    return shares
