"""cocimap: co-citation network mapping with Pathfinder sparsification,
obsolescence metrics and heavy-tail citation statistics."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .cocitation import (
    CoCitationGraph,
    build_cocitation,
    filter_edges_min_weight,
    filter_nodes_min_strength,
    giant_component,
    intra_inter_shares,
)
from .compare import field_share_diff, linear_fit, percentile_ratio, qq_points
from .corpus import (
    ClassificationScheme,
    JournalRecord,
    LinkedCorpus,
    ReferenceRecord,
    ingest_references,
    load_journals,
    load_scheme,
    normalize_issn,
)
from .heavytail import (
    fit_lognormal_tail,
    fit_power_law,
    gof_bootstrap,
    vuong_compare,
    zeta_hurwitz,
)
from .metrics import (
    citation_aging_profile,
    concentration_share,
    describe,
    price_index,
)
from .netmetrics import centralities, weighted_degree
from .pathfinder import (
    DistanceGraph,
    PFNetwork,
    pfnet_oracle,
    pfnet_sparsify,
    to_distance,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "CoCitationGraph",
    "ClassificationScheme",
    "DistanceGraph",
    "JournalRecord",
    "LinkedCorpus",
    "PFNetwork",
    "ReferenceRecord",
    "build_cocitation",
    "centralities",
    "citation_aging_profile",
    "concentration_share",
    "describe",
    "field_share_diff",
    "filter_edges_min_weight",
    "filter_nodes_min_strength",
    "fit_lognormal_tail",
    "fit_power_law",
    "giant_component",
    "gof_bootstrap",
    "ingest_references",
    "intra_inter_shares",
    "linear_fit",
    "load_journals",
    "load_scheme",
    "normalize_issn",
    "percentile_ratio",
    "pfnet_oracle",
    "pfnet_sparsify",
    "price_index",
    "qq_points",
    "to_distance",
    "vuong_compare",
    "weighted_degree",
    "zeta_hurwitz",
]
