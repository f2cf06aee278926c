"""Antidirected trees in dense digraphs: embedders, selectors, oracles, generators."""

from .antitree import (
    AntiTree,
    DegreeStats,
    DoubleBroom,
    RootedAntiTree,
    SpineDecomposition,
    caterpillar_decompose,
    degree_stats,
    double_broom,
    enumerate_antitrees,
    is_caterpillar,
    reverse_antitree,
    rooted_view,
    validate_antitree,
)
from .convex import (
    ConvexDigraph,
    GoodArcTable,
    SideSets,
    embed_caterpillar,
    embed_caterpillar_mindeg,
    good_arcs,
    good_arcs_mindeg,
    side_sets,
)
from .digraph import (
    DegreeProfile,
    Digraph,
    degree_profile,
    induced_subdigraph,
    parse_arclist,
    plus_minus_sets,
    reverse,
    to_arclist,
    to_dot,
)
from .embedding import Embedding, validate_embedding
from .errors import (
    AntembedError,
    BudgetExhausted,
    HypothesisViolated,
    InternalAssertion,
    NotACaterpillar,
    NotAntidirected,
    NotATree,
)
from .freeness import ForbiddenWitness, common_neighborhood, is_k2s_free, k4_bound_check
from .oracle_gen import (
    SearchStats,
    audit_projective,
    brute_good_arcs,
    enumerate_digraphs,
    gen_burr,
    gen_incidence,
    gen_random_dense,
    oracle_embed,
    sample_antitree,
)
from .subdigraph import (
    BipartiteGraph,
    SelectionResult,
    prune_pseudo,
    select_subdigraph,
    split_bipartite,
)
from .tree_embedder import (
    CaseTag,
    EmbedOutcome,
    embed_antitree,
    embed_big_delta2,
    embed_low_delta,
    embed_mid_delta,
    embed_radius_two,
    embed_wide_star,
    oracle_fallback,
)
