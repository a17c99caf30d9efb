"""Exact checkers for negative dependence of measures on the Boolean lattice."""

from .lattice import (
    Configuration,
    EventSet,
    RankError,
    Relation,
    UpSet,
    box_product,
    config_str,
    enumerate_upsets,
    order_relation,
    parse_config,
)
from .measure import (
    FLOAT,
    RATIONAL,
    BinaryMeasure,
    ExternalField,
    bernoulli,
    from_atoms,
    from_weights,
    point_mass,
    product_bernoulli,
    uniform,
)
from .ops import (
    apply_field,
    condition,
    product,
    project,
    rank_rescale,
    relabel,
    stir,
    stir_continuous,
    symmetrize,
    truncate,
)
from .orders import OrderedJointLaw, StochRelations, stoch_relation
from .properties import (
    check_association,
    check_bkrna,
    check_cna,
    check_jnrd,
    check_lattice,
    check_markov_monotone,
    check_nc,
    check_plus,
    check_ulc,
    check_upset_edge_correlation,
    conditional_rank_monotone,
    recheck_plus_witness,
    stochastic_covers,
    stochastic_dominates,
)
from .report import PropertyReport, SizeLimitError, Verdict
from .sequences import (
    LogConcaveWeights,
    RankSequence,
    abc_law,
    convolve,
    is_log_concave,
    is_ulc,
    rank_sequence,
    seq_algebra,
)

__version__ = "0.1.0"
