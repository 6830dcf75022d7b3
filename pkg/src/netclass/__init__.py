"""netclass: classify the generating mechanism of a directed network.

The library grows networks under five candidate mechanisms (and per-node
mixtures of them), measures an 18-property stacked feature distance between
networks, tests a query network against each mechanism with a simulation
backed KS test, and predicts out-of-sample functional properties (normalized
ascendency) by nearest neighbors in the resulting state space.
"""

from .graph import (
    EdgelistParseError,
    Graph,
    TransitionMatrix,
    binarize,
    markov_power,
    read_edgelist,
    write_edgelist,
)
from .generators import (
    MECHANISMS,
    PARAM_RANGES,
    MechanismSpec,
    grow,
    grow_mixture,
    param_grid,
    random_assignment,
    stir_mixture,
)
from .features import (
    FeatureSet,
    PropertyBlock,
    clustering_coefficient,
    count_communities,
    degree_entropy,
    extract_features,
    four_motif_counts,
    pagerank,
    triad_census,
)
from .distance import (
    EnsembleWeights,
    PROPERTY_NAMES,
    StateSpace,
    build_state_space,
    classical_mds,
    default_weights,
    ensemble_distance,
    fit_reference_weights,
    fit_weights,
    load_weights,
    mds_project,
    property_distances,
    save_weights,
)
from .classifier import (
    ClassificationReport,
    MechanismTest,
    RocResult,
    best_fit_param,
    classify,
    estimate_param,
    ks_two_sample,
    roc_evaluate,
)
from .function_predict import (
    AscendencyResult,
    IdentifiabilityResult,
    LooResult,
    MixturePanelEntry,
    ascendency,
    build_mixture_panel,
    identifiability_experiment,
    loo_evaluate,
    predict_function,
)
from .rng import derive_rng, derive_seed

__version__ = "0.1.0"
