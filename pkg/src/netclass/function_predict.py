"""Flow-based system function: normalized ascendency and its prediction.

Treating edge weights as flows, ascendency measures how determinately flow is
organized (the flow-weighted mutual information between sources and targets)
and development capacity bounds it from above; their ratio in [0, 1]
summarizes system development. Mixture networks with very different mechanism
compositions can share this functional value, so composition is generally not
identifiable from structure, yet nearest neighbors in the ensemble distance
predict the functional value itself well out of sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .distance import (
    EnsembleWeights,
    default_weights,
    distances_to,
    pairwise_ensemble_matrix,
)
from .features import FeatureSet, extract_features, feature_set_from_dict, feature_set_to_dict
from .generators import MECHANISMS, grow_mixture, random_assignment
from .graph import Graph
from .rng import derive_rng
from ._parallel import parallel_map


@dataclass(frozen=True)
class AscendencyResult:
    """Ascendency A, development capacity C, and the ratio A/C."""

    ascendency: float
    capacity: float
    normalized: float


def ascendency(g: Graph) -> AscendencyResult:
    """Ascendency and capacity of a flow network (log base 2, bits * flow).

    With flows ``T_ij`` given by edge weights, ``T..`` the total flow, and
    ``T_i.``/``T_.j`` the row/column sums:

    ``A = sum T_ij * log2(T_ij * T.. / (T_i. * T_.j))``
    ``C = -sum T_ij * log2(T_ij / T..)``

    A graph with no positive flow yields A = C = 0 and normalized 0 by
    convention.
    """
    t = g.adjacency
    # all reductions run over sorted values so the result is exactly
    # invariant under node permutations (same multisets, same addition order)
    total = float(np.sort(t.ravel()).sum())
    if total <= 0:
        return AscendencyResult(0.0, 0.0, 0.0)
    row = np.sort(t, axis=1).sum(axis=1)
    col = np.sort(t, axis=0).sum(axis=0)
    nz = t > 0
    flows = t[nz]
    denom = np.outer(row, col)[nz]
    a = float(np.sort(flows * np.log2(flows * total / denom)).sum())
    c = float(-np.sort(flows * np.log2(flows / total)).sum())
    a = min(max(a, 0.0), c)  # guard float roundoff at the boundaries
    normalized = a / c if c > 0 else 0.0
    return AscendencyResult(a, c, normalized)


@dataclass(frozen=True, eq=False)
class MixturePanelEntry:
    """One mixture network: composition, parameters, function, and features."""

    graph_id: str
    proportions: np.ndarray  # over all five mechanisms, sums to 1
    params: dict
    normalized_ascendency: float
    features: FeatureSet

    def __post_init__(self):
        p = np.asarray(self.proportions, dtype=float)
        if p.shape != (len(MECHANISMS),) or abs(p.sum() - 1.0) > 1e-9 or p.min() < 0:
            raise ValueError("proportions must be nonnegative over the five mechanisms and sum to 1")
        object.__setattr__(self, "proportions", p)


def _build_entry(index, seed, n_nodes, mechanisms):
    rng = derive_rng(seed, "mixture", index)
    assignment, proportions, params = random_assignment(n_nodes, mechanisms, rng=rng)
    g = grow_mixture(assignment, rng)
    return MixturePanelEntry(
        graph_id=f"mixture-{index}",
        proportions=proportions,
        params=params,
        normalized_ascendency=ascendency(g).normalized,
        features=extract_features(g),
    )


def build_mixture_panel(size: int, n_nodes: int = 50, seed: int = 0,
                        mechanisms=MECHANISMS, threads: int | None = 1) -> list:
    """Grow ``size`` mixture networks with random compositions and parameters."""
    task = partial(_build_entry, seed=seed, n_nodes=n_nodes,
                   mechanisms=tuple(mechanisms))
    return parallel_map(task, range(size), threads=threads)


def predict_function(query: Graph, panel: list, k: int = 10,
                     weights: EnsembleWeights | None = None,
                     query_features: FeatureSet | None = None) -> float:
    """Inverse-distance weighted ascendency of the k nearest panel entries."""
    if not panel:
        raise ValueError("panel must not be empty")
    if not 1 <= k <= len(panel):
        raise ValueError(f"k must lie in [1, {len(panel)}]")
    w = weights if weights is not None else default_weights()
    qf = query_features if query_features is not None else extract_features(query)
    d = distances_to(qf, [e.features for e in panel], w)
    nearest = np.argsort(d, kind="stable")[:k]
    inv = 1.0 / (d[nearest] + 1e-9)
    values = np.array([panel[int(i)].normalized_ascendency for i in nearest])
    return float(np.sum(inv * values) / np.sum(inv))


@dataclass(frozen=True, eq=False)
class LooResult:
    pearson_r: float
    rmse: float
    pairs: tuple  # (predicted, actual) per panel entry


def loo_evaluate(panel: list, k: int = 10,
                 weights: EnsembleWeights | None = None) -> LooResult:
    """Leave-one-out prediction of normalized ascendency across a panel."""
    if len(panel) < 20:
        raise ValueError("leave-one-out evaluation needs a panel of at least 20")
    w = weights if weights is not None else default_weights()
    matrix = pairwise_ensemble_matrix([e.features for e in panel], w)
    actual = np.array([e.normalized_ascendency for e in panel])
    predicted = np.empty(len(panel))
    for i in range(len(panel)):
        d = np.delete(matrix[i], i)
        values = np.delete(actual, i)
        nearest = np.argsort(d, kind="stable")[: min(k, d.size)]
        inv = 1.0 / (d[nearest] + 1e-9)
        predicted[i] = np.sum(inv * values[nearest]) / np.sum(inv)
    rmse = float(np.sqrt(np.mean((predicted - actual) ** 2)))
    if np.std(predicted) == 0 or np.std(actual) == 0:
        r = 0.0
    else:
        r = float(np.corrcoef(predicted, actual)[0, 1])
    return LooResult(pearson_r=r, rmse=rmse,
                     pairs=tuple(zip(predicted.tolist(), actual.tolist())))


def composition_distance_correlation(features: list, proportions,
                                     weights: EnsembleWeights | None = None):
    """Pearson correlation of pairwise ensemble distance vs composition gap.

    The composition gap between two networks is the L1 distance of their
    mechanism proportion vectors. Returns ``(correlation, degenerate)``;
    a panel with zero variance on either side reports 0 with the degeneracy
    flag set.
    """
    w = weights if weights is not None else default_weights()
    matrix = pairwise_ensemble_matrix(features, w)
    dist_pairs = squareform(matrix, checks=False)
    comp_pairs = pdist(np.asarray(proportions, dtype=float), metric="cityblock")
    if np.std(dist_pairs) == 0 or np.std(comp_pairs) == 0:
        return 0.0, True
    return float(np.corrcoef(dist_pairs, comp_pairs)[0, 1]), False


@dataclass(frozen=True)
class IdentifiabilityResult:
    n_mechanisms: int
    correlation: float
    degenerate: bool


def identifiability_experiment(n_mechanisms: int, panel_size: int = 100,
                               seed: int = 0, n_nodes: int = 50,
                               weights: EnsembleWeights | None = None,
                               threads: int | None = 1) -> IdentifiabilityResult:
    """How well ensemble distance tracks mixture composition.

    Grows a panel of mixture networks over the first ``n_mechanisms``
    mechanisms with random proportions and correlates pairwise ensemble
    distances against pairwise composition gaps. Larger mixtures score lower:
    different compositions increasingly produce interchangeable networks.
    """
    if n_mechanisms not in (2, 3, 4, 5):
        raise ValueError("n_mechanisms must be between 2 and 5")
    panel = build_mixture_panel(panel_size, n_nodes=n_nodes, seed=seed,
                                mechanisms=MECHANISMS[:n_mechanisms],
                                threads=threads)
    corr, degenerate = composition_distance_correlation(
        [e.features for e in panel], [e.proportions for e in panel], weights
    )
    return IdentifiabilityResult(n_mechanisms=n_mechanisms,
                                 correlation=corr, degenerate=degenerate)


def panel_to_dict(panel: list) -> dict:
    return {
        "entries": [
            {
                "graph_id": e.graph_id,
                "proportions": [float(x) for x in e.proportions],
                "params": {k: float(v) for k, v in e.params.items()},
                "normalized_ascendency": float(e.normalized_ascendency),
                "features": feature_set_to_dict(e.features),
            }
            for e in panel
        ]
    }


def panel_from_dict(d: dict) -> list:
    return [
        MixturePanelEntry(
            graph_id=str(e["graph_id"]),
            proportions=np.asarray(e["proportions"], dtype=float),
            params={k: float(v) for k, v in e["params"].items()},
            normalized_ascendency=float(e["normalized_ascendency"]),
            features=feature_set_from_dict(e["features"]),
        )
        for e in d["entries"]
    ]
