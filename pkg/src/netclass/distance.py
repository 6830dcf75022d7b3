"""Stacked ensemble distance between networks and state-space assembly.

Two feature sets are collapsed into one scalar by measuring a distance per
property, rescaling each by a reference scale, and averaging with weights
taken from the first principal axis of a PCA over per-property distances on a
reference panel of simulated networks. A state space is a batch of networks
with the full pairwise distance matrix; classical metric MDS projects it to
2-D for plotting.
"""

from __future__ import annotations

import json
import os
import weakref
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .features import FeatureSet, extract_features
from .generators import MECHANISMS, MechanismSpec, param_grid, grow
from .rng import derive_rng
from ._parallel import parallel_map

_BLOCK_FIELDS = (
    "in_degrees", "out_degrees", "entropy_in", "entropy_out", "clustering",
    "pagerank", "n_communities", "triad_census", "four_motifs",
)
PROPERTY_NAMES = tuple(
    f"{blk}_{field}" for blk in ("direct", "markov5") for field in _BLOCK_FIELDS
)
N_PROPERTIES = len(PROPERTY_NAMES)

_QUANTILE_FIELDS = {"in_degrees", "out_degrees", "pagerank"}
_CENSUS_FIELDS = {"triad_census", "four_motifs"}
N_QUANTILES = 64

DEFAULT_WEIGHTS_SEED = 1729
DEFAULT_WEIGHTS_FILE = "weights_default.json"
WEIGHTS_ENV_VAR = "NETCLASS_WEIGHTS"


def _resample(vec: np.ndarray) -> np.ndarray:
    """Linear interpolation of a sorted vector at 64 evenly spaced quantiles."""
    v = np.asarray(vec, dtype=float)
    if v.size == 1:
        return np.full(N_QUANTILES, v[0])
    q = np.linspace(0.0, 1.0, N_QUANTILES)
    return np.interp(q, np.linspace(0.0, 1.0, v.size), v)


def _proportions(counts: np.ndarray) -> np.ndarray:
    c = np.asarray(counts, dtype=float)
    total = c.sum()
    return c / total if total > 0 else c


_prepared_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _prepared(fs: FeatureSet) -> list:
    """Per-property comparands: floats, 64-point quantile curves, proportions."""
    try:
        return _prepared_cache[fs]
    except KeyError:
        pass
    items = []
    for block in (fs.direct, fs.markov5):
        for field in _BLOCK_FIELDS:
            value = getattr(block, field)
            if field in _QUANTILE_FIELDS:
                items.append(_resample(value))
            elif field in _CENSUS_FIELDS:
                items.append(_proportions(value))
            else:
                items.append(float(value))
    _prepared_cache[fs] = items
    return items


def property_distances(a: FeatureSet, b: FeatureSet) -> np.ndarray:
    """The 18 per-property distances, in ``PROPERTY_NAMES`` order.

    Scalar properties use the absolute difference. Degree and PageRank vectors
    are first linearly interpolated at 64 evenly spaced quantiles (so networks
    of different sizes remain comparable), censuses are normalized to
    proportions; both then use the Euclidean distance.
    """
    pa, pb = _prepared(a), _prepared(b)
    out = np.empty(N_PROPERTIES)
    for j, (x, y) in enumerate(zip(pa, pb)):
        if isinstance(x, float):
            out[j] = abs(x - y)
        else:
            out[j] = float(np.linalg.norm(x - y))
    return out


@dataclass(frozen=True, eq=False)
class EnsembleWeights:
    """Per-property weights (sum 1) and normalization scales (positive)."""

    weights: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        s = np.array(self.scales, dtype=float)
        if w.shape != (N_PROPERTIES,) or s.shape != (N_PROPERTIES,):
            raise ValueError(f"need {N_PROPERTIES} weights and scales")
        if w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if s.min() <= 0:
            raise ValueError("scales must be positive")
        w.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "scales", s)


def _property_columns(features: list) -> list:
    """Stack prepared comparands per property across a panel."""
    prepared = [_prepared(fs) for fs in features]
    columns = []
    for j in range(N_PROPERTIES):
        vals = [p[j] for p in prepared]
        if isinstance(vals[0], float):
            columns.append(np.asarray(vals, dtype=float)[:, None])
        else:
            columns.append(np.vstack(vals))
    return columns


def pair_distance_matrix(features: list) -> np.ndarray:
    """All pairwise per-property distances, shape (n_pairs, 18).

    Rows follow scipy's condensed pair order for ``pdist``.
    """
    columns = _property_columns(features)
    n_pairs = len(features) * (len(features) - 1) // 2
    x = np.empty((n_pairs, N_PROPERTIES))
    for j, col in enumerate(columns):
        x[:, j] = pdist(col, metric="euclidean")
    return x


def weights_from_pair_distances(x: np.ndarray) -> EnsembleWeights:
    """PCA-derived ensemble weights from a (pairs, 18) distance matrix.

    Scales are column standard deviations floored at 1e-12; columns are
    standardized, the covariance is eigendecomposed, and the absolute
    loadings of the first principal axis are normalized to sum 1. A
    zero-variance column therefore gets weight 0.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != N_PROPERTIES:
        raise ValueError(f"need a (pairs, {N_PROPERTIES}) matrix")
    informative = x.std(axis=0) > 1e-12 if x.shape[0] > 1 else np.zeros(x.shape[1], bool)
    if x.shape[0] < 2 or not informative.any():
        # a degenerate panel supports no PCA; weigh everything equally
        return EnsembleWeights(weights=np.full(N_PROPERTIES, 1.0 / N_PROPERTIES),
                               scales=np.ones(N_PROPERTIES))
    scales = np.maximum(x.std(axis=0), 1e-12)
    z = (x - x.mean(axis=0)) / scales
    cov = (z.T @ z) / (z.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    loading = np.abs(eigvecs[:, -1])
    loading[~informative] = 0.0  # floored columns carry no signal
    weights = loading / loading.sum()
    return EnsembleWeights(weights=weights, scales=scales)


def fit_weights(panel: list) -> EnsembleWeights:
    """Fit ensemble weights on a panel of feature sets.

    Builds the matrix of all panel-pair property distances and applies
    :func:`weights_from_pair_distances`.
    """
    if len(panel) < 2:
        raise ValueError("need at least 2 networks to fit weights")
    return weights_from_pair_distances(pair_distance_matrix(panel))


def ensemble_distance(a: FeatureSet, b: FeatureSet, w: EnsembleWeights) -> float:
    """Scalar network difference: weighted average of scaled property distances."""
    pd_ = property_distances(a, b)
    return float(np.sum(w.weights * pd_ / w.scales))


def distances_to(query: FeatureSet, others: list, w: EnsembleWeights) -> np.ndarray:
    """Ensemble distances from one feature set to each of ``others``."""
    return np.array([ensemble_distance(query, fs, w) for fs in others])


def pairwise_ensemble_matrix(features: list, w: EnsembleWeights) -> np.ndarray:
    """Full symmetric ensemble-distance matrix over a batch of feature sets."""
    n = len(features)
    if n == 1:
        return np.zeros((1, 1))
    x = pair_distance_matrix(features)
    condensed = x @ (w.weights / w.scales)
    return squareform(condensed)


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Networks embedded by their pairwise ensemble distances."""

    features: tuple
    matrix: np.ndarray
    weights: EnsembleWeights
    labels: tuple | None = None
    ids: tuple | None = None
    params: tuple | None = None


def build_state_space(graphs, weights: EnsembleWeights | None = None,
                      labels=None, ids=None, params=None,
                      threads: int = 1) -> StateSpace:
    """Extract features for every graph and fill the distance matrix.

    When ``weights`` is absent they are fitted on these graphs' own pairwise
    property distances.
    """
    graphs = list(graphs)
    if len(graphs) < 2:
        raise ValueError("a state space needs at least 2 networks")
    features = parallel_map(extract_features, graphs, threads=threads)
    if weights is None:
        weights = fit_weights(features)
    matrix = pairwise_ensemble_matrix(features, weights)
    return StateSpace(
        features=tuple(features),
        matrix=matrix,
        weights=weights,
        labels=tuple(labels) if labels is not None else None,
        ids=tuple(ids) if ids is not None else None,
        params=tuple(params) if params is not None else None,
    )


def classical_mds(dist_matrix: np.ndarray, dims: int = 2) -> np.ndarray:
    """Classical (Torgerson) metric MDS coordinates from a distance matrix.

    Double-centers the squared distances, takes the top eigenpairs, and scales
    eigenvectors by the square root of their eigenvalues. Axes with
    nonpositive eigenvalues are padded with zeros. Deterministic up to sign;
    each axis is flipped so its largest-magnitude coordinate is positive.
    """
    d = np.asarray(dist_matrix, dtype=float)
    n = d.shape[0]
    if n < 3:
        raise ValueError("need at least 3 points")
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d**2) @ j
    eigvals, eigvecs = np.linalg.eigh(b)
    order = np.argsort(eigvals)[::-1]
    floor = 1e-12 * max(eigvals[order[0]], 0.0)  # numerically zero axes stay flat
    coords = np.zeros((n, dims))
    for axis in range(dims):
        lam = eigvals[order[axis]]
        if lam > floor:
            col = eigvecs[:, order[axis]] * np.sqrt(lam)
            if col[np.argmax(np.abs(col))] < 0:
                col = -col
            coords[:, axis] = col
    return coords


def mds_project(space: StateSpace, dims: int = 2) -> np.ndarray:
    """2-D (by default) metric MDS projection of a state space."""
    return classical_mds(space.matrix, dims)


# --- reference panel and weight persistence -------------------------------

def reference_panel(per_mechanism: int = 100, replicates: int = 3,
                    n_nodes: int = 50, seed: int = DEFAULT_WEIGHTS_SEED):
    """The canonical simulated panel used to fit the default ensemble weights.

    For every mechanism, ``per_mechanism`` parameter values evenly span its
    range with ``replicates`` independently grown networks each.
    """
    graphs, labels, params = [], [], []
    for kind in MECHANISMS:
        grid = param_grid(kind, per_mechanism)
        for gi, value in enumerate(grid):
            for r in range(replicates):
                rng = derive_rng(seed, "refpanel", kind, gi, r)
                graphs.append(grow(MechanismSpec(kind, float(value)), n_nodes, rng))
                labels.append(kind)
                params.append(float(value))
    return graphs, labels, params


def fit_reference_weights(per_mechanism: int = 100, replicates: int = 3,
                          n_nodes: int = 50, seed: int = DEFAULT_WEIGHTS_SEED,
                          threads: int | None = None) -> EnsembleWeights:
    """Grow the canonical panel and fit ensemble weights on it."""
    graphs, _, _ = reference_panel(per_mechanism, replicates, n_nodes, seed)
    features = parallel_map(extract_features, graphs, threads=threads)
    return fit_weights(features)


def weights_to_dict(w: EnsembleWeights, meta: dict | None = None) -> dict:
    d = {
        "weights": {name: float(v) for name, v in zip(PROPERTY_NAMES, w.weights)},
        "scales": {name: float(v) for name, v in zip(PROPERTY_NAMES, w.scales)},
    }
    if meta:
        d["panel"] = meta
    return d


def weights_from_dict(d: dict) -> EnsembleWeights:
    return EnsembleWeights(
        weights=np.array([d["weights"][name] for name in PROPERTY_NAMES]),
        scales=np.array([d["scales"][name] for name in PROPERTY_NAMES]),
    )


def save_weights(w: EnsembleWeights, path, meta: dict | None = None) -> None:
    Path(path).write_text(json.dumps(weights_to_dict(w, meta), indent=2, sort_keys=True) + "\n")


def load_weights(path) -> EnsembleWeights:
    return weights_from_dict(json.loads(Path(path).read_text()))


@lru_cache(maxsize=1)
def default_weights() -> EnsembleWeights:
    """The persisted canonical weights.

    Reads the path in the ``NETCLASS_WEIGHTS`` environment variable when set,
    otherwise the weights file shipped with the package.
    """
    env_path = os.environ.get(WEIGHTS_ENV_VAR)
    if env_path:
        return load_weights(env_path)
    ref = resources.files("netclass").joinpath("data", DEFAULT_WEIGHTS_FILE)
    return weights_from_dict(json.loads(ref.read_text()))
