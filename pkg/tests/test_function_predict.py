import math

import numpy as np
import pytest

from netclass import (
    Graph,
    MECHANISMS,
    MechanismSpec,
    ascendency,
    build_mixture_panel,
    default_weights,
    derive_rng,
    extract_features,
    grow_mixture,
    identifiability_experiment,
    loo_evaluate,
    predict_function,
)
from netclass.function_predict import (
    MixturePanelEntry,
    composition_distance_correlation,
    panel_from_dict,
    panel_to_dict,
)

from helpers import graph_from_pairs, random_graph


def brute_ascendency(g):
    """Term-by-term oracle straight from the flow definitions."""
    t = np.array(g.adjacency)
    total = t.sum()
    if total == 0:
        return 0.0, 0.0, 0.0
    a = c = 0.0
    for i in range(g.n):
        for j in range(g.n):
            if t[i, j] > 0:
                a += t[i, j] * math.log2(t[i, j] * total / (t[i].sum() * t[:, j].sum()))
                c -= t[i, j] * math.log2(t[i, j] / total)
    return a, c, (a / c if c > 0 else 0.0)


# --- ascendency ----------------------------------------------------------------

def test_permutation_flows_are_maximally_organized():
    n = 6
    g = graph_from_pairs(n, [(i, (i + 1) % n) for i in range(n)])
    r = ascendency(g)
    assert r.ascendency == pytest.approx(n * math.log2(n))
    assert r.capacity == pytest.approx(n * math.log2(n))
    assert r.normalized == pytest.approx(1.0)


def test_uniform_complete_flows_are_degenerate():
    n = 5
    g = Graph.from_edges(n, [(i, j, 1.0) for i in range(n) for j in range(n)])
    r = ascendency(g)
    assert r.ascendency == pytest.approx(0.0, abs=1e-12)
    assert r.normalized == pytest.approx(0.0, abs=1e-12)


def test_zero_edge_graph_defined_as_zero():
    r = ascendency(Graph.from_edges(4, []))
    assert (r.ascendency, r.capacity, r.normalized) == (0.0, 0.0, 0.0)


def test_hand_summed_small_graph():
    g = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    a, c, norm = brute_ascendency(g)
    r = ascendency(g)
    assert r.ascendency == pytest.approx(a, abs=1e-12)
    assert r.capacity == pytest.approx(c, abs=1e-12)
    assert r.normalized == pytest.approx(norm, abs=1e-12)


def test_bounds_on_random_weighted_graphs():
    rng = np.random.default_rng(600)
    for _ in range(500):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n, density=rng.uniform(0.1, 0.8), weighted=True,
                         self_loops=bool(rng.integers(2)))
        r = ascendency(g)
        assert 0.0 <= r.ascendency <= r.capacity + 1e-12
        assert 0.0 <= r.normalized <= 1.0


def test_permutation_invariance_exact():
    rng = np.random.default_rng(601)
    for _ in range(50):
        n = int(rng.integers(3, 10))
        g = random_graph(rng, n, density=0.4, weighted=True)
        h = g.relabel(rng.permutation(n))
        ra, rb = ascendency(g), ascendency(h)
        assert ra.ascendency == rb.ascendency
        assert ra.capacity == rb.capacity
        assert ra.normalized == rb.normalized


def test_flow_scaling_leaves_normalized_unchanged():
    rng = np.random.default_rng(602)
    for _ in range(50):
        g = random_graph(rng, 8, density=0.4, weighted=True)
        scale = float(rng.uniform(0.01, 100))
        h = Graph.from_edges(8, [(s, t, w * scale) for s, t, w in g.edges])
        ra, rb = ascendency(g), ascendency(h)
        assert rb.ascendency == pytest.approx(scale * ra.ascendency, rel=1e-12)
        assert rb.capacity == pytest.approx(scale * ra.capacity, rel=1e-12)
        assert rb.normalized == pytest.approx(ra.normalized, abs=1e-12)


# --- predict_function -------------------------------------------------------------

@pytest.fixture(scope="module")
def panel():
    return build_mixture_panel(40, n_nodes=30, seed=700, threads=2)


def test_query_in_panel_dominates(panel):
    entry = panel[3]
    # reconstruct the very graph the entry came from
    rng = derive_rng(700, "mixture", 3)
    from netclass.generators import random_assignment
    assignment, _, _ = random_assignment(30, MECHANISMS, rng=rng)
    g = grow_mixture(assignment, rng)
    value = predict_function(g, panel, k=5)
    assert value == pytest.approx(entry.normalized_ascendency, abs=1e-6)


def test_constant_targets_predict_that_constant(panel):
    flat = [
        MixturePanelEntry(
            graph_id=e.graph_id, proportions=e.proportions, params=e.params,
            normalized_ascendency=0.42, features=e.features,
        )
        for e in panel
    ]
    g = grow_mixture([MechanismSpec("ER", 0.2)] * 30, derive_rng(701))
    assert predict_function(g, flat, k=10) == pytest.approx(0.42)


def test_prediction_is_convex_combination(panel):
    rng = derive_rng(702)
    from netclass.generators import random_assignment
    for i in range(5):
        assignment, _, _ = random_assignment(30, MECHANISMS, rng=derive_rng(702, i))
        g = grow_mixture(assignment, derive_rng(703, i))
        qf = extract_features(g)
        w = default_weights()
        from netclass.distance import distances_to
        d = distances_to(qf, [e.features for e in panel], w)
        nearest = np.argsort(d, kind="stable")[:10]
        values = [panel[int(j)].normalized_ascendency for j in nearest]
        pred = predict_function(g, panel, k=10, query_features=qf)
        assert min(values) - 1e-12 <= pred <= max(values) + 1e-12


def test_predict_validates_inputs(panel):
    g = grow_mixture([MechanismSpec("ER", 0.2)] * 30, derive_rng(704))
    with pytest.raises(ValueError):
        predict_function(g, [], k=1)
    with pytest.raises(ValueError):
        predict_function(g, panel, k=0)
    with pytest.raises(ValueError):
        predict_function(g, panel, k=len(panel) + 1)


# --- leave-one-out ------------------------------------------------------------------

def test_loo_identical_graphs_zero_rmse():
    g = grow_mixture([MechanismSpec("PA", 2.0)] * 20, derive_rng(705))
    fs = extract_features(g)
    value = ascendency(g).normalized
    entries = [
        MixturePanelEntry(graph_id=str(i), proportions=np.array([1, 0, 0, 0, 0.0]),
                          params={"PA": 2.0}, normalized_ascendency=value, features=fs)
        for i in range(20)
    ]
    result = loo_evaluate(entries)
    assert result.rmse == pytest.approx(0.0, abs=1e-12)


def test_loo_shuffled_targets_lose_signal(panel):
    rng = np.random.default_rng(706)
    values = np.array([e.normalized_ascendency for e in panel])
    shuffled = values.copy()
    rng.shuffle(shuffled)
    broken = [
        MixturePanelEntry(graph_id=e.graph_id, proportions=e.proportions,
                          params=e.params, normalized_ascendency=float(v),
                          features=e.features)
        for e, v in zip(panel, shuffled)
    ]
    r_true = loo_evaluate(panel).pearson_r
    r_broken = loo_evaluate(broken).pearson_r
    assert abs(r_broken) < 0.3
    assert r_true > r_broken


def test_loo_deterministic_replay(panel):
    a = loo_evaluate(panel)
    b = loo_evaluate(panel)
    assert a.pearson_r == b.pearson_r
    assert a.rmse == b.rmse
    assert a.pairs == b.pairs


def test_loo_requires_20_entries(panel):
    with pytest.raises(ValueError):
        loo_evaluate(panel[:10])


# --- identifiability ---------------------------------------------------------------

def test_pure_mechanism_panels_correlate():
    graphs, proportions = [], []
    for mi, kind in enumerate(MECHANISMS):
        param = {"ER": 0.2, "DD": 0.4, "NICHE": 0.2, "PA": 2.0, "SW": 0.3}[kind]
        for r in range(6):
            g = grow_mixture([MechanismSpec(kind, param)] * 30, derive_rng(707, kind, r))
            graphs.append(extract_features(g))
            unit = np.zeros(5)
            unit[mi] = 1.0
            proportions.append(unit)
    corr, degenerate = composition_distance_correlation(graphs, proportions)
    assert not degenerate
    assert corr > 0


def test_identical_proportions_flagged_degenerate():
    fs = [extract_features(random_graph(np.random.default_rng(708 + i), 10, 0.3))
          for i in range(5)]
    props = [np.array([0.2, 0.2, 0.2, 0.2, 0.2])] * 5
    corr, degenerate = composition_distance_correlation(fs, props)
    assert degenerate
    assert corr == 0.0


def test_identifiability_experiment_shapes():
    r2 = identifiability_experiment(2, panel_size=20, seed=709, n_nodes=25, threads=2)
    assert r2.n_mechanisms == 2
    assert -1.0 <= r2.correlation <= 1.0
    with pytest.raises(ValueError):
        identifiability_experiment(1, panel_size=20, seed=709)


# --- panel serialization --------------------------------------------------------------

def test_panel_json_roundtrip(panel):
    restored = panel_from_dict(panel_to_dict(panel[:5]))
    for a, b in zip(panel[:5], restored):
        assert a.graph_id == b.graph_id
        assert np.allclose(a.proportions, b.proportions)
        assert a.params == b.params
        assert a.normalized_ascendency == b.normalized_ascendency
        assert np.allclose(a.features.direct.pagerank, b.features.direct.pagerank)
