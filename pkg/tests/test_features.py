from itertools import combinations, permutations
from math import comb

import networkx as nx
import numpy as np
import pytest

from netclass import (
    Graph,
    MechanismSpec,
    clustering_coefficient,
    count_communities,
    degree_entropy,
    derive_rng,
    extract_features,
    four_motif_counts,
    grow,
    pagerank,
    triad_census,
)
from netclass.features import TRIAD_NAMES, pagerank_matrix

from helpers import graph_from_pairs, random_graph


# --- independent oracles -----------------------------------------------------

def _canonical_triad(edges):
    best = None
    for perm in permutations(range(3)):
        code = tuple(sorted((perm[s], perm[t]) for s, t in edges))
        if best is None or code < best:
            best = code
    return best


def _triad_name_by_canon():
    # ground the oracle in networkx's standard exemplars
    mapping = {}
    for name in TRIAD_NAMES:
        tg = nx.triad_graph(name)
        to_idx = {"a": 0, "b": 1, "c": 2}
        edges = [(to_idx[u], to_idx[v]) for u, v in tg.edges()]
        mapping[_canonical_triad(edges)] = name
    assert len(mapping) == 16
    return mapping


_NAME_BY_CANON = _triad_name_by_canon()


def brute_triad_census(g):
    """O(n^3) classification of every triple via canonical forms."""
    a = g.adjacency > 0
    counts = dict.fromkeys(TRIAD_NAMES, 0)
    for i, j, k in combinations(range(g.n), 3):
        local = {i: 0, j: 1, k: 2}
        edges = [
            (local[x], local[y])
            for x, y in permutations((i, j, k), 2)
            if a[x, y]
        ]
        counts[_NAME_BY_CANON[_canonical_triad(edges)]] += 1
    return np.array([counts[name] for name in TRIAD_NAMES])


def brute_four_motifs(g):
    """Classify the induced subgraph of every 4-node subset."""
    a = (g.adjacency > 0).astype(int)
    np.fill_diagonal(a, 0)
    a = ((a + a.T) > 0).astype(int)
    counts = np.zeros(6, dtype=int)
    for quad in combinations(range(g.n), 4):
        sub = a[np.ix_(quad, quad)]
        e = sub.sum() // 2
        degs = sorted(sub.sum(axis=1))
        if e == 3 and degs == [1, 1, 2, 2]:
            counts[0] += 1
        elif e == 3 and degs == [1, 1, 1, 3]:
            counts[1] += 1
        elif e == 4 and degs == [2, 2, 2, 2]:
            counts[2] += 1
        elif e == 4 and degs == [1, 2, 2, 3]:
            counts[3] += 1
        elif e == 5:
            counts[4] += 1
        elif e == 6:
            counts[5] += 1
    return counts


def pagerank_solve(g, damping=0.85):
    """Dense linear-system oracle for PageRank."""
    a = np.array(g.adjacency)
    n = g.n
    p = np.empty_like(a)
    for i in range(n):
        total = a[i].sum()
        p[i] = a[i] / total if total > 0 else np.full(n, 1.0 / n)
    return np.linalg.solve(np.eye(n) - damping * p.T, np.full(n, (1 - damping) / n))


def all_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in all_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def modularity(g, groups):
    a = (g.adjacency > 0).astype(int)
    np.fill_diagonal(a, 0)
    a = ((a + a.T) > 0).astype(int)
    deg = a.sum(axis=1)
    m = deg.sum() / 2
    q = 0.0
    for group in groups:
        idx = np.array(group)
        l_c = a[np.ix_(idx, idx)].sum() / 2
        d_c = deg[idx].sum()
        q += l_c / m - (d_c / (2 * m)) ** 2
    return q


def best_partition_sizes(g):
    best_q, sizes = -np.inf, set()
    for part in all_partitions(list(range(g.n))):
        q = modularity(g, part)
        if q > best_q + 1e-12:
            best_q, sizes = q, {len(part)}
        elif abs(q - best_q) <= 1e-12:
            sizes.add(len(part))
    return best_q, sizes


# --- triad census ------------------------------------------------------------

def test_census_empty_graph():
    g = Graph.from_edges(5, [])
    census = triad_census(g)
    assert census[0] == comb(5, 3)
    assert census[1:].sum() == 0


def test_census_complete_mutual_triangle():
    g = graph_from_pairs(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
    census = triad_census(g)
    assert census[TRIAD_NAMES.index("300")] == 1
    assert census.sum() == 1


def test_census_directed_three_cycle():
    g = graph_from_pairs(3, [(0, 1), (1, 2), (2, 0)])
    census = triad_census(g)
    assert census[TRIAD_NAMES.index("030C")] == 1


def test_census_matches_brute_force():
    rng = np.random.default_rng(101)
    for _ in range(30):
        g = random_graph(rng, 12, density=rng.uniform(0.05, 0.5))
        assert np.array_equal(triad_census(g), brute_triad_census(g))


def test_census_matches_networkx():
    rng = np.random.default_rng(102)
    for _ in range(10):
        g = random_graph(rng, 10, density=0.3)
        dg = nx.DiGraph()
        dg.add_nodes_from(range(g.n))
        dg.add_edges_from((s, t) for s, t, _ in g.edges)
        expected = nx.triadic_census(dg)
        ours = dict(zip(TRIAD_NAMES, triad_census(g).tolist()))
        assert ours == expected


def test_census_totals_always_choose_3():
    rng = np.random.default_rng(103)
    for _ in range(20):
        n = int(rng.integers(3, 16))
        g = random_graph(rng, n, density=rng.uniform(0, 0.7), self_loops=True)
        assert triad_census(g).sum() == comb(n, 3)


# --- 4-node motifs -----------------------------------------------------------

def test_motifs_path():
    g = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3)])
    assert four_motif_counts(g).tolist() == [1, 0, 0, 0, 0, 0]


def test_motifs_clique():
    pairs = [(i, j) for i in range(4) for j in range(4) if i != j]
    g = graph_from_pairs(4, pairs)
    assert four_motif_counts(g).tolist() == [0, 0, 0, 0, 0, 1]


def test_motifs_star_cycle_paw_diamond():
    star = graph_from_pairs(4, [(0, 1), (0, 2), (0, 3)])
    assert four_motif_counts(star).tolist() == [0, 1, 0, 0, 0, 0]
    cycle = graph_from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert four_motif_counts(cycle).tolist() == [0, 0, 1, 0, 0, 0]
    paw = graph_from_pairs(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    assert four_motif_counts(paw).tolist() == [0, 0, 0, 1, 0, 0]
    diamond = graph_from_pairs(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert four_motif_counts(diamond).tolist() == [0, 0, 0, 0, 1, 0]


def test_motifs_match_subset_enumeration():
    rng = np.random.default_rng(104)
    for _ in range(30):
        g = random_graph(rng, 10, density=rng.uniform(0.1, 0.6))
        assert np.array_equal(four_motif_counts(g), brute_four_motifs(g))


def test_motifs_bounded_by_choose_4():
    rng = np.random.default_rng(105)
    for _ in range(10):
        n = int(rng.integers(4, 14))
        g = random_graph(rng, n, density=0.5)
        assert four_motif_counts(g).sum() <= comb(n, 4)


# --- degree entropy ------------------------------------------------------------

def test_entropy_single_value_is_zero():
    assert degree_entropy([2, 2, 2, 2]) == 0.0


def test_entropy_uniform_four_values():
    assert degree_entropy([0, 1, 2, 3]) == pytest.approx(2.0)


def test_entropy_hand_computed():
    expected = -(2 / 6) * np.log2(2 / 6) - (1 / 6) * np.log2(1 / 6) - (3 / 6) * np.log2(3 / 6)
    assert degree_entropy([1, 1, 2, 3, 3, 3]) == pytest.approx(expected)
    assert degree_entropy([1, 1, 2, 3, 3, 3]) == pytest.approx(1.4591, abs=1e-4)


def test_entropy_real_values_use_16_bins():
    rng = np.random.default_rng(106)
    v = rng.uniform(0, 1, 200)
    counts, _ = np.histogram(v, bins=16, range=(v.min(), v.max()))
    p = counts[counts > 0] / counts.sum()
    assert degree_entropy(v) == pytest.approx(float(-(p * np.log2(p)).sum()))


def test_entropy_rejects_empty():
    with pytest.raises(ValueError):
        degree_entropy([])


# --- pagerank -------------------------------------------------------------------

def test_pagerank_ring_is_uniform():
    n = 20
    g = graph_from_pairs(n, [(i, (i + 1) % n) for i in range(n)])
    assert np.abs(pagerank(g) - 1.0 / n).max() <= 1e-9


def test_pagerank_star_matches_two_unknown_solution():
    # all leaves point at the hub; the hub is dangling (uniform row)
    g = graph_from_pairs(5, [(i, 0) for i in range(1, 5)])
    d = 0.85
    # h = (1-d)/5 + d*(4*l + h/5); l = (1-d)/5 + d*h/5
    a = np.array([[1 - d / 5, -4 * d], [-d / 5, 1.0]])
    b = np.array([(1 - d) / 5, (1 - d) / 5])
    hub, leaf = np.linalg.solve(a, b)
    x = pagerank(g)
    assert x[0] == pytest.approx(hub, abs=1e-9)
    assert np.abs(x[1:] - leaf).max() <= 1e-9


def test_pagerank_matches_linear_solve():
    rng = np.random.default_rng(107)
    for _ in range(20):
        n = int(rng.integers(3, 20))
        g = random_graph(rng, n, density=rng.uniform(0.05, 0.5), weighted=True)
        assert np.abs(pagerank(g) - pagerank_solve(g)).max() <= 1e-8


def test_pagerank_normalized_and_fixed_point():
    rng = np.random.default_rng(108)
    for _ in range(20):
        n = int(rng.integers(3, 15))
        g = random_graph(rng, n, density=0.3)
        x = pagerank(g)
        assert abs(x.sum() - 1.0) <= 1e-9
        from netclass.graph import row_normalize
        p = row_normalize(g.adjacency)
        residual = np.abs(x - ((1 - 0.85) / n + 0.85 * (x @ p))).sum()
        assert residual <= 1e-8


def test_pagerank_rejects_bad_damping():
    with pytest.raises(ValueError):
        pagerank_matrix(np.eye(3), damping=1.0)


# --- communities -----------------------------------------------------------------

def test_communities_empty_graph_all_isolated():
    assert count_communities(Graph.from_edges(4, [])) == 4


def test_communities_two_triangles_exhaustive():
    g = graph_from_pairs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    _, sizes = best_partition_sizes(g)
    assert sizes == {2}
    assert count_communities(g) == 2


def test_communities_complete_graph_exhaustive():
    pairs = [(i, j) for i in range(6) for j in range(6) if i != j]
    g = graph_from_pairs(6, pairs)
    _, sizes = best_partition_sizes(g)
    assert 1 in sizes
    assert count_communities(g) == 1


def test_communities_two_cliques_of_five():
    pairs = [(i, j) for i in range(5) for j in range(5) if i != j]
    pairs += [(i + 5, j + 5) for i, j in pairs[: len(pairs)]]
    g = graph_from_pairs(10, [(i, j) for i in range(5) for j in range(5) if i != j]
                         + [(i + 5, j + 5) for i in range(5) for j in range(5) if i != j])
    best_q, sizes = best_partition_sizes(g)
    assert sizes == {2}
    assert count_communities(g) == 2


def test_communities_isolated_plus_clique():
    pairs = [(i, j) for i in range(4) for j in range(4) if i != j]
    g = graph_from_pairs(6, pairs)  # nodes 4, 5 isolated
    assert count_communities(g) == 3


# --- clustering ---------------------------------------------------------------

def test_clustering_triangle_and_path():
    assert clustering_coefficient(graph_from_pairs(3, [(0, 1), (1, 2), (2, 0)])) == 1.0
    assert clustering_coefficient(graph_from_pairs(3, [(0, 1), (1, 2)])) == 0.0


def test_clustering_matches_brute_force():
    rng = np.random.default_rng(109)
    for _ in range(30):
        g = random_graph(rng, 15, density=rng.uniform(0.05, 0.5))
        a = (g.adjacency > 0).astype(int)
        np.fill_diagonal(a, 0)
        a = ((a + a.T) > 0).astype(int)
        closed = 0
        triples = 0
        for i, j, k in combinations(range(15), 3):
            for center, x, y in ((i, j, k), (j, i, k), (k, i, j)):
                if a[center, x] and a[center, y]:
                    triples += 1
                    if a[x, y]:
                        closed += 1
        expected = closed / triples if triples else 0.0
        assert clustering_coefficient(g) == pytest.approx(expected, abs=1e-12)


# --- extract_features -----------------------------------------------------------

def test_features_three_cycle_symmetry():
    g = graph_from_pairs(3, [(0, 1), (1, 2), (2, 0)])
    fs = extract_features(g)
    assert fs.direct.entropy_in == 0.0
    assert fs.direct.entropy_out == 0.0
    census = fs.direct.triad_census
    assert census.sum() == 1 and census[0] == 0


def test_features_ring_pagerank_uniform():
    n = 20
    g = graph_from_pairs(n, [(i, (i + 1) % n) for i in range(n)])
    fs = extract_features(g)
    assert np.abs(fs.direct.pagerank - 0.05).max() <= 1e-9


def test_features_two_disjoint_triangles():
    g = graph_from_pairs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert extract_features(g).direct.n_communities == 2


def test_features_isomorphism_invariance():
    # integer-valued features must match exactly; float vectors may differ by
    # reassociation of the matrix products, so compare those at 1e-9
    rng = np.random.default_rng(110)
    for _ in range(50):
        n = int(rng.integers(4, 12))
        g = random_graph(rng, n, density=rng.uniform(0.1, 0.6))
        perm = rng.permutation(n)
        h = g.relabel(perm)
        fa, fb = extract_features(g), extract_features(h)
        for block_a, block_b in ((fa.direct, fb.direct), (fa.markov5, fb.markov5)):
            assert np.array_equal(block_a.triad_census, block_b.triad_census)
            assert np.array_equal(block_a.four_motifs, block_b.four_motifs)
            assert block_a.n_communities == block_b.n_communities
            assert block_a.clustering == pytest.approx(block_b.clustering, abs=1e-12)
            assert block_a.entropy_in == pytest.approx(block_b.entropy_in, abs=1e-9)
            assert block_a.entropy_out == pytest.approx(block_b.entropy_out, abs=1e-9)
            assert np.allclose(block_a.in_degrees, block_b.in_degrees, atol=1e-9)
            assert np.allclose(block_a.out_degrees, block_b.out_degrees, atol=1e-9)
            assert np.allclose(block_a.pagerank, block_b.pagerank, atol=1e-9)
        assert np.array_equal(fa.direct.in_degrees, fb.direct.in_degrees)
        assert np.array_equal(fa.direct.out_degrees, fb.direct.out_degrees)


def test_features_finite_across_generator_ranges():
    from netclass import param_grid

    rng_seed = 0
    for kind in ("ER", "DD", "NICHE", "PA", "SW"):
        for value in param_grid(kind, 4):
            g = grow(MechanismSpec(kind, float(value)), 12, derive_rng(rng_seed, kind, float(value)))
            fs = extract_features(g)
            for block in (fs.direct, fs.markov5):
                assert np.isfinite(block.in_degrees).all()
                assert np.isfinite(block.out_degrees).all()
                assert np.isfinite(block.pagerank).all()
                assert np.isfinite([block.entropy_in, block.entropy_out, block.clustering]).all()
                assert block.n_communities >= 1
                assert abs(block.pagerank.sum() - 1.0) <= 1e-9


def test_features_json_roundtrip():
    from netclass.features import feature_set_from_dict, feature_set_to_dict

    g = grow(MechanismSpec("PA", 2.0), 15, derive_rng(1))
    fs = extract_features(g)
    fs2 = feature_set_from_dict(feature_set_to_dict(fs))
    assert np.array_equal(fs.direct.triad_census, fs2.direct.triad_census)
    assert np.allclose(fs.markov5.pagerank, fs2.markov5.pagerank)
    assert fs.direct.n_communities == fs2.direct.n_communities


def test_markov_block_built_from_fifth_power():
    from netclass import binarize, markov_power

    g = grow(MechanismSpec("ER", 0.3), 12, derive_rng(4))
    fs = extract_features(g)
    t5 = markov_power(g, 5)
    assert np.allclose(fs.markov5.in_degrees, np.sort(t5.matrix.sum(axis=0)))
    b = binarize(t5)
    assert np.array_equal(fs.markov5.triad_census, triad_census(b))
