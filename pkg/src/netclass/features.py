"""The 18-property structural feature set of a directed network.

Nine properties are measured on the network as given and the same nine on its
order-5 row-normalized Markov version, which folds indirect (multi-step)
influence into the comparison: sorted in/out degree vectors, Shannon entropy
of each degree vector, global clustering (transitivity), PageRank, the number
of communities under greedy modularity maximization, the 16-class directed
triad census, and the counts of the 6 connected undirected 4-node subgraph
classes.

Vector-valued properties are stored sorted ascending, which makes the whole
feature set invariant under node relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .graph import Graph, TransitionMatrix, binarize, markov_power, row_normalize

MARKOV_ORDER = 5
ENTROPY_BINS = 16
PAGERANK_DAMPING = 0.85

TRIAD_NAMES = (
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300",
)

FOUR_MOTIF_NAMES = ("path4", "star3", "cycle4", "tailed_triangle", "diamond", "clique4")

# Exemplar edge sets on nodes (0, 1, 2) for the 16 triad isomorphism classes,
# standard MAN (mutual/asymmetric/null) labels.
_TRIAD_EDGES = {
    "003": (),
    "012": ((0, 1),),
    "102": ((0, 1), (1, 0)),
    "021D": ((1, 0), (1, 2)),
    "021U": ((0, 1), (2, 1)),
    "021C": ((0, 1), (1, 2)),
    "111D": ((0, 2), (2, 0), (1, 2)),
    "111U": ((0, 2), (2, 0), (2, 1)),
    "030T": ((0, 1), (2, 1), (0, 2)),
    "030C": ((1, 0), (2, 1), (0, 2)),
    "201": ((0, 1), (1, 0), (0, 2), (2, 0)),
    "120D": ((1, 2), (1, 0), (0, 2), (2, 0)),
    "120U": ((0, 1), (2, 1), (0, 2), (2, 0)),
    "120C": ((0, 1), (1, 2), (0, 2), (2, 0)),
    "210": ((0, 1), (1, 2), (2, 1), (0, 2), (2, 0)),
    "300": ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)),
}

# Bit order of the six directed pairs of an (i, j, k) triple with i < j < k.
_TRIAD_PAIRS = ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))


def _triad_code(edges) -> int:
    es = set(edges)
    return sum(1 << b for b, pair in enumerate(_TRIAD_PAIRS) if pair in es)


@lru_cache(maxsize=1)
def _triad_lookup() -> np.ndarray:
    """Map each 6-bit triple code to its triad class index."""
    table = np.full(64, -1, dtype=np.int64)
    for idx, name in enumerate(TRIAD_NAMES):
        for perm in permutations(range(3)):
            permuted = tuple((perm[s], perm[t]) for s, t in _TRIAD_EDGES[name])
            table[_triad_code(permuted)] = idx
    assert (table >= 0).all()
    return table


@lru_cache(maxsize=4)
def _triples(n: int):
    idx = np.fromiter(
        (x for c in combinations(range(n), 3) for x in c), dtype=np.int64, count=-1
    ).reshape(-1, 3)
    return idx[:, 0], idx[:, 1], idx[:, 2]


def _directed_simple(g: Graph) -> np.ndarray:
    """0/1 adjacency with self-loops dropped."""
    a = (g.adjacency > 0).astype(np.int64)
    np.fill_diagonal(a, 0)
    return a


def _sym_simple(g: Graph) -> np.ndarray:
    """0/1 symmetrized adjacency with self-loops dropped."""
    a = _directed_simple(g)
    return ((a + a.T) > 0).astype(np.int64)


def triad_census(g: Graph) -> np.ndarray:
    """Counts of the 16 directed triad classes over all node triples.

    Order: 003, 012, 102, 021D, 021U, 021C, 111D, 111U, 030T, 030C, 201,
    120D, 120U, 120C, 210, 300. The counts sum to C(n, 3). Self-loops are
    ignored.
    """
    if g.n < 3:
        raise ValueError("triad census needs at least 3 nodes")
    a = _directed_simple(g)
    i, j, k = _triples(g.n)
    code = (
        a[i, j]
        + 2 * a[j, i]
        + 4 * a[i, k]
        + 8 * a[k, i]
        + 16 * a[j, k]
        + 32 * a[k, j]
    )
    return np.bincount(_triad_lookup()[code], minlength=16)


def four_motif_counts(g: Graph) -> np.ndarray:
    """Induced counts of connected undirected 4-node subgraph classes.

    The graph is symmetrized (self-loops dropped) and every 4-node subset
    whose induced subgraph is connected is classified as one of: path,
    3-star, 4-cycle, tailed triangle, diamond, 4-clique (in that order).

    Non-induced pattern totals come from closed-form degree/triangle/walk
    identities, then inclusion-exclusion from the densest class down converts
    them to induced counts. Runs in roughly matrix-multiplication time.
    """
    if g.n < 4:
        raise ValueError("4-node motifs need at least 4 nodes")
    a = _sym_simple(g).astype(float)
    n = g.n
    d = a.sum(axis=1)
    m = d.sum() / 2.0
    a2 = a @ a
    tri_v = (a2 * a).sum(axis=1) / 2.0  # triangles through each vertex
    t3 = tri_v.sum() / 3.0

    # non-induced ("at least these edges") pattern counts
    n_p4 = (np.outer(d - 1, d - 1) * a).sum() / 2.0 - 3.0 * t3
    n_claw = (d * (d - 1) * (d - 2) / 6.0).sum()
    n_c4 = ((a2 * a2).sum() - 2.0 * (d**2).sum() + 2.0 * m) / 8.0
    n_paw = (tri_v * (d - 2)).sum()
    iu, ju = np.nonzero(np.triu(a, 1))
    cod = a2[iu, ju]  # common neighbors per edge
    n_diamond = (cod * (cod - 1) / 2.0).sum()

    # ordered 4-tuples with all six edges present, blocked to bound memory
    k4_ordered = 0.0
    block = max(1, int(2_000_000 // max(n * n, 1)))
    for u0 in range(0, n, block):
        pb = a[u0 : u0 + block, None, :] * a[None, :, :]  # (B, n, n)
        s = (np.matmul(pb, a) * pb).sum(axis=2)  # quadratic forms per (u, v)
        k4_ordered += (a[u0 : u0 + block] * s).sum()
    i_k4 = k4_ordered / 24.0

    i_diamond = n_diamond - 6.0 * i_k4
    i_c4 = n_c4 - i_diamond - 3.0 * i_k4
    i_paw = n_paw - 4.0 * i_diamond - 12.0 * i_k4
    i_claw = n_claw - i_paw - 2.0 * i_diamond - 4.0 * i_k4
    i_p4 = n_p4 - 2.0 * i_paw - 4.0 * i_c4 - 6.0 * i_diamond - 12.0 * i_k4
    counts = np.rint([i_p4, i_claw, i_c4, i_paw, i_diamond, i_k4]).astype(np.int64)
    return counts


def clustering_coefficient(g: Graph) -> float:
    """Global transitivity of the symmetrized graph: 3*triangles / triples."""
    if g.n < 3:
        raise ValueError("clustering needs at least 3 nodes")
    a = _sym_simple(g).astype(float)
    d = a.sum(axis=1)
    wedges = (d * (d - 1) / 2.0).sum()
    if wedges == 0:
        return 0.0
    triangles = np.trace(a @ a @ a) / 6.0
    return float(3.0 * triangles / wedges)


def degree_entropy(degrees) -> float:
    """Shannon entropy (bits) of the empirical degree distribution.

    Integer-valued inputs use exact counts over distinct values; real-valued
    inputs (Markov strengths) are first binned into 16 equal-width bins over
    [min, max].
    """
    v = np.asarray(degrees, dtype=float)
    if v.size == 0:
        raise ValueError("empty degree vector")
    if np.allclose(v, np.rint(v), atol=1e-9):
        _, counts = np.unique(np.rint(v), return_counts=True)
    else:
        lo, hi = float(v.min()), float(v.max())
        if hi <= lo:
            return 0.0
        counts, _ = np.histogram(v, bins=ENTROPY_BINS, range=(lo, hi))
        counts = counts[counts > 0]
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def pagerank_matrix(weights, damping: float = PAGERANK_DAMPING,
                    tol: float = 1e-10, max_iter: int = 200) -> np.ndarray:
    """PageRank by power iteration on a weight matrix.

    The matrix is row-normalized with dangling rows replaced by the uniform
    vector; iteration stops when the L1 change drops below ``tol`` or after
    ``max_iter`` sweeps. The result sums to 1.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    p = row_normalize(np.asarray(weights, dtype=float))
    n = p.shape[0]
    x = np.full(n, 1.0 / n)
    base = (1.0 - damping) / n
    for _ in range(max_iter):
        x_new = base + damping * (x @ p)
        if np.abs(x_new - x).sum() < tol:
            x = x_new
            break
        x = x_new
    return x / x.sum()


def pagerank(g: Graph, damping: float = PAGERANK_DAMPING) -> np.ndarray:
    """PageRank of a graph's weighted adjacency matrix."""
    return pagerank_matrix(g.adjacency, damping)


def count_communities(g: Graph) -> int:
    """Communities at the modularity peak of greedy agglomerative merging.

    Works on the symmetrized, binarized graph (self-loops dropped). Starting
    from singletons, the pair of communities with the largest modularity gain
    is merged until one remains; the return value is the community count at
    the first maximum of modularity along that sequence. Isolated nodes never
    gain from merging and therefore each count as one community.
    """
    a = _sym_simple(g)
    n = g.n
    deg = a.sum(axis=1).astype(np.int64)
    two_m = int(deg.sum())
    if two_m == 0:
        return n
    m = two_m // 2
    # integer bookkeeping: b[c, e] counts edge endpoints between communities
    # (b[c, c] is twice the intra-edge count), so the gain of merging (i, j)
    # is score/(2 m^2) with score = 2 m b_ij - d_i d_j and modularity itself
    # is q_num/(4 m^2); ties are exact integers, never float noise
    b = a.astype(np.int64).copy()
    d = deg.copy()
    size = np.ones(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    sentinel = np.iinfo(np.int64).min // 2
    q_num = int((2 * m * b.diagonal() - d * d).sum())
    best_q, best_k = q_num, n
    k = n
    for _ in range(n - 1):
        score = 2 * m * b - np.outer(d, d)
        score[~alive, :] = sentinel
        score[:, ~alive] = sentinel
        np.fill_diagonal(score, sentinel)
        smax = score.max()
        cand = [(int(i), int(j)) for i, j in np.argwhere(score == smax) if i < j]
        i, j = cand[0] if len(cand) == 1 else _break_merge_tie(cand, b, d, size, alive)
        q_num += 2 * int(score[i, j])
        b[i, :] += b[j, :]
        b[:, i] += b[:, j]
        d[i] += d[j]
        size[i] += size[j]
        alive[j] = False
        b[j, :] = 0
        b[:, j] = 0
        d[j] = 0
        size[j] = 0
        k -= 1
        if q_num > best_q:
            best_q, best_k = q_num, k
    return best_k


def _row_ranks(mat):
    """Canonical ids for identical rows (byte order, content-determined)."""
    m = np.ascontiguousarray(mat, dtype=np.int64)
    flat = m.view(np.dtype((np.void, m.dtype.itemsize * m.shape[1]))).ravel()
    _, inverse = np.unique(flat, return_inverse=True)
    return inverse


def _break_merge_tie(cand, b, d, size, alive):
    """Choose among equal-gain merges by label-invariant structure.

    A cheap filter on the pair's own stats runs first; surviving ties are
    compared by canonical community colors, i.e. ranks of local stats refined
    twice by the sorted multiset of (connection, neighbor color) pairs
    (Weisfeiler-Lehman rounds on the community graph). Pairs still tied after
    that are structurally interchangeable for counting purposes, so the first
    one wins.
    """
    rows_i = np.array([p[0] for p in cand])
    rows_j = np.array([p[1] for p in cand])
    s_i = np.column_stack([d[rows_i], size[rows_i], b[rows_i, rows_i]])
    s_j = np.column_stack([d[rows_j], size[rows_j], b[rows_j, rows_j]])
    pair_stats = np.column_stack(
        [np.minimum(s_i, s_j), np.maximum(s_i, s_j), b[rows_i, rows_j]]
    )
    ranks = _row_ranks(pair_stats)
    cand = [p for p, r in zip(cand, ranks) if r == ranks.min()]
    if len(cand) == 1:
        return cand[0]

    live = np.flatnonzero(alive)
    sub = b[np.ix_(live, live)]
    colors = _row_ranks(np.column_stack([d[live], size[live], sub.diagonal()]))
    for _ in range(2):
        radix = int(colors.max()) + 1
        encoded = np.sort(sub * radix + colors[None, :], axis=1)
        colors = _row_ranks(np.column_stack([colors, encoded]))
    color_of = dict(zip(live.tolist(), colors.tolist()))

    def key(pair):
        ci, cj = color_of[pair[0]], color_of[pair[1]]
        return (min(ci, cj), max(ci, cj))

    return min(cand, key=key)


@dataclass(frozen=True, eq=False)
class PropertyBlock:
    """The nine properties measured on one view of a network."""

    in_degrees: np.ndarray
    out_degrees: np.ndarray
    entropy_in: float
    entropy_out: float
    clustering: float
    pagerank: np.ndarray
    n_communities: int
    triad_census: np.ndarray
    four_motifs: np.ndarray


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Direct and Markov-order-5 property blocks of one network."""

    direct: PropertyBlock
    markov5: PropertyBlock


def _direct_block(g: Graph) -> PropertyBlock:
    return PropertyBlock(
        in_degrees=np.sort(g.in_degrees),
        out_degrees=np.sort(g.out_degrees),
        entropy_in=degree_entropy(g.in_degrees),
        entropy_out=degree_entropy(g.out_degrees),
        clustering=clustering_coefficient(g),
        pagerank=np.sort(pagerank(g)),
        n_communities=count_communities(g),
        triad_census=triad_census(g),
        four_motifs=four_motif_counts(g) if g.n >= 4 else np.zeros(6, dtype=np.int64),
    )


def _markov_block(t: TransitionMatrix) -> PropertyBlock:
    in_strength = t.matrix.sum(axis=0)
    out_strength = t.matrix.sum(axis=1)
    b = binarize(t)  # threshold 1/n: keep above-uniform transitions
    return PropertyBlock(
        in_degrees=np.sort(in_strength),
        out_degrees=np.sort(out_strength),
        entropy_in=degree_entropy(in_strength),
        entropy_out=degree_entropy(out_strength),
        clustering=clustering_coefficient(b),
        pagerank=np.sort(pagerank_matrix(t.matrix)),
        n_communities=count_communities(b),
        triad_census=triad_census(b),
        four_motifs=four_motif_counts(b) if b.n >= 4 else np.zeros(6, dtype=np.int64),
    )


def extract_features(g: Graph) -> FeatureSet:
    """Extract all 18 properties of a network.

    The direct block uses weights as given; the Markov block recomputes the
    same properties on the order-5 row-normalized power of the adjacency
    matrix, with strengths as degree analogues, PageRank on the transition
    weights, and motif/community/clustering counts on the above-uniform
    binarization.
    """
    if g.n < 3:
        raise ValueError("feature extraction needs at least 3 nodes")
    return FeatureSet(
        direct=_direct_block(g),
        markov5=_markov_block(markov_power(g, MARKOV_ORDER)),
    )


def feature_set_to_dict(fs: FeatureSet) -> dict:
    """JSON-ready representation with one object per block."""
    def block(pb: PropertyBlock) -> dict:
        return {
            "in_degrees": [float(x) for x in pb.in_degrees],
            "out_degrees": [float(x) for x in pb.out_degrees],
            "entropy_in": float(pb.entropy_in),
            "entropy_out": float(pb.entropy_out),
            "clustering": float(pb.clustering),
            "pagerank": [float(x) for x in pb.pagerank],
            "n_communities": int(pb.n_communities),
            "triad_census": [int(x) for x in pb.triad_census],
            "four_motifs": [int(x) for x in pb.four_motifs],
        }

    return {"direct": block(fs.direct), "markov5": block(fs.markov5)}


def feature_set_from_dict(d: dict) -> FeatureSet:
    def block(bd: dict) -> PropertyBlock:
        return PropertyBlock(
            in_degrees=np.asarray(bd["in_degrees"], dtype=float),
            out_degrees=np.asarray(bd["out_degrees"], dtype=float),
            entropy_in=float(bd["entropy_in"]),
            entropy_out=float(bd["entropy_out"]),
            clustering=float(bd["clustering"]),
            pagerank=np.asarray(bd["pagerank"], dtype=float),
            n_communities=int(bd["n_communities"]),
            triad_census=np.asarray(bd["triad_census"], dtype=np.int64),
            four_motifs=np.asarray(bd["four_motifs"], dtype=np.int64),
        )

    return FeatureSet(direct=block(d["direct"]), markov5=block(d["markov5"]))
