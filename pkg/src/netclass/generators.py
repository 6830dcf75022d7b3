"""Growth of directed networks under five attachment mechanisms and mixtures.

Each mechanism has a single governing parameter:

====  ==========================  =================
kind  parameter                   range
====  ==========================  =================
ER    attachment probability p    [0, 1]
DD    divergence probability q    [0, 1]
NICHE target connectance C        (0, 0.5]
PA    attachment power alpha      [0, 4]
SW    rewiring probability beta   [0, 1]
====  ==========================  =================

Nodes are added one at a time; node ``i`` wires itself into the existing
subgraph according to its mechanism. When a degree-driven mechanism (PA or
DD) governs any of the first three nodes, those nodes are wired as a directed
3-cycle seed so the degree-driven rules have edges to operate on; otherwise
the early nodes attach by their own rules like every later node, so e.g.
``grow(ER, p=0)`` is the empty graph. ``stir_mixture`` instead rewires the
out-edges of an already fully grown random network, one node at a time in
random order.

All generators are pure functions of (specs, node count, rng): the same seed
always reproduces the same graph, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

MECHANISMS = ("ER", "DD", "NICHE", "PA", "SW")

PARAM_RANGES = {
    "ER": (0.0, 1.0),
    "DD": (0.0, 1.0),
    "NICHE": (0.0, 0.5),  # lower bound exclusive
    "PA": (0.0, 4.0),
    "SW": (0.0, 1.0),
}

DEFAULT_NODES = 50
PA_OUT_EDGES = 2        # out-edges created by each preferential-attachment node
SW_NEIGHBORS = 2        # ring-lattice links created by each small-world node
STIR_INIT_DENSITY = 0.2  # density of the fully grown network stir_mixture starts from
NICHE_GRID_MIN = 0.01   # smallest connectance used on parameter grids


@dataclass(frozen=True)
class MechanismSpec:
    """One mechanism plus the value of its governing parameter."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.kind!r}; expected one of {MECHANISMS}")
        lo, hi = PARAM_RANGES[self.kind]
        ok = (lo < self.param <= hi) if self.kind == "NICHE" else (lo <= self.param <= hi)
        if not ok:
            bound = "(" if self.kind == "NICHE" else "["
            raise ValueError(
                f"{self.kind} parameter {self.param} outside {bound}{lo}, {hi}]"
            )


def param_grid(kind: str, count: int) -> np.ndarray:
    """``count`` evenly spaced parameter values spanning the mechanism's range."""
    lo, hi = PARAM_RANGES[kind]
    if kind == "NICHE":
        lo = NICHE_GRID_MIN
    return np.linspace(lo, hi, count)


class _Builder:
    """Mutable edge accumulator shared by the growth and stir engines."""

    def __init__(self, n):
        self.n = n
        self.edges = {}
        self.out_nbrs = [set() for _ in range(n)]
        self.indeg = np.zeros(n)  # unweighted in-edge counts, drives PA

    def add(self, s, t):
        if (s, t) not in self.edges:
            self.edges[(s, t)] = 1.0
            self.out_nbrs[s].add(t)
            self.indeg[t] += 1

    def remove(self, s, t):
        if (s, t) in self.edges:
            del self.edges[(s, t)]
            self.out_nbrs[s].discard(t)
            self.indeg[t] -= 1

    def graph(self):
        return Graph.from_edges(self.n, ((s, t, w) for (s, t), w in self.edges.items()))


def _niche_interval(param, eta_v, rng):
    # feeding range r = eta * x with x ~ Beta(1, (1-2C)/(2C)); centre in [r/2, eta]
    b = (1.0 - 2.0 * param) / (2.0 * param)
    x = rng.beta(1.0, b) if b > 0 else 1.0
    r = eta_v * x
    c = rng.uniform(r / 2.0, eta_v)
    return c - r / 2.0, c + r / 2.0


def _weighted_targets(rng, weights, k):
    # k distinct indices drawn with probability proportional to weights
    w = np.array(weights, dtype=float)
    chosen = []
    for _ in range(min(k, np.count_nonzero(w > 0))):
        cum = np.cumsum(w)
        r = rng.random() * cum[-1]
        idx = int(np.searchsorted(cum, r, side="right"))
        idx = min(idx, len(w) - 1)
        chosen.append(idx)
        w[idx] = 0.0
    return chosen


def _attach(b: _Builder, v: int, spec: MechanismSpec, eta, intervals, rng):
    """Wire new node v into the subgraph on nodes 0..v-1 per its mechanism."""
    kind, p = spec.kind, spec.param
    if kind == "ER":
        coins_out = rng.random(v)
        coins_in = rng.random(v)
        for u in range(v):
            if coins_out[u] < p:
                b.add(v, u)
            if coins_in[u] < p:
                b.add(u, v)
    elif kind == "PA":
        weights = (b.indeg[:v] + 1.0) ** p
        for u in _weighted_targets(rng, weights, PA_OUT_EDGES):
            b.add(v, u)
    elif kind == "DD":
        keep = 1.0 - p
        parent = int(rng.integers(v))
        added = False
        targets = sorted(b.out_nbrs[parent])
        coins = rng.random(len(targets))
        for t, coin in zip(targets, coins):
            if t != v and coin < keep:
                b.add(v, t)
                added = True
        if rng.random() < keep:
            b.add(v, parent)
            added = True
        if not added:
            b.add(v, int(rng.integers(v)))  # avoid a degenerate isolated node
    elif kind == "NICHE":
        lo, hi = intervals[v]
        for u in range(v):
            if lo <= eta[u] <= hi:
                b.add(v, u)
        for u in range(v):
            if u in intervals:
                ulo, uhi = intervals[u]
                if ulo <= eta[v] <= uhi:
                    b.add(u, v)
    elif kind == "SW":
        for u in (v - 1, v - 2):
            if u < 0:
                continue
            b.add(v, u)
            if rng.random() < p:
                pool = [t for t in range(v) if t not in b.out_nbrs[v]]
                if pool:
                    b.remove(v, u)
                    b.add(v, pool[int(rng.integers(len(pool)))])


def grow_mixture(assignment, rng=None) -> Graph:
    """Grow a network whose node ``i`` attaches by ``assignment[i]``'s rule.

    When PA or DD governs any of the first three nodes, those nodes form the
    deterministic seed 3-cycle instead of attaching; otherwise every node from
    the second onward attaches normally. Node count equals
    ``len(assignment)``.
    """
    assignment = list(assignment)
    n = len(assignment)
    if n < 3:
        raise ValueError("need at least 3 nodes")
    for spec in assignment:
        if not isinstance(spec, MechanismSpec):
            raise ValueError(f"assignment entries must be MechanismSpec, got {spec!r}")
    rng = np.random.default_rng(rng)

    b = _Builder(n)
    eta = np.empty(n)
    intervals = {}

    def birth(v):
        eta[v] = rng.random()
        if assignment[v].kind == "NICHE":
            intervals[v] = _niche_interval(assignment[v].param, eta[v], rng)

    if any(assignment[v].kind in ("PA", "DD") for v in range(3)):
        for v in range(3):
            birth(v)
        for s, t in ((0, 1), (1, 2), (2, 0)):
            b.add(s, t)
        start = 3
    else:
        birth(0)
        start = 1
    for v in range(start, n):
        birth(v)
        _attach(b, v, assignment[v], eta, intervals, rng)
    return b.graph()


def grow(spec: MechanismSpec, n: int = DEFAULT_NODES, rng=None) -> Graph:
    """Grow an ``n``-node network under a single mechanism."""
    return grow_mixture([spec] * n, rng)


def _restir(b: _Builder, v: int, spec: MechanismSpec, eta, rng):
    """Recreate v's out-edges against the full current network."""
    n, kind, p = b.n, spec.kind, spec.param
    if kind == "ER":
        coins = rng.random(n)
        for u in range(n):
            if u != v and coins[u] < p:
                b.add(v, u)
    elif kind == "PA":
        weights = (b.indeg + 1.0) ** p
        weights[v] = 0.0
        for u in _weighted_targets(rng, weights, PA_OUT_EDGES):
            b.add(v, u)
    elif kind == "DD":
        keep = 1.0 - p
        idx = int(rng.integers(n - 1))
        parent = idx + (idx >= v)
        added = False
        targets = sorted(b.out_nbrs[parent])
        coins = rng.random(len(targets))
        for t, coin in zip(targets, coins):
            if t != v and coin < keep:
                b.add(v, t)
                added = True
        if rng.random() < keep:
            b.add(v, parent)
            added = True
        if not added:
            idx = int(rng.integers(n - 1))
            b.add(v, idx + (idx >= v))
    elif kind == "NICHE":
        lo, hi = _niche_interval(p, eta[v], rng)
        for u in range(n):
            if u != v and lo <= eta[u] <= hi:
                b.add(v, u)
    elif kind == "SW":
        for u in ((v - 1) % n, (v - 2) % n):
            b.add(v, u)
            if rng.random() < p:
                pool = [t for t in range(n) if t != v and t not in b.out_nbrs[v]]
                if pool:
                    b.remove(v, u)
                    b.add(v, pool[int(rng.integers(len(pool)))])


def stir_mixture(assignment, rng=None, init_density: float = STIR_INIT_DENSITY) -> Graph:
    """Rewire a fully grown random network by node-specific mechanisms.

    Starts from ``grow(ER, init_density, n)`` on all ``n = len(assignment)``
    nodes, then visits every node exactly once in a random order, deleting the
    visited node's out-edges and recreating them by its assigned mechanism
    against the full current network.
    """
    assignment = list(assignment)
    n = len(assignment)
    if n < 3:
        raise ValueError("need at least 3 nodes")
    for spec in assignment:
        if not isinstance(spec, MechanismSpec):
            raise ValueError(f"assignment entries must be MechanismSpec, got {spec!r}")
    rng = np.random.default_rng(rng)

    base = grow(MechanismSpec("ER", init_density), n, rng)
    b = _Builder(n)
    for s, t, _ in base.edges:
        b.add(s, t)
    eta = rng.random(n)  # niche values for the stir phase
    order = rng.permutation(n)
    for v in order:
        v = int(v)
        for t in sorted(b.out_nbrs[v]):
            b.remove(v, t)
        _restir(b, v, assignment[v], eta, rng)
    return b.graph()


def random_proportions(k: int, rng) -> np.ndarray:
    """Uniform draw from the k-simplex via exponential normalization."""
    e = rng.exponential(1.0, size=k)
    return e / e.sum()


def random_assignment(n: int, mechanisms=MECHANISMS, proportions=None, rng=None):
    """Random per-node mixture over ``mechanisms`` with one parameter each.

    Node counts follow ``proportions`` (drawn uniformly from the simplex when
    absent) by largest remainder, and the per-node order is shuffled. Returns
    ``(assignment, full_proportions, params)`` where ``full_proportions`` is
    indexed over all five mechanisms and ``params`` maps kind to the parameter
    drawn for it.
    """
    rng = np.random.default_rng(rng)
    mechanisms = tuple(mechanisms)
    k = len(mechanisms)
    props = np.asarray(proportions, dtype=float) if proportions is not None else random_proportions(k, rng)
    if props.shape != (k,) or props.min() < 0 or abs(props.sum() - 1.0) > 1e-9:
        raise ValueError("proportions must be nonnegative over the mechanisms and sum to 1")

    params = {}
    for kind in mechanisms:
        lo, hi = PARAM_RANGES[kind]
        if kind == "NICHE":
            lo = NICHE_GRID_MIN
        params[kind] = float(rng.uniform(lo, hi))

    counts = np.floor(props * n).astype(int)
    remainder = props * n - counts
    for idx in np.argsort(-remainder, kind="stable")[: n - counts.sum()]:
        counts[idx] += 1

    assignment = []
    for kind, count in zip(mechanisms, counts):
        assignment.extend([MechanismSpec(kind, params[kind])] * int(count))
    assignment = [assignment[int(i)] for i in rng.permutation(n)]

    full = np.zeros(len(MECHANISMS))
    for kind, c in zip(mechanisms, counts):
        full[MECHANISMS.index(kind)] = c / n
    return assignment, full, params
