"""Directed graphs, edgelist serialization, and the Markov power transform.

Graphs are immutable, dense-friendly (intended for up to a few hundred
nodes), and always directed. The Markov transform row-normalizes the weighted
adjacency matrix (dangling rows become uniform) and raises it to a power;
its output feeds the indirect-effect half of the feature ensemble.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class EdgelistParseError(ValueError):
    """A malformed edgelist line; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    """Immutable directed graph on nodes ``0..n-1`` with nonnegative weights.

    ``edges`` holds at most one ``(source, target, weight)`` triple per
    ordered node pair, sorted by ``(source, target)``. Build instances with
    :meth:`from_edges`, which deduplicates (last weight wins) and sorts.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one node")
        prev = None
        for s, t, w in self.edges:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"edge ({s}, {t}) outside node range [0, {self.n})")
            if not (w >= 0):
                raise ValueError(f"negative weight {w!r} on edge ({s}, {t})")
            if prev is not None and (s, t) <= prev:
                raise ValueError("edges must be unique per (source, target) and sorted")
            prev = (s, t)

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        """Build a graph from an iterable of ``(src, dst[, weight])`` items.

        Repeated ordered pairs keep the last weight seen; the default weight
        is 1.0.
        """
        seen = {}
        for e in edges:
            s, t = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            seen[(s, t)] = w
        return Graph(int(n), tuple((s, t, w) for (s, t), w in sorted(seen.items())))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense weight matrix; entry ``[s, t]`` is the weight of s -> t."""
        a = np.zeros((self.n, self.n))
        for s, t, w in self.edges:
            a[s, t] = w
        a.setflags(write=False)
        return a

    @cached_property
    def in_degrees(self) -> np.ndarray:
        """Weighted in-degree per node (column sums, self-loops included)."""
        d = self.adjacency.sum(axis=0)
        d.setflags(write=False)
        return d

    @cached_property
    def out_degrees(self) -> np.ndarray:
        """Weighted out-degree per node (row sums, self-loops included)."""
        d = self.adjacency.sum(axis=1)
        d.setflags(write=False)
        return d

    def relabel(self, permutation) -> "Graph":
        """Graph with node ``i`` renamed to ``permutation[i]``."""
        p = [int(x) for x in permutation]
        if sorted(p) != list(range(self.n)):
            raise ValueError("permutation must rearrange 0..n-1")
        return Graph.from_edges(self.n, ((p[s], p[t], w) for s, t, w in self.edges))


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic matrix; each row sums to 1 within 1e-9."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.n, self.n):
            raise ValueError(f"matrix must be {self.n}x{self.n}")
        if m.min() < -1e-12 or m.max() > 1 + 1e-12:
            raise ValueError("entries must lie in [0, 1]")
        if np.abs(m.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("every row must sum to 1 within 1e-9")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def row_normalize(weights: np.ndarray) -> np.ndarray:
    """Row-normalize a nonnegative matrix; zero rows become uniform ``1/n``.

    The dangling-row fix is the same one PageRank uses and keeps the result
    stochastic.
    """
    a = np.asarray(weights, dtype=float)
    n = a.shape[0]
    sums = a.sum(axis=1)
    dangling = sums <= 0
    safe = np.where(dangling, 1.0, sums)
    p = a / safe[:, None]
    p[dangling] = 1.0 / n
    return p


def markov_power(g: Graph, order: int = 5) -> TransitionMatrix:
    """The row-normalized adjacency matrix raised to ``order``.

    Dangling rows are replaced by the uniform vector before powering, and the
    power is taken by repeated matrix multiplication.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    p = row_normalize(g.adjacency)
    result = p
    for _ in range(order - 1):
        result = result @ p
    return TransitionMatrix(g.n, result)


def binarize(t: TransitionMatrix, threshold: float | None = None) -> Graph:
    """Unit-weight graph with an edge wherever ``t`` exceeds ``threshold``.

    The default threshold is ``1/n`` ("above uniform"). The inequality is
    strict, and diagonal entries above threshold become (i, i) edges.
    """
    if threshold is None:
        threshold = 1.0 / t.n
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    src, dst = np.nonzero(t.matrix > threshold)
    return Graph.from_edges(t.n, zip(src.tolist(), dst.tolist()))


_NODES_HEADER = re.compile(r"#\s*nodes\s*=\s*(\d+)\s*$")


def read_edgelist(source) -> Graph:
    """Parse ``src dst [weight]`` lines into a :class:`Graph`.

    ``source`` may be a string, bytes, or a file-like object. Lines starting
    with ``#`` are comments, except that a ``# nodes=K`` header fixes the node
    count (otherwise it is 1 + the largest id seen). Repeated ``(src, dst)``
    lines keep the last weight.
    """
    text = source.read() if hasattr(source, "read") else source
    if isinstance(text, bytes):
        text = text.decode()
    n_header = None
    edges = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NODES_HEADER.match(line)
            if m:
                n_header = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise EdgelistParseError(lineno, f"expected 'src dst [weight]', got {raw!r}")
        try:
            s, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgelistParseError(lineno, f"node ids must be integers in {raw!r}") from None
        if s < 0 or t < 0:
            raise EdgelistParseError(lineno, f"node ids must be nonnegative in {raw!r}")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise EdgelistParseError(lineno, f"bad weight {parts[2]!r}") from None
            if not np.isfinite(w):
                raise EdgelistParseError(lineno, f"weight must be finite, got {parts[2]!r}")
            if w < 0:
                raise ValueError(f"line {lineno}: negative weight {w}")
        edges[(s, t)] = w
    max_id = max((max(s, t) for s, t in edges), default=-1)
    if n_header is not None:
        if max_id >= n_header:
            raise ValueError(f"node id {max_id} exceeds declared node count {n_header}")
        n = n_header
    else:
        if max_id < 0:
            raise ValueError("empty edgelist without a '# nodes=K' header")
        n = max_id + 1
    return Graph.from_edges(n, ((s, t, w) for (s, t), w in edges.items()))


def write_edgelist(g: Graph) -> str:
    """Serialize a graph; inverse of :func:`read_edgelist`.

    Emits a ``# nodes=K`` header then one ``src dst weight`` line per edge in
    ascending ``(src, dst)`` order, weights with 9 significant digits.
    """
    lines = [f"# nodes={g.n}"]
    lines.extend(f"{s} {t} {w:.9g}" for s, t, w in g.edges)
    return "\n".join(lines) + "\n"
