"""Shared builders for the test suite."""

import numpy as np

from netclass import Graph


def random_graph(rng, n, density=0.3, weighted=False, self_loops=False):
    edges = []
    for s in range(n):
        for t in range(n):
            if s == t and not self_loops:
                continue
            if rng.random() < density:
                w = float(rng.uniform(0.1, 5.0)) if weighted else 1.0
                edges.append((s, t, w))
    return Graph.from_edges(n, edges)


def graph_from_pairs(n, pairs):
    return Graph.from_edges(n, [(s, t, 1.0) for s, t in pairs])
