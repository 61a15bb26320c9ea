"""Shared test utilities: random polytree generation and evidence pickers."""

from __future__ import annotations

import random

from uaml.network import Node, NetworkSpec, PointNetwork, row_keys
from uaml.opinions import opinion_from_mean_strength


def random_polytree_nodes(n_nodes: int, rng: random.Random) -> list[Node]:
    """Random polytree skeleton: each node attaches to one earlier node with
    a random edge orientation, so the undirected skeleton is a tree."""
    parents: dict[int, list[int]] = {i: [] for i in range(n_nodes)}
    for i in range(1, n_nodes):
        j = rng.randrange(i)
        if rng.random() < 0.5:
            parents[i].append(j)
        else:
            parents[j].append(i)
    return [Node(f"N{i}", ("y", "n"), tuple(f"N{j}" for j in sorted(parents[i])))
            for i in range(n_nodes)]


def random_point_network(n_nodes: int, rng: random.Random,
                         lo: float = 0.1, hi: float = 0.9) -> PointNetwork:
    nodes = random_polytree_nodes(n_nodes, rng)
    by_name = {n.name: n for n in nodes}
    cpts = {}
    for node in nodes:
        rows = {}
        for key in row_keys(node, by_name):
            p0 = rng.uniform(lo, hi)
            rows[key] = (p0, 1.0 - p0)
        cpts[node.name] = rows
    return PointNetwork(nodes=nodes, cpts=cpts)


def random_spec_network(n_nodes: int, rng: random.Random,
                        min_strength: float = 12.0,
                        max_strength: float = 60.0) -> NetworkSpec:
    nodes = random_polytree_nodes(n_nodes, rng)
    by_name = {n.name: n for n in nodes}
    cpts = {}
    for node in nodes:
        rows = {}
        for key in row_keys(node, by_name):
            mean = rng.uniform(0.1, 0.9)
            strength = rng.uniform(min_strength, max_strength)
            rows[key] = opinion_from_mean_strength(mean, strength)
        cpts[node.name] = rows
    return NetworkSpec(nodes=nodes, cpts=cpts)


def random_hard_evidence(nodes: list[Node], rng: random.Random,
                         n_observed: int, exclude: set[str] = frozenset()) -> dict:
    candidates = [n for n in nodes if n.name not in exclude]
    chosen = rng.sample(candidates, min(n_observed, len(candidates)))
    return {n.name: rng.choice(n.states) for n in chosen}
