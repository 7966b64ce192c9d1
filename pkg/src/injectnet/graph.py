"""Undirected graphs over integer nodes, plus the small-world metrics.

Graphs are simple (no self-loops, no parallel edges) and undirected. Every
edge carries a kind tag: ADHOC for radio links present in the snapshot,
BYPASS for injected long-range links. The metrics treat both kinds alike;
the tag exists so callers can count injected links separately.

Two conventions keep the metrics finite and bounded on partitioned graphs:

- The local clustering of a node with degree < 2 is 0, and such nodes are
  included in the graph-level average, so the clustering coefficient stays
  in [0, 1] no matter how sparse the graph is.
- Distances are unweighted hop counts, and an unreachable pair enters the
  characteristic path length with the penalty value ``node_count``. The
  penalty exceeds every achievable hop count (at most ``node_count - 1``),
  so reconnecting components always strictly lowers the path length.

All functions here are pure: they never mutate their inputs and identical
graphs always produce identical results, so they are safe to call from any
number of threads.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Union


class EdgeKind(enum.Enum):
    ADHOC = "adhoc"
    BYPASS = "bypass"


class _Unreachable:
    """Sentinel marking node pairs with no connecting path."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "UNREACHABLE"


UNREACHABLE = _Unreachable()

Distance = Union[int, _Unreachable]

Pair = tuple[int, int]


def normalize_pair(u: int, v: int) -> Pair:
    """Order an unordered node pair as (min, max)."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``edges`` maps (u, v) with u < v to its kind."""

    node_count: int
    edges: dict[Pair, EdgeKind] = field(default_factory=dict)

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError(f"node_count must be positive, got {self.node_count}")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.node_count} nodes")

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        adhoc: Iterable[Pair] = (),
        bypass: Iterable[Pair] = (),
    ) -> "Graph":
        """Build a graph from unordered pair iterables, rejecting duplicates."""
        edges: dict[Pair, EdgeKind] = {}
        for kind, pairs in ((EdgeKind.ADHOC, adhoc), (EdgeKind.BYPASS, bypass)):
            for u, v in pairs:
                key = normalize_pair(u, v)
                if key in edges:
                    raise ValueError(f"duplicate edge {key}")
                edges[key] = kind
        return cls(node_count, edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_pair(u, v) in self.edges


@dataclass(frozen=True)
class MetricsReport:
    """Small-world metrics of one graph.

    ``gamma`` is the clustering coefficient in [0, 1]; ``L`` the
    characteristic path length under the unreachable-pair penalty policy,
    so 1 <= L <= node_count whenever node_count >= 2.
    """

    gamma: float
    L: float
    component_count: int
    connected_pair_ratio: float
    node_count: int
    edge_count: int


def _adjacency_sets(g: Graph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.node_count)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def connected_components(g: Graph) -> list[set[int]]:
    """Partition the nodes into connected components.

    Both edge kinds are traversable. Components are returned sorted by
    their smallest member, so the result is deterministic.
    """
    adj = _adjacency_sets(g)
    seen = [False] * g.node_count
    components: list[set[int]] = []
    for start in range(g.node_count):
        if seen[start]:
            continue
        comp = {start}
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        components.append(comp)
    return components


def _local_clustering(adj: list[set[int]], v: int) -> float:
    neighbors = sorted(adj[v])
    degree = len(neighbors)
    if degree < 2:
        return 0.0
    links = 0
    for i in range(degree):
        for j in range(i + 1, degree):
            if neighbors[j] in adj[neighbors[i]]:
                links += 1
    return links / (degree * (degree - 1) // 2)


def local_clustering(g: Graph, v: int) -> float:
    """Fraction of v's neighbor pairs that are themselves adjacent.

    Returns 0.0 for nodes of degree < 2.
    """
    if not 0 <= v < g.node_count:
        raise IndexError(f"node {v} out of range for {g.node_count} nodes")
    return _local_clustering(_adjacency_sets(g), v)


def clustering_coefficient(g: Graph) -> float:
    """Mean local clustering over all nodes (degree-<2 nodes contribute 0)."""
    adj = _adjacency_sets(g)
    return sum(_local_clustering(adj, v) for v in range(g.node_count)) / g.node_count


def all_pairs_distances(g: Graph) -> list[list[Distance]]:
    """Hop-count distance matrix via breadth-first search from every node.

    Unreachable pairs hold the UNREACHABLE sentinel rather than a number.
    """
    adj = _adjacency_sets(g)
    n = g.node_count
    matrix: list[list[Distance]] = []
    for source in range(n):
        dist: list[Distance] = [UNREACHABLE] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] is UNREACHABLE:
                    dist[v] = dist[u] + 1  # type: ignore[operator]
                    queue.append(v)
        matrix.append(dist)
    return matrix


def characteristic_path_length(g: Graph) -> float:
    """Mean hop distance over all unordered node pairs.

    An unreachable pair contributes the penalty distance ``node_count``.
    Requires at least two nodes.
    """
    n = g.node_count
    if n < 2:
        raise ValueError("characteristic path length is undefined for fewer than 2 nodes")
    matrix = all_pairs_distances(g)
    total = 0
    for u in range(n):
        row = matrix[u]
        for v in range(u + 1, n):
            d = row[v]
            total += n if d is UNREACHABLE else d
    return total / (n * (n - 1) // 2)


def metrics(g: Graph) -> MetricsReport:
    """Bundle clustering, path length, and connectivity into one report."""
    n = g.node_count
    if n < 2:
        raise ValueError("metrics require at least 2 nodes")
    components = connected_components(g)
    reachable_pairs = sum(len(c) * (len(c) - 1) // 2 for c in components)
    total_pairs = n * (n - 1) // 2
    return MetricsReport(
        gamma=clustering_coefficient(g),
        L=characteristic_path_length(g),
        component_count=len(components),
        connected_pair_ratio=reachable_pairs / total_pairs,
        node_count=n,
        edge_count=g.edge_count,
    )
