"""Hand-built scenario construction shared by the test modules."""
import math

from injectnet.graph import Graph
from injectnet.scenario import CandidatePolicy, Scenario, ScenarioParams, candidate_pairs


def hand_scenario(positions, radio_range, partition_count, policy=CandidatePolicy.ALL_NON_ADJACENT):
    n = len(positions)
    edges = frozenset(
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if math.sqrt(
            (positions[u][0] - positions[v][0]) ** 2
            + (positions[u][1] - positions[v][1]) ** 2
        )
        <= radio_range
    )
    params = ScenarioParams(
        node_count=n,
        partition_count=partition_count,
        radio_range=radio_range,
        area_side=1.0,
        cluster_radius=0.05,
        seed=0,
    )
    g = Graph.from_edges(n, adhoc=edges)
    return Scenario(
        params=params,
        positions=tuple(positions),
        adhoc_edges=edges,
        policy=policy,
        candidate_pairs=candidate_pairs(g, policy),
    )


def two_islands_scenario():
    # two radio-disjoint pairs; candidates (0,2) (0,3) (1,2) (1,3)
    return hand_scenario(
        [(0.1, 0.1), (0.2, 0.1), (0.8, 0.8), (0.9, 0.8)],
        radio_range=0.2,
        partition_count=2,
    )
