"""Partitioned unit-disk network snapshots and the candidate bypass pairs.

A scenario is a static snapshot of an ad hoc network: node positions in a
square area, the unit-disk radio edges (nodes are linked iff their Euclidean
distance is at most the radio range), and the ordered list of non-adjacent
node pairs where a bypass link may be injected. The candidate list defines
the genome index space for the optimizer, so its order must be stable:
lexicographic by (min endpoint, max endpoint).

Partitions are realized geometrically: nodes are assigned round-robin to
``partition_count`` cluster disks. With ``cluster_radius < radio_range / 2``
every cluster is internally connected (any two members are within
``2 * cluster_radius``), and cluster centers are kept further apart than
``radio_range + 2 * cluster_radius`` so no radio link can cross clusters,
which pins the component count exactly.

Single-partition scenarios are exempt from the ``cluster_radius`` bound:
with one cluster there is no separation constraint, and a radius that small
would make the snapshot a complete graph with an empty candidate list.
Larger radii are allowed instead, and the generator simply resamples until
the snapshot is connected.

Placement is seeded and deterministic: attempt ``a`` for seed ``s`` draws
from ``SeedSequence(s, spawn_key=(a,))``, so a failed placement moves to the
next derived sub-seed rather than consuming the primary stream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from injectnet.errors import (
    InfeasibleGeometryError,
    ScenarioFormatError,
    ScenarioVersionError,
)
from injectnet.graph import Graph, Pair, connected_components

SCENARIO_FORMAT_VERSION = "v1"

# Placement retry budgets. The outer budget bounds whole-snapshot resamples
# (component count wrong); the inner one bounds rejection draws per center.
PLACEMENT_ATTEMPTS = 1000
CENTER_DRAWS = 200


class CandidatePolicy(enum.Enum):
    """Which non-adjacent pairs are eligible for bypass injection."""

    ALL_NON_ADJACENT = "ALL"
    INTER_PARTITION_ONLY = "INTER"


@dataclass(frozen=True)
class ScenarioParams:
    """Generator inputs; lengths share one unit with ``area_side``."""

    node_count: int
    partition_count: int
    radio_range: float
    area_side: float
    cluster_radius: float
    seed: int

    def validate(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be positive, got {self.node_count}")
        if not 1 <= self.partition_count <= self.node_count:
            raise ValueError(
                f"partition_count must be in [1, {self.node_count}], got {self.partition_count}"
            )
        if self.radio_range <= 0 or self.area_side <= 0 or self.cluster_radius <= 0:
            raise ValueError("radio_range, area_side and cluster_radius must be positive")
        if 2 * self.cluster_radius > self.area_side:
            raise ValueError("cluster disk does not fit inside the area")
        if self.partition_count >= 2 and self.cluster_radius >= self.radio_range / 2:
            raise ValueError(
                "cluster_radius must stay below radio_range / 2 so each cluster is "
                "internally connected"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Scenario:
    """A generated (or loaded) snapshot plus its genome index space."""

    params: ScenarioParams
    positions: tuple[tuple[float, float], ...]
    adhoc_edges: frozenset[Pair]
    policy: CandidatePolicy
    candidate_pairs: tuple[Pair, ...]

    def adhoc_graph(self) -> Graph:
        return Graph.from_edges(self.params.node_count, adhoc=self.adhoc_edges)

    @property
    def genome_length(self) -> int:
        return len(self.candidate_pairs)


def _within_range(pos: Sequence[tuple[float, float]], u: int, v: int, radio_range: float) -> bool:
    # The one unit-disk rule used everywhere (generation, load validation):
    # plain Euclidean distance compared inclusively against the range.
    dx = pos[u][0] - pos[v][0]
    dy = pos[u][1] - pos[v][1]
    return math.sqrt(dx * dx + dy * dy) <= radio_range


def _unit_disk_edges(pos: Sequence[tuple[float, float]], radio_range: float) -> list[Pair]:
    n = len(pos)
    return [(u, v) for u in range(n) for v in range(u + 1, n) if _within_range(pos, u, v, radio_range)]


def _place_centers(p: ScenarioParams, rng: np.random.Generator) -> list[tuple[float, float]] | None:
    low = p.cluster_radius
    high = p.area_side - p.cluster_radius
    min_sep = p.radio_range + 2 * p.cluster_radius
    centers: list[tuple[float, float]] = []
    for _ in range(p.partition_count):
        for _ in range(CENTER_DRAWS):
            x, y = rng.uniform(low, high, size=2)
            if all(math.sqrt((x - cx) ** 2 + (y - cy) ** 2) > min_sep for cx, cy in centers):
                centers.append((float(x), float(y)))
                break
        else:
            return None
    return centers


def _place_nodes(
    p: ScenarioParams, centers: Sequence[tuple[float, float]], rng: np.random.Generator
) -> tuple[tuple[float, float], ...]:
    # Round-robin cluster assignment; uniform position inside the cluster disk.
    radii = p.cluster_radius * np.sqrt(rng.random(p.node_count))
    angles = 2.0 * math.pi * rng.random(p.node_count)
    positions = []
    for i in range(p.node_count):
        cx, cy = centers[i % p.partition_count]
        positions.append(
            (float(cx + radii[i] * math.cos(angles[i])), float(cy + radii[i] * math.sin(angles[i])))
        )
    return tuple(positions)


def candidate_pairs(g: Graph, policy: CandidatePolicy) -> tuple[Pair, ...]:
    """Enumerate injectable pairs in lexicographic order.

    ALL_NON_ADJACENT lists every non-adjacent pair; INTER_PARTITION_ONLY
    keeps only pairs whose endpoints lie in different components of ``g``.
    """
    if policy is CandidatePolicy.INTER_PARTITION_ONLY:
        component_of = [0] * g.node_count
        for index, comp in enumerate(connected_components(g)):
            for node in comp:
                component_of[node] = index
    pairs = []
    for u in range(g.node_count):
        for v in range(u + 1, g.node_count):
            if g.has_edge(u, v):
                continue
            if policy is CandidatePolicy.INTER_PARTITION_ONLY and component_of[u] == component_of[v]:
                continue
            pairs.append((u, v))
    return tuple(pairs)


def generate_scenario(
    params: ScenarioParams,
    policy: CandidatePolicy = CandidatePolicy.ALL_NON_ADJACENT,
) -> Scenario:
    """Generate a snapshot with exactly ``params.partition_count`` components.

    Deterministic for fixed (params, policy). Raises InfeasibleGeometryError
    when no attempt within the placement budget realizes the partition count.
    """
    params.validate()
    for attempt in range(PLACEMENT_ATTEMPTS):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(params.seed, spawn_key=(attempt,))))
        centers = _place_centers(params, rng)
        if centers is None:
            continue
        positions = _place_nodes(params, centers, rng)
        edges = _unit_disk_edges(positions, params.radio_range)
        graph = Graph.from_edges(params.node_count, adhoc=edges)
        if len(connected_components(graph)) != params.partition_count:
            continue
        return Scenario(
            params=params,
            positions=positions,
            adhoc_edges=frozenset(edges),
            policy=policy,
            candidate_pairs=candidate_pairs(graph, policy),
        )
    raise InfeasibleGeometryError(
        f"could not place {params.partition_count} partitions of {params.node_count} nodes "
        f"within {PLACEMENT_ATTEMPTS} attempts ({CENTER_DRAWS} center draws each)"
    )


# -- scenario file format -----------------------------------------------------
#
#   injection-scenario v1
#   nodes <n> partitions <k> range <r> side <s> cluster_radius <rho> seed <z>
#   node <id> <x> <y>          (n lines, ids ascending from 0)
#   edges <m>
#   edge <u> <v>               (m lines, u < v, lexicographic)
#   policy <ALL|INTER>
#
# Reals are printed with 17 significant digits so they round-trip bit-exactly.


def _fmt(x: float) -> str:
    return format(x, ".17g")


def save_scenario(scenario: Scenario, path) -> None:
    """Write the line-oriented scenario file (bit-exact round trip)."""
    p = scenario.params
    lines = [
        f"injection-scenario {SCENARIO_FORMAT_VERSION}",
        f"nodes {p.node_count} partitions {p.partition_count} range {_fmt(p.radio_range)} "
        f"side {_fmt(p.area_side)} cluster_radius {_fmt(p.cluster_radius)} seed {p.seed}",
    ]
    for i, (x, y) in enumerate(scenario.positions):
        lines.append(f"node {i} {_fmt(x)} {_fmt(y)}")
    edges = sorted(scenario.adhoc_edges)
    lines.append(f"edges {len(edges)}")
    lines.extend(f"edge {u} {v}" for u, v in edges)
    lines.append(f"policy {scenario.policy.value}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


class _LineReader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.index = 0

    @property
    def line_no(self) -> int:
        return self.index

    def next(self, what: str) -> str:
        if self.index >= len(self.lines):
            raise ScenarioFormatError(len(self.lines) + 1, f"unexpected end of file, expected {what}")
        self.index += 1
        return self.lines[self.index - 1]

    def done(self) -> bool:
        return self.index >= len(self.lines)


def _parse_int(reader: _LineReader, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScenarioFormatError(reader.line_no, f"bad {what}: {token!r}") from None


def _parse_float(reader: _LineReader, token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ScenarioFormatError(reader.line_no, f"bad {what}: {token!r}") from None


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file; candidate pairs are recomputed."""
    with open(path, "r", encoding="ascii") as fh:
        reader = _LineReader(fh.read())

    header = reader.next("header").split()
    if len(header) != 2 or header[0] != "injection-scenario":
        raise ScenarioFormatError(reader.line_no, "missing 'injection-scenario <version>' header")
    if header[1] != SCENARIO_FORMAT_VERSION:
        raise ScenarioVersionError(
            reader.line_no,
            f"unsupported version {header[1]!r}, expected {SCENARIO_FORMAT_VERSION!r}",
        )

    fields = reader.next("params line").split()
    expected_keys = ["nodes", "partitions", "range", "side", "cluster_radius", "seed"]
    if len(fields) != 12 or fields[0::2] != expected_keys:
        raise ScenarioFormatError(reader.line_no, "params line must list " + " ".join(expected_keys))
    params = ScenarioParams(
        node_count=_parse_int(reader, fields[1], "nodes"),
        partition_count=_parse_int(reader, fields[3], "partitions"),
        radio_range=_parse_float(reader, fields[5], "range"),
        area_side=_parse_float(reader, fields[7], "side"),
        cluster_radius=_parse_float(reader, fields[9], "cluster_radius"),
        seed=_parse_int(reader, fields[11], "seed"),
    )
    try:
        params.validate()
    except ValueError as exc:
        raise ScenarioFormatError(reader.line_no, str(exc)) from None

    positions = []
    for i in range(params.node_count):
        parts = reader.next(f"node line {i}").split()
        if len(parts) != 4 or parts[0] != "node":
            raise ScenarioFormatError(reader.line_no, f"expected 'node {i} <x> <y>'")
        if _parse_int(reader, parts[1], "node id") != i:
            raise ScenarioFormatError(reader.line_no, f"node ids must ascend from 0, expected {i}")
        positions.append(
            (_parse_float(reader, parts[2], "x"), _parse_float(reader, parts[3], "y"))
        )

    count_parts = reader.next("edge count").split()
    if len(count_parts) != 2 or count_parts[0] != "edges":
        raise ScenarioFormatError(reader.line_no, "expected 'edges <m>'")
    edge_count = _parse_int(reader, count_parts[1], "edge count")
    edges: list[Pair] = []
    seen: set[Pair] = set()
    edges_header_line = reader.line_no
    for _ in range(edge_count):
        parts = reader.next("edge line").split()
        if len(parts) != 3 or parts[0] != "edge":
            raise ScenarioFormatError(reader.line_no, "expected 'edge <u> <v>'")
        u = _parse_int(reader, parts[1], "endpoint")
        v = _parse_int(reader, parts[2], "endpoint")
        if not 0 <= u < v < params.node_count:
            raise ScenarioFormatError(
                reader.line_no, f"edge ({u}, {v}) needs 0 <= u < v < {params.node_count}"
            )
        if (u, v) in seen:
            raise ScenarioFormatError(reader.line_no, f"duplicate edge ({u}, {v})")
        if not _within_range(positions, u, v, params.radio_range):
            raise ScenarioFormatError(
                reader.line_no, f"edge ({u}, {v}) exceeds the radio range for the stored positions"
            )
        seen.add((u, v))
        edges.append((u, v))

    policy_parts = reader.next("policy line").split()
    if len(policy_parts) != 2 or policy_parts[0] != "policy":
        raise ScenarioFormatError(reader.line_no, "expected 'policy <ALL|INTER>'")
    try:
        policy = CandidatePolicy(policy_parts[1])
    except ValueError:
        raise ScenarioFormatError(reader.line_no, f"unknown policy {policy_parts[1]!r}") from None
    if not reader.done():
        raise ScenarioFormatError(reader.line_no + 1, "trailing content after policy line")

    expected_edges = _unit_disk_edges(positions, params.radio_range)
    missing = set(expected_edges) - set(edges)
    if missing:
        raise ScenarioFormatError(
            edges_header_line,
            f"edge list misses in-range pair {sorted(missing)[0]}; unit-disk law violated",
        )

    graph = Graph.from_edges(params.node_count, adhoc=edges)
    components = len(connected_components(graph))
    if components != params.partition_count:
        raise ScenarioFormatError(
            edges_header_line,
            f"graph has {components} components but params declare {params.partition_count}",
        )

    return Scenario(
        params=params,
        positions=tuple(positions),
        adhoc_edges=frozenset(edges),
        policy=policy,
        candidate_pairs=candidate_pairs(graph, policy),
    )
