"""Genome decoding and fitness evaluation.

A genome is a fixed-length bit vector over a scenario's candidate pair
list: bit i set means candidate_pairs[i] is injected as a bypass edge.
Fitness blends three normalized terms into one scalar,

    scalar = w_gamma * gamma + w_L * (1 - L_norm) + w_B * (1 - B / length)

where gamma is the clustering coefficient of the decoded graph, L_norm
is (L - 1) / (n - 1) clamped to [0, 1] with L the characteristic path
length under the d_pen = n penalty, and B is the number of injected
links.  A zero-length genome fixes the bypass term at 1.

Two evaluation routes are provided.  ``evaluate`` goes through the
Graph metrics directly and serves as the readable reference.
``ScenarioEvaluator`` packs the adjacency into 64-bit rows once and
runs a compiled kernel per genome: clustering from popcounts of
neighborhood intersections, path lengths from level-synchronous BFS
over the bitset rows.  Both routes perform the same integer divisions
in the same order, so they agree to the last bit, not just to
tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import Graph, clustering_coefficient, characteristic_path_length
from .scenario import Scenario

__all__ = [
    "FitnessWeights",
    "FitnessValue",
    "ScenarioEvaluator",
    "decode",
    "evaluate",
    "genome_from_string",
    "genome_to_string",
]

_U1 = np.uint64(1)


@dataclass(frozen=True)
class FitnessWeights:
    w_gamma: float = 0.4
    w_L: float = 0.4
    w_B: float = 0.2

    def __post_init__(self) -> None:
        for name in ("w_gamma", "w_L", "w_B"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        total = self.w_gamma + self.w_L + self.w_B
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class FitnessValue:
    """Scalar objective plus the components it was blended from."""

    scalar: float
    gamma: float
    L_norm: float
    bypass_count: int


def genome_to_string(bits: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in bits)


def genome_from_string(text: str) -> np.ndarray:
    if not all(c in "01" for c in text):
        raise ValueError("genome string may contain only 0 and 1")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


def _check_length(bits: np.ndarray, scenario: Scenario) -> None:
    if len(bits) != scenario.genome_length:
        raise ValueError(
            f"genome length {len(bits)} != candidate count {scenario.genome_length}"
        )


def decode(bits: np.ndarray, scenario: Scenario) -> Graph:
    """Ad hoc graph plus one bypass edge per set bit."""
    _check_length(bits, scenario)
    injected = [scenario.candidate_pairs[i] for i in range(len(bits)) if bits[i]]
    return Graph.from_edges(
        scenario.params.node_count,
        adhoc=scenario.adhoc_edges,
        bypass=injected,
    )


def _blend(
    weights: FitnessWeights, gamma: float, L: float, bypass: int, length: int, n: int
) -> FitnessValue:
    l_norm = (L - 1.0) / (n - 1.0)
    l_norm = min(1.0, max(0.0, l_norm))
    b_term = 1.0 - bypass / length if length > 0 else 1.0
    scalar = weights.w_gamma * gamma + weights.w_L * (1.0 - l_norm) + weights.w_B * b_term
    return FitnessValue(scalar=scalar, gamma=gamma, L_norm=l_norm, bypass_count=bypass)


def evaluate(
    bits: np.ndarray, scenario: Scenario, weights: FitnessWeights = FitnessWeights()
) -> FitnessValue:
    """Reference route: decode, then run the Graph metrics."""
    n = scenario.params.node_count
    if n < 2:
        raise ValueError("fitness needs at least 2 nodes")
    g = decode(bits, scenario)
    gamma = clustering_coefficient(g)
    L = characteristic_path_length(g)
    return _blend(weights, gamma, L, int(np.count_nonzero(bits)), len(bits), n)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _eval_kernel(base, n, cand_u, cand_v, bits):
    words = base.shape[1]
    adj = base.copy()
    bypass = 0
    for i in range(bits.size):
        if bits[i]:
            bypass += 1
            u = cand_u[i]
            v = cand_v[i]
            adj[u, v >> 6] |= _U1 << np.uint64(v & 63)
            adj[v, u >> 6] |= _U1 << np.uint64(u & 63)

    # gamma: each neighbor u of v contributes |N(u) & N(v)|, which double
    # counts the links inside N(v); same summation order as the reference
    gamma_sum = 0.0
    for v in range(n):
        deg = 0
        for w in range(words):
            deg += _popcount(adj[v, w])
        if deg < 2:
            continue
        twice_links = 0
        for u in range(n):
            if (adj[v, u >> 6] >> np.uint64(u & 63)) & _U1:
                for w in range(words):
                    twice_links += _popcount(adj[u, w] & adj[v, w])
        gamma_sum += (twice_links // 2) / (deg * (deg - 1) // 2)
    gamma = gamma_sum / n

    # L: level-synchronous BFS from every source; frontier expansion is a
    # row OR per member, unreachable pairs cost n hops each
    visited = np.empty(words, np.uint64)
    frontier = np.empty(words, np.uint64)
    nxt = np.empty(words, np.uint64)
    total = 0
    for s in range(n):
        for w in range(words):
            visited[w] = np.uint64(0)
            frontier[w] = np.uint64(0)
        visited[s >> 6] = _U1 << np.uint64(s & 63)
        frontier[s >> 6] = visited[s >> 6]
        reached = 1
        level = 0
        while True:
            level += 1
            for w in range(words):
                nxt[w] = np.uint64(0)
            for w in range(words):
                word = frontier[w]
                while word:
                    lsb = word & (np.uint64(0) - word)
                    u = (w << 6) + _popcount(lsb - _U1)
                    word ^= lsb
                    for k in range(words):
                        nxt[k] |= adj[u, k]
            new_count = 0
            for w in range(words):
                nxt[w] &= ~visited[w]
                new_count += _popcount(nxt[w])
                visited[w] |= nxt[w]
            if new_count == 0:
                break
            total += level * new_count
            reached += new_count
            for w in range(words):
                frontier[w] = nxt[w]
        # ordered total is exactly twice the unordered one, and IEEE
        # division gives (2a)/(2b) == a/b, so L matches the reference
        total += (n - reached) * n
    L = total / (n * (n - 1))
    return gamma, L, bypass


class ScenarioEvaluator:
    """Packs a scenario once, then evaluates genomes on the fast kernel."""

    def __init__(self, scenario: Scenario, weights: FitnessWeights = FitnessWeights()):
        n = scenario.params.node_count
        if n < 2:
            raise ValueError("fitness needs at least 2 nodes")
        self.scenario = scenario
        self.weights = weights
        self.node_count = n
        self.genome_length = scenario.genome_length
        words = (n + 63) // 64
        base = np.zeros((n, words), np.uint64)
        for u, v in scenario.adhoc_edges:
            base[u, v >> 6] |= _U1 << np.uint64(v & 63)
            base[v, u >> 6] |= _U1 << np.uint64(u & 63)
        self._base = base
        self._cand_u = np.array([p[0] for p in scenario.candidate_pairs], np.int64)
        self._cand_v = np.array([p[1] for p in scenario.candidate_pairs], np.int64)

    def evaluate(self, bits: np.ndarray) -> FitnessValue:
        if len(bits) != self.genome_length:
            raise ValueError(
                f"genome length {len(bits)} != candidate count {self.genome_length}"
            )
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        gamma, L, bypass = _eval_kernel(
            self._base, self.node_count, self._cand_u, self._cand_v, arr
        )
        return _blend(self.weights, gamma, L, int(bypass), self.genome_length, self.node_count)
