"""Generational and steady-state genetic algorithms over bypass genomes.

Both variants share tournament selection, a choice of 2-point or
uniform crossover, independent bit-flip mutation, and an evaluation
budget counted per fitness call (the random initial population is
charged too).  The generational step rebuilds the population around
elitism_count protected survivors at population_size − elitism_count
evaluations per step; the steady-state step costs exactly 2, inserting
the better child over the current worst only on strict improvement.

Best-so-far is sampled every population_size evaluations so traces
from both variants land on shared x-coordinates, plus one final entry
at the exact budget actually spent.  All randomness flows from one
numpy Generator seeded by the config, making runs reproducible.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateScenarioError
from .fitness import FitnessValue, FitnessWeights, ScenarioEvaluator
from .scenario import Scenario

__all__ = [
    "CrossoverKind",
    "GaConfig",
    "GaVariant",
    "Population",
    "RunResult",
    "bit_flip_mutation",
    "generational_step",
    "parse_crossover",
    "parse_variant",
    "run",
    "steady_state_step",
    "tournament_select",
    "two_point_crossover",
    "uniform_crossover",
]


class GaVariant(enum.Enum):
    GENERATIONAL = "generational"
    STEADY_STATE = "steady_state"


class CrossoverKind(enum.Enum):
    TWO_POINT = "two_point"
    UNIFORM = "uniform"


_VARIANT_TOKENS = {
    "gen": GaVariant.GENERATIONAL,
    "generational": GaVariant.GENERATIONAL,
    "ss": GaVariant.STEADY_STATE,
    "steady_state": GaVariant.STEADY_STATE,
}

_CROSSOVER_TOKENS = {
    "2point": CrossoverKind.TWO_POINT,
    "two_point": CrossoverKind.TWO_POINT,
    "uniform": CrossoverKind.UNIFORM,
}


def parse_variant(token: str) -> GaVariant:
    try:
        return _VARIANT_TOKENS[token]
    except KeyError:
        raise ValueError(f"unknown variant {token!r}, expected gen or ss") from None


def parse_crossover(token: str) -> CrossoverKind:
    try:
        return _CROSSOVER_TOKENS[token]
    except KeyError:
        raise ValueError(f"unknown crossover {token!r}, expected 2point or uniform") from None


@dataclass(frozen=True)
class GaConfig:
    variant: GaVariant
    crossover: CrossoverKind
    population_size: int = 100
    crossover_probability: float = 0.9
    mutation_rate: Optional[float] = None  # None resolves to 1/genome_length at run start
    tournament_size: int = 2
    max_evaluations: int = 10000
    elitism_count: int = 1
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population_size <= 0 or self.population_size % 2:
            raise ValueError("population_size must be a positive even integer")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ValueError("crossover_probability must lie in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ValueError("tournament_size must lie in [1, population_size]")
        if not 0 <= self.elitism_count < self.population_size:
            raise ValueError("elitism_count must lie in [0, population_size)")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must cover the initial population")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class RunResult:
    best_genome: np.ndarray
    best_fitness: FitnessValue
    trace: tuple[tuple[int, float], ...]
    evaluations_used: int


def two_point_crossover(
    p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Swap the segment [c1, c2) between the parents."""
    if len(p1) != len(p2):
        raise ValueError("parent length mismatch")
    c1, c2 = sorted(rng.integers(0, len(p1) + 1, size=2))
    a, b = p1.copy(), p2.copy()
    a[c1:c2], b[c1:c2] = p2[c1:c2], p1[c1:c2]
    return a, b


def uniform_crossover(
    p1: np.ndarray, p2: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Exchange bits positionwise where a fair coin lands 1."""
    if len(p1) != len(p2):
        raise ValueError("parent length mismatch")
    mask = rng.integers(0, 2, size=len(p1), dtype=np.uint8).astype(bool)
    a, b = p1.copy(), p2.copy()
    a[mask], b[mask] = p2[mask], p1[mask]
    return a, b


def bit_flip_mutation(g: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must lie in [0, 1]")
    flips = rng.random(len(g)) < rate
    out = g.copy()
    out[flips] ^= 1
    return out


def tournament_select(scalars, k: int, rng: np.random.Generator) -> int:
    """Best of k uniform draws with replacement; ties go to the lowest index."""
    size = len(scalars)
    if size == 0:
        raise ValueError("empty population")
    if not 1 <= k <= size:
        raise ValueError("tournament size must lie in [1, population size]")
    best = int(rng.integers(0, size))
    for _ in range(k - 1):
        i = int(rng.integers(0, size))
        if scalars[i] > scalars[best] or (scalars[i] == scalars[best] and i < best):
            best = i
    return best


class Population:
    """Flat genome matrix plus per-row fitness, mutated by the GA steps."""

    def __init__(self, bits: np.ndarray, values: list[FitnessValue]):
        if bits.shape[0] != len(values):
            raise ValueError("row count mismatch")
        self.bits = bits
        self.values = values
        self.scalars = np.array([v.scalar for v in values], dtype=np.float64)

    def __len__(self) -> int:
        return self.bits.shape[0]

    def best_index(self) -> int:
        return int(np.argmax(self.scalars))

    def worst_index(self) -> int:
        return int(np.argmin(self.scalars))

    def replace(self, index: int, bits: np.ndarray, value: FitnessValue) -> None:
        self.bits[index] = bits
        self.values[index] = value
        self.scalars[index] = value.scalar


_CROSSOVER_FN = {
    CrossoverKind.TWO_POINT: two_point_crossover,
    CrossoverKind.UNIFORM: uniform_crossover,
}


def _make_children(
    pop: Population,
    config: GaConfig,
    mutation_rate: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    i = tournament_select(pop.scalars, config.tournament_size, rng)
    j = tournament_select(pop.scalars, config.tournament_size, rng)
    p1, p2 = pop.bits[i], pop.bits[j]
    if rng.random() < config.crossover_probability:
        c1, c2 = _CROSSOVER_FN[config.crossover](p1, p2, rng)
    else:
        c1, c2 = p1.copy(), p2.copy()
    return (
        bit_flip_mutation(c1, mutation_rate, rng),
        bit_flip_mutation(c2, mutation_rate, rng),
    )


def generational_step(
    pop: Population,
    config: GaConfig,
    evaluate_fn: Callable[[np.ndarray], FitnessValue],
    rng: np.random.Generator,
    mutation_rate: float,
) -> Population:
    """Elites survive untouched; tournament offspring fill the rest.

    Costs population_size − elitism_count evaluations.  When that fill
    count is odd the last pair's second child is dropped unevaluated.
    """
    size = len(pop)
    elite = sorted(range(size), key=lambda i: (-pop.scalars[i], i))[: config.elitism_count]
    new_bits = np.empty_like(pop.bits)
    new_values: list[FitnessValue] = []
    for slot, i in enumerate(elite):
        new_bits[slot] = pop.bits[i]
        new_values.append(pop.values[i])
    filled = config.elitism_count
    while filled < size:
        c1, c2 = _make_children(pop, config, mutation_rate, rng)
        new_bits[filled] = c1
        new_values.append(evaluate_fn(c1))
        filled += 1
        if filled < size:
            new_bits[filled] = c2
            new_values.append(evaluate_fn(c2))
            filled += 1
    return Population(new_bits, new_values)


def steady_state_step(
    pop: Population,
    config: GaConfig,
    evaluate_fn: Callable[[np.ndarray], FitnessValue],
    rng: np.random.Generator,
    mutation_rate: float,
) -> None:
    """Evaluate two offspring; the better one ousts the worst resident
    only if strictly fitter.  Always costs exactly 2 evaluations."""
    c1, c2 = _make_children(pop, config, mutation_rate, rng)
    v1 = evaluate_fn(c1)
    v2 = evaluate_fn(c2)
    child, value = (c1, v1) if v1.scalar >= v2.scalar else (c2, v2)
    worst = pop.worst_index()
    if value.scalar > pop.scalars[worst]:
        pop.replace(worst, child, value)


class _BudgetTracker:
    """Counts evaluations, keeps the strict best, snapshots the trace."""

    def __init__(self, evaluator: ScenarioEvaluator, checkpoint_every: int):
        self._evaluator = evaluator
        self._every = checkpoint_every
        self.count = 0
        self.best_bits: Optional[np.ndarray] = None
        self.best_value: Optional[FitnessValue] = None
        self.trace: list[tuple[int, float]] = []

    def evaluate(self, bits: np.ndarray) -> FitnessValue:
        value = self._evaluator.evaluate(bits)
        self.count += 1
        if self.best_value is None or value.scalar > self.best_value.scalar:
            self.best_bits = bits.copy()
            self.best_value = value
        if self.count % self._every == 0:
            self.trace.append((self.count, self.best_value.scalar))
        return value

    def finish(self) -> None:
        if not self.trace or self.trace[-1][0] != self.count:
            self.trace.append((self.count, self.best_value.scalar))


def _step_cost(config: GaConfig) -> int:
    if config.variant is GaVariant.GENERATIONAL:
        return config.population_size - config.elitism_count
    return 2


def run(config: GaConfig, scenario: Scenario) -> RunResult:
    """Evolve one population on one scenario until the budget runs out."""
    length = scenario.genome_length
    if length == 0:
        raise DegenerateScenarioError(
            "scenario has no candidate pairs, nothing to optimize"
        )
    mutation_rate = (
        config.mutation_rate if config.mutation_rate is not None else 1.0 / length
    )
    evaluator = ScenarioEvaluator(scenario, config.weights)
    tracker = _BudgetTracker(evaluator, checkpoint_every=config.population_size)
    rng = np.random.default_rng(config.seed)

    bits = rng.integers(0, 2, size=(config.population_size, length), dtype=np.uint8)
    pop = Population(bits, [tracker.evaluate(bits[i]) for i in range(len(bits))])

    cost = _step_cost(config)
    while tracker.count + cost <= config.max_evaluations:
        if config.variant is GaVariant.GENERATIONAL:
            pop = generational_step(pop, config, tracker.evaluate, rng, mutation_rate)
        else:
            steady_state_step(pop, config, tracker.evaluate, rng, mutation_rate)

    tracker.finish()
    return RunResult(
        best_genome=tracker.best_bits,
        best_fitness=tracker.best_value,
        trace=tuple(tracker.trace),
        evaluations_used=tracker.count,
    )
