"""Batch experiment harness: scenario matrix, statistics, CSV and SVG.

An experiment crosses a list of scenario settings with a list of
(variant, crossover) combos and repeats each cell runs_per_combo times
under derived seeds: run r uses base_seed + r, and a scenario line with
seed ``auto`` gets base_seed + 1_000_000 + its position, keeping every
artifact reproducible from one integer.  One snapshot is generated per
scenario setting and shared by all combos so the cells compete on the
same topology.

Default settings are three snapshots at 30/5, 42/3 and 70/1
(nodes/partitions).  The single-partition snapshot uses a wider cluster
disk (0.13 instead of 0.05): one tight cluster would be a complete
graph with an empty candidate list, leaving nothing to optimize.  The
harness budget default is 40000 evaluations per run, four times the
single-run optimizer default, so every cell converges far enough for
the final rankings to be stable across repeat seeds.

Per cell the report keeps mean, population std, min and max of the
final best scalars, plus the mean clustering coefficient, mean path
length and mean bypass count of the best solutions, recomputed from the
decoded graphs through the plain metrics route rather than read back
from the optimizer.  Mean convergence curves are pointwise means over
the aligned per-run traces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import ExperimentConfigError
from .fitness import FitnessWeights, decode
from .ga import CrossoverKind, GaConfig, GaVariant, parse_crossover, parse_variant, run
from .graph import metrics
from .scenario import CandidatePolicy, Scenario, ScenarioParams, generate_scenario

__all__ = [
    "ComboStats",
    "DEFAULT_COMBOS",
    "ExperimentConfig",
    "ExperimentReport",
    "default_scenarios",
    "emit_convergence_svg",
    "emit_csv",
    "parse_experiment_config",
    "rank_combos",
    "run_experiment",
    "scenario_label",
]

EXPERIMENT_FORMAT_VERSION = "v1"

AUTO_SEED_OFFSET = 1_000_000

DEFAULT_COMBOS: tuple[tuple[GaVariant, CrossoverKind], ...] = (
    (GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT),
    (GaVariant.GENERATIONAL, CrossoverKind.UNIFORM),
    (GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT),
    (GaVariant.STEADY_STATE, CrossoverKind.UNIFORM),
)

_DEFAULT_SETTINGS = (
    (30, 5, 0.15, 1.0, 0.05),
    (42, 3, 0.15, 1.0, 0.05),
    (70, 1, 0.15, 1.0, 0.13),
)


def default_scenarios(base_seed: int) -> tuple[ScenarioParams, ...]:
    return tuple(
        ScenarioParams(
            node_count=n,
            partition_count=k,
            radio_range=r,
            area_side=s,
            cluster_radius=rho,
            seed=base_seed + AUTO_SEED_OFFSET + idx,
        )
        for idx, (n, k, r, s, rho) in enumerate(_DEFAULT_SETTINGS)
    )


def scenario_label(params: ScenarioParams) -> str:
    return f"n{params.node_count}_p{params.partition_count}"


@dataclass(frozen=True)
class ExperimentConfig:
    scenarios: tuple[ScenarioParams, ...]
    combos: tuple[tuple[GaVariant, CrossoverKind], ...] = DEFAULT_COMBOS
    runs_per_combo: int = 30
    population_size: int = 100
    crossover_probability: float = 0.9
    mutation_rate: Optional[float] = None
    tournament_size: int = 2
    max_evaluations: int = 40000
    elitism_count: int = 1
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    policy: CandidatePolicy = CandidatePolicy.ALL_NON_ADJACENT
    base_seed: int = 0
    out_dir: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.runs_per_combo < 1:
            raise ValueError("runs_per_combo must be at least 1")
        if not self.combos:
            raise ValueError("combos must be non-empty")
        if not self.scenarios:
            raise ValueError("scenarios must be non-empty")
        labels = [scenario_label(p) for p in self.scenarios]
        if len(set(labels)) != len(labels):
            raise ValueError("scenario settings must have distinct (nodes, partitions)")
        for params in self.scenarios:
            params.validate()
        self.ga_config(*self.combos[0], seed=self.base_seed)  # fail fast on GA fields

    def ga_config(self, variant: GaVariant, crossover: CrossoverKind, seed: int) -> GaConfig:
        return GaConfig(
            variant=variant,
            crossover=crossover,
            population_size=self.population_size,
            crossover_probability=self.crossover_probability,
            mutation_rate=self.mutation_rate,
            tournament_size=self.tournament_size,
            max_evaluations=self.max_evaluations,
            elitism_count=self.elitism_count,
            weights=self.weights,
            seed=seed,
        )


@dataclass(frozen=True)
class ComboStats:
    scenario: str
    node_count: int
    partition_count: int
    variant: GaVariant
    crossover: CrossoverKind
    runs: int
    mean: float
    std: float
    minimum: float
    maximum: float
    mean_gamma: float
    mean_L: float
    mean_bypass: float
    mean_trace: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class ExperimentReport:
    stats: tuple[ComboStats, ...]

    def for_scenario(self, scenario: str) -> tuple[ComboStats, ...]:
        rows = tuple(s for s in self.stats if s.scenario == scenario)
        if not rows:
            raise KeyError(f"unknown scenario {scenario!r}")
        return rows

    def scenario_labels(self) -> tuple[str, ...]:
        seen: list[str] = []
        for s in self.stats:
            if s.scenario not in seen:
                seen.append(s.scenario)
        return tuple(seen)


def _mean_trace(traces: list[tuple[tuple[int, float], ...]]) -> tuple[tuple[int, float], ...]:
    xs = [e for e, _ in traces[0]]
    for t in traces[1:]:
        if [e for e, _ in t] != xs:
            raise RuntimeError("trace checkpoints diverged between runs of one combo")
    ys = np.mean([[s for _, s in t] for t in traces], axis=0)
    return tuple((x, float(y)) for x, y in zip(xs, ys))


def _combo_stats(
    scenario: Scenario,
    variant: GaVariant,
    crossover: CrossoverKind,
    cfg: ExperimentConfig,
    progress: Optional[Callable[[str], None]],
) -> ComboStats:
    label = scenario_label(scenario.params)
    finals: list[float] = []
    gammas: list[float] = []
    lengths: list[float] = []
    bypasses: list[int] = []
    traces: list[tuple[tuple[int, float], ...]] = []
    for r in range(cfg.runs_per_combo):
        ga = cfg.ga_config(variant, crossover, seed=cfg.base_seed + r)
        try:
            result = run(ga, scenario)
        except Exception as exc:
            raise RuntimeError(
                f"run failed: scenario={label} variant={variant.value} "
                f"crossover={crossover.value} run={r}"
            ) from exc
        finals.append(result.best_fitness.scalar)
        report = metrics(decode(result.best_genome, scenario))
        gammas.append(report.gamma)
        lengths.append(report.L)
        bypasses.append(result.best_fitness.bypass_count)
        traces.append(result.trace)
    if progress is not None:
        progress(f"{label} {variant.value}/{crossover.value}: {cfg.runs_per_combo} runs done")
    arr = np.array(finals)
    return ComboStats(
        scenario=label,
        node_count=scenario.params.node_count,
        partition_count=scenario.params.partition_count,
        variant=variant,
        crossover=crossover,
        runs=cfg.runs_per_combo,
        mean=float(arr.mean()),
        std=float(arr.std()),
        minimum=float(arr.min()),
        maximum=float(arr.max()),
        mean_gamma=float(np.mean(gammas)),
        mean_L=float(np.mean(lengths)),
        mean_bypass=float(np.mean(bypasses)),
        mean_trace=_mean_trace(traces),
    )


def run_experiment(
    cfg: ExperimentConfig, progress: Optional[Callable[[str], None]] = None
) -> ExperimentReport:
    """Run the full matrix sequentially in config order.

    Writes report.csv and one convergence_<scenario>.svg per scenario
    when the config names an output directory.
    """
    stats: list[ComboStats] = []
    for params in cfg.scenarios:
        scenario = generate_scenario(params, cfg.policy)
        for variant, crossover in cfg.combos:
            stats.append(_combo_stats(scenario, variant, crossover, cfg, progress))
    report = ExperimentReport(stats=tuple(stats))
    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv(report, out / "report.csv")
        for label in report.scenario_labels():
            emit_convergence_svg(report, label, out / f"convergence_{label}.svg")
    return report


def rank_combos(report: ExperimentReport, scenario: str) -> list[tuple[GaVariant, CrossoverKind]]:
    """Combos by descending mean; ties fall back to lexicographic names."""
    rows = report.for_scenario(scenario)
    ordered = sorted(rows, key=lambda s: (-s.mean, s.variant.value, s.crossover.value))
    return [(s.variant, s.crossover) for s in ordered]


def emit_csv(report: ExperimentReport, path) -> None:
    lines = ["scenario,nodes,partitions,variant,crossover,runs,mean,std,min,max,mean_gamma,mean_L,mean_bypass"]
    for s in sorted(report.stats, key=lambda s: (s.scenario, s.variant.value, s.crossover.value)):
        lines.append(
            f"{s.scenario},{s.node_count},{s.partition_count},{s.variant.value},"
            f"{s.crossover.value},{s.runs},{s.mean:.6f},{s.std:.6f},{s.minimum:.6f},"
            f"{s.maximum:.6f},{s.mean_gamma:.6f},{s.mean_L:.6f},{s.mean_bypass:.6f}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

_SVG_WIDTH, _SVG_HEIGHT = 720, 420
_ML, _MR, _MT, _MB = 70, 200, 20, 55  # right margin hosts the legend


def _svg_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_convergence_svg(report: ExperimentReport, scenario: str, path) -> None:
    """Mean best-so-far curves for one scenario, one polyline per combo."""
    rows = report.for_scenario(scenario)
    xmax = max(e for s in rows for e, _ in s.mean_trace)
    ys = [v for s in rows for _, v in s.mean_trace]
    ymin, ymax = min(ys), max(ys)
    if ymax - ymin < 1e-12:
        ymin, ymax = ymin - 0.05, ymax + 0.05
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad

    plot_w = _SVG_WIDTH - _ML - _MR
    plot_h = _SVG_HEIGHT - _MT - _MB

    def sx(e: float) -> float:
        return _ML + (e / xmax) * plot_w

    def sy(v: float) -> float:
        return _MT + plot_h - ((v - ymin) / (ymax - ymin)) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_WIDTH}" '
        f'height="{_SVG_HEIGHT}" viewBox="0 0 {_SVG_WIDTH} {_SVG_HEIGHT}">',
        f'<rect width="{_SVG_WIDTH}" height="{_SVG_HEIGHT}" fill="white"/>',
        f'<line x1="{_ML}" y1="{_MT + plot_h}" x2="{_ML + plot_w}" y2="{_MT + plot_h}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_MT + plot_h}" stroke="black"/>',
    ]
    for i in range(5):
        fx = i / 4
        e = fx * xmax
        x = sx(e)
        parts.append(
            f'<line x1="{x:.2f}" y1="{_MT + plot_h}" x2="{x:.2f}" y2="{_MT + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{_MT + plot_h + 18}" font-size="11" text-anchor="middle">{int(round(e))}</text>'
        )
        v = ymin + fx * (ymax - ymin)
        y = sy(v)
        parts.append(f'<line x1="{_ML - 5}" y1="{y:.2f}" x2="{_ML}" y2="{y:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{v:.3f}</text>'
        )
    parts.append(
        f'<text x="{_ML + plot_w / 2:.2f}" y="{_SVG_HEIGHT - 12}" font-size="13" '
        f'text-anchor="middle">evaluations</text>'
    )
    parts.append(
        f'<text x="16" y="{_MT + plot_h / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MT + plot_h / 2:.2f})">mean best fitness</text>'
    )
    for i, s in enumerate(rows):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{sx(e):.2f},{sy(v):.2f}" for e, v in s.mean_trace)
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MT + 14 + 18 * i
        lx = _ML + plot_w + 14
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        label = _svg_escape(f"{s.variant.value}/{s.crossover.value}")
        parts.append(f'<text x="{lx + 28}" y="{ly}" font-size="12">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="ascii")


# -- experiment config file ----------------------------------------------------
#
#   injection-experiment v1
#   runs 30
#   base_seed 0
#   population 100
#   evaluations 40000
#   crossover_probability 0.9
#   mutation_rate auto
#   tournament 2
#   elitism 1
#   weights 0.4 0.4 0.2
#   policy ALL
#   combo gen 2point             (repeatable; omit for all four)
#   scenario 30 5 0.15 1.0 0.05 auto   (repeatable; omit for the defaults)
#
# Blank lines are skipped and # starts a comment, inline or full line.
# A scenario seed of `auto` resolves to base_seed + 1000000 + the
# line's position.


def _fail(line_no: int, message: str) -> None:
    raise ExperimentConfigError(line_no, message)


def _parse_scalar(line_no: int, token: str, kind, what: str):
    try:
        return kind(token)
    except ValueError:
        _fail(line_no, f"bad {what}: {token!r}")


def parse_experiment_config(path, out_dir: Optional[Path] = None) -> ExperimentConfig:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or lines[0].split() != ["injection-experiment", EXPERIMENT_FORMAT_VERSION]:
        _fail(1, f"missing 'injection-experiment {EXPERIMENT_FORMAT_VERSION}' header")

    single: dict[str, tuple[int, list[str]]] = {}
    combos: list[tuple[GaVariant, CrossoverKind]] = []
    raw_scenarios: list[tuple[int, list[str]]] = []
    for line_no, line in enumerate(lines[1:], start=2):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, *args = stripped.split()
        if key == "combo":
            if len(args) != 2:
                _fail(line_no, "combo needs '<gen|ss> <2point|uniform>'")
            try:
                combos.append((parse_variant(args[0]), parse_crossover(args[1])))
            except ValueError as exc:
                _fail(line_no, str(exc))
        elif key == "scenario":
            if len(args) != 6:
                _fail(line_no, "scenario needs '<nodes> <partitions> <range> <side> <cluster_radius> <seed|auto>'")
            raw_scenarios.append((line_no, args))
        elif key in {
            "runs", "base_seed", "population", "evaluations", "crossover_probability",
            "mutation_rate", "tournament", "elitism", "weights", "policy",
        }:
            if key in single:
                _fail(line_no, f"duplicate key {key!r} (first on line {single[key][0]})")
            single[key] = (line_no, args)
        else:
            _fail(line_no, f"unknown key {key!r}")

    def one(key: str, default):
        if key not in single:
            return default
        line_no, args = single[key]
        if len(args) != 1:
            _fail(line_no, f"{key} takes exactly one value")
        return line_no, args[0]

    def scalar(key: str, kind, default):
        got = one(key, None)
        if got is None:
            return default
        line_no, token = got
        return _parse_scalar(line_no, token, kind, key)

    runs = scalar("runs", int, 30)
    base_seed = scalar("base_seed", int, 0)
    population = scalar("population", int, 100)
    evaluations = scalar("evaluations", int, 40000)
    crossover_probability = scalar("crossover_probability", float, 0.9)
    tournament = scalar("tournament", int, 2)
    elitism = scalar("elitism", int, 1)

    mutation_rate: Optional[float] = None
    got = one("mutation_rate", None)
    if got is not None and got[1] != "auto":
        mutation_rate = _parse_scalar(got[0], got[1], float, "mutation_rate")

    weights = FitnessWeights()
    if "weights" in single:
        line_no, args = single["weights"]
        if len(args) != 3:
            _fail(line_no, "weights needs three values")
        try:
            weights = FitnessWeights(*(float(a) for a in args))
        except ValueError as exc:
            _fail(line_no, str(exc))

    policy = CandidatePolicy.ALL_NON_ADJACENT
    got = one("policy", None)
    if got is not None:
        try:
            policy = CandidatePolicy(got[1])
        except ValueError:
            _fail(got[0], f"unknown policy {got[1]!r}")

    scenarios: list[ScenarioParams]
    if raw_scenarios:
        scenarios = []
        for idx, (line_no, args) in enumerate(raw_scenarios):
            seed = (
                base_seed + AUTO_SEED_OFFSET + idx
                if args[5] == "auto"
                else _parse_scalar(line_no, args[5], int, "scenario seed")
            )
            params = ScenarioParams(
                node_count=_parse_scalar(line_no, args[0], int, "nodes"),
                partition_count=_parse_scalar(line_no, args[1], int, "partitions"),
                radio_range=_parse_scalar(line_no, args[2], float, "range"),
                area_side=_parse_scalar(line_no, args[3], float, "side"),
                cluster_radius=_parse_scalar(line_no, args[4], float, "cluster_radius"),
                seed=seed,
            )
            try:
                params.validate()
            except ValueError as exc:
                _fail(line_no, str(exc))
            scenarios.append(params)
    else:
        scenarios = list(default_scenarios(base_seed))

    try:
        return ExperimentConfig(
            scenarios=tuple(scenarios),
            combos=tuple(combos) if combos else DEFAULT_COMBOS,
            runs_per_combo=runs,
            population_size=population,
            crossover_probability=crossover_probability,
            mutation_rate=mutation_rate,
            tournament_size=tournament,
            max_evaluations=evaluations,
            elitism_count=elitism,
            weights=weights,
            policy=policy,
            base_seed=base_seed,
            out_dir=out_dir,
        )
    except ValueError as exc:
        _fail(1, str(exc))
