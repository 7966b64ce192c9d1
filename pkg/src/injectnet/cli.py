"""Command line front end.

Four subcommands cover the full workflow: ``generate`` writes a
scenario snapshot, ``metrics`` reports the small-world numbers of a
snapshot (optionally with a genome's bypass links injected),
``evolve`` runs one GA and ``experiment`` runs the whole matrix.

Exit codes: 0 on success, 1 on command line misuse, 2 when the work
itself fails (bad files, infeasible geometry, runtime errors).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import parse_experiment_config, rank_combos, run_experiment, scenario_label
from .fitness import FitnessWeights, decode, genome_from_string, genome_to_string
from .ga import GaConfig, parse_crossover, parse_variant, run
from .graph import metrics
from .scenario import (
    CandidatePolicy,
    ScenarioParams,
    generate_scenario,
    load_scenario,
    save_scenario,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; route through main for exit code 1
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _cmd_generate(args) -> int:
    params = ScenarioParams(
        node_count=args.nodes,
        partition_count=args.partitions,
        radio_range=args.range,
        area_side=args.side,
        cluster_radius=args.cluster_radius,
        seed=args.seed,
    )
    scenario = generate_scenario(params, CandidatePolicy(args.policy))
    save_scenario(scenario, args.out)
    print(
        f"wrote {args.out}: {params.node_count} nodes, {params.partition_count} partitions, "
        f"{len(scenario.adhoc_edges)} adhoc edges, {scenario.genome_length} candidate pairs"
    )
    return 0


def _cmd_metrics(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.genome is None:
        graph = scenario.adhoc_graph()
    else:
        graph = decode(genome_from_string(args.genome), scenario)
    report = metrics(graph)
    print(f"gamma={_fmt(report.gamma)}")
    print(f"L={_fmt(report.L)}")
    print(f"components={report.component_count}")
    print(f"connected_ratio={_fmt(report.connected_pair_ratio)}")
    return 0


def _cmd_evolve(args) -> int:
    scenario = load_scenario(args.scenario)
    config = GaConfig(
        variant=parse_variant(args.variant),
        crossover=parse_crossover(args.crossover),
        population_size=args.pop,
        max_evaluations=args.evals,
        weights=FitnessWeights(args.wg, args.wl, args.wb),
        seed=args.seed,
    )
    result = run(config, scenario)
    best = result.best_fitness
    trace_path = Path(args.trace_out)
    lines = ["evaluations,best_scalar"]
    lines.extend(f"{e},{_fmt(s)}" for e, s in result.trace)
    trace_path.write_text("\n".join(lines) + "\n", encoding="ascii")
    print(
        f"best scalar={best.scalar:.6f} gamma={best.gamma:.6f} L_norm={best.L_norm:.6f} "
        f"bypass={best.bypass_count} evaluations={result.evaluations_used} "
        f"genome={genome_to_string(result.best_genome)}"
    )
    return 0


def _cmd_experiment(args) -> int:
    config = parse_experiment_config(args.config, out_dir=Path(args.out))
    report = run_experiment(config, progress=lambda line: print(line, file=sys.stderr))
    for label in report.scenario_labels():
        ranked = rank_combos(report, label)
        best = next(s for s in report.for_scenario(label)
                    if (s.variant, s.crossover) == ranked[0])
        print(f"{label} best: {ranked[0][0].value}/{ranked[0][1].value} (mean {best.mean:.6f})")
    print(f"wrote {Path(args.out) / 'report.csv'}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="injectnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a partitioned unit-disk snapshot")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--partitions", type=int, required=True)
    g.add_argument("--range", type=float, required=True)
    g.add_argument("--side", type=float, required=True)
    g.add_argument("--cluster-radius", dest="cluster_radius", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--policy", choices=["ALL", "INTER"], default="ALL")
    g.set_defaults(func=_cmd_generate)

    m = sub.add_parser("metrics", help="print small-world metrics of a snapshot")
    m.add_argument("--scenario", required=True)
    m.add_argument("--genome", help="bitstring selecting bypass links to inject")
    m.set_defaults(func=_cmd_metrics)

    e = sub.add_parser("evolve", help="run one GA on a snapshot")
    e.add_argument("--scenario", required=True)
    e.add_argument("--variant", choices=["gen", "ss"], required=True)
    e.add_argument("--crossover", choices=["2point", "uniform"], required=True)
    e.add_argument("--pop", type=int, default=100)
    e.add_argument("--evals", type=int, default=10000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--wg", type=float, default=0.4)
    e.add_argument("--wl", type=float, default=0.4)
    e.add_argument("--wb", type=float, default=0.2)
    e.add_argument("--trace-out", dest="trace_out", default="trace.csv")
    e.set_defaults(func=_cmd_evolve)

    x = sub.add_parser("experiment", help="run the full scenario/combo matrix")
    x.add_argument("--config", required=True)
    x.add_argument("--out", required=True)
    x.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
