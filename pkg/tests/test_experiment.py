import re
import xml.etree.ElementTree as ET

import pytest

from injectnet.errors import ExperimentConfigError
from injectnet.experiment import (
    DEFAULT_COMBOS,
    ComboStats,
    ExperimentConfig,
    ExperimentReport,
    default_scenarios,
    emit_convergence_svg,
    emit_csv,
    parse_experiment_config,
    rank_combos,
    run_experiment,
    scenario_label,
)
from injectnet.fitness import FitnessWeights
from injectnet.ga import CrossoverKind, GaVariant
from injectnet.scenario import CandidatePolicy, ScenarioParams

CSV_HEADER = "scenario,nodes,partitions,variant,crossover,runs,mean,std,min,max,mean_gamma,mean_L,mean_bypass"

SMALL = ScenarioParams(
    node_count=12,
    partition_count=2,
    radio_range=0.15,
    area_side=1.0,
    cluster_radius=0.05,
    seed=3,
)


def small_config(**kw):
    kw.setdefault("scenarios", (SMALL,))
    kw.setdefault("runs_per_combo", 2)
    kw.setdefault("population_size", 8)
    kw.setdefault("max_evaluations", 40)
    return ExperimentConfig(**kw)


def fake_stats(scenario, variant, crossover, mean, trace=((8, 0.5), (16, 0.6))):
    return ComboStats(
        scenario=scenario,
        node_count=12,
        partition_count=2,
        variant=variant,
        crossover=crossover,
        runs=2,
        mean=mean,
        std=0.01,
        minimum=mean - 0.05,
        maximum=mean + 0.05,
        mean_gamma=0.5,
        mean_L=2.0,
        mean_bypass=3.0,
        mean_trace=trace,
    )


class TestDefaults:
    def test_three_settings_with_derived_seeds(self):
        scens = default_scenarios(base_seed=7)
        assert [(p.node_count, p.partition_count) for p in scens] == [(30, 5), (42, 3), (70, 1)]
        assert [p.seed for p in scens] == [1000007, 1000008, 1000009]
        assert scens[2].cluster_radius == 0.13

    def test_labels(self):
        assert [scenario_label(p) for p in default_scenarios(0)] == [
            "n30_p5", "n42_p3", "n70_p1",
        ]


class TestConfigValidation:
    def test_defaults_accepted(self):
        cfg = ExperimentConfig(scenarios=default_scenarios(0))
        assert cfg.combos == DEFAULT_COMBOS
        assert cfg.runs_per_combo == 30

    def test_rejects_zero_runs(self):
        with pytest.raises(ValueError):
            small_config(runs_per_combo=0)

    def test_rejects_empty_combos(self):
        with pytest.raises(ValueError):
            small_config(combos=())

    def test_rejects_duplicate_scenario_labels(self):
        dup = ScenarioParams(
            node_count=12, partition_count=2, radio_range=0.2,
            area_side=1.0, cluster_radius=0.05, seed=9,
        )
        with pytest.raises(ValueError, match="distinct"):
            small_config(scenarios=(SMALL, dup))

    def test_ga_fields_fail_fast(self):
        with pytest.raises(ValueError):
            small_config(population_size=7)


class TestRunExperiment:
    def test_matrix_shape_and_stat_sanity(self):
        report = run_experiment(small_config())
        assert len(report.stats) == 4
        for s in report.stats:
            assert s.runs == 2
            assert s.minimum <= s.mean <= s.maximum
            assert s.mean_bypass >= 0
            ys = [v for _, v in s.mean_trace]
            assert all(b >= a for a, b in zip(ys, ys[1:]))

    def test_deterministic(self):
        a = run_experiment(small_config())
        b = run_experiment(small_config())
        assert a == b

    def test_single_run_single_combo_matches_run_result(self):
        from injectnet.ga import run
        from injectnet.scenario import generate_scenario

        combo = (GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT)
        cfg = small_config(runs_per_combo=1, combos=(combo,), base_seed=5)
        report = run_experiment(cfg)
        stats = report.stats[0]
        direct = run(cfg.ga_config(*combo, seed=5), generate_scenario(SMALL))
        assert stats.mean == direct.best_fitness.scalar
        assert stats.std == 0.0
        assert stats.minimum == stats.maximum == stats.mean
        assert stats.mean_trace == direct.trace

    def test_progress_callback_fires_per_combo(self):
        seen = []
        run_experiment(small_config(), progress=seen.append)
        assert len(seen) == 4
        assert all("n12_p2" in line for line in seen)

    def test_writes_artifacts(self, tmp_path):
        cfg = small_config(out_dir=tmp_path / "out")
        run_experiment(cfg)
        assert (tmp_path / "out" / "report.csv").exists()
        assert (tmp_path / "out" / "convergence_n12_p2.svg").exists()


class TestRankCombos:
    def test_orders_by_mean_descending(self):
        report = ExperimentReport(stats=(
            fake_stats("s", GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT, 0.7),
            fake_stats("s", GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT, 0.9),
            fake_stats("s", GaVariant.STEADY_STATE, CrossoverKind.UNIFORM, 0.8),
        ))
        assert rank_combos(report, "s") == [
            (GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT),
            (GaVariant.STEADY_STATE, CrossoverKind.UNIFORM),
            (GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT),
        ]

    def test_ties_break_lexicographically(self):
        report = ExperimentReport(stats=(
            fake_stats("s", GaVariant.STEADY_STATE, CrossoverKind.UNIFORM, 0.8),
            fake_stats("s", GaVariant.GENERATIONAL, CrossoverKind.UNIFORM, 0.8),
            fake_stats("s", GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT, 0.8),
        ))
        assert rank_combos(report, "s") == [
            (GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT),
            (GaVariant.GENERATIONAL, CrossoverKind.UNIFORM),
            (GaVariant.STEADY_STATE, CrossoverKind.UNIFORM),
        ]

    def test_unknown_scenario(self):
        report = ExperimentReport(stats=(
            fake_stats("s", GaVariant.GENERATIONAL, CrossoverKind.UNIFORM, 0.8),
        ))
        with pytest.raises(KeyError):
            rank_combos(report, "nope")


class TestCsv:
    def test_header_and_shape(self, tmp_path):
        report = run_experiment(small_config())
        path = tmp_path / "report.csv"
        emit_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 5
        for line in lines[1:]:
            cells = line.split(",")
            assert len(cells) == 13
            for cell in cells[6:]:
                assert re.fullmatch(r"-?\d+\.\d{6}", cell)

    def test_rows_sorted_by_scenario_variant_crossover(self, tmp_path):
        report = ExperimentReport(stats=(
            fake_stats("zz", GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT, 0.5),
            fake_stats("aa", GaVariant.STEADY_STATE, CrossoverKind.UNIFORM, 0.5),
            fake_stats("aa", GaVariant.GENERATIONAL, CrossoverKind.UNIFORM, 0.5),
            fake_stats("aa", GaVariant.GENERATIONAL, CrossoverKind.TWO_POINT, 0.5),
        ))
        path = tmp_path / "report.csv"
        emit_csv(report, path)
        keys = [tuple(l.split(",")[i] for i in (0, 3, 4)) for l in path.read_text().splitlines()[1:]]
        assert keys == sorted(keys)

    def test_empty_report_is_header_only(self, tmp_path):
        path = tmp_path / "report.csv"
        emit_csv(ExperimentReport(stats=()), path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_round_trip_recovers_statistics(self, tmp_path):
        report = run_experiment(small_config())
        path = tmp_path / "report.csv"
        emit_csv(report, path)
        rows = {tuple(l.split(",")[:5]): l.split(",")[5:] for l in path.read_text().splitlines()[1:]}
        for s in report.stats:
            key = (s.scenario, str(s.node_count), str(s.partition_count), s.variant.value, s.crossover.value)
            runs, mean, std, mn, mx, mg, ml, mb = rows[key]
            assert int(runs) == s.runs
            assert float(mean) == pytest.approx(s.mean, abs=5e-7)
            assert float(std) == pytest.approx(s.std, abs=5e-7)
            assert float(mn) == pytest.approx(s.minimum, abs=5e-7)
            assert float(mx) == pytest.approx(s.maximum, abs=5e-7)
            assert float(mg) == pytest.approx(s.mean_gamma, abs=5e-7)
            assert float(ml) == pytest.approx(s.mean_L, abs=5e-7)
            assert float(mb) == pytest.approx(s.mean_bypass, abs=5e-7)

    def test_byte_identical_across_invocations(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(run_experiment(small_config()), p1)
        emit_csv(run_experiment(small_config()), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestSvg:
    def test_valid_xml_with_one_polyline_per_combo(self, tmp_path):
        report = run_experiment(small_config())
        path = tmp_path / "c.svg"
        emit_convergence_svg(report, "n12_p2", path)
        root = ET.fromstring(path.read_text())
        ns = "{http://www.w3.org/2000/svg}"
        polylines = root.findall(f"{ns}polyline")
        assert len(polylines) == 4
        texts = [t.text for t in root.findall(f"{ns}text")]
        assert "evaluations" in texts
        assert "mean best fitness" in texts
        for variant, crossover in DEFAULT_COMBOS:
            assert f"{variant.value}/{crossover.value}" in texts

    def test_single_combo_polyline_matches_trace(self, tmp_path):
        combo = (GaVariant.STEADY_STATE, CrossoverKind.UNIFORM,)
        report = run_experiment(small_config(runs_per_combo=1, combos=(combo,)))
        path = tmp_path / "c.svg"
        emit_convergence_svg(report, "n12_p2", path)
        root = ET.fromstring(path.read_text())
        poly = root.findall("{http://www.w3.org/2000/svg}polyline")
        assert len(poly) == 1
        assert len(poly[0].get("points").split()) == len(report.stats[0].mean_trace)

    def test_unknown_scenario(self, tmp_path):
        report = ExperimentReport(stats=(
            fake_stats("s", GaVariant.GENERATIONAL, CrossoverKind.UNIFORM, 0.8),
        ))
        with pytest.raises(KeyError):
            emit_convergence_svg(report, "missing", tmp_path / "c.svg")


class TestConfigFile:
    def write(self, tmp_path, body):
        path = tmp_path / "exp.cfg"
        path.write_text("injection-experiment v1\n" + body)
        return path

    def test_header_only_gives_defaults(self, tmp_path):
        cfg = parse_experiment_config(self.write(tmp_path, ""))
        assert cfg.combos == DEFAULT_COMBOS
        assert cfg.scenarios == default_scenarios(0)
        assert cfg.runs_per_combo == 30
        assert cfg.population_size == 100
        assert cfg.max_evaluations == 40000
        assert cfg.mutation_rate is None
        assert cfg.policy is CandidatePolicy.ALL_NON_ADJACENT

    def test_full_file(self, tmp_path):
        body = (
            "# tuned down for a smoke run\n"
            "runs 2\n"
            "base_seed 11\n"
            "\n"
            "population 8\n"
            "evaluations 40\n"
            "crossover_probability 0.8\n"
            "mutation_rate 0.05\n"
            "tournament 3\n"
            "elitism 2\n"
            "weights 0.5 0.3 0.2\n"
            "policy INTER\n"
            "combo ss 2point\n"
            "combo gen uniform\n"
            "scenario 12 2 0.15 1.0 0.05 auto\n"
            "scenario 16 2 0.15 1.0 0.05 99\n"
        )
        cfg = parse_experiment_config(self.write(tmp_path, body))
        assert cfg.runs_per_combo == 2
        assert cfg.base_seed == 11
        assert cfg.population_size == 8
        assert cfg.max_evaluations == 40
        assert cfg.crossover_probability == 0.8
        assert cfg.mutation_rate == 0.05
        assert cfg.tournament_size == 3
        assert cfg.elitism_count == 2
        assert cfg.weights == FitnessWeights(0.5, 0.3, 0.2)
        assert cfg.policy is CandidatePolicy.INTER_PARTITION_ONLY
        assert cfg.combos == (
            (GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT),
            (GaVariant.GENERATIONAL, CrossoverKind.UNIFORM),
        )
        assert [p.seed for p in cfg.scenarios] == [11 + 1_000_000, 99]

    def test_inline_comments_stripped(self, tmp_path):
        body = (
            "runs 2   # smoke\n"
            "combo ss 2point  # the favourite\n"
            "scenario 12 2 0.15 1.0 0.05 auto  # tiny\n"
        )
        cfg = parse_experiment_config(self.write(tmp_path, body))
        assert cfg.runs_per_combo == 2
        assert cfg.combos == ((GaVariant.STEADY_STATE, CrossoverKind.TWO_POINT),)
        assert cfg.scenarios[0].node_count == 12

    def test_missing_header(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("runs 2\n")
        with pytest.raises(ExperimentConfigError) as exc:
            parse_experiment_config(path)
        assert exc.value.line == 1

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ExperimentConfigError) as exc:
            parse_experiment_config(self.write(tmp_path, "turbo on\n"))
        assert exc.value.line == 2

    def test_duplicate_key(self, tmp_path):
        with pytest.raises(ExperimentConfigError, match="duplicate"):
            parse_experiment_config(self.write(tmp_path, "runs 2\nruns 3\n"))

    def test_bad_combo(self, tmp_path):
        with pytest.raises(ExperimentConfigError, match="crossover"):
            parse_experiment_config(self.write(tmp_path, "combo ss 3point\n"))

    def test_bad_weights(self, tmp_path):
        with pytest.raises(ExperimentConfigError, match="sum"):
            parse_experiment_config(self.write(tmp_path, "weights 0.5 0.5 0.5\n"))

    def test_bad_scenario_reports_its_line(self, tmp_path):
        body = "runs 2\nscenario 12 2 0.15 1.0 0.2 auto\n"
        with pytest.raises(ExperimentConfigError) as exc:
            parse_experiment_config(self.write(tmp_path, body))
        assert exc.value.line == 3

    def test_nonnumeric_value(self, tmp_path):
        with pytest.raises(ExperimentConfigError, match="runs"):
            parse_experiment_config(self.write(tmp_path, "runs many\n"))
