"""End-to-end checks for the config-driven command line runner."""

import csv
import json

import pytest

from infostab import ConfigurationError, InfostabError
from infostab.cli import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, main, run

POWER = {"kind": "power_family", "a": 2.0, "b": 1.0, "alpha": 0.5}
BUMP = {"kind": "bump", "center": 0.5, "width": 0.2, "height": 1e-3}
NOISY_POWER = {"kind": "sum", "terms": [POWER, BUMP]}
NEG_FAMILY = {"kind": "power_family", "a": 1.0, "b": 1.0, "alpha": -1.0}


def run_job(tmp_path, config, **kwargs):
    code = run(config, out_dir=str(tmp_path), **kwargs)
    report = json.loads((tmp_path / "report.json").read_text())
    return code, report


def read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def certify_config(theorem, function, alpha, **extra):
    config = {"schema": 1, "job": "certify", "theorem": theorem,
              "function": function, "alpha": alpha, "resolution": 64}
    config.update(extra)
    return config


class TestRunCertify:
    def test_exact_fundamental_passes(self, tmp_path):
        config = certify_config("fundamental", POWER, 0.5, resolution=256)
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["schema"] == 1
        assert report["job"] == "certify"
        assert report["result"]["satisfied"] is True
        assert report["result"]["theorem"] == "fundamental_open"
        cand = report["result"]["candidate"]
        assert cand["kind"] == "power_family"
        assert cand["a"] == pytest.approx(2.0, abs=1e-8)
        assert report["files"] == {}

    def test_config_echoed_untouched(self, tmp_path):
        config = certify_config("fundamental", POWER, 0.5)
        _, report = run_job(tmp_path, config)
        assert report["config"] == config

    def test_negative_alpha_dispatches_to_hyperstability(self, tmp_path):
        code, report = run_job(tmp_path, certify_config("fundamental", NEG_FAMILY, -1.0))
        assert code == EXIT_OK
        assert report["result"]["theorem"] == "hyperstability"

    def test_violation_exits_one(self, tmp_path):
        big = {"kind": "sum", "terms": [NEG_FAMILY, dict(BUMP, height=0.05)]}
        code, report = run_job(tmp_path, certify_config("hyperstability", big, -1.0))
        assert code == EXIT_VIOLATION
        assert report["result"]["satisfied"] is False

    def test_epsilon_override_recorded(self, tmp_path):
        config = certify_config("fundamental_open", POWER, 0.5, epsilon=1e-4)
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["epsilon"] == 1e-4
        assert report["result"]["epsilon_source"] == "supplied"

    def test_closed_theorem(self, tmp_path):
        code, report = run_job(tmp_path, certify_config("fundamental_closed", POWER, 0.5))
        assert code == EXIT_OK
        assert report["result"]["theorem"] == "fundamental_closed"

    def test_hyperstability_with_probe(self, tmp_path):
        noisy = {"kind": "sum", "terms": [NEG_FAMILY, dict(BUMP, height=0.05)]}
        config = certify_config("hyperstability", noisy, -1.0,
                                margins=[0.125, 0.0625, 0.03125],
                                probe_resolution=128)
        code, report = run_job(tmp_path, config)
        assert code == EXIT_VIOLATION
        probe = report["result"]["blowup"]
        assert [row[0] for row in probe] == [0.125, 0.0625, 0.03125]
        sups = [row[1] for row in probe]
        assert sups == sorted(sups)

    def test_measure_sequence_statement_mode(self, tmp_path):
        config = {"schema": 1, "job": "certify", "theorem": "measure_sequence",
                  "generator": POWER, "epsilons": [1e-6, 1e-5, 1e-4],
                  "alpha": 0.5, "levels": 4, "resolution": 16}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        result = report["result"]
        assert result["satisfied"] is None
        rows = result["rows"]
        assert [r["n"] for r in rows] == [2, 3, 4]
        assert all(r["distance"] is None for r in rows)
        bounds = [r["bound"] for r in rows]
        assert all(b > 0.0 for b in bounds)
        assert bounds == sorted(bounds)

    def test_measure_sequence_from_description(self, tmp_path):
        kappa = 1.0 / (2.0 ** 0.5 - 1.0)
        gen = {"kind": "power_family", "a": kappa, "b": kappa, "alpha": 0.5}
        config = {"schema": 1, "job": "certify", "theorem": "measure_sequence",
                  "measure": {"generator": gen, "alpha": 0.5, "max_n": 4},
                  "levels": 4, "resolution": 16}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        result = report["result"]
        assert result["satisfied"] is True
        assert max(r["distance"] for r in result["rows"]) <= 1e-9

    def test_entropy_equation(self, tmp_path):
        sol = {"kind": "entropy_solution", "scale": 0.7, "alpha": 2.0}
        config = {"schema": 1, "job": "certify", "theorem": "entropy_equation",
                  "function": sol, "alpha": 2.0, "resolution": 24}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["satisfied"] is True

    def test_associativity(self, tmp_path):
        phi = {"kind": "phi_of_sum",
               "phi": {"kind": "power_law", "scale": 1.0, "alpha": 2.0}}
        config = {"schema": 1, "job": "certify", "theorem": "associativity",
                  "functions": [phi, phi], "resolution": 8,
                  "intervals": [[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]]}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["epsilon"] == 0.0

    def test_modified_entropy(self, tmp_path):
        sol = {"kind": "modified_entropy_solution", "coeff": 0.4, "alpha": 2.0,
               "phi": {"kind": "xlog2", "scale": 1.0}}
        config = {"schema": 1, "job": "certify", "theorem": "modified_entropy",
                  "function": sol, "alpha": 2.0, "n": 1.0, "resolution": 24}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["satisfied"] is True

    def test_sum_form(self, tmp_path):
        phi = {"kind": "sum", "terms": [{"kind": "power_law", "scale": 0.7, "alpha": 1.0},
                                        {"kind": "constant", "value": -0.7 / 3.0}]}
        config = {"schema": 1, "job": "certify", "theorem": "sum_form",
                  "function": phi, "n": 3, "resolution": 12}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["trace"]["kappa"] == pytest.approx(0.7, abs=1e-4)

    def test_sum_form_multiplicative(self, tmp_path):
        g = {"kind": "power_law", "scale": 1.0, "alpha": 1.7}
        config = {"schema": 1, "job": "certify", "theorem": "sum_form_multiplicative",
                  "function": g, "n": 3, "m": 3, "resolution": 10}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["trace"]["beta"] == pytest.approx(1.7, rel=1e-3)

    def test_sum_form_mixed(self, tmp_path):
        f = {"kind": "sum", "terms": [{"kind": "power_law", "scale": 0.6, "alpha": 0.5},
                                      {"kind": "power_law", "scale": -0.6, "alpha": 2.0}]}
        config = {"schema": 1, "job": "certify", "theorem": "sum_form_mixed",
                  "function": f, "n": 3, "m": 3, "alpha": 0.5, "beta": 2.0,
                  "resolution": 10}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["trace"]["c"] == pytest.approx(0.6, abs=1e-6)

    def test_dump_defects(self, tmp_path):
        config = certify_config("fundamental", NOISY_POWER, 0.5, resolution=32)
        code, report = run_job(tmp_path, config, dump_defects=True)
        assert code == EXIT_OK
        assert report["files"]["defects_csv"] == "defects.csv"
        lines = (tmp_path / "defects.csv").read_text().splitlines()
        sup = max(abs(float(line.split(",")[2])) for line in lines)
        assert sup == pytest.approx(report["result"]["epsilon"], rel=1e-12)

    def test_unknown_theorem(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run(certify_config("grand_unified", POWER, 0.5), out_dir=str(tmp_path))

    def test_alpha_one_bubbles_up(self, tmp_path):
        fam = {"kind": "power_family", "a": 1.0, "b": 1.0, "alpha": 1.0}
        with pytest.raises(InfostabError):
            run(certify_config("fundamental", fam, 1.0), out_dir=str(tmp_path))


class TestRunResidual:
    def residual_config(self, **extra):
        config = {"schema": 1, "job": "residual", "equation": "fundamental",
                  "alpha": 0.5, "function": POWER,
                  "grid": {"kind": "triangle", "resolution": 64}}
        config.update(extra)
        return config

    def test_exact_solution_small_sup(self, tmp_path):
        code, report = run_job(tmp_path, self.residual_config())
        assert code == EXIT_OK
        result = report["result"]
        assert result["equation"] == "fundamental"
        assert result["sup"] <= 1e-10
        assert result["mean"] <= result["sup"]
        assert result["samples"] > 0
        assert result["epsilon_target"] is None
        assert result["within_target"] is True

    def test_epsilon_target_gates_exit(self, tmp_path):
        config = self.residual_config(function=NOISY_POWER, epsilon_target=1e-8)
        code, report = run_job(tmp_path, config)
        assert code == EXIT_VIOLATION
        assert report["result"]["within_target"] is False
        loose = self.residual_config(function=NOISY_POWER, epsilon_target=1.0)
        code, report = run_job(tmp_path, loose)
        assert code == EXIT_OK
        assert report["result"]["within_target"] is True

    def test_argmax_point_reported(self, tmp_path):
        _, report = run_job(tmp_path, self.residual_config(function=NOISY_POWER))
        point = report["result"]["argmax_point"]
        assert len(point) == 2
        assert 0.0 < sum(point) < 1.0

    def test_two_function_equation(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "daroczy",
                  "functions": [{"kind": "shannon_info"},
                                {"kind": "xlog2", "scale": -1.0}],
                  "grid": {"kind": "unit", "resolution": 64}}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["sup"] <= 1e-10

    def test_simplex_pair_grid_config(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "sum_form_additive",
                  "n": 3, "m": 3, "function": {"kind": "xlog2", "scale": -1.0},
                  "grid": {"kind": "simplex_pair", "n": 3, "m": 3, "resolution": 8}}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["sup"] <= 1e-10

    def test_cone_grid_config(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "entropy",
                  "function": {"kind": "entropy_solution", "scale": 0.7, "alpha": 2.0},
                  "grid": {"kind": "cone", "resolution": 12, "bound": 2.0}}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["result"]["sup"] <= 1e-10

    def test_dump_defects_csv(self, tmp_path):
        config = self.residual_config(function=NOISY_POWER)
        _, report = run_job(tmp_path, config, dump_defects=True)
        assert report["files"]["defects_csv"] == "defects.csv"
        lines = (tmp_path / "defects.csv").read_text().splitlines()
        assert len(lines) == report["result"]["samples"]
        sup = max(abs(float(line.split(",")[2])) for line in lines)
        assert sup == pytest.approx(report["result"]["sup"], rel=1e-12)

    def test_unknown_equation(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run(self.residual_config(equation="heat"), out_dir=str(tmp_path))

    def test_unknown_grid_kind(self, tmp_path):
        config = self.residual_config(grid={"kind": "moebius", "resolution": 8})
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))

    def test_wrong_function_arity(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "daroczy",
                  "functions": [{"kind": "shannon_info"}],
                  "grid": {"kind": "unit", "resolution": 16}}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))


class TestRunMeasure:
    def measure_config(self, alpha=2.0, **extra):
        if alpha == 1.0:
            gen = {"kind": "shannon_info"}
        else:
            kappa = 1.0 / (2.0 ** (1.0 - alpha) - 1.0)
            gen = {"kind": "power_family", "a": kappa, "b": kappa, "alpha": alpha}
        config = {"schema": 1, "job": "measure",
                  "measure": {"generator": gen, "alpha": alpha, "max_n": 4},
                  "n": 3, "resolution": 16}
        config.update(extra)
        return config

    def test_exact_measure_report(self, tmp_path):
        code, report = run_job(tmp_path, self.measure_config())
        assert code == EXIT_OK
        result = report["result"]
        assert result["alpha"] == 2.0
        assert result["max_n"] == 4
        assert result["normalization_gap"] <= 1e-12
        assert result["semisymmetry3"] <= 1e-10
        assert [row["n"] for row in result["symmetry"]] == [2, 3]
        assert all(row["sup"] <= 1e-10 for row in result["symmetry"])
        assert [row["n"] for row in result["recursivity"]] == [3]
        assert all(row["sup"] <= 1e-10 for row in result["recursivity"])
        gd = result["generating_defect"]
        assert gd["within"] is True
        assert gd["sup"] <= gd["bound"]

    def test_perturbed_measure_within_bound(self, tmp_path):
        base = self.measure_config()
        base["measure"]["perturbations"] = [{"level": 3, "height": 1e-4, "seed": 7}]
        code, report = run_job(tmp_path, base)
        assert code == EXIT_OK
        gd = report["result"]["generating_defect"]
        assert gd["eps_semisymmetry"] > 0.0
        assert gd["sup"] <= gd["bound"]

    def test_tabulate_writes_summary(self, tmp_path):
        config = self.measure_config(tabulate=3)
        _, report = run_job(tmp_path, config)
        assert report["files"]["summary_csv"] == "summary.csv"
        rows = read_rows(tmp_path / "summary.csv")
        assert set(rows[0]) == {"p1", "p2", "p3", "value"}
        probs = [float(rows[0][k]) for k in ("p1", "p2", "p3")]
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)

    def test_shannon_generator(self, tmp_path):
        code, report = run_job(tmp_path, self.measure_config(alpha=1.0))
        assert code == EXIT_OK
        assert all(row["sup"] <= 1e-10 for row in report["result"]["recursivity"])

    def test_n_out_of_range(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run(self.measure_config(n=9), out_dir=str(tmp_path))


class TestRunSweep:
    def test_constants_sweep(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "constants",
                  "alphas": [0.25, 0.5, 2.0, 3.0, 5.0]}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        assert report["files"]["summary_csv"] == "summary.csv"
        rows = read_rows(tmp_path / "summary.csv")
        assert [float(r["alpha"]) for r in rows] == [0.25, 0.5, 2.0, 3.0, 5.0]
        for row in rows:
            assert abs(float(row["relation_gap"])) <= 1e-9
        by_alpha = {float(r["alpha"]): r for r in rows}
        assert float(by_alpha[2.0]["K"]) == 2406.0
        assert float(by_alpha[2.0]["T"]) == 300.0

    def test_constants_sweep_alpha_zero_has_no_T(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "constants", "alphas": [0.0]}
        code, _ = run_job(tmp_path, config)
        assert code == EXIT_OK
        rows = read_rows(tmp_path / "summary.csv")
        assert float(rows[0]["K"]) == 63.0
        assert rows[0]["T"] == ""
        assert rows[0]["relation_gap"] == ""

    def test_family_sweep_exact(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "fundamental",
                  "alphas": [-1.0, 0.0, 0.5, 2.0], "family": {"a": 1.0, "b": 1.0},
                  "resolution": 48}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        rows = read_rows(tmp_path / "summary.csv")
        assert len(rows) == 4
        assert all(r["satisfied"] == "True" for r in rows)
        regimes = {float(r["alpha"]): r["regime"] for r in rows}
        assert regimes[-1.0] == "negative"
        assert regimes[0.0] == "zero"
        assert regimes[2.0] == "positive_not_one"
        assert len(report["result"]["certificates"]) == 4

    def test_family_sweep_noise_attaches_blowup(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "fundamental",
                  "alphas": [-1.0, 2.0], "family": {"a": 1.0, "b": 1.0},
                  "noise": {"height": 5e-4}, "resolution": 48}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_VIOLATION
        certs = {c["alpha"]: c for c in report["result"]["certificates"]}
        assert certs[-1.0]["satisfied"] is False
        assert "blowup" in certs[-1.0]
        sups = [row[1] for row in certs[-1.0]["blowup"]]
        assert sups[-1] / sups[0] >= 10.0
        assert certs[2.0]["satisfied"] is True
        assert "blowup" not in certs[2.0]

    def test_family_sweep_rejects_alpha_one(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "fundamental_open",
                  "alphas": [1.0], "family": {"a": 1.0, "b": 1.0}, "resolution": 16}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))

    def test_empty_alphas_rejected(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "constants", "alphas": []}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))

    def test_family_required(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "fundamental_open",
                  "alphas": [2.0]}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))

    def test_unknown_target(self, tmp_path):
        config = {"schema": 1, "job": "sweep", "target": "entropy", "alphas": [2.0]}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))


class TestRunBlowup:
    def test_probe_job(self, tmp_path):
        noisy = {"kind": "sum", "terms": [NEG_FAMILY, dict(BUMP, height=0.05)]}
        config = {"schema": 1, "job": "blowup", "function": noisy,
                  "alpha": -1.0, "margins": [0.125, 0.0625, 0.03125],
                  "resolution": 256}
        code, report = run_job(tmp_path, config)
        assert code == EXIT_OK
        result = report["result"]
        assert result["growth_ratio"] > 1.0
        rows = read_rows(tmp_path / "summary.csv")
        assert [float(r["margin"]) for r in rows] == [0.125, 0.0625, 0.03125]
        sups = [float(r["sup"]) for r in rows]
        assert sups == sorted(sups)
        assert [row[1] for row in result["rows"]] == sups

    def test_margins_required(self, tmp_path):
        config = {"schema": 1, "job": "blowup", "function": NEG_FAMILY, "alpha": -1.0}
        with pytest.raises(ConfigurationError):
            run(config, out_dir=str(tmp_path))


class TestRunPlumbing:
    def test_schema_required(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run({"job": "certify"}, out_dir=str(tmp_path))
        with pytest.raises(ConfigurationError):
            run({"schema": 2, "job": "certify"}, out_dir=str(tmp_path))

    def test_config_must_be_object(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run(["schema", 1], out_dir=str(tmp_path))

    def test_unknown_job(self, tmp_path):
        with pytest.raises(ConfigurationError):
            run({"schema": 1, "job": "launch"}, out_dir=str(tmp_path))

    def test_report_bytes_independent_of_jobs(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "fundamental",
                  "alpha": 0.5, "function": NOISY_POWER,
                  "grid": {"kind": "triangle", "resolution": 128}}
        serial_dir = tmp_path / "serial"
        parallel_dir = tmp_path / "parallel"
        serial_dir.mkdir()
        parallel_dir.mkdir()
        run(config, out_dir=str(serial_dir), jobs=1)
        run(config, out_dir=str(parallel_dir), jobs=8)
        serial = (serial_dir / "report.json").read_bytes()
        parallel = (parallel_dir / "report.json").read_bytes()
        assert serial == parallel

    def test_report_is_sorted_and_newline_terminated(self, tmp_path):
        run_job(tmp_path, certify_config("fundamental", POWER, 0.5))
        raw = (tmp_path / "report.json").read_text()
        assert raw.endswith("\n")
        assert raw == json.dumps(json.loads(raw), indent=2, sort_keys=True) + "\n"


class TestMain:
    def write_config(self, tmp_path, config):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        return str(path)

    def test_successful_run_creates_out_dir(self, tmp_path):
        path = self.write_config(tmp_path, certify_config("fundamental", POWER, 0.5))
        out = tmp_path / "deep" / "nested"
        assert main(["--config", path, "--out", str(out)]) == EXIT_OK
        assert (out / "report.json").exists()

    def test_missing_config_file(self, tmp_path, capsys):
        code = main(["--config", str(tmp_path / "absent.json")])
        assert code == EXIT_CONFIG
        assert "absent.json" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["--config", str(path)]) == EXIT_CONFIG
        assert capsys.readouterr().err.strip()

    def test_config_error_exits_two(self, tmp_path, capsys):
        path = self.write_config(tmp_path, {"schema": 1, "job": "launch"})
        assert main(["--config", path, "--out", str(tmp_path / "o")]) == EXIT_CONFIG
        assert "launch" in capsys.readouterr().err

    def test_alpha_one_exits_two(self, tmp_path, capsys):
        fam = {"kind": "power_family", "a": 1.0, "b": 1.0, "alpha": 1.0}
        path = self.write_config(tmp_path, certify_config("fundamental", fam, 1.0))
        assert main(["--config", path, "--out", str(tmp_path / "o")]) == EXIT_CONFIG
        assert capsys.readouterr().err.strip()

    def test_dump_defects_flag(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "fundamental",
                  "alpha": 0.5, "function": NOISY_POWER,
                  "grid": {"kind": "triangle", "resolution": 32}}
        path = self.write_config(tmp_path, config)
        out = tmp_path / "out"
        code = main(["--config", path, "--out", str(out), "--dump-defects"])
        assert code == EXIT_OK
        assert (out / "defects.csv").exists()

    def test_jobs_flag(self, tmp_path):
        path = self.write_config(tmp_path, certify_config("fundamental", POWER, 0.5))
        out = tmp_path / "out"
        assert main(["--config", path, "--out", str(out), "--jobs", "4"]) == EXIT_OK

    def test_violation_passes_through(self, tmp_path):
        config = {"schema": 1, "job": "residual", "equation": "fundamental",
                  "alpha": 0.5, "function": NOISY_POWER, "epsilon_target": 1e-9,
                  "grid": {"kind": "triangle", "resolution": 32}}
        path = self.write_config(tmp_path, config)
        code = main(["--config", path, "--out", str(tmp_path / "o")])
        assert code == EXIT_VIOLATION
