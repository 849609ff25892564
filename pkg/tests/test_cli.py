import csv
import io
import json

import pytest

from selfembezzle.cli import EXIT_CAP, EXIT_CONFIG, EXIT_OK, EXIT_VERDICT, main
from selfembezzle.config import ConfigError, ExperimentConfig, build_config, read_config_file
from selfembezzle.experiments import recheck

FAST = {
    "e1-vdh": ["--max-exponent", "8"],
    "e2-nogo": ["--samples", "30", "--max-support", "16", "--grid-step", "1/6"],
    "e3-lemma": ["--grid-step", "1/9"],
    "e4-car": ["--window", "2", "--samples", "200"],
    "e5-channel": ["--samples", "40"],
}


def run_cli(tmp_path, name, *extra, stem="out"):
    out = tmp_path / stem
    code = main([name, *FAST[name], "--out", str(out), *extra])
    return code, out


class TestConfig:
    def test_defaults(self):
        c = build_config("e2-nogo")
        assert c.max_support == 64 and c.grid_step == pytest.approx(1 / 20)
        assert build_config("e4-car").samples == 100_000

    def test_file_then_flags(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("# comment\nexperiment = e3-lemma\ngrid-step = 1/6   # inline\nmax_support = 5\nseed = 3\n")
        values = read_config_file(f)
        c = build_config("e3-lemma", values, {"seed": 9, "max_support": None})
        assert c.grid_step == pytest.approx(1 / 6) and c.max_support == 5 and c.seed == 9

    @pytest.mark.parametrize("bad", [
        {"grid_step": "0.75"}, {"max_support": "0"}, {"max_support": "65"}, {"format": "pdf"},
        {"bogus": "1"}, {"seed": "x"}, {"grid_step": "1/0"}, {"cap": "0"},
    ])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            build_config("e3-lemma", None, bad)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig("e9").validate()

    def test_malformed_file(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("seed 3\n")
        with pytest.raises(ConfigError):
            read_config_file(f)


class TestExitCodes:
    @pytest.mark.parametrize("name", ["e2-nogo", "e3-lemma", "e4-car", "e5-channel"])
    def test_passing(self, tmp_path, name, capsys):
        code, out = run_cli(tmp_path, name)
        assert code == EXIT_OK
        assert "FAIL" not in capsys.readouterr().out
        assert out.with_suffix(".json").exists()

    def test_short_e1_passes(self, tmp_path):
        assert run_cli(tmp_path, "e1-vdh")[0] == EXIT_OK

    def test_e1_target_verdict(self, tmp_path, capsys):
        code = main(["e1-vdh", "--out", str(tmp_path / "e1")])
        assert code == EXIT_VERDICT
        assert "FAIL  e1-vdh  exceeds_0.99_at_2^16" in capsys.readouterr().out

    def test_config_error(self, tmp_path):
        assert main(["e3-lemma", "--grid-step", "0.9", "--out", str(tmp_path / "x")]) == EXIT_CONFIG
        assert main(["e3-lemma", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
        assert main(["run", "--out", str(tmp_path / "x")]) == EXIT_CONFIG

    def test_cap(self, tmp_path):
        assert main(["e1-vdh", "--max-exponent", "6", "--cap", "16", "--out", str(tmp_path / "x")]) == EXIT_CAP
        assert main(["e2-nogo", "--samples", "0", "--cap", "100", "--out", str(tmp_path / "x")]) == EXIT_CAP

    def test_run_with_config(self, tmp_path):
        f = tmp_path / "c.cfg"
        f.write_text("experiment = e3-lemma\ngrid_step = 1/6\n")
        assert main(["run", "--config", str(f), "--out", str(tmp_path / "r")]) == EXIT_OK
        data = json.loads((tmp_path / "r.json").read_text())
        assert data["experiment"] == "e3-lemma" and data["config"]["grid_step"] == pytest.approx(1 / 6)


class TestOutputs:
    def test_formats(self, tmp_path):
        code, out = run_cli(tmp_path, "e1-vdh", "--format", "json,csv,svg")
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(out.with_suffix(".csv").read_text())))
        data = json.loads(out.with_suffix(".json").read_text())
        assert len(rows) == len(data["rows"]) == 9
        assert float(rows[1]["fidelity"]) == pytest.approx(data["rows"][1]["fidelity"], abs=1e-14)
        assert out.with_suffix(".svg").read_text().lstrip().startswith("<svg")

    def test_json_shape(self, tmp_path):
        _, out = run_cli(tmp_path, "e5-channel")
        data = json.loads(out.with_suffix(".json").read_text())
        assert set(data) >= {"experiment", "config", "rows", "summary", "verdicts"}
        assert "duration" not in data
        assert data["config"]["seed"] == 0

    def test_timing_flag(self, tmp_path):
        _, out = run_cli(tmp_path, "e3-lemma", "--timing")
        assert "duration_s" in json.loads(out.with_suffix(".json").read_text())

    @pytest.mark.parametrize("name", ["e2-nogo", "e4-car", "e5-channel"])
    def test_bit_identical_reruns(self, tmp_path, name):
        _, out = run_cli(tmp_path, name, "--seed", "11")
        first = out.with_suffix(".json").read_bytes()
        run_cli(tmp_path, name, "--seed", "11")
        assert out.with_suffix(".json").read_bytes() == first

    def test_seed_changes_output(self, tmp_path):
        _, a = run_cli(tmp_path, "e5-channel", "--seed", "1", stem="a")
        _, b = run_cli(tmp_path, "e5-channel", "--seed", "2", stem="b")
        rows_a = json.loads(a.with_suffix(".json").read_text())["rows"]
        rows_b = json.loads(b.with_suffix(".json").read_text())["rows"]
        assert rows_a != rows_b

    @pytest.mark.parametrize("name", list(FAST))
    def test_recheck_from_rows(self, tmp_path, name):
        _, out = run_cli(tmp_path, name)
        data = json.loads(out.with_suffix(".json").read_text())
        assert recheck(name, data["rows"]) == data["verdicts"]

    def test_extra_generators(self, tmp_path):
        f = tmp_path / "gens.txt"
        f.write_text("# hand-picked\nA2:-9:X;B2:-9:X\n\nA1:-3:XZ;B1:-3:XZ;A2:-1:Z;B2:-1:Z\n")
        code, out = run_cli(tmp_path, "e4-car", "--extra-generators", str(f))
        assert code == EXIT_OK
        rows = json.loads(out.with_suffix(".json").read_text())["rows"]
        assert all(r["extra"] == 2 for r in rows if r["kind"] == "verify")

    def test_bad_generator_file(self, tmp_path):
        f = tmp_path / "gens.txt"
        f.write_text("A2:-9:Y\n")
        assert run_cli(tmp_path, "e4-car", "--extra-generators", str(f))[0] == EXIT_CONFIG


class TestReport:
    def test_merge(self, tmp_path, capsys):
        paths = []
        for name in ("e3-lemma", "e5-channel"):
            _, out = run_cli(tmp_path, name, stem=name)
            paths.append(str(out.with_suffix(".json")))
        capsys.readouterr()
        assert main(["report", *paths, "--out", str(tmp_path / "m.json")]) == EXIT_OK
        merged = json.loads((tmp_path / "m.json").read_text())
        assert merged["all_passed"]
        assert [e["experiment"] for e in merged["experiments"]] == ["e3-lemma", "e5-channel"]
        assert all(e["consistent"] for e in merged["experiments"])

    def test_tampered_report_detected(self, tmp_path):
        _, out = run_cli(tmp_path, "e5-channel")
        path = out.with_suffix(".json")
        data = json.loads(path.read_text())
        for r in data["rows"]:
            if r["kind"] == "channel":
                r["fidelity"] = 0.999
                break
        path.write_text(json.dumps(data))
        assert main(["report", str(path), "--out", str(tmp_path / "m.json")]) == EXIT_VERDICT
        entry = json.loads((tmp_path / "m.json").read_text())["experiments"][0]
        assert not entry["consistent"] and not entry["passed"]

    def test_failing_report(self, tmp_path):
        main(["e1-vdh", "--out", str(tmp_path / "e1")])
        assert main(["report", str(tmp_path / "e1.json"), "--out", str(tmp_path / "m.json")]) == EXIT_VERDICT
