import json
import math
import subprocess
import sys

import pytest

from qal.cli import main


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "qal.cli", *argv],
                          capture_output=True, text=True)
    return proc


class TestExitCodes:
    def test_success(self):
        assert main(["chsh", "--state", "bell-phi-minus"]) == 0

    def test_usage_error(self):
        proc = run_cli("nope")
        assert proc.returncode == 2

    def test_mismatch_via_fault_injection(self):
        assert main(["selfcheck", "--inject-fault", "table-8.1"]) == 3

    def test_resource_error(self):
        assert main(["fieldtask", "--n", "6", "--k", "4",
                     "--search-min-l"]) == 4

    def test_bad_value_is_usage_error(self):
        assert main(["commcx", "classical", "--model", "seq", "--n", "99"]) == 2


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["--out", str(a), "reproduce", "table-8.2"])
        main(["--out", str(b), "reproduce", "table-8.2"])
        assert a.read_bytes() == b.read_bytes()

    def test_seeded_quantum_run_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ["commcx", "quantum", "--protocol", "teleport", "--n", "4"]
        main(["--out", str(a), "--seed", "7"] + args)
        main(["--out", str(b), "--seed", "7"] + args)
        assert a.read_bytes() == b.read_bytes()


class TestFormatting:
    def test_rationals_emitted_as_strings(self, tmp_path):
        out = tmp_path / "o.json"
        main(["--out", str(out), "commcx", "classical", "--model",
              "broadcast", "--n", "7"])
        data = json.loads(out.read_text())
        assert data["p_c"] == "9/16"

    def test_floats_fixed_significance(self, tmp_path):
        out = tmp_path / "o.json"
        main(["--out", str(out), "chsh"])
        text = out.read_text()
        assert "2.82842712475" in text

    def test_csv_schema(self, tmp_path):
        out = tmp_path / "grid.csv"
        boundary = tmp_path / "boundary.csv"
        main(["--out", str(out), "feasibility", "--protocol", "qrac-ent",
              "--grid", "11", "--boundary-out", str(boundary)])
        lines = out.read_text().splitlines()
        assert lines[0] == "eta,mu,beats_classical"
        assert all(line.split(",")[2] in ("0", "1") for line in lines[1:])
        assert boundary.read_text().splitlines()[0] == "eta,mu_boundary"


class TestConfigFile:
    def test_config_mirrors_flags(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"state": "bell-psi-plus"}))
        out = tmp_path / "o.json"
        main(["--out", str(out), "--config", str(cfg), "chsh"])
        data = json.loads(out.read_text())
        assert data["state"] == "bell-psi-plus"

    def test_explicit_flag_wins_over_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"state": "bell-psi-plus"}))
        out = tmp_path / "o.json"
        main(["--out", str(out), "--config", str(cfg), "chsh",
              "--state", "bell-phi-minus"])
        assert json.loads(out.read_text())["state"] == "bell-phi-minus"


class TestStateFiles:
    def test_ree_reads_json_state(self, tmp_path):
        s = 1 / math.sqrt(2)
        state = {"amps": [[s, 0.0], [0.0, 0.0], [0.0, 0.0], [s, 0.0]],
                 "dims": [2, 2]}
        path = tmp_path / "bell.json"
        path.write_text(json.dumps(state))
        out = tmp_path / "o.json"
        assert main(["--out", str(out), "ree", "--state", str(path),
                     "--restarts", "2"]) == 0
        data = json.loads(out.read_text())
        assert abs(data["value_bits"] - 1.0) < 2e-3


class TestReproduceTargets:
    @pytest.mark.parametrize("target", ["table-8.1", "table-8.2",
                                        "table-8.3", "table-7.1"])
    def test_fast_targets_exit_zero(self, target, tmp_path):
        out = tmp_path / "o.json"
        assert main(["--out", str(out), "reproduce", target]) == 0
        data = json.loads(out.read_text())
        assert data["target"] == target
        assert all(all(v for k, v in row.items() if "match" in k)
                   for row in data["rows"])

    def test_unknown_target_usage_error(self):
        assert run_cli("reproduce", "table-9.9").returncode == 2
