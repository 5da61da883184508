import csv
import io
import json
import math
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from hyperioso import harness
from hyperioso.cli import main, parse_function_spec, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestFunctionSpec:
    def test_forms(self):
        assert parse_function_spec("tt:1:2").serialize() == "tt:1:2"
        assert parse_function_spec("family=majority,n=3").serialize() == "tt:3:8e"
        assert parse_function_spec("family=tribes,w=2,m=2").n == 4
        assert parse_function_spec("family=parity,S=1+2,n=3").table.tolist() == [0, 1, 1, 0, 0, 1, 1, 0]
        a = parse_function_spec("random,seed=7,n=6,bias=0.25")
        assert a == parse_function_spec("random, seed=7, n=6, bias=0.25")

    @pytest.mark.parametrize("text,token", [("family=foo,n=3", "foo"), ("family=and_k,k=x,n=3", "k='x'"),
                                            ("family=majority", "n=<n>"), ("bogus", "bogus"),
                                            ("tt:2:zz", "zz"), ("family=majority,n=3,n=5", "n=5")])
    def test_errors_name_the_token(self, text, token):
        with pytest.raises(UsageError, match=token.replace("+", r"\+").replace("<", ".").replace(">", ".")):
            parse_function_spec(text)


class TestAnalyze:
    def test_majority(self, capsys):
        code, out, _ = run(capsys, "analyze", "family=majority,n=3")
        doc = json.loads(out)
        assert code == 0 and doc["var"] == 0.25
        assert doc["moments"]["0.5"] == pytest.approx(1.06066, abs=1e-5)
        assert doc["schema_version"] == harness.SCHEMA_VERSION and "version" in doc
        assert [row["eps"] for row in doc["noise"]] == [0.5, 0.25, 0.125, 0.0625]

    def test_dictator(self, capsys):
        assert json.loads(run(capsys, "analyze", "tt:1:2")[1])["influences"] == [1.0]

    def test_byte_identical(self, capsys):
        first = run(capsys, "analyze", "random,seed=7,n=10")[1]
        assert first == run(capsys, "analyze", "random,seed=7,n=10")[1]

    def test_exit_codes(self, capsys):
        assert run(capsys, "analyze", "family=foo,n=3")[0] == 2
        assert run(capsys, "analyze", "tt:22:0")[0] == 3
        assert run(capsys, "analyze")[0] == 2
        assert run(capsys, "analyze", "tt:1:2", "--eps", "2")[0] == 2


class TestVerify:
    def test_hard_exhaustive3(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--corpus", "exhaustive:3", "--checks", "hard", "--out", str(tmp_path))
        assert code == 0, err
        doc = json.loads((tmp_path / "report.json").read_text())
        assert all(c["passed"] for c in doc["checks"])
        assert (tmp_path / "report.csv").read_text().startswith("check_id,function,lhs,rhs,ratio,degenerate\n")

    def test_corrupted_lemma_exits_1(self, capsys, monkeypatch):
        broken = replace(harness.REGISTRY["lemma-tal-lvl1"],
                         evaluate=lambda b: (b.moment(0.5), 3.0 * np.sqrt(b.levels[:, 1]), None))
        monkeypatch.setitem(harness.REGISTRY, "lemma-tal-lvl1", broken)
        code, _, err = run(capsys, "verify", "--corpus", "exhaustive:3", "--checks", "lemma-tal-lvl1", "--quiet")
        assert code == 1
        assert "FAIL lemma-tal-lvl1: witness tt:3:" in err

    def test_degenerate_recorded(self, capsys):
        code, out, _ = run(capsys, "verify", "--corpus", "exhaustive:2", "--checks", "claim-outside")
        assert code == 0 and json.loads(out)["checks"][0]["status"] == "degenerate"

    def test_bad_inputs(self, capsys):
        assert run(capsys, "verify", "--corpus", "nope:1")[0] == 2
        assert run(capsys, "verify", "--checks", "nope")[0] == 2
        assert run(capsys, "verify", "--corpus", "exhaustive:6")[0] == 3

    def test_env_threads(self, monkeypatch):
        monkeypatch.setenv("HYPERIOSO_THREADS", "3")
        assert harness.default_threads() == 3
        monkeypatch.setenv("HYPERIOSO_THREADS", "x")
        with pytest.raises(harness.ConfigError):
            harness.default_threads()

    def test_config_file_and_flag_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"corpus": "exhaustive:2", "checks": "poincare", "threads": 2}))
        code, out, _ = run(capsys, "--config", str(cfg), "verify")
        assert code == 0 and json.loads(out)["corpus"] == "exhaustive:2"
        code, out, _ = run(capsys, "--config", str(cfg), "verify", "--corpus", "exhaustive:1")
        assert json.loads(out)["corpus"] == "exhaustive:1"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run(capsys, "--config", str(cfg), "verify")[0] == 2


class TestJunta:
    def test_and2_with_oracle(self, capsys):
        code, out, _ = run(capsys, "junta", "family=and_k,k=2,n=6", "--eps", "0.1", "--p", "1", "--oracle", "2")
        doc = json.loads(out)
        assert code == 0 and doc["distance"] == 0 and doc["oracle"]["distance"] == 0 and doc["oracle"]["gap"] == 0

    def test_parity_report(self, capsys):
        # default constants keep every coordinate of the parity; a weak threshold keeps none
        doc = json.loads(run(capsys, "junta", "family=parity,n=8", "--eps", "0.1", "--p", "1")[1])
        assert doc["A"] == 8.0 and doc["mass_outside"] == 0.0 and doc["junta_size"] == 8
        doc = json.loads(run(capsys, "junta", "family=parity,n=8", "--eps", "0.1", "--p", "1", "--c2", "0.01")[1])
        assert doc["junta_size"] == 0 and doc["mass_outside"] == 0.25

    def test_dictator(self, capsys):
        assert json.loads(run(capsys, "junta", "tt:1:2", "--eps", "0.5", "--p", "0.6")[1])["distance"] == 0

    def test_errors(self, capsys):
        assert run(capsys, "junta", "family=parity,n=20", "--oracle", "10")[0] == 3
        assert run(capsys, "junta", "tt:1:2", "--p", "0.4")[0] == 2


class TestSweep:
    def test_tribes(self, capsys):
        code, out, _ = run(capsys, "sweep", "--family", "tribes", "--w", "2,3", "--n-max", "16", "--p", "0.5")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 8 + 5
        for r in rows:
            if int(r["n"]) > 1:
                assert float(r["ratio"]) == pytest.approx(float(r["value"]) / math.log(int(r["n"])) ** 0.5)

    def test_majority_monotone(self, capsys):
        out = run(capsys, "sweep", "--family", "majority", "--n", "3:15:2", "--quantity", "moment", "--p", "0.5")[1]
        vals = [float(r["value"]) for r in csv.DictReader(io.StringIO(out))]
        assert len(vals) == 7 and all(a < b for a, b in zip(vals, vals[1:]))

    def test_empty_and_infeasible(self, capsys):
        assert run(capsys, "sweep", "--family", "majority", "--n", "5:3")[0] == 2
        assert run(capsys, "sweep", "--family", "majority", "--n", "4")[0] == 2
        assert run(capsys, "sweep", "--family", "tribes", "--w", "2")[0] == 2
        assert run(capsys, "sweep", "--family", "parity", "--n", "3", "--quantity", "nope")[0] == 2


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperioso.cli", "analyze", "tt:1:2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 1
