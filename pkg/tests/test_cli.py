import json
import subprocess
import sys

import numpy as np
import pytest

from metzlerzeta.cli import main, parse_graph
from metzlerzeta.digraph import dump_digraph, random_digraph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestVerify:
    def test_torus_checks(self, capsys):
        code, doc = run_json(capsys, "verify", "--graph", "torus:d=1,N=4", "--checks", "prop1,thm5")
        assert code == 0 and doc["ok"]
        assert doc["verdicts"] == {"prop1": "pass", "thm5": "pass"}

    def test_random_weinstein_aronszajn(self, capsys):
        code, doc = run_json(capsys, "verify", "--graph", "random:n=5,seed=1", "--checks", "thm4")
        assert code == 0 and doc["verdicts"]["thm4"] == "pass"

    def test_zero_rate_rejected(self, capsys):
        code, out, err = run(capsys, "verify", "--graph", "cycle:n=4", "--checks", "all", "--beta", "0")
        assert code == 2 and out == "" and "invalid input" in err

    @pytest.mark.parametrize("graph", ["torus:d=2,N=3", "dcycle:n=5", "random:n=6,seed=3", "petersen"])
    def test_all_checks(self, capsys, graph):
        code, doc = run_json(capsys, "verify", "--graph", graph, "--checks", "all")
        assert code == 0, doc["verdicts"]

    def test_graph_file(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(dump_digraph(random_digraph(4, np.random.default_rng(0))))
        code, doc = run_json(capsys, "verify", "--graph", str(path), "--checks", "prop1,thm5,cor")
        assert code == 0 and doc["ok"]

    @pytest.mark.parametrize("spec", ["nosuch:n=3", "cycle:n", "cycle:m=3", "cycle:n=x"])
    def test_bad_graph_spec(self, capsys, spec):
        code, _, err = run(capsys, "verify", "--graph", spec)
        assert code == 2 and err

    def test_unknown_check(self, capsys):
        code, _, _ = run(capsys, "verify", "--graph", "cycle:n=4", "--checks", "nope")
        assert code == 2

    def test_failed_verdict_exit_code(self, capsys):
        code, doc = run_json(capsys, "verify", "--graph", "cycle:n=5", "--checks", "thm5", "--tol", "0")
        assert code == 1 and doc["verdicts"]["thm5"] == "fail" and not doc["ok"]


class TestZeta:
    def test_metzler_table(self, capsys):
        code, doc = run_json(capsys, "zeta", "metzler", "--d", "1", "--N", "4,8,16", "--beta", "1", "--delta", "1", "--u", "0.1")
        assert code == 0
        diffs = [r["diff"] for r in doc["results"]["convergence"][1:]]
        assert diffs[1] < diffs[0]

    def test_walk_identity(self, capsys):
        code, doc = run_json(capsys, "zeta", "walk", "--d", "1", "--N", "4", "--coin", "identity", "--u", "0.5")
        assert code == 0
        assert doc["results"]["N=4"]["direct"]["re"] == pytest.approx(((1 - 0.5**4) ** 2) ** 0.25, abs=1e-12)

    def test_metzler_at_zero(self, capsys):
        code, doc = run_json(capsys, "zeta", "metzler", "--u", "0")
        assert code == 0 and doc["results"]["limit"]["value"] == 1.0

    def test_domain_error_exit_code(self, capsys):
        code, _, err = run(capsys, "zeta", "metzler", "--N", "4", "--u", "-1")
        assert code == 3 and "ConvergenceDomainError" in err

    def test_unknown_coin(self, capsys):
        assert run(capsys, "zeta", "walk", "--coin", "nope")[0] == 2


class TestSis:
    def test_too_few_trials(self, capsys):
        code, _, err = run(capsys, "sis", "--trials", "10")
        assert code == 2 and "100" in err

    def test_supercritical(self, capsys):
        code, doc = run_json(
            capsys, "sis", "--graph", "torus:d=1,N=6", "--beta", "5", "--delta", "0.1", "--trials", "200"
        )
        assert code == 0
        assert doc["results"]["decay"]["outcome"] == "no decay observed"
        assert "bound-estimate" in doc["skipped"]

    def test_csv_trajectory(self, capsys):
        code, out, _ = run(capsys, "sis", "--trials", "100", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "time,infected" and lines[1] == "0.0,2"


class TestOtherCommands:
    def test_spectrum(self, capsys):
        code, doc = run_json(capsys, "spectrum", "--graph", "petersen")
        assert code == 0 and doc["verdicts"]["closed-vs-numeric"] == "pass"
        assert len(doc["results"]["eigenvalues"]) == 40

    def test_spectrum_skips_irregular(self, capsys):
        code, doc = run_json(capsys, "spectrum", "--graph", "dcycle:n=4")
        assert code == 0 and "closed-vs-numeric" in doc["skipped"]

    def test_ledger(self, capsys):
        code, doc = run_json(capsys, "ledger")
        assert code == 0 and doc["results"]["corrected"]

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "doc.json"
        code, out, _ = run(capsys, "ledger", "--out", str(target))
        assert code == 0 and out == "" and json.loads(target.read_text())["command"] == "ledger"

    def test_parse_graph_rate_override(self):
        src = parse_graph("random:n=4,seed=2", 0.5, None)
        assert set(src.graph.beta) == {0.5}
        assert len(set(src.graph.delta)) > 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "metzlerzeta.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--graph", "random:n=6,seed=4", "--checks", "all", "--seed", "3"],
        ["zeta", "walk", "--d", "2", "--N", "3", "--coin", "random", "--u", "0.2", "--seed", "5"],
        ["sis", "--graph", "cycle:n=4", "--beta", "0.2", "--trials", "300", "--seed", "7"],
    ],
)
def test_rerun_is_byte_identical(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[1]
