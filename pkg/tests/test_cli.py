"""CLI behavior: exit codes, report determinism, file formats."""

import json

import numpy as np
import pytest

from pmkit import serialize
from pmkit.cli import main


@pytest.fixture()
def example_matrix(tmp_path):
    path = tmp_path / "example.json"
    serialize.write_json(
        str(path), serialize.matrix_to_obj(np.array([[-1.0, -1.0], [4.0, 3.0]]))
    )
    return str(path)


@pytest.fixture()
def identity_matrix(tmp_path):
    path = tmp_path / "id.json"
    serialize.write_json(str(path), serialize.matrix_to_obj(np.eye(2)))
    return str(path)


def read_report(path):
    with open(path) as fh:
        return json.load(fh)


class TestClassify:
    def test_worked_example(self, example_matrix, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["classify", "--input", example_matrix, "--out", str(out), "--seed", "1"])
        assert code == 0
        rpt = read_report(out)
        assert rpt["result"]["verdicts"]["P"] == "no"
        assert rpt["result"]["witnesses"]["P"] == [1]
        assert rpt["result"]["verdicts"]["positive-stable"] == "yes"
        assert rpt["seed"] == 1
        assert "1e-10" in json.dumps(rpt["tolerances"]) or rpt["tolerances"]["minor"] == 1e-10
        summary = capsys.readouterr().out
        assert "P: no" in summary

    def test_csv_input(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(serialize.matrix_to_csv(np.eye(2)))
        out = tmp_path / "r.json"
        assert main(["classify", "--input", str(path), "--out", str(out)]) == 0
        assert read_report(out)["result"]["verdicts"]["P"] == "yes"

    def test_missing_file_usage_error(self, tmp_path):
        assert main(["classify", "--input", str(tmp_path / "nope.json")]) == 2


class TestFactor:
    def test_identity(self, identity_matrix, tmp_path):
        out = tmp_path / "f.json"
        assert main(["factor", "--input", identity_matrix, "--out", str(out)]) == 0
        rpt = read_report(out)
        assert rpt["result"]["left_is_P"] == "yes"
        assert rpt["result"]["residual"] <= 1e-8

    def test_non_p_rejected(self, example_matrix):
        assert main(["factor", "--input", example_matrix]) == 2


class TestPset:
    def test_values_flag(self, tmp_path, capsys):
        out = tmp_path / "p.json"
        assert main(["pset", "--values", "1,1", "--out", str(out)]) == 0
        rpt = read_report(out)
        assert rpt["result"]["is_P_set"] == "yes"
        assert rpt["result"]["sigma"] == [2.0, 1.0]

    def test_complex_values(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["pset", "--values", "1+2i,1-2i", "--out", str(out)]) == 0
        assert read_report(out)["result"]["sigma"] == [2.0, 5.0]


class TestLcp:
    @pytest.fixture()
    def instance(self, tmp_path):
        path = tmp_path / "inst.json"
        serialize.write_json(
            str(path), serialize.lcp_instance_to_obj(np.eye(2), [-1.0, 2.0])
        )
        return str(path)

    def test_solve(self, instance, tmp_path):
        out = tmp_path / "s.json"
        assert main(["lcp", "solve", "--input", instance, "--out", str(out)]) == 0
        rpt = read_report(out)
        assert rpt["result"]["z"] == [1.0, 0.0]
        assert rpt["result"]["basis"] == [1]

    def test_enumerate(self, instance, tmp_path):
        out = tmp_path / "e.json"
        assert main(["lcp", "enumerate", "--input", instance, "--out", str(out)]) == 0
        assert read_report(out)["result"]["count"] == 1

    def test_census(self, instance, tmp_path):
        out = tmp_path / "c.json"
        assert (
            main(["lcp", "census", "--input", instance, "--trials", "40", "--out", str(out), "--seed", "3"])
            == 0
        )
        rpt = read_report(out)
        assert rpt["result"]["verdict"] == "consistent-with-P"
        assert rpt["result"]["counts"]["one"] == 40


class TestOpsim:
    @pytest.fixture()
    def inv_sq_spec(self, tmp_path):
        path = tmp_path / "spec.json"
        serialize.write_json(
            str(path),
            {"kind": "diagonal", "rule": {"name": "inverse-square-diagonal", "params": {"c": 1.0}}, "decay": True},
        )
        return str(path)

    def test_sqrt(self, inv_sq_spec, tmp_path):
        out = tmp_path / "sq.json"
        assert main(["opsim", "sqrt", "--spec", inv_sq_spec, "--order", "4", "--out", str(out)]) == 0
        rpt = read_report(out)
        assert rpt["result"]["square_residual"] <= 1e-12
        assert rpt["result"]["root"]["rows"][1][1] == 0.5

    def test_minmax(self, tmp_path):
        spec = tmp_path / "pos.json"
        serialize.write_json(
            str(spec),
            {"kind": "dense-rule", "rule": {"name": "matrix-literal", "params": {"matrix": [[1.0, 1.0], [1.0, 1.0]]}}, "decay": False},
        )
        out = tmp_path / "mm.json"
        assert main(["opsim", "minmax", "--spec", str(spec), "--order", "2", "--out", str(out)]) == 0
        assert abs(read_report(out)["result"]["rho"] - 2.0) <= 1e-8

    def test_interp(self, tmp_path):
        spec = tmp_path / "pair.json"
        ident = {"kind": "dense-rule", "rule": {"name": "matrix-literal", "params": {"matrix": []}}, "decay": False}
        serialize.write_json(str(spec), {"s": ident, "t": ident})
        out = tmp_path / "ip.json"
        assert main(["opsim", "interp", "--spec", str(spec), "--order", "3", "--trials", "10", "--out", str(out)]) == 0
        assert read_report(out)["result"]["violations"] == []

    def test_csuff(self, tmp_path):
        spec = tmp_path / "diag.json"
        serialize.write_json(
            str(spec),
            {"kind": "dense-rule", "rule": {"name": "matrix-literal", "params": {"matrix": [[1.0, 0.0], [0.0, -1.0]]}}, "decay": False},
        )
        out = tmp_path / "cs.json"
        assert main(["opsim", "csuff", "--spec", str(spec), "--order", "2", "--out", str(out)]) == 0
        rpt = read_report(out)
        assert rpt["result"]["refuted"] is True
        assert rpt["result"]["consistent"] is True

    def test_rev(self, inv_sq_spec, tmp_path):
        out = tmp_path / "rev.json"
        assert (
            main(["opsim", "rev", "--spec", inv_sq_spec, "--order", "2", "--x", "1,-1", "--out", str(out)])
            == 0
        )
        assert read_report(out)["result"]["in_rev"] is False


class TestGen:
    def test_generated_file_feeds_classify(self, tmp_path):
        out = tmp_path / "m.json"
        assert main(["gen", "--class", "P-diagdom", "--n", "6", "--seed", "7", "--out", str(out)]) == 0
        m = serialize.matrix_from_obj(read_report(out))
        assert m.shape == (6, 6)
        report = tmp_path / "r.json"
        assert main(["classify", "--input", str(out), "--out", str(report)]) == 0
        assert read_report(report)["result"]["verdicts"]["P"] == "yes"

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["gen", "--class", "M-matrix", "--n", "4", "--seed", "9", "--out", str(a)])
        main(["gen", "--class", "M-matrix", "--n", "4", "--seed", "9", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_unknown_class(self):
        assert main(["gen", "--class", "bogus", "--n", "3"]) == 2


class TestSuite:
    def test_unknown_suite_exit_2(self):
        assert main(["suite", "bogus", "--quiet"]) == 2

    def test_operator_suite_exit_0(self, tmp_path):
        out = tmp_path / "suite.json"
        code = main(["suite", "operator", "--seed", "2", "--out", str(out), "--quiet"])
        assert code == 0
        rpt = read_report(out)
        assert rpt["result"]["contradictions"] == 0

    def test_determinism_modulo_timestamp(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["suite", "operator", "--seed", "4", "--out", str(a), "--quiet"]) == 0
        assert main(["suite", "operator", "--seed", "4", "--out", str(b), "--quiet"]) == 0
        ta = a.read_text().splitlines()
        tb = b.read_text().splitlines()
        diff = [(x, y) for x, y in zip(ta, tb) if x != y]
        # byte-identical except the timestamp line
        assert len(ta) == len(tb)
        assert all("timestamp" in x for x, _ in diff)


class TestUsage:
    def test_no_command(self):
        assert main([]) == 2

    def test_pset_requires_source(self):
        assert main(["pset"]) == 2
