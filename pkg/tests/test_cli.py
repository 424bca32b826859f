import csv
import json
import math

import numpy as np
import pytest

from twodist import cli, oracle
from twodist.edm import Configuration
from twodist.graphs import cycle_graph, encode_graph6, parse_graph6


def run(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_c5_json(self, capsys):
        code, out, _ = run(["analyze", "--g6", encode_graph6(cycle_graph(5))], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["tool"] == "twodist"
        assert doc["dim_e"] == 2 and doc["dim_s"] == 2 and doc["dim_j"] == 4
        assert doc["beta_l"] == pytest.approx((3 - math.sqrt(5)) / 2)

    def test_pretty_flag(self, capsys):
        code, out, _ = run(["analyze", "--g6", "DUW", "--pretty"], capsys)
        assert code == 0 and out.startswith("{\n")

    def test_degenerate_graph_reports_nulls(self, capsys):
        code, out, _ = run(["analyze", "--g6", "D~{"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["degenerate"] and doc["dim_e"] is None

    def test_edge_list_input(self, tmp_path, capsys):
        path = tmp_path / "c4.txt"
        path.write_text("4\n0 1\n1 2\n2 3\n0 3\n")
        code, out, _ = run(["analyze", "--edges", str(path)], capsys)
        assert code == 0
        assert json.loads(out)["class"] == "complete_multipartite"

    def test_bad_graph6_exits_2(self, capsys):
        code, _, err = run(["analyze", "--g6", "~~~"], capsys)
        assert code == 2 and "error" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, _ = run(["analyze", "--edges", "/nonexistent/g.txt"], capsys)
        assert code == 2


class TestEmbed:
    def read_config(self, path):
        with open(path, newline="") as fh:
            rows = [[float(x) for x in row] for row in csv.reader(fh)]
        return Configuration(np.array(rows), "centroid")

    def test_euclidean_round_trip(self, tmp_path, capsys):
        out = tmp_path / "c5.csv"
        g6 = encode_graph6(cycle_graph(5))
        code, _, _ = run(["embed", "--g6", g6, "--mode", "euclidean",
                          "--beta", "2.0", "--out", str(out)], capsys)
        assert code == 0
        config = self.read_config(out)
        assert oracle.verify_two_distance(config, cycle_graph(5), 1.0, 2.0).passed
        sidecar = json.loads((tmp_path / "c5.csv.json").read_text())
        assert sidecar["mode"] == "euclidean" and sidecar["beta"] == 2.0

    def test_spherical_mode(self, tmp_path, capsys, bow_tie):
        out = tmp_path / "bt.csv"
        g6 = encode_graph6(bow_tie)
        code, _, _ = run(["embed", "--g6", g6, "--mode", "spherical",
                          "--side", "lower", "--out", str(out)], capsys)
        assert code == 0
        sidecar = json.loads((tmp_path / "bt.csv.json").read_text())
        assert sidecar["radius"] == pytest.approx(1 / math.sqrt(3), abs=1e-9)
        config = self.read_config(out)
        assert oracle.verify_two_distance(config, bow_tie, 1.0, 0.5).passed

    def test_jspherical_mode(self, tmp_path, capsys, bow_tie):
        out = tmp_path / "btj.csv"
        code, _, _ = run(["embed", "--g6", encode_graph6(bow_tie),
                          "--mode", "jspherical", "--out", str(out)], capsys)
        assert code == 0
        config = self.read_config(out)
        assert np.allclose(np.sum(config.points ** 2, axis=1), 1.0, atol=1e-9)
        assert oracle.verify_two_distance(config, bow_tie, 2.0, 3.0).passed

    def test_euclidean_requires_beta(self, tmp_path, capsys):
        code, _, err = run(["embed", "--g6", "DUW", "--mode", "euclidean",
                            "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 2 and "--beta" in err

    def test_infeasible_beta_exits_4(self, tmp_path, capsys, bow_tie):
        code, _, _ = run(["embed", "--g6", encode_graph6(bow_tie), "--mode",
                          "euclidean", "--beta", "4.0",
                          "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 4

    def test_nonspherical_endpoint_exits_4(self, tmp_path, capsys, bow_tie):
        code, _, err = run(["embed", "--g6", encode_graph6(bow_tie), "--mode",
                            "spherical", "--side", "upper",
                            "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 4 and "not spherical" in err

    def test_degenerate_exits_4(self, tmp_path, capsys):
        code, _, _ = run(["embed", "--g6", "D~{", "--mode", "jspherical",
                          "--out", str(tmp_path / "x.csv")], capsys)
        assert code == 4


class TestSweep:
    def test_small_sweep(self, tmp_path, capsys):
        out = tmp_path / "sweep.json"
        code, _, _ = run(["sweep", "--n", "4", "--out", str(out)], capsys)
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["violation_count"] == 0
        assert doc["per_n"]["4"] == 64

    def test_stdout_when_no_out(self, capsys):
        code, out, _ = run(["sweep", "--n", "3"], capsys)
        assert code == 0
        assert json.loads(out)["graphs_checked"] == 10

    def test_rejects_big_n(self, capsys):
        code, _, err = run(["sweep", "--n", "9"], capsys)
        assert code == 2 and "n_max too large" in err
