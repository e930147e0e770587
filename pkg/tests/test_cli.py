import argparse
import json

import pytest

from quasinet.cli import build_parser, format_architecture, main, parse_architecture
from quasinet.network import LayerSpec


class TestArchitectureParsing:
    def test_roundtrip(self):
        layers = parse_architecture("tanh:10,prod:80,tanh:5,prod:1")
        assert [(l.kind, l.size) for l in layers] == [
            ("tanh_sum", 10), ("product", 80), ("tanh_sum", 5), ("product", 1)
        ]
        assert format_architecture(layers) == "tanh:10,prod:80,tanh:5,prod:1"

    def test_whitespace_tolerated(self):
        layers = parse_architecture(" tanh:2 , prod:1 ")
        assert len(layers) == 2

    @pytest.mark.parametrize("bad", ["dense:3", "tanh", "tanh:x", "tanh:0", "tanh:2:3", ""])
    def test_bad_tokens_rejected(self, bad):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_architecture(bad)

    def test_format_uses_short_names(self):
        assert format_architecture([LayerSpec("product", 7)]) == "prod:7"


class TestParser:
    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_xor_defaults(self):
        args = build_parser().parse_args(["xor"])
        assert args.lr == 0.9 and args.init_std == 1.0
        assert args.epochs == 500 and args.runs == 100 and args.seed == 0

    def test_parity_defaults(self):
        args = build_parser().parse_args(["parity", "--n", "5"])
        assert args.lr == 0.9 and args.epochs == 10000 and args.runs == 100

    def test_spirals_defaults(self):
        args = build_parser().parse_args(["spirals"])
        assert args.lr == 0.01 and args.init_std == 0.5
        assert args.epochs == 10000 and args.runs == 10
        assert args.points == 2000 and args.turns == 3.0 and args.train_frac == 0.8

    def test_parity_requires_n(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["parity"])


class TestCommands:
    def test_xor_writes_outputs(self, tmp_path, capsys):
        csv_path = tmp_path / "xor.csv"
        json_path = tmp_path / "xor.json"
        rc = main(["xor", "--runs", "3", "--epochs", "100",
                   "--out-csv", str(csv_path), "--out-json", str(json_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "task=xor arch=tanh:2,prod:1" in out
        assert "converged" in out
        lines = csv_path.read_text().strip().split("\n")
        assert len(lines) == 4  # header + 3 runs
        doc = json.loads(json_path.read_text())
        assert doc["config"]["task"] == "xor"
        assert doc["summary"]["runs"] == 3

    def test_xor_csv_byte_identical_across_invocations(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["xor", "--runs", "3", "--epochs", "100", "--out-csv", str(p1)])
        main(["xor", "--runs", "3", "--epochs", "100", "--out-csv", str(p2)])
        assert p1.read_bytes() == p2.read_bytes()

    def test_parity_baseline_arch(self, capsys):
        rc = main(["parity", "--n", "3", "--baseline", "--runs", "2", "--epochs", "50"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "task=parity3-mlp arch=tanh:4,tanh:1" in out

    def test_custom_arch_respected(self, capsys):
        rc = main(["xor", "--arch", "tanh:3,prod:1", "--runs", "2", "--epochs", "50"])
        assert rc == 0
        assert "arch=tanh:3,prod:1" in capsys.readouterr().out

    def test_spirals_small(self, tmp_path, capsys):
        data_csv = tmp_path / "spirals.csv"
        rc = main(["spirals", "--points", "40", "--runs", "1", "--epochs", "20",
                   "--eval-every", "10", "--arch", "tanh:3,prod:1",
                   "--out-data-csv", str(data_csv)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "mean_test_accuracy" in out
        assert data_csv.read_text().startswith("x,y,label")

    def test_gradcheck_passes_on_small_arch(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        rc = main(["gradcheck", "--arch", "tanh:3,prod:1", "--samples", "2",
                   "--out-json", str(report_path)])
        assert rc == 0
        assert "PASS" in capsys.readouterr().out
        doc = json.loads(report_path.read_text())
        assert doc["passed"] is True
        assert doc["max_rel_err"] < 1e-6

    def test_sweep_reports_best(self, tmp_path, capsys):
        json_path = tmp_path / "sweep.json"
        rc = main(["sweep", "--n", "2", "--h-min", "2", "--h-max", "3",
                   "--runs", "3", "--epochs", "100", "--out-json", str(json_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "best hidden size:" in out
        doc = json.loads(json_path.read_text())
        assert doc["best_h"] in (2, 3)
        assert doc["h_values"] == [2, 3]

    def test_error_paths_exit_two(self, tmp_path, capsys):
        rc = main(["xor", "--runs", "2", "--epochs", "50",
                   "--out-csv", str(tmp_path / "no" / "such" / "dir" / "x.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err
