"""Command-line interface: output shapes, exit codes, and determinism.

All tests invoke main(argv) in-process and capture stdout/stderr."""

import pytest

from deadend import cli
from deadend.cli import main

BIG_DEAD_END = "231546210170694222"


class TestDensity:
    def test_base10(self, capsys):
        assert main(["density", "--base", "10", "--digits", "12"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("c_dead(10) = ")
        assert "1.31705520658" in out
        assert "+/-" in out

    def test_base2(self, capsys):
        assert main(["density", "--base", "2", "--digits", "8"]) == 0
        assert "0.041325318" in capsys.readouterr().out

    def test_bad_base_is_usage_error(self, capsys):
        assert main(["density", "--base", "1"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_low_digits_is_usage_error(self):
        assert main(["density", "--digits", "4"]) == 2

    def test_precision_failure_exit_code(self, capsys, monkeypatch):
        def boom(base, precision):
            raise cli.PrecisionError("demanded digits not achievable")

        monkeypatch.setattr(cli.euler, "dead_end_constant", boom)
        assert main(["density"]) == 4
        assert "precision failure" in capsys.readouterr().err


class TestEnumerate:
    def test_base2_stream(self, capsys):
        assert main(["enumerate", "--base", "2", "--limit", "200"]) == 0
        captured = capsys.readouterr()
        assert captured.out.split() == ["22", "58", "62", "94", "122", "130", "166"]
        assert "found 7 dead ends up to 200 in base 2" in captured.err

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "ends.txt"
        assert main(["enumerate", "--base", "2", "--limit", "200", "--out", str(path)]) == 0
        assert path.read_text().split() == ["22", "58", "62", "94", "122", "130", "166"]
        assert capsys.readouterr().out == ""

    def test_zero_limit_is_usage_error(self):
        assert main(["enumerate", "--base", "2", "--limit", "0"]) == 2

    def test_missing_limit_is_usage_error(self):
        assert main(["enumerate", "--base", "2"]) == 2


class TestVerify:
    def test_confirms_big_dead_end(self, capsys):
        assert main(["verify", BIG_DEAD_END]) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0] == f"dead end confirmed: {BIG_DEAD_END} (base 10)"
        assert lines[1] == "digit,child,prime,exponent"
        primes = [int(line.split(",")[2]) for line in lines[2:]]
        assert primes == [2, 11, 19, 7, 2, 5, 3, 13, 2, 17]
        exponents = [int(line.split(",")[3]) for line in lines[2:]]
        assert exponents == [2, 2, 2, 2, 4, 2, 3, 2, 2, 2]

    def test_refutes(self, capsys):
        assert main(["verify", "5"]) == 1
        assert "refuted:" in capsys.readouterr().out

    def test_unverifiable_exit_code(self, capsys):
        assert main(["verify", BIG_DEAD_END, "--factor-bound", "2"]) == 3
        assert "unverifiable" in capsys.readouterr().err

    def test_base2(self, capsys):
        assert main(["verify", "22", "--base", "2"]) == 0
        out = capsys.readouterr().out
        assert "dead end confirmed: 22 (base 2)" in out


class TestQs:
    def test_plain_count(self, capsys):
        assert main(["qs", "--subset", "", "--limit", "1000000"]) == 0
        out = capsys.readouterr().out
        assert "count: 607926" in out
        assert "reference:" in out

    def test_sifted_count(self, capsys):
        assert main(["qs", "--subset", "0,5", "--limit", "100000", "--z", "5"]) == 0
        out = capsys.readouterr().out
        assert "count:" in out and "reference:" in out
        assert "bound: 900" in out

    def test_malformed_subset_is_usage_error(self, capsys):
        assert main(["qs", "--subset", "x,y", "--limit", "100"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_subset_digit_out_of_base(self):
        assert main(["qs", "--base", "2", "--subset", "5", "--limit", "100"]) == 2


class TestModel:
    def test_base10_labels(self, capsys):
        assert main(["model", "--base", "10"]) == 0
        out = capsys.readouterr().out
        assert "label: model\n" in out
        assert "P1: 8.5835754" in out
        assert "ell: 8.59502163" in out
        assert "predicted_density: 5.2181881" in out
        assert "gap_ratio: 39620.1" in out

    def test_generalized_label(self, capsys):
        assert main(["model", "--base", "2", "--max-iter", "500"]) == 0
        out = capsys.readouterr().out
        assert "label: model (generalized)" in out
        assert "ell: 0.41593995" in out

    def test_non_convergence_message(self, capsys):
        assert main(["model", "--base", "2", "--max-iter", "3"]) == 0
        assert "not converged within 3 iterations" in capsys.readouterr().out

    def test_bad_tol_is_usage_error(self):
        assert main(["model", "--tol", "0"]) == 2

    def test_bad_max_iter_is_usage_error(self):
        assert main(["model", "--max-iter", "0"]) == 2


class TestWalk:
    def test_greedy_transcript(self, capsys):
        assert main(["walk", "--start", "5", "--steps", "2"]) == 0
        captured = capsys.readouterr()
        assert captured.out == "0,,5,alive\n1,1,51,alive\n2,0,510,alive\n"
        assert "status: alive" in captured.err

    def test_seeded_walks_identical(self, capsys):
        argv = ["walk", "--start", "7", "--strategy", "random", "--steps", "8", "--seed", "11"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_dead_end_start(self, capsys):
        assert main(["walk", "--start", BIG_DEAD_END, "--steps", "4"]) == 0
        captured = capsys.readouterr()
        assert captured.out == f"0,,{BIG_DEAD_END},dead-end\n"
        assert "status: dead-end" in captured.err

    def test_non_squarefree_start_is_usage_error(self, capsys):
        assert main(["walk", "--start", "4"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unverifiable_is_exit_3(self, capsys):
        assert main(["walk", "--start", "5", "--factor-bound", "2"]) == 3
        captured = capsys.readouterr()
        assert captured.out.endswith("unverifiable\n")


class TestReport:
    def test_text_format(self, capsys):
        assert main(["report", "--base", "2", "--limit", "2000", "--checkpoints", "1000"]) == 0
        out = capsys.readouterr().out
        assert "base: 2" in out
        assert "checkpoints:" in out

    def test_csv_format(self, capsys):
        argv = [
            "report", "--base", "2", "--limit", "2000",
            "--checkpoints", "500,1000", "--format", "csv",
        ]
        assert main(argv) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "x,count,density"
        assert [int(line.split(",")[0]) for line in lines[1:]] == [500, 1000, 2000]

    def test_csv_deterministic(self, capsys):
        argv = ["report", "--base", "2", "--limit", "3000", "--format", "csv"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.csv"
        argv = ["report", "--base", "2", "--limit", "1000", "--format", "csv", "--out", str(path)]
        assert main(argv) == 0
        assert path.read_text().startswith("x,count,density\n")

    def test_bogus_format_is_usage_error(self):
        assert main(["report", "--base", "2", "--limit", "100", "--format", "bogus"]) == 2

    def test_unsorted_checkpoints_is_usage_error(self):
        assert main(["report", "--base", "2", "--limit", "1000", "--checkpoints", "900,300"]) == 2


class TestParser:
    def test_no_arguments_is_usage_error(self):
        assert main([]) == 2

    def test_unknown_subcommand_is_usage_error(self):
        assert main(["frobnicate"]) == 2

    def test_exit_codes_are_distinct(self):
        codes = {
            cli.EXIT_OK,
            cli.EXIT_REFUTED,
            cli.EXIT_USAGE,
            cli.EXIT_UNVERIFIABLE,
            cli.EXIT_PRECISION,
        }
        assert codes == {0, 1, 2, 3, 4}

    def test_console_entry_point_matches(self):
        import importlib.metadata as md

        eps = md.entry_points()
        scripts = eps.select(group="console_scripts") if hasattr(eps, "select") else eps["console_scripts"]
        ours = [ep for ep in scripts if ep.name == "deadend"]
        assert ours and ours[0].value == "deadend.cli:main_entry"
