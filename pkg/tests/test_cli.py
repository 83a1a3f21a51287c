import json

import pytest

from prodschur.cli import (
    EXIT_GUARD,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_USAGE,
    colouring_from_text,
    colouring_to_text,
    main,
    subset_to_text,
)
from prodschur.core import IntegerSubset, Interval, TripleSystem
from prodschur.constructions import mod5_colouring, verify_colouring_free


class TestTextFormat:
    def test_round_trip_colouring(self):
        _, col = mod5_colouring(23)
        text = colouring_to_text(col)
        assert text.splitlines()[0] == "# interval 1 23 2"
        back = colouring_from_text(text)
        assert back == col
        assert verify_colouring_free(back, TripleSystem.SUM) == []

    def test_round_trip_subset(self):
        A = IntegerSubset.from_members(Interval(2, 30), [2, 17, 29])
        back = colouring_from_text(subset_to_text(A))
        assert back.ground == A
        assert back.k == 1

    def test_missing_header(self):
        with pytest.raises(ValueError):
            colouring_from_text("1 1\n2 2\n")


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        assert main(["schur"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_bad_subcommand_usage(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_schur_ok(self, capsys):
        assert main(["schur", "--k", "2"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "value: 5" in out

    def test_schur_inconclusive_is_two(self, capsys):
        assert main(["schur", "--k", "3", "--node-limit", "20"]) == EXIT_INCONCLUSIVE
        assert "inconclusive" in capsys.readouterr().out

    def test_guard_is_three(self, capsys):
        assert main(["schur", "--k", "6"]) == EXIT_GUARD
        assert "guard" in capsys.readouterr().err

    def test_value_error_is_usage(self, capsys):
        assert main(["gstar", "--k", "2", "--n", "100", "--eps", "2.0"]) == EXIT_USAGE


class TestCommands:
    def test_gstar(self, capsys):
        assert main(["gstar", "--k", "2", "--n", "1000000", "--eps", "0.5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "lower: 999984.15" in out
        assert "upper_condition_met: False" in out

    def test_count_triples(self, capsys):
        assert main(["count", "--what", "triples", "--n", "100"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "off_diagonal: 137" in out

    def test_count_divisors(self, capsys):
        assert main(["count", "--what", "divisors", "--n", "100"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "max: 12" in out and "argmax: 60" in out

    def test_count_table(self, capsys):
        assert main(["count", "--what", "table", "--n", "20",
                     "--y", "2", "--z", "5"]) == EXIT_OK
        assert "exact: 10" in capsys.readouterr().out

    def test_count_supersat(self, capsys):
        assert main(["count", "--what", "supersat", "--n", "100"]) == EXIT_OK
        assert "count: 81" in capsys.readouterr().out

    def test_count_mono_requires_name(self, capsys):
        assert main(["count", "--what", "mono", "--n", "100"]) == EXIT_USAGE

    def test_count_mono_mod5(self, capsys):
        assert main(["count", "--what", "mono", "--n", "100",
                     "--name", "mod5"]) == EXIT_OK
        assert "monochromatic: 0" in capsys.readouterr().out

    def test_construct_writes_artifact_and_manifest(self, tmp_path, capsys):
        out = tmp_path / "mod5.txt"
        assert main(["construct", "--name", "mod5", "--n", "50",
                     "--out", str(out)]) == EXIT_OK
        err = capsys.readouterr().err
        assert "violations: 0" in err
        text = out.read_text()
        back = colouring_from_text(text)
        assert verify_colouring_free(back, TripleSystem.SUM) == []
        manifest = json.loads((tmp_path / "mod5.txt.manifest.json").read_text())
        assert manifest["version"]
        assert manifest["config_digest"]

    def test_construct_blocker(self, tmp_path, capsys):
        out = tmp_path / "blocker.txt"
        code = main(["construct", "--name", "blocker", "--n", "10000",
                     "--alpha", "0.5226495409595402", "--out", str(out)])
        assert code == EXIT_OK
        assert "product_triple_free: True" in capsys.readouterr().err

    def test_threshold_csv_deterministic(self, tmp_path):
        args = ["threshold", "--n", "2000", "--c", "0.3,3", "--trials", "10",
                "--seed", "11"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == EXIT_OK
        assert main(args + ["--out", str(out2)]) == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()
        header = out1.read_text().splitlines()[0]
        assert header == "n,c,p,trials,successes,frequency"

    def test_perturbed_csv_columns(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["perturbed", "--n", "10000", "--c", "0.1,2",
                     "--trials", "5", "--seed", "3", "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == ("n,c,p,trials,successes,frequency,"
                            "alpha,beta_alpha,blocker_size")
        assert len(lines) == 3
