"""End-to-end tests for the rieszlab command line."""

import json

import pytest

from riesz_lab.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured


def report_of(captured):
    return json.loads(captured.out)


class TestExitCodes:
    """0 on pass, 1 on a failing verdict, 2 on bad input."""

    def test_eval(self, capsys):
        code, captured = run(capsys, "fn", "eval", "--fn", "tplus", "--at", "1/2")
        assert code == 0
        report = report_of(captured)
        assert report["command"] == "fn eval"
        assert report["result"] == "1/2"
        assert report["verdict"] == "pass"

    def test_band_status(self, capsys):
        code, captured = run(capsys, "ideal", "band-status", "--principal", "tplus")
        assert code == 0
        assert report_of(captured)["verdict"] == "BandOnly"

    @pytest.mark.parametrize("region, expected", [("(0,1]", 0), ("[0,1]", 1)])
    def test_predicate_answer_sets_exit_code(self, capsys, region, expected):
        code, captured = run(capsys, "region", "is_regular_open", "--region", region)
        assert code == expected
        assert report_of(captured)["verdict"] == ("true" if expected == 0 else "false")

    def test_non_distributive_lattice_fails(self, capsys):
        code, captured = run(capsys, "lattice", "distributive", "--named", "N5")
        assert code == 1
        report = report_of(captured)
        assert report["verdict"] == "not distributive"
        assert len(report["result"]["witness"]) == 3

    def test_unknown_function(self, capsys):
        code, captured = run(capsys, "fn", "eval", "--fn", "sin", "--at", "0")
        assert code == 2
        assert "Error:" in captured.err
        assert "unknown function" in captured.err
        assert captured.out == ""

    def test_missing_option(self, capsys):
        code, captured = run(capsys, "fn", "eval", "--fn", "tplus")
        assert code == 2
        assert "--at is required" in captured.err

    def test_usage_error(self, capsys):
        code, _ = run(capsys, "fn", "integrate")
        assert code == 2

    def test_non_positive_workers(self, capsys):
        code, captured = run(capsys, "check", "even-sum", "--workers", "0")
        assert code == 2
        assert "Error:" in captured.err


class TestCommands:
    def test_even_sum(self, capsys):
        code, captured = run(capsys, "check", "even-sum")
        assert code == 0
        assert report_of(captured)["result"]["even_near_zero"] == "Out"

    def test_telescope(self, capsys):
        code, captured = run(capsys, "telescope", "--space", "unit", "--fn", "one",
                             "--region", "(0,1]", "--count", "5")
        assert code == 0
        report = report_of(captured)
        assert len(report["result"]["parts"]) == 5
        assert report["inputs"]["count"] == 5

    def test_pseudo_complement(self, capsys):
        code, captured = run(capsys, "lattice", "pseudo", "--divisors", "12",
                             "--element", "2")
        assert code == 0
        assert report_of(captured)["result"] == "3"

    def test_glivenko_on_downsets(self, capsys):
        code, _ = run(capsys, "check", "glivenko", "--fence", "3", "--downsets")
        assert code == 0

    def test_principal_identities(self, capsys):
        code, captured = run(capsys, "ideal", "principal-identities", "--fn", "tplus",
                             "--fn2", "tminus", "--samples", "5", "--recheck")
        assert code == 0
        report = report_of(captured)
        assert report["result"] is None
        assert report["recheck"]["mismatches"] == []

    def test_recheck_flag(self, capsys):
        code, captured = run(capsys, "fn", "join", "--fn", "identity", "--fn2", "tminus",
                             "--recheck")
        assert code == 0
        report = report_of(captured)
        assert report["recheck"]["mismatches"] == []
        assert report["recheck"]["certificates"] == len(report["certificates"])


class TestSavedReports:
    """--out writes deterministic files that recheck can re-verify."""

    def test_out_directory_and_recheck(self, capsys, tmp_path):
        code, _ = run(capsys, "check", "even-sum", "--out", str(tmp_path))
        assert code == 0
        path = tmp_path / "check-even-sum.json"
        assert path.is_file()

        code, captured = run(capsys, "recheck", str(path))
        assert code == 0
        report = report_of(captured)
        assert report["verdict"] == "confirmed"
        assert report["result"]["source_command"] == "check even-sum"

    def test_tampered_report(self, capsys, tmp_path):
        path = tmp_path / "eval.json"
        run(capsys, "fn", "eval", "--fn", "abs", "--at=-1/3", "--out", str(path))
        data = json.loads(path.read_text(encoding="utf-8"))
        data["certificates"][0]["args"]["value"] = "1/2"
        path.write_text(json.dumps(data), encoding="utf-8")

        code, captured = run(capsys, "recheck", str(path))
        assert code == 1
        mismatch = report_of(captured)["result"]["mismatches"][0]
        assert mismatch["index"] == 0
        assert mismatch["recomputed"] is False

    def test_tampered_pseudo_complement(self, capsys, tmp_path):
        path = tmp_path / "pseudo.json"
        code, _ = run(capsys, "lattice", "pseudo", "--divisors", "12", "--element", "4",
                      "--out", str(path))
        assert code == 0
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["result"] == "3"
        code, _ = run(capsys, "recheck", str(path))
        assert code == 0

        data["result"] = data["verdict"] = "12"
        path.write_text(json.dumps(data), encoding="utf-8")
        code, captured = run(capsys, "recheck", str(path))
        assert code == 1
        mismatch = report_of(captured)["result"]["mismatches"][0]
        assert mismatch["recorded"] is True
        assert mismatch["recomputed"] is False

    def test_tampered_star_argument(self, capsys, tmp_path):
        path = tmp_path / "pseudo.json"
        run(capsys, "lattice", "pseudo", "--divisors", "12", "--element", "4",
            "--out", str(path))
        data = json.loads(path.read_text(encoding="utf-8"))
        data["result"] = data["certificates"][0]["args"]["star"] = "1"
        path.write_text(json.dumps(data), encoding="utf-8")
        code, _ = run(capsys, "recheck", str(path))
        assert code == 1

    def test_tampered_member_status(self, capsys, tmp_path):
        path = tmp_path / "member.json"
        code, _ = run(capsys, "ideal", "member", "--principal", "tplus", "--fn", "abs",
                      "--out", str(path))
        assert code == 1
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["result"]["status"] == "Out"
        data["result"]["status"] = "In"
        path.write_text(json.dumps(data), encoding="utf-8")
        code, _ = run(capsys, "recheck", str(path))
        assert code == 1

    @pytest.mark.parametrize("argv", [
        ("lattice", "ideals", "--named", "N5"),
        ("lattice", "validate", "--fence", "3"),
        ("lattice", "validate", "--divisors", "12"),
        ("ideal", "band-generated", "--region-ideal", "(1/4,1/2]"),
        ("ideal", "band-status", "--principal", "tplus"),
        ("ideal", "local-projection", "--principal", "tplus", "--fn", "one"),
        ("urysohn", "ideal-coincide", "--principal", "tplus", "--fn", "one",
         "--region", "[1/2,1]"),
    ])
    def test_saved_reports_recheck(self, capsys, tmp_path, argv):
        path = tmp_path / "report.json"
        run(capsys, *argv, "--out", str(path))
        code, captured = run(capsys, "recheck", str(path))
        assert code == 0
        assert report_of(captured)["result"]["mismatches"] == []

    def test_tampered_lattice_verdict(self, capsys, tmp_path):
        path = tmp_path / "validate.json"
        code, _ = run(capsys, "lattice", "validate", "--fence", "3", "--out", str(path))
        assert code == 1
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["certificates"][0]["claim"] == "is_lattice"
        data["result"]["lattice"] = True
        path.write_text(json.dumps(data), encoding="utf-8")
        code, _ = run(capsys, "recheck", str(path))
        assert code == 1

    def test_out_directory_created(self, capsys, tmp_path):
        target = str(tmp_path / "new") + "/"
        code, _ = run(capsys, "fn", "eval", "--fn", "tplus", "--at", "1/2", "--out", target)
        assert code == 0
        path = tmp_path / "new" / "fn-eval.json"
        assert path.is_file()
        assert json.loads(path.read_text(encoding="utf-8"))["result"] == "1/2"

    def test_suffixless_out_is_a_directory(self, capsys, tmp_path):
        code, _ = run(capsys, "check", "even-sum", "--out", str(tmp_path / "reports"))
        assert code == 0
        assert (tmp_path / "reports" / "check-even-sum.json").is_file()

    def test_reports_are_byte_identical(self, capsys, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for path in (first, second):
            run(capsys, "check", "self-majorizing", "--fn", "tplus", "--samples", "5",
                "--seed", "7", "--out", str(path))
        assert first.read_bytes() == second.read_bytes()


class TestParser:
    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["urysohn", "split", "--fn", "abs", "--region", "[-1,0)",
                                  "--region2", "(0,1]", "--workers", "2"])
        assert args.command == "urysohn"
        assert args.op == "split"
        assert args.workers == 2

    def test_grid_option(self):
        args = build_parser().parse_args(["check", "order-bounded", "--region-ideal", "(0,1]",
                                          "--grid", "1/2:1"])
        assert len(args.grid) == 1
