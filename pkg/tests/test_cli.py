import json

from cluster_friezes.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFrieze:
    def test_trop_table(self, capsys):
        code, out, _ = run(
            capsys,
            "frieze", "--cartan", "A2", "--kind", "trop",
            "--slice", "1,0", "--window", "-1..4",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].split("\t") == ["i\\m", "-1", "0", "1", "2", "3", "4"]
        assert lines[1].split("\t") == ["1", "0", "1", "-1", "1", "0", "0"]
        assert lines[2].split("\t") == ["2", "1", "0", "0", "1", "-1", "1"]

    def test_generic_a(self, capsys):
        code, out, _ = run(
            capsys,
            "frieze", "--cartan", "A2", "--kind", "generic-a", "--window", "0..2",
        )
        assert code == 0
        assert "x1^-1*x2 + x1^-1" in out

    def test_zero_slice(self, capsys):
        code, out, _ = run(
            capsys,
            "frieze", "--cartan", "A2", "--kind", "cluster-additive",
            "--slice", "0,0", "--window", "0..3", "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert all(v == 0 for row in data["rows"] for v in row["values"])

    def test_json_cartan(self, capsys):
        code, out, _ = run(
            capsys,
            "frieze", "--cartan", "[[2,-1],[-1,2]]", "--kind", "trop",
            "--slice", "1,0", "--window", "0..2",
        )
        assert code == 0


class TestMutate:
    def test_matrix_word(self, capsys):
        code, out, _ = run(
            capsys, "mutate", "--B", "[[0,-1],[1,0]]", "--word", "1",
        )
        assert code == 0
        data = json.loads(out)
        assert data["B"] == [[0, 1], [-1, 0]]

    def test_word_reduction(self, capsys):
        code, out, _ = run(
            capsys, "mutate", "--B", "[[0,-1],[1,0]]", "--word", "1,1",
        )
        data = json.loads(out)
        assert data["word"] == [] and data["B"] == [[0, -1], [1, 0]]

    def test_y_seed(self, capsys):
        code, out, _ = run(
            capsys,
            "mutate", "--B", "[[0,-1],[1,0]]", "--word", "1,2", "--kind", "y-seed",
        )
        data = json.loads(out)
        assert data["cluster"][0] == "y2 + y1^-1*y2 + y1^-1"


class TestPairing:
    def test_worked_example(self, capsys):
        code, out, _ = run(
            capsys, "pairing", "--cartan", "A2", "--delta", "1,0", "--rho", "-1,0",
        )
        assert code == 0
        data = json.loads(out)
        assert data["pairing"] == 1
        assert data["via_x_monomial"] == data["via_y_monomial"] == 1

    def test_zero_delta(self, capsys):
        code, out, _ = run(
            capsys, "pairing", "--cartan", "A2", "--delta", "0,0", "--rho", "2,-1",
        )
        assert json.loads(out)["pairing"] == 0

    def test_deterministic_output(self, capsys):
        argv = ["pairing", "--cartan", "B2", "--delta", "2,-1", "--rho", "1,1"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2


class TestOtherCommands:
    def test_monomial(self, capsys):
        code, out, _ = run(
            capsys, "monomial", "--cartan", "A2", "--space", "A", "--coords", "-1,0",
        )
        data = json.loads(out)
        assert data["expression"] == "x1"

    def test_decompose(self, capsys):
        code, out, _ = run(
            capsys, "decompose", "--cartan", "A2", "--slice", "-2,1",
        )
        data = json.loads(out)
        assert code == 0 and data["reconstruction_exact"]
        assert {"i": 1, "m": 0, "multiplicity": 2} in data["hammocks"]

    def test_hammock(self, capsys):
        code, out, _ = run(
            capsys, "hammock", "--cartan", "A2", "--i", "1", "--window", "0..2",
        )
        lines = out.strip().splitlines()
        assert lines[1].split("\t") == ["1", "-1", "1", "0"]

    def test_fpoly(self, capsys):
        code, out, _ = run(capsys, "fpoly", "--cartan", "A2")
        assert "p1*p2 + p2 + 1" in out

    def test_trop(self, capsys):
        code, out, _ = run(
            capsys,
            "trop", "--cartan", "A2", "--space", "A", "--coords", "1,0",
            "--window", "0..3",
        )
        lines = out.strip().splitlines()
        assert lines[1].split("\t")[1:] == ["1", "-1", "1", "0"]


class TestVerifyAndErrors:
    def test_verify_single_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "d-duality", "--types", "A2")
        assert code == 0
        report = json.loads(out)
        assert report["failed"] == 0 and report["rng_seed"] == 0

    def test_verify_byte_identical(self, capsys):
        argv = ["verify", "--suite", "shift-laws", "--types", "A2", "--trials", "20"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_invalid_cartan_exit_2(self, capsys):
        code, _, err = run(
            capsys, "frieze", "--cartan", "Z9", "--kind", "trop", "--slice", "0,0",
        )
        assert code == 2
        assert json.loads(err)["error"] == "ValueError"

    def test_budget_exit_3(self, capsys):
        code, _, err = run(
            capsys,
            "verify", "--suite", "closure-counts", "--types", "A3", "--budget", "2",
        )
        # closure-counts reports budget failures in-band instead of crashing
        assert code == 1

    def test_bad_matrix_exit_2(self, capsys):
        code, _, err = run(capsys, "mutate", "--B", "[[0,1],[1,0]]", "--word", "1")
        assert code == 2

    def test_overflow_exit_3(self, capsys):
        # the triple bond of G2 pushes a near-limit coordinate past 2^63
        big = str(2**62 + 2**61)
        code, _, err = run(
            capsys,
            "trop", "--cartan", "G2", "--space", "A",
            "--coords", f"{big},{big}", "--window", "0..6",
        )
        assert code == 3
        assert json.loads(err)["error"] == "TropOverflow"
