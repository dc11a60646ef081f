import json
import math
import subprocess
import sys

import pytest

from pqdurrmeyer.cli import EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_OK, main
from pqdurrmeyer.experiments import ConvergenceReport
from pqdurrmeyer.functions import (
    BUILTINS,
    EvaluationError,
    FunctionSpec,
    ParseError,
    RegistryError,
    horner,
    monomial,
    parse_function,
)


class TestParseFunction:
    def test_quad(self):
        f = parse_function("poly:5,-4,9")
        assert f.coefficients == (5.0, -4.0, 9.0)
        assert f.domain == (0.0, 2.0)
        for x in (0.0, 0.3, 1.7):
            assert f(x) == pytest.approx(9 * x * x - 4 * x + 5)

    def test_builtins(self):
        f = parse_function("builtin:sinmix")
        assert f.domain == BUILTINS["sinmix"].domain
        assert f(0.4) == pytest.approx(1.4**2 * math.sin(10 * math.pi * 0.4 / 3))
        quad = parse_function("builtin:quad")
        assert quad.polynomial_coefficients == (5.0, -4.0, 9.0)
        assert quad(1.0) == 10.0

    def test_constant(self):
        f = parse_function("poly:1")
        assert f(0.7) == 1.0
        assert f == monomial(0)

    def test_scientific_notation(self):
        assert parse_function("poly:1e-3,2.5E1").coefficients == (1e-3, 25.0)

    @pytest.mark.parametrize(
        "text,position",
        [("5,-4,9", 0), ("poly:", 5), ("poly:1,,2", 7), ("poly:1,x", 7), ("trig:sin", 0), ("builtin:", 8), ("poly:1,inf", 7)],
    )
    def test_parse_errors_carry_position(self, text, position):
        with pytest.raises(ParseError) as info:
            parse_function(text)
        assert info.value.position == position

    def test_unknown_builtin(self):
        with pytest.raises(RegistryError):
            parse_function("builtin:cubic")

    def test_describe_round_trips(self):
        for text in ("poly:5.0,-4.0,9.0", "builtin:sinmix"):
            assert parse_function(text).describe() == text
            assert parse_function(parse_function(text).describe()) == parse_function(text)


class TestFunctionSpec:
    def test_domain_enforced(self):
        f = FunctionSpec.polynomial((1.0, 2.0))
        with pytest.raises(EvaluationError):
            f(2.5)
        with pytest.raises(EvaluationError):
            f(-0.1)

    def test_exactly_one_form(self):
        with pytest.raises(ValueError):
            FunctionSpec()
        with pytest.raises(ValueError):
            FunctionSpec(coefficients=(1.0,), builtin="quad")
        with pytest.raises(ValueError):
            FunctionSpec.polynomial(())
        with pytest.raises(ValueError):
            FunctionSpec.polynomial((1.0,), domain=(1.0, 1.0))

    def test_horner(self):
        assert horner((1.0, 2.0, 3.0), 2.0) == 17.0
        assert horner((), 2.0) == 0.0

    def test_covers(self):
        f = FunctionSpec.polynomial((1.0,))
        assert f.covers(0.0, 2.0)
        assert not f.covers(0.0, 2.5)
        assert not FunctionSpec.from_builtin("sinmix").is_polynomial


class TestCli:
    def run(self, capsys, *argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    def test_converge_csv(self, capsys):
        code, out, _ = self.run(capsys, "converge", "--n", "5,10", "--grid-points", "11")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "x,D_5,D_10,diff_5,diff_10"
        assert lines[1] == "0.0,5.0,5.0,0.0,0.0"
        assert len(lines) == 12
        assert "\r" not in out

    def test_default_grid_has_201_points(self, capsys):
        code, out, _ = self.run(capsys, "converge", "--n", "3")
        assert code == EXIT_OK
        assert len(out.splitlines()) == 202

    def test_converge_json_and_bernstein(self, capsys):
        code, out, _ = self.run(capsys, "converge", "--operator", "bernstein", "--n", "4", "--f", "poly:0,1", "--format", "json", "--grid-points", "5")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["config"]["operator"] == "bernstein"
        assert all(abs(row["diffs"]["4"]) < 1e-12 for row in doc["rows"])

    def test_out_file_deterministic(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert main(["converge", "--f", "builtin:sinmix", "--n", "5,10", "--grid-points", "21", "--out", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert paths[0].read_bytes() == paths[1].read_bytes()
        report = ConvergenceReport.from_csv(paths[0].read_text())
        assert report.n_values == (5, 10)

    def test_limit(self, capsys):
        code, out, _ = self.run(capsys, "limit", "--n", "50,200", "--grid-points", "3", "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["coefficients"]["reference"] == pytest.approx([5.0, 4.96, 23.04])
        assert doc["coefficients"]["by_n"]["200"] == pytest.approx([5.0, 4.96, 23.04], abs=1e-10)
        assert len(doc["reference"]) == 3

    def test_limit_with_reference(self, capsys):
        code, out, _ = self.run(capsys, "limit", "--f", "poly:1", "--ref", "poly:1", "--n", "3,7", "--grid-points", "4")
        assert code == EXIT_OK
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert all(float(v) == pytest.approx(0.0, abs=1e-12) for row in rows for v in row[3:5])

    def test_identities(self, capsys):
        code, out, _ = self.run(capsys, "identities", "--max-index", "5")
        assert code == EXIT_OK
        assert json.loads(out)["all_passed"] is True
        code, out, _ = self.run(capsys, "identities", "--p", "1", "--q", "0.9", "--format", "csv")
        assert code == EXIT_OK
        assert out.startswith("name,max_error,")

    def test_moments(self, capsys):
        code, out, _ = self.run(capsys, "moments", "--n", "4", "--grid-points", "5")
        assert code == EXIT_OK
        header, *rows = out.splitlines()
        assert header == "n,x,first,second,second_bound,combined,combined_bound"
        assert len(rows) == 5
        for row in rows:
            values = [float(v) for v in row.split(",")]
            assert values[3] <= values[4] and values[5] <= values[6]

    def test_moments_profile(self, capsys):
        code, out, _ = self.run(capsys, "moments", "--profile", "--n", "10", "--grid-points", "3", "--format", "json")
        assert code == EXIT_OK
        rows = json.loads(out)["rows"]
        assert set(rows[0]) == {"n", "x", "abs_error", "local_second", "local_first", "central_second", "moment_bound"}

    def test_king_default_grid_end(self, capsys):
        code, out, _ = self.run(capsys, "king", "--n", "5,10", "--grid-points", "3")
        assert code == EXIT_OK
        last = out.splitlines()[-1].split(",")
        assert float(last[0]) == pytest.approx(0.5877296525464065)

    @pytest.mark.parametrize(
        "argv",
        [
            ["converge", "--p", "0.3", "--q", "0.5"],
            ["converge", "--n", "10,5"],
            ["converge", "--f", "poly:1,x"],
            ["converge", "--f", "builtin:nope"],
            ["converge", "--grid-start", "1", "--grid-end", "0.5"],
            ["converge", "--grid-points", "1"],
            ["converge", "--tol", "0.5"],
            ["king", "--n", "5", "--grid-end", "0.9"],
            ["limit", "--f", "builtin:sinmix"],
            ["converge", "--f", "poly:1,1,1", "--grid-end", "3"],
            ["identities", "--max-index", "13"],
        ],
    )
    def test_config_errors(self, capsys, argv):
        code, out, err = self.run(capsys, *argv)
        assert code == EXIT_CONFIG
        assert out == ""
        assert err.startswith("error:")

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["converge", "--n", "a,b"])
        assert info.value.code == EXIT_CONFIG

    def test_convergence_failure(self, capsys):
        code, _, err = self.run(capsys, "converge", "--p", "1", "--q", "0.9999", "--n", "2", "--f", "builtin:sinmix", "--grid-points", "2")
        assert code == EXIT_CONVERGENCE
        assert "n=2" in err

    def test_module_entry_point(self):
        result = subprocess.run(
            [sys.executable, "-m", "pqdurrmeyer.cli", "converge", "--n", "2", "--grid-points", "2"],
            capture_output=True,
            text=True,
            check=False,
        )
        assert result.returncode == 0
        assert result.stdout.splitlines()[0] == "x,D_2,diff_2"
