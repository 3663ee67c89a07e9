"""
Tests for the command-line interface.
"""

import json

import pytest

from conftest import CONIC_LINE, HYPERBOLAS, PARABOLA, UNIVARIATE, WORKED_TEXTS
from polyrealize.cli import main
from polyrealize.config import SolveConfig
from polyrealize.types import DegenerateShiftError, RealizationError


class TestSolveCommand:
    def test_conic_line_text(self, system_file, capsys):
        code = main(["solve", system_file(CONIC_LINE)])
        out = capsys.readouterr().out
        assert code == 0
        assert "root 1: (2, 3) mult 1 residual" in out
        assert "root 2: (3, 1) mult 1 residual" in out
        assert "solve: d=3, nullity 2, m_R=2, m_S=0, gap at degree 2" in out
        assert "bezout check: 2 = 2+0" in out

    def test_hyperbolas_text(self, system_file, capsys):
        code = main(["solve", system_file(HYPERBOLAS)])
        out = capsys.readouterr().out
        assert code == 0
        assert "(0, 1, -1) at infinity mult 2" in out
        assert "bezout check: 4 = 2+2" in out

    def test_json_report(self, system_file, capsys):
        code = main(["solve", system_file(PARABOLA), "--json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["version"] == "v1"
        assert report["system"]["bezout"] == 2
        assert report["solve"]["m_R"] == 1
        assert report["solve"]["m_S"] == 1
        flags = sorted(r["at_infinity"] for r in report["roots"])
        assert flags == [False, True]

    def test_empty_file(self, system_file, capsys):
        code = main(["solve", system_file("")])
        assert code == 1
        assert capsys.readouterr().err.startswith("Error:")

    def test_unknown_variable(self, system_file, capsys):
        code = main(["solve", system_file("vars: x\nx + y\n")])
        assert code == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "absent.txt")]) == 1

    def test_no_stabilization(self, system_file, capsys):
        assert main(["solve", system_file("vars: x y\nx*y\n")]) == 2

    def test_deterministic_output(self, system_file, capsys):
        path = system_file(HYPERBOLAS)
        main(["solve", path, "--json"])
        first = capsys.readouterr().out
        main(["solve", path, "--json"])
        assert capsys.readouterr().out == first

    def test_no_command(self, capsys):
        assert main([]) == 1


class TestRealizeCommand:
    def test_conic_line(self, system_file, capsys):
        code = main(["realize", system_file(CONIC_LINE)])
        out = capsys.readouterr().out
        assert code == 0
        assert "A[z1] =\n  [0, 1]\n  [-6, 5]" in out
        assert "A[z2] =\n  [7, -2]\n  [12, -3]" in out
        assert "states [1, z1]" in out
        assert "x0 = [2, 5] (power-sum)" in out

    def test_univariate_json(self, system_file, capsys):
        code = main(["realize", system_file(UNIVARIATE), "--json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        A = report["realization"]["A"][0]
        assert A[0] == pytest.approx([0, 1], abs=1e-10)
        assert A[1] == pytest.approx([-2, 3], abs=1e-10)

    def test_hyperbolas_descriptor(self, system_file, capsys):
        code = main(["realize", system_file(HYPERBOLAS), "--json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        descriptor = report["realization"]["descriptor"]
        assert descriptor["m_R"] == 2
        assert descriptor["m_S"] == 2
        assert descriptor["E0_nilpotency_residual"] <= 1e-8

    def test_wrong_x0_length(self, system_file, capsys):
        assert main(["realize", system_file(CONIC_LINE), "--x0", "1", "2", "3"]) == 1

    def test_realization_failure_exit_code(self, system_file, capsys, monkeypatch):
        def fail(*args, **kwargs):
            raise RealizationError("Pivot z1^2 has degree 2")

        monkeypatch.setattr("polyrealize.realization.canonical_realization", fail)
        code = main(["realize", system_file(CONIC_LINE)])
        assert code == 3
        assert "Error: Pivot z1^2 has degree 2" in capsys.readouterr().err

    def test_degenerate_shift_exit_code(self, system_file, capsys, monkeypatch):
        def fail(*args, **kwargs):
            raise DegenerateShiftError("S0 Z_R has rank 1 < 2")

        monkeypatch.setattr("polyrealize.solver.shift_matrices", fail)
        assert main(["simulate", system_file(CONIC_LINE), "-k", "3", "3"]) == 3
        assert "rank 1 < 2" in capsys.readouterr().err


class TestSimulateCommand:
    def test_grid_and_residual(self, system_file, capsys):
        code = main(["simulate", system_file(CONIC_LINE), "--extents", "5", "5"])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 6
        assert lines[0].split(",")[:3] == ["2", "4", "10"]
        residual = float(lines[-1].split(":")[1])
        assert residual <= 1e-8

    def test_single_sample(self, system_file, capsys):
        code = main(["simulate", system_file(CONIC_LINE), "-k", "1", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines()[0] == "2"

    def test_x0_override(self, system_file, capsys):
        code = main(["simulate", system_file(CONIC_LINE), "-k", "4", "3", "--x0", "1", "3", "--json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["extents"] == [4, 3]
        expected = [3.0 ** k1 for k1 in range(4) for _ in range(3)]
        assert report["values"] == pytest.approx(expected, rel=1e-10)


class TestVerifyCommand:
    def _roots_file(self, tmp_path, roots):
        path = tmp_path / "roots.json"
        path.write_text(json.dumps({"version": "v1", "roots": roots}))
        return str(path)

    def test_correct_roots(self, system_file, tmp_path, capsys):
        roots = [
            {"coords": [{"re": 3}, {"re": 1}], "homogeneous": False},
            {"coords": [{"re": 2}, {"re": 3}], "homogeneous": False},
        ]
        code = main(["verify", system_file(CONIC_LINE), self._roots_file(tmp_path, roots)])
        out = capsys.readouterr().out
        assert code == 0
        assert "all residuals" in out

    def test_wrong_root(self, system_file, tmp_path, capsys):
        roots = [{"coords": [{"re": 0}, {"re": 0}], "homogeneous": False}]
        code = main(["verify", system_file(CONIC_LINE), self._roots_file(tmp_path, roots)])
        assert code == 4
        assert "FAIL" in capsys.readouterr().out

    def test_homogeneous_root_at_infinity(self, system_file, tmp_path, capsys):
        roots = [{"coords": [{"re": 0}, {"re": 1}, {"re": -1}], "homogeneous": True}]
        code = main(["verify", system_file(HYPERBOLAS), self._roots_file(tmp_path, roots)])
        assert code == 0
        assert "f1=0 f2=0 ok" in capsys.readouterr().out

    def test_malformed_json(self, system_file, tmp_path, capsys):
        path = tmp_path / "roots.json"
        path.write_text("{not json")
        assert main(["verify", system_file(CONIC_LINE), str(path)]) == 1

    def test_schema_violation(self, system_file, tmp_path, capsys):
        path = tmp_path / "roots.json"
        path.write_text(json.dumps({"version": "v1", "roots": [{"coords": "bad"}]}))
        assert main(["verify", system_file(CONIC_LINE), str(path)]) == 1

    def test_coordinate_count(self, system_file, tmp_path, capsys):
        roots = [{"coords": [{"re": 3}], "homogeneous": False}]
        assert main(["verify", system_file(CONIC_LINE), self._roots_file(tmp_path, roots)]) == 1

    @pytest.mark.parametrize("name", sorted(WORKED_TEXTS))
    def test_solve_output_round_trips(self, name, system_file, tmp_path, capsys):
        path = system_file(WORKED_TEXTS[name])
        assert main(["solve", path, "--json", "--cluster-tol", "1e-3"]) == 0
        report = tmp_path / "report.json"
        report.write_text(capsys.readouterr().out)
        assert main(["verify", path, str(report)]) == 0


class TestMacaulayCommand:
    def test_csv_dump(self, system_file, capsys):
        code = main(["macaulay", system_file(CONIC_LINE), "-d", "2"])
        lines = capsys.readouterr().out.splitlines()
        assert code == 0
        assert lines[0] == "row,1,z1,z2,z1^2,z1*z2,z2^2"
        assert len(lines) == 5

    def test_default_degree(self, system_file, capsys):
        assert main(["macaulay", system_file(HYPERBOLAS)]) == 0
        lines = capsys.readouterr().out.splitlines()
        # degree 3: two equations with three shifts each
        assert len(lines) == 7

    def test_homogeneous(self, system_file, capsys):
        assert main(["macaulay", system_file(CONIC_LINE), "-d", "2", "--homogeneous"]) == 0
        header = capsys.readouterr().out.splitlines()[0]
        assert header == "row,z0^2,z0*z1,z0*z2,z1^2,z1*z2,z2^2"

    def test_degree_too_low(self, system_file, capsys):
        assert main(["macaulay", system_file(CONIC_LINE), "-d", "1"]) == 1


class TestConfig:
    def test_config_file_applies(self, system_file, tmp_path, capsys):
        config = tmp_path / "config.json"
        SolveConfig(max_degree=3).save(config)
        code = main(["solve", system_file(HYPERBOLAS), "--config", str(config)])
        assert code == 2

    def test_flag_overrides_file(self, system_file, tmp_path, capsys):
        config = tmp_path / "config.json"
        SolveConfig(max_degree=3).save(config)
        code = main(["solve", system_file(HYPERBOLAS), "--config", str(config), "--max-degree", "5"])
        assert code == 0

    def test_missing_explicit_config(self, system_file, tmp_path, capsys):
        code = main(["solve", system_file(CONIC_LINE), "--config", str(tmp_path / "none.json")])
        assert code == 1

    def test_invalid_tolerance(self, system_file, capsys):
        assert main(["solve", system_file(CONIC_LINE), "--residual-tol", "-1"]) == 1


class TestConfigCommand:
    def test_prints_effective_config(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path))
        assert main(["config", "--seed", "7", "--max-degree", "9"]) == 0
        shown = json.loads(capsys.readouterr().out)
        assert shown["seed"] == 7
        assert shown["max_degree"] == 9
        assert shown["basis_tol"] == SolveConfig().basis_tol

    def test_written_config_drives_solve(self, system_file, tmp_path, capsys):
        path = tmp_path / "saved.json"
        assert main(["config", "--max-degree", "3", "--write", str(path)]) == 0
        assert SolveConfig.load(path).max_degree == 3
        assert main(["solve", system_file(HYPERBOLAS), "--config", str(path)]) == 2
