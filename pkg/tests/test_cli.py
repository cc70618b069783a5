from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from filtquiv.cli import main


@pytest.fixture
def run(data_dir):
    """Run the CLI in-process; bare names of bundled files are expanded to paths."""
    def _run(*argv):
        args = [str(data_dir / f"{a}.quiver") if a in _BUNDLED else a for a in argv]
        out, err = io.StringIO(), io.StringIO()
        code = main(args, out=out, err=err)
        return code, out.getvalue(), err.getvalue()
    return _run


_BUNDLED = {"a2", "a3_counterexample", "affine_a1", "bitableau", "framed_jordan1", "jordan1_dz", "jordan2",
            "jordan2_dz", "kronecker1_dw", "kronecker2_dw", "kronecker3"}


@pytest.fixture
def write(tmp_path):
    def _write(text, name="input.quiver"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


class TestCommands:
    def test_pathways(self, run):
        code, out, _ = run("pathways", "jordan2")
        assert code == 0
        assert out.splitlines() == ["7 pathways (1,1): e1, a, b, ab, ba, aba, bab",
                                    "at most two pathways between any two vertices: no"]

    def test_pathways_json(self, run):
        code, out, _ = run("pathways", "jordan2", "--json")
        data = json.loads(out)
        assert code == 0 and data["ok"] and data["at_most_two"] is False
        assert data["pathways"]["1,1"] == ["e1", "a", "b", "ab", "ba", "aba", "bab"]

    def test_euler(self, run):
        code, out, _ = run("euler", "affine_a1", "--json")
        data = json.loads(out)
        assert code == 0
        assert data["value"] == 0
        code, out, _ = run("euler", "affine_a1", "--alpha", "1", "0")
        assert out.splitlines()[-1] == "⟨[1, 0], [2, 2]⟩ = 0"

    def test_reflect(self, run):
        code, out, _ = run("reflect", "a2", "--sink", "2")
        assert code == 0
        assert "dimension vector [1, 0]" in out
        assert "round trip isomorphic to the input: yes" in out

    def test_gr_counterexample(self, run):
        code, out, _ = run("gr", "a3_counterexample", "--sink", "2")
        assert code == 0
        assert "S^+ gr X pieces: [[1, 1], [2, 2], [1, 1]]" in out
        assert "gr S^+ X pieces: [[1, 1], [2, 1], [1, 1]]" in out
        assert out.rstrip().endswith("isomorphic as graded representations: no")

    def test_dw(self, run):
        code, out, _ = run("dw", "kronecker2_dw")
        assert code == 0
        assert out.splitlines()[0] == "3 generators"
        assert "-a11*b22 + a12*b21 + a21*b12 - a22*b11" in out

    def test_dw_json(self, run):
        data = json.loads(run("dw", "kronecker1_dw", "--json")[1])
        assert [g["polynomial"] for g in data["generators"]] == ["a11*a22 - a12*a21"]
        assert data["generators"][0]["semi_invariant"] is True

    def test_dz(self, run):
        code, out, _ = run("dz", "jordan1_dz")
        assert code == 0
        assert out.splitlines()[0] == ("det(M) = a11*a22*s^2*v^2 - a12*a21*s^2*v^2 - a11*s*t*u*v"
                                       " - a22*s*t*u*v + t^2*u^2")

    def test_dz_auto_has_no_repeats(self, run):
        code, out, _ = run("dz", "jordan1_dz", "--auto")
        assert code == 0
        gens = [line.split("    ")[0].strip() for line in out.splitlines() if line.startswith("  ")]
        assert len(gens) == len(set(gens))

    def test_bidet(self, run):
        code, out, _ = run("bidet", "bitableau")
        assert code == 0
        assert out.splitlines() == ["bideterminant = a11*a22^2*x11*x21^2*x22^2 - a11*a22^2*x12*x21^3*x22",
                                    "block standard: yes", "unipotent invariant: yes"]

    def test_invariant_check_file_polys(self, run):
        code, out, _ = run("invariant-check", "framed_jordan1")
        assert code == 0
        assert len(out.splitlines()) == 5
        assert all(": invariant" in line for line in out.splitlines())

    def test_invariant_check_failure_exits_one(self, run):
        code, out, _ = run("invariant-check", "framed_jordan1", "--poly", "x11")
        assert code == 1
        assert "u_12 at vertex 1 changes it by -x21*u" in out

    def test_cubic(self, run):
        code, out, _ = run("invariant-check", "kronecker3")
        assert code == 0 and ": invariant" in out

    def test_invariant_dim(self, run):
        code, out, _ = run("invariant-dim", "jordan2")
        assert code == 0
        assert out.splitlines()[0] == "invariants of degree <= 2: 16"
        assert "polynomials in diagonal variables of degree <= 2: 15" in out

    def test_springer_lab(self, run):
        code, out, _ = run("springer-lab", "--n", "3", "--samples", "5", "--seed", "4")
        assert code == 0
        assert out.splitlines()[0] == "L-operator suite: 5/5 random rss matrices pass"
        assert "moment map strictly lower entries zero: True; diagonal equals F: True" in out

    def test_springer_lab_is_deterministic(self, run):
        assert run("springer-lab", "--n", "2", "--samples", "3")[1] == run("springer-lab", "--n", "2", "--samples", "3")[1]

    def test_verify(self, run):
        code, out, _ = run("verify", "--json")
        data = json.loads(out)
        assert code == 0
        assert [c["number"] for c in data["checks"]] == list(range(1, 12))
        assert all(c["passed"] for c in data["checks"])


class TestExitCodes:
    def test_cap_is_a_limit_error(self, run):
        code, out, err = run("invariant-dim", "jordan2", "--cap", "5")
        assert code == 1
        assert err == "limit reached: 28 monomials of degree <= 2 exceed the cap 5\n"

    def test_missing_file(self, run, tmp_path):
        code, _, err = run("pathways", str(tmp_path / "missing.quiver"))
        assert code == 2 and "cannot read input (No such file or directory)" in err

    @pytest.mark.parametrize("argv,msg", [
        (("dw", "jordan2"), "the determinantal construction needs 'alpha' lines"),
        (("reflect", "a2"), "give exactly one of --sink or --source"),
        (("reflect", "a2", "--sink", "1"), "vertex 1 is not a sink"),
        (("bidet", "jordan2"), "no 'row' lines"),
        (("euler", "affine_a1", "--alpha", "1"), "--alpha needs 2 entries"),
        (("euler", "affine_a1", "--alpha", "x", "2"), "--alpha must be a list of integers"),
    ])
    def test_usage_errors(self, run, argv, msg):
        code, out, err = run(*argv)
        assert code == 2 and out == ""
        assert msg in err

    def test_parse_error_position(self, run, write):
        path = write("vertices 1\nfoo\n")
        code, _, err = run("pathways", path)
        assert code == 2
        assert err == f"error: {path}: line 2, column 1: unknown statement 'foo'\n"

    def test_bad_polynomial_in_file(self, run, write):
        path = write("vertices 1\narrow a: 1 -> 1\ndim 1 = 2\npoly a11 +\n")
        code, _, err = run("invariant-check", path)
        assert code == 2 and "line 4, column 1: cannot parse polynomial: 'a11 +'" in err

    def test_unknown_variable_on_command_line(self, run, write):
        path = write("vertices 1\narrow a: 1 -> 1\ndim 1 = 2\n")
        code, _, err = run("invariant-check", path, "--poly", "a11*zz")
        assert code == 2 and "unknown variable 'zz'" in err

    def test_block_out_of_range(self, run, write):
        path = write("vertices 1\narrow a: 1 -> 1\ndim 1 = 2\nsource 1\ntarget 1\nblock 2 1: s\n")
        code, _, err = run("dz", path)
        assert code == 2 and "block (1, 0) is out of range" in err

    def test_argparse_errors_exit_two(self, run, capsys):
        assert run("no-such-command")[0] == 2
        assert run("pathways")[0] == 2
        assert "usage:" in capsys.readouterr().err


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "filtquiv", "pathways", str(data_dir / "jordan2.quiver")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("7 pathways (1,1)")


def test_version():
    proc = subprocess.run([sys.executable, "-m", "filtquiv", "--version"], capture_output=True, text=True, check=False)
    assert proc.stdout.strip() == "filtquiv 0.1.0"
