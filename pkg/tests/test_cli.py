"""Tests for the spc command line."""

import pytest
from standpoint_c2.cli import main
from standpoint_c2.corpus import running_example
from standpoint_c2.dl import conjuncts
from standpoint_c2.parser import document_for, parse_dl, parse_formula, parse_structure, print_document
from standpoint_c2.reductions import CURATED_CASES, print_case
from standpoint_c2.semantics import satisfies
from standpoint_c2.syntax import STAR, atom, conj, dia, exists, neg

NULLARY_FLIP = conj(dia(STAR, atom("N")), dia(STAR, neg(atom("N"))))


@pytest.fixture
def write(tmp_path):
    def write_file(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write_file


class TestCheck:
    """Test spc check."""

    def test_running_example(self, write, capsys):
        """Test the running example is reported as monodic C2."""
        path = write("e.spf", print_document(document_for(running_example(), {"Good"})))
        assert main(["check", str(path)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("(fragment\n")
        assert "(c2 true)" in out
        assert "(monodic true)" in out

    def test_parse_error(self, write, capsys):
        """Test a malformed input exits 2 with a caret diagnostic."""
        path = write("bad.spf", "(and (P x) (Q x y z))")
        assert main(["check", str(path)]) == 2
        err = capsys.readouterr().err
        assert err.startswith("spc: ")
        assert "^^^" in err

    def test_missing_file(self, tmp_path, capsys):
        """Test an unreadable input exits 2."""
        assert main(["check", str(tmp_path / "absent.spf")]) == 2
        assert "cannot read" in capsys.readouterr().err


class TestTranslate:
    """Test spc translate."""

    def test_params(self, write, capsys):
        """Test --params prints the removal parameters before the sentence."""
        path = write("e.spf", print_document(document_for(running_example())))
        assert main(["translate", str(path), "--params"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("(params\n  (ell ")
        assert "(m " in out

    def test_emit_parts(self, write, tmp_path):
        """Test the three conjuncts are written next to the output."""
        path = write("e.spf", print_document(document_for(exists("x", dia(STAR, atom("P", "x"))))))
        out = tmp_path / "e-fo.spf"
        assert main(["translate", str(path), "-o", str(out), "--emit-parts"]) == 0
        doc = parse_formula(out.read_text(encoding="utf-8"))
        assert doc.formula is not None
        for suffix in ("stack", "rigid", "trans"):
            assert (tmp_path / f"e-fo.{suffix}.spf").exists()

    def test_emit_parts_needs_output(self, write, capsys):
        """Test --emit-parts without --output is a usage error."""
        path = write("e.spf", print_document(document_for(exists("x", atom("P", "x")))))
        assert main(["translate", str(path), "--emit-parts"]) == 2
        assert "--emit-parts requires --output" in capsys.readouterr().err


class TestEval:
    """Test spc eval."""

    def test_global_and_local(self, write, capsys):
        """Test evaluation everywhere and at a single world."""
        formula = write("f.spf", print_document(document_for(exists("x", atom("P", "x")))))
        model = write("m.sps", "(structure (domain d0) (worlds w0 w1) (world w0 (P d0)))")
        assert main(["eval", str(formula), "--model", str(model)]) == 0
        assert capsys.readouterr().out == "false\n"
        assert main(["eval", str(formula), "--model", str(model), "--world", "w0"]) == 0
        assert capsys.readouterr().out == "true\n"


class TestBoundedSat:
    """Test spc bsat."""

    def test_model_found(self, write, capsys):
        """Test a model is printed and satisfies the sentence."""
        path = write("f.spf", print_document(document_for(NULLARY_FLIP)))
        assert main(["bsat", str(path), "--max-domain", "1", "--max-worlds", "2", "--expect", "sat"]) == 0
        M = parse_structure(capsys.readouterr().out)
        assert satisfies(M, NULLARY_FLIP)

    def test_expect_mismatch(self, write, capsys):
        """Test a failed expectation exits 1."""
        path = write("f.spf", print_document(document_for(NULLARY_FLIP)))
        assert main(["bsat", str(path), "--max-domain", "1", "--max-worlds", "1", "--expect", "sat"]) == 1
        assert capsys.readouterr().out == "(no-model (max-domain 1) (max-worlds 1))\n"


class TestVerify:
    """Test spc verify."""

    def test_suite_passes(self, capsys):
        """Test a passing suite exits 0 with its summary."""
        assert main(["verify", "--suite", "rigidity", "--seed", "3"]) == 0
        assert capsys.readouterr().out.startswith("rigidity: PASS")

    def test_suite_alias(self, capsys):
        """Test a suite runs under its short name and reports its full name."""
        assert main(["verify", "--suite", "lemma32", "--seed", "7", "--max-domain", "1", "--max-worlds", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("closure-invariance: PASS")
        assert "exhaustive=8" in out

    def test_reduction_case_file(self, write, capsys):
        """Test the reductions suite runs the cases of a .spc file."""
        trivial = next(case for case in CURATED_CASES if case.name == "trivial-1")
        path = write("cases.spc", print_case(trivial))
        assert main(["verify", "--suite", "reductions", "--cases", str(path)]) == 0
        assert capsys.readouterr().out.startswith("reductions: PASS 1/1 passed")

    def test_unknown_suite(self, capsys):
        """Test an unknown suite lists the available ones."""
        assert main(["verify", "--suite", "nonexistent"]) == 2
        err = capsys.readouterr().err
        assert "unknown suite 'nonexistent'" in err
        assert "closure-invariance" in err


class TestGenerators:
    """Test the gadget generators."""

    def test_gen_tiling(self, capsys):
        """Test the tiling TBox is printed as a DL document."""
        assert main(["gen-tiling", "--k", "1", "--horizontal", "1:1", "--vertical", "1:1", "--init", "1"]) == 0
        doc = parse_dl(capsys.readouterr().out)
        assert len(conjuncts(doc.sentence)) == 23

    def test_gen_grid(self, capsys):
        """Test the grid gadget declares E rigid."""
        assert main(["gen-grid"]) == 0
        doc = parse_dl(capsys.readouterr().out)
        assert doc.rigid == frozenset({"E"})

    def test_bad_tile_pair(self, capsys):
        """Test malformed tile pairs are rejected by argparse."""
        with pytest.raises(SystemExit):
            main(["gen-tiling", "--k", "1", "--horizontal", "11"])
