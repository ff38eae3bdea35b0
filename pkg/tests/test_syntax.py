"""Tests for standpoint_c2.syntax module."""

import pytest
from hypothesis import given, settings
from standpoint_c2.corpus import running_example
from standpoint_c2.errors import FreeVariableError, SignatureError
from standpoint_c2.syntax import (
    STAR,
    And,
    Atom,
    Const,
    CountExists,
    Dia,
    Inter,
    Not,
    Signature,
    Top,
    Var,
    atom,
    box,
    conj,
    count,
    dia,
    dia_sets,
    disj,
    eq,
    exists,
    forall,
    fragment_report,
    free_vars,
    fresh_name,
    infer_signature,
    is_c2,
    is_monodic,
    is_s5,
    neg,
    standpoint_size,
    subformulas,
    sym,
)

from strategies import monodic_sentences


class TestBuilders:
    """Test that derived connectives elaborate into the core nodes."""

    def test_term_coercion(self):
        """Test '#a' becomes a constant and other strings become variables."""
        f = atom("P", "#a")
        assert f.terms == (Const(name="a"),)
        assert eq("x", "y").left == Var(name="x")

    def test_box_is_not_dia_not(self):
        """Test box elaborates to a negated diamond over a negated body."""
        p = atom("P", "x")
        assert box(STAR, p) == Not(body=Dia(standpoint=sym(STAR), body=Not(body=p)))

    def test_forall_and_exists(self):
        """Test forall is 'exactly zero counterexamples' and exists is 'at least one'."""
        p = atom("P", "x")
        assert forall("x", p) == CountExists(comparator="=", count=0, var="x", body=Not(body=p))
        assert exists("x", p) == CountExists(comparator=">=", count=1, var="x", body=p)

    def test_empty_conjunction_and_disjunction(self):
        """Test the empty conjunction is true and the empty disjunction false."""
        assert conj() == Top()
        assert disj() == Not(body=Top())

    def test_conj_folds_left(self):
        """Test conj nests to the left."""
        a, b, c = atom("A"), atom("B"), atom("C")
        assert conj(a, b, c) == And(left=And(left=a, right=b), right=c)

    def test_arity_limit(self):
        """Test atoms with three terms are rejected."""
        with pytest.raises(ValueError, match="at most 2"):
            atom("R", "x", "y", "x")

    def test_negative_count_rejected(self):
        """Test counting thresholds must be non-negative."""
        with pytest.raises(ValueError):
            count(">=", -1, "x", Top())

    def test_fresh_name(self):
        """Test fresh_name skips taken names with numeric suffixes."""
        assert fresh_name("E", set()) == "E"
        assert fresh_name("E", {"E", "E_1"}) == "E_2"


class TestAnalyses:
    """Test structural analyses."""

    def test_free_vars(self):
        """Test quantifiers bind their variable."""
        f = conj(atom("R", "x", "y"), exists("y", atom("P", "y")))
        assert free_vars(f) == frozenset({"x", "y"})
        assert free_vars(forall("x", forall("y", f))) == frozenset()

    def test_subformulas_are_deduplicated(self):
        """Test repeated subformulas are counted once."""
        p = atom("P", "x")
        f = conj(p, p)
        assert subformulas(f) == [p, f]

    def test_is_c2(self):
        """Test a third variable leaves C2."""
        assert is_c2(forall("x", exists("y", atom("R", "x", "y"))))
        assert not is_c2(exists("z", atom("P", "z")))

    def test_is_monodic(self):
        """Test a diamond body with two free variables is not monodic."""
        assert is_monodic(forall("x", dia(STAR, atom("P", "x"))))
        assert not is_monodic(forall("x", forall("y", dia(STAR, atom("R", "x", "y")))))

    def test_standpoint_size(self):
        """Test standpoint size counts expression nodes of distinct diamonds."""
        e = Inter(left=sym("s"), right=sym("t"))
        f = conj(dia(e, Top()), dia(e, Top()), dia("s", atom("A")))
        assert standpoint_size(f) == 4

    def test_infer_signature(self):
        """Test inferred signatures collect predicates, constants and standpoints."""
        f = conj(atom("P", "#a"), dia("s", atom("N")))
        sig = infer_signature(f)
        assert sig.predicates == {"P": 1, "N": 0}
        assert sig.constants == frozenset({"a"})
        assert sig.standpoints == frozenset({STAR, "s"})

    def test_infer_signature_arity_conflict(self):
        """Test a predicate used with two arities is a signature error."""
        with pytest.raises(SignatureError, match="arity conflict"):
            infer_signature(conj(atom("P", "x"), atom("P", "x", "y")))

    def test_signature_names_disjoint(self):
        """Test a name cannot be both a predicate and a standpoint."""
        with pytest.raises(ValueError, match="pairwise disjoint"):
            Signature(predicates={"s": 1}, standpoints=frozenset({STAR, "s"}))


class TestRunningExample:
    """Test the fragment analysis of the running example."""

    def test_fragment_report(self):
        """Test the running example is already frugal with three diamonds, two free."""
        report = fragment_report(running_example())
        assert report.is_c2 and report.is_monodic and report.is_s5
        assert report.nullary_free and report.constant_free
        assert report.is_frugal
        assert report.dia_count == 3
        assert report.free_dia_count == 2
        assert report.standpoint_size == 3

    def test_dia_sets_order(self):
        """Test the free diamonds come innermost-first and exclude the sentential one."""
        dias, free = dia_sets(running_example())
        assert len(dias) == 3
        assert len(free) == 2
        assert all(free_vars(d.body) == frozenset({"x"}) for d in free)
        assert [d for d in dias if d not in free][0].body == forall(
            "x", disj(atom("Good", "x"), atom("Best", "x"))
        )

    def test_dia_sets_requires_sentence(self):
        """Test dia_sets rejects formulas with free variables."""
        with pytest.raises(FreeVariableError):
            dia_sets(dia(STAR, atom("P", "x")))

    def test_report_flags_violations(self):
        """Test each fragment flag is reported separately."""
        f = conj(atom("N"), dia("s", atom("P", "#a")))
        report = fragment_report(f)
        assert report.is_c2 and report.is_monodic
        assert not report.is_s5
        assert not report.nullary_free
        assert not report.constant_free
        assert not report.is_frugal

    def test_report_flags_non_monodic(self):
        """Test a diamond over two free variables clears the monodic flag only."""
        f = exists("x", exists("y", dia(STAR, atom("R", "x", "y"))))
        report = fragment_report(f)
        assert not report.is_monodic
        assert report.is_c2 and report.is_s5
        assert not report.is_frugal

    @given(monodic_sentences())
    @settings(max_examples=60, deadline=None)
    def test_report_matches_fragment_predicates(self, f):
        """Test the report flags agree with the standalone fragment predicates."""
        report = fragment_report(f)
        assert (report.is_c2, report.is_monodic, report.is_s5) == (is_c2(f), is_monodic(f), is_s5(f))

    def test_atom_node(self):
        """Test nullary atoms have no terms."""
        assert atom("N") == Atom(pred="N", terms=())
        assert neg(atom("N")).body == atom("N")
