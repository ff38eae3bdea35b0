"""Tests for standpoint_c2.dl module."""

import pytest
from hypothesis import given, settings
from standpoint_c2.config import SearchConfig
from standpoint_c2.corpus import tumour_example
from standpoint_c2.dl import (
    RIA,
    TOP,
    AtLeast,
    Atomic,
    Inverse,
    Nominal,
    RoleAnd,
    RoleBox,
    RoleName,
    RoleNot,
    SelfC,
    chain_extension,
    ctrans,
    dl_satisfies,
    dl_signature,
    dl_to_fol,
    dl_to_fosl,
    eval_dl,
    exactly,
    ria_formula,
    role_extension,
    rtrans,
)
from standpoint_c2.errors import UntranslatableRIA
from standpoint_c2.search import bounded_sat
from standpoint_c2.semantics import StandpointStructure, build_extension, eval, satisfies
from standpoint_c2.syntax import STAR, And, Signature, atom, box, conj, count, dia, eq, exists, forall, fragment_report, implies, neg
from strategies import concepts, dl_sentences, dl_structures

R, S = RoleName(name="R"), RoleName(name="S")
A = Atomic(name="A")


def chain_structure(closed: bool) -> StandpointStructure:
    """R links d0 to d1 to d2, and d0 to d2 directly when closed."""
    edges = [("R", ("d0", "d1")), ("R", ("d1", "d2"))]
    if closed:
        edges.append(("R", ("d0", "d2")))
    return StandpointStructure(
        domain=("d0", "d1", "d2"),
        worlds=("w0",),
        signature=Signature(predicates={"R": 2}),
        gamma={"w0": build_extension(edges)},
    )


class TestTranslation:
    """Test rtrans, ctrans and the sentence translations."""

    def test_roles(self):
        """Test inverses swap arguments and role booleans become connectives."""
        assert rtrans("x", "y", Inverse(role=R)) == atom("R", "y", "x")
        assert rtrans("x", "y", RoleNot(role=R)) == neg(atom("R", "x", "y"))
        assert rtrans("x", "y", RoleAnd(left=R, right=S)) == And(left=atom("R", "x", "y"), right=atom("S", "x", "y"))

    def test_counting_uses_other_variable(self):
        """Test number restrictions quantify over the variable not in use."""
        expected = count(">=", 2, "y", And(left=atom("R", "x", "y"), right=atom("A", "y")))
        assert ctrans("x", AtLeast(count=2, role=R, body=A)) == expected
        assert ctrans("y", AtLeast(count=1, role=R, body=TOP)).var == "x"

    def test_nominal_and_self(self):
        """Test nominals become equalities and self a reflexive atom."""
        assert ctrans("y", Nominal(name="o")) == eq("y", "#o")
        assert ctrans("x", SelfC(role=Inverse(role=R))) == atom("R", "x", "x")

    def test_tumour(self):
        """Test the tumour axiom renders as a boxed universal implication."""
        triggered = And(left=atom("TriggeredBy", "x", "y"), right=atom("Tumour", "y"))
        expected = box("process", forall("x", implies(
            dia("tissue", atom("Tumour", "x")),
            And(left=count(">=", 1, "y", triggered), right=neg(count(">=", 2, "y", triggered))),
        )))
        assert dl_to_fosl(tumour_example().sentence) == expected

    def test_tumour_satisfiable_with_a_tumour(self):
        """Test the tumour axiom has a small model in which the tissue view sees a tumour."""
        f = conj(dl_to_fosl(tumour_example().sentence), dia("tissue", exists("x", atom("Tumour", "x"))))
        M = bounded_sat(f, 2, 2, config=SearchConfig(budget=200_000))
        assert M is not None
        assert satisfies(M, f)

    def test_tumour_is_monodic_c2(self):
        """Test the rendering stays in monodic C2."""
        report = fragment_report(dl_to_fosl(tumour_example().sentence))
        assert report.is_c2
        assert report.is_monodic

    def test_single_role_inclusion(self):
        """Test a role hierarchy axiom uses two variables."""
        f = ria_formula(RIA(chain=(S,), head=R))
        assert f == forall("x", forall("y", implies(atom("S", "x", "y"), atom("R", "x", "y"))))
        assert dl_to_fosl(RIA(chain=(S,), head=R)) == f

    def test_role_chain_needs_three_variables(self):
        """Test chains are refused by dl_to_fosl and rendered by dl_to_fol."""
        transitive = RIA(chain=(R, R), head=R)
        with pytest.raises(UntranslatableRIA, match="chain of length 2"):
            dl_to_fosl(transitive)
        assert not fragment_report(dl_to_fol(transitive)).is_c2

    def test_signature(self):
        """Test concept names are unary, roles binary and standpoints collected."""
        sig = dl_signature(tumour_example().sentence)
        assert sig.predicates == {"Tumour": 1, "TriggeredBy": 2}
        assert sig.standpoints == frozenset({STAR, "process", "tissue"})


class TestDirectSemantics:
    """Test the direct evaluator against the translation."""

    @given(concepts(), dl_structures())
    @settings(max_examples=60, deadline=None)
    def test_concepts_agree_with_ctrans(self, c, M):
        """Test eval_dl and ctrans agree at every world and element."""
        translated = ctrans("x", c)
        for w in M.worlds:
            for d in M.domain:
                assert eval_dl(M, w, d, c) == eval(M, w, {"x": d}, translated)

    @given(dl_sentences(), dl_structures())
    @settings(max_examples=40, deadline=None)
    def test_sentences_agree_with_translation(self, s, M):
        """Test dl_satisfies and satisfies on dl_to_fosl agree."""
        assert dl_satisfies(M, s) == satisfies(M, dl_to_fosl(s))

    def test_exactly(self):
        """Test exactly one R-successor is required."""
        M = chain_structure(closed=False)
        one = exactly(1, R, TOP)
        assert [eval_dl(M, "w0", d, one) for d in M.domain] == [True, True, False]

    def test_role_chain(self):
        """Test a transitivity axiom holds exactly when the chain is closed."""
        transitive = RIA(chain=(R, R), head=R)
        assert chain_extension(chain_structure(False), "w0", (R, R)) == frozenset({("d0", "d2")})
        assert not dl_satisfies(chain_structure(False), transitive)
        assert dl_satisfies(chain_structure(True), transitive)

    def test_role_extension(self):
        """Test the inverse extension flips every pair."""
        M = chain_structure(closed=False)
        assert role_extension(M, "w0", Inverse(role=R)) == frozenset({("d1", "d0"), ("d2", "d1")})

    def test_tumour_satisfiable(self):
        """Test the tumour axiom has a small model."""
        s = tumour_example().sentence
        M = bounded_sat(dl_to_fosl(s), 2, 2, config=SearchConfig(budget=200_000))
        assert M is not None
        assert dl_satisfies(M, s)


class TestRoleBox:
    """Test role simplicity and order."""

    def test_simple(self):
        """Test a role expression is simple when none of its names is non-simple."""
        roles = RoleBox(nonsimple=frozenset({"R"}))
        assert roles.is_simple(Inverse(role=S))
        assert not roles.is_simple(RoleAnd(left=S, right=Inverse(role=R)))

    def test_order_is_transitive(self):
        """Test declared pairs chain together."""
        roles = RoleBox(nonsimple=frozenset({"R", "S", "T"}), order=frozenset({("R", "S"), ("S", "T")}))
        assert roles.precedes("R", "T")
        assert not roles.precedes("T", "R")

    def test_simple_precedes_non_simple(self):
        """Test a simple role comes before any non-simple role."""
        assert RoleBox(nonsimple=frozenset({"R"})).precedes("S", "R")
