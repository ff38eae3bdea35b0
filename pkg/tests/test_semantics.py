"""Tests for standpoint_c2.semantics module."""

import pytest
from standpoint_c2.errors import ModalOperatorError, UnassignedVariableError
from standpoint_c2.semantics import (
    FOInterpretation,
    StandpointStructure,
    build_extension,
    compare_count,
    eval,
    eval_sentence_fo,
    interpretations_isomorphic,
    is_rigid,
    satisfies,
    structures_isomorphic,
)
from standpoint_c2.syntax import (
    STAR,
    Diff,
    Signature,
    Union,
    atom,
    box,
    count,
    dia,
    eq,
    exists,
    forall,
    neg,
    sym,
)

SIG = Signature(predicates={"P": 1, "R": 2}, constants=frozenset({"a"}), standpoints=frozenset({STAR, "s"}))


def two_world_structure() -> StandpointStructure:
    """P holds of d0 at w0 and of d1 at w1; s picks w0 only."""
    return StandpointStructure(
        domain=("d0", "d1"),
        worlds=("w0", "w1"),
        signature=SIG,
        sigma={"s": frozenset({"w0"})},
        gamma={
            "w0": build_extension([("P", ("d0",)), ("R", ("d0", "d1"))]),
            "w1": build_extension([("P", ("d1",))]),
        },
        const_map={"a": "d0"},
    )


class TestStructure:
    """Test StandpointStructure validation."""

    def test_star_covers_all_worlds(self):
        """Test sigma(*) is filled in as every world."""
        M = two_world_structure()
        assert M.members(STAR) == frozenset({"w0", "w1"})

    def test_empty_domain_rejected(self):
        """Test a structure needs at least one element."""
        with pytest.raises(ValueError, match="non-empty domain"):
            StandpointStructure(domain=(), worlds=("w",))

    def test_const_map_must_be_total(self):
        """Test every signature constant needs an element."""
        with pytest.raises(ValueError, match="const_map must be total"):
            StandpointStructure(domain=("d",), worlds=("w",), signature=SIG)

    def test_unknown_element_rejected(self):
        """Test extensions may only mention domain elements."""
        with pytest.raises(ValueError, match="unknown element"):
            StandpointStructure(domain=("d",), worlds=("w",), gamma={"w": build_extension([("P", ("e",))])})

    def test_restrict_worlds(self):
        """Test restricting worlds also restricts sigma."""
        M = two_world_structure().restrict_worlds(["w1"])
        assert M.worlds == ("w1",)
        assert M.members("s") == frozenset()


class TestEval:
    """Test satisfaction at a world."""

    def test_atoms_and_constants(self):
        """Test constants are rigid and atoms are world-relative."""
        M = two_world_structure()
        assert eval(M, "w0", {}, atom("P", "#a"))
        assert not eval(M, "w1", {}, atom("P", "#a"))

    def test_diamond_over_standpoint(self):
        """Test a diamond only looks at the standpoint's precisifications."""
        M = two_world_structure()
        f = dia("s", atom("P", "x"))
        assert eval(M, "w1", {"x": "d0"}, f)
        assert not eval(M, "w1", {"x": "d1"}, f)
        assert eval(M, "w1", {"x": "d1"}, dia(STAR, atom("P", "x")))

    def test_box(self):
        """Test box over * requires the body at every world."""
        M = two_world_structure()
        assert not eval(M, "w0", {"x": "d0"}, box(STAR, atom("P", "x")))
        assert eval(M, "w0", {"x": "d0"}, box("s", atom("P", "x")))

    def test_standpoint_operations(self):
        """Test union and difference of standpoints."""
        M = two_world_structure()
        assert eval(M, "w0", {}, dia(Diff(left=sym(STAR), right=sym("s")), exists("x", atom("P", "x"))))
        assert not eval(M, "w0", {}, dia(Diff(left=sym("s"), right=sym(STAR)), atom("P", "#a")))
        assert eval(M, "w0", {}, box(Union(left=sym("s"), right=sym("s")), atom("P", "#a")))

    def test_counting(self):
        """Test counting quantifiers compare the number of witnesses."""
        M = two_world_structure()
        assert eval(M, "w0", {}, count("=", 1, "x", atom("P", "x")))
        assert eval(M, "w0", {}, count("<=", 1, "y", atom("R", "#a", "y")))
        assert not eval(M, "w0", {}, count(">=", 2, "x", atom("P", "x")))
        assert eval(M, "w0", {}, count("=", 2, "x", dia(STAR, atom("P", "x"))))

    def test_equality(self):
        """Test equality compares assigned elements."""
        M = two_world_structure()
        assert eval(M, "w0", {"x": "d0"}, eq("x", "#a"))
        assert not eval(M, "w0", {"x": "d1"}, eq("x", "#a"))

    def test_unassigned_variable(self):
        """Test a free variable without a value is an error."""
        with pytest.raises(UnassignedVariableError, match="unassigned variable"):
            eval(two_world_structure(), "w0", {}, atom("P", "x"))

    def test_unknown_world(self):
        """Test evaluating at an undeclared world is an error."""
        with pytest.raises(ValueError, match="Unknown world"):
            eval(two_world_structure(), "w9", {}, atom("P", "#a"))

    def test_satisfies_is_global(self):
        """Test satisfies requires truth at every world."""
        M = two_world_structure()
        assert satisfies(M, exists("x", atom("P", "x")))
        assert not satisfies(M, atom("P", "#a"))
        assert satisfies(M, dia(STAR, atom("P", "#a")))


class TestCompareCount:
    """Test the three-valued counting comparison."""

    def test_decided_and_undecided(self):
        """Test unknown witnesses leave comparisons open only when they could matter."""
        assert compare_count(">=", 1, 1, 3) is True
        assert compare_count(">=", 2, 1, 1) is None
        assert compare_count("<=", 1, 2, 0) is False
        assert compare_count("=", 1, 1, 0) is True
        assert compare_count("=", 1, 1, 1) is None


class TestFirstOrder:
    """Test plain first-order evaluation."""

    def test_eval_sentence_fo(self):
        """Test a modality-free sentence evaluates in an interpretation."""
        I = FOInterpretation(
            domain=("d0", "d1"),
            signature=Signature(predicates={"R": 2}),
            ext=build_extension([("R", ("d0", "d1")), ("R", ("d1", "d1"))]),
        )
        assert eval_sentence_fo(I, forall("x", exists("y", atom("R", "x", "y"))))
        assert not eval_sentence_fo(I, forall("x", atom("R", "x", "x")))

    def test_modal_operator_rejected(self):
        """Test plain evaluation refuses diamonds."""
        I = FOInterpretation(domain=("d",))
        with pytest.raises(ModalOperatorError, match="modal operator in plain formula"):
            eval_sentence_fo(I, dia(STAR, neg(atom("P", "#a"))))


class TestRigidityAndIsomorphism:
    """Test rigidity checks and isomorphism search."""

    def test_is_rigid(self):
        """Test a predicate is rigid when its extension never changes."""
        M = two_world_structure()
        assert not is_rigid(M, "P")
        assert is_rigid(M, "Q")

    def test_renamed_structure_is_isomorphic(self):
        """Test renaming elements and worlds preserves isomorphism."""
        M = two_world_structure()
        N = StandpointStructure(
            domain=("e1", "e0"),
            worlds=("v1", "v0"),
            signature=SIG,
            sigma={"s": frozenset({"v0"})},
            gamma={
                "v0": build_extension([("P", ("e0",)), ("R", ("e0", "e1"))]),
                "v1": build_extension([("P", ("e1",))]),
            },
            const_map={"a": "e0"},
        )
        assert structures_isomorphic(M, N)

    def test_sigma_breaks_isomorphism(self):
        """Test moving a standpoint to the other world breaks isomorphism."""
        M = two_world_structure()
        N = M.model_copy(update={"sigma": {**M.sigma, "s": frozenset({"w1"})}})
        assert not structures_isomorphic(M, N)

    def test_interpretations_isomorphic(self):
        """Test FO isomorphism is structure isomorphism on one world."""
        sig = Signature(predicates={"P": 1})
        I = FOInterpretation(domain=("a", "b"), signature=sig, ext=build_extension([("P", ("a",))]))
        J = FOInterpretation(domain=("c", "d"), signature=sig, ext=build_extension([("P", ("d",))]))
        K = FOInterpretation(domain=("c", "d"), signature=sig, ext=build_extension([("P", ("c",)), ("P", ("d",))]))
        assert interpretations_isomorphic(I, J)
        assert not interpretations_isomorphic(I, K)
