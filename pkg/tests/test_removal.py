"""Tests for standpoint_c2.removal module."""

import pytest
from standpoint_c2.corpus import running_example
from standpoint_c2.errors import NotFrugalError
from standpoint_c2.removal import (
    RemovalParams,
    agree,
    build_rigidity_formula,
    compute_params,
    layer_count_exponent,
    removal_parts,
    removal_size_bound,
    remove_standpoints,
    standpoint_witness,
    stack_formula,
    tr,
    translate_tr,
    translation_witness,
)
from standpoint_c2.search import enumerate_structures
from standpoint_c2.semantics import StandpointStructure, build_extension, eval, eval_sentence_fo, satisfies
from standpoint_c2.syntax import (
    STAR,
    And,
    Dia,
    Signature,
    TRUE,
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
    iff,
    implies,
    iter_postorder,
    neg,
    subformulas,
)


def possibly_p_everywhere() -> StandpointStructure:
    return StandpointStructure(
        domain=("d0",),
        worlds=("w0",),
        signature=Signature(predicates={"P": 1}),
        gamma={"w0": build_extension([("P", ("d0",))])},
    )


class TestParams:
    """Test removal parameters."""

    def test_layer_count_exponent(self):
        """Test m = d + ceil(log2 d) and zero without diamonds."""
        assert [layer_count_exponent(d) for d in range(5)] == [0, 1, 3, 5, 6]

    def test_running_example_params(self):
        """Test the running example has two free diamonds among three."""
        params = compute_params(running_example())
        assert params.ell == 2
        assert params.dia_count == 3
        assert params.m == 5
        assert params.e_preds == ["_E1", "_E2"]
        assert params.level_preds == ("_L0", "_L1", "_L2", "_L3", "_L4")
        assert params.chain_pred == "_F"

    def test_params_require_frugal(self):
        """Test non-frugal input is rejected."""
        with pytest.raises(NotFrugalError, match="not frugal"):
            compute_params(dia("s", exists("x", atom("P", "x"))))

    def test_params_validated(self):
        """Test ell must match the indexed free diamonds."""
        with pytest.raises(ValueError, match="ell must equal"):
            RemovalParams(ell=1, m=0)

    def test_too_few_layers(self):
        """Test 2^m must host |Dia| * 2^|Dia| layers."""
        with pytest.raises(ValueError, match="cannot host"):
            RemovalParams(ell=0, m=1, dia_count=2, level_preds=("_L0",))


class TestTranslation:
    """Test the layer-wise translation."""

    def test_box_golden(self):
        """Test the translation of box Good(x) in the running example."""
        params = compute_params(running_example())
        expected = neg(forall("y", implies(
            eq("x", "y"),
            exists("x", And(left=agree(params.e_preds), right=neg(atom("Good", "x")))),
        )))
        assert tr(box(STAR, atom("Good", "x")), params) == expected

    def test_quantifiers_stay_in_layer(self):
        """Test quantifiers are relativized to the current layer."""
        params = compute_params(exists("x", dia(STAR, atom("P", "x"))))
        f = exists("y", atom("P", "y"))
        assert tr(f, params) == count(">=", 1, "y", And(left=agree(params.level_preds), right=atom("P", "y")))

    def test_translation_is_modal_free_c2(self):
        """Test translate_tr leaves no diamonds and stays within two variables."""
        f = running_example()
        trans = translate_tr(f, compute_params(f))
        assert not any(isinstance(g, Dia) for g in iter_postorder(trans))
        assert fragment_report(trans).is_c2

    def test_translate_rejects_non_frugal(self):
        """Test translate_tr refuses constants."""
        f = atom("P", "#a")
        with pytest.raises(NotFrugalError):
            translate_tr(f, RemovalParams(ell=0, m=0))


class TestRunningExampleShapes:
    """Test the running example's diamonds translate to their documented shapes with two layer bits."""

    E_PREDS = ["_E1", "_E2"]
    LEVELS = ["_L0", "_L1"]

    @classmethod
    def two_layer_params(cls) -> RemovalParams:
        _, free = dia_sets(running_example())
        return RemovalParams(ell=2, m=2, free_dia_index=tuple(zip(free, cls.E_PREDS)), level_preds=tuple(cls.LEVELS))

    def assert_equivalent_on_diagonal(self, f, g):
        signature = Signature(predicates=dict.fromkeys(["Good", "Best", *self.E_PREDS, *self.LEVELS], 1))
        for n in (1, 2):
            for M in enumerate_structures(signature, n, 1):
                for d in M.domain:
                    v = {"x": d, "y": d}
                    assert eval(M, "w0", v, f) == eval(M, "w0", v, g)

    def test_good_everywhere(self):
        """Test box Good(x) becomes: some y equal to x such that every E-agreeing x is Good."""
        shape = exists("y", conj(eq("x", "y"), forall("x", implies(agree(self.E_PREDS), atom("Good", "x")))))
        translated = tr(box(STAR, atom("Good", "x")), self.two_layer_params())
        self.assert_equivalent_on_diagonal(translated, shape)

    def test_uniquely_best(self):
        """Test the uniquely-best diamond moves x to an E-agreeing element and keeps y in its layer."""
        unique = forall("y", iff(atom("Best", "y"), eq("x", "y")))
        shape = forall("y", implies(eq("x", "y"), exists("x", conj(
            agree(self.E_PREDS),
            atom("Best", "x"),
            forall("y", implies(agree(self.LEVELS), iff(atom("Best", "y"), eq("x", "y")))),
        ))))
        translated = tr(dia(STAR, conj(atom("Best", "x"), unique)), self.two_layer_params())
        self.assert_equivalent_on_diagonal(translated, shape)

    def test_sentential_diamond(self):
        """Test the sentential diamond moves y and relativizes the inner x to its layer."""
        shape = forall("x", implies(eq("x", "y"), exists("y", conj(
            agree(self.E_PREDS),
            forall("x", implies(agree(self.LEVELS), disj(atom("Good", "x"), atom("Best", "x")))),
        ))))
        translated = tr(dia(STAR, forall("x", disj(atom("Good", "x"), atom("Best", "x")))), self.two_layer_params())
        self.assert_equivalent_on_diagonal(translated, shape)

    def test_agree_empty_is_true(self):
        """Test agreement on no predicates is trivially true."""
        assert agree([]) == TRUE


class TestRemoval:
    """Test the assembled removal and its witnesses."""

    def test_parts_conjoined(self):
        """Test the removal is stack and rigidity and translate_tr."""
        f = running_example()
        result = removal_parts(f)
        assert result.stack == stack_formula(result.params.level_preds, "_F", [])
        assert result.rigidity == build_rigidity_formula(result.params)
        assert remove_standpoints(f) == result.formula

    def test_size_bound(self):
        """Test the output size stays within its linear bound."""
        f = running_example()
        result = removal_parts(f)
        assert len(subformulas(result.formula)) <= removal_size_bound(f, result.params)

    def test_translation_witness_models_removal(self):
        """Test a model of the sentence stacks into a model of its removal."""
        f = forall("x", dia(STAR, atom("P", "x")))
        I = translation_witness(possibly_p_everywhere(), f)
        assert len(I.domain) == 2
        assert eval_sentence_fo(I, remove_standpoints(f))

    def test_standpoint_witness_round_trip(self):
        """Test extracting from the stacked witness gives back a model of the sentence."""
        f = forall("x", dia(STAR, atom("P", "x")))
        I = translation_witness(possibly_p_everywhere(), f)
        M = standpoint_witness(I, f)
        assert satisfies(M, f)
        assert set(M.signature.predicates) == {"P"}
