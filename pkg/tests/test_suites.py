"""Tests for standpoint_c2.suites module.

Each suite runs at tiny sizes; budget exhaustion shows up as skips, which
still pass.
"""

import pytest
from standpoint_c2.core import CaseSchema
from standpoint_c2.corpus import hand_written_sentences
from standpoint_c2.reductions import CURATED_CASES, print_case
from standpoint_c2.removal import compute_params
from standpoint_c2.search import structure_count
from standpoint_c2.suites import SuiteContext
from standpoint_c2.syntax import Signature, infer_signature


@pytest.fixture
def ctx() -> SuiteContext:
    return SuiteContext()


def _defaults(suite) -> dict:
    properties = CaseSchema.from_func(suite).parameters["properties"]
    return {key: value.get("default") for key, value in properties.items()}


class TestSuiteContext:
    """Test the suite registry."""

    def test_names(self, ctx):
        """Test every suite is registered under its name."""
        assert ctx.suite_names == [
            "closure-invariance",
            "dl-agreement",
            "frugal-equisat",
            "reductions",
            "rigidity",
            "stack-roundtrip",
            "translation-agreement",
            "witness-selection",
        ]

    def test_get_suite(self, ctx):
        """Test suites are found by name."""
        assert ctx.get_suite("rigidity") is ctx.rigidity

    def test_get_suite_by_alias(self, ctx):
        """Test the short suite names resolve to their suites."""
        assert ctx.get_suite("lemma32") is ctx.closure_invariance
        assert ctx.get_suite("thm34") is ctx.witness_selection
        assert ctx.get_suite("trans-lemma39") is ctx.translation_agreement


class TestSuites:
    """Test each suite passes on small inputs."""

    @pytest.mark.asyncio
    async def test_closure_invariance(self, ctx):
        """Test closure evaluation is permutation invariant on every tiny structure."""
        report = await ctx.closure_invariance(seed=1, n_formulas=4, max_domain=1, max_worlds=2)
        assert report.passed
        assert [case.name for case in report.cases] == ["slice-d1-w1", "slice-d1-w2"]
        # P, rigid E and R over one element: 2^3 structures with one world, 2^5 with two
        assert report.tally()["structures"] == 40
        assert report.tally()["exhaustive"] == 40
        assert "sampled" not in report.tally()

    @pytest.mark.asyncio
    async def test_closure_invariance_samples_large_slices(self, ctx):
        """Test slices above the grid limit are sampled and reported as such."""
        report = await ctx.closure_invariance(seed=1, n_formulas=2, max_domain=2, max_worlds=1, grid_limit=8, samples=3)
        assert report.passed
        assert report.tally()["exhaustive"] == 8
        assert report.tally()["sampled"] == 3

    def test_closure_invariance_default_grid(self, ctx):
        """Test the default grid reaches three elements and two worlds."""
        defaults = _defaults(ctx.closure_invariance)
        assert (defaults["max_domain"], defaults["max_worlds"]) == (3, 2)
        signature = Signature(predicates={"P": 1, "E": 1, "R": 2})
        assert structure_count(signature, 2, 2, ("E",)) <= defaults["grid_limit"]
        assert structure_count(signature, 3, 1, ("E",)) <= defaults["grid_limit"]

    @pytest.mark.asyncio
    async def test_deterministic(self, ctx):
        """Test the same seed gives the same cases."""
        first = await ctx.closure_invariance(seed=7, n_formulas=2, max_domain=2, max_worlds=1, grid_limit=8, samples=2)
        second = await ctx.closure_invariance(seed=7, n_formulas=2, max_domain=2, max_worlds=1, grid_limit=8, samples=2)
        assert first.cases == second.cases

    @pytest.mark.asyncio
    async def test_witness_selection(self, ctx):
        """Test witness selection on the frugal corpus."""
        report = await ctx.witness_selection(seed=1, n_random=3, max_domain=2, max_worlds=2)
        assert report.passed

    @pytest.mark.asyncio
    async def test_stack_roundtrip(self, ctx):
        """Test stacking and extraction invert each other."""
        report = await ctx.stack_roundtrip(seed=1, n_structures=5, max_domain=2, stack_domain=2, grid_elements=2)
        assert report.passed
        # grid over P: 2 + 4 structures with one layer, 4 with two
        assert report.tally()["exhaustive"] == 10
        assert report.tally()["structures"] == 15

    @pytest.mark.asyncio
    async def test_stack_grid_reaches_four_layers(self, ctx):
        """Test the exhaustive stack grid covers m = 2."""
        report = await ctx.stack_roundtrip(n_structures=0, stack_domain=1, grid_elements=4)
        assert report.passed
        assert "grid-m2-d1" in [case.name for case in report.cases]
        # m=0: 2+4+8+16, m=1: 4+16, m=2: 16
        assert report.tally()["exhaustive"] == 66
        assert _defaults(ctx.stack_roundtrip)["grid_elements"] == 8

    @pytest.mark.asyncio
    async def test_translation_agreement(self, ctx):
        """Test the layer translation agrees with closure semantics."""
        report = await ctx.translation_agreement(seed=1, n_random=3, max_domain=2, grid_limit=256, samples=4)
        assert report.passed

    @pytest.mark.asyncio
    async def test_translation_agreement_is_exhaustive(self, ctx):
        """Test a one-diamond sentence is checked on every structure with two elements."""
        report = await ctx.translation_agreement(seed=1, n_random=0, max_domain=2, grid_limit=2**12, samples=4)
        assert report.passed
        f = dict(hand_written_sentences())["p-then-possibly-q"]
        params = compute_params(f)
        signature = infer_signature(f).merge(Signature(predicates={e: 1 for e in params.e_preds}))
        expected = structure_count(signature, 2, 2**params.m, params.e_preds)
        case = next(case for case in report.cases if case.name == "p-then-possibly-q-agree-d2")
        assert case.counts == {"structures": expected, "exhaustive": expected}

    @pytest.mark.asyncio
    async def test_rigidity(self, ctx):
        """Test the rigidity sentence tracks rigid E-predicates."""
        report = await ctx.rigidity(seed=1, n_structures=6)
        assert report.passed

    @pytest.mark.asyncio
    async def test_dl_agreement(self, ctx):
        """Test the DL evaluator, translation and normal forms agree."""
        report = await ctx.dl_agreement(seed=1, n_structures=3, n_concepts=5, max_domain=2, depth=2)
        assert report.passed

    @pytest.mark.asyncio
    async def test_dl_agreement_tuple_count(self, ctx):
        """Test ctrans cases cycle through every size so the tuple count is fixed."""
        report = await ctx.dl_agreement(seed=1, n_structures=6, n_concepts=2, max_domain=3, max_worlds=2, depth=1)
        assert report.passed
        # sizes (1,1) (2,1) (3,1) (1,2) (2,2) (3,2): 18 world-element pairs per concept
        assert report.tally()["tuples"] == 36

    def test_dl_agreement_defaults_reach_ten_thousand_tuples(self, ctx):
        """Test the default run evaluates at least 10^4 tuples."""
        defaults = _defaults(ctx.dl_agreement)
        n, k = defaults["max_domain"], defaults["max_worlds"]
        pairs = sum((1 + i % n) * (1 + (i // n) % k) for i in range(defaults["n_structures"]))
        assert pairs * defaults["n_concepts"] >= 10_000

    @pytest.mark.asyncio
    async def test_frugal_equisat(self, ctx):
        """Test frugalization preserves bounded satisfiability."""
        report = await ctx.frugal_equisat(seed=1, n_random=3, max_domain=2, max_worlds=2)
        assert report.passed

    @pytest.mark.asyncio
    async def test_reductions_from_file(self, ctx, tmp_path):
        """Test a case file replaces the curated cases."""
        path = tmp_path / "cases.spc"
        path.write_text("".join(print_case(c) for c in CURATED_CASES if c.name in ("trivial-1", "open-2")))
        report = await ctx.reductions(cases_file=str(path))
        assert report.passed
        assert [case.name for case in report.cases] == ["open-2", "trivial-1"]
