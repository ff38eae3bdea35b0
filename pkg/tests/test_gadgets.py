"""Tests for standpoint_c2.gadgets module."""

import pytest
from standpoint_c2.dl import conjuncts, dl_satisfies, dl_to_fosl
from standpoint_c2.gadgets import TilingSystem, find_tiling, gen_exp_tiling_tbox, gen_und_grid_gcis, tiling_model
from standpoint_c2.semantics import satisfies
from standpoint_c2.syntax import fragment_report

TRIVIAL = TilingSystem(k=1, h=frozenset({(1, 1)}), v=frozenset({(1, 1)}), init=(1,))
ALTERNATING = TilingSystem(k=2, h=frozenset({(1, 2), (2, 1)}), v=frozenset({(1, 2), (2, 1)}), init=(1, 2))
INCOMPATIBLE = TilingSystem(k=2, init=(1, 2))
STRIPED = TilingSystem(k=2, h=frozenset({(2, 1), (1, 2)}), v=frozenset({(1, 1), (2, 2)}), init=(2,))


class TestTilingSystem:
    """Test tiling system validation."""

    def test_grid_side(self):
        """Test the grid side is two to the length of the initial row."""
        assert ALTERNATING.n == 2
        assert ALTERNATING.side == 4

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"k": 2, "h": frozenset({(1, 3)})}, "outside tiles"),
            ({"k": 1, "init": ()}, "at least one tile"),
            ({"k": 1, "init": (2,)}, "outside 1..1"),
        ],
    )
    def test_invalid(self, kwargs, message):
        """Test tiles outside 1..k and empty initial rows are rejected."""
        with pytest.raises(ValueError, match=message):
            TilingSystem(**kwargs)


class TestTilingTBox:
    """Test the exponential tiling TBox."""

    def test_shape(self):
        """Test the single-tile system gives its expected GCIs in alcoiq mode."""
        doc = gen_exp_tiling_tbox(TRIVIAL)
        assert doc.mode == "alcoiq"
        assert len(conjuncts(doc.sentence)) == 23

    def test_translation_is_monodic_c2(self):
        """Test the TBox lands in monodic C2."""
        report = fragment_report(dl_to_fosl(gen_exp_tiling_tbox(ALTERNATING).sentence))
        assert report.is_c2
        assert report.is_monodic

    def test_incompatibility_adds_gcis(self):
        """Test every forbidden pair costs one GCI per axis."""
        with_pairs = len(conjuncts(gen_exp_tiling_tbox(ALTERNATING).sentence))
        without = len(conjuncts(gen_exp_tiling_tbox(INCOMPATIBLE).sentence))
        assert without - with_pairs == 4


class TestTilings:
    """Test finding tilings and building their models."""

    def test_trivial(self):
        """Test one compatible tile fills the grid."""
        assert find_tiling(TRIVIAL) == {(x, y): 1 for x in range(2) for y in range(2)}

    def test_alternating_is_a_checkerboard(self):
        """Test alternating tiles form a checkerboard from the initial row."""
        tiling = find_tiling(ALTERNATING)
        assert tiling == {(x, y): 1 + (x + y) % 2 for x in range(4) for y in range(4)}

    def test_incompatible(self):
        """Test no tiling exists without compatible pairs."""
        assert find_tiling(INCOMPATIBLE) is None
        assert tiling_model(INCOMPATIBLE) is None

    def test_model_satisfies_tbox(self):
        """Test the explicit model satisfies the TBox and its translation."""
        doc = gen_exp_tiling_tbox(TRIVIAL)
        M = tiling_model(TRIVIAL)
        assert M is not None
        assert len(M.domain) == 5
        assert len(M.worlds) == 4
        assert dl_satisfies(M, doc.sentence)
        assert satisfies(M, dl_to_fosl(doc.sentence))

    def test_checkerboard_model(self):
        """Test the larger model satisfies the TBox directly."""
        M = tiling_model(ALTERNATING)
        assert M is not None
        assert dl_satisfies(M, gen_exp_tiling_tbox(ALTERNATING).sentence)


class TestSingleBitGrid:
    """Test the tiling gadget on a 2 x 2 grid with a non-trivial domino set."""

    def test_forced_stripes(self):
        """Test the initial tile forces vertical stripes."""
        assert STRIPED.n == 1
        assert find_tiling(STRIPED) == {(0, 0): 2, (1, 0): 1, (0, 1): 2, (1, 1): 1}

    def test_model_satisfies_tbox(self):
        """Test the striped model satisfies the TBox and its translation."""
        doc = gen_exp_tiling_tbox(STRIPED)
        M = tiling_model(STRIPED)
        assert M is not None
        assert len(M.domain) == 5
        assert dl_satisfies(M, doc.sentence)
        assert satisfies(M, dl_to_fosl(doc.sentence))

    def test_missing_vertical_pair(self):
        """Test the grid cannot be tiled once the first column has no vertical pair."""
        broken = STRIPED.model_copy(update={"v": frozenset({(1, 1)})})
        assert find_tiling(broken) is None
        assert tiling_model(broken) is None


class TestGridGCIs:
    """Test the rigid grid GCIs."""

    def test_shape(self):
        """Test E is rigid and the GCIs translate into monodic C2."""
        doc = gen_und_grid_gcis()
        assert doc.rigid == frozenset({"E"})
        assert len(conjuncts(doc.sentence)) == 4
        report = fragment_report(dl_to_fosl(doc.sentence))
        assert report.is_c2
        assert report.is_monodic
