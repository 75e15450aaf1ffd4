import random

import pytest

from stemchase.spectra import (
    CellSpectrum,
    apply_attaching_facts,
    apply_fact,
    dualize,
    stunted_projective,
    subquotient,
    wedge_split,
)
from stemchase.steenrod import AttachingKnowledge
from stemchase.stems import StemTable


@pytest.fixture(scope="module")
def table():
    return StemTable.shipped()


def test_stunted_cells_and_detection():
    X = stunted_projective(9, 7)
    assert X.cells == (16, 18)
    assert X.component(18, 16).is_zero()  # Sq^2(x^8) = 0

    X = stunted_projective(9, 6)
    assert X.cells == (14, 16, 18)
    assert X.component(16, 14) == AttachingKnowledge.exact("h1")
    assert X.component(18, 14) == AttachingKnowledge.odd_multiple("h2")
    assert X.component(18, 16).is_zero()

    sphere = stunted_projective(1, 0)
    assert sphere.cells == (2,)
    assert sphere.attaching == {}


def test_stunted_cell_count_and_dual_bottom():
    for m in range(2, 14):
        for k in range(m):
            X = stunted_projective(m, k)
            assert len(X.cells) == m - k
            assert dualize(X).bottom_cell() == -2 * m


def test_stunted_validation():
    with pytest.raises(ValueError):
        stunted_projective(5, 5)


def test_dualize_transports_components():
    X = stunted_projective(9, 6)
    D = dualize(X)
    assert D.cells == (-18, -16, -14)
    # Component between -14 and -16 is the original (16 -> 14) one.
    assert D.component(-14, -16) == AttachingKnowledge.exact("h1")
    assert D.component(-14, -18) == AttachingKnowledge.odd_multiple("h2")
    assert D.component(-16, -18).is_zero()


def test_dualize_involution_random():
    rng = random.Random(777)
    for _ in range(100):
        m = rng.randint(1, 13)
        k = rng.randint(0, m - 1)
        X = stunted_projective(m, k)
        assert dualize(dualize(X)) == X


def test_wedge_split_sphere_cases():
    D = dualize(stunted_projective(9, 7))
    parts = wedge_split(D)
    assert [p.cells for p in parts] == [(-18,), (-16,)]

    D = dualize(stunted_projective(13, 11))
    parts = wedge_split(D)
    assert [p.cells for p in parts] == [(-26,), (-24,)]
    assert dualize(stunted_projective(13, 11)).component(-24, -26).is_zero()

    sphere = dualize(stunted_projective(1, 0))
    assert wedge_split(sphere) == [sphere]


def test_wedge_split_needs_facts_for_cp7_cp3(table):
    D = dualize(stunted_projective(7, 3))
    # Without the literature facts the even-multiple and unknown components
    # block every split.
    assert len(wedge_split(D)) == 1
    refined = apply_attaching_facts(D, table.attaching_facts())
    parts = wedge_split(refined)
    assert [p.cells for p in parts] == [(-14,), (-12, -10, -8)]


def test_wedge_split_reassembly_partitions_cells():
    X = dualize(stunted_projective(9, 5))
    parts = wedge_split(X)
    cells = sorted(c for p in parts for c in p.cells)
    assert cells == list(X.cells)


def test_subquotient():
    D = dualize(stunted_projective(9, 4))
    sub = subquotient(D, [-12, -10])
    assert sub.cells == (-12, -10)
    assert sub.component(-10, -12) == AttachingKnowledge.exact("h1")

    assert subquotient(D, list(D.cells)).cells == D.cells
    single = subquotient(D, [-18])
    assert single.cells == (-18,)
    with pytest.raises(ValueError):
        subquotient(D, [-18, -14])


def test_apply_fact_refines_and_rejects(table):
    facts = {f.cell_pair: f for f in table.attaching_facts()}
    X = stunted_projective(7, 3)
    assert X.component(12, 8) == AttachingKnowledge.even_multiple("h2")
    refined = apply_fact(X, facts[(12, 8)])
    assert refined.component(12, 8) == AttachingKnowledge.exact("h2", 2)

    # The same fact transports to the dual diagram.
    D = dualize(X)
    refined_dual = apply_fact(D, facts[(12, 8)])
    assert refined_dual.component(-8, -12) == AttachingKnowledge.exact("h2", 2)

    # Parity clash: an exact even value cannot refine an odd component.
    X96 = stunted_projective(9, 6)
    clash = type(facts[(12, 8)])(
        "attaching_value", facts[(12, 8)].subject, "CP:18->14", "bogus")
    with pytest.raises(ValueError):
        apply_fact(X96, clash)


def test_refinement_monotone(table):
    facts = {f.cell_pair: f for f in table.attaching_facts()}
    X = apply_fact(stunted_projective(7, 3), facts[(12, 8)])
    again = apply_fact(X, facts[(12, 8)])
    assert again.component(12, 8) == AttachingKnowledge.exact("h2", 2)


def test_render_stable():
    X = dualize(stunted_projective(9, 7))
    out = X.render()
    assert out.splitlines()[0] == "D(CP9/CP7):"
    assert "[-16]" in out and "[-18]" in out
    assert X.render() == out


def test_component_bookkeeping_validation():
    with pytest.raises(ValueError):
        CellSpectrum("bad", [2, 4], {(2, 4): AttachingKnowledge.zero()})
    with pytest.raises(ValueError):
        CellSpectrum("bad", [4, 2], {})
