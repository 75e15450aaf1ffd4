import pytest

from stemchase.steenrod import (
    AttachingKnowledge,
    detect_component,
    p_power_hits,
    sq_coefficient,
)


def pascal_mod2_table(max_k, max_j):
    """Pascal triangle mod 2, built row by row; independent oracle."""
    table = [[0] * (max_j + 1) for _ in range(max_k + 1)]
    for k in range(max_k + 1):
        table[k][0] = 1
        for j in range(1, min(k, max_j) + 1):
            up = table[k - 1][j] if j <= max_j else 0
            table[k][j] = (table[k - 1][j - 1] + up) % 2
    return table


def test_quoted_instances():
    assert sq_coefficient(1, 7) == 1   # Sq^2(x^7) = x^8
    assert sq_coefficient(1, 8) == 0   # Sq^2(x^8) = 0
    assert sq_coefficient(2, 5) == 0   # Sq^4(x^5) = 0
    assert sq_coefficient(4, 5) == 1   # Sq^8(x^5) = x^9


def test_sq_matches_pascal_oracle():
    table = pascal_mod2_table(64, 8)
    for k in range(65):
        for j in range(9):
            assert sq_coefficient(j, k) == table[k][j], (j, k)


def test_sq2_parity_rule():
    for k in range(10_000):
        assert sq_coefficient(1, k) == (k % 2)


def test_sq4_mod4_rule():
    for k in range(10_000):
        assert sq_coefficient(2, k) == (1 if k % 4 in (2, 3) else 0)


def test_p_power_divisibility():
    assert not p_power_hits(7, 7)
    assert p_power_hits(7, 3)
    assert p_power_hits(7, 976)  # 976 = 7*139 + 3
    for p in (7, 11, 13):
        for k in range(1, 1001):
            assert p_power_hits(p, k) == (k % p != 0)
    with pytest.raises(ValueError):
        p_power_hits(9, 2)
    with pytest.raises(ValueError):
        p_power_hits(2, 3)


def test_detect_component_gap2():
    # 16-cell onto 14-cell inside CP^9/CP^6: Sq^2(x^7) = x^8.
    assert detect_component(14, 16) == AttachingKnowledge.exact("h1")
    assert detect_component(16, 18) == AttachingKnowledge.zero()


def test_detect_component_gap4_parity_only():
    assert detect_component(14, 18) == AttachingKnowledge.odd_multiple("h2")
    assert detect_component(10, 14) == AttachingKnowledge.even_multiple("h2")
    # Never claims exactness for gap 4 or 8.
    for lower in range(2, 40, 2):
        for gap in (4, 8):
            k = detect_component(lower, lower + gap)
            assert k.state in ("odd", "even")


def test_detect_component_gap8():
    assert detect_component(10, 18) == AttachingKnowledge.odd_multiple("h3")
    assert detect_component(6, 14) == AttachingKnowledge.even_multiple("h3")


def test_detect_component_odd_prime():
    assert detect_component(6, 18, prime=7) == AttachingKnowledge.exact("alpha1")
    assert detect_component(14, 26, prime=7) == AttachingKnowledge.zero()
    with pytest.raises(ValueError):
        detect_component(2, 8)
    with pytest.raises(ValueError):
        detect_component(2, 6, prime=7)


def test_knowledge_refinement():
    even = AttachingKnowledge.even_multiple("h2")
    exact = AttachingKnowledge.exact("h2", 2)
    assert even.refine(exact) == exact
    odd = AttachingKnowledge.odd_multiple("h2")
    with pytest.raises(ValueError):
        odd.refine(exact)
    # Monotone: exact never downgrades.
    with pytest.raises(ValueError):
        exact.refine(AttachingKnowledge.exact("h2", 4))
    assert exact.refine(AttachingKnowledge.exact("h2", 2)) == exact


def test_knowledge_parse_roundtrip():
    for text in ("0", "?", "odd*h2", "even*h3", "2*h3", "h1"):
        assert AttachingKnowledge.parse(text).serialize() == text
    assert AttachingKnowledge.exact("h2", 0) == AttachingKnowledge.zero()
