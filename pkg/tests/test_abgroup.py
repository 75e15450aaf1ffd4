"""Exact-arithmetic core, checked against enumeration oracles."""

import random
from itertools import combinations
from math import gcd

import pytest

from stemchase.abgroup import (
    AbGroup,
    Homomorphism,
    Subgroup,
    cokernel,
    contains,
    image,
    kernel,
    smith_normal_form,
    subgroup_generated,
    xgcd,
    _det,
)


# ---------------------------------------------------------------------------
# Oracles (independent of the implementation under test)
# ---------------------------------------------------------------------------

def snf_diagonal_oracle(M):
    """Invariant factors via determinantal divisors: d_k = g_k / g_{k-1}."""
    rows, cols = len(M), len(M[0]) if M else 0
    r = min(rows, cols)

    def minors_gcd(k):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                sub = [[M[i][j] for j in cs] for i in rs]
                g = gcd(g, _det(sub))
        return abs(g)

    out = []
    prev = 1
    for k in range(1, r + 1):
        g = minors_gcd(k)
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def enumerate_subgroup(gens):
    """All elements generated by gens inside a finite ambient group."""
    if not gens:
        return set()
    ambient = gens[0].group
    zero = ambient.zero()
    seen = {zero}
    frontier = [zero]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def order_profile(elems):
    """Multiset of element orders; classifies finite abelian groups."""
    profile = {}
    for e in elems:
        profile[e.order()] = profile.get(e.order(), 0) + 1
    return profile


def group_order_profile(factors):
    G = AbGroup(factors)
    return order_profile(set(G.elements()))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def assert_snf_contract(M):
    U, D, V = smith_normal_form(M)
    rows, cols = len(M), len(M[0]) if M else 0
    # U M V = D exactly.
    UM = [[sum(U[i][t] * M[t][j] for t in range(rows)) for j in range(cols)]
          for i in range(rows)]
    UMV = [[sum(UM[i][t] * V[t][j] for t in range(cols)) for j in range(cols)]
           for i in range(rows)]
    assert UMV == D
    # Diagonal with divisibility chain.
    diag = []
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert D[i][j] == 0
            elif D[i][j]:
                diag.append(D[i][j])
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    assert abs(_det(U)) == 1
    assert abs(_det(V)) == 1
    return diag


def test_snf_identity():
    diag = assert_snf_contract([[1, 0], [0, 1]])
    assert diag == [1, 1]


def test_snf_frozen_example():
    # Oracle (determinantal divisors): gcd of entries 2, |det| 20 -> (2, 10).
    M = [[2, 4], [-2, 6]]
    assert snf_diagonal_oracle(M) == [2, 10]
    diag = assert_snf_contract(M)
    assert diag == [2, 10]


def test_snf_zero_matrix():
    U, D, V = smith_normal_form([[0]])
    assert D == [[0]]
    assert U == [[1]] and V == [[1]]


def test_snf_random_vs_minor_gcd_oracle():
    rng = random.Random(90210)
    for _ in range(200):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        M = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        diag = assert_snf_contract(M)
        assert diag == snf_diagonal_oracle(M)


def test_xgcd():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (35, -21)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g == gcd(a, b)


# ---------------------------------------------------------------------------
# Groups and elements
# ---------------------------------------------------------------------------

def test_factor_normalization():
    G = AbGroup([8, 2, 0, 3], names=["a", "b", "c", "d"])
    assert G.factors == (2, 3, 8, 0)
    assert G.names == ("b", "d", "a", "c")
    assert AbGroup([1, 4]).factors == (4,)


def test_element_reduction_unique():
    G = AbGroup([2, 8])
    assert G.element([3, 9]).coeffs == (1, 1)
    assert G.element([2, 8]).is_zero()
    Z = AbGroup([0])
    assert Z.element([-5]).coeffs == (-5,)


def test_order_and_exponent():
    assert AbGroup([2, 8]).order() == 16
    assert AbGroup([]).order() == 1
    assert AbGroup([0]).order() is None
    assert AbGroup([2, 8]).exponent() == 8
    assert AbGroup([0]).element([3]).order() is None
    assert AbGroup([12]).element([8]).order() == 3


def test_enumeration_rejects_infinite():
    with pytest.raises(ValueError):
        list(AbGroup([0, 2]).elements())


def test_invariant_factors():
    assert AbGroup([4, 2, 3]).invariant_factors() == [2, 12]
    assert AbGroup([2, 8]).invariant_factors() == [2, 8]
    assert AbGroup([0, 6]).invariant_factors() == [6, 0]
    assert AbGroup([2, 3]).is_isomorphic(AbGroup([6]))


# ---------------------------------------------------------------------------
# Homomorphisms: validation, kernel, cokernel
# ---------------------------------------------------------------------------

def test_homomorphism_validation():
    G = AbGroup([2])
    H = AbGroup([8])
    with pytest.raises(ValueError):
        Homomorphism(G, H, [[1]])  # 2*1 != 0 in Z/8
    Homomorphism(G, H, [[4]])  # fine
    with pytest.raises(ValueError):
        Homomorphism(AbGroup([2]), AbGroup([0]), [[1]])


def test_kernel_frozen_examples():
    # Multiplication-by-eta pattern: Z/16 -> Z/2, 1 -> 1: kernel <2> = Z/8.
    h = Homomorphism(AbGroup([16]), AbGroup([2]), [[1]])
    k = kernel(h)
    assert k.canonical_form.factors == (8,)
    assert k.contains(AbGroup([16]).element([2]))
    assert not k.contains(AbGroup([16]).element([1]))

    # Identity has trivial kernel.
    G = AbGroup([6])
    assert kernel(Homomorphism(G, G, [[1]])).canonical_form.is_trivial()

    # Z/8 -> Z/8, 1 -> 2: oracle = enumerate all 8 elements -> {0, 4} = Z/2.
    h = Homomorphism(AbGroup([8]), AbGroup([8]), [[2]])
    k = kernel(h)
    assert k.canonical_form.factors == (2,)
    assert k.contains(AbGroup([8]).element([4]))


def test_cokernel_frozen_examples():
    # Z -> Z/8 + Z/2, 1 -> (1,1).  Enumeration oracle: the image has the 16
    # cosets of <(1,1)> which has order 8, so the quotient has order 2.
    # (1,0) is not in the image; (2,0) is.
    Z = AbGroup([0])
    H = AbGroup([8, 2])
    h = Homomorphism(Z, H, [[1], [1]])
    img = enumerate_subgroup([h(Z.element([1]))])
    assert len(img) == 8
    assert H.element([1, 0]) not in img
    assert H.element([2, 0]) in img
    C, proj = cokernel(h)
    assert not proj(H.element([1, 0])).is_zero()
    assert proj(H.element([2, 0])).is_zero()
    assert C.order() == 2
    assert proj.is_surjective()

    # Zero map Z -> Z/2.
    C, _ = cokernel(Homomorphism(Z, AbGroup([2]), [[0]]))
    assert C.factors == (2,)

    # Identity on Z/6 has trivial cokernel.
    G = AbGroup([6])
    C, _ = cokernel(Homomorphism(G, G, [[1]]))
    assert C.is_trivial()


def random_group(rng, max_rank=3, max_factor=12):
    rank = rng.randint(0, max_rank)
    while True:
        factors = [rng.randint(2, max_factor) for _ in range(rank)]
        order = 1
        for d in factors:
            order *= d
        if order <= 200:
            return AbGroup(factors)


def random_hom(rng, dom, cod):
    # Build a valid matrix column by column: images must be killed by the
    # generator order, so pick from the d-torsion subgroup coordinatewise.
    matrix = [[0] * dom.rank for _ in range(cod.rank)]
    for j, d in enumerate(dom.factors):
        for i, e in enumerate(cod.factors):
            step = e // gcd(e, d)  # entries must be multiples of e/gcd(e,d)
            choices = [step * t for t in range(e // step)]
            matrix[i][j] = rng.choice(choices)
    return Homomorphism(dom, cod, matrix)


def test_kernel_cokernel_random_vs_enumeration():
    rng = random.Random(1729)
    for _ in range(500):
        dom = random_group(rng)
        cod = random_group(rng)
        h = random_hom(rng, dom, cod)

        k = kernel(h)
        brute_kernel = {x for x in dom.elements() if h(x).is_zero()}
        assert enumerate_subgroup(list(k.generators) + [dom.zero()]) == brute_kernel

        C, proj = cokernel(h)
        img = {h(x) for x in dom.elements()}
        cod_order = cod.order()
        assert cod_order % len(img) == 0
        assert C.order() == cod_order // len(img)
        # Projection kills exactly the image.
        for x in list(cod.elements())[:40]:
            assert proj(x).is_zero() == (x in img)
        # Isomorphism type agrees with the coset group's order profile.
        cosets = {}
        for x in cod.elements():
            cosets.setdefault(proj(x).coeffs, []).append(x)
        assert C.order() == len(cosets)
        assert group_order_profile(list(C.factors)) == order_profile(
            {proj(x) for x in cod.elements()})


# ---------------------------------------------------------------------------
# Subgroups
# ---------------------------------------------------------------------------

def test_subgroup_frozen_examples():
    # <4*b> inside Z/2{a} + Z/8{b} is Z/2.
    G = AbGroup([2, 8], names=["a", "b"])
    s = subgroup_generated(G, [G.element([0, 4])])
    assert s.canonical_form.factors == (2,)

    assert subgroup_generated(G, []).canonical_form.is_trivial()

    # {2, 3} generate all of Z/8.
    H = AbGroup([8])
    s = subgroup_generated(H, [H.element([2]), H.element([3])])
    assert s.canonical_form.factors == (8,)


def test_contains_frozen_examples():
    H = AbGroup([8])
    s = subgroup_generated(H, [H.element([2])])
    assert contains(s, H.element([4]))
    assert not contains(s, H.element([1]))

    # <(1,1)> in Z/8 + Z/2 misses (1,0): oracle is the 8-element enumeration.
    G = AbGroup([8, 2])
    s = subgroup_generated(G, [G.element([1, 1])])
    assert G.element([1, 0]) not in enumerate_subgroup([G.element([1, 1])])
    assert not contains(s, G.element([1, 0]))
    assert contains(s, G.element([2, 0]))


def test_contains_ambient_mismatch():
    G = AbGroup([8])
    s = subgroup_generated(G, [G.element([2])])
    with pytest.raises(ValueError):
        contains(s, AbGroup([4]).element([1]))


def test_subgroup_random_vs_enumeration():
    rng = random.Random(4104)
    for _ in range(150):
        G = random_group(rng)
        if G.order() == 1:
            continue
        gens = [G.element([rng.randrange(d) for d in G.factors])
                for _ in range(rng.randint(1, 3))]
        s = subgroup_generated(G, gens)
        brute = enumerate_subgroup(gens + [G.zero()])
        assert s.order() == len(brute)
        for x in list(G.elements())[:30]:
            assert s.contains(x) == (x in brute)
        assert group_order_profile(list(s.canonical_form.factors)) == \
            order_profile(brute)


def test_subgroup_generation_order_insensitive():
    rng = random.Random(555)
    G = AbGroup([4, 6, 2])
    for _ in range(40):
        gens = [G.element([rng.randrange(d) for d in G.factors])
                for _ in range(3)]
        s1 = subgroup_generated(G, gens)
        s2 = subgroup_generated(G, list(reversed(gens)))
        assert s1 == s2
        assert s1.canonical_form.factors == s2.canonical_form.factors
        # Regenerating from canonical data stays equal.
        s3 = subgroup_generated(G, list(s1.generators))
        assert s3 == s1


def test_image_subgroup():
    G = AbGroup([8, 2])
    h = Homomorphism(AbGroup([0]), G, [[1], [1]])
    img = image(h)
    assert img.order() == 8
    assert img.contains(G.element([2, 0]))
    assert not img.contains(G.element([1, 0]))
