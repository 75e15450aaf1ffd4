"""Exact integer linear algebra for finitely generated abelian groups.

Groups are presented as ordered lists of cyclic factor orders (0 encodes an
infinite cyclic factor, d >= 1 a factor of order d), elements as coefficient
vectors reduced mod the factor orders, and homomorphisms as integer matrices.
Everything runs on Python's arbitrary-precision integers; matrices here are
tiny (at most ~10x10) so textbook Smith normal form is plenty.

>>> G = AbGroup([2, 8], names=["a", "b"])
>>> G
AbGroup([2, 8])
>>> str(G)
'Z/2{a} + Z/8{b}'
>>> h = Homomorphism(AbGroup([0]), G, [[1], [1]])
>>> C, proj = cokernel(h)
>>> C.order()
2
"""

from __future__ import annotations

from itertools import product as _iproduct
from math import gcd


def xgcd(a, b):
    # Maintain x*a + y*b == g alongside the Euclidean algorithm.
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def _det(M):
    # Fraction-free expansion; only used on the small unimodular witnesses.
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * _det(minor)
    return total


def smith_normal_form(M):
    """Return (U, D, V) with U*M*V = D, D diagonal with d1 | d2 | ...

    U and V are unimodular (determinant +-1). M is any rectangular integer
    matrix given as a list of rows; it is not modified.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    D = [list(r) for r in M]
    U = _identity(rows)
    V = _identity(cols)

    def row_op(i1, i2, j):
        # Zero D[i2][j] against pivot D[i1][j] with a unimodular 2x2 block.
        a, b = D[i1][j], D[i2][j]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            q = b // a
            for t in range(cols):
                D[i2][t] -= q * D[i1][t]
            for t in range(rows):
                U[i2][t] -= q * U[i1][t]
            return
        x, y, g = xgcd(a, b)
        ag, bg = a // g, b // g
        for t in range(cols):
            d1, d2 = D[i1][t], D[i2][t]
            D[i1][t] = x * d1 + y * d2
            D[i2][t] = -bg * d1 + ag * d2
        for t in range(rows):
            u1, u2 = U[i1][t], U[i2][t]
            U[i1][t] = x * u1 + y * u2
            U[i2][t] = -bg * u1 + ag * u2

    def col_op(j1, j2, i):
        a, b = D[i][j1], D[i][j2]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            q = b // a
            for t in range(rows):
                D[t][j2] -= q * D[t][j1]
            for t in range(cols):
                V[t][j2] -= q * V[t][j1]
            return
        x, y, g = xgcd(a, b)
        ag, bg = a // g, b // g
        for t in range(rows):
            d1, d2 = D[t][j1], D[t][j2]
            D[t][j1] = x * d1 + y * d2
            D[t][j2] = -bg * d1 + ag * d2
        for t in range(cols):
            v1, v2 = V[t][j1], V[t][j2]
            V[t][j1] = x * v1 + y * v2
            V[t][j2] = -bg * v1 + ag * v2

    def swap_rows(i1, i2):
        D[i1], D[i2] = D[i2], D[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for t in range(rows):
            D[t][j1], D[t][j2] = D[t][j2], D[t][j1]
        for t in range(cols):
            V[t][j1], V[t][j2] = V[t][j2], V[t][j1]

    t = 0
    while t < rows and t < cols:
        # Find a pivot for position (t, t).
        pi, pj = -1, -1
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] != 0:
                    pi, pj = i, j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        # Clear row and column t; repeat in case fill-in reappears.
        while True:
            for i in range(t + 1, rows):
                row_op(t, i, t)
            dirty = False
            for j in range(t + 1, cols):
                if D[t][j] != 0:
                    col_op(t, j, t)
                    dirty = True
            if not dirty and all(D[i][t] == 0 for i in range(t + 1, rows)):
                break
        t += 1

    # Enforce the divisibility chain d1 | d2 | ...
    r = t
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a != 0 and b % a != 0:
                # Fold b into position i via one column add then re-reduce.
                for t2 in range(rows):
                    D[t2][i] += D[t2][i + 1]
                for t2 in range(cols):
                    V[t2][i] += V[t2][i + 1]
                row_op(i, i + 1, i)
                while True:
                    moved = False
                    for j in range(i + 1, cols):
                        if D[i][j] != 0:
                            col_op(i, j, i)
                            moved = True
                    for i2 in range(i + 1, rows):
                        if D[i2][i] != 0:
                            row_op(i, i2, i)
                            moved = True
                    if not moved:
                        break
                changed = True
    for i in range(r):
        if D[i][i] < 0:
            for t2 in range(cols):
                D[i][t2] = -D[i][t2]
            for t2 in range(rows):
                U[i][t2] = -U[i][t2]
    return U, D, V


def _diag(D):
    n = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(n)]


def _solve_integer(B, x):
    """One integer solution t of B t = x, or None. B: list of rows."""
    rows = len(B)
    cols = len(B[0]) if rows else 0
    U, D, V = smith_normal_form(B)
    c = [sum(U[i][t] * x[t] for t in range(rows)) for i in range(rows)]
    d = _diag(D)
    y = [0] * cols
    for i in range(rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            if i < cols:
                y[i] = c[i] // di
    return [sum(V[i][t] * y[t] for t in range(cols)) for i in range(cols)]


def _nullspace(A):
    """Basis (list of vectors) of the integer nullspace of A."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return _identity(cols)
    U, D, V = smith_normal_form(A)
    d = _diag(D)
    rank = sum(1 for v in d if v != 0)
    return [[V[i][j] for i in range(cols)] for j in range(rank, cols)]


def _sort_key(d):
    # Divisibility-friendly order: finite factors ascending, then Z factors.
    return (1, 0) if d == 0 else (0, d)


class AbGroup:
    """Finitely generated abelian group as an ordered list of cyclic factors.

    Factors of 1 are dropped; the rest are stored finite-ascending with
    infinite (0) factors last, carrying their generator names along.
    """

    __slots__ = ("factors", "names")

    def __init__(self, factors, names=None):
        factors = [int(d) for d in factors]
        if any(d < 0 for d in factors):
            raise ValueError("factor orders must be non-negative")
        if names is not None:
            if len(names) != len(factors):
                raise ValueError("one name per factor required")
            paired = [(d, n) for d, n in zip(factors, names) if d != 1]
            paired.sort(key=lambda p: _sort_key(p[0]))
            self.factors = tuple(d for d, _ in paired)
            self.names = tuple(n for _, n in paired)
        else:
            kept = sorted((d for d in factors if d != 1), key=_sort_key)
            self.factors = tuple(kept)
            self.names = None

    @property
    def rank(self):
        return len(self.factors)

    def is_trivial(self):
        return not self.factors

    def is_finite(self):
        return 0 not in self.factors

    def order(self):
        """Group order; None when infinite."""
        if not self.is_finite():
            return None
        n = 1
        for d in self.factors:
            n *= d
        return n

    def exponent(self):
        """Smallest e >= 1 with e*x = 0 for all x; None when infinite."""
        if not self.is_finite():
            return None
        e = 1
        for d in self.factors:
            e = e * d // gcd(e, d)
        return e

    def reduce(self, coeffs):
        if len(coeffs) != self.rank:
            raise ValueError("coefficient vector has wrong length")
        return tuple(c % d if d else c for c, d in zip(coeffs, self.factors))

    def element(self, coeffs):
        return GroupElement(self, coeffs)

    def zero(self):
        return GroupElement(self, [0] * self.rank)

    def generator(self, i):
        coeffs = [0] * self.rank
        coeffs[i] = 1
        return GroupElement(self, coeffs)

    def generators(self):
        return [self.generator(i) for i in range(self.rank)]

    def elements(self):
        """Iterate all elements; rejects infinite groups."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for combo in _iproduct(*(range(d) for d in self.factors)):
            yield GroupElement(self, list(combo))

    def invariant_factors(self):
        """Canonical invariant-factor list d1 | d2 | ... (0s last)."""
        if not self.factors:
            return []
        n = self.rank
        rel = [[self.factors[i] if i == j else 0 for j in range(n)]
               for i in range(n)]
        _, D, _ = smith_normal_form(rel)
        d = _diag(D)
        out = sorted((v for v in d if v != 1), key=_sort_key)
        return out

    def is_isomorphic(self, other):
        return self.invariant_factors() == other.invariant_factors()

    def __eq__(self, other):
        if not isinstance(other, AbGroup):
            return NotImplemented
        return self.factors == other.factors and self.names == other.names

    def __hash__(self):
        return hash((self.factors, self.names))

    def __repr__(self):
        return f"AbGroup({list(self.factors)})"

    def __str__(self):
        if not self.factors:
            return "0"
        parts = []
        for i, d in enumerate(self.factors):
            base = "Z" if d == 0 else f"Z/{d}"
            if self.names:
                base += "{%s}" % self.names[i]
            parts.append(base)
        return " + ".join(parts)


class GroupElement:
    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs):
        self.group = group
        self.coeffs = group.reduce(list(coeffs))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def order(self):
        """Order of the element; None when infinite."""
        n = 1
        for c, d in zip(self.coeffs, self.group.factors):
            if d == 0:
                if c != 0:
                    return None
                continue
            k = d // gcd(d, c) if c else 1
            n = n * k // gcd(n, k)
        return n

    def __add__(self, other):
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group,
                            [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return GroupElement(self.group, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        return GroupElement(self.group, [k * c for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.group, self.coeffs))

    def __repr__(self):
        return f"GroupElement({self.coeffs!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            name = (self.group.names[i] if self.group.names
                    else f"e{i}")
            parts.append(name if c == 1 else f"{c}*{name}")
        return "+".join(parts)


class Homomorphism:
    """Integer matrix acting on coefficient vectors (codomain x domain).

    Columns are images of the domain generators; construction checks that
    each column is killed by its generator's order in the codomain.
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain, codomain, matrix):
        matrix = [list(row) for row in matrix]
        if len(matrix) != codomain.rank:
            raise ValueError("matrix has wrong number of rows")
        for row in matrix:
            if len(row) != domain.rank:
                raise ValueError("matrix has wrong number of columns")
        for j, d in enumerate(domain.factors):
            if d == 0:
                continue
            col = [d * matrix[i][j] for i in range(codomain.rank)]
            if not codomain.element(col).is_zero():
                raise ValueError(
                    f"column {j} is not a well-defined image: order {d} "
                    "generator maps to an element not killed by it")
        self.domain = domain
        self.codomain = codomain
        self.matrix = tuple(tuple(row) for row in matrix)

    def __call__(self, elem):
        if elem.group != self.domain:
            raise ValueError("element not in the domain")
        out = [sum(self.matrix[i][j] * elem.coeffs[j]
                   for j in range(self.domain.rank))
               for i in range(self.codomain.rank)]
        return self.codomain.element(out)

    def is_surjective(self):
        img = image(self)
        amb = self.codomain
        return all(img.contains(g) for g in amb.generators())

    def __repr__(self):
        return f"Homomorphism({self.domain!r} -> {self.codomain!r})"


def _relation_matrix(group):
    n = group.rank
    return [[group.factors[i] if i == j else 0 for j in range(n)]
            for i in range(n)]


def _lattice_quotient(big, small, dim):
    """Invariant factors of span(big)/span(small); columns as vectors.

    span(small) must be contained in span(big); both live in Z^dim.
    """
    if not big:
        return []
    B = [[v[i] for v in big] for i in range(dim)]
    U, D, V = smith_normal_form(B)
    d = _diag(D)
    rank = sum(1 for v in d if v != 0)
    if rank == 0:
        return []
    # Lattice basis: d_i times column i of U^{-1}; a vector s in the span
    # has coordinates ((U s)_i / d_i) in that basis.
    coords = []
    for s in small:
        if _solve_integer(B, list(s)) is None:
            raise ValueError("small lattice not contained in big lattice")
        c = [sum(U[i][t] * s[t] for t in range(dim)) for i in range(dim)]
        coords.append([c[i] // d[i] for i in range(rank)])
    if not coords:
        return [0] * rank
    # span(big) is free of rank `rank`; the quotient is Z^rank / colspan(T).
    T = [[coords[j][i] for j in range(len(coords))] for i in range(rank)]
    _, DT, _ = smith_normal_form(T)
    dt = _diag(DT)
    out = [v for v in dt if v != 1]
    out += [0] * (rank - len(dt))
    return sorted(out, key=_sort_key)


class Subgroup:
    """Subgroup of an ambient group given by generators, with canonical form."""

    __slots__ = ("ambient", "generators", "canonical_form", "_lattice")

    def __init__(self, ambient, generators):
        for g in generators:
            if g.group != ambient:
                raise ValueError("generator outside the ambient group")
        self.ambient = ambient
        self.generators = tuple(generators)
        rel = _relation_matrix(ambient)
        rel_cols = [[rel[i][j] for i in range(ambient.rank)]
                    for j in range(ambient.rank)]
        gen_cols = [list(g.coeffs) for g in generators]
        big = gen_cols + rel_cols
        self._lattice = big
        factors = _lattice_quotient(big, rel_cols, ambient.rank)
        self.canonical_form = AbGroup(factors)

    def contains(self, elem):
        if elem.group != self.ambient:
            raise ValueError("element outside the ambient group")
        if not self._lattice:
            return elem.is_zero()
        B = [[v[i] for v in self._lattice] for i in range(self.ambient.rank)]
        return _solve_integer(B, list(elem.coeffs)) is not None

    def contains_subgroup(self, other):
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return (self.ambient == other.ambient
                and self.contains_subgroup(other)
                and other.contains_subgroup(self))

    def order(self):
        return self.canonical_form.order()

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Subgroup(<{gens}> of {self.ambient!r})"

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"<{gens}> = {self.canonical_form}"


def subgroup_generated(ambient, elems):
    return Subgroup(ambient, list(elems))


def contains(subgroup, elem):
    return subgroup.contains(elem)


def kernel(h):
    """Subgroup of the domain mapping to zero."""
    dom, cod = h.domain, h.codomain
    r, s = dom.rank, cod.rank
    if r == 0:
        return Subgroup(dom, [])
    if s == 0:
        return Subgroup(dom, dom.generators())
    # Solve M x + D_H y = 0 over Z; kernel elements are the x parts.
    A = [[h.matrix[i][j] for j in range(r)]
         + [cod.factors[i] if i == k else 0 for k in range(s)]
         for i in range(s)]
    gens = []
    seen = set()
    for v in _nullspace(A):
        x = dom.element(v[:r])
        if not x.is_zero() and x.coeffs not in seen:
            seen.add(x.coeffs)
            gens.append(x)
    return Subgroup(dom, gens)


def image(h):
    return Subgroup(h.codomain, [h(g) for g in h.domain.generators()])


def cokernel(h):
    """Quotient codomain/image(h) plus the projection homomorphism."""
    cod = h.codomain
    s = cod.rank
    cols = [list(col) for col in zip(*h.matrix)] if h.domain.rank else []
    rel = _relation_matrix(cod)
    rel_cols = [[rel[i][j] for i in range(s)] for j in range(s)]
    A_cols = cols + rel_cols
    if s == 0:
        return AbGroup([]), Homomorphism(cod, AbGroup([]), [])
    A = [[c[i] for c in A_cols] for i in range(s)]
    U, D, V = smith_normal_form(A)
    d = _diag(D)
    d += [0] * (s - len(d))
    kept = [i for i in range(s) if d[i] != 1]
    factors = [d[i] for i in kept]
    quot = AbGroup(factors)
    # Factors were permuted on normalization; rebuild the projection rows in
    # the order AbGroup stored them.
    order_pairs = sorted(((d[i], i) for i in kept),
                         key=lambda p: _sort_key(p[0]))
    proj_rows = [list(U[i]) for _, i in order_pairs]
    proj = Homomorphism(cod, quot, proj_rows)
    return quot, proj
