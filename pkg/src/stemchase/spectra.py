"""Finite stable cell diagrams: stunted projective spectra and their duals.

A diagram is a strictly increasing list of cell dimensions plus a sparse
matrix of pairwise attaching knowledge.  Components are always stored from
the higher cell to the lower one, in a spectrum and in its dual alike;
dualizing negates dimensions and transports each component unchanged, so
the dual of the dual is the original diagram field by field.

A component from a cell of dimension a onto one of dimension b lives in
stem dimension a - b - 1.  Only first-order (pairwise) data is tracked;
higher attaching information enters kernel chases through bracket facts.
"""

from __future__ import annotations

from .steenrod import AttachingKnowledge, detect_component

_DETECTED_GAPS_2 = (2, 4, 8)


class CellSpectrum:
    """Immutable cell diagram; all operations return new values."""

    __slots__ = ("name", "cells", "attaching")

    def __init__(self, name, cells, attaching):
        cells = tuple(cells)
        if list(cells) != sorted(set(cells)):
            raise ValueError("cells must be strictly increasing")
        for (upper, lower), know in attaching.items():
            if upper not in cells or lower not in cells:
                raise ValueError(f"attaching entry {(upper, lower)} off-diagram")
            if upper <= lower:
                raise ValueError(
                    "components run from a higher cell to a strictly lower one")
            if not isinstance(know, AttachingKnowledge):
                raise TypeError("attaching values must be AttachingKnowledge")
        self.name = name
        self.cells = cells
        self.attaching = dict(sorted(attaching.items()))

    def component(self, upper, lower):
        """Knowledge for the (upper -> lower) pair; Unknown when absent."""
        if upper not in self.cells or lower not in self.cells:
            raise ValueError(f"no cells {upper}, {lower} in {self.name}")
        return self.attaching.get((upper, lower), AttachingKnowledge.unknown())

    def stem_dim(self, upper, lower):
        return upper - lower - 1

    def top_cell(self):
        return self.cells[-1]

    def bottom_cell(self):
        return self.cells[0]

    def with_component(self, upper, lower, know):
        new = dict(self.attaching)
        if know.is_unknown():
            new.pop((upper, lower), None)
        else:
            new[(upper, lower)] = know
        return CellSpectrum(self.name, self.cells, new)

    def __eq__(self, other):
        if not isinstance(other, CellSpectrum):
            return NotImplemented
        return (self.name == other.name and self.cells == other.cells
                and self.attaching == other.attaching)

    def __repr__(self):
        return f"CellSpectrum({self.name!r}, cells={list(self.cells)})"

    def render(self):
        """Stable text picture, one line per cell, arrows annotated."""
        lines = [f"{self.name}:"]
        for upper in reversed(self.cells):
            arrows = []
            for lower in reversed(self.cells):
                if lower >= upper:
                    continue
                know = self.attaching.get((upper, lower))
                if know is not None and not know.is_unknown():
                    arrows.append(f"--{know}--> [{lower}]")
            suffix = ("  " + "  ".join(arrows)) if arrows else ""
            lines.append(f"  [{upper}]{suffix}")
        return "\n".join(lines)


def stunted_projective(m, k, prime=2):
    """Cell diagram of CP^m/CP^k: cells 2k+2, ..., 2m with detected attaching.

    Entries are filled by the cohomology-operation detector for every gap the
    operations see; everything else is left Unknown.
    """
    if not 0 <= k < m:
        raise ValueError("need 0 <= k < m")
    cells = list(range(2 * k + 2, 2 * m + 1, 2))
    attaching = {}
    gaps = _DETECTED_GAPS_2 if prime == 2 else (2 * (prime - 1),)
    for upper in cells:
        for lower in cells:
            if upper - lower in gaps:
                attaching[(upper, lower)] = detect_component(
                    lower, upper, prime=prime)
    name = f"CP{m}" if k == 0 else f"CP{m}/CP{k}"
    return CellSpectrum(name, cells, attaching)


def _dual_name(name):
    if name.startswith("D(") and name.endswith(")"):
        return name[2:-1]
    return f"D({name})"


def dualize(X):
    """Negate cell dimensions; each component transports unchanged."""
    cells = sorted(-c for c in X.cells)
    attaching = {}
    for (upper, lower), know in X.attaching.items():
        # Original (a -> b) with a > b becomes (-b -> -a) with -b > -a.
        attaching[(-lower, -upper)] = know
    return CellSpectrum(_dual_name(X.name), cells, attaching)


def subquotient(X, dim_range):
    """Restrict to a contiguous run of cells, keeping their attaching data."""
    chosen = [c for c in X.cells if c in set(dim_range)]
    if not chosen:
        raise ValueError("empty cell selection")
    lo = X.cells.index(chosen[0])
    if list(X.cells[lo:lo + len(chosen)]) != chosen:
        raise ValueError("cell selection must be contiguous")
    keep = set(chosen)
    attaching = {pair: know for pair, know in X.attaching.items()
                 if pair[0] in keep and pair[1] in keep}
    name = f"{X.name}|{chosen[0]}..{chosen[-1]}"
    return CellSpectrum(name, chosen, attaching)


def wedge_split(X):
    """Finest wedge decomposition certified by the diagram alone.

    Cells fall in one block when joined by any component not known to be
    Zero (odd/even parity and Unknown block splitting).  Returns the blocks
    as diagrams, bottom block first.
    """
    parent = {c: c for c in X.cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        parent[find(a)] = find(b)

    for upper in X.cells:
        for lower in X.cells:
            if lower >= upper:
                continue
            know = X.attaching.get((upper, lower),
                                   AttachingKnowledge.unknown())
            if not know.is_zero():
                union(upper, lower)
    blocks = {}
    for c in X.cells:
        blocks.setdefault(find(c), []).append(c)
    out = []
    for cells in sorted(blocks.values()):
        keep = set(cells)
        attaching = {pair: know for pair, know in X.attaching.items()
                     if pair[0] in keep and pair[1] in keep}
        if len(cells) == len(X.cells):
            out.append(X)
        else:
            name = f"{X.name}[{cells[0]}..{cells[-1]}]" \
                if len(cells) > 1 else f"S^{cells[0]}"
            out.append(CellSpectrum(name, cells, attaching))
    return out


def apply_fact(X, fact):
    """Refine one component with a cited attaching-value fact.

    The fact carries the cell pair in complex-projective dimensions
    (upper, lower) and the exact value; it applies equally to the dual
    diagram (where the pair appears as (-lower, -upper)).  A fact that
    contradicts detected parity raises: that means the table is wrong.
    """
    upper, lower = fact.cell_pair
    if upper in X.cells and lower in X.cells:
        pair = (upper, lower)
    elif -lower in X.cells and -upper in X.cells:
        pair = (-lower, -upper)
    else:
        raise ValueError(
            f"fact for cells {upper}->{lower} does not match {X.name}")
    value = fact.knowledge()
    current = X.attaching.get(pair, AttachingKnowledge.unknown())
    return X.with_component(pair[0], pair[1], current.refine(value))


def apply_attaching_facts(X, facts):
    """Apply every fact whose cell pair lies on the diagram; others skip."""
    out = X
    for fact in facts:
        upper, lower = fact.cell_pair
        on = (upper in out.cells and lower in out.cells) or \
             (-lower in out.cells and -upper in out.cells)
        if on:
            out = apply_fact(out, fact)
    return out
