"""Steenrod operations on H*(CP^n) and the attaching knowledge they detect.

On the cohomology of complex projective space, Sq^{2j}(x^k) = C(k,j) x^{k+j}
mod 2 and P^1(x^k) = k x^{k+p-1} mod p.  These coefficients are the only
attaching-map information available at first order: a gap-2 cell pair is
detected exactly (Sq^2 sees the Hopf class on the nose), gap-4 and gap-8
pairs only mod 2, and gap 2(p-1) pairs detect the first odd-primary class
up to a unit.  Exact values beyond that must come from cited literature
facts, never from here.
"""

from __future__ import annotations


class AttachingKnowledge:
    """Partial knowledge of one attaching component between two cells.

    state is one of "exact", "odd", "even", "zero", "unknown"; for all but
    "zero"/"unknown" the class is a named stem generator with a coefficient
    (coefficient applies to "exact" only; odd/even record parity about the
    named class).  Exact(0) normalizes to Zero.
    """

    __slots__ = ("state", "class_name", "coefficient")

    def __init__(self, state, class_name=None, coefficient=1):
        if state not in ("exact", "odd", "even", "zero", "unknown"):
            raise ValueError(f"bad knowledge state {state!r}")
        if state == "exact" and (coefficient == 0 or class_name is None):
            state, class_name, coefficient = "zero", None, 1
        if state in ("zero", "unknown"):
            class_name, coefficient = None, 1
        self.state = state
        self.class_name = class_name
        self.coefficient = coefficient

    @classmethod
    def exact(cls, class_name, coefficient=1):
        return cls("exact", class_name, coefficient)

    @classmethod
    def odd_multiple(cls, class_name):
        return cls("odd", class_name)

    @classmethod
    def even_multiple(cls, class_name):
        return cls("even", class_name)

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def unknown(cls):
        return cls("unknown")

    def is_zero(self):
        return self.state == "zero"

    def is_unknown(self):
        return self.state == "unknown"

    def may_be_nonzero(self):
        return self.state not in ("zero",)

    def refine(self, other):
        """Upgrade with an exact literature fact; inconsistent facts raise.

        Refinement is monotone: exact knowledge never downgrades.
        """
        if self.state == "exact":
            if other.state == "exact" and other.key() == self.key():
                return self
            raise ValueError("cannot refine exact knowledge")
        if other.state != "exact" and other.state != "zero":
            raise ValueError("refinement must supply an exact value")
        if self.state == "odd":
            if other.state == "zero" or other.class_name != self.class_name \
                    or other.coefficient % 2 == 0:
                raise ValueError(
                    f"fact {other} contradicts odd-multiple parity of {self}")
        if self.state == "even":
            if other.state == "exact" and (
                    other.class_name != self.class_name
                    or other.coefficient % 2 == 1):
                raise ValueError(
                    f"fact {other} contradicts even-multiple parity of {self}")
        if self.state == "zero" and other.state == "exact":
            raise ValueError(f"fact {other} contradicts known-zero component")
        return other

    def key(self):
        return (self.state, self.class_name, self.coefficient)

    def __eq__(self, other):
        if not isinstance(other, AttachingKnowledge):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AttachingKnowledge({self})"

    def __str__(self):
        if self.state == "zero":
            return "0"
        if self.state == "unknown":
            return "?"
        coeff = "" if self.coefficient == 1 else f"{self.coefficient}*"
        if self.state == "exact":
            return f"{coeff}{self.class_name}"
        return f"{self.state}*{self.class_name}"

    def serialize(self):
        return str(self)

    @classmethod
    def parse(cls, text):
        if text == "0":
            return cls.zero()
        if text == "?":
            return cls.unknown()
        if text.startswith("odd*"):
            return cls.odd_multiple(text[4:])
        if text.startswith("even*"):
            return cls.even_multiple(text[5:])
        if "*" in text:
            c, name = text.split("*", 1)
            return cls.exact(name, int(c))
        return cls.exact(text, 1)


def sq_coefficient(j, k):
    """C(k, j) mod 2, the coefficient of Sq^{2j} on x^k (Lucas digit rule)."""
    if j < 0 or k < 0:
        raise ValueError("j and k must be non-negative")
    return 1 if (k & j) == j else 0


def _is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def p_power_hits(p, k):
    """Whether P^1(x^k) is nonzero mod p, i.e. p does not divide k."""
    if not _is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if k < 1:
        raise ValueError("k must be at least 1")
    return k % p != 0


# Stem generators detected by each operation gap at the prime 2.
_GAP_CLASS = {2: "h1", 4: "h2", 8: "h3"}


def detect_component(lower_dim, upper_dim, prime=2):
    """Attaching knowledge for the (upper -> lower) cell pair of a stunted
    projective spectrum, from the operation joining their base cells.

    Cell dimensions are the complex-projective ones (positive, even); the
    gap must be one the operations see: 2, 4 or 8 at p=2, 2(p-1) at odd p.
    Gap 2 is exact; gaps 4 and 8 yield parity only.
    """
    gap = upper_dim - lower_dim
    k = lower_dim // 2
    if lower_dim % 2 or upper_dim % 2 or lower_dim <= 0:
        raise ValueError("cells of projective spectra live in even dimensions")
    if prime == 2:
        if gap not in _GAP_CLASS:
            raise ValueError(f"unsupported gap {gap} at the prime 2")
        j = gap // 2
        name = _GAP_CLASS[gap]
        if sq_coefficient(j, k):
            if gap == 2:
                return AttachingKnowledge.exact(name)
            return AttachingKnowledge.odd_multiple(name)
        if gap == 2:
            return AttachingKnowledge.zero()
        return AttachingKnowledge.even_multiple(name)
    if gap != 2 * (prime - 1):
        raise ValueError(f"unsupported gap {gap} at the prime {prime}")
    if p_power_hits(prime, k):
        return AttachingKnowledge.exact("alpha1")
    return AttachingKnowledge.zero()
