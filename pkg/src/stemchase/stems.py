"""File-backed knowledge base of stable stems, products, brackets and facts.

The table is data, not code: every group, product, Toda bracket and imported
literature fact carries its own citation string, and lookups that no record
covers return Unknown (None) rather than guessing zero.  Verdicts downstream
degrade, they never invent.

Record grammar (UTF-8, line oriented, '#' comments):

    group <dim> <locality> <orders> <names> "<source>"
    product <classA> <classB> <result|0> "<source>"
    bracket <class;class;class[;class]> <result|0> <indet> "<source>"
    fact <kind> <class|0> <context> "<source>"

localities are Z, 2, 3 or p:N; orders and names are comma lists ('-' when
empty); classes are written  name  or  coeff*name, and fact subjects may be
sums joined by '+'.  Loading the shipped file and serializing reproduces it
byte for byte modulo comments and blank lines.
"""

from __future__ import annotations

import re
from importlib import resources

from .abgroup import AbGroup

FACT_KINDS = ("maps_nonzero", "maps_zero", "attaching_value")

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9^_]*$")


class StemTableError(Exception):
    """Parse or validation failure; message carries line numbers."""


class NamedClass:
    """A stem class written against the table: coefficient times a generator."""

    __slots__ = ("coefficient", "name")

    def __init__(self, name, coefficient=1):
        if not _NAME_RE.match(name):
            raise StemTableError(f"bad class name {name!r}")
        self.name = name
        self.coefficient = int(coefficient)

    @classmethod
    def parse(cls, text):
        if "*" in text:
            c, name = text.split("*", 1)
            try:
                coeff = int(c)
            except ValueError:
                raise StemTableError(f"bad coefficient in {text!r}") from None
            return cls(name, coeff)
        return cls(text)

    def serialize(self):
        if self.coefficient == 1:
            return self.name
        return f"{self.coefficient}*{self.name}"

    def key(self):
        return (self.coefficient, self.name)

    def __eq__(self, other):
        return isinstance(other, NamedClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NamedClass({self.serialize()!r})"


def parse_expr(text):
    """Sum of coefficiented classes, as used in fact subjects."""
    if text == "0":
        return []
    return [NamedClass.parse(part) for part in text.split("+")]


def serialize_expr(terms):
    if not terms:
        return "0"
    return "+".join(t.serialize() for t in terms)


class StemGroup:
    __slots__ = ("dim", "locality", "group", "source")

    def __init__(self, dim, locality, group, source):
        self.dim = dim
        self.locality = locality
        self.group = group
        self.source = source

    def render(self):
        return str(self.group)


class ProductFact:
    __slots__ = ("left", "right", "result", "source", "line")

    def __init__(self, left, right, result, source, line=0):
        self.left = left          # NamedClass
        self.right = right        # NamedClass
        self.result = result      # NamedClass or None for zero
        self.source = source
        self.line = line


class BracketFact:
    __slots__ = ("inputs", "value", "indeterminacy", "source", "line")

    def __init__(self, inputs, value, indeterminacy, source, line=0):
        self.inputs = tuple(inputs)   # 3 or 4 NamedClass
        self.value = value            # NamedClass or None for zero
        self.indeterminacy = indeterminacy  # "0" or a subgroup spec string
        self.source = source
        self.line = line


class ExternalFact:
    __slots__ = ("kind", "subject", "context", "source", "line")

    def __init__(self, kind, subject, context, source, line=0):
        self.kind = kind
        self.subject = subject        # list of NamedClass (sum), [] for 0
        self.context = context
        self.source = source
        self.line = line

    @property
    def cell_pair(self):
        """(upper, lower) complex-projective cell pair of an attaching fact."""
        m = re.match(r"^CP:(\d+)->(\d+)$", self.context)
        if not m:
            raise StemTableError(
                f"attaching fact context {self.context!r} is not CP:a->b")
        return int(m.group(1)), int(m.group(2))

    def knowledge(self):
        from .steenrod import AttachingKnowledge
        if not self.subject:
            return AttachingKnowledge.zero()
        if len(self.subject) != 1:
            raise StemTableError("attaching values are single classes")
        term = self.subject[0]
        return AttachingKnowledge.exact(term.name, term.coefficient)


def _split_record(line):
    """Tokenize one record line; the quoted source is the final field."""
    m = re.match(r'^(.*?)\s+"([^"]*)"\s*$', line)
    if not m:
        raise StemTableError("missing quoted source field")
    return m.group(1).split(), m.group(2)


def _comma_list(tok):
    return [] if tok == "-" else tok.split(",")


_LOCALITY_RE = re.compile(r"^(Z|2|3|p:\d+)$")


class StemTable:
    """Validated, immutable-after-load stems knowledge base."""

    def __init__(self):
        self._groups = {}        # (dim, locality) -> StemGroup
        self._name_index = {}    # (locality, name) -> (dim, factor index)
        self._products = {}      # (nameA, nameB) -> ProductFact
        self._brackets = {}      # tuple of term keys -> BracketFact
        self.externals = []
        self._records = []       # serialization order

    # -- construction -------------------------------------------------------

    @classmethod
    def loads(cls, text, origin="<string>"):
        table = cls()
        errors = []
        saw_record = False
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            saw_record = True
            try:
                table._parse_record(line, lineno)
            except StemTableError as exc:
                errors.append(f"{origin}:{lineno}: {exc}")
        if not saw_record:
            raise StemTableError(f"{origin}: empty table")
        errors.extend(f"{origin}: {msg}" for msg in table._validate())
        if errors:
            raise StemTableError("\n".join(errors))
        return table

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read(), origin=str(path))

    @classmethod
    def shipped(cls):
        text = resources.files("stemchase.data").joinpath(
            "stems2.tbl").read_text(encoding="utf-8")
        return cls.loads(text, origin="stems2.tbl")

    def _parse_record(self, line, lineno):
        fields, source = _split_record(line)
        if not source.strip():
            raise StemTableError("empty source string")
        kind = fields[0]
        if kind == "group":
            if len(fields) != 5:
                raise StemTableError("group record needs 4 fields + source")
            dim = int(fields[1])
            locality = fields[2]
            if not _LOCALITY_RE.match(locality):
                raise StemTableError(f"bad locality {locality!r}")
            orders = [int(x) for x in _comma_list(fields[3])]
            names = _comma_list(fields[4])
            if names and len(names) != len(orders):
                raise StemTableError("orders and names differ in length")
            group = AbGroup(orders, names=names or None)
            if (dim, locality) in self._groups:
                raise StemTableError(f"duplicate group entry ({dim}, {locality})")
            entry = StemGroup(dim, locality, group, source)
            self._groups[(dim, locality)] = entry
            for i, name in enumerate(group.names or ()):
                key = (locality, name)
                if key in self._name_index:
                    raise StemTableError(f"duplicate generator name {name!r}")
                self._name_index[key] = (dim, i)
            self._records.append(("group", lineno, entry))
        elif kind == "product":
            if len(fields) != 4:
                raise StemTableError("product record needs 3 fields + source")
            left = NamedClass.parse(fields[1])
            right = NamedClass.parse(fields[2])
            result = None if fields[3] == "0" else NamedClass.parse(fields[3])
            fact = ProductFact(left, right, result, source, lineno)
            key = (left.serialize(), right.serialize())
            if key in self._products:
                raise StemTableError(f"duplicate product fact {key}")
            self._products[key] = fact
            self._records.append(("product", lineno, fact))
        elif kind == "bracket":
            if len(fields) != 4:
                raise StemTableError("bracket record needs 3 fields + source")
            inputs = [NamedClass.parse(t) for t in fields[1].split(";")]
            if len(inputs) not in (3, 4):
                raise StemTableError("brackets take 3 or 4 inputs")
            value = None if fields[2] == "0" else NamedClass.parse(fields[2])
            fact = BracketFact(inputs, value, fields[3], source, lineno)
            key = tuple(t.serialize() for t in inputs)
            if key in self._brackets:
                raise StemTableError(f"duplicate bracket fact {key}")
            self._brackets[key] = fact
            self._records.append(("bracket", lineno, fact))
        elif kind == "fact":
            if len(fields) != 4:
                raise StemTableError("fact record needs 3 fields + source")
            fkind = fields[1]
            if fkind not in FACT_KINDS:
                raise StemTableError(f"unknown fact kind {fkind!r}")
            subject = parse_expr(fields[2])
            fact = ExternalFact(fkind, subject, fields[3], source, lineno)
            self.externals.append(fact)
            self._records.append(("fact", lineno, fact))
        else:
            raise StemTableError(f"unknown record kind {kind!r}")

    # -- validation ---------------------------------------------------------

    def _resolved_dim(self, term, locality="2"):
        key = (locality, term.name)
        if key not in self._name_index:
            raise StemTableError(
                f"class {term.name!r} does not resolve ({locality}-local)")
        return self._name_index[key][0]

    def _validate(self):
        errors = []

        def check(line, fn):
            try:
                fn()
            except StemTableError as exc:
                errors.append(f"line {line}: {exc}")

        for kind, lineno, rec in self._records:
            if kind == "product":
                def chk(rec=rec):
                    ld = self._resolved_dim(rec.left)
                    rd = self._resolved_dim(rec.right)
                    if rec.result is not None:
                        vd = self._resolved_dim(rec.result)
                        if ld + rd != vd:
                            raise StemTableError(
                                f"dimension mismatch: {ld}+{rd} != {vd}")
                check(lineno, chk)
            elif kind == "bracket":
                def chk(rec=rec):
                    dims = [self._resolved_dim(t) for t in rec.inputs]
                    if rec.value is not None:
                        vd = self._resolved_dim(rec.value)
                        want = sum(dims) + len(dims) - 2
                        if vd != want:
                            raise StemTableError(
                                f"dimension mismatch: bracket lands in "
                                f"{want}, value lives in {vd}")
                check(lineno, chk)
            elif kind == "fact":
                def chk(rec=rec):
                    if rec.kind == "attaching_value":
                        upper, lower = rec.cell_pair
                        if rec.subject:
                            vd = self._resolved_dim(rec.subject[0])
                            if vd != upper - lower - 1:
                                raise StemTableError(
                                    f"attaching value lives in stem {vd}, "
                                    f"cells demand {upper - lower - 1}")
                    else:
                        dims = {self._resolved_dim(t) for t in rec.subject}
                        if len(dims) > 1:
                            raise StemTableError(
                                "sum mixes classes of different dimensions")
                check(lineno, chk)

        # Graded commutativity on recorded symmetric pairs.
        for (a, b), fact in sorted(self._products.items()):
            if a == b:
                continue
            rev = self._products.get((b, a))
            if rev is None:
                continue
            try:
                va = self.resolve_product_value(fact)
                vb = self.resolve_product_value(rev)
            except StemTableError:
                continue
            da = self._resolved_dim(fact.left)
            db = self._resolved_dim(fact.right)
            expect = vb if (da * db) % 2 == 0 else -vb
            if va != expect:
                errors.append(
                    f"line {fact.line}: products ({a},{b}) and ({b},{a}) "
                    f"violate graded commutativity")

        entry18 = self._groups.get((18, "2"))
        if entry18 is not None and entry18.group.factors != (2, 8):
            errors.append("2-local dim-18 entry must have orders (2, 8)")
        return errors

    # -- queries ------------------------------------------------------------

    def group_entries(self):
        return [rec for kind, _, rec in self._records if kind == "group"]

    def has_group(self, dim, locality="2"):
        return (dim, locality) in self._groups

    def group(self, dim, locality="2"):
        entry = self._groups.get((dim, locality))
        if entry is None:
            raise StemTableError(
                f"no stem entry for dimension {dim} ({locality}-local)")
        return entry

    def localities_at(self, dim):
        return sorted(loc for (d, loc) in self._groups if d == dim)

    def resolve(self, term, locality="2"):
        """NamedClass -> (dim, GroupElement)."""
        dim, idx = self._name_index.get((locality, term.name), (None, None))
        if dim is None:
            raise StemTableError(f"class {term.name!r} does not resolve")
        group = self._groups[(dim, locality)].group
        coeffs = [0] * group.rank
        coeffs[idx] = term.coefficient
        return dim, group.element(coeffs)

    def resolve_expr(self, terms, locality="2"):
        if not terms:
            raise StemTableError("cannot resolve the empty expression")
        dim, total = self.resolve(terms[0], locality)
        for term in terms[1:]:
            d, elem = self.resolve(term, locality)
            if d != dim:
                raise StemTableError("sum mixes dimensions")
            total = total + elem
        return dim, total

    def resolve_product_value(self, fact, locality="2"):
        if fact.result is None:
            ld = self._resolved_dim(fact.left, locality)
            rd = self._resolved_dim(fact.right, locality)
            target = self._groups.get((ld + rd, locality))
            return target.group.zero() if target else None
        return self.resolve(fact.result, locality)[1]

    def product(self, a, b, locality="2"):
        """Recorded product of coefficiented classes, bilinearly extended.

        Returns a GroupElement, or None when no fact covers the generator
        pair (Unknown -- never a guess).
        """
        self.resolve(a, locality)
        self.resolve(b, locality)
        fact = self._products.get((a.name, b.name))
        if fact is None:
            fact = self._products.get((b.name, a.name))
        if fact is None:
            return None
        value = self.resolve_product_value(fact, locality)
        if value is None:
            return None
        return (a.coefficient * b.coefficient) * value

    def product_fact(self, name_a, name_b):
        return self._products.get((name_a, name_b)) \
            or self._products.get((name_b, name_a))

    def bracket(self, terms, locality="2"):
        """Recorded bracket fact for the exact input list, else None.

        Consulting a fact validates its defining condition: consecutive
        composites must vanish according to recorded products.
        """
        key = tuple(t.serialize() for t in terms)
        fact = self._brackets.get(key) or self._brackets.get(key[::-1])
        if fact is None:
            return None
        for left, right in zip(fact.inputs, fact.inputs[1:]):
            value = self.product(left, right, locality)
            if value is None or not value.is_zero():
                raise StemTableError(
                    f"bracket {key} consulted but composite "
                    f"{left.serialize()} o {right.serialize()} is not "
                    f"recorded as zero")
        return fact

    def attaching_facts(self):
        return [f for f in self.externals if f.kind == "attaching_value"]

    def survival_facts(self, context):
        want = re.sub(r"[^A-Za-z0-9]", "", context)
        out = []
        for f in self.externals:
            if f.kind != "maps_nonzero":
                continue
            if re.sub(r"[^A-Za-z0-9]", "", f.context) == want:
                out.append(f)
        return out

    # -- serialization ------------------------------------------------------

    def serialize(self):
        lines = []
        for kind, _, rec in self._records:
            if kind == "group":
                g = rec.group
                orders = ",".join(str(d) for d in g.factors) or "-"
                names = ",".join(g.names) if g.names else "-"
                lines.append(f'group {rec.dim} {rec.locality} {orders} '
                             f'{names} "{rec.source}"')
            elif kind == "product":
                res = rec.result.serialize() if rec.result else "0"
                lines.append(f'product {rec.left.serialize()} '
                             f'{rec.right.serialize()} {res} "{rec.source}"')
            elif kind == "bracket":
                ins = ";".join(t.serialize() for t in rec.inputs)
                val = rec.value.serialize() if rec.value else "0"
                lines.append(f'bracket {ins} {val} {rec.indeterminacy} '
                             f'"{rec.source}"')
            elif kind == "fact":
                subj = serialize_expr(rec.subject)
                lines.append(f'fact {rec.kind} {subj} {rec.context} '
                             f'"{rec.source}"')
        return "\n".join(lines) + "\n"
