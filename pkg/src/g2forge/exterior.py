"""Sparse exterior algebra on a fixed 7-dimensional dual space.

A k-form is a sparse map from strictly increasing index tuples (subsets of
1..7) to scalars.  The dimension is hard-coded: that keeps the monomial
tables dense and the Hodge-complement bookkeeping trivial.

Textual syntax, used by the CLI and the test fixtures:

    form     ::=  signed_term ( ('+' | '-') term )*
    term     ::=  coeff '*' monomial  |  coeff  |  monomial
    monomial ::=  'e' digit+            (digits in 1..7)
    coeff    ::=  integer | decimal | rational 'p/q'

so ``2*e12 + 2*e34 - 4*e56`` is the torsion 2-form of the built-in fixture
and a bare number is a 0-form.
"""

from itertools import combinations

from .errors import DegreeError, ParseError

DIM = 7
TOP = tuple(range(1, DIM + 1))

#: all strictly increasing index tuples, by degree, in lexicographic order
MONOMIALS = {k: tuple(combinations(TOP, k)) for k in range(DIM + 1)}
MONO_POS = {k: {mono: i for i, mono in enumerate(MONOMIALS[k])} for k in MONOMIALS}


def merge_indices(left, right):
    """Concatenate two sorted disjoint tuples; returns (sorted tuple, sign).

    The sign is the parity of the shuffle sorting ``left + right``; None if
    the tuples overlap (the wedge of the monomials vanishes).
    """
    if set(left) & set(right):
        return None, 0
    inversions = 0
    for r in right:
        for l in left:
            if l > r:
                inversions += 1
    merged = tuple(sorted(left + right))
    return merged, (-1 if inversions % 2 else 1)


#: complement tables: COMPLEMENT[I] = (Ic, sign) with e^I ^ e^Ic = sign * e^TOP
COMPLEMENT = {}
for _k in range(DIM + 1):
    for _mono in MONOMIALS[_k]:
        _comp = tuple(i for i in TOP if i not in _mono)
        COMPLEMENT[_mono] = (_comp, merge_indices(_mono, _comp)[1])


def canonicalize(indices):
    """Sort an index tuple, returning (canonical tuple, sign); sign 0 if repeated."""
    idx = list(indices)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


class KForm:
    """Immutable sparse alternating k-form over the active scalar backend."""

    __slots__ = ("degree", "terms", "field")

    def __init__(self, degree, terms, field, _canonical=False):
        if not 0 <= degree <= DIM:
            raise DegreeError(f"degree {degree} outside 0..{DIM}")
        if _canonical:
            object.__setattr__(self, "terms", terms)
        else:
            clean = {}
            for raw, coeff in terms.items():
                idx = tuple(raw)
                if len(idx) != degree:
                    raise DegreeError(f"index {idx} has length {len(idx)}, expected {degree}")
                if any(not 1 <= i <= DIM for i in idx):
                    raise ValueError(f"index {idx} outside 1..{DIM}")
                mono, sign = canonicalize(idx)
                if sign == 0:
                    continue
                c = field.of(coeff) if sign > 0 else -field.of(coeff)
                if mono in clean:
                    c = clean[mono] + c
                if c == 0:
                    clean.pop(mono, None)
                else:
                    clean[mono] = c
            object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, degree, field):
        return cls(degree, {}, field, _canonical=True)

    @classmethod
    def monomial(cls, indices, field, coeff=1):
        return cls(len(indices), {tuple(indices): coeff}, field)

    @classmethod
    def constant(cls, value, field):
        return cls(0, {(): value}, field)

    # -- ring structure ------------------------------------------------------

    def _require_same(self, other):
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
        if self.field is not other.field:
            raise ValueError("mixed scalar backends")

    def __add__(self, other):
        self._require_same(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono)
            s = c if s is None else s + c
            if s == 0:
                terms.pop(mono, None)
            else:
                terms[mono] = s
        return KForm(self.degree, terms, self.field, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KForm(
            self.degree, {m: -c for m, c in self.terms.items()}, self.field, _canonical=True
        )

    def scale(self, scalar):
        s = self.field.of(scalar)
        if s == 0:
            return KForm.zero(self.degree, self.field)
        return KForm(
            self.degree, {m: c * s for m, c in self.terms.items()}, self.field, _canonical=True
        )

    def __mul__(self, scalar):
        return self.scale(scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self.scale(self.field.one() / self.field.of(scalar))

    def coeff(self, indices):
        """Coefficient of a (not necessarily sorted) monomial."""
        mono, sign = canonicalize(tuple(indices))
        if sign == 0:
            return self.field.zero()
        c = self.terms.get(mono)
        if c is None:
            return self.field.zero()
        return c if sign > 0 else -c

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        if self.degree != other.degree:
            return False
        monos = set(self.terms) | set(other.terms)
        zero = self.field.zero()
        return all(
            self.field.eq(self.terms.get(m, zero), other.terms.get(m, zero)) for m in monos
        )

    def __hash__(self):
        raise TypeError("KForm is not hashable (float equality is tolerance-based)")

    def max_abs(self):
        """Largest coefficient magnitude, as a float."""
        return max((abs(self.field.to_float(c)) for c in self.terms.values()), default=0.0)

    def evaluate(self, *vectors):
        """Multilinear evaluation on `degree` vectors: e^I(v_1..v_k) = det(v_q[i_p])."""
        from . import linalg

        if len(vectors) != self.degree:
            raise DegreeError(f"need {self.degree} vectors, got {len(vectors)}")
        total = self.field.zero()
        for mono, c in self.terms.items():
            m = [[v.components[i - 1] for v in vectors] for i in mono]
            total = total + c * linalg.det(m, self.field)
        return total

    def to_vector(self):
        """Dense coefficient list over MONOMIALS[degree] in lexicographic order."""
        zero = self.field.zero()
        return [self.terms.get(m, zero) for m in MONOMIALS[self.degree]]

    @classmethod
    def from_vector(cls, degree, coeffs, field):
        terms = {}
        for mono, c in zip(MONOMIALS[degree], coeffs):
            c = field.of(c)
            if c != 0:
                terms[mono] = c
        return cls(degree, terms, field, _canonical=True)

    def __repr__(self):
        return f"KForm({format_form(self)!r})"


class Vector:
    """A left-invariant vector field: 7 components in the frame e1..e7."""

    __slots__ = ("components", "field")

    def __init__(self, components, field):
        comps = tuple(field.of(c) for c in components)
        if len(comps) != DIM:
            raise ValueError(f"expected {DIM} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def basis(cls, i, field):
        return cls([field.one() if j == i else field.zero() for j in range(1, DIM + 1)], field)

    @classmethod
    def zero(cls, field):
        return cls([field.zero()] * DIM, field)

    def __add__(self, other):
        return Vector([a + b for a, b in zip(self.components, other.components)], self.field)

    def __neg__(self):
        return Vector([-a for a in self.components], self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        s = self.field.of(scalar)
        return Vector([a * s for a in self.components], self.field)

    __mul__ = scale
    __rmul__ = scale

    def __getitem__(self, i):
        """1-based component access, matching the frame labels."""
        return self.components[i - 1]

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return all(self.field.eq(a, b) for a, b in zip(self.components, other.components))

    def __repr__(self):
        parts = [
            f"{self.field.fmt(c)}*e{i}"
            for i, c in enumerate(self.components, start=1)
            if c != 0
        ]
        return "Vector(" + (" + ".join(parts) if parts else "0") + ")"


def wedge(a, b):
    """Wedge product; raises DegreeError when the degrees sum past 7."""
    if a.field is not b.field:
        raise ValueError("mixed scalar backends")
    deg = a.degree + b.degree
    if deg > DIM:
        raise DegreeError(f"wedge degree {a.degree}+{b.degree} exceeds {DIM}")
    terms = {}
    for i_a, c_a in a.terms.items():
        for i_b, c_b in b.terms.items():
            mono, sign = merge_indices(i_a, i_b)
            if sign == 0:
                continue
            c = c_a * c_b if sign > 0 else -(c_a * c_b)
            s = terms.get(mono)
            s = c if s is None else s + c
            if s == 0:
                terms.pop(mono, None)
            else:
                terms[mono] = s
    return KForm(deg, terms, a.field, _canonical=True)


def wedge_top_coeff(a, b):
    """Coefficient of e^{1..7} in a ^ b, for complementary-degree inputs.

    Cheaper than `wedge` when only the top coefficient is wanted (used by the
    metric construction, which calls this thousands of times along a flow).
    """
    if a.degree + b.degree != DIM:
        raise DegreeError("degrees must sum to 7")
    total = a.field.zero()
    for i_a, c_a in a.terms.items():
        comp, sign = COMPLEMENT[i_a]
        c_b = b.terms.get(comp)
        if c_b is not None:
            total = total + (c_a * c_b if sign > 0 else -(c_a * c_b))
    return total


def interior(x, a):
    """Interior product (contraction) of a vector with a k-form, k >= 1."""
    if a.degree == 0:
        raise DegreeError("interior product needs degree >= 1")
    terms = {}
    for mono, c in a.terms.items():
        for p, idx in enumerate(mono):
            comp = x.components[idx - 1]
            if comp == 0:
                continue
            rest = mono[:p] + mono[p + 1 :]
            v = c * comp if p % 2 == 0 else -(c * comp)
            s = terms.get(rest)
            s = v if s is None else s + v
            if s == 0:
                terms.pop(rest, None)
            else:
                terms[rest] = s
    return KForm(a.degree - 1, terms, a.field, _canonical=True)


def inner_product(a, b, metric):
    """Metric pairing of two same-degree forms; delegates to the metric object.

    On monomials this is the Gram identity <e^I, e^J> = det(g^{i_p j_q}).
    """
    if a.degree != b.degree:
        raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")
    return metric.inner(a, b)


# -- parsing and printing ----------------------------------------------------


def _scan_number(text, pos):
    """Scan an unsigned integer/decimal/rational starting at pos."""
    start = pos
    n = len(text)
    while pos < n and text[pos].isdigit():
        pos += 1
    if pos < n and text[pos] == ".":
        pos += 1
        while pos < n and text[pos].isdigit():
            pos += 1
    elif pos < n and text[pos] == "/":
        pos += 1
        dstart = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == dstart:
            raise ParseError("missing denominator", text, pos)
    if pos == start:
        raise ParseError("expected a number", text, pos)
    return text[start:pos], pos


def parse_form(text, field, degree=None):
    """Parse the textual form syntax; see the module docstring for the grammar."""
    src = text
    text = "".join(text.split())
    if not text:
        raise ParseError("empty form", src, 0)
    pos = 0
    n = len(text)
    terms = []  # (indices tuple or None for 0-form, coeff string, sign)
    while pos < n:
        sign = 1
        if text[pos] in "+-":
            if text[pos] == "-":
                sign = -1
            pos += 1
            if pos >= n:
                raise ParseError("dangling sign", src, pos)
        coeff = "1"
        if text[pos].isdigit() or text[pos] == ".":
            coeff, pos = _scan_number(text, pos)
            if pos < n and text[pos] == "*":
                pos += 1
                if pos >= n or text[pos] != "e":
                    raise ParseError("expected monomial after '*'", src, pos)
        if pos < n and text[pos] == "e":
            pos += 1
            istart = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if pos == istart:
                raise ParseError("expected indices after 'e'", src, pos)
            indices = tuple(int(d) for d in text[istart:pos])
            if any(not 1 <= i <= DIM for i in indices):
                raise ParseError(f"index outside 1..{DIM}", src, istart)
            terms.append((indices, coeff, sign))
        else:
            terms.append(((), coeff, sign))
        if pos < n and text[pos] not in "+-":
            raise ParseError(f"unexpected character {text[pos]!r}", src, pos)
    degrees = {len(ix) for ix, _, _ in terms}
    if len(degrees) > 1:
        raise ParseError(f"mixed degrees {sorted(degrees)}", src, 0)
    deg = degrees.pop()
    if degree is not None and deg != degree and any(c != "0" for _, c, _ in terms):
        raise ParseError(f"expected degree {degree}, found {deg}", src, 0)
    out = KForm.zero(degree if degree is not None else deg, field)
    for indices, coeff, sign in terms:
        c = field.of(coeff)
        if sign < 0:
            c = -c
        if c == 0:
            continue
        if len(indices) != out.degree:
            raise ParseError(f"expected degree {out.degree}, found {len(indices)}", src, 0)
        out = out + KForm(out.degree, {indices: c}, out.field)
    return out


def format_form(form):
    """Render a form in the same syntax `parse_form` accepts."""
    field = form.field
    if not form.terms:
        return "0"
    parts = []
    for mono in MONOMIALS[form.degree]:
        c = form.terms.get(mono)
        if c is None:
            continue
        mono_txt = "e" + "".join(str(i) for i in mono) if mono else ""
        mag = field.fmt(c if (field.to_float(c) >= 0) else -c)
        if mono_txt and mag == "1":
            body = mono_txt
        elif mono_txt:
            body = f"{mag}*{mono_txt}"
        else:
            body = mag
        sign = "-" if field.to_float(c) < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
