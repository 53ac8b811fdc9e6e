"""Lie algebra data model, Salamon-notation parser, Chevalley-Eilenberg differential.

Sign convention, fixed once for the whole package:

    de^k(e_i, e_j) = -e^k([e_i, e_j])

so a bracket [e_3, e_7] = e_3 yields de^3 = -e^37.  The notation string
``(0,0,0,12,13)`` lists de^k per generator; entries are 0, bare index pairs,
or signed combinations with optional integer/rational coefficients, e.g.
``2*14+57``.  Bare-pair Salamon notation cannot express coefficients, hence
the extension.
"""

from . import linalg
from .errors import DegreeError, NotALieAlgebra, ParseError
from .exterior import DIM, KForm, Vector, merge_indices


class LieAlgebra:
    """Structure constants c^k_{ij} of a Lie algebra of dimension <= 7.

    Stored sparsely for i < j only; antisymmetry in (i, j) is structural.
    The Jacobi identity is validated at construction unless check=False
    (tests that exercise the validator construct raw tensors that way).
    """

    __slots__ = ("dim", "field", "c", "_de")

    def __init__(self, dim, brackets, field, check=True):
        if not 1 <= dim <= DIM:
            raise ValueError(f"dimension {dim} outside 1..{DIM}")
        c = {}
        for (i, j), comps in brackets.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ValueError(f"bracket pair ({i},{j}) outside 1..{dim}")
            if i == j:
                raise ValueError(f"diagonal bracket pair ({i},{j})")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            entry = c.setdefault((i, j), {})
            for k, v in comps.items():
                if not 1 <= k <= dim:
                    raise ValueError(f"bracket target {k} outside 1..{dim}")
                v = field.of(v) if sign > 0 else -field.of(v)
                v = entry.get(k, field.zero()) + v
                if v == 0:
                    entry.pop(k, None)
                else:
                    entry[k] = v
            if not entry:
                del c[(i, j)]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "_de", None)
        if check:
            failures = self.jacobi_failures()
            if failures:
                raise NotALieAlgebra(failures)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    # -- brackets ------------------------------------------------------------

    def bracket_basis(self, i, j):
        """[e_i, e_j] as a sparse dict {k: c^k_{ij}}."""
        if i == j:
            return {}
        if i < j:
            return dict(self.c.get((i, j), {}))
        return {k: -v for k, v in self.c.get((j, i), {}).items()}

    def bracket(self, x, y):
        """Bracket of two vectors, extended bilinearly."""
        field = self.field
        out = [field.zero()] * DIM
        for i in range(1, self.dim + 1):
            xi = x.components[i - 1]
            if xi == 0:
                continue
            for j in range(1, self.dim + 1):
                yj = y.components[j - 1]
                if yj == 0:
                    continue
                for k, v in self.bracket_basis(i, j).items():
                    out[k - 1] = out[k - 1] + xi * yj * v
        return Vector(out, field)

    def ad_matrix(self, i):
        """Matrix of ad_{e_i} acting on columns: ad[k][j] = c^k_{ij}."""
        field = self.field
        m = linalg.zeros(self.dim, self.dim, field)
        for j in range(1, self.dim + 1):
            for k, v in self.bracket_basis(i, j).items():
                m[k - 1][j - 1] = v
        return m

    def jacobi_failures(self):
        """Basis triples (i, j, k) where the Jacobi cyclic sum is nonzero."""
        failures = []
        field = self.field
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                for k in range(j + 1, self.dim + 1):
                    acc = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, v in self.bracket_basis(a, b).items():
                            for l, w in self.bracket_basis(m, c).items():
                                acc[l] = acc.get(l, field.zero()) + v * w
                    if any(not field.is_zero(v) for v in acc.values()):
                        failures.append((i, j, k))
        return failures

    # -- the CE differential on generators ------------------------------------

    def de(self, k):
        """de^k as a 2-form, from de^k(e_i,e_j) = -c^k_{ij}."""
        if self._de is None:
            table = []
            for kk in range(1, self.dim + 1):
                terms = {}
                for (i, j), comps in self.c.items():
                    v = comps.get(kk)
                    if v is not None:
                        terms[(i, j)] = -v
                table.append(KForm(2, terms, self.field, _canonical=True))
            object.__setattr__(self, "_de", tuple(table))
        return self._de[k - 1]

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, {format_salamon(self)!r})"


class StructureEquationSet:
    """The exterior derivatives de^1..de^n of the dual generators."""

    __slots__ = ("dim", "field", "des")

    def __init__(self, des, field):
        des = tuple(des)
        for d in des:
            if d.degree != 2:
                raise DegreeError("structure equations must be 2-forms")
        object.__setattr__(self, "dim", len(des))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "des", des)

    def __setattr__(self, name, value):
        raise AttributeError("StructureEquationSet is immutable")

    def __iter__(self):
        return iter(self.des)

    def __getitem__(self, k):
        """1-based: S[k] is de^k."""
        return self.des[k - 1]


def differential_from_brackets(algebra):
    return StructureEquationSet(
        [algebra.de(k) for k in range(1, algebra.dim + 1)], algebra.field
    )


def brackets_from_differential(eqs, check=True):
    """Invert de^k(e_i,e_j) = -c^k_{ij}; round-trips with the above."""
    brackets = {}
    for k in range(1, eqs.dim + 1):
        for (i, j), v in eqs[k].terms.items():
            if i > eqs.dim or j > eqs.dim:
                raise ValueError(f"structure equation de^{k} uses index outside 1..{eqs.dim}")
            brackets.setdefault((i, j), {})[k] = -v
    return LieAlgebra(eqs.dim, brackets, eqs.field, check=check)


def ce_differential(algebra, form):
    """Chevalley-Eilenberg exterior derivative of a k-form, k <= 6.

    Graded Leibniz expansion: d(e^I) = sum_p (-1)^(p-1) de^{i_p} ^ e^{I \\ i_p}.
    """
    if form.degree >= DIM:
        raise DegreeError("cannot differentiate a 7-form")
    field = form.field
    terms = {}
    for mono, coeff in form.terms.items():
        for p, idx in enumerate(mono):
            de = algebra.de(idx) if idx <= algebra.dim else None
            if de is None or not de.terms:
                continue
            rest = mono[:p] + mono[p + 1 :]
            outer_sign = 1 if p % 2 == 0 else -1
            for pair, dcoeff in de.terms.items():
                merged, sign = merge_indices(pair, rest)
                if sign == 0:
                    continue
                v = coeff * dcoeff
                if outer_sign * sign < 0:
                    v = -v
                s = terms.get(merged)
                s = v if s is None else s + v
                if s == 0:
                    terms.pop(merged, None)
                else:
                    terms[merged] = s
    return KForm(form.degree + 1, terms, field, _canonical=True)


# -- Salamon-extended notation ------------------------------------------------


def _split_entries(text):
    """Split '(a,b,c)' into entries with their source positions."""
    stripped = text.strip()
    if not stripped.startswith("(") or not stripped.endswith(")"):
        raise ParseError("expected parenthesized list", text, 0)
    inner = stripped[1:-1]
    offset = text.index("(") + 1
    entries = []
    start = 0
    for i, ch in enumerate(inner + ","):
        if ch == ",":
            entries.append((inner[start:i].strip(), offset + start))
            start = i + 1
    return entries


def _parse_entry(entry, pos, dim, field, text):
    """One de^k entry: '0' or signed sum of [coeff*]ij terms."""
    entry = "".join(entry.split())
    if entry == "0":
        return KForm.zero(2, field)
    terms = {}
    i = 0
    n = len(entry)
    while i < n:
        sign = 1
        if entry[i] in "+-":
            if entry[i] == "-":
                sign = -1
            i += 1
        start = i
        while i < n and (entry[i].isdigit() or entry[i] in "./"):
            i += 1
        if i < n and entry[i] == "*":
            coeff = entry[start:i]
            if not coeff:
                raise ParseError("empty coefficient", text, pos + start)
            i += 1
            pstart = i
            while i < n and entry[i].isdigit():
                i += 1
            pair = entry[pstart:i]
        else:
            pair = entry[start:i]
            coeff = "1"
        if len(pair) != 2:
            raise ParseError(f"expected a 2-digit index pair, got {pair!r}", text, pos + start)
        a, b = int(pair[0]), int(pair[1])
        if not (1 <= a <= dim and 1 <= b <= dim) or a == b:
            raise ParseError(f"bad index pair {pair!r} for dimension {dim}", text, pos + start)
        c = field.of(coeff)
        if sign < 0:
            c = -c
        key = (a, b) if a < b else (b, a)
        if a > b:
            c = -c
        terms[key] = terms.get(key, field.zero()) + c
    return KForm(2, terms, field)


def parse_salamon(text, field, check=True):
    """Parse the extended Salamon string into a validated LieAlgebra."""
    entries = _split_entries(text)
    dim = len(entries)
    if not 1 <= dim <= DIM:
        raise ParseError(f"dimension {dim} outside 1..{DIM}", text, 0)
    des = [_parse_entry(entry, pos, dim, field, text) for entry, pos in entries]
    return brackets_from_differential(StructureEquationSet(des, field), check=check)


def format_salamon(algebra):
    """Render the structure equations back into the notation parse_salamon reads."""
    field = algebra.field
    entries = []
    for k in range(1, algebra.dim + 1):
        de = algebra.de(k)
        if not de.terms:
            entries.append("0")
            continue
        parts = []
        for (i, j) in sorted(de.terms):
            c = de.terms[(i, j)]
            neg = field.to_float(c) < 0
            mag = field.fmt(-c if neg else c)
            body = f"{i}{j}" if mag == "1" else f"{mag}*{i}{j}"
            parts.append(("-" if neg else "+") + body)
        first = parts[0][1:] if parts[0][0] == "+" else parts[0]
        entries.append(first + "".join(parts[1:]))
    return "(" + ",".join(entries) + ")"


# -- .lie files ----------------------------------------------------------------


def load_lie(path, field):
    """Read a .lie file: line 1 dimension, line 2 Salamon-extended string."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 2:
        raise ParseError("expected dimension line and notation line", str(path), 0)
    try:
        dim = int(lines[0])
    except ValueError:
        raise ParseError(f"bad dimension line {lines[0]!r}", str(path), 0) from None
    algebra = parse_salamon(lines[1], field)
    if algebra.dim != dim:
        raise ParseError(
            f"dimension line says {dim} but notation has {algebra.dim} entries", str(path), 0
        )
    return algebra


def save_lie(algebra, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{algebra.dim}\n{format_salamon(algebra)}\n")


# -- classification -------------------------------------------------------------


class AlgebraReport:
    """Unimodularity, solvability and nilpotency data for a Lie algebra."""

    __slots__ = (
        "dim",
        "unimodular",
        "trace_vector",
        "solvable",
        "derived_length",
        "nilpotent",
        "nilpotency_step",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def as_dict(self, field):
        return {
            "dim": self.dim,
            "unimodular": self.unimodular,
            "trace_vector": [field.fmt(t) for t in self.trace_vector],
            "solvable": self.solvable,
            "derived_length": self.derived_length,
            "nilpotent": self.nilpotent,
            "nilpotency_step": self.nilpotency_step,
        }


def _span_basis(vectors, field):
    """Row-reduce a list of coefficient vectors to a basis of their span."""
    rows = [v for v in vectors if any(not field.is_zero(x) for x in v)]
    if not rows:
        return []
    red, pivots = linalg.rref(rows, field)
    return [red[r] for r in range(len(pivots))]


def _bracket_span(algebra, left, right):
    """Spanning vectors of [span(left), span(right)]."""
    out = []
    for x in left:
        vx = Vector(list(x) + [algebra.field.zero()] * (DIM - algebra.dim), algebra.field)
        for y in right:
            vy = Vector(list(y) + [algebra.field.zero()] * (DIM - algebra.dim), algebra.field)
            out.append(list(algebra.bracket(vx, vy).components[: algebra.dim]))
    return out


def classify(algebra):
    """Unimodularity, solvability (derived series), nilpotency (lower central series)."""
    field = algebra.field
    n = algebra.dim
    traces = []
    for i in range(1, n + 1):
        ad = algebra.ad_matrix(i)
        traces.append(sum((ad[k][k] for k in range(n)), field.zero()))
    unimodular = all(field.is_zero(t) for t in traces)

    full = [list(row) for row in linalg.identity(n, field)]

    derived = full
    derived_length = None
    for step in range(1, n + 2):
        derived = _span_basis(_bracket_span(algebra, derived, derived), field)
        if not derived:
            derived_length = step
            break
    solvable = derived_length is not None

    central = full
    nilpotency_step = None
    previous_dim = n
    for step in range(1, n + 2):
        central = _span_basis(_bracket_span(algebra, full, central), field)
        if not central:
            nilpotency_step = step
            break
        if len(central) == previous_dim:
            break  # stabilized nonzero: not nilpotent
        previous_dim = len(central)
    nilpotent = nilpotency_step is not None

    return AlgebraReport(
        dim=n,
        unimodular=unimodular,
        trace_vector=tuple(traces),
        solvable=solvable,
        derived_length=derived_length,
        nilpotent=nilpotent,
        nilpotency_step=nilpotency_step,
    )
