"""Sparse multivariate polynomials over Q(w) and the cubic file format."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .errors import DegenerateLineError, DependentBasisError, ParseError
from .field import ONE, ZERO, FieldElement, Scalar, format_coeff, parse_coeff

Monomial = tuple[int, ...]

NVARS = 5


def grlex_key(mono: Monomial) -> tuple[int, ...]:
    """Sort key putting higher degree first, then x1 > x2 > ... lexicographically."""
    return (-sum(mono),) + tuple(-e for e in mono)


class Poly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] = (), nvars: int = NVARS):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, FieldElement] = {}
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has {len(mono)} exponents, expected {nvars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = FieldElement.coerce(c)
            acc = clean.get(mono, ZERO) + c
            if acc:
                clean[mono] = acc
            else:
                clean.pop(mono, None)
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _from_clean(cls, terms: dict[Monomial, FieldElement], nvars: int) -> Poly:
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def variable(cls, i: int, nvars: int = NVARS) -> Poly:
        """The 0-based ``i``-th coordinate function."""
        mono = tuple(1 if k == i else 0 for k in range(nvars))
        return cls._from_clean({mono: ONE}, nvars)

    @classmethod
    def constant(cls, c: Scalar, nvars: int = NVARS) -> Poly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def linear_form(cls, coeffs: Sequence[Scalar]) -> Poly:
        n = len(coeffs)
        return cls(((tuple(1 if k == i else 0 for k in range(n)), c) for i, c in enumerate(coeffs)), n)

    @property
    def terms(self) -> dict[Monomial, FieldElement]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, FieldElement]]:
        """Terms in graded lexicographic order."""
        for mono in sorted(self._terms, key=grlex_key):
            yield mono, self._terms[mono]

    def coeff(self, mono: Monomial) -> FieldElement:
        return self._terms.get(tuple(mono), ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(m) for m in self._terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __neg__(self) -> Poly:
        return Poly._from_clean({m: -c for m, c in self._terms.items()}, self.nvars)

    def __add__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            acc = out.get(m, ZERO) + c
            if acc:
                out[m] = acc
            else:
                out.pop(m, None)
        return Poly._from_clean(out, self.nvars)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c: Scalar) -> Poly:
        c = FieldElement.coerce(c)
        if not c:
            return Poly((), self.nvars)
        return Poly._from_clean({m: c * v for m, v in self._terms.items()}, self.nvars)

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        out: dict[Monomial, FieldElement] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                acc = out.get(m, ZERO) + c1 * c2
                if acc:
                    out[m] = acc
                else:
                    out.pop(m, None)
        return Poly._from_clean(out, self.nvars)

    def __rmul__(self, other: Scalar) -> Poly:
        return self.scale(other)

    def __pow__(self, k: int) -> Poly:
        result = Poly.constant(1, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, pt: Sequence[Scalar]) -> FieldElement:
        pt = [FieldElement.coerce(x) for x in pt]
        if len(pt) != self.nvars:
            raise ValueError(f"point has {len(pt)} coordinates, expected {self.nvars}")
        total = ZERO
        for mono, c in self._terms.items():
            term = c
            for x, e in zip(pt, mono):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def partial(self, i: int) -> Poly:
        """Formal derivative with respect to the 0-based variable ``i``."""
        out: dict[Monomial, FieldElement] = {}
        for mono, c in self._terms.items():
            e = mono[i]
            if e:
                m = mono[:i] + (e - 1,) + mono[i + 1 :]
                out[m] = c * e
        return Poly._from_clean(out, self.nvars)

    def gradient(self) -> tuple[Poly, ...]:
        return tuple(self.partial(i) for i in range(self.nvars))

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if c.is_rational():
                q = c.a
                sign = "-" if q < 0 else "+"
                mag = format_coeff(FieldElement(abs(q)))
                if body and mag == "1":
                    text = body
                elif body:
                    text = f"{mag}*{body}"
                else:
                    text = mag
            else:
                sign = "+"
                text = f"({format_coeff(c)})" + (f"*{body}" if body else "")
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r})"


class Cubic(Poly):
    """A nonzero homogeneous cubic form in five variables."""

    __slots__ = ()

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] | Poly = ()):
        if isinstance(terms, Poly):
            terms = terms._terms
        super().__init__(terms, NVARS)
        if not self._terms:
            raise ValueError("cubic form must be nonzero")
        if not self.is_homogeneous(3):
            raise ValueError(f"cubic form must be homogeneous of degree 3, got degrees {sorted({sum(m) for m in self._terms})}")


def linear_substitute(f: Poly, m: linalg.Matrix) -> Poly:
    """Return ``f(M y)``: each ``x_i`` becomes ``sum_j M[i][j] y_j``.

    ``M`` may be rectangular; the result has ``len(M[0])`` variables, which
    covers restrictions to lines and planes as well as changes of basis.
    """
    if len(m) != f.nvars:
        raise ValueError(f"substitution matrix has {len(m)} rows, expected {f.nvars}")
    ny = len(m[0])
    forms = [Poly.linear_form(row) for row in m]
    powers: dict[tuple[int, int], Poly] = {}

    def power(i: int, e: int) -> Poly:
        key = (i, e)
        if key not in powers:
            powers[key] = forms[i] if e == 1 else power(i, e - 1) * forms[i]
        return powers[key]

    total = Poly((), ny)
    for mono, c in f._terms.items():
        term = Poly.constant(c, ny)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def _independent(vectors: Sequence[Sequence[FieldElement]]) -> bool:
    return linalg.rank(vectors) == len(vectors)


def restrict_to_line(f: Poly, p: Sequence[Scalar], q: Sequence[Scalar]) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
    """Coefficients ``(c30, c21, c12, c03)`` of ``f(s p + t q)`` in ``s^3, s^2 t, s t^2, t^3``."""
    p = linalg.vector(p)
    q = linalg.vector(q)
    if not _independent([p, q]):
        raise DegenerateLineError("points are projectively equal; they span no line")
    g = linear_substitute(f, linalg.from_columns([p, q]))
    return (g.coeff((3, 0)), g.coeff((2, 1)), g.coeff((1, 2)), g.coeff((0, 3)))


def restrict_to_plane(f: Poly, basis: Sequence[Sequence[Scalar]]) -> Poly:
    """``f(s u1 + t u2 + r u3)`` as a ternary form in ``(s, t, r)``."""
    vecs = [linalg.vector(u) for u in basis]
    if len(vecs) != 3 or not _independent(vecs):
        raise DependentBasisError("plane basis must be three independent vectors")
    return linear_substitute(f, linalg.from_columns(vecs))


# --- cubic file format -----------------------------------------------------

FIELD_TAG = "Q(w)"


def cubic_to_text(f: Poly) -> str:
    """Serialize in the cubic file format, one term per line, grlex order."""
    lines = ["{", f'  "variables": {f.nvars},', f'  "field": "{FIELD_TAG}",', '  "terms": [']
    rows = []
    for mono, c in f.items():
        exps = ", ".join(str(e) for e in mono)
        rows.append(f'    {{"exponents": [{exps}], "coeff": "{format_coeff(c)}"}}')
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _term_lines(text: str) -> list[int]:
    return [text.count("\n", 0, m.start()) + 1 for m in re.finditer(r'"exponents"', text)]


def cubic_from_text(text: str) -> Cubic:
    """Parse and validate a cubic document; errors carry line numbers."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("cubic document must be an object", 1)
    if doc.get("variables") != NVARS:
        raise ParseError(f"'variables' must be {NVARS}, got {doc.get('variables')!r}")
    if doc.get("field") != FIELD_TAG:
        raise ParseError(f"'field' must be {FIELD_TAG!r}, got {doc.get('field')!r}")
    terms = doc.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ParseError("'terms' must be a nonempty list")
    lines = _term_lines(text)
    seen: dict[Monomial, int] = {}
    out: dict[Monomial, FieldElement] = {}
    for k, term in enumerate(terms):
        line = lines[k] if k < len(lines) else None
        where = f"term {k + 1}: "
        if not isinstance(term, dict) or set(term) != {"exponents", "coeff"}:
            raise ParseError(where + "each term needs exactly 'exponents' and 'coeff'", line)
        exps = term["exponents"]
        if not (isinstance(exps, list) and len(exps) == NVARS and all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps)):
            raise ParseError(where + f"exponents must be {NVARS} non-negative integers", line)
        mono = tuple(exps)
        if sum(mono) != 3:
            raise ParseError(where + f"non-homogeneous (degree {sum(mono)})", line)
        if mono in seen:
            raise ParseError(where + f"duplicate monomial {list(mono)} (first at term {seen[mono] + 1})", line)
        seen[mono] = k
        if not isinstance(term["coeff"], str):
            raise ParseError(where + "coeff must be a string in the coefficient grammar", line)
        try:
            c = parse_coeff(term["coeff"])
        except ParseError as exc:
            raise ParseError(where + str(exc), line) from None
        out[mono] = c
    try:
        return Cubic(out)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
