"""Pointwise geometry on a cubic threefold F in P^4.

A point p of F is a cone vertex when the tangent hyperplane section of F at
p is a cone with apex p.  In adapted coordinates ``x = M y`` with ``M e1 = p``
the cubic reads ``y1^2 L + y1 Q + C`` (no ``y1^3`` term since F(p) = 0) and
the tangent hyperplane is ``L = 0``; p is a vertex exactly when L divides Q.
Writing ``Q = L m`` gives ``F = L (y1 + m/2)^2 + (C - L m^2/4)``, so negating
``y1 + m/2`` is a symmetry of F.  That symmetry is the order two reflection
``R(v) = v - 2 phi(v) p`` with ``phi = (y1 + m/2) o M^-1``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    GeometryError,
    LineInCubicError,
    NotOnCubicError,
    ReductionError,
    SingularPointError,
    TangentialIntersectionError,
)
from .field import ONE, ZERO, FieldElement, Scalar, cube_root_of_unity, format_coeff, is_prime, reduce_mod
from .linalg import Matrix, Vector
from .poly import NVARS, Poly, linear_substitute, restrict_to_line, restrict_to_plane


def _normalize(coords: Sequence[Scalar]) -> Vector:
    v = linalg.vector(coords)
    lead = next((c for c in v if c), None)
    if lead is None:
        raise GeometryError("the zero vector has no projective class")
    if lead == ONE:
        return v
    inv = lead.inv()
    return tuple(c * inv for c in v)


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^4 scaled so its first nonzero coordinate is 1."""

    coords: Vector

    def __init__(self, coords: Sequence[Scalar]):
        object.__setattr__(self, "coords", _normalize(coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> FieldElement:
        return self.coords[i]

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c)

    def sort_key(self):
        return (self.support(), tuple(c.sort_key() for c in self.coords))

    def to_strings(self) -> list[str]:
        return [format_coeff(c) for c in self.coords]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


@dataclass(frozen=True)
class LinearFunctional:
    """A nonzero linear form ``sum c_i x_i``.  Stored as given; use
    :meth:`normalized` for the comparison scaling."""

    coeffs: Vector

    def __init__(self, coeffs: Sequence[Scalar]):
        v = linalg.vector(coeffs)
        if not any(v):
            raise GeometryError("linear functional must be nonzero")
        object.__setattr__(self, "coeffs", v)

    def __call__(self, v: Sequence[FieldElement]) -> FieldElement:
        return linalg.dot(self.coeffs, v)

    def normalized(self) -> LinearFunctional:
        return LinearFunctional(_normalize(self.coeffs))

    def as_poly(self) -> Poly:
        return Poly.linear_form(self.coeffs)

    def __str__(self) -> str:
        return self.as_poly().to_str()


@dataclass(frozen=True)
class VertexRecord:
    """Everything the cone vertex test learns about a vertex p_E.

    ``residual`` is the linear form m with ``Q = L m``, written in the
    adapted coordinates ``y`` of ``adapted_basis`` (columns p, then standard
    basis vectors).  ``reflection`` is R_E and ``sigma_star`` is ``-R_E``.
    """

    point: ProjectivePoint
    tangent: LinearFunctional
    residual: Poly
    fixed_functional: LinearFunctional
    reflection: Matrix
    sigma_star: Matrix
    adapted_basis: Matrix = field(repr=False)


@dataclass(frozen=True)
class NotAVertex:
    """Negative answer of :func:`cone_vertex_test`; ``remainder`` is Q reduced
    modulo L, a nonzero witness."""

    point: ProjectivePoint
    remainder: Poly

    def __bool__(self) -> bool:
        return False


def as_point(p: ProjectivePoint | VertexRecord | Sequence[Scalar]) -> ProjectivePoint:
    if isinstance(p, VertexRecord):
        return p.point
    if isinstance(p, ProjectivePoint):
        return p
    return ProjectivePoint(p)


def gradient_at(f: Poly, p: Sequence[Scalar]) -> Vector:
    return tuple(f.partial(i).evaluate(p) for i in range(f.nvars))


def tangent_functional(f: Poly, p: ProjectivePoint | Sequence[Scalar]) -> LinearFunctional:
    p = as_point(p)
    if f.evaluate(p.coords):
        raise NotOnCubicError(f"point {p} is not on the cubic")
    grad = gradient_at(f, p.coords)
    if not any(grad):
        raise SingularPointError(f"cubic is singular at {p}")
    return LinearFunctional(grad).normalized()


def line_in_cubic(f: Poly, p, q) -> bool:
    p, q = as_point(p), as_point(q)
    return not any(restrict_to_line(f, p.coords, q.coords))


def adapted_basis(p: ProjectivePoint, order: Sequence[int] | None = None) -> Matrix:
    """Invertible matrix with first column p, completed greedily by standard
    basis vectors tried in ``order`` (default: by index)."""
    order = range(NVARS) if order is None else order
    cols: list[Vector] = [p.coords]
    for j in order:
        e = tuple(ONE if k == j else ZERO for k in range(NVARS))
        if linalg.rank(cols + [e]) == len(cols) + 1:
            cols.append(e)
        if len(cols) == NVARS:
            break
    return linalg.from_columns(cols)


def _split_by_first(g: Poly) -> tuple[Poly, Poly, Poly, FieldElement]:
    """Split ``g(y)`` as ``y1^3 c + y1^2 L + y1 Q + C`` with L, Q, C free of y1."""
    parts: dict[int, dict] = {0: {}, 1: {}, 2: {}, 3: {}}
    for mono, c in g.terms.items():
        parts[mono[0]][(0,) + mono[1:]] = c
    cube = parts[3].get((0, 0, 0, 0, 0), ZERO)
    return Poly(parts[2]), Poly(parts[1]), Poly(parts[0]), cube


def _unit(i: int) -> tuple[int, ...]:
    return tuple(1 if t == i else 0 for t in range(NVARS))


def _substitute_pivot(q: Poly, lin: Poly, k: int) -> Poly:
    """Reduce q modulo lin by replacing ``y_k`` with ``-(lin - lin_k y_k)/lin_k``."""
    inv = lin.coeff(_unit(k)).inv()
    rows = []
    for i in range(NVARS):
        if i == k:
            rows.append(tuple(ZERO if j == k else -lin.coeff(_unit(j)) * inv for j in range(NVARS)))
        else:
            rows.append(tuple(ONE if j == i else ZERO for j in range(NVARS)))
    return linear_substitute(q, tuple(rows))


def _divide_quadratic_by_linear(q: Poly, lin: Poly, k: int) -> Poly:
    """Exact quotient m with ``q = lin * m`` given ``lin_k != 0``."""
    lk = lin.coeff(_unit(k))
    mk = q.coeff(tuple(2 if t == k else 0 for t in range(NVARS))) / lk
    coeffs = [ZERO] * NVARS
    coeffs[k] = mk
    for j in range(NVARS):
        if j != k:
            cross = q.coeff(tuple(1 if t in (j, k) else 0 for t in range(NVARS)))
            coeffs[j] = (cross - lin.coeff(_unit(j)) * mk) / lk
    m = Poly.linear_form(coeffs)
    if lin * m != q:
        raise GeometryError("quadratic part is not divisible by the tangent form")
    return m


def cone_vertex_test(f: Poly, p: ProjectivePoint | Sequence[Scalar], completion_order: Sequence[int] | None = None) -> VertexRecord | NotAVertex:
    """Decide whether p is the vertex of a cone in F and build its reflection."""
    p = as_point(p)
    tangent = tangent_functional(f, p)
    m_basis = adapted_basis(p, completion_order)
    g = linear_substitute(f, m_basis)
    lin, quad, _, cube = _split_by_first(g)
    if cube:
        raise NotOnCubicError(f"point {p} is not on the cubic")
    if lin.is_zero():
        raise SingularPointError(f"cubic is singular at {p}")
    k = min(mono.index(1) for mono in lin.terms)
    remainder = _substitute_pivot(quad, lin, k)
    if remainder:
        return NotAVertex(p, remainder)
    m = _divide_quadratic_by_linear(quad, lin, k)

    half = FieldElement(1, 0) / 2
    phi_y = [ONE] + [m.coeff(_unit(j)) * half for j in range(1, NVARS)]
    # phi(x) = phi_y . (M^-1 x)
    m_inv = linalg.inverse(m_basis)
    phi = tuple(linalg.dot(phi_y, col) for col in linalg.transpose(m_inv))
    phi_fn = LinearFunctional(phi)
    if phi_fn(p.coords) != ONE:
        raise GeometryError("fixed functional does not take the value 1 at the vertex")
    two_p = tuple(c * 2 for c in p.coords)
    reflection = linalg.mat_sub(linalg.identity(NVARS), linalg.outer(two_p, phi))
    sigma_star = linalg.mat_scale(-1, reflection)
    return VertexRecord(
        point=p,
        tangent=tangent,
        residual=m,
        fixed_functional=phi_fn,
        reflection=reflection,
        sigma_star=sigma_star,
        adapted_basis=m_basis,
    )


def is_vertex(f: Poly, p) -> bool:
    return isinstance(cone_vertex_test(f, p), VertexRecord)


def third_vertex(f: Poly, v1, v2) -> ProjectivePoint:
    """Third intersection point of F with the line through two vertices whose
    curves are disjoint.  The binary cubic on the line is ``s t (a s + b t)``."""
    p, q = as_point(v1), as_point(v2)
    c30, c21, c12, c03 = restrict_to_line(f, p.coords, q.coords)
    if not (c30 or c21 or c12 or c03):
        raise LineInCubicError(f"line through {p} and {q} lies in the cubic")
    if c30 or c03:
        raise NotOnCubicError("both endpoints must lie on the cubic")
    a, b = c21, c12
    if not a or not b:
        raise TangentialIntersectionError(f"line through {p} and {q} is tangent to the cubic at an endpoint")
    return ProjectivePoint(tuple(b * x - a * y for x, y in zip(p.coords, q.coords)))


def plane_basis(v: VertexRecord) -> Matrix:
    """Canonical basis of the plane ``{tangent = 0, fixed functional = 0}``."""
    constraints = (v.tangent.coeffs, v.fixed_functional.coeffs)
    basis = linalg.nullspace(constraints, NVARS)
    if len(basis) != 3:
        raise GeometryError("tangent and fixed functional are dependent")
    red, _ = linalg.rref(basis)
    return red


def plane_model(f: Poly, v: VertexRecord) -> Poly:
    """Ternary cubic cut out on the fixed plane of the vertex's reflection."""
    return restrict_to_plane(f, plane_basis(v))


def apply(m: Matrix, p) -> ProjectivePoint:
    return ProjectivePoint(linalg.mat_vec(m, as_point(p).coords))


# --- smoothness falsifier ----------------------------------------------------


def _nonresidue(p: int) -> int:
    return next(n for n in range(2, p) if pow(n, (p - 1) // 2, p) == p - 1)


class _Fp2:
    """Vectorized arithmetic in F_p[t]/(t^2 - n) on integer arrays of pairs."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.n = _nonresidue(p) if k == 2 else 0

    def mul(self, x, y):
        p = self.p
        if self.k == 1:
            return (x[0] * y[0] % p, x[1])
        return ((x[0] * y[0] + self.n * (x[1] * y[1] % p)) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p)

    def scal(self, c: int, x):
        return (c * x[0] % self.p, c * x[1] % self.p)


def _poly_mod(f: Poly, p: int) -> list[tuple[tuple[int, ...], int]]:
    return [(mono, reduce_mod(c, p)) for mono, c in f.items()]


def _eval_many(terms, coords, ar: _Fp2, shape):
    p = ar.p
    zero = (np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64))
    total = zero
    pw_cache: dict[tuple[int, int], tuple] = {}

    def pw(i, e):
        if (i, e) not in pw_cache:
            if e == 0:
                pw_cache[(i, e)] = (np.ones(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64))
            else:
                pw_cache[(i, e)] = ar.mul(pw(i, e - 1), coords[i])
        return pw_cache[(i, e)]

    for mono, c in terms:
        if c % p == 0:
            continue
        term = (np.full(shape, c, dtype=np.int64), np.zeros(shape, dtype=np.int64))
        for i, e in enumerate(mono):
            if e:
                term = ar.mul(term, pw(i, e))
        total = ar.add(total, term)
    return total


def _fq_elements(p: int, k: int):
    q = p**k
    idx = np.arange(q, dtype=np.int64)
    return idx % p, idx // p


def singular_scan(f: Poly, p: int = 7, k: int = 1) -> tuple[tuple[int, int], ...] | None:
    """Brute-force search of P^4(F_{p^k}) for a point where F and its five
    partials all vanish.

    Returns the first witness in canonical order (leading coordinate index,
    then lexicographic on the remaining coordinates) as pairs ``(u, v)`` for
    ``u + v t`` with ``t^2`` the smallest non-residue (``v = 0`` when k = 1),
    or None.  ``None`` is not a certificate of smoothness: singular points
    may live over other primes or extensions.
    """
    if not is_prime(p) or p % 3 != 1:
        raise ReductionError(f"scan prime must satisfy p = 1 mod 3, got {p}")
    if k not in (1, 2):
        raise ValueError("extension degree must be 1 or 2")
    cube_root_of_unity(p)
    polys = [_poly_mod(f, p)] + [_poly_mod(f.partial(i), p) for i in range(NVARS)]
    ar = _Fp2(p, k)
    re_all, im_all = _fq_elements(p, k)
    q = p**k
    for lead in range(NVARS):
        ntail = NVARS - 1 - lead
        # chunk over the first tail coordinate to bound memory
        heads = range(q) if ntail > 0 else [None]
        for h in heads:
            rest = max(ntail - 1, 0)
            grid = np.indices((q,) * rest).reshape(rest, -1) if rest else np.zeros((0, 1), dtype=np.int64)
            shape = (grid.shape[1],)
            coords = []
            for i in range(NVARS):
                if i < lead:
                    coords.append((np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)))
                elif i == lead:
                    coords.append((np.ones(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)))
                elif i == lead + 1:
                    coords.append((np.full(shape, re_all[h]), np.full(shape, im_all[h])))
                else:
                    g = grid[i - lead - 2]
                    coords.append((re_all[g], im_all[g]))
            mask = np.ones(shape, dtype=bool)
            for terms in polys:
                val = _eval_many(terms, coords, ar, shape)
                mask &= (val[0] == 0) & (val[1] == 0)
                if not mask.any():
                    break
            hits = np.flatnonzero(mask)
            if hits.size:
                j = hits[0]
                return tuple((int(c[0][j]), int(c[1][j])) for c in coords)
    return None


def format_witness(witness: Sequence[tuple[int, int]]) -> list[str]:
    return [str(u) if v == 0 else (f"{u}+{v}t" if u else f"{v}t") for u, v in witness]
