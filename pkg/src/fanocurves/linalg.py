"""Dense exact linear algebra over Q(w).

Matrices are tuples of row tuples of :class:`FieldElement`, vectors are
tuples.  Both are immutable, hence hashable.
"""

from __future__ import annotations

from collections.abc import Sequence

from .field import ONE, ZERO, FieldElement, Scalar

Vector = tuple[FieldElement, ...]
Matrix = tuple[Vector, ...]


def vector(values: Sequence[Scalar]) -> Vector:
    return tuple(FieldElement.coerce(v) for v in values)


def matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return tuple(vector(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(m))


def from_columns(cols: Sequence[Sequence[Scalar]]) -> Matrix:
    return transpose(matrix(cols))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(a: Matrix, v: Sequence[FieldElement]) -> Vector:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c: Scalar, a: Matrix) -> Matrix:
    c = FieldElement.coerce(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_pow(a: Matrix, k: int) -> Matrix:
    result = identity(len(a))
    for _ in range(k):
        result = mat_mul(result, a)
    return result


def outer(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> Matrix:
    return tuple(tuple(x * y for y in v) for x in u)


def dot(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def rref(a: Sequence[Sequence[FieldElement]]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns.  Zero rows are dropped."""
    rows = [list(r) for r in a]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r]), tuple(pivots)


def rank(a: Sequence[Sequence[FieldElement]]) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence[FieldElement]], ncols: int | None = None) -> Matrix:
    """Basis of ``{v : a v = 0}`` read off the reduced echelon form, one
    vector per free column, in increasing free-column order."""
    n = ncols if ncols is not None else len(a[0])
    red, pivots = rref(a) if a else ((), ())
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return tuple(basis)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(irow) for row, irow in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def det(a: Matrix) -> FieldElement:
    rows = [list(r) for r in a]
    n = len(rows)
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        result = result * rows[c][c]
        inv = rows[c][c].inv()
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def is_identity(a: Matrix) -> bool:
    return a == identity(len(a))
