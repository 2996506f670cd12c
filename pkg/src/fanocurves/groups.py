"""Finite matrix groups generated by the vertex reflections.

For the closure, a 5x5 matrix over Q(w) is encoded exactly as a 10x10 integer
matrix together with one positive common denominator: each entry
``(a + b w)/d`` becomes the block ``[[a, -b], [b, a - b]]`` (multiplication
by ``a + b w`` in the basis ``1, w``).  The encoding is an injective ring
homomorphism, so products are plain integer matmuls, and after dividing out
the gcd of all entries and the denominator the encoding is canonical and can
be hashed byte for byte.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import reduce
from math import lcm

import numpy as np

from . import linalg
from .errors import CapExceeded, InvariantViolation
from .field import FieldElement
from .linalg import Matrix
from .poly import Poly, linear_substitute

DEFAULT_MAX_ORDER = 20000
MAX_ORDER_ENV = "FANOCURVES_MAX_ORDER"

# keeps every 10-term dot product of entries inside int64
_ENTRY_BOUND = 2**26


def default_max_order() -> int:
    value = os.environ.get(MAX_ORDER_ENV)
    return int(value) if value else DEFAULT_MAX_ORDER


def encode(m: Matrix) -> tuple[np.ndarray, int]:
    n = len(m)
    d = reduce(lcm, (c.denominator for row in m for c in row), 1)
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i, row in enumerate(m):
        for j, c in enumerate(row):
            na, nb, cd = c.integer_parts()
            s = d // cd
            a, b = na * s, nb * s
            out[2 * i, 2 * j] = a
            out[2 * i, 2 * j + 1] = -b
            out[2 * i + 1, 2 * j] = b
            out[2 * i + 1, 2 * j + 1] = a - b
    return out, d


def decode(real: np.ndarray, d: int) -> Matrix:
    n = real.shape[0] // 2
    return tuple(
        tuple(FieldElement._raw(int(real[2 * i, 2 * j]), int(real[2 * i + 1, 2 * j]), int(d)) for j in range(n))
        for i in range(n)
    )


def _canonicalize(mats: np.ndarray, dens: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    flat = mats.reshape(mats.shape[0], -1)
    g = np.gcd.reduce(np.concatenate([flat, dens[:, None]], axis=1), axis=1)
    return mats // g[:, None, None], dens // g


def _keys(mats: np.ndarray, dens: np.ndarray) -> list[bytes]:
    flat = np.concatenate([dens[:, None], mats.reshape(mats.shape[0], -1)], axis=1)
    flat = np.ascontiguousarray(flat)
    return [row.tobytes() for row in flat]


@dataclass
class GroupSummary:
    order: int
    reflection_count: int
    generator_count: int
    character_trivial: bool

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "reflection_count": self.reflection_count,
            "generator_count": self.generator_count,
            "character_trivial": self.character_trivial,
        }


@dataclass
class GroupClosure:
    """All elements of a finite matrix group, in encoded form, in BFS order
    (identity first)."""

    generators: list[Matrix]
    real: np.ndarray
    dens: np.ndarray
    _decoded: list[Matrix] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.real.shape[0])

    def __len__(self) -> int:
        return self.order

    def matrices(self) -> list[Matrix]:
        if self._decoded is None:
            self._decoded = [decode(r, d) for r, d in zip(self.real, self.dens)]
        return self._decoded

    def __iter__(self):
        return iter(self.matrices())

    def keys(self) -> set[bytes]:
        return set(_keys(self.real, self.dens))

    def contains(self, m: Matrix) -> bool:
        r, d = encode(m)
        r, d = _canonicalize(r[None], np.array([d], dtype=np.int64))
        return _keys(r, d)[0] in self.keys()

    def summary(self, f: Poly | None = None) -> GroupSummary:
        return GroupSummary(
            order=self.order,
            reflection_count=reflection_census(self),
            generator_count=len(self.generators),
            character_trivial=character_check(f, self) if f is not None else True,
        )


def closure(generators: Sequence[Matrix], max_order: int | None = None, block: int = 512) -> GroupClosure:
    """Breadth-first product closure starting from the identity.

    Raises :class:`CapExceeded` once more than ``max_order`` distinct
    elements have been found, which is how infinite or unexpectedly large
    groups are reported.
    """
    cap = default_max_order() if max_order is None else max_order
    generators = list(generators)
    n = len(generators[0]) if generators else 5
    ident, _ = encode(linalg.identity(n))
    if generators:
        enc = [encode(g) for g in generators]
        gens = np.stack([e[0] for e in enc])
        gdens = np.array([e[1] for e in enc], dtype=np.int64)
        gens, gdens = _canonicalize(gens, gdens)
    else:
        gens = np.zeros((0, 2 * n, 2 * n), dtype=np.int64)
        gdens = np.zeros(0, dtype=np.int64)

    elements = [ident]
    dens = [1]
    seen = {_keys(ident[None], np.array([1], dtype=np.int64))[0]}
    frontier = np.array([ident])
    fdens = np.array([1], dtype=np.int64)
    while frontier.shape[0] and gens.shape[0]:
        new_mats: list[np.ndarray] = []
        new_dens: list[int] = []
        for start in range(0, frontier.shape[0], block):
            fm = frontier[start : start + block]
            fd = fdens[start : start + block]
            if max(np.abs(fm).max(), np.abs(gens).max(), fd.max(), gdens.max()) > _ENTRY_BOUND:
                raise CapExceeded("group element entries grew beyond the exact int64 bound; the group is likely infinite")
            prods = np.matmul(fm[:, None], gens[None]).reshape(-1, 2 * n, 2 * n)
            pd = (fd[:, None] * gdens[None]).reshape(-1)
            prods, pd = _canonicalize(prods, pd)
            for key, m, d in zip(_keys(prods, pd), prods, pd):
                if key not in seen:
                    seen.add(key)
                    new_mats.append(m)
                    new_dens.append(int(d))
                    if len(seen) > cap:
                        raise CapExceeded(f"group closure exceeded {cap} elements")
        elements.extend(new_mats)
        dens.extend(new_dens)
        if new_mats:
            frontier = np.stack(new_mats)
            fdens = np.array(new_dens, dtype=np.int64)
        else:
            frontier = frontier[:0]
    return GroupClosure(generators, np.stack(elements), np.array(dens, dtype=np.int64))


def _as_matrices(elements: GroupClosure | Iterable[Matrix]) -> list[Matrix]:
    return elements.matrices() if isinstance(elements, GroupClosure) else list(elements)


def is_reflection(g: Matrix) -> bool:
    """Order two reflection: ``g^2 = Id`` and ``rank(g - Id) = 1``."""
    ident = linalg.identity(len(g))
    return linalg.mat_mul(g, g) == ident and linalg.rank(linalg.mat_sub(g, ident)) == 1


def reflection_census(elements: GroupClosure | Iterable[Matrix]) -> int:
    if isinstance(elements, GroupClosure):
        # prefilter involutions on the encoded form, then decide rank exactly
        sq = np.matmul(elements.real, elements.real)
        eye = np.eye(elements.real.shape[1], dtype=np.int64)
        invol = np.all(sq == (elements.dens**2)[:, None, None] * eye, axis=(1, 2))
        candidates = [decode(elements.real[i], elements.dens[i]) for i in np.flatnonzero(invol)]
    else:
        candidates = list(elements)
    return sum(1 for g in candidates if is_reflection(g))


def pair_order(r1: Matrix, r2: Matrix) -> int:
    """Smallest k >= 1 with ``(r1 r2)^k = Id``; only 1, 2 or 3 can occur for
    reflections of vertices of one cubic."""
    prod = linalg.mat_mul(r1, r2)
    power = prod
    for k in (1, 2, 3):
        if linalg.is_identity(power):
            return k
        power = linalg.mat_mul(power, prod)
    raise InvariantViolation("product of two vertex reflections has order greater than 3")


def character_check(f: Poly, elements: GroupClosure | Iterable[Matrix]) -> bool:
    """True iff ``F o g = F`` for every element g."""
    return all(linear_substitute(f, g) == f for g in _as_matrices(elements))


@dataclass(frozen=True)
class ClassRow:
    label: str
    n_s: int
    order: int
    irreducible: bool


@dataclass(frozen=True)
class Unclassified:
    n_s: int
    order: int
    diagnostic: str
    label: str = "unclassified"


CLASS_ROWS: tuple[ClassRow, ...] = (
    ClassRow("trivial", 0, 1, True),
    ClassRow("[]2", 1, 2, True),
    ClassRow("G(3,3,2)", 3, 6, True),
    ClassRow("S4", 6, 24, True),
    ClassRow("S5", 10, 120, True),
    ClassRow("G(3,3,5)", 30, 9720, True),
    ClassRow("[]2x[]2", 2, 4, False),
    ClassRow("G(3,3,2)x[]2", 4, 12, False),
    ClassRow("G(3,3,2)xG(3,3,2)", 6, 36, False),
    ClassRow("G(3,3,3)xG(3,3,2)", 12, 324, False),
)

ROWS_BY_LABEL = {row.label: row for row in CLASS_ROWS}
_ROWS_BY_ORDER = {row.order: row for row in CLASS_ROWS}


def classify(n_s: int, order: int) -> ClassRow | Unclassified:
    """Look up the table row by group order, using the curve count as a check."""
    row = _ROWS_BY_ORDER.get(order)
    if row is None:
        return Unclassified(n_s, order, f"no table row has group order {order}")
    if row.n_s != n_s:
        return Unclassified(n_s, order, f"order {order} belongs to {row.label}, which has {row.n_s} curves, not {n_s}")
    return row


def gmpn_order(m: int, p: int, n: int) -> int:
    """Order ``(m/p) m^(n-1) n!`` of the imprimitive group G(m, p, n)."""
    from math import factorial

    return m // p * m ** (n - 1) * factorial(n)


def gmpn_reflection_count(m: int, n: int) -> int:
    """Number of order two reflections ``m n (n-1) / 2`` in G(m, p, n) with p = m."""
    return m * n * (n - 1) // 2


def _encode_points(points: Sequence[Sequence[FieldElement]]) -> np.ndarray:
    """Integer (a, b) pairs of each point after clearing denominators, shape (k, 10)."""
    out = np.zeros((len(points), 2 * len(points[0]) if points else 0), dtype=np.int64)
    for r, p in enumerate(points):
        d = reduce(lcm, (c.denominator for c in p), 1)
        for i, c in enumerate(p):
            na, nb, cd = c.integer_parts()
            out[r, 2 * i] = na * (d // cd)
            out[r, 2 * i + 1] = nb * (d // cd)
    return out


def _projective_keys(vecs: np.ndarray) -> list[bytes]:
    """Canonical bytes per row of encoded vectors, up to scaling by Q(w)*.

    Each row is multiplied by the conjugate of its first nonzero coordinate,
    which makes that coordinate a positive integer, and then divided by the
    gcd of all entries.
    """
    a, b = vecs[:, 0::2], vecs[:, 1::2]
    nonzero = (a != 0) | (b != 0)
    first = nonzero.argmax(axis=1)
    rows = np.arange(vecs.shape[0])
    ca, cb = a[rows, first], b[rows, first]
    # (a + b w)(ca - cb - cb w) with w^2 = -1 - w
    conj_a, conj_b = (ca - cb)[:, None], (-cb)[:, None]
    na = a * conj_a - b * conj_b
    nb = a * conj_b + b * conj_a - b * conj_b
    out = np.empty_like(vecs)
    out[:, 0::2], out[:, 1::2] = na, nb
    g = np.gcd.reduce(out, axis=1)
    out //= g[:, None]
    return [row.tobytes() for row in np.ascontiguousarray(out)]


def permutes_points(group: GroupClosure, points: Sequence[Sequence[FieldElement]]) -> bool:
    """True iff every group element maps the projective point set onto itself."""
    if not points:
        return True
    enc = _encode_points(points)
    if np.abs(enc).max() * np.abs(group.real).max() * 10 > _ENTRY_BOUND**2:
        raise CapExceeded("point coordinates too large for the exact int64 check")
    target = set(_projective_keys(enc))
    k = len(points)
    for start in range(0, group.order, 1024):
        imgs = np.einsum("gij,kj->gki", group.real[start : start + 1024], enc).reshape(-1, enc.shape[1])
        keys = _projective_keys(imgs)
        for s in range(0, len(keys), k):
            if set(keys[s : s + k]) != target:
                return False
    return True
