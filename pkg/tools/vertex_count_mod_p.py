"""Count cone vertices of a cubic's reduction over F_p by brute force.

Independent of the exact pipeline: a point x of F is a cone vertex iff the
Hessian quadratic form H(x) vanishes on the tangent hyperplane grad F(x)^perp.
Used to vet catalog samples for vertices not defined over Q(w); a vertex
over a number field shows up over F_p for every prime splitting in it.

    python tools/vertex_count_mod_p.py path/to/file.cubic [p ...]
"""

from __future__ import annotations

import itertools
import sys

from fanocurves.field import reduce_mod
from fanocurves.poly import Poly, cubic_from_text


def _reduce(f: Poly, p: int):
    return [(m, reduce_mod(c, p)) for m, c in f.items()]


def _ev(terms, x, p):
    total = 0
    for m, c in terms:
        t = c
        for xi, e in zip(x, m):
            if e:
                t = t * pow(xi, e, p) % p
        total += t
    return total % p


def _points(p: int):
    for lead in range(5):
        for tail in itertools.product(range(p), repeat=4 - lead):
            yield (0,) * lead + (1,) + tail


def _hyperplane_basis(g, p):
    k = next(i for i in range(5) if g[i] % p)
    inv = pow(g[k], -1, p)
    basis = []
    for j in range(5):
        if j == k:
            continue
        v = [0] * 5
        v[j] = 1
        v[k] = (-g[j] * inv) % p
        basis.append(v)
    return basis


def count_vertices(f: Poly, p: int) -> list[tuple[int, ...]]:
    fr = _reduce(f, p)
    grads = [_reduce(f.partial(i), p) for i in range(5)]
    hess = [[_reduce(f.partial(i).partial(j), p) for j in range(5)] for i in range(5)]
    out = []
    for x in _points(p):
        if _ev(fr, x, p):
            continue
        g = [_ev(t, x, p) for t in grads]
        if not any(g):
            out.append(("singular",) + x)
            continue
        h = [[_ev(hess[i][j], x, p) for j in range(5)] for i in range(5)]
        basis = _hyperplane_basis(g, p)
        ok = True
        for u, v in itertools.combinations_with_replacement(basis, 2):
            val = sum(u[i] * h[i][j] * v[j] for i in range(5) for j in range(5)) % p
            if val:
                ok = False
                break
        if ok:
            out.append(x)
    return out


if __name__ == "__main__":
    f = cubic_from_text(open(sys.argv[1]).read())
    primes = [int(a) for a in sys.argv[2:]] or [7, 13, 19]
    for p in primes:
        found = count_vertices(f, p)
        print(p, len(found), found if len(found) <= 12 else "")
