"""Assembling the elliptic curve configuration of a cubic threefold.

Vertices are found by testing a fixed candidate set and saturating: lines
through two vertices with disjoint curves carry a third vertex, and every
reflection maps vertices to vertices.  The candidate set covers all of the
classified families in their normal forms; for any other cubic the result
is a lower bound, which reports flag with ``complete=False``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from . import geometry, groups, linalg
from .errors import GeometryError, InvariantViolation, TooManyVertices
from .field import MU3, OMEGA, OMEGA2, ONE, ZERO, format_coeff
from .geometry import ProjectivePoint, VertexRecord
from .linalg import rank
from .poly import NVARS, Poly, linear_substitute

MAX_CURVES = 30

_ROOT_NAMES = {ONE: "1", OMEGA: "w", OMEGA2: "w2", -ONE: "-1", -OMEGA: "-w", -OMEGA2: "-w2"}


def default_candidates() -> list[ProjectivePoint]:
    """Coordinate points e_i and the points e_i - c e_j for c in +-mu_3."""
    units = [tuple(ONE if k == i else ZERO for k in range(NVARS)) for i in range(NVARS)]
    scalars = list(MU3) + [-c for c in MU3]
    pts = {ProjectivePoint(e) for e in units}
    for i, j in itertools.combinations(range(NVARS), 2):
        for c in scalars:
            pts.add(ProjectivePoint(tuple(a - c * b for a, b in zip(units[i], units[j]))))
    return sorted(pts, key=ProjectivePoint.sort_key)


def curve_label(p: ProjectivePoint, index: int) -> str:
    """``E[i]`` for e_i, ``E[i,j]^beta`` for e_i - beta e_j, else ``E#index``."""
    supp = p.support()
    if len(supp) == 1:
        return f"E[{supp[0] + 1}]"
    if len(supp) == 2:
        i, j = supp
        beta = -p[j]
        name = _ROOT_NAMES.get(beta, format_coeff(beta))
        return f"E[{i + 1},{j + 1}]^{name}"
    return f"E#{index}"


def _sorted_unique(records: Iterable[VertexRecord]) -> list[VertexRecord]:
    by_point = {r.point: r for r in records}
    return [by_point[p] for p in sorted(by_point, key=ProjectivePoint.sort_key)]


def saturate(f: Poly, seeds: Iterable[ProjectivePoint | Sequence] | None = None, cap: int = MAX_CURVES) -> list[VertexRecord]:
    """Vertices among the seeds, closed under third points and reflections.

    Each round first adds the third vertex on every line through a pair of
    known vertices not lying in F, then images of vertices under the known
    reflections.  More than ``cap`` vertices raises :class:`TooManyVertices`.
    """
    seeds = default_candidates() if seeds is None else [geometry.as_point(s) for s in seeds]
    found: dict[ProjectivePoint, VertexRecord] = {}

    def add(rec: VertexRecord) -> None:
        found[rec.point] = rec
        if len(found) > cap:
            raise TooManyVertices(f"more than {cap} cone vertices found; a smooth cubic has at most {MAX_CURVES}")

    for p in seeds:
        if f.evaluate(p.coords):
            continue
        rec = geometry.cone_vertex_test(f, p)
        if isinstance(rec, VertexRecord):
            add(rec)

    done_pairs: set[tuple[ProjectivePoint, ProjectivePoint]] = set()
    while True:
        before = len(found)
        current = _sorted_unique(found.values())
        for r1, r2 in itertools.combinations(current, 2):
            pair = (r1.point, r2.point)
            if pair in done_pairs:
                continue
            done_pairs.add(pair)
            if geometry.line_in_cubic(f, r1.point, r2.point):
                continue
            q = geometry.third_vertex(f, r1, r2)
            if q in found:
                continue
            rec = geometry.cone_vertex_test(f, q)
            if not isinstance(rec, VertexRecord):
                raise InvariantViolation(f"third point {q} on the line through {r1.point} and {r2.point} is not a cone vertex")
            add(rec)
        current = _sorted_unique(found.values())
        for r in current:
            for v in current:
                q = geometry.apply(r.reflection, v.point)
                if q in found or f.evaluate(q.coords):
                    continue
                rec = geometry.cone_vertex_test(f, q)
                if isinstance(rec, VertexRecord):
                    add(rec)
        if len(found) == before:
            break
    return _sorted_unique(found.values())


def intersection_matrix(f: Poly, vertices: Sequence[VertexRecord]) -> list[list[int]]:
    n = len(vertices)
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = -3
    for i, j in itertools.combinations(range(n), 2):
        if vertices[i].point == vertices[j].point:
            raise GeometryError("intersection matrix needs distinct vertices")
        v = 1 if geometry.line_in_cubic(f, vertices[i].point, vertices[j].point) else 0
        mat[i][j] = mat[j][i] = v
    return mat


@dataclass
class ConfigGraph:
    vertices: list[str]
    edges: list[tuple[str, str]]
    flavor: str

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def degrees(self) -> dict[str, int]:
        return {v: len(nb) for v, nb in self.adjacency().items()}

    def girth(self) -> float:
        """Length of a shortest cycle, ``inf`` for a forest."""
        adj = self.adjacency()
        best = float("inf")
        for root in self.vertices:
            dist = {root: 0}
            parent = {root: None}
            queue = [root]
            for u in queue:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        queue.append(w)
                    elif parent[u] != w:
                        best = min(best, dist[u] + dist[w] + 1)
        return best

    def components(self) -> list[set[str]]:
        adj = self.adjacency()
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in adj[u] - comp:
                    comp.add(w)
                    stack.append(w)
            seen |= comp
            comps.append(comp)
        return comps


def build_graphs(matrix: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> tuple[ConfigGraph, ConfigGraph]:
    """Coxeter graph (edge iff EE' = 0) and incidence graph (edge iff EE' = 1)."""
    n = len(matrix)
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    cox, inc = [], []
    for i, j in itertools.combinations(range(n), 2):
        (inc if matrix[i][j] == 1 else cox).append((labels[i], labels[j]))
    return ConfigGraph(labels, cox, "coxeter"), ConfigGraph(labels, inc, "incidence")


def incidence_triangle_check(g: ConfigGraph) -> bool:
    """True iff the graph has no 3-clique."""
    adj = g.adjacency()
    for a, b in g.edges:
        if adj[a] & adj[b]:
            return False
    return True


def max_collinear(vertices: Sequence[VertexRecord]) -> int:
    """Largest number of vertices on one projective line (0 or 1 if fewer than two)."""
    pts = [v.point.coords for v in vertices]
    best = min(len(pts), 1)
    for i, j in itertools.combinations(range(len(pts)), 2):
        count = 2 + sum(1 for k in range(len(pts)) if k not in (i, j) and rank([pts[i], pts[j], pts[k]]) == 2)
        best = max(best, count)
    return best


@dataclass
class CurveRecord:
    label: str
    vertex: VertexRecord
    plane_model: Poly


@dataclass
class Configuration:
    cubic: Poly
    curves: list[CurveRecord]
    matrix: list[list[int]]
    coxeter: ConfigGraph
    incidence: ConfigGraph
    group: groups.GroupSummary
    closure: groups.GroupClosure = field(repr=False)
    class_label: str
    classification: groups.ClassRow | groups.Unclassified
    complete: bool = False

    @property
    def n_s(self) -> int:
        return len(self.curves)

    @property
    def vertices(self) -> list[VertexRecord]:
        return [c.vertex for c in self.curves]

    def curve(self, label: str) -> CurveRecord:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(f"no curve labelled {label!r}; known: {', '.join(c.label for c in self.curves)}")


def analyze(f: Poly, seeds=None, max_order: int | None = None, complete: bool = False) -> Configuration:
    """Full pipeline: saturate, intersect, build graphs, close the group, classify."""
    vertices = saturate(f, seeds)
    labels = [curve_label(v.point, k) for k, v in enumerate(vertices)]
    if len(set(labels)) != len(labels):
        raise InvariantViolation("curve labels are not unique")
    curves = [CurveRecord(lab, v, geometry.plane_model(f, v)) for lab, v in zip(labels, vertices)]
    matrix = intersection_matrix(f, vertices)
    cox, inc = build_graphs(matrix, labels)
    clo = groups.closure([v.reflection for v in vertices], max_order=max_order)
    summary = clo.summary(f)
    row = groups.classify(len(vertices), summary.order)
    return Configuration(
        cubic=f,
        curves=curves,
        matrix=matrix,
        coxeter=cox,
        incidence=inc,
        group=summary,
        closure=clo,
        class_label=row.label,
        classification=row,
        complete=complete,
    )


def configuration_violations(cfg: Configuration, collinearity: bool = True) -> list[str]:
    """Structural properties every configuration of a smooth cubic satisfies.

    Returns human-readable descriptions of the failures; empty means clean.
    """
    out: list[str] = []
    f = cfg.cubic
    ident = linalg.identity(NVARS)
    if cfg.n_s > MAX_CURVES:
        out.append(f"{cfg.n_s} curves exceeds the maximum {MAX_CURVES}")
    for c in cfg.curves:
        r = c.vertex.reflection
        if linear_substitute(f, r) != f:
            out.append(f"{c.label}: reflection does not preserve the cubic")
        if linalg.mat_mul(r, r) != ident:
            out.append(f"{c.label}: reflection does not square to the identity")
        if linalg.rank(linalg.mat_sub(r, ident)) != 1:
            out.append(f"{c.label}: reflection does not fix a hyperplane")
        if linalg.det(r) != -ONE:
            out.append(f"{c.label}: reflection determinant is not -1")
    for i, j in itertools.combinations(range(cfg.n_s), 2):
        a, b = cfg.curves[i], cfg.curves[j]
        try:
            k = groups.pair_order(a.vertex.reflection, b.vertex.reflection)
        except InvariantViolation:
            k = 0
        if k != 3 - cfg.matrix[i][j]:
            out.append(f"{a.label}, {b.label}: reflection product has order {k or '>3'}, expected {3 - cfg.matrix[i][j]}")
    if not incidence_triangle_check(cfg.incidence):
        out.append("incidence graph contains a triangle")
    if collinearity and (m := max_collinear(cfg.vertices)) > 3:
        out.append(f"{m} vertices lie on one line")
    if not cfg.group.character_trivial:
        out.append("some group element does not preserve the cubic")
    if groups.classify(cfg.n_s, cfg.group.order).label != cfg.class_label:
        out.append("class label disagrees with (n_S, order)")
    return out
