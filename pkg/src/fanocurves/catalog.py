"""The ten classified families of cubic threefolds, with pinned samples.

Every family is stored in the coordinates where its reflection group acts by
monomial matrices, so the curve vertices are coordinate points ``e_i`` or
points ``e_i - beta e_j``.  Each family has one pinned sample; the pinned
cubics ship as files in ``data/catalog`` together with ``expected.json``,
which freezes what the full pipeline computed for them.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import linalg
from .errors import InadmissibleParameters
from .field import MU3, ONE, ZERO, FieldElement, fe, format_coeff
from .geometry import ProjectivePoint
from .groups import ROWS_BY_LABEL, ClassRow
from .poly import NVARS, Cubic, Poly, cubic_from_text, cubic_to_text, linear_substitute, restrict_to_plane

X = [Poly.variable(i) for i in range(NVARS)]
x1, x2, x3, x4, x5 = X


def hesse(a: Poly, b: Poly, c: Poly, lam: FieldElement) -> Poly:
    """The plane cubic ``a^3 + b^3 + c^3 - 3 lam a b c``."""
    return a**3 + b**3 + c**3 - (a * b * c).scale(3 * lam)


def _lin(coeffs: Sequence[FieldElement], variables: Sequence[int]) -> Poly:
    out = Poly((), NVARS)
    for c, i in zip(coeffs, variables):
        out = out + X[i].scale(c)
    return out


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # "scalar", "linear" or "cubic"
    variables: tuple[int, ...] = ()
    doc: str = ""


def _lambda_ok(lam: FieldElement, what: str = "lambda") -> None:
    if lam**3 == ONE:
        raise InadmissibleParameters(f"{what}^3 must not be 1 (the Hesse cubic degenerates)")


def _build_trivial(p):
    return x1**2 * x2 + x2**2 * x3 + x3**2 * x4 + x4**2 * x5 + x5**2 * x1


def _build_refl2(p):
    g = p["G"]
    if any(m[0] for m in g.terms):
        raise InadmissibleParameters("G must not involve x1")
    if not g.is_homogeneous(3) or g.is_zero():
        raise InadmissibleParameters("G must be a nonzero cubic form")
    return x1**2 * x2 + g


def _build_g332(p):
    _lambda_ok(p["lam"])
    l = _lin(p["l"], (2, 3, 4))
    return x1**3 + x2**3 + (x1 * x2 * l).scale(3) + hesse(x3, x4, x5, p["lam"])


def _s4_basis() -> list[Poly]:
    s1 = x1 + x2 + x3 + x4
    s2 = x1**2 + x2**2 + x3**2 + x4**2
    s3 = x1**3 + x2**3 + x3**3 + x4**3
    return [s3, s2 * s1, s1**3, s2 * x5, s1**2 * x5, s1 * x5**2, x5**3]


S4_BASIS_NAMES = ("p3", "p2*p1", "p1^3", "p2*x5", "p1^2*x5", "p1*x5^2", "x5^3")


def _build_s4(p):
    out = Poly((), NVARS)
    for c, b in zip(p["c"], _s4_basis()):
        out = out + b.scale(c)
    return out


def _build_s5(p):
    s1 = sum(X[1:], X[0])
    s2 = sum((x**2 for x in X[1:]), X[0] ** 2)
    s3 = sum((x**3 for x in X[1:]), X[0] ** 3)
    return s3 + (s1 * s2).scale(p["lam"]) + (s1**3).scale(p["mu"])


def _build_fermat(p):
    return sum((x**3 for x in X[1:]), X[0] ** 3)


def _build_refl2xrefl2(p):
    _lambda_ok(p["lam"])
    if linalg.rank([p["l1"], p["l2"]]) < 2:
        raise InadmissibleParameters("l1 and l2 must be linearly independent")
    l1 = _lin(p["l1"], (2, 3, 4))
    l2 = _lin(p["l2"], (2, 3, 4))
    return x1**2 * l1 + x2**2 * l2 + hesse(x3, x4, x5, p["lam"])


def _build_g332xrefl2(p):
    l1 = _lin(p["l1"], (3, 4))
    l2 = _lin(p["l2"], (3, 4))
    if l2.is_zero():
        raise InadmissibleParameters("l2 must be nonzero")
    return x1**3 + x2**3 - (x1 * x2 * l1).scale(3 * p["lam"]) + x3**2 * l2 + x4**3 + x5**3


def _build_g332xg332(p):
    a, b = p["a"], p["b"]
    for name, v in (("a", a), ("b", b)):
        if v**3 == -ONE:
            raise InadmissibleParameters(f"{name}^3 must not be -1 (the cubic is singular)")
    return x1**3 + x2**3 + (x1 * x2 * x5).scale(3 * a) + x3**3 + x4**3 + (x3 * x4 * x5).scale(3 * b) + x5**3


def _build_flambda(p):
    _lambda_ok(p["lam"])
    return hesse(x1, x2, x3, p["lam"]) + x4**3 + x5**3


def _e(i: int) -> tuple[FieldElement, ...]:
    return tuple(ONE if k == i else ZERO for k in range(NVARS))


def _diff(i: int, j: int, beta: FieldElement) -> ProjectivePoint:
    return ProjectivePoint(tuple(a - beta * b for a, b in zip(_e(i), _e(j))))


def _twisted_pairs(indices: Sequence[int]) -> list[ProjectivePoint]:
    return [_diff(i, j, b) for i, j in itertools.combinations(indices, 2) for b in MU3]


def _plain_pairs(indices: Sequence[int]) -> list[ProjectivePoint]:
    return [_diff(i, j, ONE) for i, j in itertools.combinations(indices, 2)]


# plane model templates: a basis of the plane fixed by the curve's reflection
# inside its tangent hyperplane, and the ternary cubic F cuts out on it in the
# coordinates (s, t, r) of that basis
S, T, R = (Poly.variable(i, 3) for i in range(3))


@dataclass(frozen=True)
class PlaneTemplate:
    basis: tuple[tuple[FieldElement, ...], ...]
    model: Poly


def _lin3(coeffs: Sequence[FieldElement]) -> Poly:
    return S.scale(coeffs[0]) + T.scale(coeffs[1]) + R.scale(coeffs[2])


def _vec(entries: Mapping[int, FieldElement]) -> tuple[FieldElement, ...]:
    return tuple(fe(entries.get(k, 0)) for k in range(NVARS))


_BETAS = tuple(zip(("1", "w", "w2"), MU3))


def _models_g332(p):
    # x1 = beta l / 2 and x2 = beta^2 l / 2 on the plane
    model = hesse(S, T, R, p["lam"]) + _lin3(p["l"]) ** 3
    out = {}
    for name, beta in _BETAS:
        basis = tuple(_vec({0: beta * c / 2, 1: beta**2 * c / 2, k: 1}) for k, c in zip((2, 3, 4), p["l"]))
        out[f"E[1,2]^{name}"] = PlaneTemplate(basis, model)
    return out


def _models_g332xg332(p):
    a, b = p["a"], p["b"]
    m12 = S**3 + T**3 + (R**3).scale(ONE + a**3) + (S * T * R).scale(3 * b)
    m34 = S**3 + T**3 + (R**3).scale(ONE + b**3) + (S * T * R).scale(3 * a)
    out = {}
    for name, beta in _BETAS:
        out[f"E[1,2]^{name}"] = PlaneTemplate((_vec({2: 1}), _vec({3: 1}), _vec({0: beta * a / 2, 1: beta**2 * a / 2, 4: 1})), m12)
        out[f"E[3,4]^{name}"] = PlaneTemplate((_vec({0: 1}), _vec({1: 1}), _vec({2: beta * b / 2, 3: beta**2 * b / 2, 4: 1})), m34)
    return out


def _models_flambda(p):
    basis = (_vec({0: 1}), _vec({1: 1}), _vec({2: 1}))
    return {f"E[4,5]^{name}": PlaneTemplate(basis, hesse(S, T, R, p["lam"])) for name, _ in _BETAS}


def _models_fermat(p):
    model = S**3 + T**3 + R**3
    out = {}
    for i, j in itertools.combinations(range(5), 2):
        basis = tuple(_vec({k: 1}) for k in range(5) if k not in (i, j))
        for name, _ in _BETAS:
            out[f"E[{i + 1},{j + 1}]^{name}"] = PlaneTemplate(basis, model)
    return out


def _models_refl2(p):
    basis = (_vec({2: 1}), _vec({3: 1}), _vec({4: 1}))
    return {"E[1]": PlaneTemplate(basis, linear_substitute(p["G"], linalg.from_columns(basis)))}


def template_matches(f: Poly, computed_basis, template: PlaneTemplate) -> bool:
    """Same plane, and F restricted to the template basis is the template model."""
    if linalg.rank(list(computed_basis) + list(template.basis)) != 3:
        return False
    return restrict_to_plane(f, template.basis) == template.model


@dataclass(frozen=True)
class FamilySpec:
    id: str
    slug: str
    params: tuple[Param, ...]
    builder: Callable[[Mapping], Poly]
    pinned: Mapping[str, object]
    vertices: Callable[[], list[ProjectivePoint]]
    scan_prime: int = 7
    plane_models: Callable[[Mapping], dict[str, PlaneTemplate]] | None = None
    incidence_graph: str | None = None
    notes: str = ""

    @property
    def row(self) -> ClassRow:
        return ROWS_BY_LABEL[self.id]


FAMILIES: dict[str, FamilySpec] = {
    f.id: f
    for f in (
        FamilySpec(
            "trivial",
            "trivial",
            (),
            _build_trivial,
            {},
            lambda: [],
            notes="Klein cubic x1^2 x2 + x2^2 x3 + x3^2 x4 + x4^2 x5 + x5^2 x1",
        ),
        FamilySpec(
            "[]2",
            "refl2",
            (Param("G", "cubic", (1, 2, 3, 4), "cubic form in x2..x5"),),
            _build_refl2,
            {"G": x2**3 + x3**3 + (x4**3).scale(2) + (x5**3).scale(3) + x2 * x3 * x5 + x3 * x4 * x5},
            lambda: [ProjectivePoint(_e(0))],
            plane_models=_models_refl2,
            notes="x1^2 x2 + G(x2, x3, x4, x5)",
        ),
        FamilySpec(
            "G(3,3,2)",
            "g332",
            (Param("l", "linear", (2, 3, 4), "linear form in x3, x4, x5"), Param("lam", "scalar")),
            _build_g332,
            {"l": (fe(1), fe(2), fe(0)), "lam": fe(0)},
            lambda: _twisted_pairs((0, 1)),
            plane_models=_models_g332,
            notes="x1^3 + x2^3 + 3 x1 x2 l(x3, x4, x5) + x3^3 + x4^3 + x5^3 - 3 lam x3 x4 x5",
        ),
        FamilySpec(
            "S4",
            "s4",
            (Param("c", "linear", (0, 1, 2, 3, 4, 5, 6), "coefficients of " + ", ".join(S4_BASIS_NAMES)),),
            _build_s4,
            {"c": (fe(1), fe(0), fe(1), fe(0), fe(0), fe(1), fe(1))},
            lambda: _plain_pairs((0, 1, 2, 3)),
            notes="combination of the S4-invariant cubics p3, p2 p1, p1^3, p2 x5, p1^2 x5, p1 x5^2, x5^3 with pk = x1^k + ... + x4^k",
        ),
        FamilySpec(
            "S5",
            "s5",
            (Param("lam", "scalar"), Param("mu", "scalar")),
            _build_s5,
            {"lam": fe(1), "mu": fe(0)},
            lambda: _plain_pairs(range(5)),
            incidence_graph="petersen",
            notes="sum xi^3 + lam (sum xi)(sum xi^2) + mu (sum xi)^3",
        ),
        FamilySpec(
            "G(3,3,5)",
            "g335",
            (),
            _build_fermat,
            {},
            lambda: _twisted_pairs(range(5)),
            plane_models=_models_fermat,
            notes="Fermat cubic",
        ),
        FamilySpec(
            "[]2x[]2",
            "refl2xrefl2",
            (
                Param("l1", "linear", (2, 3, 4)),
                Param("l2", "linear", (2, 3, 4)),
                Param("lam", "scalar"),
            ),
            _build_refl2xrefl2,
            {"l1": (fe(1), fe(0), fe(0)), "l2": (fe(0), fe(1), fe(0)), "lam": fe(0)},
            lambda: [ProjectivePoint(_e(0)), ProjectivePoint(_e(1))],
            notes="x1^2 l1 + x2^2 l2 + x3^3 + x4^3 + x5^3 - 3 lam x3 x4 x5",
        ),
        FamilySpec(
            "G(3,3,2)x[]2",
            "g332xrefl2",
            (
                Param("lam", "scalar"),
                Param("l1", "linear", (3, 4)),
                Param("l2", "linear", (3, 4)),
            ),
            _build_g332xrefl2,
            {"lam": fe(1), "l1": (fe(1), fe(2)), "l2": (fe(-1), fe(1))},
            lambda: _twisted_pairs((0, 1)) + [ProjectivePoint(_e(2))],
            incidence_graph="d4",
            notes="x1^3 + x2^3 - 3 lam x1 x2 l1(x4, x5) + x3^2 l2(x4, x5) + x4^3 + x5^3",
        ),
        FamilySpec(
            "G(3,3,2)xG(3,3,2)",
            "g332xg332",
            (Param("a", "scalar"), Param("b", "scalar")),
            _build_g332xg332,
            {"a": fe(1), "b": fe(2)},
            lambda: _twisted_pairs((0, 1)) + _twisted_pairs((2, 3)),
            plane_models=_models_g332xg332,
            notes="x1^3 + x2^3 + 3a x1 x2 x5 + x3^3 + x4^3 + 3b x3 x4 x5 + x5^3",
        ),
        FamilySpec(
            "G(3,3,3)xG(3,3,2)",
            "g333xg332",
            (Param("lam", "scalar"),),
            _build_flambda,
            {"lam": fe(2)},
            lambda: _twisted_pairs((0, 1, 2)) + _twisted_pairs((3, 4)),
            scan_prime=13,
            plane_models=_models_flambda,
            notes="x1^3 + x2^3 + x3^3 - 3 lam x1 x2 x3 + x4^3 + x5^3",
        ),
    )
}

_BY_SLUG = {f.slug: f for f in FAMILIES.values()}


def family(id_or_slug: str) -> FamilySpec:
    if id_or_slug in FAMILIES:
        return FAMILIES[id_or_slug]
    if id_or_slug in _BY_SLUG:
        return _BY_SLUG[id_or_slug]
    raise KeyError(f"unknown family {id_or_slug!r}; known: {', '.join(FAMILIES)}")


def param_str(value) -> str:
    """Parameter value in the syntax ``catalog instantiate --param`` accepts."""
    if isinstance(value, Poly):
        return value.to_str()
    if isinstance(value, tuple):
        return ",".join(format_coeff(c) for c in value)
    return format_coeff(value)


def _coerce_param(param: Param, value):
    if param.kind == "scalar":
        return fe(value)
    if param.kind == "linear":
        vals = tuple(fe(v) for v in value)
        if len(vals) != len(param.variables):
            raise InadmissibleParameters(f"{param.name} needs {len(param.variables)} coefficients, got {len(vals)}")
        return vals
    if not isinstance(value, Poly):
        raise InadmissibleParameters(f"{param.name} must be a polynomial")
    return value


def resolve_params(fam: FamilySpec, params: Mapping | None = None) -> dict:
    params = dict(params or {})
    unknown = set(params) - {p.name for p in fam.params}
    if unknown:
        raise InadmissibleParameters(f"unknown parameters for {fam.id}: {', '.join(sorted(unknown))}")
    out = {}
    for p in fam.params:
        out[p.name] = _coerce_param(p, params.get(p.name, fam.pinned[p.name]))
    return out


def instantiate(id_or_slug: str, params: Mapping | None = None, **kwargs) -> Cubic:
    """Cubic of the family with the given parameters; missing ones take the
    pinned sample values."""
    fam = family(id_or_slug)
    merged = dict(params or {})
    merged.update(kwargs)
    resolved = resolve_params(fam, merged)
    form = fam.builder(resolved)
    try:
        return Cubic(form)
    except ValueError as exc:
        raise InadmissibleParameters(str(exc)) from None


def pinned(id_or_slug: str) -> Cubic:
    return instantiate(id_or_slug)


@dataclass
class ExpectedConfiguration:
    id: str
    n_s: int
    order: int
    vertices: list[ProjectivePoint]
    plane_models: dict[str, PlaneTemplate] = field(default_factory=dict)
    incidence_graph: str | None = None

    def intersection(self, label_a: str, label_b: str) -> int:
        """Intersection rule of all families in their normal coordinates:
        distinct curves meet iff their vertex index sets are disjoint."""
        if label_a == label_b:
            return -3
        return 0 if set(label_indices(label_a)) & set(label_indices(label_b)) else 1


def label_indices(label: str) -> tuple[int, ...]:
    inner = label[label.index("[") + 1 : label.index("]")]
    return tuple(int(t) for t in inner.split(","))


def expected_configuration(id_or_slug: str, params: Mapping | None = None) -> ExpectedConfiguration:
    fam = family(id_or_slug)
    resolved = resolve_params(fam, params)
    models = fam.plane_models(resolved) if fam.plane_models else {}
    return ExpectedConfiguration(fam.id, fam.row.n_s, fam.row.order, fam.vertices(), models, fam.incidence_graph)


# --- shipped data -----------------------------------------------------------


def cubic_digest(f: Poly) -> str:
    """Content hash of the canonical serialization of a cubic."""
    return "sha256:" + hashlib.sha256(cubic_to_text(f).encode()).hexdigest()


def _data_dir():
    return resources.files("fanocurves") / "data" / "catalog"


def data_file(id_or_slug: str):
    return _data_dir() / f"{family(id_or_slug).slug}.cubic"


def load_pinned(id_or_slug: str) -> Cubic:
    return cubic_from_text(data_file(id_or_slug).read_text())


@lru_cache(maxsize=None)
def frozen_expected() -> dict:
    return json.loads((_data_dir() / "expected.json").read_text())


def pinned_digests() -> dict[str, str]:
    return {entry["digest"]: fid for fid, entry in frozen_expected().items()}


def is_pinned_instance(f: Poly) -> str | None:
    """Family id if ``f`` is exactly one of the shipped pinned samples."""
    return pinned_digests().get(cubic_digest(f))
