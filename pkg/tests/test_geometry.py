import itertools

import pytest

from conftest import X, f_lambda, fermat
from fanocurves import catalog, geometry, linalg
from fanocurves.errors import GeometryError, LineInCubicError, SingularPointError
from fanocurves.field import MU3, OMEGA, ONE, ZERO, fe
from fanocurves.geometry import LinearFunctional, NotAVertex, ProjectivePoint, VertexRecord
from fanocurves.poly import Poly, linear_substitute

x1, x2, x3, x4, x5 = X
S, T, R = (Poly.variable(i, 3) for i in range(3))
REFL2 = catalog.instantiate("[]2")


def P(*c):
    return ProjectivePoint(tuple(fe(v) for v in c))


def diag(*d):
    return linalg.matrix([[d[i] if i == j else 0 for j in range(5)] for i in range(5)])


def test_projective_point_normalization():
    assert P(2, -2, 0, 0, 0) == P(1, -1, 0, 0, 0)
    assert P(0, OMEGA, 1, 0, 0).coords[1] == ONE
    with pytest.raises(GeometryError):
        P(0, 0, 0, 0, 0)


def test_tangent_functional_examples():
    assert geometry.tangent_functional(fermat(), P(1, -1, 0, 0, 0)).coeffs == (1, 1, 0, 0, 0)
    assert geometry.tangent_functional(REFL2, P(1, 0, 0, 0, 0)).coeffs == (0, 1, 0, 0, 0)


def test_tangent_vanishes_at_point():
    p = P(1, -1, 0, 0, 0)
    assert geometry.tangent_functional(fermat(), p)(p.coords) == 0


def test_tangent_singular_point():
    with pytest.raises(SingularPointError):
        geometry.tangent_functional(x1**3 + x2**3 + x3**3, P(0, 0, 0, 1, 0))


def test_line_in_cubic_examples():
    f = fermat()
    assert geometry.line_in_cubic(f, P(1, -1, 0, 0, 0), P(0, 0, 1, -1, 0))
    assert not geometry.line_in_cubic(f, P(1, -1, 0, 0, 0), P(1, 0, -1, 0, 0))
    assert not geometry.line_in_cubic(f, P(1, 0, 0, 0, 0), P(0, 1, 0, 0, 0))


def test_vertex_of_refl2_family():
    rec = geometry.cone_vertex_test(REFL2, P(1, 0, 0, 0, 0))
    assert isinstance(rec, VertexRecord)
    assert rec.reflection == diag(-1, 1, 1, 1, 1)
    assert rec.sigma_star == diag(1, -1, -1, -1, -1)


def test_fermat_vertex_reflection_is_swap():
    p = P(1, -1, 0, 0, 0)
    rec = geometry.cone_vertex_test(fermat(), p)
    swap = linalg.matrix([[0, 1, 0, 0, 0], [1, 0, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    assert rec.reflection == swap
    assert linalg.mat_mul(swap, swap) == linalg.identity(5)
    assert geometry.apply(rec.reflection, p) == p
    assert linalg.mat_vec(rec.reflection, p.coords) == tuple(-c for c in p.coords)
    assert rec.fixed_functional.coeffs == (fe(1) / 2, -fe(1) / 2, 0, 0, 0)


def test_fermat_non_vertex():
    p = P(1, -1, 1, -1, 0)
    assert fermat().evaluate(p.coords) == 0
    res = geometry.cone_vertex_test(fermat(), p)
    assert isinstance(res, NotAVertex) and not res
    assert not res.remainder.is_zero()
    assert not geometry.is_vertex(fermat(), p)


def test_vertex_test_needs_point_on_cubic():
    with pytest.raises(GeometryError):
        geometry.cone_vertex_test(fermat(), P(1, 0, 0, 0, 0))


def check_record(f, rec):
    ident = linalg.identity(5)
    r = rec.reflection
    assert f.evaluate(rec.point.coords) == 0
    assert rec.tangent(rec.point.coords) == 0
    assert rec.fixed_functional(rec.point.coords) == 1
    assert linalg.mat_mul(r, r) == ident
    assert linalg.det(r) == -1
    assert linalg.rank(linalg.mat_sub(r, ident)) == 1
    assert linalg.mat_vec(r, rec.point.coords) == tuple(-c for c in rec.point.coords)
    assert linear_substitute(f, r) == f
    assert rec.sigma_star == linalg.mat_scale(-1, r)
    # closed form v - 2 phi(v) p
    closed = linalg.mat_sub(ident, linalg.mat_scale(2, linalg.outer(rec.point.coords, rec.fixed_functional.coeffs)))
    assert r == closed
    # sigma* has eigenvalue +1 exactly on the line through p
    fixed = linalg.nullspace(linalg.mat_sub(rec.sigma_star, ident), 5)
    assert len(fixed) == 1 and ProjectivePoint(fixed[0]) == rec.point


def test_vertex_record_invariants(catalog_config):
    fid, cfg = catalog_config
    for rec in cfg.vertices:
        check_record(cfg.cubic, rec)


@pytest.mark.parametrize("order", list(itertools.permutations(range(5)))[::17])
def test_vertex_test_independent_of_completion(order):
    f = f_lambda()
    for p in (P(1, -1, 0, 0, 0), P(0, 0, 0, 1, -OMEGA), P(0, 1, -OMEGA**2, 0, 0)):
        base = geometry.cone_vertex_test(f, p)
        other = geometry.cone_vertex_test(f, p, completion_order=order)
        assert other.fixed_functional.normalized() == base.fixed_functional.normalized()
        assert other.reflection == base.reflection


def test_third_vertex_examples():
    f = fermat()
    v1 = geometry.cone_vertex_test(f, P(1, -1, 0, 0, 0))
    v2 = geometry.cone_vertex_test(f, P(1, 0, -1, 0, 0))
    assert geometry.third_vertex(f, v1, v2) == P(0, 1, -1, 0, 0)
    w1 = geometry.cone_vertex_test(f, P(1, -OMEGA, 0, 0, 0))
    q = geometry.third_vertex(f, w1, v2)
    assert q.support() == (1, 2) and -q[2] in MU3
    assert geometry.is_vertex(f, q)


def test_third_vertex_line_in_cubic():
    f = fermat()
    v1 = geometry.cone_vertex_test(f, P(1, -1, 0, 0, 0))
    v2 = geometry.cone_vertex_test(f, P(0, 0, 1, -1, 0))
    with pytest.raises(LineInCubicError):
        geometry.third_vertex(f, v1, v2)


def test_third_vertex_symmetric(fermat_config):
    f = fermat_config.cubic
    vs = fermat_config.vertices
    for a, b in itertools.combinations(vs[:12], 2):
        if geometry.line_in_cubic(f, a.point, b.point):
            continue
        assert geometry.third_vertex(f, a, b) == geometry.third_vertex(f, b, a)


def test_plane_model_fermat():
    rec = geometry.cone_vertex_test(fermat(), P(1, -1, 0, 0, 0))
    assert geometry.plane_model(fermat(), rec) == S**3 + T**3 + R**3


def test_plane_model_g332_matches_template():
    fam = catalog.FAMILIES["G(3,3,2)"]
    f = catalog.pinned(fam.id)
    templates = catalog.expected_configuration(fam.id).plane_models
    rec = geometry.cone_vertex_test(f, P(1, -1, 0, 0, 0))
    assert catalog.template_matches(f, geometry.plane_basis(rec), templates["E[1,2]^1"])


def test_plane_model_flambda_is_hesse():
    f = f_lambda(2)
    rec = geometry.cone_vertex_test(f, P(0, 0, 0, 1, -1))
    assert geometry.plane_model(f, rec) == S**3 + T**3 + R**3 - (S * T * R).scale(6)


def test_plane_basis_spans_fixed_plane(fermat_config):
    for rec in fermat_config.vertices:
        basis = geometry.plane_basis(rec)
        assert linalg.rank(basis) == 3
        for u in basis:
            assert rec.tangent(u) == 0 and rec.fixed_functional(u) == 0


def test_singular_scan_fermat_clean():
    assert geometry.singular_scan(fermat(), 7) is None


def test_singular_scan_triple_hyperplane():
    witness = geometry.singular_scan(Poly({(3, 0, 0, 0, 0): 1}), 7)
    assert witness is not None
    assert geometry.format_witness(witness) == ["0", "1", "0", "0", "0"]


def test_singular_scan_degenerate_hesse():
    assert geometry.singular_scan(x1**3 + x2**3 + x3**3 - (x1 * x2 * x3).scale(3) + x4**3 + x5**3, 7) is not None


def test_singular_scan_extension_field():
    assert geometry.singular_scan(fermat(), 7, k=2) is None
    assert geometry.singular_scan(x1**3 + x2**3 + x3**3, 7, k=2) is not None


def test_singular_scan_flags_bad_reduction():
    # 2^3 = 8 = 1 mod 7, so F_2 degenerates mod 7 though it is smooth over Q(w)
    assert geometry.singular_scan(f_lambda(2), 7) is not None
    assert geometry.singular_scan(f_lambda(2), 13) is None


def test_linear_functional_rejects_zero():
    with pytest.raises(GeometryError):
        LinearFunctional((ZERO,) * 5)
