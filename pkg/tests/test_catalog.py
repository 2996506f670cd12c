import pytest

from conftest import X
from fanocurves import catalog, discovery, geometry, groups
from fanocurves.errors import InadmissibleParameters
from fanocurves.field import OMEGA, fe
from fanocurves.poly import cubic_to_text

x1, x2, x3, x4, x5 = X
FAMILY_IDS = list(catalog.FAMILIES)


def test_ten_families_match_table_rows():
    assert sorted(FAMILY_IDS) == sorted(r.label for r in groups.CLASS_ROWS)
    assert len({f.slug for f in catalog.FAMILIES.values()}) == 10


def test_instantiate_flambda():
    f = catalog.instantiate("G(3,3,3)xG(3,3,2)", lam=2)
    assert f == x1**3 + x2**3 + x3**3 - (x1 * x2 * x3).scale(6) + x4**3 + x5**3


def test_instantiate_fermat():
    assert catalog.instantiate("G(3,3,5)") == sum((x**3 for x in X[1:]), X[0] ** 3)


def test_instantiate_by_slug():
    assert catalog.instantiate("g333xg332") == catalog.instantiate("G(3,3,3)xG(3,3,2)")


@pytest.mark.parametrize("lam", [1, OMEGA, OMEGA**2])
def test_hesse_parameter_rejected(lam):
    for fid in ("G(3,3,3)xG(3,3,2)", "G(3,3,2)", "[]2x[]2"):
        with pytest.raises(InadmissibleParameters):
            catalog.instantiate(fid, lam=lam)


def test_g332_squared_parameters_rejected():
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("G(3,3,2)xG(3,3,2)", a=1, b=-1)
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("G(3,3,2)xG(3,3,2)", a=-OMEGA, b=2)


def test_dependent_linear_forms_rejected():
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("[]2x[]2", l1=(1, 2, 0), l2=(2, 4, 0))


def test_refl2_requires_g_without_x1():
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("[]2", G=x1 * x2 * x3)


def test_unknown_parameter_and_family():
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("S5", nu=3)
    with pytest.raises(KeyError):
        catalog.instantiate("G(4,4,4)")
    with pytest.raises(InadmissibleParameters):
        catalog.instantiate("G(3,3,2)", l=(1, 2))


def test_expected_configuration_examples():
    e = catalog.expected_configuration("G(3,3,5)")
    assert (e.n_s, e.order) == (30, 9720)
    assert len(e.vertices) == 30
    e = catalog.expected_configuration("S5")
    assert (e.n_s, e.order, e.incidence_graph) == (10, 120, "petersen")
    e = catalog.expected_configuration("G(3,3,2)x[]2")
    assert (e.n_s, e.order, e.incidence_graph) == (4, 12, "d4")


def test_intersection_rule():
    e = catalog.expected_configuration("G(3,3,5)")
    assert e.intersection("E[1,2]^1", "E[3,4]^w") == 1
    assert e.intersection("E[1,2]^1", "E[1,2]^w") == 0
    assert e.intersection("E[1,2]^1", "E[2,5]^1") == 0
    assert e.intersection("E[1,2]^1", "E[1,2]^1") == -3


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_pinned_file_matches_builder(fid):
    assert catalog.load_pinned(fid) == catalog.pinned(fid)
    assert catalog.data_file(fid).read_text() == cubic_to_text(catalog.pinned(fid))
    assert catalog.is_pinned_instance(catalog.pinned(fid)) == fid


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_pinned_sample_scan(fid):
    fam = catalog.FAMILIES[fid]
    assert geometry.singular_scan(catalog.pinned(fid), fam.scan_prime) is None


def test_only_flambda_needs_another_scan_prime():
    assert {f.id for f in catalog.FAMILIES.values() if f.scan_prime != 7} == {"G(3,3,3)xG(3,3,2)"}


def test_pipeline_reproduces_table_row(catalog_config):
    fid, cfg = catalog_config
    exp = catalog.expected_configuration(fid)
    assert (cfg.n_s, cfg.group.order, cfg.class_label) == (exp.n_s, exp.order, fid)
    assert cfg.complete


def test_vertices_match_family_template(catalog_config):
    fid, cfg = catalog_config
    assert {v.point for v in cfg.vertices} == set(catalog.expected_configuration(fid).vertices)


def test_plane_models_match_templates(catalog_config):
    fid, cfg = catalog_config
    exp = catalog.expected_configuration(fid)
    for label, template in exp.plane_models.items():
        v = cfg.curve(label).vertex
        assert catalog.template_matches(cfg.cubic, geometry.plane_basis(v), template), label


def test_template_matches_rejects_wrong_plane(flambda_config):
    templates = catalog.expected_configuration("G(3,3,3)xG(3,3,2)").plane_models
    wrong = geometry.plane_basis(flambda_config.curve("E[1,2]^1").vertex)
    assert not catalog.template_matches(flambda_config.cubic, wrong, templates["E[4,5]^1"])


def test_g332_squared_models_for_other_parameters():
    params = {"a": fe(3), "b": OMEGA - 2}
    f = catalog.instantiate("G(3,3,2)xG(3,3,2)", params)
    cfg = discovery.analyze(f)
    for label, template in catalog.expected_configuration("G(3,3,2)xG(3,3,2)", params).plane_models.items():
        assert catalog.template_matches(f, geometry.plane_basis(cfg.curve(label).vertex), template)


def test_frozen_expectations(catalog_config):
    fid, cfg = catalog_config
    frozen = catalog.frozen_expected()[fid]
    assert frozen["n_S"] == cfg.n_s
    assert frozen["order"] == cfg.group.order
    assert frozen["reflection_count"] == cfg.group.reflection_count
    assert frozen["intersection_matrix"] == cfg.matrix
    assert [c["label"] for c in frozen["curves"]] == [c.label for c in cfg.curves]
    assert [c["vertex"] for c in frozen["curves"]] == [c.vertex.point.to_strings() for c in cfg.curves]
    assert [c["plane_model"] for c in frozen["curves"]] == [c.plane_model.to_str(("s", "t", "r")) for c in cfg.curves]
    assert frozen["digest"] == catalog.cubic_digest(cfg.cubic)


def test_other_family_members_classify():
    cases = [
        ("G(3,3,3)xG(3,3,2)", {"lam": 3}),
        ("G(3,3,2)xG(3,3,2)", {"a": 2, "b": 1}),
        ("S5", {"lam": 2, "mu": 1}),
    ]
    for fid, params in cases:
        cfg = discovery.analyze(catalog.instantiate(fid, params))
        assert cfg.class_label == fid, (fid, params)


def test_param_str_roundtrip():
    fam = catalog.FAMILIES["G(3,3,2)"]
    assert catalog.param_str(fam.pinned["l"]) == "1,2,0"
    assert catalog.param_str(fe(2)) == "2"
