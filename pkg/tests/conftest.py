import pytest

from fanocurves import acceptance, catalog
from fanocurves.poly import Cubic, Poly

X = [Poly.variable(i) for i in range(5)]


def fermat() -> Cubic:
    return catalog.instantiate("G(3,3,5)")


def f_lambda(lam=2) -> Cubic:
    return catalog.instantiate("G(3,3,3)xG(3,3,2)", lam=lam)


@pytest.fixture(scope="session")
def fermat_config():
    return acceptance.configuration("G(3,3,5)")


@pytest.fixture(scope="session")
def flambda_config():
    return acceptance.configuration("G(3,3,3)xG(3,3,2)")


@pytest.fixture(scope="session")
def s5_config():
    return acceptance.configuration("S5")


@pytest.fixture(scope="session", params=list(catalog.FAMILIES))
def catalog_config(request):
    return request.param, acceptance.configuration(request.param)
