from fractions import Fraction

import pytest

from fanocurves.errors import DomainError, ParseError, ReductionError
from fanocurves.field import (
    MU3,
    OMEGA,
    OMEGA2,
    ONE,
    ZERO,
    FieldElement,
    cube_root_of_unity,
    fe,
    format_coeff,
    is_prime,
    parse_coeff,
    reduce_mod,
)

w = OMEGA


def test_omega_cubed_is_one():
    assert w * w * w == ONE


def test_minimal_polynomial_identity():
    assert (1 + w) + w**2 == ZERO
    assert w**2 == FieldElement(-1, -1) == OMEGA2


def test_inverse_of_omega():
    assert w.inv() == OMEGA2
    assert w * OMEGA2 == ONE


def test_inverse_of_zero_raises():
    with pytest.raises(DomainError):
        ZERO.inv()
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@pytest.mark.parametrize(
    "x, expected",
    [
        (w, FieldElement(-1, -1)),
        (fe(Fraction(3, 2)), fe(Fraction(3, 2))),
        (FieldElement(1, 2), FieldElement(-1, -2)),
    ],
)
def test_conj(x, expected):
    assert x.conj() == expected


@pytest.mark.parametrize("x, n", [(1 + w, 1), (fe(2), 4), (1 - w, 3), (ZERO, 0)])
def test_norm(x, n):
    assert x.norm() == n


def test_norm_is_rational_type():
    assert isinstance(FieldElement(Fraction(1, 2), 1).norm(), Fraction)


def test_reduce_mod_omega():
    assert cube_root_of_unity(7) == 2
    assert reduce_mod(w, 7) == 2


def test_reduce_mod_half():
    assert reduce_mod(Fraction(1, 2), 7) == 4


def test_reduce_mod_bad_denominator():
    with pytest.raises(ReductionError):
        reduce_mod(Fraction(1, 7), 7)


@pytest.mark.parametrize("p", [5, 11, 9, 1])
def test_reduce_mod_rejects_bad_primes(p):
    with pytest.raises(ReductionError):
        reduce_mod(ONE, p)


@pytest.mark.parametrize("p", [7, 13, 19, 31, 37, 43, 97])
def test_cube_root_is_nontrivial(p):
    r = cube_root_of_unity(p)
    assert r != 1 and pow(r, 3, p) == 1
    assert all(pow(s, 3, p) != 1 for s in range(2, r))


def test_mu3_is_the_group_of_cube_roots():
    assert {b**3 for b in MU3} == {ONE}
    assert len(set(MU3)) == 3


def test_canonical_equality_and_hash():
    x = FieldElement(Fraction(2, 4), Fraction(-6, 12))
    y = FieldElement(Fraction(1, 2), Fraction(-1, 2))
    assert x == y and hash(x) == hash(y)
    assert fe(3) == 3 and hash(fe(3)) == hash(3)
    assert fe(Fraction(1, 3)) == Fraction(1, 3)
    assert x.integer_parts() == (1, -1, 2)


@pytest.mark.parametrize(
    "text, value",
    [
        ("1", FieldElement(1)),
        ("-w", FieldElement(0, -1)),
        ("w", OMEGA),
        ("1/2+1/3w", FieldElement(Fraction(1, 2), Fraction(1, 3))),
        ("-3/4-w", FieldElement(Fraction(-3, 4), -1)),
        ("2w", FieldElement(0, 2)),
        ("0", ZERO),
    ],
)
def test_parse_coeff(text, value):
    assert parse_coeff(text) == value


@pytest.mark.parametrize("text", ["1/0", "", "x", "1/2/3", "w+w", "1 + w"])
def test_parse_coeff_rejects(text):
    with pytest.raises(ParseError):
        parse_coeff(text)


@pytest.mark.parametrize("x", [ZERO, ONE, OMEGA, OMEGA2, FieldElement(Fraction(-5, 7), Fraction(2, 3)), fe(-1)])
def test_format_parse_roundtrip(x):
    assert parse_coeff(format_coeff(x)) == x


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
