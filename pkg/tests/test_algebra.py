from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cmstickel.algebra import (Character, FiniteAbelianGroup, GroupRingElement, NotRational,
                               character_value, cyclotomic_field, cyclotomic_polynomial,
                               from_character_values, idempotent, is_nonzerodivisor,
                               minus_project, multiply, norm_element, sharp)

from conftest import group_and_elements


def test_group_basics():
    G = FiniteAbelianGroup([2, 4])
    assert G.order == 8 and G.exponent == 4
    assert G.elements[0] == (0, 0) and G.elements[1] == (0, 1)
    assert G.mul(G.index((1, 3)), G.index((1, 1))) == 0
    assert G.element_order(G.index((0, 2))) == 2
    assert len(G.subgroup([G.index((0, 1))])) == 4
    with pytest.raises(ValueError):
        FiniteAbelianGroup([4, 2])


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_cyclotomic_arithmetic():
    F = cyclotomic_field(12)
    z = F.zeta_power(1)
    acc = F.scalar(1)
    for _ in range(12):
        acc = acc * z
    assert acc == F.scalar(1)
    x = z + F.scalar(Fraction(1, 3))
    assert x * x.inverse() == F.scalar(1)
    assert (z * z * z).is_rational() is False
    assert (F.zeta_power(6)).to_rational() == -1


def test_group_ring_element_ops(cyclic4):
    G = cyclic4
    x = GroupRingElement.basis(G, 1)
    one = GroupRingElement.one(G)
    assert x * x * x * x == one
    assert sharp(x) == GroupRingElement.basis(G, 3)
    a = GroupRingElement(G, [1, 2, 0, Fraction(1, 2)])
    assert a.augmentation() == Fraction(7, 2)
    assert not a.is_integral() and a.denominator() == 2
    assert GroupRingElement.from_json(G, a.to_json()) == a
    assert a.to_json() == ["1", "2", "0", "1/2"]


def test_character_orthogonality():
    for inv in [(4,), (2, 2), (2, 6), (3, 3)]:
        G = FiniteAbelianGroup(inv)
        chars = G.characters()
        F = cyclotomic_field(G.exponent)
        for chi in chars:
            for psi in chars:
                s = F.scalar(0)
                for i in range(G.order):
                    s = s + chi.value(i) * psi.value(G.inverses[i])
                assert s == F.scalar(G.order if chi == psi else 0)


@given(group_and_elements(1))
def test_fourier_round_trip(data):
    G, (a,) = data
    vals = [character_value(a, chi) for chi in G.characters()]
    assert from_character_values(G, vals) == a


@given(group_and_elements(2))
def test_multiplicativity(data):
    G, (a, b) = data
    for chi in G.characters():
        assert character_value(multiply(a, b), chi) == character_value(a, chi) * character_value(b, chi)


@given(group_and_elements(2))
def test_sharp_is_involutive_automorphism(data):
    G, (a, b) = data
    assert sharp(sharp(a)) == a
    assert sharp(a * b) == sharp(a) * sharp(b)
    assert sharp(a + b) == sharp(a) + sharp(b)
    for chi in G.characters():
        assert character_value(sharp(a), chi) == character_value(a, chi.inverse())


@given(group_and_elements(2))
def test_ring_axioms(data):
    G, (a, b) = data
    assert a * b == b * a
    assert a * (b + a) == a * b + a * a
    assert a - a == GroupRingElement.zero(G)


def test_idempotents_and_minus():
    G = FiniteAbelianGroup([4])
    chars = G.characters()
    total = GroupRingElement.zero(G)
    for chi in chars:
        total = total + idempotent(chi) if chi.exponents[0] in (0, 2) else total
    # rational idempotents: trivial + quadratic character
    assert total * total == total
    rho = 2
    e_minus = minus_project(GroupRingElement.one(G), rho)
    assert e_minus * e_minus == e_minus
    x = GroupRingElement(G, [1, 5, -2, 7])
    y = GroupRingElement(G, [0, 1, 3, 1])
    assert minus_project(x * y, rho) == minus_project(x, rho) * y


def test_non_rational_values_rejected():
    G = FiniteAbelianGroup([4])
    F = cyclotomic_field(4)
    vals = [F.zeta_power(1)] + [F.scalar(0)] * 3
    with pytest.raises(NotRational):
        from_character_values(G, vals)


def test_norm_element_and_nonzerodivisor():
    G = FiniteAbelianGroup([2, 2])
    N = norm_element(G, [1])
    assert N == GroupRingElement.from_dict(G, {0: 1, 1: 1})
    assert not is_nonzerodivisor(N)
    assert is_nonzerodivisor(GroupRingElement.one(G) * 3)


def test_character_logs():
    G = FiniteAbelianGroup([2, 4])
    chi = Character(G, (2, 1))
    assert chi.log(G.index((1, 1))) == 3
    assert chi.inverse().exponents == (2, 3)
