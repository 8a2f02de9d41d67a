"""Dirichlet L-values at s = 0 and equivariant Stickelberger elements."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from math import gcd, lcm

from .algebra import (CyclotomicNumber, GroupRingElement, cyclotomic_field,
                      from_character_values, from_cyclic_values, multiply)
from .fields import AbelianFieldQ, DirichletCharacterData, check_T_admissible


class StickelbergerError(ValueError):
    pass


class NonIntegralTheta(AssertionError):
    """theta came out non-integral under an admissible T; always a bug."""


@lru_cache(maxsize=4096)
def _b1(K: AbelianFieldQ, exps: tuple[int, ...]) -> CyclotomicNumber:
    chi = K.character_data(_char(K, exps))
    F = cyclotomic_field(chi.order_e)
    f = chi.conductor
    if f == 1:
        return F.scalar(Fraction(1, 2))
    acc = [Fraction(0)] * chi.order_e
    for a in range(1, f):
        k = chi.log_at(a)
        if k is not None:
            acc[k] += a
    return F.reduce(acc) * Fraction(1, f)


def _char(K, exps):
    from .algebra import Character
    return Character(K.group, exps)


def bernoulli_b1(chi: DirichletCharacterData) -> CyclotomicNumber:
    """B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a; 1/2 for the trivial character."""
    return _b1(chi.field, chi.character.exponents)


def l_value_at_zero(chi: DirichletCharacterData) -> CyclotomicNumber:
    """L(0, chi) for the primitive L-function; zeta(0) = -1/2."""
    return -bernoulli_b1(chi)


def euler_factor_S(chi: DirichletCharacterData, S: Iterable[int]) -> CyclotomicNumber:
    F = cyclotomic_field(chi.order_e)
    out = F.scalar(1)
    for v in S:
        if chi.conductor % v:
            out = out * (1 - chi.value_at(v))
    return out


def smoothing_factor_T(chi: DirichletCharacterData, T: Iterable[int]) -> CyclotomicNumber:
    F = cyclotomic_field(chi.order_e)
    out = F.scalar(1)
    for v in T:
        out = out * (1 - chi.value_at(v) * v)
    return out


def l_value_ST(chi: DirichletCharacterData, S: Iterable[int], T: Iterable[int]) -> CyclotomicNumber:
    S, T = set(S), set(T)
    if S & T:
        raise StickelbergerError(f"S and T intersect: {sorted(S & T)}")
    return euler_factor_S(chi, S) * smoothing_factor_T(chi, T) * l_value_at_zero(chi)


def theta_ST(F: AbelianFieldQ, S: Iterable[int], T: Iterable[int] = (), *,
             check_integrality: bool = True) -> GroupRingElement:
    """theta^T_{F,S}: chi-component L_{S,T}(0, chi^{-1}).

    Integrality is asserted whenever T is admissible for F.
    """
    S, T = frozenset(S), frozenset(T)
    missing = set(F.ramified_primes) - S
    if missing:
        raise StickelbergerError(f"S must contain the ramified primes {sorted(missing)}")
    if S & T:
        raise StickelbergerError(f"S and T intersect: {sorted(S & T)}")
    theta = _theta_group_ring(F, S, T)
    if check_integrality and T and check_T_admissible(F, T) and not theta.is_integral():
        raise NonIntegralTheta(f"theta^T_(F,S) not integral for {F}, S={sorted(S)}, T={sorted(T)}")
    return theta


@lru_cache(maxsize=4096)
def _b1_cyclic(K: AbelianFieldQ, exps: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """B_{1,chi} as (vector in Z[x]/(x^e - 1), denominator)."""
    chi = K.character_data(_char(K, exps))
    e = K.group.exponent
    f = chi.conductor
    acc = [0] * e
    if f == 1:
        acc[0] = 1
        return tuple(acc), 2
    for a in range(1, f):
        k = chi.log_at(a)
        if k is not None:
            acc[k] += a
    return tuple(acc), f


def _times_one_minus(vec: list[int], k: int, c: int) -> list[int]:
    """vec * (1 - c x^k) in Z[x]/(x^e - 1)."""
    k %= len(vec)
    rot = vec[-k:] + vec[:-k] if k else vec
    return [a - c * b for a, b in zip(vec, rot)]


def _theta_cyclic(F: AbelianFieldQ, S: frozenset, T: frozenset) -> GroupRingElement:
    """Integer-arithmetic evaluation of the character components of theta^T_{F,S}."""
    vecs, dens = [], []
    for chi in F.characters:
        psi = chi.inverse()
        b, d = _b1_cyclic(F, psi.character.exponents)
        vec = [-x for x in b]
        for v in S:
            k = psi.log_at(v)
            if k is not None:
                vec = _times_one_minus(vec, k, 1)
        for v in T:
            k = psi.log_at(v)
            if k is not None:
                vec = _times_one_minus(vec, k, v)
        vecs.append(vec)
        dens.append(d)
    den = lcm(*dens)
    vecs = [[x * (den // d) for x in vec] for vec, d in zip(vecs, dens)]
    return from_cyclic_values(F.group, vecs, den)


def theta_ST_characters(F: AbelianFieldQ, S: Iterable[int], T: Iterable[int] = ()) -> GroupRingElement:
    """theta^T_{F,S} from its character components (integer cyclotomic arithmetic)."""
    return _theta_cyclic(F, frozenset(S), frozenset(T))


@lru_cache(maxsize=1024)
def _theta_ram_numerators(F: AbelianFieldQ) -> tuple[tuple[int, ...], int]:
    """theta_{F,S_ram} = sum_{a mod n} (1/2 - a/n) sigma_a^{-1}, as numerators over 2n."""
    G = F.group
    n = F.n
    if n == 1:
        return (-1,), 2
    acc = [0] * G.order
    for a in range(1, n):
        if gcd(a, n) == 1:
            acc[G.inverses[F.class_of(a)]] += n - 2 * a
    return tuple(acc), 2 * n


def _theta_group_ring(F: AbelianFieldQ, S: frozenset, T: frozenset) -> GroupRingElement:
    """Partial zeta values at s = 0 times the Euler factors 1 - N(v) F_v^{-1}."""
    G = F.group
    vec, den = _theta_ram_numerators(F)
    vec = list(vec)
    ram = set(F.ramified_primes)
    factors = [(v, 1) for v in sorted(S - ram)] + [(v, v) for v in sorted(T)]
    for v, c in factors:
        row = G.mul_table[F.class_of(v)]
        # x * (1 - c sigma_v^{-1}) has g-coefficient x_g - c x_{g sigma_v}
        vec = [x - c * vec[row[g]] for g, x in enumerate(vec)]
    return GroupRingElement(G, [Fraction(x, den) for x in vec])


def theta_ST_reference(F: AbelianFieldQ, S: Iterable[int], T: Iterable[int] = ()) -> GroupRingElement:
    """theta^T_{F,S} through CyclotomicNumber arithmetic, one L-value at a time."""
    S, T = frozenset(S), frozenset(T)
    vals = [l_value_ST(chi.inverse(), S, T) for chi in F.characters]
    return from_character_values(F.group, vals)


def omega_T(K: AbelianFieldQ, T: Iterable[int] = ()) -> GroupRingElement:
    """omega^T = sum_chi L_T(0, chi^{-1}) eps_chi (primitive L-functions)."""
    T = frozenset(T)
    vals = [smoothing_factor_T(chi.inverse(), T) * l_value_at_zero(chi.inverse())
            for chi in K.characters]
    return from_character_values(K.group, vals)


def frobenius_inverse_factor(F: AbelianFieldQ, v: int) -> GroupRingElement:
    """1 - F_v^{-1} for v unramified in F."""
    G = F.group
    fr = F.place_data(v).frobenius
    return GroupRingElement.one(G) - GroupRingElement.basis(G, G.inverses[fr])


def enlarge_S_check(F: AbelianFieldQ, S: Iterable[int], T: Iterable[int], v: int) -> bool:
    S, T = set(S), set(T)
    if v in S or v in T or F.n % v == 0:
        raise StickelbergerError(f"v = {v} must be unramified and outside S and T")
    # the two sides go through different routes (characters vs partial zeta)
    lhs = theta_ST_characters(F, S | {v}, T)
    rhs = multiply(frobenius_inverse_factor(F, v), theta_ST(F, S, T))
    return lhs == rhs


def restrict(x: GroupRingElement, K: AbelianFieldQ, F: AbelianFieldQ) -> GroupRingElement:
    """Coefficient summation along Gal(K/Q) -> Gal(F/Q)."""
    proj = K.projection_to(F)
    out = [Fraction(0)] * F.group.order
    for i, c in enumerate(x.coeffs):
        out[proj[i]] += c
    return GroupRingElement(F.group, out)


def theta_by_partial_zeta(F: AbelianFieldQ) -> GroupRingElement:
    """theta_{F, S_ram}(0) from partial zeta values 1/2 - a/n over (Z/n)^x.

    Uses no characters at all, so it serves as an independent route to the
    character-wise construction.
    """
    n = F.n
    G = F.group
    out = [Fraction(0)] * G.order
    if n == 1:
        out[0] = Fraction(-1, 2)
        return GroupRingElement(G, out)
    for a in range(1, n):
        if gcd(a, n) == 1:
            out[G.inverses[F.class_of(a)]] += Fraction(1, 2) - Fraction(a, n)
    return GroupRingElement(G, out)
