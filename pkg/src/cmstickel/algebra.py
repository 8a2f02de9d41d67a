"""Group rings of finite abelian groups, cyclotomic numbers and characters.

Everything here is exact.  Group elements are indexed by their position in
the lexicographic enumeration of exponent vectors over the invariant factors;
coefficient vectors of group-ring elements follow the same order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm, prod
from operator import add
from typing import Iterable, Mapping, Sequence


class GroupMismatch(ValueError):
    pass


class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r, each d_i >= 2."""

    def __init__(self, invariant_factors: Sequence[int]):
        inv = tuple(int(d) for d in invariant_factors)
        if any(d < 2 for d in inv):
            raise ValueError(f"invariant factors must be >= 2: {inv}")
        if any(inv[i + 1] % inv[i] for i in range(len(inv) - 1)):
            raise ValueError(f"not a divisibility chain: {inv}")
        self.invariants = inv
        self.order = prod(inv)
        self.exponent = inv[-1] if inv else 1
        self.elements: tuple[tuple[int, ...], ...] = tuple(
            itertools.product(*(range(d) for d in inv)))
        self._strides = tuple(prod(inv[i + 1:]) for i in range(len(inv)))

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.invariants)})"

    def index(self, exps: Sequence[int]) -> int:
        return sum((e % d) * s for e, d, s in zip(exps, self.invariants, self._strides))

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        els, inv = self.elements, self.invariants
        return tuple(
            tuple(self.index([x + y for x, y in zip(a, b)]) for b in els) for a in els)

    def mul(self, i: int, j: int) -> int:
        return self.mul_table[i][j]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(self.index([-x for x in a]) for a in self.elements)

    def power(self, i: int, k: int) -> int:
        return self.index([k * x for x in self.elements[i]])

    def element_order(self, i: int) -> int:
        return lcm(1, *(d // gcd(d, x) for x, d in zip(self.elements[i], self.invariants)))

    def subgroup(self, gens: Iterable[int]) -> frozenset[int]:
        """Closure of ``gens`` under multiplication."""
        H = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    x = self.mul(h, g)
                    if x not in H:
                        H.add(x)
                        new.append(x)
            frontier = new
        return frozenset(H)

    def characters(self) -> list["Character"]:
        return list(self._characters)

    @cached_property
    def _characters(self) -> tuple["Character", ...]:
        e = self.exponent
        steps = [e // d for d in self.invariants]
        return tuple(Character(self, tuple(k * s for k, s in zip(ks, steps)))
                     for ks in itertools.product(*(range(d) for d in self.invariants)))


# ---------------------------------------------------------------------------
# Cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return q


class CyclotomicField:
    """Q(zeta_e) with the power basis 1, z, ..., z^(phi(e)-1)."""

    def __init__(self, e: int):
        self.e = e
        self.phi_poly = cyclotomic_polynomial(e)
        self.degree = len(self.phi_poly) - 1
        # reduction of z^k, 0 <= k < e, as integer coordinate vectors
        red = []
        deg = self.degree
        for k in range(e):
            v = [0] * max(k + 1, deg)
            v[k] = 1
            for i in range(len(v) - 1, deg - 1, -1):
                c = v[i]
                if c:
                    for j, pj in enumerate(self.phi_poly):
                        v[i - deg + j] -= c * pj
            red.append(tuple(v[:deg]))
        self.reduction = tuple(red)

    def reduce(self, acc: Sequence) -> "CyclotomicNumber":
        """Reduce a length-e coefficient list in powers of zeta."""
        nums, den = _common(acc)
        return CyclotomicNumber(self, _div_all(self._reduce_int(nums), den))

    def _reduce_int(self, nums: Sequence[int]) -> list[int]:
        out = [0] * self.degree
        for k, c in enumerate(nums):
            if c:
                for j, r in enumerate(self.reduction[k]):
                    if r:
                        out[j] += c * r
        return out

    def zeta_power(self, k: int) -> "CyclotomicNumber":
        return CyclotomicNumber(self, tuple(Fraction(x) for x in self.reduction[k % self.e]))

    def scalar(self, q) -> "CyclotomicNumber":
        return CyclotomicNumber(self, (Fraction(q),) + (Fraction(0),) * (self.degree - 1))

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.e == self.e

    def __hash__(self):
        return hash(("Qzeta", self.e))


@lru_cache(maxsize=None)
def cyclotomic_field(e: int) -> CyclotomicField:
    return CyclotomicField(e)


@dataclass(frozen=True)
class CyclotomicNumber:
    field: CyclotomicField
    coords: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return self.field.e

    def _check(self, other) -> "CyclotomicNumber":
        if not isinstance(other, CyclotomicNumber):
            return self.field.scalar(other)
        if other.field.e != self.field.e:
            raise ValueError("cyclotomic numbers from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CyclotomicNumber(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            q = Fraction(other)
            return CyclotomicNumber(self.field, tuple(a * q for a in self.coords))
        other = self._check(other)
        e = self.field.e
        a, da = _common(self.coords)
        b, db = _common(other.coords)
        acc = [0] * e
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[(i + j) % e] += x * y
        return CyclotomicNumber(self.field, _div_all(self.field._reduce_int(acc), da * db))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def inverse(self) -> "CyclotomicNumber":
        """Inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        a = _trim([*self.coords])
        b = _trim([Fraction(c) for c in self.field.phi_poly])
        # invariant: s*self == a, t*self == b  (mod Phi)
        s, t = [Fraction(1)], [Fraction(0)]
        while len(b) > 1 or b[0] != 0:
            q, r = _poly_divmod(a, b)
            a, b = b, r
            s, t = t, _trim(_poly_sub(s, _poly_mul(q, t)))
        c = a[0]
        coeffs = [x / c for x in s]
        acc = [Fraction(0)] * self.field.e
        for k, x in enumerate(coeffs):
            acc[k % self.field.e] += x
        return self.field.reduce(acc)

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.field.e == other.field.e and self.coords == other.coords
        try:
            return self.is_rational() and self.coords[0] == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field.e, self.coords))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coords) if c]
        return f"Cyc{self.field.e}({' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"order": self.field.e, "coords": [_frac_str(c) for c in self.coords]}


def _common(values: Sequence) -> tuple[list[int], int]:
    """Integer numerators over a common denominator."""
    den = 1
    for x in values:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in values], 1
    return [int(x * den) for x in values], den


def _div_all(nums: Sequence[int], den: int) -> tuple[Fraction, ...]:
    if den == 1:
        return tuple(Fraction(x) for x in nums)
    return tuple(Fraction(x, den) for x in nums)


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_divmod(a, b):
    a = list(a)
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    return q, _trim(a[:len(b) - 1] or [Fraction(0)])


# ---------------------------------------------------------------------------
# Characters


@dataclass(frozen=True)
class Character:
    """chi(g_i) = zeta_e^{exponents[i]}, e the exponent of the group."""

    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        e = self.group.exponent
        for a, d in zip(self.exponents, self.group.invariants):
            if (a * d) % e:
                raise ValueError(f"exponent {a} not compatible with factor {d}")

    def log(self, i: int) -> int:
        """chi(element i) = zeta_e^{log(i)}."""
        return sum(a * x for a, x in zip(self.exponents, self.group.elements[i])) % self.group.exponent

    @cached_property
    def logs(self) -> tuple[int, ...]:
        return tuple(self.log(i) for i in range(self.group.order))

    def value(self, i: int) -> CyclotomicNumber:
        return cyclotomic_field(self.group.exponent).zeta_power(self.log(i))

    def inverse(self) -> "Character":
        e = self.group.exponent
        return Character(self.group, tuple((-a) % e for a in self.exponents))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def __repr__(self):
        return f"Character({list(self.exponents)})"


# ---------------------------------------------------------------------------
# Group rings


def _frac_str(q: Fraction) -> str:
    return str(q)


class GroupRingElement:
    """Element of Q[G], coefficients in canonical element order."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, coeffs: Iterable):
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != group.order:
            raise ValueError(f"expected {group.order} coefficients, got {len(c)}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, key, value):
        raise AttributeError("GroupRingElement is immutable")

    # constructors
    @classmethod
    def zero(cls, G: FiniteAbelianGroup) -> "GroupRingElement":
        return cls(G, [0] * G.order)

    @classmethod
    def scalar(cls, G: FiniteAbelianGroup, q) -> "GroupRingElement":
        return cls.from_dict(G, {0: q})

    @classmethod
    def one(cls, G: FiniteAbelianGroup) -> "GroupRingElement":
        return cls.scalar(G, 1)

    @classmethod
    def basis(cls, G: FiniteAbelianGroup, i: int) -> "GroupRingElement":
        return cls.from_dict(G, {i: 1})

    @classmethod
    def from_dict(cls, G: FiniteAbelianGroup, d: Mapping[int, object]) -> "GroupRingElement":
        c = [0] * G.order
        for i, q in d.items():
            c[i] += Fraction(q)
        return cls(G, c)

    # arithmetic
    def _same(self, other: "GroupRingElement"):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement.scalar(self.group, other)
        if other.group != self.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return GroupRingElement(self.group, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, (-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            q = Fraction(other)
            return GroupRingElement(self.group, (a * q for a in self.coeffs))
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = Fraction(q)
        return GroupRingElement(self.group, (a / q for a in self.coeffs))

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.group, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*g{list(self.group.elements[i])}")
        return "GR(" + (" + ".join(terms) or "0") + ")"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def denominator(self) -> int:
        return lcm(1, *(c.denominator for c in self.coeffs))

    def augmentation(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))

    def to_json(self) -> list[str]:
        return [_frac_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, G: FiniteAbelianGroup, data: Sequence[str]) -> "GroupRingElement":
        return cls(G, [Fraction(s) for s in data])


def multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    if a.group != b.group:
        raise GroupMismatch(f"{a.group} vs {b.group}")
    G = a.group
    table = G.mul_table
    out = [Fraction(0)] * G.order
    bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
    for i, x in enumerate(a.coeffs):
        if x:
            row = table[i]
            for j, y in bnz:
                out[row[j]] += x * y
    return GroupRingElement(G, out)


def sharp(a: GroupRingElement) -> GroupRingElement:
    """The involution induced by sigma -> sigma^{-1}."""
    inv = a.group.inverses
    out = [Fraction(0)] * a.group.order
    for i, c in enumerate(a.coeffs):
        out[inv[i]] = c
    return GroupRingElement(a.group, out)


def character_value(a: GroupRingElement, chi: Character) -> CyclotomicNumber:
    """sum_sigma a_sigma chi(sigma)."""
    if chi.group != a.group:
        raise GroupMismatch("character of a different group")
    e = a.group.exponent
    acc = [Fraction(0)] * e
    logs = chi.logs
    for i, c in enumerate(a.coeffs):
        if c:
            acc[logs[i]] += c
    return cyclotomic_field(e).reduce(acc)


class NotRational(ValueError):
    pass


def from_character_values(G: FiniteAbelianGroup, values: Mapping[Character, object] | Sequence
                          ) -> GroupRingElement:
    """The unique a in Q[G] with character_value(a, chi) == values[chi].

    ``values`` is either a mapping keyed by Character or a sequence in the
    order of ``G.characters()``.  Raises NotRational when the values are not
    Galois-conjugate-consistent.
    """
    chars = G.characters()
    if isinstance(values, Mapping):
        vals = [values[chi] for chi in chars]
    else:
        vals = list(values)
        if len(vals) != len(chars):
            raise ValueError("one value per character required")
    F = cyclotomic_field(G.exponent)
    e = G.exponent
    deg = F.degree
    coords = []
    for v in vals:
        if not isinstance(v, CyclotomicNumber):
            v = F.scalar(v)
        coords.append(v.coords)
    nums, den = _common([c for vc in coords for c in vc])
    vecs = [nums[i * deg:(i + 1) * deg] for i in range(len(coords))]
    out = []
    for s in range(G.order):
        acc = [0] * e
        for chi, vc in zip(chars, vecs):
            # chi(sigma^{-1}) = zeta^{-log}
            shift = (-chi.logs[s]) % e
            for k in range(deg):
                c = vc[k]
                if c:
                    acc[(k + shift) % e] += c
        val = F._reduce_int(acc)
        if any(val[1:]):
            raise NotRational(f"character values give a non-rational coefficient {val}")
        out.append(Fraction(val[0], den * G.order))
    return GroupRingElement(G, out)


def from_cyclic_values(G: FiniteAbelianGroup, vecs: Sequence[Sequence[int]], den: int = 1
                       ) -> GroupRingElement:
    """Fourier inversion for values given in Z[x]/(x^e - 1), x -> zeta_e.

    ``vecs[i]`` is an integer vector of length e (the exponent of G) whose
    image at zeta_e, divided by ``den``, is the value at the i-th entry of
    ``G.characters()``.  Same result as from_character_values, integer only.
    """
    chars = G.characters()
    e = G.exponent
    F = cyclotomic_field(e)
    out = []
    for s in range(G.order):
        acc = [0] * e
        for chi, vc in zip(chars, vecs):
            # multiply by x^{-log}: rotate left by log
            k = chi.logs[s]
            acc = list(map(add, acc, vc[k:] + vc[:k]))
        val = F._reduce_int(acc)
        if any(val[1:]):
            raise NotRational(f"character values give a non-rational coefficient {val}")
        out.append(Fraction(val[0], den * G.order))
    return GroupRingElement(G, out)


def idempotent(chi: Character) -> GroupRingElement:
    """epsilon_chi = (#G)^{-1} sum chi(sigma) sigma^{-1}; only rational when chi is."""
    G = chi.group
    vals = [1 if c == chi else 0 for c in G.characters()]
    return from_character_values(G, vals)


def norm_element(G: FiniteAbelianGroup, gens: Iterable[int]) -> GroupRingElement:
    H = G.subgroup(gens)
    return GroupRingElement.from_dict(G, {h: 1 for h in H})


def minus_project(a: GroupRingElement, rho: int) -> GroupRingElement:
    """((1 - rho)/2) * a."""
    G = a.group
    if G.element_order(rho) != 2:
        raise ValueError("rho must have order 2")
    e_minus = GroupRingElement.from_dict(G, {0: Fraction(1, 2), rho: Fraction(-1, 2)})
    return e_minus * a


def is_nonzerodivisor(a: GroupRingElement) -> bool:
    return all(not character_value(a, chi).is_zero() for chi in a.group.characters())
