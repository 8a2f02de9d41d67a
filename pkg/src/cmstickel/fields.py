"""Abelian number fields over Q presented as fixed fields Q(zeta_n)^H.

The Galois group (Z/n)^x / H is put into invariant-factor form once, with
lookup tables between residues mod n and group-element indices.  All
ramification data (inertia, Frobenius) is read off the residues.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

from sympy import divisors, factorint, primitive_root

from .algebra import (Character, CyclotomicNumber, FiniteAbelianGroup, GroupRingElement,
                      cyclotomic_field, norm_element)
from .linalg import smith_normal_form, vec_mat

log = logging.getLogger(__name__)

DEFAULT_CONDUCTOR_CAP = 100_000


class ConductorCapExceeded(ValueError):
    pass


def _crt_one(residue: int, pa: int, n: int) -> int:
    """x = residue (mod pa), x = 1 (mod n/pa)."""
    m = n // pa
    if m == 1:
        return residue % pa
    # x = 1 + m*t, m*t = residue - 1 mod pa
    t = ((residue - 1) * pow(m, -1, pa)) % pa
    return (1 + m * t) % n


def _unit_generators(n: int) -> list[tuple[int, int, int]]:
    """Cyclic decomposition of (Z/n)^x as (prime, generator mod n, order)."""
    gens = []
    for p, a in sorted(factorint(n).items()):
        pa = p ** a
        if p == 2:
            if a >= 2:
                gens.append((2, _crt_one(pa - 1, pa, n), 2))
            if a >= 3:
                gens.append((2, _crt_one(5, pa, n), 2 ** (a - 2)))
        else:
            g = primitive_root(pa)
            gens.append((p, _crt_one(g, pa, n), pa // p * (p - 1)))
    return gens


class _UnitLog:
    """Discrete logarithms in (Z/n)^x with respect to _unit_generators."""

    def __init__(self, n: int):
        self.n = n
        self.gens = _unit_generators(n)
        self.moduli = [o for _, _, o in self.gens]
        self.tables = []
        for p, g, o in self.gens:
            pa = p ** factorint(n)[p]
            if p == 2 and o == 2 and (g % pa) == pa - 1:
                self.tables.append(("sign", pa))
                continue
            tab = {}
            x = 1
            for k in range(o):
                tab[x] = k
                x = x * (g % pa) % pa
            self.tables.append(("cyc", pa, tab))

    def __call__(self, a: int) -> list[int]:
        out = []
        pending_sign = {}
        for idx, t in enumerate(self.tables):
            if t[0] == "sign":
                pa = t[1]
                s = 0 if a % 4 == 1 else 1
                pending_sign[pa] = s
                out.append(s)
            else:
                pa, tab = t[1], t[2]
                x = a % pa
                if pa in pending_sign and pending_sign[pa]:
                    x = (-x) % pa
                out.append(tab[x])
        return out


@dataclass(frozen=True)
class PlaceData:
    p: int
    ramified: bool
    inertia: frozenset  # indices in G
    frobenius: int  # designated lift, index in G
    residue_degree: int
    num_primes: int

    @property
    def norm(self) -> int:
        return self.p


class AbelianFieldQ:
    """K = Q(zeta_n)^H with n the conductor of K."""

    def __init__(self, n: int, H_gens: Iterable[int] = (), *,
                 conductor_cap: int = DEFAULT_CONDUCTOR_CAP):
        n = int(n)
        if n < 1:
            raise ValueError("conductor must be positive")
        if n > conductor_cap:
            raise ConductorCapExceeded(f"n = {n} exceeds cap {conductor_cap}")
        H_gens = [int(h) % n for h in H_gens]
        for h in H_gens:
            if gcd(h, n) != 1:
                raise ValueError(f"subgroup generator {h} not prime to {n}")
        n, H_gens = _normalize(n, H_gens)
        self.conductor_cap = conductor_cap
        self.n = n
        self._build(H_gens)

    # -- construction -----------------------------------------------------
    def _build(self, H_gens: list[int]):
        n = self.n
        if n == 1:
            self.H_gens = ()
            self.group = FiniteAbelianGroup(())
            self._V = []
            self._keep = []
            self._ulog = None
            self._reps = (1,)
            return
        ulog = _UnitLog(n)
        moduli = ulog.moduli
        s = len(moduli)
        rels = [[moduli[i] if i == j else 0 for j in range(s)] for i in range(s)]
        rels += [ulog(h) for h in H_gens]
        diag, _, V = smith_normal_form(rels)
        keep = [i for i, d in enumerate(diag) if d > 1]
        self._ulog = ulog
        self._V = V
        self._keep = keep
        self._diag = diag
        self.group = FiniteAbelianGroup([diag[i] for i in keep])
        # minimal residue representative of each class
        G = self.group
        reps = [0] * G.order
        found = 0
        for a in range(1, n):
            if gcd(a, n) == 1:
                i = self.class_of(a)
                if reps[i] == 0:
                    reps[i] = a
                    found += 1
                    if found == G.order:
                        break
        self._reps = tuple(reps)
        self.H_gens = tuple(sorted({h for h in H_gens if self.class_of(h) == 0} - {1}))

    def class_of(self, a: int) -> int:
        """Index in G of the automorphism sigma_a (zeta_n -> zeta_n^a)."""
        if self.n == 1:
            return 0
        a %= self.n
        if gcd(a, self.n) != 1:
            raise ValueError(f"{a} is not a unit mod {self.n}")
        x = vec_mat(self._ulog(a), self._V)
        return self.group.index([x[i] % self._diag[i] for i in self._keep])

    def rep(self, i: int) -> int:
        """Smallest positive residue mod n in class i."""
        return self._reps[i]

    def __repr__(self):
        return f"AbelianFieldQ(n={self.n}, H={list(self.H_gens)}, G={list(self.group.invariants)})"

    def __eq__(self, other):
        return isinstance(other, AbelianFieldQ) and self.n == other.n and self.subgroup_H == other.subgroup_H

    def __hash__(self):
        return hash((self.n, self.subgroup_H))

    @cached_property
    def subgroup_H(self) -> frozenset[int]:
        return frozenset(a for a in range(1, max(self.n, 2)) if gcd(a, self.n) == 1
                         and self.class_of(a) == 0)

    @property
    def degree(self) -> int:
        return self.group.order

    @property
    def is_cm(self) -> bool:
        return self.n > 2 and self.class_of(self.n - 1) != 0

    @property
    def rho(self) -> int:
        """Complex conjugation (class of -1); only meaningful when is_cm."""
        return self.class_of(self.n - 1) if self.n > 1 else 0

    def to_json(self) -> dict:
        return {"conductor": self.n, "subgroup_generators": list(self.H_gens)}

    @classmethod
    def from_json(cls, data: dict, conductor_cap: int = DEFAULT_CONDUCTOR_CAP) -> "AbelianFieldQ":
        return cls(data["conductor"], data.get("subgroup_generators", []),
                   conductor_cap=conductor_cap)

    # -- ramification -----------------------------------------------------
    @cached_property
    def ramified_primes(self) -> tuple[int, ...]:
        return tuple(sorted(factorint(self.n))) if self.n > 1 else ()

    def _inertia_residues(self, p: int) -> list[int]:
        a = factorint(self.n).get(p, 0)
        pa = p ** a
        return [_crt_one(g % pa, pa, self.n) for q, g, _ in _unit_generators(self.n) if q == p]

    def place_data(self, p: int) -> PlaceData:
        G = self.group
        if self.n % p:
            F = self.class_of(p)
            inertia = frozenset({0})
        else:
            a = factorint(self.n)[p]
            pa = p ** a
            m = self.n // pa
            inertia = G.subgroup(self.class_of(u) for u in self._inertia_residues(p))
            lift = 1 if m == 1 else _crt_pair(p % m, m, 1, pa)
            F = self.class_of(lift)
        f = 1
        x = F
        while x not in inertia:
            x = G.mul(x, F)
            f += 1
        g = G.order // (f * len(inertia))
        return PlaceData(p, len(inertia) > 1, inertia, F, f, g)

    def fixed_field_unramified_at(self, J: Iterable[int]) -> "AbelianFieldQ":
        extra = []
        for p in J:
            extra += self._inertia_residues(p)
        return AbelianFieldQ(self.n, list(self.H_gens) + extra, conductor_cap=self.conductor_cap)

    def projection_to(self, F: "AbelianFieldQ") -> tuple[int, ...]:
        """Index map Gal(self/Q) -> Gal(F/Q) for a subfield F."""
        if self.n % F.n:
            raise ValueError(f"{F} is not a subfield of {self}")
        proj = tuple(F.class_of(self.rep(i) % F.n) if F.n > 1 else 0
                     for i in range(self.group.order))
        for h in self.subgroup_H:
            if F.n > 1 and F.class_of(h % F.n) != 0:
                raise ValueError(f"{F} is not a subfield of {self}")
        return proj

    def contains_cyclotomic(self, d: int) -> bool:
        """Q(zeta_d) subset of K, tested on the subgroup H."""
        if d % 4 == 2:
            d //= 2
        if self.n % d:
            return False
        return all((h - 1) % d == 0 for h in self.subgroup_H)

    @cached_property
    def roots_of_unity_order(self) -> int:
        d0 = self.n
        for h in self.H_gens:
            d0 = gcd(d0, h - 1)
        return lcm(2, d0)

    # -- characters -------------------------------------------------------
    @cached_property
    def characters(self) -> list["DirichletCharacterData"]:
        return [DirichletCharacterData(self, chi) for chi in self.group.characters()]

    @cached_property
    def _char_index(self) -> dict[Character, int]:
        return {chi: i for i, chi in enumerate(self.group.characters())}

    def character_data(self, chi: Character) -> "DirichletCharacterData":
        return self.characters[self._char_index[chi]]

    def unit_lift(self, a: int, f: int) -> int:
        """A residue mod n, prime to n, congruent to a mod f (gcd(a, f) = 1)."""
        x = a % f if f > 1 else 1
        while gcd(x, self.n) != 1:
            x += f
        return x % self.n


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    t = ((r2 - r1) * pow(m1, -1, m2)) % m2
    return (r1 + m1 * t) % (m1 * m2)


def _subgroup_residues(n: int, gens: Sequence[int]) -> set[int]:
    H = {1 % n}
    frontier = [1 % n]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                x = h * g % n
                if x not in H:
                    H.add(x)
                    new.append(x)
        frontier = new
    return H


def _normalize(n: int, H_gens: list[int]) -> tuple[int, list[int]]:
    """Reduce (n, H) to the conductor of the fixed field."""
    if n == 1:
        return 1, []
    H = _subgroup_residues(n, H_gens)
    for m in divisors(n):
        if m % 4 == 2:
            continue
        # kernel of (Z/n)^x -> (Z/m)^x must lie in H
        if all(a in H for a in range(1, n, m) if gcd(a, n) == 1):
            if m == 1:
                return 1, []
            return m, sorted({h % m for h in H} - {1})
    raise AssertionError("unreachable")


def build_field(n: int, H_gens: Iterable[int] = (), *,
                conductor_cap: int = DEFAULT_CONDUCTOR_CAP) -> AbelianFieldQ:
    return AbelianFieldQ(n, H_gens, conductor_cap=conductor_cap)


def quadratic_field(D: int) -> AbelianFieldQ:
    """Q(sqrt(D)) for a fundamental discriminant D."""
    n = abs(D)
    H = [a for a in range(1, n) if gcd(a, n) == 1 and kronecker(D, a) == 1]
    return AbelianFieldQ(n, H)


def kronecker(D: int, a: int) -> int:
    from sympy import jacobi_symbol
    if a == 1:
        return 1
    out = 1
    for p, e in factorint(a).items():
        if p == 2:
            if D % 2 == 0:
                return 0
            s = 1 if D % 8 in (1, 7) else -1
        else:
            s = jacobi_symbol(D % p, p)
        out *= s ** e
    return out


# ---------------------------------------------------------------------------


class DirichletCharacterData:
    """A character of Gal(K/Q) viewed as a primitive Dirichlet character."""

    def __init__(self, K: AbelianFieldQ, chi: Character):
        self.field = K
        self.character = chi
        self.conductor = self._conductor()
        self._logs: dict[int, int] = {}

    def _conductor(self) -> int:
        K, chi = self.field, self.character
        if chi.is_trivial() or K.n == 1:
            return 1
        f = 1
        for p, a in factorint(K.n).items():
            pa = p ** a
            c = 0
            while c < a:
                if p == 2:
                    gens = [pa - 1, 5] if c <= 1 else [1 + 2 ** c]
                elif c == 0:
                    gens = [primitive_root(pa)]
                else:
                    gens = [1 + p ** c]
                if all(chi.log(K.class_of(_crt_one(g % pa, pa, K.n))) == 0 for g in gens):
                    break
                c += 1
            f *= p ** c
        return f

    @property
    def order_e(self) -> int:
        return self.field.group.exponent

    def log_at(self, a: int) -> int | None:
        """chi(a) = zeta_e^{log_at(a)} as primitive character; None if gcd(a, f) > 1."""
        f = self.conductor
        if gcd(a, f) != 1:
            return None
        a %= f
        k = self._logs.get(a)
        if k is None:
            k = self._logs[a] = self.character.log(self.field.class_of(self.field.unit_lift(a, f)))
        return k

    def value_at(self, a: int) -> CyclotomicNumber:
        F = cyclotomic_field(self.order_e)
        k = self.log_at(a)
        return F.scalar(0) if k is None else F.zeta_power(k)

    def is_odd(self) -> bool:
        return self.log_at(-1 % max(self.conductor, 2)) != 0 if self.conductor > 1 else False

    def inverse(self) -> "DirichletCharacterData":
        return self.field.character_data(self.character.inverse())

    def __repr__(self):
        return f"DirichletCharacterData(f={self.conductor}, {self.character})"

    def to_json(self) -> dict:
        return {"exponents": list(self.character.exponents), "conductor": self.conductor,
                "parity": "odd" if self.is_odd() else "even"}


def characters_of(K: AbelianFieldQ) -> list[DirichletCharacterData]:
    return K.characters


def place_data(K: AbelianFieldQ, p: int) -> PlaceData:
    return K.place_data(p)


def fixed_field_unramified_at(K: AbelianFieldQ, J: Iterable[int]) -> AbelianFieldQ:
    return K.fixed_field_unramified_at(J)


def roots_of_unity_order(K: AbelianFieldQ) -> int:
    return K.roots_of_unity_order


def check_T_admissible(K: AbelianFieldQ, T: Iterable[int]) -> bool:
    T = set(T)
    if any(K.n % p == 0 for p in T):
        return False
    m = K.roots_of_unity_order
    return all(any(p != l for p in T) for l in factorint(m))


def gv_hv(K: AbelianFieldQ, v: int) -> tuple[GroupRingElement, GroupRingElement]:
    G = K.group
    pd = K.place_data(v)
    nI = len(pd.inertia)
    F = GroupRingElement.basis(G, pd.frobenius)
    one = GroupRingElement.one(G)
    g = one - F + nI
    N = norm_element(G, pd.inertia)
    e = N / nI
    h = (one - e) + e * g
    return g, h
