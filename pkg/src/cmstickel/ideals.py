"""Stickelberger ideals as lattices in Z[G] or in the minus ring Z[G]/(1 + rho).

The minus ring R0 = Z[G]/(1 + rho) is free over Z on a transversal of
G / <rho>; after inverting 2 it is Z[1/2][G]^-, and e^- = (1 - rho)/2 maps to
1, so projecting to R0 is the minus projection.  Lattices are stored as a
row-HNF integer basis together with a positive denominator.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

from .algebra import FiniteAbelianGroup, GroupRingElement, norm_element, sharp
from .fields import AbelianFieldQ, check_T_admissible
from .linalg import det, hnf, in_lattice
from .lvalues import omega_T, theta_ST


class LatticeError(ValueError):
    pass


class FullRing:
    """Z[G] with the group-element basis."""

    def __init__(self, G: FiniteAbelianGroup):
        self.group = G
        self.dim = G.order

    def key(self):
        return ("full", self.group.invariants)

    def to_vector(self, a: GroupRingElement) -> list[Fraction]:
        return list(a.coeffs)

    def from_vector(self, v: Sequence) -> GroupRingElement:
        return GroupRingElement(self.group, v)

    @property
    def translations(self) -> list[int]:
        return list(range(self.group.order))

    def __eq__(self, other):
        return isinstance(other, FullRing) and self.key() == other.key()


class MinusRing:
    """R0 = Z[G]/(1 + rho), coordinates on the transversal of G/<rho>."""

    def __init__(self, G: FiniteAbelianGroup, rho: int):
        if G.element_order(rho) != 2:
            raise ValueError("rho must have order 2")
        self.group = G
        self.rho = rho
        trans, sign = [], {}
        for i in range(G.order):
            j = G.mul(i, rho)
            if i < j:
                sign[i] = (len(trans), 1)
                sign[j] = (len(trans), -1)
                trans.append(i)
        self.transversal = tuple(trans)
        self._pos = sign
        self.dim = len(trans)

    def key(self):
        return ("minus", self.group.invariants, self.rho)

    def __eq__(self, other):
        return isinstance(other, MinusRing) and self.key() == other.key()

    def to_vector(self, a: GroupRingElement) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        for i, c in enumerate(a.coeffs):
            if c:
                k, s = self._pos[i]
                v[k] += s * c
        return v

    def from_vector(self, v: Sequence) -> GroupRingElement:
        """The lift supported on the transversal."""
        c = [0] * self.group.order
        for t, x in zip(self.transversal, v):
            c[t] = x
        return GroupRingElement(self.group, c)

    def multiply(self, u: Sequence, v: Sequence) -> list[Fraction]:
        return self.to_vector(self.from_vector(u) * self.from_vector(v))

    def element_of_group(self, i: int) -> list[int]:
        v = [0] * self.dim
        k, s = self._pos[i]
        v[k] = s
        return v

    @property
    def translations(self) -> list[int]:
        return list(self.transversal)


def _integerize(vectors: Iterable[Sequence]) -> tuple[list[list[int]], int]:
    vectors = [[Fraction(x) for x in v] for v in vectors]
    D = lcm(1, *(x.denominator for v in vectors for x in v))
    return [[int(x * D) for x in v] for v in vectors], D


class IdealLattice:
    """Full-rank Z-lattice (1/denom) * span(basis) in the ambient ring."""

    def __init__(self, ring, vectors: Iterable[Sequence], *, check_stable: bool = True):
        rows, D = _integerize(vectors)
        H = hnf(rows, ring.dim)
        if len(H) != ring.dim:
            raise LatticeError(f"rank {len(H)} < {ring.dim}: a zero divisor slipped through")
        g = gcd(D, *(x for r in H for x in r))
        self.ring = ring
        self.basis = [[x // g for x in r] for r in H]
        self.denom = D // g
        if check_stable:
            self._check_stable()

    def _check_stable(self):
        G = self.ring.group
        for i in range(G.order):
            gi = GroupRingElement.basis(G, i)
            for row in self.basis:
                w = self.ring.to_vector(gi * self.ring.from_vector(row))
                if not in_lattice([int(x) for x in w], self.basis):
                    raise LatticeError("lattice is not a Z[G]-module")

    @classmethod
    def from_generators(cls, ring, gens: Iterable[GroupRingElement]) -> "IdealLattice":
        """Z[G]-span of gens (group translates of each generator)."""
        G = ring.group
        vecs = []
        for g in gens:
            for t in ring.translations:
                vecs.append(ring.to_vector(GroupRingElement.basis(G, t) * g))
        return cls(ring, vecs, check_stable=False)

    @classmethod
    def unit(cls, ring) -> "IdealLattice":
        return cls(ring, [[int(i == j) for j in range(ring.dim)] for i in range(ring.dim)],
                   check_stable=False)

    def vectors(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denom) for x in r] for r in self.basis]

    def elements(self) -> list[GroupRingElement]:
        return [self.ring.from_vector(v) for v in self.vectors()]

    @cached_property
    def covolume(self) -> Fraction:
        """Index [Z^d : L] as a rational number (generalized for fractional L)."""
        return Fraction(det(self.basis), self.denom ** self.ring.dim)

    def __eq__(self, other):
        return (isinstance(other, IdealLattice) and self.ring == other.ring
                and self.denom == other.denom and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ring.key(), self.denom, tuple(map(tuple, self.basis))))

    def __repr__(self):
        return f"IdealLattice(denom={self.denom}, basis={self.basis})"

    def contains(self, a: GroupRingElement) -> bool:
        v = self.ring.to_vector(a)
        w = [x * self.denom for x in v]
        if any(x.denominator != 1 for x in w):
            return False
        return in_lattice([int(x) for x in w], self.basis)

    def away_from_2(self) -> "IdealLattice":
        """Canonical representative of L[1/2]: (1/b) N with b odd and N
        2-saturated in Z^d."""
        D = self.denom
        a2 = 0
        while D % 2 == 0:
            D //= 2
            a2 += 1
        M = [[x for x in r] for r in self.basis]
        idx = abs(det(M))
        m = idx
        while m % 2 == 0:
            m //= 2
        d = self.ring.dim
        N = hnf(M + [[m * int(i == j) for j in range(d)] for i in range(d)], d)
        g = gcd(D, *(x for r in N for x in r))
        out = object.__new__(IdealLattice)
        out.ring = self.ring
        out.basis = [[x // g for x in r] for r in N]
        out.denom = D // g
        return out

    def to_json(self) -> dict:
        d = self.denom
        exp = d.bit_length() - 1 if d & (d - 1) == 0 else None
        return {"denominator": d, "denominator_exponent": exp,
                "basis": [[str(x) for x in r] for r in self.basis]}


def lattice_sum(L1: IdealLattice, L2: IdealLattice) -> IdealLattice:
    _same_ring(L1, L2)
    return IdealLattice(L1.ring, L1.vectors() + L2.vectors(), check_stable=False)


def lattice_product(L1: IdealLattice, L2: IdealLattice) -> IdealLattice:
    _same_ring(L1, L2)
    ring = L1.ring
    e1, e2 = L1.elements(), L2.elements()
    vecs = [ring.to_vector(x * y) for x in e1 for y in e2]
    return IdealLattice(ring, vecs, check_stable=False)


def lattice_scale(L: IdealLattice, a: GroupRingElement) -> IdealLattice:
    """a * L (a must be a nonzero divisor in the ambient ring)."""
    return IdealLattice(L.ring, [L.ring.to_vector(a * x) for x in L.elements()],
                        check_stable=False)


def lattice_sharp(L: IdealLattice) -> IdealLattice:
    return IdealLattice(L.ring, [L.ring.to_vector(sharp(x)) for x in L.elements()],
                        check_stable=False)


def lattices_equal_away_from_2(L1: IdealLattice, L2: IdealLattice) -> tuple[bool, Fraction]:
    """(equal after inverting 2, covolume ratio [L1] / [L2])."""
    _same_ring(L1, L2)
    S = lattice_sum(L1, L2)
    i1 = L1.covolume / S.covolume
    i2 = L2.covolume / S.covolume
    ok = _is_power_of_2(i1) and _is_power_of_2(i2)
    return ok, L1.covolume / L2.covolume


def _is_power_of_2(q: Fraction) -> bool:
    if q.denominator != 1 or q.numerator <= 0:
        return False
    n = q.numerator
    return n & (n - 1) == 0


def _same_ring(L1, L2):
    if L1.ring != L2.ring:
        raise LatticeError("lattices live in different rings")


# ---------------------------------------------------------------------------
# U_v, nu_J and the Stickelberger ideal


class NotRamified(ValueError):
    pass


def u_v_generators(K: AbelianFieldQ, v: int) -> list[GroupRingElement]:
    """N_{I_v} and 1 - (N_{I_v}/#I_v) F_v^{-1}."""
    pd = K.place_data(v)
    if not pd.ramified:
        raise NotRamified(f"{v} is unramified in {K}; U_v = Z[G]")
    G = K.group
    N = norm_element(G, pd.inertia)
    Finv = GroupRingElement.basis(G, G.inverses[pd.frobenius])
    return [N, GroupRingElement.one(G) - (N / len(pd.inertia)) * Finv]


def u_v_lattice(K: AbelianFieldQ, v: int, ring=None) -> IdealLattice:
    ring = ring or FullRing(K.group)
    return IdealLattice.from_generators(ring, u_v_generators(K, v))


def inertia_norm_product(K: AbelianFieldQ, J: Iterable[int]) -> GroupRingElement:
    G = K.group
    out = GroupRingElement.one(G)
    for v in J:
        out = out * norm_element(G, K.place_data(v).inertia)
    return out


def nu_J(K: AbelianFieldQ, J: Iterable[int], x: GroupRingElement,
         KJ: AbelianFieldQ | None = None, lift: Sequence[int] | None = None) -> GroupRingElement:
    """Multiplication by N_J = prod_{v in J} N_{I_v} after lifting x to Z[G].

    ``lift`` optionally chooses, for each element of Gal(K_J/Q), the element
    of G used as its preimage (defaults to the first preimage).
    """
    J = sorted(set(J))
    KJ = KJ or K.fixed_field_unramified_at(J)
    if x.group != KJ.group:
        from .algebra import GroupMismatch
        raise GroupMismatch("x must live in Z[Gal(K_J/Q)]")
    G = K.group
    if lift is None:
        proj = K.projection_to(KJ)
        first = {}
        for i, j in enumerate(proj):
            first.setdefault(j, i)
        lift = [first[j] for j in range(KJ.group.order)]
    xt = GroupRingElement.from_dict(G, {lift[j]: c for j, c in enumerate(x.coeffs) if c})
    return inertia_norm_product(K, J) * xt


def theta_ideal_generators(K: AbelianFieldQ, T: Iterable[int]) -> list[tuple[tuple[int, ...], GroupRingElement]]:
    """[(J, nu_J(theta^T_{K_J, S_r - J}))] over all subsets J of S_r."""
    T = frozenset(T)
    if not check_T_admissible(K, T):
        raise ValueError(f"T = {sorted(T)} is not admissible for {K}")
    Sr = K.ramified_primes
    out = []
    for r in range(len(Sr) + 1):
        for J in itertools.combinations(Sr, r):
            KJ = K.fixed_field_unramified_at(J)
            th = theta_ST(KJ, set(Sr) - set(J), T)
            out.append((J, nu_J(K, J, th, KJ)))
    return out


def nuJ_identity_check(K: AbelianFieldQ, T: Iterable[int], J: Iterable[int]) -> bool:
    T = frozenset(T)
    J = sorted(set(J))
    Sr = K.ramified_primes
    G = K.group
    KJ = K.fixed_field_unramified_at(J)
    lhs = nu_J(K, J, theta_ST(KJ, set(Sr) - set(J), T, check_integrality=False), KJ)
    rhs = inertia_norm_product(K, J) * omega_T(K, T)
    for v in Sr:
        if v not in J:
            rhs = rhs * u_v_generators(K, v)[1]
    return lhs == rhs


class ConstructionMismatch(AssertionError):
    pass


def theta_ideal_minus(K: AbelianFieldQ, T: Iterable[int], *, cross_check: bool = True) -> IdealLattice:
    """Theta^T(K)' in R0 from the nu_J generators, cross-checked against
    (prod_v U_v') * omega'."""
    if not K.is_cm:
        raise ValueError(f"{K} is not CM")
    ring = MinusRing(K.group, K.rho)
    gens = [g for _, g in theta_ideal_generators(K, T)]
    L = IdealLattice.from_generators(ring, gens)
    if cross_check:
        P = theta_ideal_minus_by_product(K, T, ring)
        if P != L:
            raise ConstructionMismatch(f"generator and product constructions disagree for {K}, T={sorted(T)}")
    return L


def theta_ideal_minus_by_product(K: AbelianFieldQ, T: Iterable[int], ring: MinusRing | None = None
                                 ) -> IdealLattice:
    ring = ring or MinusRing(K.group, K.rho)
    P = IdealLattice.unit(ring)
    for v in K.ramified_primes:
        P = lattice_product(P, u_v_lattice(K, v, ring))
    return lattice_scale(P, omega_T(K, T))
