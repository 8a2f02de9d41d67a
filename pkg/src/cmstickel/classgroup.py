"""Finite Galois modules, the minus part of T-ray class groups and Fitting ideals.

A finite module is Z^r / L with L a full-rank row lattice; group elements act
on row vectors from the right (x -> x A).  Fitting ideals are computed over
R0 = Z[G]/(1 + rho) and compared after inverting 2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt, lcm, prod
from typing import Sequence

from sympy import factorint

from .algebra import FiniteAbelianGroup, GroupRingElement, cyclotomic_field
from .fields import AbelianFieldQ, check_T_admissible
from .ideals import IdealLattice, LatticeError, MinusRing
from .linalg import (det, hnf, hnf_with_transform, in_lattice, mat_inverse, mat_mul,
                     smith_normal_form, vec_mat)
from .lvalues import bernoulli_b1


class UnsupportedScope(ValueError):
    """The T-ray class group minus part cannot be computed for this field."""


class InvalidDiscriminant(ValueError):
    pass


# ---------------------------------------------------------------------------
# imaginary quadratic class numbers


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{D} is not a negative discriminant")
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def class_number_imag_quadratic(D: int) -> int:
    return len(reduced_forms(D))


def is_fundamental_discriminant(D: int) -> bool:
    if D % 4 == 1:
        return all(e == 1 for e in factorint(abs(D)).values())
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(e == 1 for e in factorint(abs(m)).values())
    return False


def class_number_by_ideals(D: int) -> int:
    """Independent count: classes of primitive ideals of norm below the
    Minkowski bound, with equivalence decided by principality of a * conj(b).

    Elements of O_K are pairs (u, v) meaning (u + v sqrt(D)) / 2.
    """
    if not (D < 0 and is_fundamental_discriminant(D)):
        raise InvalidDiscriminant(f"{D} is not a negative fundamental discriminant")
    # (2/3) sqrt|D| + 1 exceeds the Minkowski bound (2/pi) sqrt|D|; extra
    # ideals only join existing classes
    bound = isqrt(-4 * D // 9) + 1
    ideals = []
    for a in range(1, bound + 1):
        for b in range(0, 2 * a):
            if (b - D) % 2 == 0 and (b * b - D) % (4 * a) == 0:
                ideals.append(_ideal_basis(a, b))
    # union-find on equivalence
    parent = list(range(len(ideals)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, I in enumerate(ideals):
        for j in range(i):
            if find(i) != find(j) and _principal(_ideal_mul(I, _conj(ideals[j]), D), D):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(ideals))})


def _ideal_basis(a: int, b: int) -> list[list[int]]:
    # a Z + (b + sqrt D)/2 Z in (u, v) coordinates
    return hnf([[2 * a, 0], [b, 1]], 2)


def _conj(I):
    return hnf([[u, -v] for u, v in I], 2)


def _ideal_mul(I, J, D):
    prods = []
    for u1, v1 in I:
        for u2, v2 in J:
            prods.append([(u1 * u2 + D * v1 * v2) // 2, (u1 * v2 + u2 * v1) // 2])
    return hnf(prods, 2)


def _norm_of_ideal(I) -> int:
    # O_K has covolume 1 in (u, v) coordinates: basis (2, 0), (D mod 2, 1)
    return abs(det(I)) // 2


def _principal(I, D) -> bool:
    N = _norm_of_ideal(I)
    vmax = isqrt(4 * N // -D) + 1
    for v in range(-vmax, vmax + 1):
        r = 4 * N + D * v * v
        if r < 0:
            continue
        u = isqrt(r)
        if u * u == r:
            for uu in {u, -u}:
                if in_lattice([uu, v], I):
                    return True
    return False


# ---------------------------------------------------------------------------
# finite modules with Galois action


class GModuleFinite:
    """Z^r / L with L spanned by ``relations``; ``gen_actions[i]`` is the
    matrix of the i-th invariant-factor generator of ``group``."""

    def __init__(self, group: FiniteAbelianGroup, relations: Sequence[Sequence[int]],
                 gen_actions: Sequence[Sequence[Sequence[int]]], rank: int | None = None):
        r = rank if rank is not None else len(gen_actions[0]) if gen_actions else len(relations[0])
        L = hnf(list(relations), r)
        if len(L) != r:
            raise ValueError("relation lattice must have full rank (module must be finite)")
        self.group = group
        self.rank = r
        self.relations = L
        self.gen_actions = [[[x for x in row] for row in A] for A in gen_actions]
        for A in self.gen_actions:
            for row in self.relations:
                if not in_lattice(vec_mat(row, A), self.relations):
                    raise ValueError("action does not preserve the relation lattice")

    @cached_property
    def order(self) -> int:
        return abs(det(self.relations))

    @cached_property
    def invariant_factors(self) -> list[int]:
        diag, _, _ = smith_normal_form(self.relations)
        return sorted(d for d in diag if d > 1)

    def action(self, i: int) -> list[list[int]]:
        """Matrix of the group element with index i."""
        return self._all_actions[i]

    @cached_property
    def _all_actions(self) -> list[list[list[int]]]:
        G = self.group
        r = self.rank
        ident = [[int(i == j) for j in range(r)] for i in range(r)]
        mats = []
        for exps in G.elements:
            M = ident
            for A, k in zip(self.gen_actions, exps):
                for _ in range(k):
                    M = mat_mul(M, A)
            mats.append(self._reduce_matrix(M))
        return mats

    def _reduce_matrix(self, M):
        # keep entries small: reduce rows modulo the diagonal of a nice basis
        # when the relation lattice is diagonal; otherwise leave untouched.
        diag = [self.relations[i][i] for i in range(self.rank)]
        if all(self.relations[i][j] == 0 for i in range(self.rank) for j in range(self.rank) if i != j):
            return [[x % diag[j] for j, x in enumerate(row)] for row in M]
        return M

    def act(self, i: int, x: Sequence[int]) -> list[int]:
        return vec_mat(x, self.action(i))

    def is_zero(self, x: Sequence[int]) -> bool:
        return in_lattice(list(x), self.relations)

    def orbit_span(self, vectors: Sequence[Sequence[int]]) -> list[list[int]]:
        return [self.act(i, v) for v in vectors for i in range(self.group.order)]

    def quotient(self, vectors: Sequence[Sequence[int]]) -> "GModuleFinite":
        """M / (Z[G]-submodule generated by vectors)."""
        rels = self.relations + self.orbit_span(vectors)
        return GModuleFinite(self.group, rels, self.gen_actions, self.rank)

    def odd_part(self) -> "GModuleFinite":
        e = self.invariant_factors[-1] if self.invariant_factors else 1
        b = e
        while b % 2 == 0:
            b //= 2
        r = self.rank
        return GModuleFinite(self.group, self.relations + [[b * int(i == j) for j in range(r)] for i in range(r)],
                             self.gen_actions, r)

    def minus_part(self, rho: int) -> "GModuleFinite":
        """M / (1 + rho) M, which is the minus part once M has odd order."""
        if self.order % 2 == 0:
            raise ValueError("minus part via (1 + rho) needs odd order; take odd_part first")
        A = self.action(rho)
        r = self.rank
        extra = [[int(i == j) + A[i][j] for j in range(r)] for i in range(r)]
        return GModuleFinite(self.group, self.relations + extra, self.gen_actions, r)

    def snf_presentation(self) -> tuple[list[int], list[list[list[int]]]]:
        """Invariant factors and generator action matrices in SNF coordinates."""
        diag, _, V = smith_normal_form(self.relations)
        Vinv = mat_inverse(V)
        keep = [i for i, d in enumerate(diag) if d != 1]
        mats = []
        for A in self.gen_actions:
            B = mat_mul(mat_mul(Vinv, A), V)
            mats.append([[int(B[i][j]) % diag[j] for j in keep] for i in keep])
        return [diag[i] for i in keep], mats

    def to_json(self) -> dict:
        inv, mats = self.snf_presentation()
        return {"order": self.order, "invariant_factors": inv,
                "group_invariants": list(self.group.invariants), "action_matrices": mats}


def direct_sum(M1: GModuleFinite, M2: GModuleFinite) -> GModuleFinite:
    if M1.group != M2.group:
        raise ValueError("modules over different groups")
    r1, r2 = M1.rank, M2.rank
    rels = [list(row) + [0] * r2 for row in M1.relations] + [[0] * r1 + list(row) for row in M2.relations]
    acts = []
    for A, B in zip(M1.gen_actions, M2.gen_actions):
        acts.append([list(row) + [0] * r2 for row in A] + [[0] * r1 + list(row) for row in B])
    return GModuleFinite(M1.group, rels, acts, r1 + r2)


def dualize(M: GModuleFinite) -> GModuleFinite:
    """Pontryagin dual with (sigma f)(x) = f(sigma^{-1} x)."""
    B = M.relations
    r = M.rank
    Binv = mat_inverse(B)
    BinvT = [list(col) for col in zip(*Binv)]
    BT = [list(col) for col in zip(*B)]
    G = M.group
    acts = []
    for k in range(len(G.invariants)):
        gidx = G.index([int(i == k) for i in range(len(G.invariants))])
        Ainv = M.action(G.inverses[gidx])
        AinvT = [list(col) for col in zip(*Ainv)]
        C = mat_mul(mat_mul(BinvT, AinvT), BT)
        if any(x.denominator != 1 for row in C for x in row):
            raise ArithmeticError("dual action is not integral")
        acts.append([[int(x) for x in row] for row in C])
    return GModuleFinite(G, BT, acts, r)


# ---------------------------------------------------------------------------
# residue units (O_K / q)^x


def _coset_data(K: AbelianFieldQ, q: int):
    G = K.group
    pd = K.place_data(q)
    F = pd.frobenius
    powers = {}
    x, i = 0, 0
    while x not in powers:
        powers[x] = i
        x = G.mul(x, F)
        i += 1
    D = frozenset(powers)
    reps = []
    seen = set()
    for s in range(G.order):
        if s not in seen:
            reps.append(s)
            seen |= {G.mul(s, d) for d in D}
    coset_of = {}
    for j, t in enumerate(reps):
        for d in D:
            coset_of[G.mul(t, d)] = j
    return pd, powers, reps, coset_of


def residue_gmodule(K: AbelianFieldQ, q: int) -> GModuleFinite:
    """(O_K / q O_K)^x in discrete-log coordinates on the primes above q.

    Coordinate j is the log of t_j^{-1}(x) mod w_0 for coset representatives
    t_j of G / <Frob_q>; Frobenius acts on a residue field as y -> y^q.
    """
    if K.n % q == 0:
        raise ValueError(f"{q} is ramified in {K}")
    G = K.group
    pd, powers, reps, coset_of = _coset_data(K, q)
    f = pd.residue_degree
    N = q ** f - 1
    g = len(reps)
    rels = [[N * int(i == j) for j in range(g)] for i in range(g)]
    acts = []
    for k in range(len(G.invariants)):
        sigma = G.index([int(i == k) for i in range(len(G.invariants))])
        A = [[0] * g for _ in range(g)]
        sig_inv = G.inverses[sigma]
        for j, tj in enumerate(reps):
            tk_idx = coset_of[G.mul(tj, sig_inv)]
            tk = reps[tk_idx]
            d = G.mul(G.mul(G.inverses[tj], sigma), tk)
            A[tk_idx][j] = pow(q, powers[d], N) if N > 1 else 0
        acts.append(A)
    return GModuleFinite(G, rels, acts, g)


def _exp_mod(a: int, n: int, m: int) -> int:
    x = a
    while gcd(x, m) != 1:
        x += n
    return x % m


def roots_of_unity_vector(K: AbelianFieldQ, q: int, root_choice: int = 1) -> list[int]:
    """Image of a generator of mu_K in residue_gmodule(K, q).

    ``root_choice`` picks which primitive root of unity the fixed prime w_0
    sees; the generated submodule does not depend on it.
    """
    pd, powers, reps, coset_of = _coset_data(K, q)
    f = pd.residue_degree
    N = q ** f - 1
    m = K.roots_of_unity_order
    mp = m
    while mp % q == 0:
        mp //= q
    if gcd(root_choice, mp) != 1:
        raise ValueError("root_choice must be prime to the order of mu_K")
    base = (N // mp) * root_choice
    out = []
    for t in reps:
        a = _exp_mod(K.rep(t), K.n, mp)
        out.append(base * pow(a, -1, mp) % N if mp > 1 else 0)
    return out


def residue_module_T(K: AbelianFieldQ, T: Sequence[int]) -> GModuleFinite:
    mods = [residue_gmodule(K, q) for q in sorted(T)]
    M = mods[0]
    for X in mods[1:]:
        M = direct_sum(M, X)
    return M


def relative_class_number_odd_part(K: AbelianFieldQ) -> int:
    """Odd part of h^- = Q w prod_{chi odd} (-B_{1,chi}/2), Q in {1, 2}."""
    val = Fraction(K.roots_of_unity_order)
    F = cyclotomic_field(K.group.exponent)
    prod_ = F.scalar(1)
    for chi in K.characters:
        if chi.is_odd():
            prod_ = prod_ * (bernoulli_b1(chi) * Fraction(-1, 2))
    val *= prod_.to_rational()
    num = abs(val.numerator)
    den = val.denominator
    while num % 2 == 0:
        num //= 2
    while den % 2 == 0:
        den //= 2
    if den != 1:
        raise ArithmeticError(f"relative class number formula gave {val}")
    return num


@dataclass
class TRayMinus:
    """Odd minus part of Cl_K^T, as an extension of Cl_K^- by ``module``."""

    field: AbelianFieldQ
    T: tuple[int, ...]
    module: GModuleFinite
    class_number_odd: int
    scope: str

    @property
    def order(self) -> int:
        return self.module.order * self.class_number_odd


def t_ray_minus_module(K: AbelianFieldQ, T: Sequence[int], root_choice: int = 1) -> TRayMinus:
    T = tuple(sorted(set(T)))
    if not K.is_cm:
        raise UnsupportedScope(f"{K} is not CM")
    if not check_T_admissible(K, T):
        raise ValueError(f"T = {list(T)} is not admissible for {K}")
    if K.degree == 2:
        h = class_number_imag_quadratic(-K.n)
        while h % 2 == 0:
            h //= 2
        scope = "quadratic"
    else:
        h = relative_class_number_odd_part(K)
        if h != 1:
            raise UnsupportedScope(
                f"{K} has odd relative class number part {h}; only quadratic fields or "
                f"fields with trivial odd minus class group are supported")
        scope = "trivial-odd-minus-class-group"
    R = residue_module_T(K, T)
    mu = []
    for q in T:
        mu += roots_of_unity_vector(K, q, root_choice)
    M = R.odd_part().minus_part(K.rho).quotient([mu])
    return TRayMinus(K, T, M, h, scope)


# ---------------------------------------------------------------------------
# presentations and Fitting ideals over R0 = Z[G]/(1 + rho)


class InfiniteCokernel(ValueError):
    pass


@dataclass
class PresentedModule:
    """Cokernel of R0^{#relations} -> R0^{ngens}; each relation is a list of
    ``ngens`` vectors in R0 coordinates."""

    ring: MinusRing
    ngens: int
    relations: list[list[list[int]]] = field(default_factory=list)


def _ring_span_rows(ring: MinusRing, rows: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    """Z-span of G-translates of rows in R0^k (flattened coordinates)."""
    d = ring.dim
    out = []
    for row in rows:
        comps = [ring.from_vector(row[i * d:(i + 1) * d]) for i in range(k)]
        for t in ring.transversal:
            gt = GroupRingElement.basis(ring.group, t)
            v = []
            for c in comps:
                v += [int(x) for x in ring.to_vector(gt * c)]
            out.append(v)
    return out


def present_over_minus_ring(M: GModuleFinite, rho: int) -> PresentedModule:
    r = M.rank
    A = M.action(rho)
    for i in range(r):
        if not M.is_zero([A[i][j] + int(i == j) for j in range(r)]):
            raise ValueError("rho does not act as -1; minus-project first")
    if M.order % 2 == 0:
        raise ValueError("module must have odd order")
    ring = MinusRing(M.group, rho)
    # greedy choice of R0-generators among the standard basis vectors
    gens: list[list[int]] = []
    span = list(M.relations)
    for i in range(r):
        e = [int(i == j) for j in range(r)]
        H = hnf(span, r)
        if not in_lattice(e, H):
            gens.append(e)
            span = H + [M.act(t, e) for t in ring.transversal]
    k = len(gens)
    if k == 0:
        return PresentedModule(ring, 0, [])
    # images of the Z-basis (generator i, transversal element t)
    images = [M.act(t, g) for g in gens for t in ring.transversal]
    dk = len(images)
    aug = [img + [int(a == b) for b in range(dk)] for a, img in enumerate(images)]
    aug += [list(row) + [0] * dk for row in M.relations]
    H, _ = hnf_with_transform(aug, r + dk)
    kernel = [row[r:] for row in H if not any(row[:r])]
    # the Z-basis of the kernel is an R0-generating set; keep a greedy subset
    chosen: list[list[int]] = []
    cur: list[list[int]] = []
    for row in kernel:
        if cur and in_lattice(row, cur):
            continue
        chosen.append(row)
        cur = hnf(_ring_span_rows(ring, chosen, k), dk)
    d = ring.dim
    # kernel vector layout is (generator, transversal index)
    rels = [[row[i * d:(i + 1) * d] for i in range(k)] for row in chosen]
    return PresentedModule(ring, k, rels)


def _det_ring(mat: list[list[GroupRingElement]]) -> GroupRingElement:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    G = mat[0][0].group
    total = GroupRingElement.zero(G)
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det_ring(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def fitting_ideal(P: PresentedModule) -> IdealLattice:
    ring = P.ring
    if P.ngens == 0:
        return IdealLattice.unit(ring)
    if len(P.relations) < P.ngens:
        raise InfiniteCokernel("fewer relations than generators")
    rows = [[ring.from_vector(v) for v in rel] for rel in P.relations]
    minors = []
    for sub in itertools.combinations(range(len(rows)), P.ngens):
        dm = _det_ring([rows[i] for i in sub])
        if any(ring.to_vector(dm)):
            minors.append(dm)
    if not minors:
        raise InfiniteCokernel("all maximal minors vanish")
    try:
        return IdealLattice.from_generators(ring, minors)
    except LatticeError as exc:
        raise InfiniteCokernel(str(exc)) from exc


def fitting_of_module(M: GModuleFinite, rho: int) -> IdealLattice:
    return fitting_ideal(present_over_minus_ring(M, rho))
