"""Finite groups given by Cayley tables.

Elements are the indices ``0 .. order-1``.  Permutations compose right to
left, ``(p * q)(i) = p(q(i))``.  Builders place the identity at index 0
and order the remaining elements deterministically.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import GroupAxiomError, PreconditionError, VerificationError
from .fgab import AbElement, AbMorphism, FgAbGroup, IntMatrix, canonical_form

MAX_ORDER = 512


class FiniteGroup:
    """Group with a validated Cayley table."""

    def __init__(self, table, identity: int = 0, check: bool = True, name: str | None = None,
                 labels: Sequence | None = None):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupAxiomError("Cayley table must be a nonempty square array")
        n = t.shape[0]
        if n > MAX_ORDER:
            raise PreconditionError(f"group order {n} exceeds the cap {MAX_ORDER}")
        self.order = n
        self.identity = int(identity)
        self.name = name
        self.labels = list(labels) if labels is not None else None
        if check:
            _validate_table(t, self.identity)
        t.setflags(write=False)
        self.table = t
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(t == self.identity)
        inv[rows] = cols
        inv.setflags(write=False)
        self.inverses = inv

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.identity == other.identity and self.order == other.order
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.order, self.identity, self.table.tobytes()))

    def __len__(self):
        return self.order

    def mul(self, a, b) -> int:
        return int(self.table[a, b])

    def inv(self, a) -> int:
        return int(self.inverses[a])

    def elements(self):
        return range(self.order)

    def prod(self, seq) -> int:
        x = self.identity
        for a in seq:
            x = int(self.table[x, a])
        return x

    def power(self, a, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        x, base = self.identity, a
        while k:
            if k & 1:
                x = int(self.table[x, base])
            base = int(self.table[base, base])
            k >>= 1
        return x

    def commutator(self, a, b) -> int:
        return self.prod([a, b, self.inv(a), self.inv(b)])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n, e = self.order, self.identity
        idx = np.arange(n)
        cur = idx.copy()
        orders = np.zeros(n, dtype=np.int64)
        for k in range(1, n + 1):
            hit = (cur == e) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, idx]
        orders.setflags(write=False)
        return orders

    def element_order(self, a) -> int:
        return int(self.element_orders[a])

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generators(self) -> tuple:
        """Greedy generating set: repeatedly add an element of largest order
        (lowest index on ties) outside the current subgroup."""
        gens = []
        members = np.zeros(self.order, dtype=bool)
        members[self.identity] = True
        by_order = sorted(self.elements(), key=lambda a: (-self.element_order(a), a))
        for a in by_order:
            if members.all():
                break
            if not members[a]:
                gens.append(a)
                members = _closure_mask(self, gens)
        return tuple(gens)


def _validate_table(t: np.ndarray, e: int):
    n = t.shape[0]
    if not (0 <= e < n):
        raise GroupAxiomError(f"identity index {e} out of range")
    if t.min() < 0 or t.max() >= n:
        raise GroupAxiomError("table entries out of range")
    idx = np.arange(n)
    bad = np.nonzero(t[e, :] != idx)[0]
    if bad.size:
        raise GroupAxiomError(f"identity fails on the left: e*{bad[0]} != {bad[0]}")
    bad = np.nonzero(t[:, e] != idx)[0]
    if bad.size:
        raise GroupAxiomError(f"identity fails on the right: {bad[0]}*e != {bad[0]}")
    for a in range(n):
        if not np.any(t[a, :] == e) or not np.any(t[:, a] == e):
            raise GroupAxiomError(f"element {a} has no inverse")
    for a in range(n):
        left = t[t[a, :], :]  # (a b) c
        right = t[a, t]  # a (b c)
        diff = np.argwhere(left != right)
        if diff.size:
            b, c = diff[0]
            raise GroupAxiomError(f"associativity fails for the triple ({a}, {b}, {c})")


def _closure_mask(G: FiniteGroup, gens) -> np.ndarray:
    members = np.zeros(G.order, dtype=bool)
    members[G.identity] = True
    gens = np.array(sorted(set(int(g) for g in gens)), dtype=np.int64)
    if gens.size == 0:
        return members
    frontier = np.array([G.identity])
    while frontier.size:
        new = np.unique(G.table[np.ix_(frontier, gens)].ravel())
        new = new[~members[new]]
        members[new] = True
        frontier = new
    return members


def group_from_cayley(table, identity: int = 0, name=None) -> FiniteGroup:
    return FiniteGroup(table, identity, name=name)


def group_from_elements(elements: Sequence, mul, identity, name=None) -> FiniteGroup:
    """Cayley table of a closed list of hashable elements under ``mul``;
    the identity is moved to index 0 and the rest keep their order."""
    elements = [identity] + [x for x in elements if x != identity]
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[mul(x, y)]
    return FiniteGroup(table, 0, check=False, name=name, labels=elements)


def _perm_mul(p, q):
    return tuple(p[i] for i in q)


def permutation_closure(degree: int, generators: Iterable[Sequence[int]]) -> list:
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupAxiomError(f"{list(g)} is not a permutation of 0..{degree - 1}")
    e = tuple(range(degree))
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _perm_mul(x, g)
            if y not in seen:
                if len(seen) >= MAX_ORDER:
                    raise PreconditionError(f"permutation group exceeds order {MAX_ORDER}")
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def group_from_permutations(degree: int, generators, name=None) -> FiniteGroup:
    elems = permutation_closure(degree, generators)
    return group_from_elements(elems, _perm_mul, tuple(range(degree)), name=name)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise PreconditionError("cyclic group order must be positive")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, 0, check=False, name=f"Z/{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name=None) -> FiniteGroup:
    """Elements ``(g, h)`` at index ``g * |H| + h``; identity needs index 0."""
    if G.identity or H.identity:
        raise PreconditionError("direct_product expects identities at index 0")
    n, m = G.order, H.order
    t = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(n * m, n * m)
    nm = name or f"{G.name or G.order}×{H.name or H.order}"
    return FiniteGroup(t, 0, check=False, name=nm)


def product_projections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup):
    m = H.order
    idx = np.arange(P.order)
    return (GroupHom(P, G, idx // m), GroupHom(P, H, idx % m))


def product_injections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup):
    m = H.order
    return (GroupHom(G, P, np.arange(G.order) * m), GroupHom(H, P, np.arange(H.order)))


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return cyclic_group(1)
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return group_from_permutations(n, gens, name=f"S_{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return cyclic_group(1)
    gens = []
    for k in range(2, n):
        gens.append(tuple([1, 2, 0] + list(range(3, n))) if k == 2 else
                    tuple(_three_cycle(n, 0, 1, k)))
    return group_from_permutations(n, gens, name=f"A_{n}")


def _three_cycle(n, a, b, c):
    p = list(range(n))
    p[a], p[b], p[c] = b, c, a
    return p


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the ``n``-gon (order ``2n``)."""
    if n == 1:
        return cyclic_group(2)
    if n == 2:
        return klein_four()
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    return group_from_permutations(n, [r, s], name=f"D_{n}")


def klein_four() -> FiniteGroup:
    G = direct_product(cyclic_group(2), cyclic_group(2))
    G.name = "V_4"
    return G


def quaternion_group() -> FiniteGroup:
    """``Q8`` as a regular permutation group."""
    # elements 1,i,j,k,-1,-i,-j,-k on points 0..7
    def q(a, b):
        sa, ia = divmod(a, 4)
        sb, ib = divmod(b, 4)
        tab = [[(0, 0), (0, 1), (0, 2), (0, 3)],
               [(0, 1), (1, 0), (0, 3), (1, 2)],
               [(0, 2), (1, 3), (1, 0), (0, 1)],
               [(0, 3), (0, 2), (1, 1), (1, 0)]]
        s, i = tab[ia][ib]
        return 4 * ((s + sa + sb) % 2) + i

    gens = [tuple(q(1, x) for x in range(8)), tuple(q(2, x) for x in range(8))]
    return group_from_permutations(8, gens, name="Q8")


def dicyclic_group(n: int) -> FiniteGroup:
    """``Dic_n`` of order ``4n`` (``Dic_2 = Q8``)."""
    m = 2 * n
    # elements (a, e): x^a y^e with x^{2n} = 1, y^2 = x^n, y x y^-1 = x^-1
    def mul(u, v):
        a, e = u
        b, f = v
        if e == 0:
            return ((a + b) % m, f)
        # y x^b = x^-b y
        a2 = (a - b) % m
        if f == 0:
            return (a2, 1)
        return ((a2 + n) % m, 0)

    elems = [(a, e) for e in (0, 1) for a in range(m)]
    return group_from_elements(elems, mul, (0, 0), name=f"Dic_{n}")


def _matmul_mod(p):
    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
    return mul


def _check_small_prime(p):
    if p not in (2, 3, 5, 7):
        raise PreconditionError(f"p = {p} must be a prime at most 7")


def sl2(p: int) -> FiniteGroup:
    """``SL(2, p)`` on matrices ``(a, b, c, d)`` with entries mod ``p``."""
    _check_small_prime(p)
    elems = [m for m in itertools.product(range(p), repeat=4)
             if (m[0] * m[3] - m[1] * m[2]) % p == 1]
    return group_from_elements(elems, _matmul_mod(p), (1, 0, 0, 1), name=f"SL(2,{p})")


def psl2(p: int) -> FiniteGroup:
    """``SL(2, p) / {±1}``."""
    G = sl2(p)
    Z = center(G)
    Q, _ = quotient_group(G, Z)
    Q.name = f"PSL(2,{p})"
    return Q


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    @classmethod
    def from_mask(cls, G, mask):
        return cls(G, tuple(int(x) for x in np.nonzero(mask)[0]))

    @property
    def order(self):
        return len(self.elements)

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    def __contains__(self, a):
        return bool(self.mask[a])

    def is_trivial(self):
        return self.order == 1

    def is_whole(self):
        return self.order == self.parent.order

    def __le__(self, other):
        return set(self.elements) <= set(other.elements)

    def __repr__(self):
        return f"Subgroup(order {self.order} of {self.parent!r})"


def whole(G) -> Subgroup:
    return Subgroup(G, tuple(G.elements()))


def trivial_subgroup(G) -> Subgroup:
    return Subgroup(G, (G.identity,))


def subgroup_generated(G: FiniteGroup, gens) -> Subgroup:
    return Subgroup.from_mask(G, _closure_mask(G, gens))


def is_normal(G: FiniteGroup, N: Subgroup) -> bool:
    els = np.array(N.elements)
    for g in G.elements():
        conj = G.table[G.table[g, els], G.inverses[g]]
        if not N.mask[conj].all():
            return False
    return True


def conjugates(G: FiniteGroup, xs) -> set:
    xs = np.array(sorted(set(int(x) for x in xs)), dtype=np.int64)
    out = set()
    for g in G.elements():
        out.update(int(y) for y in G.table[G.table[g, xs], G.inverses[g]])
    return out


def normal_closure(G: FiniteGroup, gens) -> Subgroup:
    gens = list(gens)
    if not gens:
        return trivial_subgroup(G)
    return subgroup_generated(G, conjugates(G, gens))


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    mask = np.all(t == t.T, axis=1)
    return Subgroup.from_mask(G, mask)


def higgins_commutator(G: FiniteGroup, K: Subgroup, L: Subgroup) -> Subgroup:
    """Subgroup generated by ``k l k^-1 l^-1`` for ``k ∈ K``, ``l ∈ L``."""
    k = np.array(K.elements)[:, None]
    l = np.array(L.elements)[None, :]
    t, inv = G.table, G.inverses
    comms = t[t[t[k, l], inv[k]], inv[l]]
    return subgroup_generated(G, np.unique(comms))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    return higgins_commutator(G, whole(G), whole(G))


def is_perfect(G: FiniteGroup) -> bool:
    return derived_subgroup(G).is_whole()


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup.from_mask(A.parent, A.mask & B.mask)


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    return subgroup_generated(A.parent, A.elements + B.elements)


def normal_subgroups(G: FiniteGroup) -> list:
    """All normal subgroups (joins of normal closures of single elements)."""
    found = {}
    for a in G.elements():
        N = normal_closure(G, [a])
        found[N.elements] = N
    changed = True
    while changed:
        changed = False
        items = list(found.values())
        for A, B in itertools.combinations(items, 2):
            J = join(A, B)
            if J.elements not in found:
                found[J.elements] = J
                changed = True
    return sorted(found.values(), key=lambda N: (N.order, N.elements))


def subgroup_as_group(S: Subgroup, name=None):
    """``(H, inclusion)`` with ``H`` a standalone group."""
    G = S.parent
    els = [G.identity] + [x for x in S.elements if x != G.identity]
    index = {x: i for i, x in enumerate(els)}
    sub = G.table[np.ix_(els, els)]
    table = np.vectorize(index.__getitem__)(sub) if sub.size else sub
    H = FiniteGroup(table, 0, check=False, name=name)
    return H, GroupHom(H, G, np.array(els))


# ---------------------------------------------------------------------------
# homomorphisms and quotients
# ---------------------------------------------------------------------------


class GroupHom:
    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping, check: bool = True):
        m = np.array(mapping, dtype=np.int64)
        if m.shape != (source.order,):
            raise ValueError("map vector has the wrong length")
        if m.size and (m.min() < 0 or m.max() >= target.order):
            raise ValueError("map vector entries out of range")
        self.source, self.target, self.map = source, target, m
        m.setflags(write=False)
        if check:
            lhs = m[source.table]
            rhs = target.table[m[:, None], m[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                a, b = bad[0]
                raise VerificationError(f"not a homomorphism: f({a}*{b}) != f({a})f({b})")

    def __call__(self, a) -> int:
        return int(self.map[a])

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(other.source, self.target, self.map[other.map], check=False)

    def __eq__(self, other):
        return (isinstance(other, GroupHom) and self.source == other.source
                and self.target == other.target and np.array_equal(self.map, other.map))

    __hash__ = None

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r})"

    @classmethod
    def identity(cls, G):
        return cls(G, G, np.arange(G.order), check=False)

    @classmethod
    def trivial(cls, G, H):
        return cls(G, H, np.full(G.order, H.identity), check=False)

    def kernel(self) -> Subgroup:
        return Subgroup.from_mask(self.source, self.map == self.target.identity)

    def image(self) -> Subgroup:
        mask = np.zeros(self.target.order, dtype=bool)
        mask[self.map] = True
        return Subgroup.from_mask(self.target, mask)

    def is_injective(self):
        return self.kernel().is_trivial()

    def is_surjective(self):
        return self.image().is_whole()

    def image_of(self, S: Subgroup) -> Subgroup:
        mask = np.zeros(self.target.order, dtype=bool)
        mask[self.map[list(S.elements)]] = True
        return Subgroup.from_mask(self.target, mask)

    def preimage(self, S: Subgroup) -> Subgroup:
        return Subgroup.from_mask(self.source, S.mask[self.map])


def coset_labels(G: FiniteGroup, N: Subgroup) -> np.ndarray:
    """Coset index of each element; the coset of the identity is 0 and the
    others are numbered by their least element."""
    label = np.full(G.order, -1, dtype=np.int64)
    els = np.array(N.elements)
    label[G.table[G.identity, els]] = 0
    nxt = 1
    for g in G.elements():
        if label[g] < 0:
            label[G.table[g, els]] = nxt
            nxt += 1
    return label


def quotient_group(G: FiniteGroup, N: Subgroup):
    """``(G/N, projection)``."""
    if not is_normal(G, N):
        raise PreconditionError("quotient by a subgroup that is not normal")
    label = coset_labels(G, N)
    k = int(label.max()) + 1
    reps = np.zeros(k, dtype=np.int64)
    for g in range(G.order - 1, -1, -1):
        reps[label[g]] = g
    table = label[G.table[np.ix_(reps, reps)]]
    Q = FiniteGroup(table, 0, check=False)
    return Q, GroupHom(G, Q, label, check=False)


def subquotient(G: FiniteGroup, S: Subgroup, K: Subgroup, name=None):
    """``S/K`` for ``K`` normal in ``S``; returns the group and the coset
    label of each element of ``S`` (``-1`` outside ``S``)."""
    H, inc = subgroup_as_group(S)
    Kh = inc.preimage(K)
    Q, p = quotient_group(H, Kh)
    Q.name = name
    labels = np.full(G.order, -1, dtype=np.int64)
    labels[inc.map] = p.map
    return Q, labels


# ---------------------------------------------------------------------------
# abelian groups and abelianisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianData:
    """A finite abelian group converted to an :class:`FgAbGroup`.

    ``coords[a]`` gives the coordinates of element ``a`` on the generators
    ``gen_elements``.
    """

    group: FgAbGroup
    coords: tuple
    gen_elements: tuple

    def element(self, a) -> AbElement:
        return self.group.element(self.coords[a])


def abelian_to_fgab(G: FiniteGroup) -> AbelianData:
    """Triangular normal form: ``g_1^{e_1} ... g_r^{e_r}``, ``0 <= e_i < m_i``,
    then the canonical invariants."""
    if not G.is_abelian():
        raise PreconditionError("group is not abelian")
    gens, rel_orders, rel_cols = [], [], []
    coords = {G.identity: ()}
    for g in G.generators:
        r = len(gens)
        # relative order of g modulo the current subgroup
        m, x = 1, g
        while x not in coords:
            x = G.mul(x, g)
            m += 1
        lower = coords[x]
        col = [-c for c in lower] + [0] * (r - len(lower)) + [m]
        rel_cols.append(col)
        new = {}
        for h, c in coords.items():
            y = h
            for e in range(m):
                new[y] = tuple(c) + (0,) * (r - len(c)) + (e,)
                y = G.mul(y, g)
        coords = new
        gens.append(g)
        rel_orders.append(m)
    r = len(gens)
    rels = IntMatrix.from_columns([col + [0] * (r - len(col)) for col in rel_cols], r)
    A0 = FgAbGroup(r, rels)
    A, to, _ = canonical_form(A0)
    out = [None] * G.order
    for a, c in coords.items():
        c = tuple(c) + (0,) * (r - len(c))
        out[a] = A.normal_form(to.matrix @ c)
    # generators of A as elements of G
    gen_el = []
    back = canonical_form(A0)[2]
    for j in range(A.ngens):
        v = back.matrix.col(j)
        gen_el.append(G.prod(G.power(gens[i], v[i]) for i in range(r)))
    return AbelianData(A, tuple(out), tuple(gen_el))


@dataclass(frozen=True)
class Abelianisation:
    """``ab(G)`` with its unit ``G -> ab(G)``."""

    G: FiniteGroup
    commutator: Subgroup
    quotient: FiniteGroup
    projection: GroupHom
    data: AbelianData

    @property
    def group(self) -> FgAbGroup:
        return self.data.group

    def unit(self, g) -> AbElement:
        return self.data.element(self.projection(g))

    def unit_coords(self):
        return [self.data.coords[self.projection(g)] for g in self.G.elements()]

    def representatives(self):
        """Elements of ``G`` mapping onto the generators of ``ab(G)``."""
        p = self.projection.map
        return [int(np.nonzero(p == q)[0][0]) for q in self.data.gen_elements]


def abelianisation(G: FiniteGroup) -> Abelianisation:
    D = derived_subgroup(G)
    Q, p = quotient_group(G, D)
    return Abelianisation(G, D, Q, p, abelian_to_fgab(Q))


def ab_map(f: GroupHom, abG: Abelianisation | None = None,
           abH: Abelianisation | None = None) -> AbMorphism:
    """``ab(f): ab(G) -> ab(H)``."""
    abG = abG or abelianisation(f.source)
    abH = abH or abelianisation(f.target)
    cols = [abH.unit(f(g)).coords for g in abG.representatives()]
    return AbMorphism(abG.group, abH.group, IntMatrix.from_columns(cols, abH.group.ngens))


def exponent_k_abelianisation(G: FiniteGroup, k: int) -> Abelianisation:
    """``G / [G,G] G^k`` (``k = 0`` gives the abelianisation)."""
    if k == 0:
        return abelianisation(G)
    D = derived_subgroup(G)
    powers = {G.power(g, k) for g in G.elements()}
    N = subgroup_generated(G, set(D.elements) | powers)
    Q, p = quotient_group(G, N)
    return Abelianisation(G, N, Q, p, abelian_to_fgab(Q))


def group_from_fgab(A: FgAbGroup) -> FiniteGroup:
    """Finite ``A`` as a Cayley-table group (elements in enumeration order)."""
    els = list(A.elements())
    index = {x.coords: i for i, x in enumerate(els)}
    n = len(els)
    t = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            t[i, j] = index[(x + y).coords]
    zero = index[A.zero().coords]
    return FiniteGroup(t, zero, check=False)


# ---------------------------------------------------------------------------
# homomorphism enumeration
# ---------------------------------------------------------------------------


def hom_enumerate(G: FiniteGroup, H: FiniteGroup, constraints: Mapping | None = None,
                  gens: Sequence[int] | None = None, limit: int | None = None) -> list:
    """All homomorphisms ``G -> H``, sorted by image vector.

    ``constraints`` maps elements of ``G`` to a required image or to a set
    of allowed images.  Generator images are chosen by backtracking with
    order divisibility; each partial assignment is extended over the
    subgroup it generates and pruned on the first inconsistency.
    """
    gens = list(gens) if gens is not None else list(G.generators)
    allowed = {}
    for a, v in (constraints or {}).items():
        allowed[int(a)] = {int(v)} if isinstance(v, (int, np.integer)) else {int(x) for x in v}
    h_orders = H.element_orders
    cand = []
    for s in gens:
        o = G.element_order(s)
        c = [int(x) for x in np.nonzero(o % h_orders == 0)[0]]
        if s in allowed:
            c = [x for x in c if x in allowed[s]]
        cand.append(c)
    results = []
    tG, tH = G.table, H.table

    def extend(assign):
        # map on the subgroup generated by the assigned generators
        m = np.full(G.order, -1, dtype=np.int64)
        m[G.identity] = H.identity
        frontier = [G.identity]
        gs = gens[:len(assign)]
        while frontier:
            nxt = []
            for x in frontier:
                for s, v in zip(gs, assign):
                    y = int(tG[x, s])
                    w = int(tH[m[x], v])
                    if m[y] < 0:
                        if y in allowed and w not in allowed[y]:
                            return None
                        m[y] = w
                        nxt.append(y)
                    elif m[y] != w:
                        return None
            frontier = nxt
        return m

    def rec(assign):
        if limit is not None and len(results) >= limit:
            return
        m = extend(assign)
        if m is None:
            return
        if len(assign) == len(gens):
            results.append(m)
            return
        for v in cand[len(assign)]:
            rec(assign + [v])

    rec([])
    results.sort(key=lambda m: tuple(m))
    return [GroupHom(G, H, m, check=False) for m in results]


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Extension:
    """``A --iota--> E --pi--> X`` short exact."""

    A: FiniteGroup
    E: FiniteGroup
    X: FiniteGroup
    iota: GroupHom
    pi: GroupHom
    name: str | None = None

    def __post_init__(self):
        if self.iota.source != self.A or self.iota.target != self.E:
            raise PreconditionError("iota has the wrong source or target")
        if self.pi.source != self.E or self.pi.target != self.X:
            raise PreconditionError("pi has the wrong source or target")
        if not self.iota.is_injective():
            raise PreconditionError("iota is not injective")
        if not self.pi.is_surjective():
            raise PreconditionError("pi is not surjective")
        if self.pi.kernel().elements != self.iota.image().elements:
            raise PreconditionError("kernel of pi differs from the image of iota")

    @property
    def arity(self):
        return 1

    @property
    def kernel_subgroup(self) -> Subgroup:
        return self.iota.image()


def extension_from_normal(G: FiniteGroup, N: Subgroup, name=None) -> Extension:
    A, inc = subgroup_as_group(N)
    X, p = quotient_group(G, N)
    return Extension(A, G, X, inc, p, name)


def split_extension(A: FiniteGroup, X: FiniteGroup) -> Extension:
    P = direct_product(A, X)
    i, _ = product_injections(A, X, P)
    _, p = product_projections(A, X, P)
    return Extension(A, P, X, i, p, f"{A.name}×{X.name}")


def is_central_extension(e: Extension) -> bool:
    K = e.kernel_subgroup
    return higgins_commutator(e.E, K, whole(e.E)).is_trivial()


GRID = [(i, j) for i in range(3) for j in range(3)]


@dataclass(frozen=True, eq=False)
class DoubleExtension:
    """3×3 grid ``E[i, j]``; ``h[(i, j)]: E[i, j] -> E[i, j+1]`` and
    ``v[(i, j)]: E[i, j] -> E[i+1, j]``.  Every row and column is short
    exact and the squares commute.  ``A = E[0, 0]``, ``X = E[2, 2]``."""

    E: dict
    h: dict
    v: dict

    def __post_init__(self):
        for i in range(3):
            self._check_ses([self.h[(i, 0)], self.h[(i, 1)]], f"row {i}")
            self._check_ses([self.v[(0, i)], self.v[(1, i)]], f"column {i}")
        for i in range(2):
            for j in range(2):
                a = self.v[(i, j + 1)] @ self.h[(i, j)]
                b = self.h[(i + 1, j)] @ self.v[(i, j)]
                if not np.array_equal(a.map, b.map):
                    raise PreconditionError(f"square at ({i}, {j}) does not commute")

    @staticmethod
    def _check_ses(maps, what):
        i, p = maps
        if not (i.is_injective() and p.is_surjective()
                and p.kernel().elements == i.image().elements):
            raise PreconditionError(f"{what} is not short exact")

    @property
    def arity(self):
        return 2

    @property
    def A(self):
        return self.E[(0, 0)]

    @property
    def X(self):
        return self.E[(2, 2)]

    def into_middle(self, ij) -> GroupHom:
        """The composite ``E[i, j] -> E[1, 1]`` for ``i, j <= 1``."""
        i, j = ij
        f = GroupHom.identity(self.E[ij])
        if j == 0 and i <= 1:
            f = self.h[(i, 0)] @ f
        if i == 0:
            f = self.v[(0, 1)] @ f
        return f


def double_extension_from_normals(G: FiniteGroup, N1: Subgroup, N2: Subgroup) -> DoubleExtension:
    """Grid with ``E[1,1] = G``, ``E[1,0] = N1``, ``E[0,1] = N2``,
    ``E[0,0] = N1 ∩ N2`` and quotients ``G/N1``, ``G/N2``, ``G/N1N2``."""
    for N in (N1, N2):
        if not is_normal(G, N):
            raise PreconditionError("subgroup is not normal")
    one = trivial_subgroup(G)
    I, J = intersection(N1, N2), join(N1, N2)
    G_all = whole(G)
    spec = {(0, 0): (I, one), (0, 1): (N2, one), (0, 2): (J, N1),
            (1, 0): (N1, one), (1, 1): (G_all, one), (1, 2): (G_all, N1),
            (2, 0): (J, N2), (2, 1): (G_all, N2), (2, 2): (G_all, J)}
    objs, labels, reps = {}, {}, {}
    for ij, (S, K) in spec.items():
        objs[ij], labels[ij] = subquotient(G, S, K, name=f"E{ij[0]}{ij[1]}")
        lab = labels[ij]
        r = np.zeros(objs[ij].order, dtype=np.int64)
        for g in range(G.order - 1, -1, -1):
            if lab[g] >= 0:
                r[lab[g]] = g
        reps[ij] = r

    def induced(src, dst):
        return GroupHom(objs[src], objs[dst], labels[dst][reps[src]])

    h = {(i, j): induced((i, j), (i, j + 1)) for i in range(3) for j in range(2)}
    v = {(i, j): induced((i, j), (i + 1, j)) for i in range(2) for j in range(3)}
    return DoubleExtension(objs, h, v)


def double_is_central(e: DoubleExtension) -> bool:
    """``[E00, E11] = 1`` and ``[E10, E01] = 1`` inside ``E11``."""
    M = e.E[(1, 1)]
    img = {ij: e.into_middle(ij).image() for ij in ((0, 0), (1, 0), (0, 1))}
    c1 = higgins_commutator(M, img[(0, 0)], whole(M))
    c2 = higgins_commutator(M, img[(1, 0)], img[(0, 1)])
    return c1.is_trivial() and c2.is_trivial()


# ---------------------------------------------------------------------------
# congruence
# ---------------------------------------------------------------------------


@dataclass
class CongruenceResult:
    verdict: str  # "yes" | "no" | "unknown"
    witness: list = field(default_factory=list)
    note: str = ""


def extension_morphisms(e: Extension, f: Extension, limit=None) -> list:
    """Homomorphisms ``E -> E'`` that are the identity on ``A`` and ``X``."""
    if e.A != f.A or e.X != f.X:
        raise PreconditionError("extensions do not share their end objects")
    cons = {}
    for u in e.E.elements():
        cons[u] = set(int(x) for x in np.nonzero(f.pi.map == e.pi(u))[0])
    for a in e.A.elements():
        cons[e.iota(a)] = {f.iota(a)}
    return hom_enumerate(e.E, f.E, cons, limit=limit)


def double_morphisms(e: DoubleExtension, f: DoubleExtension, limit=None) -> list:
    """Homomorphisms of middle objects inducing a grid morphism that is the
    identity on ``E[0,0]`` and ``E[2,2]``."""
    if e.A != f.A or e.X != f.X:
        raise PreconditionError("extensions do not share their end objects")
    M, N = e.E[(1, 1)], f.E[(1, 1)]
    to_x_e = e.v[(1, 2)] @ e.h[(1, 1)]
    to_x_f = f.v[(1, 2)] @ f.h[(1, 1)]
    cons = {u: set(int(x) for x in np.nonzero(to_x_f.map == to_x_e(u))[0]) for u in M.elements()}
    a_e, a_f = e.into_middle((0, 0)), f.into_middle((0, 0))
    for a in e.A.elements():
        cons[a_e(a)] &= {a_f(a)}
    out = []
    sub_e = {ij: e.into_middle(ij).image() for ij in ((1, 0), (0, 1))}
    sub_f = {ij: f.into_middle(ij).image() for ij in ((1, 0), (0, 1))}
    for m in hom_enumerate(M, N, cons):
        if all(m.image_of(sub_e[ij]) <= sub_f[ij] for ij in sub_e):
            out.append(m)
            if limit is not None and len(out) >= limit:
                break
    return out


def extensions_congruent(e, f, zigzag_bound: int = 2, pool: Sequence = ()) -> CongruenceResult:
    """Decide congruence by searching diagram morphisms fixing the ends.

    For single extensions every such morphism is an isomorphism (short
    five lemma), so one direct search decides the question.  For double
    extensions direct morphisms in either direction are searched, then
    zigzags ``e -> g <- f`` or ``e <- g -> f`` through ``pool`` up to the
    bound; exhaustion without success gives ``"unknown"``.
    """
    if e.arity != f.arity:
        raise PreconditionError("extensions of different arity")
    if e.A != f.A or e.X != f.X:
        raise PreconditionError("extensions do not share their end objects")
    search = extension_morphisms if e.arity == 1 else double_morphisms
    fw = search(e, f, limit=1)
    if fw:
        return CongruenceResult("yes", [("->", fw[0])])
    bw = search(f, e, limit=1)
    if bw:
        return CongruenceResult("yes", [("<-", bw[0])])
    if e.arity == 1:
        return CongruenceResult("no", note="no morphism of extensions in either direction")
    if zigzag_bound >= 2:
        for g in pool:
            if g.A != e.A or g.X != e.X:
                continue
            a, b = search(e, g, limit=1), search(f, g, limit=1)
            if a and b:
                return CongruenceResult("yes", [("->", a[0]), ("<-", b[0])])
            a, b = search(g, e, limit=1), search(g, f, limit=1)
            if a and b:
                return CongruenceResult("yes", [("<-", a[0]), ("->", b[0])])
    return CongruenceResult("unknown", note=f"no zigzag of length <= {zigzag_bound} found")


# ---------------------------------------------------------------------------
# small group catalogue (orders <= 24)
# ---------------------------------------------------------------------------


def small_groups() -> dict:
    """Named groups of order at most 24 used by tests and the CLI."""
    out = {}
    for n in range(1, 13):
        out[f"Z{n}"] = cyclic_group(n)
    out["V4"] = klein_four()
    out["S3"] = symmetric_group(3)
    out["D4"] = dihedral_group(4)
    out["Q8"] = quaternion_group()
    out["Z2xZ4"] = direct_product(cyclic_group(2), cyclic_group(4))
    out["Z2^3"] = direct_product(klein_four(), cyclic_group(2))
    out["D5"] = dihedral_group(5)
    out["A4"] = alternating_group(4)
    out["D6"] = dihedral_group(6)
    out["Dic3"] = dicyclic_group(3)
    out["Z2xZ6"] = direct_product(cyclic_group(2), cyclic_group(6))
    out["Z3xZ3"] = direct_product(cyclic_group(3), cyclic_group(3))
    out["Z3xS3"] = direct_product(cyclic_group(3), symmetric_group(3))
    out["S4"] = symmetric_group(4)
    out["SL(2,3)"] = sl2(3)
    out["Z4xZ4"] = direct_product(cyclic_group(4), cyclic_group(4))
    for k, G in out.items():
        G.name = k
    return out


def named_group(name: str) -> FiniteGroup:
    """Builder lookup: ``Z<n>``, ``S<n>``, ``A<n>``, ``D<n>``, ``Dic<n>``,
    ``Q8``, ``V4``, ``SL(2,p)``, ``PSL(2,p)``, or a catalogue name."""
    import re

    m = re.fullmatch(r"(Z|S|A|D|Dic)(\d+)", name)
    if m:
        kind, n = m.group(1), int(m.group(2))
        G = {"Z": cyclic_group, "S": symmetric_group, "A": alternating_group,
             "D": dihedral_group, "Dic": dicyclic_group}[kind](n)
        G.name = name
        return G
    m = re.fullmatch(r"(P?)SL\(2,(\d+)\)", name)
    if m:
        G = (psl2 if m.group(1) else sl2)(int(m.group(2)))
        return G
    if name == "Q8":
        return quaternion_group()
    if name == "V4":
        return klein_four()
    cat = small_groups()
    if name in cat:
        return cat[name]
    raise PreconditionError(f"unknown group name {name!r}")
