"""Group homology and cohomology through the normalized bar complex.

Basis of ``B_n``: ``n``-tuples of non-identity elements, encoded in base
``|G|-1`` with the first entry most significant.  The differential is

    d(g1..gn) = (g2..gn) + sum_{i=1}^{n-1} (-1)^i (.., g_i g_{i+1}, ..)
                + (-1)^n (g1..g_{n-1})

with faces containing the identity dropped.  Degrees are classical:
``group_homology(G, n)`` is ``H_n(G)`` and ``group_cohomology(G, n, A)`` is
``H^n(G; A)``.  The derived-functor indexing used for ``Ext`` and for the
derived functors of abelianisation is shifted by one: ``group_ext(G, n, A)
= H^{n+1}(G; A)`` and ``derived_reflector(G, n, k) = H_{n+1}(G; Z/k)`` for
``n >= 1``.

For ``n >= 1`` the integral groups are annihilated by ``|G|``, so their
``p``-parts are read off Smith profiles modulo ``p^(v_p|G| + 1)``; see
:mod:`homcat.sparse`.  Small matrices can also go through exact integer
elimination (``method="integer"``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sympy import factorint

from . import config
from .errors import BudgetError, PreconditionError
from .fgab import AbMorphism, FgAbGroup, IntMatrix, admits_surjection, kernel
from .grp import (
    Extension,
    FiniteGroup,
    abelian_to_fgab,
    ab_map,
    abelianisation,
    exponent_k_abelianisation,
    higgins_commutator,
    subquotient,
    whole,
)
from .report import CheckReport
from .sparse import integer_divisors, local_profile


def _valuation(n, p):
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def group_from_prime_powers(parts, free_rank=0) -> FgAbGroup:
    """Group ``Z^r ⊕ (⊕ Z/q)`` for prime powers ``q`` (ones are ignored)."""
    by_p = {}
    for q in parts:
        if q > 1:
            p = min(factorint(q))
            by_p.setdefault(p, []).append(q)
    for v in by_p.values():
        v.sort(reverse=True)
    length = max((len(v) for v in by_p.values()), default=0)
    inv = []
    for i in range(length):
        d = 1
        for v in by_p.values():
            if i < len(v):
                d *= v[i]
        inv.append(d)
    return FgAbGroup.from_invariants(free_rank, sorted(inv))


# ---------------------------------------------------------------------------
# the bar complex
# ---------------------------------------------------------------------------


class BarComplex:
    """Bar complex of ``G`` with integer coefficients (sparse differentials)."""

    def __init__(self, G: FiniteGroup, normalized: bool = True, max_tuples: int | None = None):
        self.G = G
        self.normalized = normalized
        self.max_tuples = max_tuples if max_tuples is not None else config.get("max_tuples")
        if normalized:
            self.elements = np.array([g for g in G.elements() if g != G.identity], dtype=np.int64)
        else:
            self.elements = np.arange(G.order, dtype=np.int64)
        self.m = len(self.elements)
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[self.elements] = np.arange(self.m)
        self.position = pos
        self._d = {}

    def rank(self, n) -> int:
        if n < 0:
            return 0
        return self.m ** n

    def check_budget(self, n):
        size = self.rank(n)
        if size > self.max_tuples:
            raise BudgetError(f"bar degree {n} of a group of order {self.G.order} needs "
                              f"{size} basis tuples (max_tuples = {self.max_tuples})")

    def d(self, n) -> sp.csc_matrix:
        """``d_n: B_n -> B_{n-1}`` as a sparse integer matrix."""
        if n in self._d:
            return self._d[n]
        rows_out, cols_out = self.rank(n - 1), self.rank(n)
        if n <= 1:
            M = sp.csc_matrix((rows_out, cols_out), dtype=np.int64)
            self._d[n] = M
            return M
        self.check_budget(n)
        m, N = self.m, cols_out
        T = np.stack(np.unravel_index(np.arange(N), (m,) * n), axis=1)
        els = self.elements[T]
        weights = m ** np.arange(n - 2, -1, -1, dtype=np.int64)
        rows, cols, vals = [], [], []
        ar = np.arange(N)

        def add(code, mask, sign):
            rows.append(code[mask])
            cols.append(ar[mask])
            vals.append(np.full(int(mask.sum()), sign, dtype=np.int64))

        all_ = np.ones(N, dtype=bool)
        add(T[:, 1:] @ weights, all_, 1)
        add(T[:, :-1] @ weights, all_, (-1) ** n)
        for i in range(1, n):
            prod = self.G.table[els[:, i - 1], els[:, i]]
            pp = self.position[prod]
            mask = pp >= 0
            face = np.concatenate([T[:, :i - 1], pp[:, None], T[:, i + 1:]], axis=1)
            code = np.where(mask, face @ weights, 0)
            add(code, mask, (-1) ** i)
        M = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(rows_out, cols_out)).tocsc()
        M.sum_duplicates()
        M.eliminate_zeros()
        self._d[n] = M
        return M


def bar_complex(G: FiniteGroup, normalized: bool = True) -> BarComplex:
    cache = G.__dict__.setdefault("_bar", {})
    key = (normalized, config.get("max_tuples"))
    if key not in cache:
        cache[key] = BarComplex(G, normalized)
    return cache[key]


def profile(G: FiniteGroup, n: int, p: int, a: int, normalized: bool = True):
    """Smith profile of ``d_n`` modulo ``p^a`` (cached per group)."""
    bar = bar_complex(G, normalized)
    if n <= 1:
        return [0] * a
    cache = G.__dict__.setdefault("_profiles", {})
    key = (normalized, n, p)
    have = cache.get(key)
    if have is not None and len(have) >= a:
        return have[:a]
    # one pass deep enough for every caller: integral torsion needs v_p|G| + 1
    depth = max(a, _valuation(G.order, p) + 1)
    counts = local_profile(bar.d(n), p, depth)
    cache[key] = counts
    return list(counts[:a])


def _check_degree(n):
    if n < 0:
        raise PreconditionError("degree must be nonnegative")


def _coeff_order(coeff):
    if coeff in (None, "Z", "z"):
        return 0
    if isinstance(coeff, FgAbGroup):
        if coeff.free_rank == 0 and len(coeff.torsion) <= 1:
            return coeff.torsion[0] if coeff.torsion else 1
        if coeff.free_rank == 1 and not coeff.torsion:
            return 0
        raise PreconditionError("homology coefficients must be Z or cyclic Z/k")
    k = int(coeff)
    if k < 0:
        raise PreconditionError("coefficient order must be nonnegative")
    return k


def _local_parts(G, n, p, a, normalized=True):
    """``H_n(G; Z/p^a)`` as prime powers (also ``H^n``, which has the
    same shape over ``Z/p^a``)."""
    bar = bar_complex(G, normalized)
    bar.check_budget(n + 1)
    pn = profile(G, n, p, a, normalized)
    pn1 = profile(G, n + 1, p, a, normalized)
    free = bar.rank(n) - sum(pn) - sum(pn1)
    parts = [p ** v for v in range(1, a) for _ in range(pn[v] + pn1[v])]
    parts += [p ** a] * free
    return parts


def _integral_torsion(G, n, normalized=True, which=None):
    """Prime powers of the torsion of ``Coker d_which`` (default ``d_{n+1}``),
    valid for groups annihilated by ``|G|``."""
    which = n + 1 if which is None else which
    bar_complex(G, normalized).check_budget(which)
    parts = []
    for p, e in sorted(factorint(G.order).items()):
        prof = profile(G, which, p, e + 1, normalized)
        parts += [p ** v for v in range(1, e + 1) for _ in range(prof[v])]
    return parts


def _integer_route(G, n, k, normalized=True):
    bar = bar_complex(G, normalized)
    bar.check_budget(n + 1)
    bits = config.get("max_entry_bits")
    dn = integer_divisors(bar.d(n), bits) if n >= 2 else []
    dn1 = integer_divisors(bar.d(n + 1), bits) if n + 1 >= 2 else []
    free = bar.rank(n) - len(dn) - len(dn1)
    if k == 0:
        return FgAbGroup.from_invariants(free, sorted(d for d in dn1 if d > 1))
    # C ⊗ Z/k: invariants come from gcds with k
    parts = []
    for d in dn1 + dn:
        g = np.gcd(d, k)
        if g > 1:
            parts.append(int(g))
    rel = [int(k)] * free + parts
    return FgAbGroup.from_presentation(IntMatrix.diag(rel)) if rel else FgAbGroup.trivial()


def group_homology(G: FiniteGroup, n: int, coeff=0, method: str = "auto") -> FgAbGroup:
    """``H_n(G; Z)`` (``coeff = 0``) or ``H_n(G; Z/k)``.

    ``method`` is ``"local"`` (Smith profiles modulo prime powers),
    ``"integer"`` (exact elimination, small complexes only) or ``"auto"``.
    """
    _check_degree(n)
    k = _coeff_order(coeff)
    if k == 1:
        return FgAbGroup.trivial()
    if n == 0:
        return FgAbGroup.cyclic(k)
    if method == "auto":
        bar = bar_complex(G)
        method = "integer" if bar.rank(n + 1) * bar.rank(n) <= 20_000 else "local"
    if method == "integer":
        return _integer_route(G, n, k)
    if method != "local":
        raise PreconditionError(f"unknown method {method!r}")
    if k == 0:
        return group_from_prime_powers(_integral_torsion(G, n))
    parts = []
    for p, a in sorted(factorint(k).items()):
        parts += _local_parts(G, n, p, a)
    return group_from_prime_powers(parts)


def group_cohomology(G: FiniteGroup, n: int, A=0) -> FgAbGroup:
    """``H^n(G; A)`` for a trivial module ``A`` (``FgAbGroup`` or integer
    ``k`` meaning ``Z/k``, ``0`` meaning ``Z``); classical degree."""
    _check_degree(n)
    if not isinstance(A, FgAbGroup):
        A = FgAbGroup.cyclic(int(A))
    parts, free = [], 0
    for t in [0] * A.free_rank + list(A.torsion):
        if n == 0:
            if t == 0:
                free += 1
            else:
                parts.append(t)
            continue
        if t == 0:
            # integral cohomology: torsion of Coker d_n^T, i.e. divisors of d_n
            if n >= 2:
                parts += _integral_torsion(G, n, which=n)
            bar_complex(G).check_budget(n + 1)
            continue
        for p, a in sorted(factorint(t).items()):
            parts += _local_parts(G, n, p, a)
    return group_from_prime_powers(parts, free)


def group_ext(G: FiniteGroup, n: int, A=0) -> FgAbGroup:
    """Derived-functor indexing: ``Ext^n(G, A) = H^{n+1}(G; A)``, so
    ``Ext^0(G, A) = Hom(ab G, A)``."""
    _check_degree(n)
    return group_cohomology(G, n + 1, A)


def derived_reflector(G: FiniteGroup, n: int, k: int) -> FgAbGroup:
    """``L_n T(G)`` for ``T`` = abelianisation of exponent ``k`` (``k = 0``:
    plain abelianisation).  ``L_0 T(G) = G/[G,G]G^k``; for ``n >= 1`` this
    is ``H_{n+1}(G; Z/k)``."""
    _check_degree(n)
    if k == 1:
        return FgAbGroup.trivial()
    if n == 0:
        return exponent_k_abelianisation(G, k).group
    return group_homology(G, n + 1, k)


# ---------------------------------------------------------------------------
# five-term tail
# ---------------------------------------------------------------------------


def stallings_tail(e: Extension) -> CheckReport:
    """``H_2(Y) -> L_0(f) -> ab X -> ab Y -> 0`` for ``K --> X --f--> Y``
    with ``L_0(f) = K / [K, X]``."""
    from .chains import check_exact_at

    X, Y = e.E, e.X
    K = e.kernel_subgroup
    KX = higgins_commutator(X, K, whole(X))
    Lgrp, labels = subquotient(X, K, KX)
    L = abelian_to_fgab(Lgrp)
    abX, abY = abelianisation(X), abelianisation(Y)
    reps = {}
    for g in range(X.order - 1, -1, -1):
        if labels[g] >= 0:
            reps[int(labels[g])] = g
    cols = [abX.unit(reps[q]).coords for q in L.gen_elements]
    gamma = AbMorphism(L.group, abX.group, IntMatrix.from_columns(cols, abX.group.ngens))
    fstar = ab_map(e.pi, abX, abY)
    H2 = group_homology(Y, 2)
    kg, _ = kernel(gamma)
    rep = CheckReport("five-term tail")
    rep.details["L_0(f)"] = str(L.group)
    rep.details["ab X"] = str(abX.group)
    rep.details["ab Y"] = str(abY.group)
    rep.details["gamma"] = "zero" if gamma.is_zero() else ("mono" if gamma.is_mono() else "other")
    rep.details["ker gamma"] = str(kg)
    rep.details["H_2(Y)"] = str(H2)
    rep.record(fstar.is_epi(), "ab X -> ab Y is onto")
    rep.record(check_exact_at(gamma, fstar), "exact at ab X")
    rep.record(admits_surjection(H2, kg), "H_2(Y) maps onto ker gamma")
    rep.record(L.group.order() * abY.group.order() == abX.group.order() * kg.order(),
               "order count")
    return rep


# ---------------------------------------------------------------------------
# self check
# ---------------------------------------------------------------------------


def bar_selfcheck(G: FiniteGroup, n: int) -> CheckReport:
    """``d ∘ d = 0`` on every column up to degree ``n + 1``; for
    ``|G| <= 8`` the normalized and unnormalized complexes give the same
    ``H_i`` for ``i <= n``."""
    rep = CheckReport(f"bar complex of order {G.order} to degree {n}")
    bar = bar_complex(G)
    for k in range(2, n + 2):
        dd = bar.d(k - 1) @ bar.d(k)
        rep.record(dd.count_nonzero() == 0, f"d_{k - 1} d_{k} = 0")
        rep.record(max((len(bar.d(k)[:, j].data) for j in range(min(50, bar.rank(k)))),
                       default=0) <= k + 1, f"column support of d_{k}")
    if G.order <= 8:
        ub = bar_complex(G, normalized=False)
        for k in range(2, n + 2):
            dd = ub.d(k - 1) @ ub.d(k)
            rep.record(dd.count_nonzero() == 0, f"unnormalized d_{k - 1} d_{k} = 0")
        for i in range(1, n + 1):
            a = group_from_prime_powers(_integral_torsion(G, i))
            b = group_from_prime_powers(_integral_torsion(G, i, normalized=False))
            rep.record(a == b or a.invariants == b.invariants,
                       f"H_{i}: normalized {a} vs unnormalized {b}")
            # rational rank check at a prime not dividing |G|
            p = next(q for q in (2, 3, 5, 7, 11, 13) if G.order % q)
            free = ub.rank(i) - (profile(G, i, p, 1, False)[0] if i >= 2 else 0) \
                - profile(G, i + 1, p, 1, False)[0]
            rep.record(free == 0, f"H_{i} is finite")
    return rep


@dataclass(frozen=True)
class HomologyTable:
    group: str
    values: dict


def homology_table(G: FiniteGroup, n_max: int, coeff=0) -> HomologyTable:
    return HomologyTable(G.name or str(G.order),
                         {n: str(group_homology(G, n, coeff)) for n in range(n_max + 1)})
