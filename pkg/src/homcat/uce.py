"""Acyclicity classes, the universal coefficient pairing, central extensions.

``T`` is the abelianisation of exponent ``k`` (``k = 0``: plain
abelianisation).  ``G`` is ``n``-acyclic when ``L_0 T(G) = ... = L_n T(G) =
0``; the class of such groups is written ``T_n`` in the reports.

The pairing of :func:`uct_pairing` is worked out over ``F_p``: cocycles are
the vectors orthogonal to the column space of the next bar differential,
cycles are kernel vectors of the current one, and the pairing is the dot
product mod ``p``.

Universality of a central extension is certified, not constructed: the
checks are perfectness of both groups, centrality, the size of the kernel
against ``H_2`` and uniqueness of morphisms into a library of probe
extensions.  The categorical hypothesis that upgrades weak universality to
universality cannot be decided from a Cayley table and is recorded as
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import factorint

from . import config
from .derived import FunctorSpec, ext_group, yoneda_expand
from .errors import BudgetError, PreconditionError
from .fgab import AbMorphism, FgAbGroup, hom_group
from .grp import (
    Extension,
    FiniteGroup,
    GroupHom,
    abelian_to_fgab,
    abelianisation,
    cyclic_group,
    direct_product,
    exponent_k_abelianisation,
    extensions_congruent,
    group_from_fgab,
    hom_enumerate,
    is_central_extension,
    is_perfect,
    product_projections,
    psl2,
    sl2,
    subgroup_as_group,
)
from .grphom import (
    _local_parts,
    _valuation,
    bar_complex,
    derived_reflector,
    group_ext,
    group_from_prime_powers,
)
from .report import CheckReport
from .sparse import local_profile

__all__ = [
    "AcyclicityReport", "acyclicity_class", "torsion_ext_equivalence",
    "UCTPairing", "uct_pairing", "hom_counting_H2", "HomCounting", "hom_counting",
    "sl2", "psl2", "UCECertificate", "verify_uce", "extension_over",
    "product_probe", "fibered_product", "trivial_extension",
    "CentralExtensionClasses", "enumerate_central_extensions",
    "extension_from_cocycle", "reflector_yoneda_roundtrip",
]


# ---------------------------------------------------------------------------
# acyclicity classes
# ---------------------------------------------------------------------------


@dataclass
class AcyclicityReport:
    group: str
    k: int
    values: list  # L_0 T(G) .. L_n T(G)
    flags: list  # flags[i]: G in T_i

    @property
    def max_class(self) -> int:
        """Largest ``m`` with ``G`` in ``T_m`` (``-1`` if none)."""
        m = -1
        for i, f in enumerate(self.flags):
            if not f:
                break
            m = i
        return m

    def member(self, n) -> bool:
        return self.flags[n]

    def lines(self):
        t = "abelianisation" if self.k == 0 else f"exponent-{self.k} abelianisation"
        out = [f"acyclicity of {self.group} for {t}"]
        for i, (v, f) in enumerate(zip(self.values, self.flags)):
            out.append(f"  L_{i} = {v}    in T_{i}: {'yes' if f else 'no'}")
        out.append(f"  max class: {self.max_class}")
        return out


def acyclicity_class(G: FiniteGroup, k: int = 0, n_max: int = 1) -> AcyclicityReport:
    if n_max < 0:
        raise PreconditionError("n_max must be nonnegative")
    values, flags, inside = [], [], True
    for n in range(n_max + 1):
        L = derived_reflector(G, n, k)
        values.append(L)
        inside = inside and L.is_trivial()
        flags.append(inside)
    return AcyclicityReport(G.name or f"group of order {G.order}", k, values, flags)


def torsion_ext_equivalence(G: FiniteGroup, k: int, n: int,
                            probes: Sequence[FgAbGroup]) -> CheckReport:
    """``G`` in ``T_n`` iff ``Ext^i(G, M) = 0`` for ``i <= n`` and ``M`` in the
    reflective subcategory, checked on the given probes."""
    rep = CheckReport(f"torsion/Ext for degree {n}")
    acyc = acyclicity_class(G, k, n)
    for M in probes:
        if k and not (M.is_finite() and k % M.exponent() == 0):
            raise PreconditionError(f"probe {M} is not of exponent dividing {k}")
    exts = {}
    for M in probes:
        for i in range(n + 1):
            exts[(str(M), i)] = group_ext(G, i, M)
    for i in range(n + 1):
        rep.details[f"L_{i}"] = str(acyc.values[i])
    for (m, i), E in exts.items():
        rep.details[f"Ext^{i}(G, {m})"] = str(E)
    if acyc.flags[n]:
        for (m, i), E in exts.items():
            rep.record(E.is_trivial(), f"in T_{n} but Ext^{i}(G, {m}) = {E}")
    for (m, i), E in exts.items():
        if not E.is_trivial():
            rep.record(not acyc.flags[i], f"Ext^{i}(G, {m}) = {E} but G in T_{i}")
    rep.details["member"] = "yes" if acyc.flags[n] else "no"
    return rep


# ---------------------------------------------------------------------------
# dense linear algebra mod p
# ---------------------------------------------------------------------------


def _rref(M, p):
    """Reduced row echelon form mod ``p``; returns ``(R, pivot columns)``."""
    R = np.remainder(np.array(M, dtype=np.int64), p)
    rows, cols = R.shape
    piv, r = [], 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = np.remainder(R[others] - np.outer(R[others, c], R[r]), p)
        piv.append(c)
        r += 1
    return R[:r], piv


def _kernel_mod_p(M, p):
    """Basis of ``{x : M x = 0 mod p}`` as rows."""
    M = np.asarray(M)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = _rref(M, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    K = np.zeros((len(free), ncols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, c in enumerate(piv):
            K[t, c] = (-R[i, f]) % p
    return K


def _independent_rows(V, p):
    """Indices of a maximal independent set of rows of ``V`` (greedy order)."""
    keep, basis, bpiv = [], [], []
    for i, v in enumerate(np.remainder(np.asarray(V, dtype=np.int64), p)):
        w = v.copy()
        for b, c in zip(basis, bpiv):
            if w[c]:
                w = np.remainder(w - w[c] * b, p)
        nz = np.nonzero(w)[0]
        if nz.size:
            c = int(nz[0])
            w = w * pow(int(w[c]), -1, p) % p
            basis.append(w)
            bpiv.append(c)
            keep.append(i)
    return keep


# ---------------------------------------------------------------------------
# universal coefficient pairing
# ---------------------------------------------------------------------------


@dataclass
class UCTPairing:
    """Evaluation pairing ``Ext^n(G, Z/p) x L_n T(G) -> Z/p`` on explicit
    bases (``T`` = exponent-``p`` abelianisation, bar degree ``n + 1``).

    ``cocycles`` and ``cycles`` hold class representatives as rows;
    ``matrix[a, b]`` is the value of cocycle ``a`` on cycle ``b``.
    """

    group: str
    n: int
    p: int
    rank: int  # copies of Z/p in M
    cocycles: np.ndarray
    cycles: np.ndarray
    matrix: np.ndarray
    report: CheckReport

    @property
    def ext_order(self):
        return self.p ** (self.rank * self.cocycles.shape[0])

    @property
    def hom_order(self):
        return self.p ** (self.rank * self.cycles.shape[0])

    @property
    def bijective(self):
        return self.report.ok

    def evaluate(self, coeffs) -> tuple:
        """Image of the cocycle class with the given coordinates, as a
        homomorphism given by its values on the cycle basis."""
        v = np.asarray(coeffs, dtype=np.int64) @ self.matrix
        return tuple(int(x) for x in np.remainder(v, self.p))

    def lines(self):
        return [f"pairing Ext^{self.n}({self.group}, M) -> Hom(L_{self.n}T, M): "
                f"|Ext| = {self.ext_order}, |Hom| = {self.hom_order}, "
                f"bijective: {'yes' if self.bijective else 'no'}"] + self.report.lines()


def _elementary_rank(M: FgAbGroup):
    if M.free_rank or not M.torsion:
        raise PreconditionError("coefficients must be a nontrivial finite group")
    ps = {int(q) for t in M.torsion for q in factorint(t)}
    if len(ps) != 1 or any(t not in ps for t in M.torsion):
        raise PreconditionError("coefficients must be elementary abelian (Z/p)^r")
    return ps.pop(), len(M.torsion)


def uct_pairing(G: FiniteGroup, n: int, M: FgAbGroup, enumerate_limit: int = 4096) -> UCTPairing:
    """The pairing of degree-``(n+1)`` bar cocycles with values in ``M`` and
    degree-``(n+1)`` cycles with ``Z/p`` coefficients, for ``M = (Z/p)^r``.

    ``G`` must be ``(n-1)``-acyclic for the exponent-``p`` abelianisation
    (otherwise :class:`PreconditionError`).  Well-definedness is checked
    against every coboundary and boundary generator, bijectivity by rank
    and by enumerating classes when there are few enough.
    """
    if n < 1:
        raise PreconditionError("the pairing is defined for n >= 1")
    p, r = _elementary_rank(M)
    for i in range(n):
        L = derived_reflector(G, i, p)
        if not L.is_trivial():
            raise PreconditionError(f"acyclicity fails: L_{i} T(G) = {L} is not zero")
    N = n + 1
    bar = bar_complex(G)
    bar.check_budget(N + 1)
    dN = bar.d(N).tocsc()  # rank(N-1) x rank(N)
    dN1 = bar.d(N + 1).tocsc()  # rank(N) x rank(N+1)
    size = bar.rank(N)
    rep = CheckReport(f"pairing in degree {n}")
    if size == 0:
        phis = np.zeros((0, 0), dtype=np.int64)
        zs = np.zeros((0, 0), dtype=np.int64)
    else:
        _, E = local_profile(dN1, p, 1, want_basis=True)
        free, piv = E.free_rows, E.pivots
        nfree = len(free)

        def from_free(x):
            # cocycle with prescribed free coordinates
            phi = np.zeros(size, dtype=np.int64)
            phi[free] = x
            if len(piv):
                phi[piv] = np.remainder(-(E.rest @ x), p)
            return phi

        # coboundaries: rows of d_N, seen on the free coordinates
        cob = np.remainder(dN.toarray()[:, free] if dN.shape[0] else np.zeros((0, nfree)), p)
        R, cpiv = _rref(cob, p) if cob.shape[0] else (np.zeros((0, nfree)), [])
        comp = [c for c in range(nfree) if c not in set(cpiv)]
        phis = np.array([from_free(np.eye(nfree, dtype=np.int64)[c]) for c in comp],
                        dtype=np.int64).reshape(len(comp), size)
        # cycles modulo boundaries
        K = _kernel_mod_p(dN.toarray(), p) if dN.shape[0] else np.eye(size, dtype=np.int64)
        resid = np.remainder(K[:, free] - K[:, piv] @ E.rest, p) if len(piv) else K[:, free]
        keep = _independent_rows(resid, p)
        zs = K[keep]
        # well-definedness on every generator
        rep.record(not np.any(np.remainder(dN1.T @ phis.T, p)), "cocycles kill boundaries")
        rep.record(not np.any(np.remainder(dN @ zs.T, p)), "coboundaries kill cycles")
    P = np.remainder(phis @ zs.T, p) if phis.size and zs.size else \
        np.zeros((phis.shape[0], zs.shape[0]), dtype=np.int64)
    rep.details["dim Ext"] = str(phis.shape[0])
    rep.details["dim L"] = str(zs.shape[0])
    rep.record(phis.shape[0] == zs.shape[0], "equal cardinalities")
    rk = len(_rref(P, p)[1]) if P.size else 0
    rep.record(rk == phis.shape[0] == zs.shape[0], "pairing matrix invertible")
    d = phis.shape[0]
    if p ** d <= enumerate_limit:
        images = set()
        for idx in range(p ** d):
            c = [(idx // p ** t) % p for t in range(d)]
            images.add(tuple(np.remainder(np.asarray(c, dtype=np.int64) @ P, p)) if d else ())
        rep.record(len(images) == p ** d, "injective on enumerated classes")
    else:
        rep.notes.append("classes not enumerated (too many); injectivity by rank")
    return UCTPairing(G.name or f"group of order {G.order}", n, p, r, phis, zs, P, rep)


# ---------------------------------------------------------------------------
# H_2 by counting homomorphisms
# ---------------------------------------------------------------------------


@dataclass
class HomCounting:
    """``|Hom(H_2 G, Z/q)|`` for prime powers ``q`` and the group they force."""

    group: FgAbGroup
    counts: dict  # q -> |Hom(H_2, Z/q)|
    cohomology: dict  # q -> |H^2(G; Z/q)|
    correction: dict  # q -> |Ext(H_1, Z/q)|


def hom_counting(G: FiniteGroup) -> HomCounting:
    """Recover ``H_2(G; Z)`` from the orders of ``H^2(G; Z/p^j)``.

    ``|H^2(G; Z/q)| = |Hom(H_2, Z/q)| |Ext(H_1, Z/q)|`` and
    ``log_p |Hom(H_2, Z/p^j)| = sum_i min(v_i, j)``, so successive
    differences count the cyclic factors of order at least ``p^j``.
    """
    H1 = abelianisation(G).group
    counts, coh, corr, parts = {}, {}, {}, []
    for p, e in sorted(factorint(G.order).items()):
        h = [0]
        for j in range(1, e + 1):
            q = p ** j
            c = 1
            for t in _local_parts(G, 2, p, j):
                c *= t
            x = 1 if H1.is_trivial() else ext_group(H1, FgAbGroup.cyclic(q), 1).order()
            if c % x:
                raise PreconditionError("inconsistent counts")
            coh[q], corr[q], counts[q] = c, x, c // x
            h.append(_valuation(counts[q], p))
        at_least = [h[j] - h[j - 1] for j in range(1, e + 1)] + [0]
        for v in range(1, e + 1):
            m = at_least[v - 1] - at_least[v]
            if m < 0:
                raise PreconditionError("counts are not those of a finite abelian group")
            parts += [p ** v] * m
    return HomCounting(group_from_prime_powers(parts), counts, coh, corr)


def hom_counting_H2(G: FiniteGroup) -> FgAbGroup:
    return hom_counting(G).group


# ---------------------------------------------------------------------------
# extensions over a fixed base and probe constructions
# ---------------------------------------------------------------------------


def extension_over(E: FiniteGroup, pi: GroupHom, name=None) -> Extension:
    """``ker pi --> E --pi--> X`` keeping ``X`` as given."""
    K = pi.kernel()
    A, inc = subgroup_as_group(K)
    return Extension(A, E, pi.target, inc, pi, name)


def trivial_extension(X: FiniteGroup) -> Extension:
    """``1 --> X --id--> X``."""
    return extension_over(X, GroupHom.identity(X), f"1 -> {X.name or 'X'}")


def product_probe(X: FiniteGroup, k: int) -> Extension:
    """``Z/k --> X x Z/k --> X``."""
    C = cyclic_group(k)
    P = direct_product(X, C)
    pX, _ = product_projections(X, C, P)
    return extension_over(P, pX, f"{X.name or 'X'} x Z/{k}")


def fibered_product(e: Extension, f: Extension) -> Extension:
    """``E x_X E'`` over the common base ``X`` (pairs with equal images)."""
    if e.X != f.X:
        raise PreconditionError("extensions do not share their base")
    nf = f.E.order
    pairs = np.array([(u, v) for u in range(e.E.order) for v in range(nf)
                      if e.pi(u) == f.pi(v)], dtype=np.int64)
    code = np.full(e.E.order * nf, -1, dtype=np.int64)
    code[pairs[:, 0] * nf + pairs[:, 1]] = np.arange(len(pairs))
    u, v = pairs[:, 0], pairs[:, 1]
    table = code[e.E.table[u[:, None], u[None, :]] * nf + f.E.table[v[:, None], v[None, :]]]
    ident = int(code[e.E.identity * nf + f.E.identity])
    Q = FiniteGroup(table, ident, check=False, name=f"{e.E.name} x_X {f.E.name}")
    pi = GroupHom(Q, e.X, e.pi.map[u])
    return extension_over(Q, pi, f"({e.name}) x_X ({f.name})")


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

CLAUSES = {
    1: "base is perfect",
    2: "extension is central",
    3: "middle group is perfect",
    4: "kernel matches H_2 of the base",
    5: "exactly one morphism to each probe",
}

HYPOTHESIS = ("universality is relative to the probe library; the categorical "
              "condition upgrading weakly universal perfect central extensions "
              "to universal ones is assumed, not checked")


@dataclass
class UCECertificate:
    extension: Extension
    clauses: dict  # clause number -> (ok, detail)
    probes: list = field(default_factory=list)  # (name, morphism count)
    hypothesis: str = HYPOTHESIS

    @property
    def valid(self) -> bool:
        return all(ok for ok, _ in self.clauses.values())

    @property
    def failing(self) -> list:
        return [c for c, (ok, _) in sorted(self.clauses.items()) if not ok]

    def lines(self):
        e = self.extension
        out = [f"certificate for {e.A.order} -> {e.E.order} -> {e.X.order}"
               f"{' (' + e.name + ')' if e.name else ''}"]
        for c in sorted(self.clauses):
            ok, detail = self.clauses[c]
            out.append(f"  clause {c} ({CLAUSES[c]}): {'pass' if ok else 'FAIL'}"
                       f"{' - ' + detail if detail else ''}")
        for name, count in self.probes:
            out.append(f"  probe {name}: {count} morphism(s)")
        out.append(f"  hypothesis: {self.hypothesis}")
        out.append(f"  valid: {'yes' if self.valid else 'no'}")
        return out


def _morphisms_over(e: Extension, f: Extension, limit=2) -> list:
    cons = {}
    fib = {}
    for u in range(f.E.order):
        fib.setdefault(f.pi(u), set()).add(u)
    for u in range(e.E.order):
        cons[u] = fib.get(e.pi(u), set())
    return hom_enumerate(e.E, f.E, cons, limit=limit)


def verify_uce(e: Extension, probes: Sequence) -> UCECertificate:
    """Check the five clauses; ``probes`` are extensions over ``e.X`` or
    ``(name, extension)`` pairs."""
    clauses = {}
    X, U = e.X, e.E
    clauses[1] = (is_perfect(X), "" if is_perfect(X) else
                  f"ab(X) = {abelianisation(X).group}")
    central = is_central_extension(e)
    clauses[2] = (central, "" if central else "[A, U] is not trivial")
    clauses[3] = (is_perfect(U), "" if is_perfect(U) else
                  f"ab(U) = {abelianisation(U).group}")
    A = abelian_to_fgab(e.A).group if e.A.is_abelian() else None
    H2 = hom_counting_H2(X)
    ok4 = A is not None and A == H2
    clauses[4] = (ok4, f"A = {A if A is not None else 'non-abelian'}, H_2(X) = {H2}")
    counts, ok5 = [], True
    for pr in probes:
        name, f = pr if isinstance(pr, tuple) else (pr.name or "probe", pr)
        if f.X != X:
            raise PreconditionError(f"probe {name} is not over the same base")
        c = len(_morphisms_over(e, f))
        counts.append((name, c))
        ok5 = ok5 and c == 1
    bad = [f"{n}: {c}" for n, c in counts if c != 1]
    clauses[5] = (ok5 and bool(counts), "no probes" if not counts else
                  ("" if ok5 else "counts " + ", ".join(bad)))
    return UCECertificate(e, clauses, counts)


# ---------------------------------------------------------------------------
# central extensions from cocycles
# ---------------------------------------------------------------------------


def extension_from_cocycle(X: FiniteGroup, A: FiniteGroup, f: np.ndarray, name=None) -> Extension:
    """``A x X`` with ``(a, x)(b, y) = (a + b + f(x, y), xy)``; ``f`` is an
    ``|X| x |X|`` array of elements of ``A``.  Element ``(a, x)`` has index
    ``a + |A| x``."""
    na, nx = A.order, X.order
    tA, tX = A.table, X.table
    a = np.arange(na * nx) % na
    x = np.arange(na * nx) // na
    s = tA[tA[a[:, None], a[None, :]], f[x[:, None], x[None, :]]]
    prodx = tX[x[:, None], x[None, :]]
    table = s + na * prodx
    E = FiniteGroup(table, A.identity + na * X.identity, check=True, name=name)
    iota = GroupHom(A, E, np.arange(na) + na * X.identity)
    pi = GroupHom(E, X, x)
    return Extension(A, E, X, iota, pi, name)


@dataclass
class CentralExtensionClasses:
    count: int
    representatives: list  # Extension per class
    cocycles: int
    coboundaries: int
    class_sizes: list
    report: CheckReport

    def lines(self):
        return [f"{self.count} congruence classes",
                f"  normalized 2-cocycles: {self.cocycles}",
                f"  coboundaries: {self.coboundaries}"] + self.report.lines()


def _digits(idx, base, width):
    out = np.empty((idx.size, width), dtype=np.int64)
    x = idx.copy()
    for v in range(width):
        out[:, v] = x % base
        x //= base
    return out


def enumerate_central_extensions(X: FiniteGroup, A, cross_check: bool = True,
                                 chunk: int = 1 << 15) -> CentralExtensionClasses:
    """All normalized 2-cocycles ``X x X -> A`` (trivial action) by brute
    force, grouped into classes by coboundary orbits.

    With ``cross_check`` the class representatives are compared pairwise
    with :func:`extensions_congruent` (all must be distinct) and each class
    with more than one cocycle is checked to be one congruence class.
    """
    if isinstance(A, FgAbGroup):
        A = group_from_fgab(A)
    if not A.is_abelian():
        raise PreconditionError("kernel group must be abelian")
    na, nx = A.order, X.order
    ex, ea = X.identity, A.identity
    nonid = [x for x in range(nx) if x != ex]
    m = len(nonid)
    nvar = m * m
    total = na ** nvar
    budget = config.get("cocycle_budget")
    if total > budget:
        raise BudgetError(f"{total} normalized 2-cochains exceed cocycle_budget = {budget}")
    pos = {x: i for i, x in enumerate(nonid)}
    sentinel = nvar  # column holding the identity of A

    def var(x, y):
        if x == ex or y == ex:
            return sentinel
        return pos[x] * m + pos[y]

    tX, tA = X.table, A.table
    trip = [(var(y, z), var(x, int(tX[y, z])), var(int(tX[x, y]), z), var(x, y))
            for x in nonid for y in nonid for z in nonid]
    I = np.array(trip, dtype=np.int64).reshape(-1, 4)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        F = np.empty((idx.size, nvar + 1), dtype=np.int64)
        F[:, :nvar] = _digits(idx, na, nvar)
        F[:, sentinel] = ea
        if I.size:
            lhs = tA[F[:, I[:, 0]], F[:, I[:, 1]]]
            rhs = tA[F[:, I[:, 2]], F[:, I[:, 3]]]
            ok = np.all(lhs == rhs, axis=1)
        else:
            ok = np.ones(idx.size, dtype=bool)
        found.append(F[ok, :nvar])
    Z = np.concatenate(found) if found else np.zeros((0, nvar), dtype=np.int64)
    # coboundaries of normalized 1-cochains g: dg(x, y) = g(x) + g(y) - g(xy)
    if na ** m > budget:
        raise BudgetError("1-cochains exceed cocycle_budget")
    g = np.empty((na ** m, nx), dtype=np.int64)
    g[:, [x for x in nonid]] = _digits(np.arange(na ** m, dtype=np.int64), na, m)
    g[:, ex] = ea
    invA = A.inverses
    cols = []
    for x in nonid:
        for y in nonid:
            cols.append(tA[tA[g[:, x], g[:, y]], invA[g[:, int(tX[x, y])]]])
    B = np.unique(np.stack(cols, axis=1).reshape(-1, nvar), axis=0)
    # canonical representative of each orbit: lexicographic minimum
    keys = {}
    for row in Z:
        orbit = tA[row[None, :], B]
        canon = tuple(min(map(tuple, orbit)))
        keys.setdefault(canon, []).append(row)
    rep = CheckReport("cocycle classes")
    rep.record(len(Z) % max(1, len(B)) == 0, "coboundaries act freely")
    reps, sizes = [], []
    for n, canon in enumerate(sorted(keys)):
        members = keys[canon]
        sizes.append(len(members))
        reps.append((np.array(canon, dtype=np.int64), members))
    exts = []

    def full(v):
        f = np.full((nx, nx), ea, dtype=np.int64)
        for x in nonid:
            for y in nonid:
                f[x, y] = v[pos[x] * m + pos[y]]
        return f

    for n, (canon, members) in enumerate(reps):
        exts.append(extension_from_cocycle(X, A, full(canon), name=f"class {n}"))
    if cross_check:
        bound = config.get("zigzag_bound")
        for i in range(len(exts)):
            for j in range(i + 1, len(exts)):
                v = extensions_congruent(exts[i], exts[j], bound).verdict
                rep.record(v == "no", f"classes {i} and {j} congruent: {v}")
        for n, (canon, members) in enumerate(reps):
            other = next((r for r in members if tuple(r) != tuple(canon)), None)
            if other is not None:
                e2 = extension_from_cocycle(X, A, full(other))
                v = extensions_congruent(exts[n], e2, bound).verdict
                rep.record(v == "yes", f"class {n} splits under congruence: {v}")
    return CentralExtensionClasses(len(reps), exts, len(Z), len(B), sizes, rep)


# ---------------------------------------------------------------------------
# Yoneda for the reflector
# ---------------------------------------------------------------------------


def reflector_yoneda_roundtrip(X: FiniteGroup, k: int, F: FunctorSpec,
                               probes: Sequence[FgAbGroup] = (), rng=None,
                               max_elements: int = 64) -> CheckReport:
    """Elements ``t`` of ``F(T X)`` against transformations
    ``Hom(T X, -) => F`` (equivalently ``Hom(X, -) => F`` on the reflective
    subcategory): expansion, evaluation at the identity, naturality on
    probe maps, and the reflection bijection ``Hom(X, M) = Hom(T X, M)``."""
    import random

    rng = rng or random.Random(0)
    ab = exponent_k_abelianisation(X, k)
    TX = ab.group
    FTX = F.obj(TX)
    rep = CheckReport(f"reflector Yoneda for {F.name}")
    rep.details["T(X)"] = str(TX)
    rep.details["F(T(X))"] = str(FTX)
    if not probes:
        probes = [FgAbGroup.cyclic(d) for d in ([k] if k else [2, 3, 4])] + [TX]
    elements = list(FTX.elements()) if FTX.is_finite() else [FTX.gen(i) for i in range(FTX.ngens)]
    if len(elements) > max_elements:
        elements = rng.sample(elements, max_elements)
    for M in probes:
        if k and M.is_finite() and k % max(1, M.exponent()):
            raise PreconditionError(f"probe {M} is not of exponent dividing {k}")
        if M.is_finite() and M.order() <= 64:
            homs = len(hom_enumerate(X, group_from_fgab(M)))
            rep.record(homs == hom_group(TX, M).group.order(),
                       f"|Hom(X, {M})| = |Hom(T X, {M})|")
    for t in elements:
        w = yoneda_expand(t, F, TX)
        back = w.component(TX, AbMorphism.identity(TX))
        rep.record(back == t, f"round trip at {t.coords}")
        for M in probes:
            HM = hom_group(TX, M)
            fs = list(HM.group.elements()) if HM.group.is_finite() and HM.group.order() <= 16 \
                else [HM.group.gen(i) for i in range(HM.group.ngens)]
            for fe in fs:
                fbar = HM.to_morphism(fe)
                val = w.component(M, fbar)
                for M2 in probes:
                    HU = hom_group(M, M2)
                    us = [HU.group.gen(i) for i in range(HU.group.ngens)]
                    for ue in us[:2]:
                        u = HU.to_morphism(ue)
                        rep.record(F.mor(u)(val) == w.component(M2, u @ fbar),
                                   f"naturality along {M} -> {M2}")
    if FTX.is_trivial():
        rep.notes.append("F(T X) is zero: only the zero transformation")
    return rep
