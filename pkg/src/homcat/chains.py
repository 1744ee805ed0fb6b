"""Bounded chain complexes of finitely generated abelian groups.

Both homology constructions are kept:

* cokernel construction ``H^c_n = Coker(C_{n+1} -> Ker d_n)``;
* kernel construction ``H^k_n = Ker(Coker d_{n+1} -> C_{n-1})``.

They are compared by :func:`interchange_iso`.  Connecting morphisms and long
exact sequences use the kernel construction throughout, and the connecting
morphism is built from one pullback plus unique lifts and descents, with
no sign inserted anywhere.  With this convention the connecting morphism
of the mapping cone sequence ``B -> cone(f) -> A[1]`` is ``H(f)``.

Cochain complexes are handled by negating degrees (``D_{-n} = C^n``); there
is no separate cochain type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ConsistencyError, DegreeError, PreconditionError, VerificationError
from .fgab import (
    AbMorphism,
    FgAbGroup,
    IntMatrix,
    cokernel,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    image_factorization,
    iso_witness,
    kernel,
    same_subgroup,
)

ZERO = FgAbGroup(0)


class ChainComplex:
    """Complex ``C_hi -> ... -> C_lo`` with ``d_n: C_n -> C_{n-1}``.

    Objects outside ``[lo, hi]`` are zero.  ``d_n`` is stored for
    ``lo < n <= hi``; missing differentials are zero maps.
    """

    def __init__(self, lo: int, hi: int, objects, differentials=None, check=True):
        if hi < lo:
            raise ValueError("empty degree range")
        if not isinstance(objects, Mapping):
            objects = list(objects)
            if len(objects) != hi - lo + 1:
                raise ValueError("need one object per degree in [lo, hi]")
            objects = {lo + i: G for i, G in enumerate(objects)}
        self.lo, self.hi = lo, hi
        self._objects = {n: objects.get(n, ZERO) for n in range(lo, hi + 1)}
        differentials = differentials or {}
        if not isinstance(differentials, Mapping):
            differentials = {lo + 1 + i: f for i, f in enumerate(differentials)}
        self._diffs = {}
        for n in range(lo + 1, hi + 1):
            f = differentials.get(n)
            if f is None:
                f = AbMorphism.zero(self._objects[n], self._objects[n - 1])
            elif not isinstance(f, AbMorphism):
                f = AbMorphism(self._objects[n], self._objects[n - 1], f)
            if f.source != self._objects[n] or f.target != self._objects[n - 1]:
                raise ValueError(f"differential d_{n} has wrong source or target")
            self._diffs[n] = f
        self._cache = {}
        if check:
            for n in range(lo + 2, hi + 1):
                if not (self._diffs[n - 1] @ self._diffs[n]).is_zero():
                    raise VerificationError(f"d_{n - 1} ∘ d_{n} != 0")

    @classmethod
    def concentrated(cls, M: FgAbGroup, degree: int = 0):
        """``K(M, degree)``."""
        return cls(degree, degree, {degree: M})

    @classmethod
    def from_cochain(cls, lo: int, hi: int, objects, coboundaries, check=True):
        """Chain complex of a cochain complex ``C^lo -> ... -> C^hi``.

        ``coboundaries[n]`` is ``delta^n: C^n -> C^{n+1}``; the result has
        ``D_{-n} = C^n`` so ``H_{-n}(D) = H^n``.
        """
        if not isinstance(objects, Mapping):
            objects = {lo + i: G for i, G in enumerate(objects)}
        if not isinstance(coboundaries, Mapping):
            coboundaries = {lo + i: f for i, f in enumerate(coboundaries)}
        return cls(-hi, -lo, {-n: G for n, G in objects.items()},
                   {-n: f for n, f in coboundaries.items()}, check=check)

    def obj(self, n) -> FgAbGroup:
        return self._objects.get(n, ZERO)

    def d(self, n) -> AbMorphism:
        f = self._diffs.get(n)
        if f is None:
            return AbMorphism.zero(self.obj(n), self.obj(n - 1))
        return f

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def __repr__(self):
        parts = " <- ".join(f"{n}:{self.obj(n)}" for n in self.degrees())
        return f"ChainComplex({parts})"

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        degs = range(min(self.lo, other.lo), max(self.hi, other.hi) + 1)
        return (all(self.obj(n) == other.obj(n) for n in degs)
                and all(self.d(n).matrix == other.d(n).matrix for n in degs))

    __hash__ = None

    def shift(self, k: int, sign: bool = True):
        """``C[k]`` with ``C[k]_n = C_{n-k}``, differential ``(-1)^k d``."""
        s = (-1) ** k if sign else 1
        return ChainComplex(self.lo + k, self.hi + k,
                            {n + k: self.obj(n) for n in self.degrees()},
                            {n + k: s * self.d(n) for n in range(self.lo + 1, self.hi + 1)})


@dataclass(frozen=True)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: dict

    def __post_init__(self):
        for n in self.degrees():
            f = self.at(n)
            if f.source != self.source.obj(n) or f.target != self.target.obj(n):
                raise ValueError(f"component {n} has wrong source or target")
        for n in self.degrees():
            lhs = self.target.d(n) @ self.at(n)
            rhs = self.at(n - 1) @ self.source.d(n)
            if not (lhs == rhs):
                raise VerificationError(f"chain map does not commute in degree {n}")

    def degrees(self):
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def at(self, n) -> AbMorphism:
        f = self.components.get(n)
        if f is None:
            return AbMorphism.zero(self.source.obj(n), self.target.obj(n))
        return f

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.degrees()) | set(other.degrees())
        return ChainMap(other.source, self.target, {n: self.at(n) @ other.at(n) for n in degs})

    @classmethod
    def identity(cls, C):
        return cls(C, C, {n: AbMorphism.identity(C.obj(n)) for n in C.degrees()})


@dataclass(frozen=True)
class ComplexSES:
    """``0 -> A -> B -> C -> 0`` degreewise exact.

    ``section`` (``C_n -> B_n`` with ``pi s = 1``) is stored when the
    sequence is termwise split; it need not be a chain map.
    """

    A: ChainComplex
    B: ChainComplex
    C: ChainComplex
    iota: ChainMap
    pi: ChainMap
    section: dict | None = None

    def __post_init__(self):
        if self.iota.source is not self.A and self.iota.source != self.A:
            raise ValueError("iota has the wrong source")
        for n in self.degrees():
            i, p = self.iota.at(n), self.pi.at(n)
            if not i.is_mono():
                raise VerificationError(f"iota_{n} is not a monomorphism")
            if not p.is_epi():
                raise VerificationError(f"pi_{n} is not an epimorphism")
            _, k = kernel(p)
            _, _, m = image_factorization(i)
            if not same_subgroup(k, m):
                raise VerificationError(f"image of iota_{n} != kernel of pi_{n}")
            if self.section is not None:
                s = self.section_at(n)
                if not (p @ s == AbMorphism.identity(self.C.obj(n))):
                    raise VerificationError(f"section in degree {n} is not a section")

    @property
    def termwise_split(self):
        return self.section is not None

    def degrees(self):
        lo = min(self.A.lo, self.B.lo, self.C.lo)
        hi = max(self.A.hi, self.B.hi, self.C.hi)
        return range(lo, hi + 1)

    def section_at(self, n) -> AbMorphism:
        s = (self.section or {}).get(n)
        if s is None:
            return AbMorphism.zero(self.C.obj(n), self.B.obj(n))
        return s

    def retraction_at(self, n) -> AbMorphism:
        """``r: B_n -> A_n`` with ``r iota = 1`` from the stored section."""
        if self.section is None:
            raise PreconditionError("sequence is not termwise split")
        B = self.B.obj(n)
        i = self.iota.at(n)
        e = AbMorphism.identity(B) - self.section_at(n) @ self.pi.at(n)
        return factor_through_mono(i, e)


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CokerHomology:
    """``H = Coker(C_{n+1} -> Z)`` with ``Z = Ker d_n``."""

    group: FgAbGroup
    cycles: FgAbGroup
    cycle_inclusion: AbMorphism  # Z -> C_n
    projection: AbMorphism  # Z -> H


@dataclass(frozen=True)
class KerHomology:
    """``H = Ker(dbar: Q -> C_{n-1})`` with ``Q = Coker d_{n+1}``."""

    group: FgAbGroup
    quotient: FgAbGroup
    quotient_map: AbMorphism  # C_n -> Q
    dbar: AbMorphism  # Q -> C_{n-1}
    inclusion: AbMorphism  # H -> Q


def _check_degree(C, n):
    if not (C.lo <= n <= C.hi):
        raise DegreeError(f"degree {n} outside [{C.lo}, {C.hi}]")


def _coker_homology(C: ChainComplex, n: int) -> CokerHomology:
    key = ("coker", n)
    if key not in C._cache:
        Z, zi = kernel(C.d(n))
        b = factor_through_mono(zi, C.d(n + 1))
        H, p = cokernel(b)
        C._cache[key] = CokerHomology(H, Z, zi, p)
    return C._cache[key]


def _ker_homology(C: ChainComplex, n: int) -> KerHomology:
    key = ("ker", n)
    if key not in C._cache:
        Q, q = cokernel(C.d(n + 1))
        dbar = factor_through_epi(q, C.d(n))
        H, j = kernel(dbar)
        C._cache[key] = KerHomology(H, Q, q, dbar, j)
    return C._cache[key]


def homology_coker(C: ChainComplex, n: int) -> CokerHomology:
    _check_degree(C, n)
    return _coker_homology(C, n)


def homology_ker(C: ChainComplex, n: int) -> KerHomology:
    _check_degree(C, n)
    return _ker_homology(C, n)


def homology(C: ChainComplex, n: int) -> FgAbGroup:
    """``H_n(C)`` (any degree; zero outside the support)."""
    return _ker_homology(C, n).group


def interchange_iso(C: ChainComplex, n: int) -> AbMorphism:
    """The snake isomorphism ``H^c_n(C) -> H^k_n(C)``, with its inverse verified.

    Forward: a cycle maps to its class in ``Coker d_{n+1}``, which lies in
    ``Ker dbar_n``.  Backward: lift an element of ``Ker dbar_n`` along the
    quotient map; the lift is a cycle.
    """
    hc, hk = _coker_homology(C, n), _ker_homology(C, n)
    to_q = hk.quotient_map @ hc.cycle_inclusion
    phi0 = factor_through_mono(hk.inclusion, to_q)
    phi = factor_through_epi(hc.projection, phi0)
    cols = []
    for e in hk.group.gens():
        y = hk.inclusion(e)
        x = hk.quotient_map.lift(y.coords)
        z = hc.cycle_inclusion.lift(x)
        if z is None:
            raise ConsistencyError("lift of a kernel-homology class is not a cycle")
        cols.append(hc.projection(z).coords)
    psi = AbMorphism(hk.group, hc.group, IntMatrix.from_columns(cols, hc.group.ngens))
    if not (psi @ phi == AbMorphism.identity(hc.group)
            and phi @ psi == AbMorphism.identity(hk.group)):
        raise ConsistencyError("interchange maps are not mutually inverse")
    return phi


def induced_map(f: ChainMap, n: int) -> AbMorphism:
    """``H^k_n(f)``."""
    hx, hy = _ker_homology(f.source, n), _ker_homology(f.target, n)
    fbar = factor_through_epi(hx.quotient_map, hy.quotient_map @ f.at(n))
    return factor_through_mono(hy.inclusion, fbar @ hx.inclusion)


def induced_map_coker(f: ChainMap, n: int) -> AbMorphism:
    """``H^c_n(f)``."""
    hx, hy = _coker_homology(f.source, n), _coker_homology(f.target, n)
    zf = factor_through_mono(hy.cycle_inclusion, f.at(n) @ hx.cycle_inclusion)
    return factor_through_epi(hx.projection, hy.projection @ zf)


def _into_pullback(P_incl: AbMorphism, S_inj, uf: AbMorphism, ug: AbMorphism) -> AbMorphism:
    """Map ``W -> P`` determined by its two components."""
    u = S_inj[0] @ uf + S_inj[1] @ ug
    return factor_through_mono(P_incl, u)


def connecting_morphism(ses: ComplexSES, n: int) -> AbMorphism:
    """``∂_{n+1}: H^k_{n+1}(C) -> H^k_n(A)``.

    (1) pull back ``B_{n+1} -> Coker d^C_{n+2}`` along the inclusion of
    ``H^k_{n+1}(C)``; (2) ``X -> B_{n+1} -> B_n`` lifts uniquely to ``A_n``;
    (3) composed into ``Coker d^A_{n+1}`` it lifts to ``H^k_n(A)``;
    (4) it kills the kernel of the epimorphism ``X -> H^k_{n+1}(C)``, whose
    generators come from ``A_{n+1} ⊕ B_{n+2}``, hence descends.
    """
    A, B, C = ses.A, ses.B, ses.C
    hC = _ker_homology(C, n + 1)
    hA = _ker_homology(A, n)
    g = hC.quotient_map @ ses.pi.at(n + 1)
    S, inj, proj = direct_sum([B.obj(n + 1), hC.group])
    diff = AbMorphism(S, hC.quotient, IntMatrix.hstack(g.matrix, -hC.inclusion.matrix),
                      check=False)
    X, x_incl = kernel(diff)
    pB, pH = proj[0] @ x_incl, proj[1] @ x_incl
    # step 2
    dB = B.d(n + 1) @ pB
    if not (ses.pi.at(n) @ dB).is_zero():
        raise ConsistencyError("step 2: X -> C_n is not zero")
    lam = factor_through_mono(ses.iota.at(n), dB)
    t = hA.quotient_map @ lam
    # step 3
    if not (hA.dbar @ t).is_zero():
        raise ConsistencyError("step 3: X -> A_{n-1} is not zero")
    dbar_k = factor_through_mono(hA.inclusion, t)
    # step 4
    K, k_incl = kernel(pH)
    ua = _into_pullback(x_incl, inj, ses.iota.at(n + 1),
                        AbMorphism.zero(A.obj(n + 1), hC.group))
    ub = _into_pullback(x_incl, inj, B.d(n + 2),
                        AbMorphism.zero(B.obj(n + 2), hC.group))
    T, _, tproj = direct_sum([A.obj(n + 1), B.obj(n + 2)])
    u = ua @ tproj[0] + ub @ tproj[1]
    _, _, u_img = image_factorization(u)
    if not same_subgroup(u_img, k_incl):
        raise ConsistencyError("step 4: A_{n+1} ⊕ B_{n+2} does not cover the kernel")
    if not (dbar_k @ k_incl).is_zero():
        raise ConsistencyError("step 4: lift does not vanish on the kernel")
    return factor_through_epi(pH, dbar_k)


# ---------------------------------------------------------------------------
# long exact sequences
# ---------------------------------------------------------------------------


@dataclass
class LESReport:
    labels: list
    groups: list
    maps: list  # maps[i]: groups[i] -> groups[i + 1]
    exact: bool = True
    failures: list = field(default_factory=list)

    def lines(self):
        out = []
        for lab, G in zip(self.labels, self.groups):
            out.append(f"{lab} ≅ {G}")
        out.append(f"exact: {str(self.exact).lower()}")
        out.extend(f"failure: {f}" for f in self.failures)
        return out


def check_exact_at(f: AbMorphism, g: AbMorphism) -> bool:
    """Whether ``image f == kernel g`` inside ``f.target == g.source``."""
    _, _, m = image_factorization(f)
    _, k = kernel(g)
    if not same_subgroup(m, k):
        return False
    return iso_witness(m.source, k.source) is not None


def long_exact_sequence(ses: ComplexSES, strict: bool = True) -> LESReport:
    """``... -> H_{n+1}C -> H_nA -> H_nB -> H_nC -> H_{n-1}A -> ...``.

    Zero end nodes ``H_{hi+1}(C)`` and ``H_{lo-1}(A)`` are included, so
    every displayed homology group sits at an interior node.
    """
    degs = list(ses.degrees())
    lo, hi = degs[0], degs[-1]
    labels = [f"H_{hi + 1}(C)"]
    groups = [_ker_homology(ses.C, hi + 1).group]
    maps = [connecting_morphism(ses, hi)]
    for n in range(hi, lo - 1, -1):
        labels += [f"H_{n}(A)", f"H_{n}(B)", f"H_{n}(C)"]
        groups += [_ker_homology(ses.A, n).group, _ker_homology(ses.B, n).group,
                   _ker_homology(ses.C, n).group]
        maps += [induced_map(ses.iota, n), induced_map(ses.pi, n),
                 connecting_morphism(ses, n - 1)]
    labels.append(f"H_{lo - 1}(A)")
    groups.append(_ker_homology(ses.A, lo - 1).group)
    report = LESReport(labels, groups, maps)
    for i in range(1, len(groups) - 1):
        if not check_exact_at(maps[i - 1], maps[i]):
            report.exact = False
            report.failures.append(f"not exact at {labels[i]}")
    if strict and not report.exact:
        raise VerificationError("; ".join(report.failures))
    return report


# ---------------------------------------------------------------------------
# functors on complexes
# ---------------------------------------------------------------------------


def apply_functor(T, C: ChainComplex) -> ChainComplex:
    """Degreewise ``T(C)``; ``d ∘ d = 0`` is re-verified."""
    return ChainComplex(C.lo, C.hi, {n: T.obj(C.obj(n)) for n in C.degrees()},
                        {n: T.mor(C.d(n)) for n in range(C.lo + 1, C.hi + 1)})


def apply_functor_map(T, f: ChainMap, source=None, target=None) -> ChainMap:
    source = source or apply_functor(T, f.source)
    target = target or apply_functor(T, f.target)
    return ChainMap(source, target, {n: T.mor(f.at(n)) for n in f.degrees()})


def apply_functor_ses(T, ses: ComplexSES) -> ComplexSES:
    """``T`` applied to a termwise split sequence stays termwise split exact."""
    if not ses.termwise_split:
        raise PreconditionError("functor image of an unsplit sequence need not be exact")
    TA, TB, TC = (apply_functor(T, X) for X in (ses.A, ses.B, ses.C))
    section = {n: T.mor(ses.section_at(n)) for n in ses.degrees()}
    return ComplexSES(TA, TB, TC, apply_functor_map(T, ses.iota, TA, TB),
                      apply_functor_map(T, ses.pi, TB, TC), section)


# ---------------------------------------------------------------------------
# standard sequences
# ---------------------------------------------------------------------------


def mapping_cone(f: ChainMap) -> ChainComplex:
    """``cone(f)_n = A_{n-1} ⊕ B_n`` with ``d(a, b) = (-d a, f a + d b)``."""
    A, B = f.source, f.target
    lo = min(A.lo + 1, B.lo)
    hi = max(A.hi + 1, B.hi)
    objs, diffs = {}, {}
    for n in range(lo, hi + 1):
        objs[n], _, _ = direct_sum([A.obj(n - 1), B.obj(n)])
    for n in range(lo + 1, hi + 1):
        top = IntMatrix.hstack(-A.d(n - 1).matrix,
                               IntMatrix.zeros(A.obj(n - 2).ngens, B.obj(n).ngens))
        bot = IntMatrix.hstack(f.at(n - 1).matrix, B.d(n).matrix)
        diffs[n] = AbMorphism(objs[n], objs[n - 1], IntMatrix.vstack(top, bot))
    return ChainComplex(lo, hi, objs, diffs)


def cone_sequence(f: ChainMap) -> ComplexSES:
    """``0 -> B -> cone(f) -> A[1] -> 0`` (termwise split)."""
    A, B = f.source, f.target
    cone = mapping_cone(f)
    A1 = A.shift(1)
    iota, pi, sec = {}, {}, {}
    for n in cone.degrees():
        a, b = A.obj(n - 1).ngens, B.obj(n).ngens
        iota[n] = AbMorphism(B.obj(n), cone.obj(n),
                             IntMatrix.vstack(IntMatrix.zeros(a, b), IntMatrix.identity(b)),
                             check=False)
        pi[n] = AbMorphism(cone.obj(n), A1.obj(n),
                           IntMatrix.hstack(IntMatrix.identity(a), IntMatrix.zeros(a, b)),
                           check=False)
        sec[n] = AbMorphism(A1.obj(n), cone.obj(n),
                            IntMatrix.vstack(IntMatrix.identity(a), IntMatrix.zeros(b, a)),
                            check=False)
    Bx = ChainComplex(cone.lo, cone.hi, {n: B.obj(n) for n in cone.degrees()},
                      {n: B.d(n) for n in range(cone.lo + 1, cone.hi + 1)})
    A1x = ChainComplex(cone.lo, cone.hi, {n: A1.obj(n) for n in cone.degrees()},
                       {n: A1.d(n) for n in range(cone.lo + 1, cone.hi + 1)})
    return ComplexSES(Bx, cone, A1x, ChainMap(Bx, cone, iota), ChainMap(cone, A1x, pi), sec)


def split_sequence(A: ChainComplex, C: ChainComplex, twist: Mapping | None = None) -> ComplexSES:
    """``0 -> A -> B -> C -> 0`` with ``B_n = A_n ⊕ C_n`` and differential
    ``[[d_A, t_n], [0, d_C]]``; ``twist[n]: C_n -> A_{n-1}`` must satisfy
    ``d_A t_n + t_{n-1} d_C = 0``.  Zero twist gives the direct sum."""
    twist = twist or {}
    lo, hi = min(A.lo, C.lo), max(A.hi, C.hi)
    objs, diffs, iota, pi, sec = {}, {}, {}, {}, {}
    for n in range(lo, hi + 1):
        objs[n], inj, proj = direct_sum([A.obj(n), C.obj(n)])
    for n in range(lo + 1, hi + 1):
        t = twist.get(n)
        tm = t.matrix if t is not None else IntMatrix.zeros(A.obj(n - 1).ngens, C.obj(n).ngens)
        top = IntMatrix.hstack(A.d(n).matrix, tm)
        bot = IntMatrix.hstack(IntMatrix.zeros(C.obj(n - 1).ngens, A.obj(n).ngens), C.d(n).matrix)
        diffs[n] = AbMorphism(objs[n], objs[n - 1], IntMatrix.vstack(top, bot))
    B = ChainComplex(lo, hi, objs, diffs)
    Ax = ChainComplex(lo, hi, {n: A.obj(n) for n in range(lo, hi + 1)},
                      {n: A.d(n) for n in range(lo + 1, hi + 1)})
    Cx = ChainComplex(lo, hi, {n: C.obj(n) for n in range(lo, hi + 1)},
                      {n: C.d(n) for n in range(lo + 1, hi + 1)})
    for n in range(lo, hi + 1):
        _, inj, proj = direct_sum([A.obj(n), C.obj(n)])
        iota[n] = AbMorphism(A.obj(n), B.obj(n), inj[0].matrix, check=False)
        pi[n] = AbMorphism(B.obj(n), C.obj(n), proj[1].matrix, check=False)
        sec[n] = AbMorphism(C.obj(n), B.obj(n), inj[1].matrix, check=False)
    return ComplexSES(Ax, B, Cx, ChainMap(Ax, B, iota), ChainMap(B, Cx, pi), sec)


def ladder_check(ses: ComplexSES, T, n_range: Sequence[int]):
    """Compare the long exact sequence of ``T(ses)`` with the sequence of
    natural-transformation groups, square by square (see
    :func:`homcat.derived.ladder_check`)."""
    from .derived import ladder_check as _ladder

    return _ladder(ses, T, n_range)
