"""Resolutions, derived functors and the homological Yoneda isomorphism.

For a complex ``C``, a right exact ``T`` and a degree ``n`` put
``Q = Coker d_{n+1}`` with projection ``q: C_n -> Q``.  A natural
transformation out of the ``n``-th cohomology functor of ``C`` into ``T``
is determined by one element ``z`` of ``T(Q)`` lying in the kernel of
``T(dbar_n)``; its component at ``A`` sends the class of a cocycle
``phi: C_n -> A`` to ``T(phibar)(z)``.  :class:`NatWitness` stores exactly
this data and evaluates components on demand.  The isomorphism with
``H_n(T C)`` goes through ``T(Q) ≅ Coker T(d_{n+1})``, which is where right
exactness of ``T`` enters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .chains import (
    ChainComplex,
    ChainMap,
    ComplexSES,
    _ker_homology,
    _coker_homology,
    apply_functor,
    apply_functor_map,
    connecting_morphism,
    induced_map,
    interchange_iso,
    long_exact_sequence,
    split_sequence,
)
from .errors import ConsistencyError, PreconditionError
from .fgab import (
    AbElement,
    AbMorphism,
    FgAbGroup,
    IntMatrix,
    factor_through_epi,
    factor_through_mono,
    hom_group,
    hom_map,
    integer_kernel,
    iso_witness,
    kernel,
    tensor,
    tensor_map,
)
from .report import CheckReport


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FunctorSpec:
    """Additive functor ``Ab -> Ab`` given by its object and morphism actions.

    ``scalar_k`` is set when the values carry a ``Z/k``-module structure
    (for ``⊗Z/k`` the action of ``s`` is multiplication by ``s``).
    """

    name: str
    obj: Callable[[FgAbGroup], FgAbGroup]
    mor: Callable[[AbMorphism], AbMorphism]
    exactness: str = "right_exact"
    scalar_k: int | None = None

    def __repr__(self):
        return f"FunctorSpec({self.name})"


def identity_functor() -> FunctorSpec:
    return FunctorSpec("id", lambda A: A, lambda f: f, "exact", None)


def tensor_functor(M: FgAbGroup | int) -> FunctorSpec:
    """``- ⊗ M``; an integer ``k`` means ``M = Z/k`` (``k = 0`` gives ``Z``)."""
    if isinstance(M, int):
        k = M
        M = FgAbGroup.cyclic(k)
        name = f"tensor:{k}"
        scalar = k if k != 0 else None
    else:
        name = f"tensor:[{M}]"
        scalar = M.exponent() if M.is_finite() else None
    exact = "exact" if (M.torsion == () and M.free_rank >= 0) else "right_exact"
    return FunctorSpec(name, lambda A: tensor(A, M), lambda f: tensor_map(f, M), exact, scalar)


def parse_functor(spec: str) -> FunctorSpec:
    """``"id"`` or ``"tensor:k"``."""
    if spec == "id":
        return identity_functor()
    if spec.startswith("tensor:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise PreconditionError(f"bad functor {spec!r}") from None
        if k < 0:
            raise PreconditionError("tensor order must be nonnegative")
        return tensor_functor(k)
    raise PreconditionError(f"unknown functor {spec!r} (expected id or tensor:k)")


def tensor_transformation(u: AbMorphism, A: FgAbGroup) -> AbMorphism:
    """Component at ``A`` of ``⊗M => ⊗M'`` induced by ``u: M -> M'``."""
    return tensor_map(AbMorphism.identity(A), u.source, u)


def check_functor(T: FunctorSpec, maps: Sequence[AbMorphism],
                  sequences: Sequence[tuple] = ()) -> CheckReport:
    """Spot checks: identities, composition, finite sums, right exactness.

    ``maps`` are sample morphisms (composable pairs are used when found),
    ``sequences`` are short exact ``(i, p)`` pairs.
    """
    from .fgab import direct_sum, image_factorization, same_subgroup

    rep = CheckReport(f"functor {T.name}")
    for f in maps:
        rep.record(T.mor(AbMorphism.identity(f.source)) == AbMorphism.identity(T.obj(f.source)),
                   f"identity on {f.source}")
        for g in maps:
            if g.source == f.target:
                rep.record(T.mor(g @ f) == T.mor(g) @ T.mor(f), "composition")
        S, inj, proj = direct_sum([f.source, f.target])
        TS = T.obj(S)
        w = iso_witness(TS, direct_sum([T.obj(f.source), T.obj(f.target)])[0])
        rep.record(w is not None, f"sum {f.source} ⊕ {f.target}")
    for i, p in sequences:
        Ti, Tp = T.mor(i), T.mor(p)
        rep.record(Tp.is_epi(), "T(p) epi")
        _, _, m = image_factorization(Ti)
        _, k = kernel(Tp)
        rep.record(same_subgroup(m, k), "image T(i) = kernel T(p)")
    return rep


# ---------------------------------------------------------------------------
# resolutions and derived functors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    X: FgAbGroup
    P: ChainComplex
    augmentation: AbMorphism  # P_0 -> X

    def verify(self) -> CheckReport:
        rep = CheckReport("resolution")
        for n in self.P.degrees():
            rep.record(self.P.obj(n).relations.cols == 0, f"P_{n} free")
        rep.record(self.augmentation.is_epi(), "augmentation epi")
        rep.record((self.augmentation @ self.P.d(1)).is_zero(), "augmentation kills d_1")
        H0 = _ker_homology(self.P, 0)
        eb = factor_through_epi(H0.quotient_map, self.augmentation)
        rep.record(eb.is_iso(), "H_0(P) ≅ X")
        for n in range(1, self.P.hi + 1):
            rep.record(_ker_homology(self.P, n).group.is_trivial(), f"H_{n}(P) = 0")
        return rep


def free_resolution(X: FgAbGroup, length: int = 1) -> Resolution:
    """``P_0`` free on the generators, ``P_1`` on the relations, ``d_1`` the
    presentation matrix; when the relations are dependent ``P_2`` is free on
    a basis of their syzygies.  Zeros pad up to ``length``."""
    if length < 1:
        raise PreconditionError("resolution length must be at least 1")
    g, r = X.ngens, X.relations.cols
    objs = {0: FgAbGroup.free(g), 1: FgAbGroup.free(r)}
    diffs = {1: AbMorphism(objs[1], objs[0], X.relations, check=False)}
    syz = integer_kernel(X.relations)
    if syz:
        objs[2] = FgAbGroup.free(len(syz))
        diffs[2] = AbMorphism(objs[2], objs[1], IntMatrix.from_columns(syz, r), check=False)
    hi = max(length, max(objs))
    P = ChainComplex(0, hi, objs, diffs)
    eps = AbMorphism(objs[0], X, IntMatrix.identity(g), check=False)
    return Resolution(X, P, eps)


def padded_resolution(res: Resolution) -> Resolution:
    """``res`` plus the contractible summand ``Z --id--> Z`` in degrees 1, 0."""
    P = res.P
    objs, diffs = {}, {}
    for n in P.degrees():
        extra = 1 if n in (0, 1) else 0
        objs[n] = FgAbGroup.free(P.obj(n).ngens + extra)
    for n in range(1, P.hi + 1):
        m = P.d(n).matrix
        if n == 1:
            m = IntMatrix.block_diag(m, IntMatrix.identity(1))
        elif n == 2:
            m = IntMatrix.vstack(m, IntMatrix.zeros(1, m.cols))
        diffs[n] = AbMorphism(objs[n], objs[n - 1], m, check=False)
    Q = ChainComplex(P.lo, P.hi, objs, diffs)
    e = IntMatrix.hstack(res.augmentation.matrix, IntMatrix.zeros(res.X.ngens, 1))
    return Resolution(res.X, Q, AbMorphism(objs[0], res.X, e, check=False))


def left_derived(T: FunctorSpec, n: int, X: FgAbGroup, resolution: Resolution | None = None):
    res = resolution or free_resolution(X, max(2, n + 1))
    return _ker_homology(apply_functor(T, res.P), n).group


def hom_complex(C: ChainComplex, A: FgAbGroup):
    """``Hom(C, A)`` as a chain complex in negated degrees, with the Hom
    groups used for each degree (``H^i(C; A) = H_{-i}``)."""
    homs = {i: hom_group(C.obj(i), A) for i in range(C.lo, C.hi + 1)}
    objs = {i: homs[i].group for i in homs}
    cob = {}
    for i in range(C.lo, C.hi):
        cob[i] = hom_map(C.d(i + 1), A, homs[i], homs[i + 1])
    D = ChainComplex.from_cochain(C.lo, C.hi, objs, cob)
    return D, homs


def cohomology(C: ChainComplex, A: FgAbGroup, n: int) -> FgAbGroup:
    D, _ = hom_complex(C, A)
    return _ker_homology(D, -n).group


def ext_group(X: FgAbGroup, A: FgAbGroup, n: int) -> FgAbGroup:
    """``H^n Hom(P(X), A)``; ``Ext^0 = Hom(X, A)``."""
    res = free_resolution(X, max(2, n + 1))
    return cohomology(res.P, A, n)


def tor_group(X: FgAbGroup, M: FgAbGroup, n: int) -> FgAbGroup:
    return left_derived(tensor_functor(M), n, X)


# ---------------------------------------------------------------------------
# Yoneda witnesses
# ---------------------------------------------------------------------------


class NatWitness:
    """Natural transformation represented by ``z ∈ T(Q)``.

    ``q: S -> Q`` is an epimorphism; a component is evaluated on morphisms
    ``phi: S -> A`` that vanish on ``ker q`` (the cocycles).
    """

    __slots__ = ("q", "z", "T", "space")

    def __init__(self, q: AbMorphism, z: AbElement, T: FunctorSpec, space=None):
        self.q, self.z, self.T, self.space = q, z, T, space

    @property
    def base(self):
        return self.q.target

    def component(self, A: FgAbGroup, phi: AbMorphism) -> AbElement:
        if phi.source != self.q.source or phi.target != A:
            raise ValueError("representative has the wrong source or target")
        try:
            phibar = factor_through_epi(self.q, phi)
        except ConsistencyError:
            raise PreconditionError("representative is not a cocycle: it does not "
                                    "vanish on the image of the next differential") from None
        return self.T.mor(phibar)(self.z)

    def __add__(self, other):
        return NatWitness(self.q, self.z + other.z, self.T, self.space)

    def __rmul__(self, s: int):
        return NatWitness(self.q, s * self.z, self.T, self.space)

    def __eq__(self, other):
        return isinstance(other, NatWitness) and self.q is other.q and self.z == other.z

    __hash__ = None

    def __repr__(self):
        return f"NatWitness({self.T.name}, base {self.base}, z={self.z.coords})"


def yoneda_expand(t: AbElement, T: FunctorSpec, X: FgAbGroup) -> NatWitness:
    """Degree-0 form: component at ``A`` sends ``f: X -> A`` to ``T(f)(t)``."""
    if t.group != T.obj(X):
        raise ValueError("t is not an element of T(X)")
    return NatWitness(AbMorphism.identity(X), t, T)


class YonedaSpace:
    """The bijection ``H_n(T C) ≅ {witnesses}`` for fixed ``(C, T, n)``.

    ``group`` is the witness group ``Ker(T(dbar_n)) ⊆ T(Q)``; ``to_hk`` and
    ``from_hk`` convert between it and the kernel-construction homology of
    ``T(C)``; ``forward``/``backward`` act on cokernel-construction classes.
    """

    def __init__(self, C: ChainComplex, T: FunctorSpec, n: int, TC: ChainComplex | None = None):
        self.C, self.T, self.n = C, T, n
        hk = _ker_homology(C, n)
        self.q = hk.quotient_map
        self.Q = hk.quotient
        self.TQ = T.obj(self.Q)
        self.group, self.incl = kernel(T.mor(hk.dbar))
        self.TC = TC if TC is not None else apply_functor(T, C)
        hT = _ker_homology(self.TC, n)
        # right exactness: T(q) induces Coker T(d_{n+1}) ≅ T(Q)
        self.theta = factor_through_epi(hT.quotient_map, T.mor(self.q))
        if not self.theta.is_iso():
            raise PreconditionError(f"{T.name} does not preserve the cokernel of d_{n + 1}")
        self.from_hk = factor_through_mono(self.incl, self.theta @ hT.inclusion)
        self.to_hk = self.from_hk.inverse()
        self.interchange = interchange_iso(self.TC, n)
        self.interchange_inv = self.interchange.inverse()
        self.Hc = _coker_homology(self.TC, n).group
        self.Hk = hT.group

    def witness(self, w: AbElement) -> NatWitness:
        """Witness for an element of the witness group."""
        return NatWitness(self.q, self.incl(w), self.T, self)

    def forward(self, h: AbElement) -> NatWitness:
        """``H^c_n(T C) -> witnesses``."""
        return self.witness(self.from_hk(self.interchange(h)))

    def evaluate_back(self, w: NatWitness) -> AbElement:
        """Element of the witness group recovered by evaluating ``w`` at
        ``Q`` on the class of the projection."""
        z = w.component(self.Q, self.q)
        x = self.incl.lift(z.coords)
        if x is None:
            raise ConsistencyError("evaluation does not land in Ker T(dbar)")
        return self.group.element(x)

    def backward(self, w: NatWitness) -> AbElement:
        return self.interchange_inv(self.to_hk(self.evaluate_back(w)))


def homological_yoneda(C: ChainComplex, T: FunctorSpec, n: int) -> YonedaSpace:
    return YonedaSpace(C, T, n)


def _cocycle_probes(C, n, targets, rng, per_target=2):
    """Random cocycles ``C_n -> A`` together with coboundaries."""
    out = []
    for A in targets:
        H = hom_group(C.obj(n), A)
        for _ in range(per_target):
            x = H.group.element([rng.randint(-3, 3) for _ in range(H.group.ngens)])
            phi = H.to_morphism(x)
            hk = _ker_homology(C, n)
            if not (phi @ C.d(n + 1)).is_zero():
                # project to a cocycle: go through Q
                Hq = hom_group(hk.quotient, A)
                y = Hq.group.element([rng.randint(-3, 3) for _ in range(Hq.group.ngens)])
                phi = Hq.to_morphism(y) @ hk.quotient_map
            Hb = hom_group(C.obj(n - 1), A)
            y = Hb.group.element([rng.randint(-3, 3) for _ in range(Hb.group.ngens)])
            cob = Hb.to_morphism(y) @ C.d(n)
            out.append((A, phi, cob))
    return out


PROBE_TARGETS = (1, 2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 0)


def probe_family(rng, count=3):
    """Cyclic probes ``Z`` and ``Z/p^k`` with ``p^k <= 16``."""
    picks = [PROBE_TARGETS[rng.randrange(len(PROBE_TARGETS))] for _ in range(count)]
    return [FgAbGroup.cyclic(k) for k in picks]


def yoneda_check(C: ChainComplex, T: FunctorSpec, n: int, rng, probes=3,
                 space: YonedaSpace | None = None) -> CheckReport:
    """Round trips, coboundary annihilation, naturality and additivity."""
    Y = space or YonedaSpace(C, T, n)
    rep = CheckReport(f"yoneda n={n} {T.name}")
    rep.details["classes"] = Y.Hc.order() if Y.Hc.is_finite() else "infinite"
    gens = list(Y.Hc.gens())
    samples = gens + [Y.Hc.element([rng.randint(-3, 3) for _ in range(Y.Hc.ngens)])
                      for _ in range(2)]
    for h in samples:
        rep.record(Y.backward(Y.forward(h)) == h, "backward ∘ forward = id")
    for w in list(Y.group.gens()) + [Y.group.element([rng.randint(-3, 3)
                                                       for _ in range(Y.group.ngens)])]:
        W = Y.witness(w)
        rep.record(Y.forward(Y.backward(W)) == W, "forward ∘ backward = id")
    if len(samples) >= 2:
        a, b = samples[-2], samples[-1]
        rep.record(Y.forward(a + b) == Y.forward(a) + Y.forward(b), "additivity")
    targets = probe_family(rng, probes)
    for A, phi, cob in _cocycle_probes(C, n, targets, rng):
        for h in samples[:3]:
            W = Y.forward(h)
            rep.record(W.component(A, cob).is_zero(), "coboundary annihilated")
            v = W.component(A, phi)
            v2 = W.component(A, phi + cob)
            rep.record(v == v2, "component constant on cohomology classes")
            for B in probe_family(rng, 1):
                Hab = hom_group(A, B)
                g = Hab.to_morphism(Hab.group.element(
                    [rng.randint(-3, 3) for _ in range(Hab.group.ngens)]))
                rep.record(W.component(B, g @ phi) == T.mor(g)(v), "naturality")
    return rep


def scalar_enrichment_check(T: FunctorSpec, C: ChainComplex, n: int, scalars,
                            space: YonedaSpace | None = None) -> CheckReport:
    """The Yoneda bijection commutes with the ``Z/k`` action (``s`` acts by
    multiplication on ``T``-values and on witnesses)."""
    if T.scalar_k is None:
        raise PreconditionError("functor carries no Z/k scalar action")
    Y = space or YonedaSpace(C, T, n)
    rep = CheckReport(f"scalar action k={T.scalar_k}")
    for s in scalars:
        for h in Y.Hc.gens():
            rep.record(Y.forward(s * h) == s * Y.forward(h), f"forward commutes with {s}")
        for w in Y.group.gens():
            W = Y.witness(w)
            rep.record(Y.backward(s * W) == s * Y.backward(W), f"backward commutes with {s}")
            rep.record(Y.evaluate_back(s * W) == s * Y.evaluate_back(W), "component action")
        if T.scalar_k == 1:
            rep.record(Y.Hc.is_trivial() and Y.group.is_trivial(), "k = 1 gives zero")
    return rep


def chain_map_naturality(g: ChainMap, T: FunctorSpec, n: int, rng, probes=2) -> CheckReport:
    """Component of the witness of ``H_n(Tg)(h)`` at ``A`` on ``phi'`` equals
    the component of the witness of ``h`` on ``phi' ∘ g_n``."""
    Y1 = YonedaSpace(g.source, T, n)
    Y2 = YonedaSpace(g.target, T, n)
    Tg = apply_functor_map(T, g, Y1.TC, Y2.TC)
    Hg = induced_map_coker_T(Tg, n)
    rep = CheckReport("naturality in C")
    for A in probe_family(rng, probes):
        hk = _ker_homology(g.target, n)
        Hq = hom_group(hk.quotient, A)
        for _ in range(2):
            y = Hq.group.element([rng.randint(-3, 3) for _ in range(Hq.group.ngens)])
            phi = Hq.to_morphism(y) @ hk.quotient_map
            for h in Y1.Hc.gens():
                lhs = Y2.forward(Hg(h)).component(A, phi)
                rhs = Y1.forward(h).component(A, phi @ g.at(n))
                rep.record(lhs == rhs, "chain-map naturality")
    return rep


def induced_map_coker_T(f: ChainMap, n: int) -> AbMorphism:
    from .chains import induced_map_coker

    return induced_map_coker(f, n)


def functor_naturality(C: ChainComplex, u: AbMorphism, n: int) -> CheckReport:
    """``⊗M => ⊗M'`` from ``u: M -> M'``: the Yoneda squares commute."""
    T1, T2 = tensor_functor(u.source), tensor_functor(u.target)
    Y1, Y2 = YonedaSpace(C, T1, n), YonedaSpace(C, T2, n)
    comps = {k: tensor_transformation(u, C.obj(k)) for k in range(C.lo, C.hi + 1)}
    eta = ChainMap(Y1.TC, Y2.TC, comps)
    from .chains import induced_map_coker

    Hu = induced_map_coker(eta, n)
    eQ = tensor_transformation(u, Y1.Q)
    rep = CheckReport("naturality in T")
    for h in Y1.Hc.gens():
        z1 = Y1.forward(h).z
        z2 = Y2.forward(Hu(h)).z
        rep.record(eQ(z1) == z2, "T-naturality square")
    return rep


# ---------------------------------------------------------------------------
# ladders
# ---------------------------------------------------------------------------


@dataclass
class LadderReport(CheckReport):
    les: object = None


def _extension_along(i: AbMorphism, phi: AbMorphism):
    """Some ``psi`` with ``psi ∘ i == phi``, or ``None``."""
    H_src = hom_group(i.target, phi.target)
    H_tgt = hom_group(i.source, phi.target)
    restr = hom_map(i, phi.target, H_src, H_tgt)
    x = restr.lift(H_tgt.from_morphism(phi).coords)
    if x is None:
        return None
    return H_src.to_morphism(H_src.group.element(x))


def ladder_check(ses: ComplexSES, T: FunctorSpec, n_range: Sequence[int]) -> LadderReport:
    """Witness row versus the long exact sequence of ``T(ses)``.

    Top row maps act on witnesses by evaluating components:
    ``alpha`` and ``beta`` evaluate on ``q^B ∘ iota_n`` and ``q^C ∘ pi_n``;
    the connecting map evaluates a degree ``n+1`` witness of ``C`` on
    ``psi`` where ``psi ∘ pi = phi~ ∘ d^B_{n+1}`` and ``phi~`` extends
    ``q^A_n`` along ``iota_n`` (the retraction gives one when split).
    The vertical maps are the Yoneda bijections.
    """
    rep = LadderReport(f"ladder {T.name}")
    split = ses.termwise_split
    if not split:
        if T.exactness != "exact":
            raise PreconditionError("ladder_check needs a termwise split sequence "
                                    "for a functor that is only right exact")
        rep.notes.append("unsplit sequence with exact functor")
    TA, TB, TC = (apply_functor(T, X) for X in (ses.A, ses.B, ses.C))
    Ti = apply_functor_map(T, ses.iota, TA, TB)
    Tp = apply_functor_map(T, ses.pi, TB, TC)
    Tsec = {n: T.mor(ses.section_at(n)) for n in ses.degrees()} if split else None
    Tses = ComplexSES(TA, TB, TC, Ti, Tp, Tsec)
    les = long_exact_sequence(Tses, strict=False)
    rep.les = les
    rep.record(les.exact, "bottom row exact")
    spaces = {}

    def space(which, n):
        key = (which, n)
        if key not in spaces:
            X, TX = {"A": (ses.A, TA), "B": (ses.B, TB), "C": (ses.C, TC)}[which]
            spaces[key] = YonedaSpace(X, T, n, TX)
        return spaces[key]

    def top_map(src, dst, phi_for):
        cols = []
        phi = phi_for()
        for w in src.group.gens():
            z = src.witness(w).component(dst.Q, phi)
            x = dst.incl.lift(z.coords)
            if x is None:
                raise ConsistencyError("top-row value is not a witness")
            cols.append(x)
        return AbMorphism(src.group, dst.group, IntMatrix.from_columns(cols, dst.group.ngens))

    def square(top, ysrc, ydst, bottom, what):
        lhs = ydst.to_hk @ top
        rhs = bottom @ ysrc.to_hk
        rep.record(lhs == rhs, what)

    for n in n_range:
        WA, WB, WC = space("A", n), space("B", n), space("C", n)
        rep.details[f"H_{n}"] = f"{WA.Hk} -> {WB.Hk} -> {WC.Hk}"
        a = top_map(WA, WB, lambda: WB.q @ ses.iota.at(n))
        b = top_map(WB, WC, lambda: WC.q @ ses.pi.at(n))
        square(a, WA, WB, induced_map(Ti, n), f"alpha square in degree {n}")
        square(b, WB, WC, induced_map(Tp, n), f"beta square in degree {n}")
        WC1 = space("C", n + 1)
        if split:
            r = ses.retraction_at(n)
            ext = WA.q @ r
        else:
            ext = _extension_along(ses.iota.at(n), WA.q)
        if ext is None:
            rep.notes.append(f"connecting square in degree {n + 1} not built: "
                             "q^A does not extend along iota")
            continue
        psi = factor_through_epi(ses.pi.at(n + 1), ext @ ses.B.d(n + 1))
        d = top_map(WC1, WA, lambda: psi)
        square(d, WC1, WA, connecting_morphism(Tses, n), f"connecting square {n + 1} -> {n}")
    return rep


# ---------------------------------------------------------------------------
# derived ladder (horseshoe)
# ---------------------------------------------------------------------------


def horseshoe(i: AbMorphism, p: AbMorphism, length: int = 2):
    """Split sequence of free resolutions over ``A --i--> X --p--> Y``.

    Returns ``(ses, (resA, resX, resY))``.
    """
    A, X, Y = i.source, i.target, p.target
    rA, rY = free_resolution(A, length), free_resolution(Y, length)
    PA, PY = rA.P, rY.P
    hi = max(PA.hi, PY.hi)
    PA = ChainComplex(0, hi, {n: PA.obj(n) for n in range(hi + 1)},
                      {n: PA.d(n) for n in range(1, hi + 1)})
    PY = ChainComplex(0, hi, {n: PY.obj(n) for n in range(hi + 1)},
                      {n: PY.d(n) for n in range(1, hi + 1)})
    cols = []
    for j in range(Y.ngens):
        x = p.lift(rY.augmentation.image_of_gen(j).coords)
        if x is None:
            raise PreconditionError("p is not surjective")
        cols.append(x)
    sigma0 = AbMorphism(PY.obj(0), X, IntMatrix.from_columns(cols, X.ngens), check=False)
    ie = i @ rA.augmentation
    lam = {}
    prev = None
    for n in range(1, hi + 1):
        src, tgt = PY.obj(n), PA.obj(n - 1)
        cols = []
        for j in range(src.ngens):
            if n == 1:
                y = (sigma0 @ PY.d(1)).image_of_gen(j)
                x = ie.lift(y.coords)
            else:
                y = (prev @ PY.d(n)).image_of_gen(j)
                x = PA.d(n - 1).lift(y.coords)
            if x is None:
                raise ConsistencyError(f"horseshoe lift fails in degree {n}")
            cols.append(tuple(-c for c in x))
        lam[n] = AbMorphism(src, tgt, IntMatrix.from_columns(cols, tgt.ngens), check=False)
        prev = lam[n]
    ses = split_sequence(PA, PY, lam)
    eX = AbMorphism(ses.B.obj(0), X, IntMatrix.hstack(ie.matrix, sigma0.matrix), check=False)
    rX = Resolution(X, ses.B, eX)
    return ses, (rA, rX, rY)


def derived_ladder(i: AbMorphism, p: AbMorphism, T: FunctorSpec,
                   n_range: Sequence[int] = (0, 1)) -> LadderReport:
    """Ladder for ``L_n T`` of ``0 -> A -> X -> Y -> 0`` via a horseshoe."""
    ses, (rA, rX, rY) = horseshoe(i, p, max(2, max(n_range) + 2))
    rep = ladder_check(ses, T, n_range)
    for name, r in (("A", rA), ("X", rX), ("Y", rY)):
        rep.merge(r.verify(), prefix=f"resolution of {name}: ")
    les = rep.les
    rep.details["sequence"] = ", ".join(
        f"{lab.replace('H_', 'L_')} ≅ {G}" for lab, G in zip(les.labels[1:-1], les.groups[1:-1]))
    return rep


# ---------------------------------------------------------------------------
# abelian universal coefficients
# ---------------------------------------------------------------------------


def abelian_uct_check(C: ChainComplex, A: FgAbGroup, n: int) -> CheckReport:
    """For ``C`` free, bounded below at 0 and with ``H_i(C) = 0`` for
    ``i < n``: ``H^n(C; A) ≅ Hom(H_n C, A)`` through an explicit map, and
    ``H^i(C; A) = 0`` for ``i < n``.

    Hypothesis failures raise :class:`PreconditionError`.
    """
    if C.lo < 0:
        raise PreconditionError("complex is not bounded below at 0")
    for i in C.degrees():
        if C.obj(i).relations.cols:
            raise PreconditionError(f"C_{i} is not free")
    for i in range(0, n):
        if not _ker_homology(C, i).group.is_trivial():
            raise PreconditionError(f"H_{i}(C) = {_ker_homology(C, i).group} is not zero")
    rep = CheckReport(f"abelian UCT n={n}")
    D, homs = hom_complex(C, A)
    for i in range(0, n):
        rep.record(_ker_homology(D, -i).group.is_trivial(), f"H^{i}(C; A) = 0")
    # evaluation map H^n(C; A) -> Hom(H_n C, A)
    hc = _coker_homology(D, -n)  # cocycles modulo coboundaries
    hn = _coker_homology(C, n)
    Hh = hom_group(hn.group, A)
    cols = []
    for g in hc.group.gens():
        cyc = hc.cycle_inclusion(hc.projection.lift(g.coords))
        phi = homs[n].to_morphism(cyc)
        res = factor_through_epi(hn.projection, phi @ hn.cycle_inclusion)
        cols.append(Hh.from_morphism(res).coords)
    ev = AbMorphism(hc.group, Hh.group, IntMatrix.from_columns(cols, Hh.group.ngens))
    rep.record(ev.is_iso(), "evaluation H^n(C; A) -> Hom(H_n C, A) is an isomorphism")
    rep.details["H^n"] = str(hc.group)
    rep.details["Hom(H_n, A)"] = str(Hh.group)
    return rep
