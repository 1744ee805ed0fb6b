import random

import pytest
from hypothesis import given, settings, strategies as st

from homcat.chains import ChainComplex, cone_sequence, homology
from homcat.derived import (
    YonedaSpace,
    abelian_uct_check,
    chain_map_naturality,
    check_functor,
    cohomology,
    derived_ladder,
    ext_group,
    free_resolution,
    functor_naturality,
    homological_yoneda,
    identity_functor,
    ladder_check,
    left_derived,
    padded_resolution,
    parse_functor,
    scalar_enrichment_check,
    tensor_functor,
    tor_group,
    yoneda_check,
    yoneda_expand,
)
from homcat.errors import PreconditionError
from homcat.fgab import (
    AbMorphism,
    FgAbGroup,
    IntMatrix,
    direct_sum,
    hom_group,
    iso_witness,
    tensor,
)

import helpers

Z = FgAbGroup.free(1)


def cyc(n):
    return FgAbGroup.cyclic(n)


def two_term(A, B, m, lo=0):
    return ChainComplex(lo, lo + 1, [B, A], [AbMorphism(A, B, IntMatrix([[m]], 1, 1))])


# resolutions and derived functors


def test_free_resolution_examples():
    r = free_resolution(Z, 1)
    assert r.P.obj(0).invariants == (1, ()) and r.P.obj(1).is_trivial()
    r = free_resolution(cyc(6), 1)
    assert r.P.d(1).matrix.tolist() == [[6]]
    X = FgAbGroup.from_invariants(1, (2,))
    r = free_resolution(X, 1)
    assert r.verify().ok
    assert homology(r.P, 0).invariants == X.invariants and homology(r.P, 1).is_trivial()


def test_free_resolution_dependent_relations():
    X = FgAbGroup(1, IntMatrix([[4, 6]], 1, 2))
    r = free_resolution(X, 2)
    assert r.verify().ok and r.P.obj(2).ngens == 1


def test_resolution_length_checked():
    with pytest.raises(PreconditionError):
        free_resolution(Z, 0)


def test_left_derived_examples():
    M = cyc(6)
    T = tensor_functor(M)
    X = FgAbGroup.from_invariants(1, (4,))
    assert left_derived(T, 0, X).invariants == tensor(X, M).invariants
    assert left_derived(T, 1, cyc(4)).invariants == (0, (2,))
    # oracle: kernel of multiplication by 4 on Z/6
    assert sum(1 for x in range(6) if 4 * x % 6 == 0) == 2
    for n in (2, 3):
        assert left_derived(T, n, cyc(4)).is_trivial()


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_resolution_independence(rng):
    X = helpers.random_group(rng)
    T = helpers.random_tensor(rng)
    r = free_resolution(X, 2)
    p = padded_resolution(r)
    assert p.verify().ok
    for n in (0, 1):
        assert iso_witness(left_derived(T, n, X, r), left_derived(T, n, X, p)) is not None


def test_ext_examples():
    assert ext_group(cyc(6), cyc(4), 0).invariants == (0, (2,))
    assert ext_group(cyc(4), cyc(6), 1).invariants == (0, (2,))
    # oracle: cokernel of multiplication by 4 on Z/6
    assert len({4 * x % 6 for x in range(6)}) == 3
    assert ext_group(Z, cyc(5), 1).is_trivial()


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_ext0_is_hom(rng):
    X, A = helpers.random_group(rng), helpers.random_group(rng)
    assert ext_group(X, A, 0).invariants == hom_group(X, A).group.invariants


def test_tor_symmetric_small():
    for a in (2, 4, 6):
        for b in (3, 4, 6):
            assert tor_group(cyc(a), cyc(b), 1).invariants == tor_group(cyc(b), cyc(a), 1).invariants


# functor specs


def test_parse_functor():
    assert parse_functor("id").name == "id"
    assert parse_functor("tensor:4").scalar_k == 4
    for bad in ("tensor:x", "tensor:-1", "hom:3"):
        with pytest.raises(PreconditionError):
            parse_functor(bad)


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_functor_contracts(rng):
    T = helpers.random_tensor(rng)
    maps = [helpers.random_hom(rng, helpers.random_group(rng), helpers.random_group(rng))
            for _ in range(3)]
    seqs = [helpers.random_short_exact(rng) for _ in range(2)]
    assert check_functor(T, maps, seqs).ok


# Yoneda


def test_yoneda_expand_zero_and_generator():
    T = tensor_functor(2)
    X = cyc(4)
    TX = T.obj(X)
    w = yoneda_expand(TX.zero(), T, X)
    assert w.component(cyc(2), AbMorphism(X, cyc(2), IntMatrix([[1]], 1, 1))).is_zero()
    t = TX.gen(0)
    red = AbMorphism(X, cyc(2), IntMatrix([[1]], 1, 1))
    v = yoneda_expand(t, T, X).component(cyc(2), red)
    assert not v.is_zero() and v.group.order() == 2
    assert yoneda_expand(t, T, X).component(X, AbMorphism.identity(X)) == t


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_yoneda_expand_natural(rng):
    X, A, B = (helpers.random_group(rng) for _ in range(3))
    T = helpers.random_tensor(rng)
    TX = T.obj(X)
    t = TX.element([rng.randint(-3, 3) for _ in range(TX.ngens)])
    w = yoneda_expand(t, T, X)
    f, g = helpers.random_hom(rng, X, A), helpers.random_hom(rng, A, B)
    assert w.component(B, g @ f) == T.mor(g)(w.component(A, f))


def test_homological_yoneda_concentrated():
    M = cyc(6)
    T = tensor_functor(4)
    Y = homological_yoneda(ChainComplex.concentrated(M, 0), T, 0)
    assert Y.Hc.invariants == (0, (2,))
    t = Y.group.gen(0)
    w = Y.witness(t)
    assert Y.evaluate_back(w) == t


def test_homological_yoneda_two_classes():
    C = two_term(Z, Z, 2)
    Y = homological_yoneda(C, tensor_functor(4), 0)
    assert Y.Hc.order() == 2
    for h in (Y.Hc.zero(), Y.Hc.gen(0)):
        assert Y.backward(Y.forward(h)) == h
    for w in (Y.group.zero(), Y.group.gen(0)):
        W = Y.witness(w)
        assert Y.forward(Y.backward(W)) == W


def test_noncocycle_rejected():
    # in degree 0 of [Z --2--> Z] the identity of C_0 does not kill 2Z
    Y = homological_yoneda(two_term(Z, Z, 2), tensor_functor(4), 0)
    W = Y.forward(Y.Hc.gen(0))
    phi = AbMorphism(Z, Z, IntMatrix([[1]], 1, 1))
    with pytest.raises(PreconditionError):
        W.component(Z, phi)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_yoneda_property(rng):
    C = helpers.random_complex(rng)
    n = rng.randint(C.lo, C.hi)
    T = helpers.random_tensor(rng)
    assert yoneda_check(C, T, n, rng).ok


def test_scalar_enrichment_examples():
    C = two_term(Z, Z, 2)
    assert scalar_enrichment_check(tensor_functor(1), C, 0, [1, 2]).ok
    Y = YonedaSpace(C, tensor_functor(1), 0)
    assert Y.Hc.is_trivial()
    assert scalar_enrichment_check(tensor_functor(4), C, 0, [3]).ok
    with pytest.raises(PreconditionError):
        scalar_enrichment_check(identity_functor(), C, 0, [2])


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_scalar_enrichment_property(rng):
    C = helpers.random_complex(rng)
    k = rng.randint(1, 12)
    assert scalar_enrichment_check(tensor_functor(k), C, rng.randint(C.lo, C.hi),
                                   [rng.randint(0, k) for _ in range(2)]).ok


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_naturality_in_complex(rng):
    A = helpers.random_complex(rng, 2, 0)
    B = helpers.random_complex(rng, 2, 0)
    g = helpers.random_chain_map(rng, A, B)
    assert chain_map_naturality(g, helpers.random_tensor(rng), rng.randint(0, 1), rng).ok


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_naturality_in_functor(rng):
    C = helpers.random_complex(rng)
    k = rng.randint(1, 6)
    m = k * rng.randint(1, 3)
    # Z/m -> Z/k reduction
    u = AbMorphism(cyc(m), cyc(k), IntMatrix([[1]], 1, 1))
    assert functor_naturality(C, u, rng.randint(C.lo, C.hi)).ok


# ladders


def test_ladder_identity():
    ses = helpers.random_split(random.Random(3))
    assert ladder_check(ses, identity_functor(), list(ses.degrees())).ok


def test_ladder_cone_tensor_four():
    f = helpers.concentrated_map(AbMorphism(Z, Z, IntMatrix([[2]], 1, 1)))
    ses = cone_sequence(f)
    rep = ladder_check(ses, tensor_functor(4), [0, 1])
    assert rep.ok and rep.checks > 0


def test_ladder_unsplit_needs_exact_functor():
    from dataclasses import replace

    ses = helpers.random_split(random.Random(5))
    unsplit = replace(ses, section=None)
    with pytest.raises(PreconditionError):
        ladder_check(unsplit, tensor_functor(2), [0])
    rep = ladder_check(unsplit, identity_functor(), list(ses.degrees()))
    assert rep.ok and rep.notes


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_ladder_property(rng):
    ses = helpers.random_split(rng)
    assert ladder_check(ses, helpers.random_tensor(rng), list(ses.degrees())).ok


def test_derived_ladder_tor():
    i = AbMorphism(Z, Z, IntMatrix([[2]], 1, 1))
    p = AbMorphism(Z, cyc(2), IntMatrix([[1]], 1, 1))
    rep = derived_ladder(i, p, tensor_functor(2), (0, 1))
    assert rep.ok
    assert "L_1(C) ≅ Z/2" in rep.details["sequence"]
    assert tor_group(cyc(2), cyc(2), 1).invariants == (0, (2,))


def test_derived_ladder_split():
    A, Y = cyc(3), cyc(4)
    X, inj, proj = direct_sum([A, Y])
    rep = derived_ladder(inj[0], proj[1], tensor_functor(6), (0, 1))
    assert rep.ok and rep.les.exact


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_derived_ladder_property(rng):
    i, p = helpers.random_short_exact(rng)
    assert derived_ladder(i, p, helpers.random_tensor(rng), (0, 1)).ok


# abelian universal coefficients


def uct_example():
    """``Z --3--> Z`` in degrees 3, 2 spliced with the contractible
    ``Z --1--> Z`` in degrees 1, 0."""
    objs = {n: Z for n in range(4)}
    d = {1: AbMorphism(Z, Z, IntMatrix([[1]], 1, 1)),
         2: AbMorphism.zero(Z, Z),
         3: AbMorphism(Z, Z, IntMatrix([[3]], 1, 1))}
    return ChainComplex(0, 3, objs, d)


def test_abelian_uct_example():
    C = uct_example()
    assert [homology(C, n).invariants for n in range(3)] == [(0, ()), (0, ()), (0, (3,))]
    rep = abelian_uct_check(C, cyc(9), 2)
    assert rep.ok
    assert cohomology(C, cyc(9), 2).invariants == (0, (3,))
    assert hom_group(cyc(3), cyc(9)).group.invariants == (0, (3,))


def test_abelian_uct_precondition():
    with pytest.raises(PreconditionError):
        abelian_uct_check(two_term(Z, Z, 6), cyc(2), 1)


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_abelian_uct_property(rng):
    C, n = helpers.uct_instance(rng)
    assert abelian_uct_check(C, helpers.random_group(rng), n).ok
