import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homcat.errors import GroupAxiomError, PreconditionError
from homcat.fgab import direct_sum, iso_witness
from homcat.grp import (
    Extension,
    GroupHom,
    ab_map,
    abelianisation,
    alternating_group,
    center,
    cyclic_group,
    derived_subgroup,
    dihedral_group,
    direct_product,
    double_extension_from_normals,
    double_is_central,
    extension_from_normal,
    extensions_congruent,
    group_from_cayley,
    group_from_permutations,
    higgins_commutator,
    hom_enumerate,
    intersection,
    is_central_extension,
    is_perfect,
    join,
    klein_four,
    named_group,
    normal_closure,
    normal_subgroups,
    quaternion_group,
    quotient_group,
    small_groups,
    split_extension,
    subgroup_generated,
    symmetric_group,
    trivial_subgroup,
    whole,
)

CATALOGUE = small_groups()


def brute_center(G):
    return [z for z in G.elements() if all(G.mul(z, g) == G.mul(g, z) for g in G.elements())]


def brute_commutator_set(G, K, L):
    return {G.commutator(k, l) for k in K.elements for l in L.elements}


# construction


def test_trivial_table():
    assert group_from_cayley([[0]]).order == 1


def test_a5_from_permutations():
    A5 = group_from_permutations(5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])
    assert A5.order == 60


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupAxiomError):
        group_from_cayley(t)


def test_missing_inverse_rejected():
    with pytest.raises(GroupAxiomError):
        group_from_cayley([[0, 1, 2], [1, 2, 2], [2, 2, 2]])


def test_catalogue_orders():
    assert len(CATALOGUE) >= 20
    assert all(G.order <= 24 for G in CATALOGUE.values())
    assert CATALOGUE["S4"].order == 24 and CATALOGUE["SL(2,3)"].order == 24


def test_named_group_lookup():
    assert named_group("A5").order == 60 and named_group("Dic3").order == 12
    assert named_group("PSL(2,5)").order == 60
    with pytest.raises(PreconditionError):
        named_group("nonsense")


# subgroups and commutators


def test_center_q8():
    Q8 = quaternion_group()
    assert center(Q8).order == 2 == len(brute_center(Q8))


def test_subgroup_generated_z6():
    Z6 = cyclic_group(6)
    assert subgroup_generated(Z6, [2]).order == 3


def test_normal_closure_transposition():
    S3 = symmetric_group(3)
    t = next(g for g in S3.elements() if S3.element_order(g) == 2)
    assert normal_closure(S3, [t]).is_whole()


def test_higgins_examples():
    for G in (cyclic_group(4), quaternion_group()):
        assert higgins_commutator(G, whole(G), trivial_subgroup(G)).is_trivial()
    Q8 = quaternion_group()
    D = higgins_commutator(Q8, whole(Q8), whole(Q8))
    assert D.order == 2 and D.elements == center(Q8).elements
    A5 = alternating_group(5)
    assert higgins_commutator(A5, whole(A5), whole(A5)).is_whole()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(CATALOGUE)), st.randoms(use_true_random=False))
def test_higgins_properties(name, rng):
    G = CATALOGUE[name]
    subs = [subgroup_generated(G, rng.sample(range(G.order), rng.randint(0, 2))) for _ in range(3)]
    K, L, L2 = subs
    KL = higgins_commutator(G, K, L)
    assert KL.elements == higgins_commutator(G, L, K).elements
    assert KL <= join(K, L)
    # monotone in the second argument
    assert higgins_commutator(G, K, intersection(L, L2)) <= KL
    assert brute_commutator_set(G, K, L) <= set(KL.elements)


# abelianisation


def test_abelianisation_examples():
    assert str(abelianisation(symmetric_group(3)).group) == "Z/2"
    assert str(abelianisation(cyclic_group(6)).group) == "Z/6"
    assert abelianisation(alternating_group(5)).group.is_trivial()
    assert is_perfect(alternating_group(5))


@pytest.mark.parametrize("name", sorted(CATALOGUE))
def test_abelianisation_unit(name):
    G = CATALOGUE[name]
    ab = abelianisation(G)
    D = derived_subgroup(G)
    assert ab.projection.is_surjective()
    assert ab.projection.kernel().elements == D.elements
    assert ab.group.order() * D.order == G.order
    # the unit is a homomorphism into an abelian group
    for g, h in product(range(0, G.order, 3), range(1, G.order, 4)):
        assert ab.unit(G.mul(g, h)) == ab.unit(g) + ab.unit(h)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(CATALOGUE)), st.sampled_from(sorted(CATALOGUE)),
       st.randoms(use_true_random=False))
def test_abelianisation_functorial(a, b, rng):
    G, H = CATALOGUE[a], CATALOGUE[b]
    homs = hom_enumerate(G, H, limit=50)
    f = homs[rng.randrange(len(homs))]
    abG, abH = abelianisation(G), abelianisation(H)
    fa = ab_map(f, abG, abH)
    for g in G.elements():
        assert fa(abG.unit(g)) == abH.unit(f(g))


@pytest.mark.parametrize("a,b", [("S3", "Z4"), ("Q8", "Z3"), ("D4", "V4"), ("A4", "Z2")])
def test_abelianisation_products(a, b):
    G, H = CATALOGUE[a], CATALOGUE[b]
    P = direct_product(G, H)
    S, _, _ = direct_sum([abelianisation(G).group, abelianisation(H).group])
    assert iso_witness(abelianisation(P).group, S) is not None


# quotients and homomorphisms


def test_quotient_examples():
    S3 = symmetric_group(3)
    Q, p = quotient_group(S3, whole(S3))
    assert Q.order == 1
    Q8 = quaternion_group()
    Q, p = quotient_group(Q8, center(Q8))
    assert Q.order == 4 and Q.exponent() == 2
    Q, p = quotient_group(S3, derived_subgroup(S3))
    assert Q.order == 2


def test_quotient_needs_normal():
    S3 = symmetric_group(3)
    t = next(g for g in S3.elements() if S3.element_order(g) == 2)
    with pytest.raises(PreconditionError):
        quotient_group(S3, subgroup_generated(S3, [t]))


def test_hom_enumerate_examples():
    assert len(hom_enumerate(cyclic_group(2), cyclic_group(3))) == 1
    assert len(hom_enumerate(cyclic_group(2), symmetric_group(3))) == 4
    assert len(hom_enumerate(alternating_group(5), cyclic_group(5))) == 1


def test_hom_enumerate_counts_cyclic():
    for m in range(1, 7):
        for n in range(1, 7):
            assert len(hom_enumerate(cyclic_group(m), cyclic_group(n))) == np.gcd(m, n)


def test_hom_enumerate_constraints():
    S3 = symmetric_group(3)
    t = next(g for g in S3.elements() if S3.element_order(g) == 2)
    homs = hom_enumerate(cyclic_group(2), S3, {1: {t}})
    assert len(homs) == 1 and homs[0](1) == t


def test_group_hom_validated():
    with pytest.raises(Exception):
        GroupHom(cyclic_group(2), cyclic_group(3), [0, 1])


# extensions


def test_extension_order_identity():
    for G in CATALOGUE.values():
        for N in normal_subgroups(G):
            e = extension_from_normal(G, N)
            assert e.A.order * e.X.order == e.E.order


def test_central_examples():
    Q8 = quaternion_group()
    assert is_central_extension(extension_from_normal(Q8, center(Q8)))
    S3 = symmetric_group(3)
    assert not is_central_extension(extension_from_normal(S3, derived_subgroup(S3)))
    assert is_central_extension(split_extension(cyclic_group(3), symmetric_group(3)))


def test_double_central_examples():
    V4 = klein_four()
    G = direct_product(V4, cyclic_group(2))
    N1 = subgroup_generated(G, [1])
    N2 = subgroup_generated(G, [2])
    assert double_is_central(double_extension_from_normals(G, N1, N2))
    Q8 = quaternion_group()
    Z = center(Q8)
    assert double_is_central(double_extension_from_normals(Q8, Z, Z))
    S3 = symmetric_group(3)
    A3 = derived_subgroup(S3)
    assert not double_is_central(double_extension_from_normals(S3, A3, A3))


def test_congruence_examples():
    Z4 = cyclic_group(4)
    V4 = klein_four()
    e = extension_from_normal(Z4, subgroup_generated(Z4, [2]))
    assert extensions_congruent(e, e).verdict == "yes"
    # match the end objects of the Klein four extension to those of e
    f0 = extension_from_normal(V4, subgroup_generated(V4, [1]))
    f = Extension(e.A, f0.E, e.X, GroupHom(e.A, f0.E, f0.iota.map),
                  GroupHom(f0.E, e.X, f0.pi.map))
    assert extensions_congruent(e, f).verdict == "no"


def test_congruence_relabelled():
    S3 = symmetric_group(3)
    e = extension_from_normal(S3, derived_subgroup(S3))
    # conjugate the middle group by a permutation of its element labels
    rng = random.Random(1)
    perm = list(range(1, 6))
    rng.shuffle(perm)
    perm = [0] + perm
    inv = np.argsort(perm)
    t = np.array(S3.table)
    t2 = np.array([[perm[t[inv[a], inv[b]]] for b in range(6)] for a in range(6)])
    E2 = group_from_cayley(t2)
    f = Extension(e.A, E2, e.X, GroupHom(e.A, E2, [perm[x] for x in e.iota.map]),
                  GroupHom(E2, e.X, [e.pi.map[inv[x]] for x in range(6)]))
    assert extensions_congruent(e, f).verdict == "yes"


def test_congruence_ends_must_match():
    e = split_extension(cyclic_group(2), cyclic_group(3))
    f = split_extension(cyclic_group(3), cyclic_group(2))
    with pytest.raises(PreconditionError):
        extensions_congruent(e, f)


def test_dihedral_orders():
    for n in range(3, 8):
        assert dihedral_group(n).order == 2 * n
