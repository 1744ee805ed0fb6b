import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from homcat.fgab import (
    AbMorphism,
    FgAbGroup,
    IntMatrix,
    cokernel,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    hom_group,
    image_factorization,
    iso_witness,
    kernel,
    same_subgroup,
    smith_normal_form,
    tensor,
    tensor_map,
)

import helpers

Z = FgAbGroup.free(1)


def cyc(n):
    return FgAbGroup.cyclic(n)


def mor(A, B, rows):
    return AbMorphism(A, B, IntMatrix(rows, B.ngens, A.ngens))


def det(rows):
    import sympy

    return int(sympy.Matrix(rows).det()) if rows else 1


def check_snf(A: IntMatrix):
    D = smith_normal_form(A)
    assert D.U @ A @ D.V == D.S
    assert abs(det(D.U.tolist())) == 1 and abs(det(D.V.tolist())) == 1
    r = min(A.rows, A.cols)
    diag = [D.S[i, i] for i in range(r)]
    assert all(D.S[i, j] == 0 for i in range(A.rows) for j in range(A.cols) if i != j)
    assert list(D.divisors) == diag
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz) and diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return D


def elements_of(A, bound=12):
    """All elements of a finite group, enumerated by normal form."""
    return {A.element(c) for c in product(*(range(bound) for _ in range(A.ngens)))}


# smith normal form


def test_snf_zero_matrix():
    D = check_snf(IntMatrix([[0]], 1, 1))
    assert D.S.tolist() == [[0]] and list(D.divisors) == [0]


def test_snf_identity():
    D = check_snf(IntMatrix.identity(3))
    assert D.S == IntMatrix.identity(3) and list(D.divisors) == [1, 1, 1]


def test_snf_two_by_two():
    A = IntMatrix([[2, 4], [6, 8]], 2, 2)
    D = check_snf(A)
    assert list(D.divisors) == [2, 4]
    assert abs(det(A.tolist())) == 8 == 2 * 4


def test_snf_empty_shapes():
    for r, c in ((0, 0), (0, 3), (3, 0)):
        D = smith_normal_form(IntMatrix.zeros(r, c))
        assert D.S.shape == (r, c)


def test_snf_large_intermediates():
    # entries beyond 64 bits must stay exact
    big = 2 ** 70 + 1
    A = IntMatrix([[big, 3], [5, big * 7]], 2, 2)
    D = check_snf(A)
    assert D.divisors[0] * D.divisors[1] == abs(det(A.tolist()))


def test_snf_deterministic():
    A = IntMatrix([[3, 6, 9], [2, 4, 1], [7, 0, 5]], 3, 3)
    assert smith_normal_form(A).U == smith_normal_form(A).U


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.randoms(use_true_random=False))
def test_snf_property(rows, cols, rng):
    check_snf(helpers.random_matrix(rng, rows, cols))


# presentations


def test_from_presentation_examples():
    assert FgAbGroup.from_presentation(IntMatrix.zeros(1, 0)).invariants == (1, ())
    assert FgAbGroup.from_presentation(IntMatrix([[4]], 1, 1)).invariants == (0, (4,))
    G = FgAbGroup.from_presentation(IntMatrix([[2, 0], [0, 6]], 2, 2))
    assert G.torsion == (2, 6)
    assert str(G) == "Z/2 ⊕ Z/6"


def test_normal_form_unique():
    G = FgAbGroup.from_presentation(IntMatrix([[2, 0], [0, 6]], 2, 2))
    assert G.element((3, 7)) == G.element((1, 1))
    assert G.element((2, 6)).is_zero()
    assert len(elements_of(G)) == 12


# kernels and cokernels


def test_kernel_examples():
    K, _ = kernel(mor(Z, Z, [[2]]))
    assert K.is_trivial()
    Z4 = cyc(4)
    K, iota = kernel(mor(Z4, Z4, [[2]]))
    assert K.invariants == (0, (2,))
    assert len({x for x in elements_of(Z4) if (2 * x).is_zero()}) == 2
    K, iota = kernel(AbMorphism.zero(cyc(6), Z))
    assert K.invariants == (0, (6,)) and iota.is_iso()


def test_cokernel_examples():
    Q, _ = cokernel(mor(Z, Z, [[2]]))
    assert Q.invariants == (0, (2,))
    Q, _ = cokernel(AbMorphism.identity(cyc(5)))
    assert Q.is_trivial()
    Z2 = FgAbGroup.free(2)
    Q, _ = cokernel(mor(Z2, Z2, [[2, 0], [0, 3]]))
    assert Q.invariants == (0, (6,))


def test_image_examples():
    I, e, m = image_factorization(mor(Z, Z, [[2]]))
    assert I.invariants == (1, ()) and m @ e == mor(Z, Z, [[2]])
    assert m.matrix.tolist() in ([[2]], [[-2]])
    Z6 = cyc(6)
    I, _, _ = image_factorization(mor(Z6, Z6, [[3]]))
    assert I.invariants == (0, (2,))
    assert len({3 * x for x in elements_of(Z6)}) == 2
    I, _, _ = image_factorization(AbMorphism.zero(Z6, Z))
    assert I.is_trivial()


def test_hom_examples():
    B = FgAbGroup.from_invariants(1, (4,))
    assert hom_group(Z, B).group.invariants == B.invariants
    assert hom_group(cyc(6), cyc(4)).group.invariants == (0, (2,))
    # oracle: generator images x in Z/4 with 6x = 0
    assert sum(1 for x in range(4) if (6 * x) % 4 == 0) == 2
    assert hom_group(cyc(2), Z).group.is_trivial()


def test_tensor_examples():
    M = FgAbGroup.from_invariants(1, (3,))
    assert tensor(Z, M).invariants == M.invariants
    assert tensor(cyc(4), cyc(6)).invariants == (0, (2,))
    A = FgAbGroup.from_invariants(1, (2,))
    assert tensor(A, cyc(2)).invariants == (0, (2, 2))


def test_direct_sum_examples():
    S, _, _ = direct_sum([])
    assert S.is_trivial()
    S, inj, proj = direct_sum([cyc(2), cyc(3)])
    assert S.invariants == (0, (6,))
    for i, p in enumerate(proj):
        for j, e in enumerate(inj):
            want = AbMorphism.identity(e.source) if i == j else AbMorphism.zero(e.source, p.target)
            assert p @ e == want
    total = inj[0] @ proj[0] + inj[1] @ proj[1]
    assert total == AbMorphism.identity(S)
    assert direct_sum([Z, Z])[0].invariants == (2, ())


def test_iso_witness_examples():
    S, _, _ = direct_sum([cyc(2), cyc(3)])
    f, g = iso_witness(S, cyc(6))
    assert g @ f == AbMorphism.identity(S) and f @ g == AbMorphism.identity(cyc(6))
    assert iso_witness(cyc(4), direct_sum([cyc(2), cyc(2)])[0]) is None
    f, g = iso_witness(FgAbGroup.trivial(), FgAbGroup.trivial())
    assert f.is_iso()


def test_invalid_morphism_rejected():
    from homcat.errors import ConsistencyError

    with pytest.raises(ConsistencyError):
        mor(cyc(2), Z, [[1]])


# universal properties


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_kernel_universal(rng):
    A, B, T = (helpers.random_group(rng) for _ in range(3))
    f = helpers.random_hom(rng, A, B)
    K, iota = kernel(f)
    assert (f @ iota).is_zero() and iota.is_mono()
    # any g with f g = 0 is a map into the kernel
    g = iota @ helpers.random_hom(rng, T, K)
    h = factor_through_mono(iota, g)
    assert iota @ h == g


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_cokernel_universal(rng):
    A, B, T = (helpers.random_group(rng) for _ in range(3))
    f = helpers.random_hom(rng, A, B)
    Q, q = cokernel(f)
    assert (q @ f).is_zero() and q.is_epi()
    g = helpers.random_hom(rng, Q, T) @ q
    h = factor_through_epi(q, g)
    assert h @ q == g


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_image_is_kernel_of_cokernel(rng):
    A, B = helpers.random_group(rng), helpers.random_group(rng)
    f = helpers.random_hom(rng, A, B)
    I, e, m = image_factorization(f)
    assert m @ e == f and m.is_mono() and e.is_epi()
    _, q = cokernel(f)
    _, k = kernel(q)
    assert same_subgroup(m, k)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_hom_evaluator_additive(rng):
    A, B = helpers.random_group(rng), helpers.random_group(rng)
    H = hom_group(A, B)
    x = H.group.element([rng.randint(-3, 3) for _ in range(H.group.ngens)])
    y = H.group.element([rng.randint(-3, 3) for _ in range(H.group.ngens)])
    assert H.to_morphism(x + y) == H.to_morphism(x) + H.to_morphism(y)
    assert H.from_morphism(H.to_morphism(x)) == x


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_tensor_functorial(rng):
    A, B, C, M = (helpers.random_group(rng) for _ in range(4))
    f, g = helpers.random_hom(rng, A, B), helpers.random_hom(rng, B, C)
    assert tensor_map(AbMorphism.identity(A), M) == AbMorphism.identity(tensor(A, M))
    assert tensor_map(g @ f, M) == tensor_map(g, M) @ tensor_map(f, M)


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_tensor_right_exact(rng):
    i, p = helpers.random_short_exact(rng)
    M = helpers.random_group(rng)
    Ti, Tp = tensor_map(i, M), tensor_map(p, M)
    assert Tp.is_epi()
    _, _, m = image_factorization(Ti)
    _, k = kernel(Tp)
    assert same_subgroup(m, k)


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_isomorphic_iff_invariants(rng):
    A = helpers.random_group(rng)
    C = FgAbGroup.from_invariants(*A.invariants)
    f, g = iso_witness(A, C)
    assert (g @ f) == AbMorphism.identity(A)


def test_random_seeded_smoke():
    rng = random.Random(7)
    for _ in range(20):
        check_snf(helpers.random_matrix(rng, 5, 4))
