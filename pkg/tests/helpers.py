"""Random generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from homcat.chains import ChainComplex, ChainMap, cone_sequence, split_sequence
from homcat.derived import tensor_functor
from homcat.fgab import AbMorphism, FgAbGroup, IntMatrix, hom_group, kernel

CYCLIC_ORDERS = (0, 0, 1, 2, 3, 4, 6, 8, 9, 12)


def random_matrix(rng: random.Random, rows: int, cols: int, lo=-9, hi=9) -> IntMatrix:
    return IntMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], rows, cols)


def random_group(rng: random.Random, max_summands=3) -> FgAbGroup:
    """Direct sum of up to ``max_summands`` cyclic groups, given by a
    random presentation so that generators are not already canonical."""
    k = rng.randint(0, max_summands)
    orders = [rng.choice(CYCLIC_ORDERS) for _ in range(k)]
    if not orders:
        return FgAbGroup.trivial()
    D = IntMatrix.diag(orders, len(orders), len(orders))
    # change of basis by an elementary unimodular matrix
    U = IntMatrix.identity(len(orders))
    if len(orders) > 1:
        i, j = rng.sample(range(len(orders)), 2)
        rows = U.tolist()
        rows[i][j] = rng.randint(-2, 2)
        U = IntMatrix(rows, len(orders), len(orders))
    return FgAbGroup.from_presentation(U @ D)


def random_hom(rng: random.Random, A: FgAbGroup, B: FgAbGroup, spread=3) -> AbMorphism:
    H = hom_group(A, B)
    x = H.group.element([rng.randint(-spread, spread) for _ in range(H.group.ngens)])
    return H.to_morphism(x)


def random_complex(rng: random.Random, length=None, lo=None) -> ChainComplex:
    """Bounded complex with random objects; each differential is a random
    map into the kernel of the one below, so ``d d = 0`` holds."""
    length = length if length is not None else rng.randint(1, 4)
    lo = lo if lo is not None else rng.randint(-1, 1)
    objs = {lo + i: random_group(rng) for i in range(length)}
    diffs = {}
    for n in range(lo + 1, lo + length):
        if n - 1 in diffs:
            K, iota = kernel(diffs[n - 1])
            diffs[n] = iota @ random_hom(rng, objs[n], K)
        else:
            diffs[n] = random_hom(rng, objs[n], objs[n - 1])
    return ChainComplex(lo, lo + length - 1, objs, diffs)


def random_free_complex(rng: random.Random, length=None, lo=0, max_rank=3, entries=4):
    """Complex of free groups: ``d_{n+1}`` is a random combination of a
    kernel basis of ``d_n``."""
    from homcat.fgab import integer_kernel

    length = length if length is not None else rng.randint(1, 4)
    ranks = [rng.randint(0, max_rank) for _ in range(length)]
    objs = {lo + i: FgAbGroup.free(r) for i, r in enumerate(ranks)}
    diffs = {}
    for i in range(1, length):
        n = lo + i
        src, tgt = ranks[i], ranks[i - 1]
        if n - 1 in diffs:
            ker = integer_kernel(diffs[n - 1].matrix)
            cols = []
            for _ in range(src):
                v = [0] * tgt
                for b in ker:
                    c = rng.randint(-2, 2)
                    v = [x + c * y for x, y in zip(v, b)]
                cols.append(v)
            M = IntMatrix.from_columns(cols, tgt) if src else IntMatrix.zeros(tgt, 0)
        else:
            M = random_matrix(rng, tgt, src, -entries, entries)
        diffs[n] = AbMorphism(objs[n], objs[n - 1], M, check=False)
    return ChainComplex(lo, lo + length - 1, objs, diffs)


def random_chain_map(rng: random.Random, A: ChainComplex, B: ChainComplex, tries=20):
    """A random chain map, built by rejection from random degreewise maps;
    the zero map is the fallback."""
    degs = range(min(A.lo, B.lo), max(A.hi, B.hi) + 1)
    for _ in range(tries):
        comps = {n: random_hom(rng, A.obj(n), B.obj(n)) for n in degs}
        if all(B.d(n) @ comps[n] == comps[n - 1] @ A.d(n) for n in degs if n - 1 in comps):
            return ChainMap(A, B, comps)
    return ChainMap(A, B, {n: AbMorphism.zero(A.obj(n), B.obj(n)) for n in degs})


def concentrated_map(f: AbMorphism, degree=0) -> ChainMap:
    A = ChainComplex.concentrated(f.source, degree)
    B = ChainComplex.concentrated(f.target, degree)
    return ChainMap(A, B, {degree: f})


def random_cone(rng: random.Random):
    """Cone sequence of a random chain map; concentrated maps always
    commute, so half the draws use them."""
    if rng.random() < 0.5:
        A, B = random_group(rng), random_group(rng)
        f = concentrated_map(random_hom(rng, A, B), rng.randint(-1, 1))
    else:
        A = random_complex(rng, rng.randint(1, 3), 0)
        B = random_complex(rng, rng.randint(1, 3), 0)
        f = random_chain_map(rng, A, B)
    return cone_sequence(f)


def random_split(rng: random.Random, twisted=True):
    """``A -> A ⊕_t C -> C`` with a twist ``t = d_A h - h d_C`` when
    ``twisted``, so the middle complex is not the direct sum."""
    lo = rng.randint(-1, 1)
    length = rng.randint(1, 3)
    A = random_complex(rng, length, lo)
    C = random_complex(rng, length, lo)
    twist = {}
    if twisted:
        h = {n: random_hom(rng, C.obj(n), A.obj(n)) for n in C.degrees()}
        for n in range(lo + 1, lo + length):
            twist[n] = A.d(n) @ h[n] - h[n - 1] @ C.d(n)
    return split_sequence(A, C, twist)


def random_short_exact(rng: random.Random):
    """``0 -> A -> X -> Y -> 0`` in fgab from a random subgroup of ``X``."""
    from homcat.fgab import cokernel, image_factorization

    X = random_group(rng)
    B = random_group(rng)
    g = random_hom(rng, B, X)
    A, _, i = image_factorization(g)
    Y, p = cokernel(i)
    return i, p


def random_horseshoe(rng: random.Random):
    from homcat.derived import horseshoe

    i, p = random_short_exact(rng)
    ses, _ = horseshoe(i, p, 2)
    return ses


def random_tensor(rng: random.Random, kmax=12):
    return tensor_functor(rng.randint(1, kmax))


def cyclic_resolution_homology(n: int, degree: int) -> FgAbGroup:
    """``H_degree(Z/n; Z)`` from the periodic resolution
    ``... -> Z[G] --N--> Z[G] --(t-1)--> Z[G] -> Z``.

    Tensoring with ``Z`` over ``Z[G]`` gives ``Z <-0- Z <-n- Z <-0- Z ...``.
    """
    from homcat.chains import homology

    top = degree + 1
    objs = {i: FgAbGroup.free(1) for i in range(top + 1)}
    diffs = {i: AbMorphism(objs[i], objs[i - 1], IntMatrix([[n if i % 2 == 0 else 0]], 1, 1))
             for i in range(1, top + 1)}
    return homology(ChainComplex(0, top, objs, diffs), degree)


def uct_instance(rng):
    """Free complex from 0 whose homology vanishes below a random ``n``:
    contractible pairs below ``n`` and a random free complex from ``n``."""
    n = rng.randint(0, 2)
    Z = FgAbGroup.free(1)
    top = random_free_complex(rng, rng.randint(1, 3), lo=n)
    objs, diffs = {}, {}
    for k in range(n):
        objs[k] = Z
    for k in range(1, n, 2):
        diffs[k] = AbMorphism(Z, Z, IntMatrix([[1]], 1, 1))
    if n % 2 == 1:
        objs[n - 1] = FgAbGroup.trivial()
    for k in top.degrees():
        objs[k] = top.obj(k)
        if k > n:
            diffs[k] = top.d(k)
    for k in range(1, top.hi + 1):
        diffs.setdefault(k, AbMorphism.zero(objs[k], objs[k - 1]))
    return ChainComplex(0, top.hi, objs, diffs), n


def shift_identification(A1, A, n):
    """``H_{n+1}(A[1]) -> H_n(A)`` induced by the identity of ``A_n``."""
    from homcat.chains import _ker_homology
    from homcat.fgab import factor_through_epi, factor_through_mono

    h1, h0 = _ker_homology(A1, n + 1), _ker_homology(A, n)
    fb = factor_through_epi(h1.quotient_map, h0.quotient_map)
    return factor_through_mono(h0.inclusion, fb @ h1.inclusion)
