"""Exact integer linear algebra and finitely generated abelian groups.

Conventions
-----------
* A group on ``n`` generators is presented by an ``n x k`` integer matrix
  whose *columns* are relations.  Empty matrices (``n x 0`` or ``0 x k``)
  are allowed, so ``Z^n`` is ``FgAbGroup(n)``.
* A morphism ``A -> B`` is a ``B.ngens x A.ngens`` matrix: column ``j`` is
  the image of generator ``j``.
* Elements are stored in a normal form obtained by reducing modulo the
  Hermite basis of the relation lattice (least nonnegative residues at the
  pivot rows), so equality of elements is tuple equality.

All objects are immutable; caches are filled lazily and never change a
result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, PreconditionError


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------


class IntMatrix:
    """Dense immutable matrix of Python integers."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows=None, cols=None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows:
            if data or rows:
                raise ValueError(f"expected {rows} rows, got {len(data)}")
            data = ()
        for r in data:
            if len(r) != cols:
                raise ValueError(f"ragged row: expected {cols} entries, got {len(r)}")
        if rows == 0:
            data = ()
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diag(cls, values, rows=None, cols=None):
        values = list(values)
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls(m, rows, cols)

    @classmethod
    def from_columns(cls, columns, nrows):
        columns = [list(c) for c in columns]
        return cls([[c[i] for c in columns] for i in range(nrows)], nrows, len(columns))

    @classmethod
    def from_triplets(cls, rows, cols, triplets):
        m = [[0] * cols for _ in range(rows)]
        for i, j, v in triplets:
            m[i][j] += v
        return cls(m, rows, cols)

    # -- access -----------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def col(self, j):
        return tuple(r[j] for r in self._data)

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def tolist(self):
        return [list(r) for r in self._data]

    def to_triplets(self):
        """Sparse form: sorted ``(row, col, value)`` with no zeros."""
        return [(i, j, v) for i, r in enumerate(self._data) for j, v in enumerate(r) if v]

    def is_zero(self):
        return all(v == 0 for r in self._data for v in r)

    def select(self, rows=None, cols=None):
        rows = range(self.rows) if rows is None else list(rows)
        cols = range(self.cols) if cols is None else list(cols)
        return IntMatrix([[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    # -- arithmetic -------------------------------------------------------

    @property
    def T(self):
        if not self.rows:
            return IntMatrix([[]] * self.cols, self.cols, 0)
        return IntMatrix([list(c) for c in zip(*self._data)], self.cols, self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            fast = _matmul_numpy(self, other)
            if fast is not None:
                return fast
            ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
            return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in ocols]
                              for r in self._data], self.rows, other.cols)
        v = list(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntMatrix([[-a for a in r] for r in self._data], self.rows, self.cols)

    def __mul__(self, k: int):
        return IntMatrix([[k * a for a in r] for r in self._data], self.rows, self.cols)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.shape == other.shape
                and self._data == other._data)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self._data))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    # -- block constructions ---------------------------------------------

    @staticmethod
    def hstack(*ms):
        rows = ms[0].rows
        if any(m.rows != rows for m in ms):
            raise ValueError("hstack: row count mismatch")
        return IntMatrix([sum((m._data[i] for m in ms), ()) for i in range(rows)],
                         rows, sum(m.cols for m in ms))

    @staticmethod
    def vstack(*ms):
        cols = ms[0].cols
        if any(m.cols != cols for m in ms):
            raise ValueError("vstack: column count mismatch")
        return IntMatrix([r for m in ms for r in m._data], sum(m.rows for m in ms), cols)

    @staticmethod
    def block_diag(*ms):
        rows = sum(m.rows for m in ms)
        cols = sum(m.cols for m in ms)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for m in ms:
            for i, r in enumerate(m._data):
                out[r0 + i][c0:c0 + m.cols] = r
            r0 += m.rows
            c0 += m.cols
        return IntMatrix(out, rows, cols)

    def kron(self, other):
        rows, cols = self.rows * other.rows, self.cols * other.cols
        out = [[0] * cols for _ in range(rows)]
        for i, r in enumerate(self._data):
            for j, a in enumerate(r):
                if not a:
                    continue
                for k, s in enumerate(other._data):
                    row = out[i * other.rows + k]
                    base = j * other.cols
                    for l, b in enumerate(s):
                        row[base + l] = a * b
        return IntMatrix(out, rows, cols)


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    divisors: tuple
    # row operations that turn the identity into U^-1 (transposed) and V^-1
    u_ops: tuple = field(default=(), repr=False, compare=False)
    v_ops: tuple = field(default=(), repr=False, compare=False)
    # set when this is the transpose of a decomposition of A^T
    transpose_of: "SmithDecomposition | None" = field(default=None, repr=False, compare=False)

    @property
    def rank(self):
        return sum(1 for d in self.divisors if d)

    @cached_property
    def U_inv(self) -> IntMatrix:
        if self.transpose_of is not None:
            return self.transpose_of.V_inv.T
        m = self.U.rows
        return IntMatrix(_replay(m, self.u_ops), m, m).T

    @cached_property
    def V_inv(self) -> IntMatrix:
        if self.transpose_of is not None:
            return self.transpose_of.U_inv.T
        n = self.V.rows
        return IntMatrix(_replay(n, self.v_ops), n, n)


def _replay(n, ops):
    M = _eye(n)
    for op in ops:
        if len(op) == 1:
            M = [M[i] for i in op[0]]
            continue
        dst, src, c = op
        if c is None:
            M[dst], M[src] = M[src], M[dst]
        else:
            M[dst] = [x + c * y for x, y in zip(M[dst], M[src])]
    return M


def _nearest_quotient(b, p):
    q, r = divmod(b, p)
    if 2 * abs(r) > abs(p):
        q += 1 if (r > 0) == (p > 0) else -1
    return q


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with both transforms; the inverses are rebuilt
    from an operation log when first asked for.

    Tall matrices are handled through their transpose.  Three stages, all
    deterministic:

    1. row operations bring ``A`` to Hermite form (entries above a pivot
       reduced to ``[0, pivot)``), which bounds ``U`` by the minors of ``A``;
    2. every unit pivot column is then a unit vector, so its row is
       cleared by column operations that touch only that row;
    3. unit pivots are moved to the front and the remaining block goes
       through a Euclid-style diagonalisation (pivot on the smallest entry,
       first in row-major order, nearest quotients).  A pivot that does not
       divide the rest of the block absorbs the offending row and the step
       repeats, enforcing ``d_1 | d_2 | ...``.
    """
    m, n = A.shape
    if m > n:
        # work on the wide side: the kernel then lands in V, built from
        # small Hermite entries, instead of a left-kernel block of U
        D = smith_normal_form(A.T)
        return SmithDecomposition(U=D.V.T, S=D.S.T, V=D.U.T, divisors=D.divisors,
                                  transpose_of=D)
    a = A.tolist()
    U, VT = _eye(m), _eye(n)  # V stored transposed so every update is a row op
    u_ops, v_ops = [], []  # (dst, src, c): row += c * row; c None swaps; (order,) permutes

    def addrow(M, dst, src, c):
        # M_dst += c * M_src
        M[dst] = [x + c * y for x, y in zip(M[dst], M[src])]

    def swap_rows(t, i):
        a[t], a[i] = a[i], a[t]
        U[t], U[i] = U[i], U[t]
        u_ops.append((t, i, None))

    def swap_cols(t, j):
        for row in a:
            row[t], row[j] = row[j], row[t]
        VT[t], VT[j] = VT[j], VT[t]
        v_ops.append((t, j, None))

    def add_rows(dst, src, c, t):
        # columns before t are zero in the source row
        ad, as_ = a[dst], a[src]
        ad[t:] = [x + c * y for x, y in zip(ad[t:], as_[t:])]
        addrow(U, dst, src, c)
        u_ops.append((src, dst, -c))

    def negate_row(t):
        a[t] = [-x for x in a[t]]
        U[t] = [-x for x in U[t]]
        u_ops.append((t, t, -2))

    # 1. Hermite form by row operations
    pivots = []
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            i_min = min((i for i in range(r, m) if a[i][j]),
                        key=lambda i: abs(a[i][j]), default=None)
            if i_min is None:
                break
            if i_min != r and abs(a[i_min][j]) < abs(a[r][j]) or not a[r][j]:
                swap_rows(r, i_min)
            p = a[r][j]
            done = True
            for i in range(r + 1, m):
                b = a[i][j]
                if b:
                    add_rows(i, r, -_nearest_quotient(b, p), j)
                    done = done and not a[i][j]
            if done:
                break
        if not a[r][j]:
            continue
        if a[r][j] < 0:
            negate_row(r)
        p = a[r][j]
        for k in range(r):
            q = a[k][j] // p
            if q:
                add_rows(k, r, -q, j)
        pivots.append((r, j))
        r += 1

    # 2. clear the rows of unit pivots; their columns are unit vectors
    units = [(i, j) for i, j in pivots if a[i][j] == 1]
    unit_cols = {j for _, j in units}
    for i, j in units:
        row = a[i]
        for c in range(n):
            x = row[c]
            if x and c != j and c not in unit_cols:
                row[c] = 0
                addrow(VT, c, j, -x)
                v_ops.append((j, c, x))

    # 3. unit pivots first, then the general loop on the rest
    unit_rows = {i for i, _ in units}
    rows = [i for i, _ in units] + [i for i in range(m) if i not in unit_rows]
    cols = [j for _, j in units] + [j for j in range(n) if j not in unit_cols]
    if rows != list(range(m)):
        a[:] = [a[i] for i in rows]
        U[:] = [U[i] for i in rows]
        u_ops.append((tuple(rows),))
    if cols != list(range(n)):
        a[:] = [[row[j] for j in cols] for row in a]
        VT[:] = [VT[j] for j in cols]
        v_ops.append((tuple(cols),))

    t = len(units)
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            # Euclid on column t: repivot on the smallest entry, nearest quotients
            while True:
                i_min = min((i for i in range(t + 1, m) if a[i][t]),
                            key=lambda i: abs(a[i][t]), default=None)
                if i_min is None:
                    break
                if abs(a[i_min][t]) < abs(a[t][t]):
                    swap_rows(t, i_min)
                p = a[t][t]
                for i in range(t + 1, m):
                    b = a[i][t]
                    if b:
                        add_rows(i, t, -_nearest_quotient(b, p), t)
            # same on row t with column operations
            while True:
                j_min = min((j for j in range(t + 1, n) if a[t][j]),
                            key=lambda j: abs(a[t][j]), default=None)
                if j_min is None:
                    break
                if abs(a[t][j_min]) < abs(a[t][t]):
                    swap_cols(t, j_min)
                p = a[t][t]
                live = [row for row in a[t:] if row[t]]
                for j in range(t + 1, n):
                    b = a[t][j]
                    if b:
                        q = _nearest_quotient(b, p)
                        for row in live:
                            row[j] -= q * row[t]
                        addrow(VT, j, t, -q)
                        v_ops.append((t, j, q))
            if any(a[i][t] for i in range(t + 1, m)):
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, m):
                if any(x % p for x in a[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            add_rows(t, bad, 1, t)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    divisors = tuple(a[i][i] for i in range(min(m, n)))
    return SmithDecomposition(
        U=IntMatrix(U, m, m),
        S=IntMatrix(a, m, n),
        V=IntMatrix(VT, n, n).T,
        divisors=divisors,
        u_ops=tuple(u_ops),
        v_ops=tuple(v_ops),
    )


_SAFE = 1 << 62


def _matmul_numpy(A: IntMatrix, B: IntMatrix):
    """``A @ B`` through numpy: int64 when no partial sum can leave 63
    bits, object arrays of Python integers otherwise."""
    if not (A.rows and A.cols and B.cols):
        return None
    try:
        a = np.array(A._data, dtype=np.int64)
        b = np.array(B._data, dtype=np.int64)
        ma, mb = int(np.abs(a).max()), int(np.abs(b).max())
        if ma * mb * A.cols < _SAFE:
            return IntMatrix((a @ b).tolist(), A.rows, B.cols)
    except OverflowError:
        pass
    a = np.array(A._data, dtype=object)
    b = np.array(B._data, dtype=object)
    return IntMatrix(np.dot(a, b).tolist(), A.rows, B.cols)


def elementary_divisors(A: IntMatrix) -> tuple:
    return smith_normal_form(A).divisors


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int):
    """Reduced column-echelon basis of the lattice spanned by ``vectors``.

    Returns ``(basis, pivots)``: ``basis[k]`` is zero above row ``pivots[k]``
    and positive there; earlier basis vectors are reduced into
    ``[0, pivot)`` at later pivot rows.  The result depends only on the
    lattice.
    """
    pool = [list(v) for v in vectors if any(v)]
    basis = []
    for r in range(dim):
        nz = [v for v in pool if v[r]]
        if not nz:
            continue
        rest = [v for v in pool if not v[r]]
        while len(nz) > 1:
            nz.sort(key=lambda v: abs(v[r]))
            piv = nz[0]
            keep = [piv]
            for v in nz[1:]:
                q = v[r] // piv[r]
                w = [x - q * y for x, y in zip(v, piv)]
                if w[r]:
                    keep.append(w)
                elif any(w):
                    rest.append(w)
            nz = keep
        piv = nz[0]
        if piv[r] < 0:
            piv = [-x for x in piv]
        basis.append((r, piv))
        pool = rest
    for k, (r, b) in enumerate(basis):
        for i in range(k):
            ri, vi = basis[i]
            q = vi[r] // b[r]
            if q:
                basis[i] = (ri, [x - q * y for x, y in zip(vi, b)])
    return [b for _, b in basis], [r for r, _ in basis]


def reduce_mod_hermite(x, basis, pivots):
    x = list(x)
    for b, r in zip(basis, pivots):
        q = x[r] // b[r]
        if q:
            x = [u - q * v for u, v in zip(x, b)]
    return tuple(x)


class IntegerSolver:
    """Solves ``A x = b`` over the integers using a cached Smith form."""

    def __init__(self, A: IntMatrix):
        self.A = A
        self.snf = smith_normal_form(A)

    def solve(self, b):
        """An integer solution of ``A x = b``, or ``None``."""
        snf = self.snf
        c = snf.U @ b
        z = [0] * self.A.cols
        for i, ci in enumerate(c):
            d = snf.divisors[i] if i < len(snf.divisors) else 0
            if d == 0:
                if ci:
                    return None
            else:
                if ci % d:
                    return None
                z[i] = ci // d
        return snf.V @ z

    def kernel_basis(self):
        r = self.snf.rank
        return [self.snf.V.col(j) for j in range(r, self.A.cols)]


def integer_kernel(A: IntMatrix):
    """Basis (list of column vectors) of ``{x : A x = 0}``."""
    return IntegerSolver(A).kernel_basis()


# ---------------------------------------------------------------------------
# groups, elements, morphisms
# ---------------------------------------------------------------------------


def _fmt_invariants(free_rank, torsion):
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " ⊕ ".join(parts) if parts else "0"


class FgAbGroup:
    """Cokernel of an integer relation matrix (columns are relations)."""

    def __init__(self, ngens: int, relations: IntMatrix | None = None):
        if relations is None:
            relations = IntMatrix.zeros(ngens, 0)
        elif not isinstance(relations, IntMatrix):
            relations = IntMatrix(relations, ngens)
        if relations.rows != ngens:
            raise ValueError(f"relation matrix has {relations.rows} rows, expected {ngens}")
        self.ngens = ngens
        self.relations = relations

    @classmethod
    def from_presentation(cls, rel: IntMatrix) -> "FgAbGroup":
        return cls(rel.rows, rel)

    @classmethod
    def from_invariants(cls, free_rank: int = 0, torsion: Sequence[int] = ()):
        torsion = [d for d in torsion if d != 1]
        n = len(torsion) + free_rank
        return cls(n, IntMatrix.diag(torsion, n, len(torsion)))

    @classmethod
    def cyclic(cls, n: int):
        """``Z/n``; ``n == 0`` gives ``Z``."""
        if n == 0:
            return cls(1)
        return cls(1, IntMatrix([[n]]))

    @classmethod
    def free(cls, rank: int):
        return cls(rank)

    @classmethod
    def trivial(cls):
        return cls(0)

    def __eq__(self, other):
        return (isinstance(other, FgAbGroup) and self.ngens == other.ngens
                and self.relations == other.relations)

    def __hash__(self):
        return hash((self.ngens, self.relations))

    def __repr__(self):
        return f"FgAbGroup({self.ngens}, {self.relations.tolist()!r})"

    def __str__(self):
        return _fmt_invariants(*self.invariants)

    # -- canonical data ---------------------------------------------------

    @cached_property
    def smith(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def _dlist(self):
        d = self.smith.divisors
        return tuple(d[i] if i < len(d) else 0 for i in range(self.ngens))

    @cached_property
    def _kept(self):
        return tuple(i for i, d in enumerate(self._dlist) if d != 1)

    @cached_property
    def invariants(self):
        """``(free_rank, torsion)`` with ``torsion`` an ascending divisor chain."""
        torsion = tuple(d for d in self._dlist if d > 1)
        free = sum(1 for d in self._dlist if d == 0)
        return free, torsion

    @property
    def free_rank(self):
        return self.invariants[0]

    @property
    def torsion(self):
        return self.invariants[1]

    @cached_property
    def _hermite(self):
        return hermite_basis(self.relations.columns(), self.ngens)

    def order(self):
        """Number of elements, or ``None`` when infinite."""
        free, torsion = self.invariants
        return None if free else prod(torsion)

    def is_finite(self):
        return self.free_rank == 0

    def is_trivial(self):
        return self.invariants == (0, ())

    def exponent(self):
        free, torsion = self.invariants
        if free:
            return 0
        return torsion[-1] if torsion else 1

    def isomorphic(self, other):
        return self.invariants == other.invariants

    # -- coordinates ------------------------------------------------------

    def normal_form(self, coords) -> tuple:
        basis, pivots = self._hermite
        return reduce_mod_hermite(coords, basis, pivots)

    def to_invariant(self, coords) -> tuple:
        """Coordinates in the canonical cyclic decomposition."""
        y = self.smith.U @ coords
        out = []
        for i in self._kept:
            d = self._dlist[i]
            out.append(y[i] % d if d else y[i])
        return tuple(out)

    def from_invariant(self, y) -> tuple:
        Ui = self.smith.U_inv
        x = [0] * self.ngens
        for k, i in enumerate(self._kept):
            c = y[k]
            if c:
                for r in range(self.ngens):
                    x[r] += c * Ui[r, i]
        return self.normal_form(x)

    def is_zero_coords(self, coords) -> bool:
        return not any(self.to_invariant(coords))

    # -- elements ---------------------------------------------------------

    def element(self, coords) -> "AbElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return AbElement(self, self.normal_form(coords))

    def zero(self):
        return AbElement(self, (0,) * self.ngens)

    def gen(self, i):
        return self.element([int(j == i) for j in range(self.ngens)])

    def gens(self):
        return [self.gen(i) for i in range(self.ngens)]

    def elements(self):
        """All elements, in lexicographic order of canonical coordinates."""
        free, torsion = self.invariants
        if free:
            raise PreconditionError(f"cannot enumerate the infinite group {self}")
        for y in itertools.product(*(range(d) for d in torsion)):
            yield AbElement(self, self.from_invariant(y))


class AbElement:
    __slots__ = ("group", "coords")

    def __init__(self, group: FgAbGroup, coords: tuple):
        self.group = group
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, AbElement):
            if other.group != self.group:
                raise ValueError("elements of different groups")
            return other.coords
        return tuple(other)

    def __add__(self, other):
        o = self._coerce(other)
        return self.group.element([a + b for a, b in zip(self.coords, o)])

    def __sub__(self, other):
        o = self._coerce(other)
        return self.group.element([a - b for a, b in zip(self.coords, o)])

    def __neg__(self):
        return self.group.element([-a for a in self.coords])

    def __rmul__(self, k: int):
        return self.group.element([k * a for a in self.coords])

    def __eq__(self, other):
        return (isinstance(other, AbElement) and self.group == other.group
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return not any(self.coords)

    def invariant_coords(self):
        return self.group.to_invariant(self.coords)

    def order(self):
        free, torsion = self.group.invariants
        y = self.invariant_coords()
        n = 1
        for k, d in enumerate(torsion):
            if y[k]:
                n = n * (d // gcd(d, y[k])) // gcd(n, d // gcd(d, y[k]))
        if any(y[len(torsion):]):
            return 0
        return n

    def __repr__(self):
        return f"AbElement({list(self.coords)} in {self.group})"


class AbMorphism:
    """Group homomorphism given by its matrix on generators."""

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix, check=True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, target.ngens, source.ngens)
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not match "
                             f"{target.ngens} x {source.ngens}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            img = matrix @ source.relations
            for j in range(img.cols):
                if not target.is_zero_coords(img.col(j)):
                    raise ConsistencyError(
                        f"relation {j} of the source is not sent to zero")

    @classmethod
    def identity(cls, A):
        return cls(A, A, IntMatrix.identity(A.ngens), check=False)

    @classmethod
    def zero(cls, A, B):
        return cls(A, B, IntMatrix.zeros(B.ngens, A.ngens), check=False)

    def __repr__(self):
        return f"AbMorphism({self.source} -> {self.target}, {self.matrix.tolist()})"

    def __call__(self, x) -> AbElement:
        coords = x.coords if isinstance(x, AbElement) else tuple(x)
        return self.target.element(self.matrix @ coords)

    def image_of_gen(self, j) -> AbElement:
        return self.target.element(self.matrix.col(j))

    def __matmul__(self, other: "AbMorphism") -> "AbMorphism":
        if other.target != self.source:
            raise ValueError("composition of non-composable morphisms")
        return AbMorphism(other.source, self.target, self.matrix @ other.matrix, check=False)

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms with different source/target")

    def __add__(self, other):
        self._same_ends(other)
        return AbMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        self._same_ends(other)
        return AbMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return AbMorphism(self.source, self.target, -self.matrix, check=False)

    def __rmul__(self, k: int):
        return AbMorphism(self.source, self.target, k * self.matrix, check=False)

    def __eq__(self, other):
        if not isinstance(other, AbMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        diff = self.matrix - other.matrix
        return all(self.target.is_zero_coords(diff.col(j)) for j in range(diff.cols))

    __hash__ = None

    def is_zero(self):
        return all(self.target.is_zero_coords(self.matrix.col(j))
                   for j in range(self.matrix.cols))

    @cached_property
    def _lift_solver(self):
        return IntegerSolver(IntMatrix.hstack(self.matrix, self.target.relations))

    def lift(self, y):
        """Coordinates of some ``x`` with ``f(x) == y``, or ``None``."""
        coords = y.coords if isinstance(y, AbElement) else tuple(y)
        z = self._lift_solver.solve(coords)
        if z is None:
            return None
        return tuple(z[:self.source.ngens])

    def is_mono(self):
        return kernel(self)[0].is_trivial()

    def is_epi(self):
        return all(self.lift(self.target.gen(i)) is not None for i in range(self.target.ngens))

    def is_iso(self):
        return self.is_mono() and self.is_epi()

    def inverse(self) -> "AbMorphism":
        """Two-sided inverse of an isomorphism (verified)."""
        cols = []
        for i in range(self.target.ngens):
            x = self.lift(self.target.gen(i))
            if x is None:
                raise ConsistencyError("morphism is not surjective")
            cols.append(x)
        g = AbMorphism(self.target, self.source,
                       IntMatrix.from_columns(cols, self.source.ngens))
        if not (g @ self == AbMorphism.identity(self.source)):
            raise ConsistencyError("morphism is not injective")
        return g


def compose(*fs: AbMorphism) -> AbMorphism:
    """``compose(f, g, h) == f @ g @ h``."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = f @ out
    return out


# ---------------------------------------------------------------------------
# canonical forms and universal constructions
# ---------------------------------------------------------------------------


def canonical_form(A: FgAbGroup):
    """``(C, to, back)``: ``C`` presented by its invariants, ``to: A -> C``
    and ``back: C -> A`` mutually inverse."""
    C = FgAbGroup.from_invariants(*A.invariants)
    kept = A._kept
    U, Ui = A.smith.U, A.smith.U_inv
    to = AbMorphism(A, C, U.select(rows=kept), check=False)
    back = AbMorphism(C, A, Ui.select(cols=kept), check=False)
    return C, to, back


def kernel(f: AbMorphism):
    """``(K, iota)`` with ``iota: K -> source(f)`` a kernel of ``f``."""
    A, B = f.source, f.target
    N = IntMatrix.hstack(f.matrix, B.relations)
    gens = [v[:A.ngens] for v in integer_kernel(N)]
    basis, _ = hermite_basis(gens, A.ngens)
    G = IntMatrix.from_columns(basis, A.ngens)
    solver = IntegerSolver(G)
    rel_cols = []
    for j in range(A.relations.cols):
        c = solver.solve(A.relations.col(j))
        if c is None:
            raise ConsistencyError("relation lattice not contained in kernel lattice")
        rel_cols.append(c)
    K0 = FgAbGroup(len(basis), IntMatrix.from_columns(rel_cols, len(basis)))
    K, _, back = canonical_form(K0)
    iota = AbMorphism(K, A, G @ back.matrix, check=False)
    return K, iota


def cokernel(f: AbMorphism):
    """``(Q, q)`` with ``q: target(f) -> Q`` a cokernel of ``f``."""
    B = f.target
    Q0 = FgAbGroup(B.ngens, IntMatrix.hstack(B.relations, f.matrix))
    Q, to, _ = canonical_form(Q0)
    q = AbMorphism(B, Q, to.matrix, check=False)
    return Q, q


def factor_through_mono(m: AbMorphism, f: AbMorphism) -> AbMorphism:
    """The unique ``h`` with ``m @ h == f``; ``m`` must be a monomorphism."""
    if m.target != f.target:
        raise ValueError("factor_through_mono: targets differ")
    cols = []
    for j in range(f.source.ngens):
        x = m.lift(f.matrix.col(j))
        if x is None:
            raise ConsistencyError("morphism does not factor through the given mono")
        cols.append(x)
    return AbMorphism(f.source, m.source, IntMatrix.from_columns(cols, m.source.ngens))


def factor_through_epi(e: AbMorphism, f: AbMorphism) -> AbMorphism:
    """The unique ``h`` with ``h @ e == f``; ``f`` must kill ``ker e``."""
    if e.source != f.source:
        raise ValueError("factor_through_epi: sources differ")
    cols = []
    for i in range(e.target.ngens):
        x = e.lift(e.target.gen(i))
        if x is None:
            raise ConsistencyError("factor_through_epi: map is not an epimorphism")
        cols.append(f.matrix @ x)
    try:
        h = AbMorphism(e.target, f.target, IntMatrix.from_columns(cols, f.target.ngens))
    except ConsistencyError:
        raise ConsistencyError("morphism does not vanish on the kernel") from None
    if not (h @ e == f):
        raise ConsistencyError("morphism does not vanish on the kernel")
    return h


def image_factorization(f: AbMorphism):
    """``(I, epi, mono)`` with ``f == mono @ epi``; ``mono`` is the kernel
    of the cokernel projection."""
    _, q = cokernel(f)
    I, mono = kernel(q)
    epi = factor_through_mono(mono, f)
    return I, epi, mono


def subgroup_contained(m1: AbMorphism, m2: AbMorphism) -> bool:
    """Whether the image of ``m1`` lies in the image of ``m2`` (same target)."""
    return all(m2.lift(m1.matrix.col(j)) is not None for j in range(m1.source.ngens))


def same_subgroup(m1: AbMorphism, m2: AbMorphism) -> bool:
    return subgroup_contained(m1, m2) and subgroup_contained(m2, m1)


def direct_sum(groups: Sequence[FgAbGroup]):
    """``(S, injections, projections)`` for the biproduct of ``groups``."""
    groups = list(groups)
    S = FgAbGroup(sum(G.ngens for G in groups),
                  IntMatrix.block_diag(*(G.relations for G in groups))
                  if groups else IntMatrix.zeros(0, 0))
    inj, proj = [], []
    offset = 0
    for G in groups:
        rows = [[int(i == offset + j) for j in range(G.ngens)] for i in range(S.ngens)]
        E = IntMatrix(rows, S.ngens, G.ngens)
        inj.append(AbMorphism(G, S, E, check=False))
        proj.append(AbMorphism(S, G, E.T, check=False))
        offset += G.ngens
    return S, inj, proj


def direct_sum_map(fs: Sequence[AbMorphism]):
    """``f_1 ⊕ ... ⊕ f_k`` between the direct sums of sources and targets."""
    S, _, _ = direct_sum([f.source for f in fs])
    T, _, _ = direct_sum([f.target for f in fs])
    return AbMorphism(S, T, IntMatrix.block_diag(*(f.matrix for f in fs)), check=False)


def pullback(f: AbMorphism, g: AbMorphism):
    """``(P, pf, pg)`` with ``f @ pf == g @ pg`` universal."""
    if f.target != g.target:
        raise ValueError("pullback of maps with different targets")
    S, inj, proj = direct_sum([f.source, g.source])
    diff = AbMorphism(S, f.target, IntMatrix.hstack(f.matrix, -g.matrix), check=False)
    P, iota = kernel(diff)
    return P, proj[0] @ iota, proj[1] @ iota


class HomGroup:
    """``Hom(A, B)`` as a group together with the bijection to morphisms.

    Realised as the kernel of ``B^a -> B^r`` sending a tuple of generator
    images to the values of the ``r`` relations of ``A``.
    """

    def __init__(self, A: FgAbGroup, B: FgAbGroup):
        self.source = A
        self.target = B
        Ba, _, _ = direct_sum([B] * A.ngens)
        Br, _, _ = direct_sum([B] * A.relations.cols)
        rho = AbMorphism(Ba, Br, A.relations.T.kron(IntMatrix.identity(B.ngens)), check=False)
        self.group, self.inclusion = kernel(rho)
        self._ambient = Ba

    def to_morphism(self, h) -> AbMorphism:
        v = self.inclusion(h).coords
        b = self.target.ngens
        cols = [v[i * b:(i + 1) * b] for i in range(self.source.ngens)]
        return AbMorphism(self.source, self.target,
                          IntMatrix.from_columns(cols, b), check=False)

    def from_morphism(self, f: AbMorphism) -> AbElement:
        if f.source != self.source or f.target != self.target:
            raise ValueError("morphism has the wrong source or target")
        v = [x for j in range(f.matrix.cols) for x in f.matrix.col(j)]
        x = self.inclusion.lift(v)
        if x is None:
            raise ConsistencyError("morphism not in Hom group")
        return self.group.element(x)


def hom_group(A: FgAbGroup, B: FgAbGroup) -> HomGroup:
    return HomGroup(A, B)


def hom_map(f: AbMorphism, B: FgAbGroup, H_source: HomGroup | None = None,
            H_target: HomGroup | None = None) -> AbMorphism:
    """Precomposition ``Hom(target f, B) -> Hom(source f, B)``."""
    H_source = H_source or hom_group(f.target, B)
    H_target = H_target or hom_group(f.source, B)
    cols = []
    for g in H_source.group.gens():
        cols.append(H_target.from_morphism(H_source.to_morphism(g) @ f).coords)
    return AbMorphism(H_source.group, H_target.group,
                      IntMatrix.from_columns(cols, H_target.group.ngens))


def tensor(A: FgAbGroup, M: FgAbGroup) -> FgAbGroup:
    """``A ⊗ M`` on generators ``a_i ⊗ m_j`` (index ``i * M.ngens + j``)."""
    rel = IntMatrix.hstack(A.relations.kron(IntMatrix.identity(M.ngens)),
                           IntMatrix.identity(A.ngens).kron(M.relations))
    return FgAbGroup(A.ngens * M.ngens, rel)


def tensor_map(f: AbMorphism, M: FgAbGroup, g: AbMorphism | None = None) -> AbMorphism:
    """``f ⊗ id_M`` (or ``f ⊗ g`` when ``g: M -> M'`` is given)."""
    if g is None:
        return AbMorphism(tensor(f.source, M), tensor(f.target, M),
                          f.matrix.kron(IntMatrix.identity(M.ngens)), check=False)
    return AbMorphism(tensor(f.source, g.source), tensor(f.target, g.target),
                      f.matrix.kron(g.matrix), check=False)


def iso_witness(A: FgAbGroup, B: FgAbGroup):
    """Mutually inverse ``(A -> B, B -> A)`` if the groups are isomorphic."""
    if A.invariants != B.invariants:
        return None
    _, toA, backA = canonical_form(A)
    _, toB, backB = canonical_form(B)
    f = AbMorphism(A, B, backB.matrix @ toA.matrix, check=False)
    g = AbMorphism(B, A, backA.matrix @ toB.matrix, check=False)
    return f, g


def p_primary_parts(A: FgAbGroup):
    """``{p: [p^a1, p^a2, ...]}`` elementary divisors of the torsion part."""
    from sympy import factorint

    out = {}
    for d in A.torsion:
        for p, e in factorint(d).items():
            out.setdefault(p, []).append(p ** e)
    return {p: sorted(v) for p, v in sorted(out.items())}


def admits_surjection(A: FgAbGroup, B: FgAbGroup) -> bool:
    """Whether some epimorphism ``A -> B`` exists (decided on invariants)."""
    fa, fb = A.free_rank, B.free_rank
    if fb > fa:
        return False
    pa, pb = p_primary_parts(A), p_primary_parts(B)
    spare = fa - fb
    for p, qs in pb.items():
        have = pa.get(p, [])
        # B's p-part is a quotient iff, after using free summands, A has at
        # least as many cyclic factors of order >= p^j for every j
        need = sorted(qs, reverse=True)
        have = sorted(have, reverse=True)
        j_have = list(have) + [0] * spare
        for j in range(1, max(need).bit_length() + 1):
            cnt_b = sum(1 for q in need if q >= p ** j)
            cnt_a = sum(1 for q in j_have if q == 0 or q >= p ** j)
            if cnt_b > cnt_a:
                return False
    return True
