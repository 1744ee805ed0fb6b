"""Sparse integer matrices: local Smith profiles and small exact elimination.

``local_profile(M, p, a)`` returns, for ``v = 0 .. a-1``, the number of
Smith divisors of ``M`` with ``p``-valuation exactly ``v``; divisors with
valuation ``>= a`` (including zeros) are not distinguished.  Over
``Z/p^a`` every unit entry can serve as a pivot, so the matrix reduces to
``[I 0; 0 pR]`` and the procedure recurses on ``R`` modulo ``p^(a-1)``.

The unit-pivot pass streams column chunks against a fully reduced basis of
the column space mod ``p^a`` (pivot rows carry the identity and only the
remaining rows are stored).  A second pass reduces every column against the
final basis; the residuals are divisible by ``p`` and form ``pR``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import BudgetError


@dataclass
class ColumnBasis:
    """Reduced basis of the column space mod ``q``: vector ``i`` has a 1 in
    row ``pivots[i]``, 0 in the other pivot rows, and ``rest[i]`` on
    ``free_rows``."""

    nrows: int
    q: int
    pivots: np.ndarray
    free_rows: np.ndarray
    rest: np.ndarray  # len(pivots) x len(free_rows)

    def dense(self) -> np.ndarray:
        """Basis vectors as columns of an ``nrows x rank`` array."""
        r = len(self.pivots)
        out = np.zeros((self.nrows, r), dtype=np.int64)
        out[self.pivots, np.arange(r)] = 1
        out[self.free_rows, :] = self.rest.T
        return out


def as_csc(M) -> sp.csc_matrix:
    if sp.issparse(M):
        return M.tocsc()
    return sp.csc_matrix(np.asarray(M, dtype=np.int64))


class _Eliminator:
    def __init__(self, nrows, p, q):
        self.nrows, self.p, self.q = nrows, p, q
        self.piv = []  # pivot rows, in order found
        self.free = np.arange(nrows)  # remaining rows
        self.Et = np.zeros((0, nrows), dtype=np.int64)  # rank x len(free)

    def _split(self, X):
        """``(X on free rows (dense), X on pivot rows (sparse or dense))``."""
        if sp.issparse(X):
            Xr = X.tocsr()
            act = Xr[self.free].toarray()
            pv = Xr[self.piv] if self.piv else None
        else:
            act = X[self.free]
            pv = X[self.piv] if self.piv else None
        return act, pv

    def residual(self, X):
        act, pv = self._split(X)
        if pv is not None and self.Et.shape[0]:
            if sp.issparse(pv):
                prod = np.asarray((pv.T @ self.Et)).T
            else:
                prod = (self.Et.T.astype(np.float64) @ pv.astype(np.float64))
                prod = np.rint(prod).astype(np.int64)
            act = act - prod
        return np.remainder(act, self.q)

    def absorb(self, X):
        """Pass 1 on one chunk; returns the number of new pivots.

        Columns are reduced one at a time against the pivots already found
        in the chunk, which are kept mutually reduced.
        """
        p, q = self.p, self.q
        res = self.residual(X)
        cand = np.nonzero(((res % p) != 0).any(axis=0))[0]
        if cand.size == 0:
            return 0
        # float64 holds the small residues exactly and keeps products in BLAS
        V = np.zeros((cand.size, res.shape[0]), dtype=np.float64)
        resf = res.astype(np.float64)
        newpiv = []
        for j in cand:
            v = resf[:, j]
            t = len(newpiv)
            if t:
                v = np.remainder(v - V[:t].T @ v[newpiv], q)
            units = np.nonzero(np.remainder(v, p))[0]
            if units.size == 0:
                continue
            rho = int(units[0])
            v = np.remainder(v * pow(int(v[rho]), -1, q), q)
            if t:
                V[:t] = np.remainder(V[:t] - np.outer(V[:t, rho], v), q)
            V[t] = v
            newpiv.append(rho)
        V = V[:len(newpiv)].astype(np.int64)
        Vm = V  # t x len(free)
        if self.Et.shape[0]:
            coef = self.Et[:, newpiv].astype(np.float64)
            upd = np.rint(coef @ Vm.astype(np.float64)).astype(np.int64)
            self.Et = np.remainder(self.Et - upd, q)
        self.Et = np.vstack([self.Et, Vm]) if self.Et.shape[0] else Vm
        keep = np.ones(len(self.free), dtype=bool)
        keep[newpiv] = False
        self.piv.extend(int(self.free[i]) for i in newpiv)
        self.free = self.free[keep]
        self.Et = np.ascontiguousarray(self.Et[:, keep])
        return len(newpiv)

    def basis(self):
        return ColumnBasis(self.nrows, self.q, np.array(self.piv, dtype=np.int64),
                           self.free.copy(), self.Et.copy())


def _chunks(M, ncols, start=32, cap=4096):
    """Column chunks with an adaptive width (callers report pivot counts
    through ``send``)."""
    j, c = 0, start
    while j < ncols:
        k = min(ncols, j + c)
        found = yield M[:, j:k]
        j = k
        if found is not None and found > c // 4:
            c = max(16, c // 2)
        else:
            c = min(cap, c * 2)


def _stream(M, fn):
    ncols = M.shape[1]
    gen = _chunks(M, ncols)
    try:
        X = next(gen)
        while True:
            found = fn(X)
            X = gen.send(found)
    except StopIteration:
        pass


def local_profile(M, p: int, a: int, want_basis: bool = False):
    """Counts of Smith divisors by ``p``-valuation ``0 .. a-1``.

    Returns ``counts`` (and the level-0 :class:`ColumnBasis` mod ``p^a``
    when ``want_basis``).
    """
    if a < 1:
        raise ValueError("a must be positive")
    q = p ** a
    if sp.issparse(M):
        M = M.tocsc()
    else:
        M = np.asarray(M, dtype=np.int64)
    nrows, ncols = M.shape
    counts = [0] * a
    if nrows == 0 or ncols == 0:
        return (counts, ColumnBasis(nrows, q, np.zeros(0, np.int64), np.arange(nrows),
                                    np.zeros((0, nrows), np.int64))) if want_basis else counts
    el = _Eliminator(nrows, p, q)
    _stream(M, el.absorb)
    counts[0] = len(el.piv)
    if a > 1 and len(el.free):
        parts = []

        def collect(X):
            res = el.residual(X)
            if np.any(res % p):
                raise AssertionError("residual not divisible by p")
            res = res // p
            nz = np.any(res, axis=0)
            if nz.any():
                parts.append(res[:, nz].astype(np.int32))
            return None

        _stream(M, collect)
        if parts:
            R = np.concatenate(parts, axis=1).astype(np.int64)
            sub = local_profile(R, p, a - 1)
            for v, c in enumerate(sub):
                counts[v + 1] += c
    if want_basis:
        return counts, el.basis()
    return counts


def rank_mod_p(M, p: int) -> int:
    return local_profile(M, p, 1)[0]


# ---------------------------------------------------------------------------
# exact elimination over Z for small matrices
# ---------------------------------------------------------------------------


def integer_divisors(M, max_entry_bits: int = 256, dense_limit: int = 40000):
    """Nonzero Smith divisors of an integer matrix (sorted).

    Unit pivots are eliminated sparsely (Markowitz order on column
    lengths); the remaining block goes to the dense Smith form.  Raises
    :class:`BudgetError` when entries outgrow ``max_entry_bits`` or the
    remaining block exceeds ``dense_limit`` entries.
    """
    from .fgab import IntMatrix, smith_normal_form

    M = as_csc(M)
    M.sum_duplicates()
    cols = {}
    rows = {}
    for j in range(M.shape[1]):
        lo, hi = M.indptr[j], M.indptr[j + 1]
        col = {int(i): int(v) for i, v in zip(M.indices[lo:hi], M.data[lo:hi]) if v}
        if col:
            cols[j] = col
            for i in col:
                rows.setdefault(i, set()).add(j)
    units = 0
    bound = 1 << max_entry_bits
    while True:
        best = None
        for j in sorted(cols, key=lambda c: (len(cols[c]), c)):
            col = cols[j]
            for i in sorted(col, key=lambda r: (len(rows[r]), r)):
                if abs(col[i]) == 1:
                    best = (i, j)
                    break
            if best:
                break
        if best is None:
            break
        i, j = best
        pc = cols.pop(j)
        s = pc[i]
        for r in pc:
            rows[r].discard(j)
        for k in list(rows.get(i, ())):
            ck = cols[k]
            f = ck[i] * s  # s = ±1 so division is exact
            for r, v in pc.items():
                nv = ck.get(r, 0) - f * v
                if nv:
                    if abs(nv) >= bound:
                        raise BudgetError("entry growth exceeds max_entry_bits")
                    if r not in ck:
                        rows.setdefault(r, set()).add(k)
                    ck[r] = nv
                elif r in ck:
                    del ck[r]
                    rows[r].discard(k)
            if not ck:
                del cols[k]
        rows.pop(i, None)
        units += 1
    left_rows = sorted({r for c in cols.values() for r in c})
    left_cols = sorted(cols)
    if len(left_rows) * len(left_cols) > dense_limit:
        raise BudgetError("remaining block too large for dense Smith form")
    divs = [1] * units
    if left_cols:
        ri = {r: k for k, r in enumerate(left_rows)}
        data = [[0] * len(left_cols) for _ in left_rows]
        for c, j in enumerate(left_cols):
            for r, v in cols[j].items():
                data[ri[r]][c] = v
        S = smith_normal_form(IntMatrix(data, len(left_rows), len(left_cols)))
        divs += [d for d in S.divisors if d]
    return sorted(divs)
