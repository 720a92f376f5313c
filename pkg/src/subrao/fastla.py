"""Internal vectorized exact linear algebra.

Three engines, all deterministic (pivot = first nonzero entry scanning rows
top-down, columns left to right):

* ``fp_*``   -- matrices over F_p as int64 ndarrays with entries in [0, p);
  multiplication goes through float64 BLAS, which is exact because every
  accumulated sum stays far below 2^53.
* ``PolyMat`` -- matrices over F_p[s] as (rows, cols, degree) int64 ndarrays,
  with fraction-free (Bareiss, division-deferred) elimination for exact rank
  over F_p(s), plus ``stack_rank`` which eliminates an s-free block at field
  speed before running the fraction-free tail.
* ``gfq_*``  -- matrices over F_{p^m} as int64 code arrays (see
  fields.ExtensionField), eliminated via exp/log table lookups.

Nothing here is public API; linalg and cohomology build on it.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import ZERO_POLY, pdivmod, pexactdiv, pmul, psub, ptrim

# ---------------------------------------------------------------------------
# F_p engine
# ---------------------------------------------------------------------------


def fp_asarray(a, p):
    return np.asarray(a, dtype=np.int64) % p


def fp_matmul(a, b, p):
    """Exact product mod p via float64 BLAS (sums stay below 2^53)."""
    assert a.shape[1] == b.shape[0]
    assert (p - 1) * (p - 1) * max(1, a.shape[1]) < 2**53
    out = a.astype(np.float64) @ b.astype(np.float64)
    return np.rint(out).astype(np.int64) % p


def fp_matpow(a, k, p):
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a % p
    while k > 0:
        if k & 1:
            out = fp_matmul(out, base, p)
        base = fp_matmul(base, base, p)
        k >>= 1
    return out


def fp_rref(a, p):
    """Reduced row echelon form; returns (rref, pivot_columns)."""
    m = a % p
    m = m.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] * pow(int(m[r, c]), p - 2, p) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if len(others):
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def fp_rank(a, p):
    if a.size == 0:
        return 0
    return len(fp_rref(a, p)[1])


def fp_right_kernel(a, p):
    """Columns span {v : a v = 0 mod p}."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    r, pivots = fp_rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        basis[c, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, c]) % p
    return basis


def fp_solve(a, b, p):
    """One solution of a x = b mod p, or None (column convention)."""
    rows, cols = a.shape
    aug = np.concatenate([a % p, (b % p).reshape(rows, 1)], axis=1)
    r, pivots = fp_rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, cols]
    return x


def rational_rank(a):
    """Rank of an integer matrix over Q, via exact Fraction elimination."""
    m = [[Fraction(int(x)) for x in row] for row in np.asarray(a)]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        rank += 1
        r += 1
        if r == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# F_p[s] engine
# ---------------------------------------------------------------------------


class PolyMat:
    """Dense matrix over F_p[s]: int64 array of shape (rows, cols, deg+1)."""

    __slots__ = ("p", "arr")

    def __init__(self, p, arr):
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        self.p = p
        self.arr = arr % p

    @classmethod
    def eye(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols, 1), dtype=np.int64))

    @property
    def shape(self):
        return self.arr.shape[:2]

    @property
    def degree_bound(self):
        return self.arr.shape[2] - 1

    def trimmed(self):
        d = self.arr.shape[2]
        while d > 1 and not self.arr[:, :, d - 1].any():
            d -= 1
        return PolyMat(self.p, self.arr[:, :, :d])

    def is_constant(self):
        return not self.arr[:, :, 1:].any()

    def constant(self):
        """The underlying F_p matrix; caller must know it is s-free."""
        assert self.is_constant(), "matrix has nonconstant entries"
        return self.arr[:, :, 0].copy()

    def entry(self, i, j):
        return ptrim(self.arr[i, j])

    def __add__(self, other):
        a, b = _pad_pair(self.arr, other.arr)
        return PolyMat(self.p, (a + b) % self.p)

    def __sub__(self, other):
        a, b = _pad_pair(self.arr, other.arr)
        return PolyMat(self.p, (a - b) % self.p)

    def __neg__(self):
        return PolyMat(self.p, (-self.arr) % self.p)

    def __matmul__(self, other):
        """Degree-slice product: D_a * D_b BLAS calls, exact mod p."""
        assert self.p == other.p
        a, b = self.trimmed().arr, other.trimmed().arr
        da, db = a.shape[2], b.shape[2]
        out = np.zeros((a.shape[0], b.shape[1], da + db - 1), dtype=np.int64)
        for i in range(da):
            ai = a[:, :, i]
            if not ai.any():
                continue
            for j in range(db):
                bj = b[:, :, j]
                if not bj.any():
                    continue
                out[:, :, i + j] = (out[:, :, i + j] + fp_matmul(ai, bj, self.p)) % self.p
        return PolyMat(self.p, out).trimmed()

    def __eq__(self, other):
        if not isinstance(other, PolyMat):
            return NotImplemented
        a, b = _pad_pair(self.trimmed().arr, other.trimmed().arr)
        return self.p == other.p and np.array_equal(a, b)

    def __hash__(self):
        return None  # unhashable; mutability of arr is internal only

    def vstack(self, other):
        a, b = _pad_pair(self.arr, other.arr)
        return PolyMat(self.p, np.concatenate([a, b], axis=0))

    def hstack(self, other):
        a, b = _pad_pair(self.arr, other.arr)
        return PolyMat(self.p, np.concatenate([a, b], axis=1))

    def submatrix(self, row_idx, col_idx):
        return PolyMat(self.p, self.arr[np.ix_(row_idx, col_idx)])

    def power(self, k):
        n = self.shape[0]
        out = PolyMat.eye(self.p, n)
        base = self
        while k > 0:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def evaluate(self, ext_field, point_code):
        """Horner evaluation of every entry at a code point of F_{p^m}."""
        acc = np.zeros(self.shape, dtype=np.int64)
        for d in range(self.arr.shape[2] - 1, -1, -1):
            acc = ext_field.add_codes(ext_field.mul_codes(acc, point_code), self.arr[:, :, d])
        return acc

    def rank(self):
        """Exact rank over F_p(s), fraction-free."""
        m = self.trimmed()
        if m.is_constant():
            return fp_rank(m.arr[:, :, 0], self.p)
        return _bareiss_rank(_to_rows(m), self.p)

    def rows_as_polys(self):
        return _to_rows(self)


def _pad_pair(a, b):
    d = max(a.shape[2], b.shape[2])
    if a.shape[2] < d:
        a = np.concatenate(
            [a, np.zeros(a.shape[:2] + (d - a.shape[2],), dtype=np.int64)], axis=2
        )
    if b.shape[2] < d:
        b = np.concatenate(
            [b, np.zeros(b.shape[:2] + (d - b.shape[2],), dtype=np.int64)], axis=2
        )
    return a, b


def _to_rows(m):
    arr = m.arr
    return [[ptrim(arr[i, j]) for j in range(arr.shape[1])] for i in range(arr.shape[0])]


def _bareiss_rank(rows, p):
    """Fraction-free elimination; divisions are exact by Sylvester's identity."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    prev = np.ones(1, dtype=np.int64)
    rank = 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if len(rows[i][c]) > 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, nrows):
            ai = rows[i][c]
            if len(ai) == 0:
                for j in range(c + 1, ncols):
                    rows[i][j] = pexactdiv(pmul(pv, rows[i][j], p), prev, p)
            else:
                for j in range(c + 1, ncols):
                    num = psub(pmul(pv, rows[i][j], p), pmul(ai, rows[r][j], p), p)
                    rows[i][j] = pexactdiv(num, prev, p)
            rows[i][c] = ZERO_POLY
        prev = pv
        rank += 1
        r += 1
        if r == nrows:
            break
    return rank


def stack_rank(top_fp, bottom, p):
    """rank over F_p(s) of [top; bottom] with top s-free (int64) rows.

    The s-free block is eliminated at F_p speed; only the few residual rows of
    ``bottom`` see fraction-free polynomial elimination.
    """
    if top_fp is None or top_fp.size == 0:
        return bottom.rank()
    red, pivots = fp_rref(top_fp, p)
    rho = len(pivots)
    if bottom is None or bottom.shape[0] == 0:
        return rho
    b = bottom.trimmed().arr
    if pivots:
        # rref pivot columns are standard basis vectors, so one pass suffices
        coeff = b[:, pivots, :]  # (R2, rho, D)
        b = (b - np.einsum("ikd,kc->icd", coeff, red)) % p
    tail = PolyMat(p, b).trimmed()
    return rho + tail.rank()


# ---------------------------------------------------------------------------
# F_{p^m} engine (code matrices)
# ---------------------------------------------------------------------------


def gfq_matmul(field, a, b):
    """Product of code matrices: digit tensors through BLAS, then reduce."""
    p, m = field.p, field.m
    if m == 1:
        return fp_matmul(a, b, p)
    powers = field._powers
    ad = (a[:, :, None] // powers) % p
    bd = (b[:, :, None] // powers) % p
    t = np.zeros((2 * m - 1, a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            t[i + j] = (t[i + j] + fp_matmul(ad[:, :, i], bd[:, :, j], p)) % p
    red = _reduction_rows(field)
    out_digits = np.tensordot(t, red, axes=([0], [0])) % p  # (R, C, m)
    return out_digits @ powers


def _reduction_rows(field):
    """Row d = coefficients of s^d mod the field modulus, d < 2m-1."""
    p, m = field.p, field.m
    rows = np.zeros((2 * m - 1, m), dtype=np.int64)
    cur = np.ones(1, dtype=np.int64)
    for d in range(2 * m - 1):
        rows[d, : len(cur)] = cur
        shifted = np.concatenate([np.zeros(1, dtype=np.int64), cur])
        cur = pdivmod(shifted, field.modulus, p)[1]
    return rows


def gfq_matpow(field, a, k):
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a
    while k > 0:
        if k & 1:
            out = gfq_matmul(field, out, base)
        base = gfq_matmul(field, base, base)
        k >>= 1
    return out


def gfq_rref(field, a):
    """Reduced row echelon of a code matrix; returns (rref, pivot_columns)."""
    m = a.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = field.inv_codes(m[r, c : c + 1])[0]
        m[r] = field.mul_codes(m[r], inv)
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if len(others):
            prod = field.mul_codes(m[others, c][:, None], m[r][None, :])
            m[others] = field.sub_codes(m[others], prod)
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def gfq_rank(field, a):
    if a.size == 0:
        return 0
    return len(gfq_rref(field, a)[1])


def gfq_right_kernel(field, a):
    rows, cols = a.shape
    r, pivots = gfq_rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        basis[c, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = field.neg_codes(r[i, c : c + 1])[0]
    return basis
