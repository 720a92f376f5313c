"""Dense exact linear algebra over any of the package's scalar fields.

Matrices are immutable and generic over PrimeField / FunctionField /
ExtensionField elements.  Vectors are columns here: ``kernel`` is the right
kernel, ``solve`` solves m @ x = b, a Subspace is a list of independent column
vectors and ``quotient_operator`` expects op to map the subspace into itself
under left multiplication.  (The derivation-space pipeline uses row
conventions and transposes when it crosses into this module.)

Rank over F_p(s) is dispatched to the fraction-free (division-deferred)
Bareiss engine after clearing row denominators; everything else uses plain
Gaussian elimination with the deterministic pivot rule "first nonzero entry
scanning rows top-down, columns left to right".
"""

from __future__ import annotations

import numpy as np

from . import fastla
from .fields import FunctionField, pexactdiv, pgcd, pmul

__all__ = [
    "Matrix",
    "Subspace",
    "QuotientSpace",
    "SubspaceNotInvariant",
    "quotient_operator",
]


class SubspaceNotInvariant(ValueError):
    """The operator does not map the subspace into itself."""


class Matrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows):
        rows = tuple(tuple(field(x) for x in row) for row in rows)
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        assert all(len(r) == self.ncols for r in rows)

    @classmethod
    def identity(cls, field, n):
        one, zero = field(1), field(0)
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field, nrows, ncols):
        zero = field(0)
        return cls(field, [[zero] * ncols for _ in range(nrows)])

    @classmethod
    def from_columns(cls, field, columns, ambient):
        zero = field(0)
        if not columns:
            return cls(field, [[zero] * 0 for _ in range(ambient)])
        return cls(field, [[col[i] for col in columns] for i in range(ambient)])

    def column(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, list(zip(*self.rows)) if self.rows else [])

    def __add__(self, other):
        assert self.field == other.field
        return Matrix(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        assert self.field == other.field
        return Matrix(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows])

    def __matmul__(self, other):
        assert self.field == other.field and self.ncols == other.nrows
        bt = list(zip(*other.rows))
        out = []
        for r in self.rows:
            out.append([_dot(self.field, r, c) for c in bt])
        return Matrix(self.field, out)

    def scale(self, c):
        c = self.field(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows])

    def power(self, k):
        assert self.nrows == self.ncols and k >= 0
        out = Matrix.identity(self.field, self.nrows)
        base = self
        while k > 0:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, vec):
        """Matrix times a column vector."""
        vec = [self.field(v) for v in vec]
        assert len(vec) == self.ncols
        return [_dot(self.field, r, vec) for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(repr(x) for x in row) for row in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: {body})"

    # -- elimination ---------------------------------------------------------

    def rank(self):
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if isinstance(self.field, FunctionField):
            return self._function_field_rank()
        return len(_rref(self.field, [list(r) for r in self.rows])[1])

    def _function_field_rank(self):
        """Clear row denominators, then fraction-free elimination."""
        p = self.field.p
        poly_rows = []
        for row in self.rows:
            common = np.ones(1, dtype=np.int64)
            for x in row:
                g = pgcd(common, x.den, p)
                common = pmul(common, pexactdiv(x.den, g, p), p)
            poly_rows.append(
                [pmul(x.num, pexactdiv(common, x.den, p), p) for x in row]
            )
        return fastla._bareiss_rank(poly_rows, p)

    def kernel(self):
        """Right kernel {v : m v = 0} as a Subspace."""
        if self.ncols == 0:
            return Subspace(self.field, 0, [])
        rref, pivots = _rref(self.field, [list(r) for r in self.rows])
        zero, one = self.field(0), self.field(1)
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for c in free:
            v = [zero] * self.ncols
            v[c] = one
            for i, pc in enumerate(pivots):
                v[pc] = -rref[i][c]
            basis.append(v)
        return Subspace(self.field, self.ncols, basis, check=False)

    def image(self):
        """Column space, spanned by the pivot columns (deterministic)."""
        if self.ncols == 0:
            return Subspace(self.field, self.nrows, [])
        _, pivots = _rref(self.field, [list(r) for r in self.rows])
        return Subspace(
            self.field, self.nrows, [self.column(c) for c in pivots], check=False
        )

    def solve(self, b):
        """A solution x of m x = b, or None if b is not in the image."""
        b = [self.field(x) for x in b]
        assert len(b) == self.nrows
        aug = [list(r) + [b[i]] for i, r in enumerate(self.rows)]
        rref, pivots = _rref(self.field, aug)
        if self.ncols in pivots:
            return None
        zero = self.field(0)
        x = [zero] * self.ncols
        for i, c in enumerate(pivots):
            x[c] = rref[i][self.ncols]
        return x


def _dot(field, xs, ys):
    acc = field(0)
    for a, b in zip(xs, ys):
        if a and b:
            acc = acc + a * b
    return acc


def _rref(field, rows):
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[: len(pivots)], pivots


class Subspace:
    """A subspace given by a list of linearly independent column vectors."""

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field, ambient, basis, check=True):
        basis = [tuple(field(x) for x in v) for v in basis]
        assert all(len(v) == ambient for v in basis)
        self.field = field
        self.ambient = ambient
        self.basis = basis
        if check and basis:
            m = Matrix.from_columns(field, basis, ambient)
            assert m.rank() == len(basis), "basis vectors are dependent"

    @property
    def dim(self):
        return len(self.basis)

    def matrix(self):
        return Matrix.from_columns(self.field, self.basis, self.ambient)

    def contains(self, vec):
        if self.dim == 0:
            return not any(self.field(x) for x in vec)
        return self.matrix().solve(vec) is not None


class QuotientSpace:
    """Ambient space modulo a subspace, with a chosen complement.

    The complement is grown greedily from standard basis vectors in index
    order (or any order passed in); the induced operator's isomorphism class
    does not depend on that choice.
    """

    __slots__ = ("field", "subspace", "complement_indices", "_coord_matrix")

    def __init__(self, subspace, order=None):
        field = subspace.field
        n = subspace.ambient
        order = list(order) if order is not None else list(range(n))
        assert sorted(order) == list(range(n))
        cols = [list(v) for v in subspace.basis]
        chosen = []
        work = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        rank = len(cols)
        zero, one = field(0), field(1)
        for idx in order:
            if len(chosen) == n - subspace.dim:
                break
            e = [zero] * n
            e[idx] = one
            trial = [row + [e[i]] for i, row in enumerate(work)]
            if len(_rref(field, [r[:] for r in trial])[1]) > rank:
                work = trial
                rank += 1
                chosen.append(idx)
        assert len(chosen) == n - subspace.dim
        self.field = field
        self.subspace = subspace
        self.complement_indices = chosen
        # columns: subspace basis then complement vectors; full rank n
        full = [list(v) for v in subspace.basis]
        for idx in chosen:
            e = [zero] * n
            e[idx] = one
            full.append(e)
        self._coord_matrix = Matrix.from_columns(field, full, n)

    @property
    def dim(self):
        return self.subspace.ambient - self.subspace.dim

    def project(self, vec):
        """Coordinates of vec + subspace in the complement basis."""
        coords = self._coord_matrix.solve(vec)
        assert coords is not None
        return coords[self.subspace.dim :]

    def operator(self, op):
        """Matrix of the induced map on the complement (column convention)."""
        field = self.field
        n = self.subspace.ambient
        assert op.nrows == n and op.ncols == n
        for v in self.subspace.basis:
            image = op.apply(v)
            if not self.subspace.contains(image):
                raise SubspaceNotInvariant(
                    "operator does not preserve the subspace"
                )
        zero, one = field(0), field(1)
        cols = []
        for idx in self.complement_indices:
            e = [zero] * n
            e[idx] = one
            cols.append(self.project(op.apply(e)))
        return Matrix.from_columns(field, cols, self.dim)


def quotient_operator(op, sub, order=None):
    """Induced operator on ambient/sub; raises SubspaceNotInvariant."""
    return QuotientSpace(sub, order=order).operator(op)
