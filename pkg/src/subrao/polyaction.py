"""The coefficient module P_{2n-2} and its right Moebius action.

For phi = [[a, b], [c, d]] the action on a polynomial F of degree <= 2n-2 is

    F^phi(T) = (cT+d)^(2n-2) / det(phi)^(n-1) * F((aT+b)/(cT+d)),

realized as the (2n-1) x (2n-1) matrix whose row l is the coefficient vector
of (T^l)^phi, so that act(phi psi) = act(phi) act(psi) and coordinate rows
transform as v -> v @ act(phi).

A PolySpace fixes (p, n), the scalar field and the value of s in eps_B: the
function field generator in exact mode, a point of F_{p^m} in specialization
mode.  The (p-1)^2 matrices of the basis letters e_{i,j} (and their inverses)
are cached eagerly at construction.
"""

from __future__ import annotations

from .linalg import Matrix
from .words import Word


class SingularMoebius(ValueError):
    """ad - bc = 0."""


class MoebiusElement:
    """A projective 2x2 matrix over the scalar field."""

    __slots__ = ("field", "a", "b", "c", "d")

    def __init__(self, field, a, b, c, d):
        a, b, c, d = field(a), field(b), field(c), field(d)
        if not (a * d - b * c):
            raise SingularMoebius("ad - bc = 0")
        self.field = field
        self.a, self.b, self.c, self.d = a, b, c, d

    def det(self):
        return self.a * self.d - self.b * self.c

    def __mul__(self, other):
        assert self.field == other.field
        return MoebiusElement(
            self.field,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return MoebiusElement(self.field, self.d, -self.b, -self.c, self.a)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = MoebiusElement(self.field, 1, 0, 0, 1)
        for _ in range(k):
            out = out * self
        return out

    def matrix(self):
        return Matrix(self.field, [[self.a, self.b], [self.c, self.d]])

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def eps_a(field):
    return MoebiusElement(field, 1, 1, 0, 1)


def eps_b(field, s):
    return MoebiusElement(field, 1, 0, s, 1)


def _poly_mul(field, u, v):
    out = [field(0)] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        if not x:
            continue
        for j, y in enumerate(v):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


class PolySpace:
    """P_{2n-2} with basis 1, T, ..., T^(2n-2) over a fixed scalar field."""

    def __init__(self, p, n, field, s):
        assert n >= 1
        self.p = p
        self.n = n
        self.dim = 2 * n - 1
        self.field = field
        self.s = field(s)
        self.eps_a = eps_a(field)
        self.eps_b = eps_b(field, self.s)
        # powers of the generators and the letter matrices, write-once
        self._a_pow = [self.action_matrix(self.eps_a**k) for k in range(p)]
        self._b_pow = [self.action_matrix(self.eps_b**k) for k in range(p)]
        self._letters = {}
        for i in range(1, p):
            for j in range(1, p):
                m = (
                    self._a_pow[i]
                    @ self._b_pow[j]
                    @ self._a_pow[(p - i) % p]
                    @ self._b_pow[(p - j) % p]
                )
                minv = (
                    self._b_pow[j]
                    @ self._a_pow[i]
                    @ self._b_pow[(p - j) % p]
                    @ self._a_pow[(p - i) % p]
                )
                self._letters[(i, j)] = (m, minv)

    def identity_matrix(self):
        return Matrix.identity(self.field, self.dim)

    def action_matrix(self, phi: MoebiusElement) -> Matrix:
        """Row l is the coefficient vector of (T^l)^phi."""
        field = self.field
        det_twist = phi.det() ** (-(self.n - 1))
        num = [phi.b, phi.a]  # aT + b, ascending
        den = [phi.d, phi.c]  # cT + d
        rows = []
        deg = 2 * self.n - 2
        num_pows = [[field(1)]]
        den_pows = [[field(1)]]
        for _ in range(deg):
            num_pows.append(_poly_mul(field, num_pows[-1], num))
            den_pows.append(_poly_mul(field, den_pows[-1], den))
        for l in range(self.dim):
            coeffs = _poly_mul(field, num_pows[l], den_pows[deg - l])
            row = [det_twist * c for c in coeffs]
            row += [field(0)] * (self.dim - len(row))
            assert len(row) == self.dim, "action left P_{2n-2}"
            rows.append(row)
        return Matrix(field, rows)

    def letter_matrix(self, i, j, exp=1):
        m, minv = self._letters[(i, j)]
        base = m if exp > 0 else minv
        return base.power(abs(exp))

    def word_action(self, w: Word) -> Matrix:
        assert w.p == self.p
        out = self.identity_matrix()
        for l in w.letters:
            out = out @ self.letter_matrix(l.i, l.j, l.exp)
        return out

    def coset_action(self, a, b) -> Matrix:
        """Action matrix of eps_A^a eps_B^b."""
        return self._a_pow[a % self.p] @ self._b_pow[b % self.p]

    def word_moebius(self, w: Word) -> MoebiusElement:
        """The underlying 2x2 matrix of a word (oracle for the rewriting)."""
        ea, eb = self.eps_a, self.eps_b
        out = MoebiusElement(self.field, 1, 0, 0, 1)
        for l in w.letters:
            base = ea**l.i * eb**l.j * ea ** (-l.i) * eb ** (-l.j)
            out = out * base**l.exp
        return out

    def coset_moebius(self, a, b) -> MoebiusElement:
        return self.eps_a**a * self.eps_b**b


def function_field_space(p, n):
    """Exact-mode space over F_p(s) with s the indeterminate."""
    from .fields import FunctionField

    field = FunctionField(p)
    return PolySpace(p, n, field, field.gen())
