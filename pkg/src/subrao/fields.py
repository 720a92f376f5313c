"""Exact scalar arithmetic over F_p, F_p(s) and F_{p^m}.

Three field flavours back all linear algebra in this package:

* ``PrimeField(p)``       -- residues mod an odd prime p,
* ``FunctionField(p)``    -- rational functions in one indeterminate s over F_p,
  kept in canonical form (coprime numerator/denominator, monic denominator),
* ``ExtensionField(p, m)`` -- F_{p^m} modulo a fixed irreducible polynomial,
  used to specialize s at random points for large runs.

Every element is immutable.  Polynomials over F_p are dense little-endian
int64 numpy arrays with no trailing zeros (the zero polynomial has length 0);
the module-level ``p*`` helpers implement their ring arithmetic and are shared
with the fast matrix engines.
"""

from __future__ import annotations

import numpy as np


class DivisionByZero(ZeroDivisionError):
    """Division or inversion of a zero field element."""


class MixedFieldOperands(TypeError):
    """Arithmetic between elements of different fields."""


class PoleAtSpecializationPoint(ArithmeticError):
    """The denominator vanishes at the requested specialization point."""


def is_odd_prime(p):
    if not isinstance(p, (int, np.integer)) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p):
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return int(p)


# ---------------------------------------------------------------------------
# dense polynomials over F_p
# ---------------------------------------------------------------------------

ZERO_POLY = np.zeros(0, dtype=np.int64)


def ptrim(a):
    """Strip trailing zero coefficients (canonical form)."""
    a = np.asarray(a, dtype=np.int64)
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def pnorm(a, p):
    return ptrim(np.asarray(a, dtype=np.int64) % p)


def pdeg(a):
    return len(a) - 1  # -1 for the zero polynomial


def padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] = (out[: len(b)] + b) % p
    return ptrim(out)


def psub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] = a
    out[: len(b)] = (out[: len(b)] - b) % p
    return ptrim(out)


def pmul(a, b, p):
    if len(a) == 0 or len(b) == 0:
        return ZERO_POLY
    if len(a) == 1:
        return a[0] * b % p
    if len(b) == 1:
        return b[0] * a % p
    return np.convolve(a, b) % p


def pscale(a, c, p):
    c = c % p
    if c == 0 or len(a) == 0:
        return ZERO_POLY
    return (a * c) % p


def pdivmod(a, b, p):
    """Quotient and remainder of a by b (b nonzero)."""
    if len(b) == 0:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(b):
        return ZERO_POLY, ptrim(a.copy())
    inv_lc = pow(int(b[-1]), p - 2, p)
    rem = a.copy()
    q = np.zeros(len(a) - len(b) + 1, dtype=np.int64)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] * inv_lc % p
        if c:
            q[k] = c
            rem[k : k + len(b)] = (rem[k : k + len(b)] - c * b) % p
    return ptrim(q), ptrim(rem)


def pexactdiv(a, b, p):
    if len(b) == 1:
        return pscale(a, pow(int(b[0]), p - 2, p), p)
    q, r = pdivmod(a, b, p)
    assert len(r) == 0, "inexact polynomial division"
    return q


def pgcd(a, b, p):
    """Monic gcd."""
    a, b = ptrim(a), ptrim(b)
    while len(b) > 0:
        a, b = b, pdivmod(a, b, p)[1]
    if len(a) == 0:
        return ZERO_POLY
    return pscale(a, pow(int(a[-1]), p - 2, p), p)


def pmonic(a, p):
    if len(a) == 0:
        return ZERO_POLY
    return pscale(a, pow(int(a[-1]), p - 2, p), p)


def peval(a, x, p):
    """Horner evaluation at an integer point mod p."""
    acc = 0
    for c in a[::-1]:
        acc = (acc * x + int(c)) % p
    return acc


def ppowmod(a, e, mod, p):
    """a^e modulo the polynomial mod."""
    result = np.ones(1, dtype=np.int64)
    base = pdivmod(a, mod, p)[1]
    while e > 0:
        if e & 1:
            result = pdivmod(pmul(result, base, p), mod, p)[1]
        base = pdivmod(pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p):
    """Rabin test: x^(p^m) = x mod f and gcd(x^(p^(m/l)) - x, f) = 1."""
    f = ptrim(f)
    m = pdeg(f)
    if m <= 0:
        return False
    if m == 1:
        return True
    x = np.array([0, 1], dtype=np.int64)
    for ell in _prime_factors(m):
        h = psub(ppowmod(x, p ** (m // ell), f, p), x, p)
        if pdeg(pgcd(h, f, p)) != 0:
            return False
    return len(psub(ppowmod(x, p**m, f, p), x, p)) == 0


def irreducible_poly(p, m):
    """First monic irreducible of degree m in lexicographic coefficient order.

    Deterministic, so every run of the artifact agrees on the model of F_{p^m}.
    """
    if m == 1:
        return np.array([0, 1], dtype=np.int64)
    for code in range(p**m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        f = np.array(coeffs + [1], dtype=np.int64)
        if is_irreducible(f, p):
            return f
    raise AssertionError("unreachable: irreducibles of every degree exist")


# ---------------------------------------------------------------------------
# F_p
# ---------------------------------------------------------------------------


class PrimeField:
    """The prime field F_p for an odd prime p."""

    def __init__(self, p):
        self.p = check_odd_prime(p)

    def __call__(self, value):
        if isinstance(value, FpElement):
            if value.field is not self and value.field != self:
                raise MixedFieldOperands("element of a different field")
            return value
        return FpElement(self, int(value) % self.p)

    def zero(self):
        return FpElement(self, 0)

    def one(self):
        return FpElement(self, 1)

    def random(self, rng):
        return FpElement(self, int(rng.integers(self.p)))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class FpElement:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.field != self.field:
                raise MixedFieldOperands("operands from different prime fields")
            return other
        if isinstance(other, (int, np.integer)):
            return FpElement(self.field, int(other) % self.field.p)
        raise MixedFieldOperands(f"cannot mix FpElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        return FpElement(self.field, (self.value + other.value) % self.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FpElement(self.field, (self.value - other.value) % self.field.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return FpElement(self.field, self.value * other.value % self.field.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(self.field, -self.value % self.field.p)

    def inverse(self):
        if self.value == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return FpElement(self.field, pow(self.value, self.field.p - 2, self.field.p))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(self.field, pow(self.value, e, self.field.p))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return (
            isinstance(other, FpElement)
            and other.field == self.field
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __repr__(self):
        return f"{self.value}"


# ---------------------------------------------------------------------------
# F_p(s)
# ---------------------------------------------------------------------------


class FunctionField:
    """The rational function field F_p(s)."""

    def __init__(self, p):
        self.p = check_odd_prime(p)

    def __call__(self, value):
        if isinstance(value, RationalFunction):
            if value.field != self:
                raise MixedFieldOperands("element of a different function field")
            return value
        if isinstance(value, FpElement):
            value = value.value
        if isinstance(value, (int, np.integer)):
            num = pnorm(np.array([int(value)], dtype=np.int64), self.p)
            return RationalFunction(self, num, np.ones(1, dtype=np.int64), reduce=False)
        raise TypeError(f"cannot build a rational function from {value!r}")

    def from_coeffs(self, num, den=(1,)):
        return RationalFunction(
            self, pnorm(np.asarray(num), self.p), pnorm(np.asarray(den), self.p)
        )

    def gen(self):
        """The indeterminate s."""
        return self.from_coeffs([0, 1])

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def random(self, rng, max_degree=3):
        num = rng.integers(self.p, size=int(rng.integers(max_degree + 1)) + 1)
        den = ZERO_POLY
        while len(den) == 0:
            den = ptrim(rng.integers(self.p, size=int(rng.integers(max_degree + 1)) + 1))
        return self.from_coeffs(num, den)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.p == self.p

    def __hash__(self):
        return hash(("FunctionField", self.p))

    def __repr__(self):
        return f"FunctionField({self.p})"


class RationalFunction:
    """A rational function in canonical form: gcd(num, den)=1, den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den, reduce=True):
        if len(den) == 0:
            raise DivisionByZero("zero denominator")
        p = field.p
        if reduce:
            if len(num) == 0:
                den = np.ones(1, dtype=np.int64)
            else:
                g = pgcd(num, den, p)
                if pdeg(g) > 0:
                    num = pexactdiv(num, g, p)
                    den = pexactdiv(den, g, p)
                lc = int(den[-1])
                if lc != 1:
                    inv = pow(lc, p - 2, p)
                    num = pscale(num, inv, p)
                    den = pscale(den, inv, p)
        self.field = field
        self.num = num
        self.den = den

    @property
    def is_polynomial(self):
        return pdeg(self.den) == 0

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise MixedFieldOperands("operands from different function fields")
            return other
        if isinstance(other, (int, np.integer, FpElement)):
            return self.field(other)
        raise MixedFieldOperands(
            f"cannot mix RationalFunction with {type(other).__name__}"
        )

    def __add__(self, other):
        other = self._coerce(other)
        p = self.field.p
        if self.is_polynomial and other.is_polynomial:
            return RationalFunction(
                self.field, padd(self.num, other.num, p), self.den, reduce=False
            )
        num = padd(pmul(self.num, other.den, p), pmul(other.num, self.den, p), p)
        return RationalFunction(self.field, num, pmul(self.den, other.den, p))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(
            self.field, pscale(self.num, -1, self.field.p), self.den, reduce=False
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.field.p
        if self.is_polynomial and other.is_polynomial:
            return RationalFunction(
                self.field, pmul(self.num, other.num, p), self.den, reduce=False
            )
        return RationalFunction(
            self.field,
            pmul(self.num, other.num, p),
            pmul(self.den, other.den, p),
        )

    __rmul__ = __mul__

    def inverse(self):
        if len(self.num) == 0:
            raise DivisionByZero("inverse of 0 in F_p(s)")
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e > 0:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return len(self.num) != 0

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, FpElement)):
            other = self.field(other)
        return (
            isinstance(other, RationalFunction)
            and other.field == self.field
            and np.array_equal(other.num, self.num)
            and np.array_equal(other.den, self.den)
        )

    def __hash__(self):
        return hash((self.field.p, self.num.tobytes(), self.den.tobytes()))

    def __repr__(self):
        def side(a):
            if len(a) == 0:
                return "0"
            terms = []
            for i, c in enumerate(a):
                if c == 0:
                    continue
                if i == 0:
                    terms.append(str(int(c)))
                elif i == 1:
                    terms.append(f"{int(c)}*s" if c != 1 else "s")
                else:
                    terms.append(f"{int(c)}*s^{i}" if c != 1 else f"s^{i}")
            return " + ".join(terms)

        if self.is_polynomial:
            return side(self.num)
        return f"({side(self.num)})/({side(self.den)})"


# ---------------------------------------------------------------------------
# F_{p^m}
# ---------------------------------------------------------------------------


class ExtensionField:
    """F_{p^m} modulo a fixed irreducible polynomial of degree m.

    Elements are coefficient vectors; internally an element is also identified
    with its *code*, the base-p integer sum(c_i p^i).  The field lazily builds
    exp/log tables over a multiplicative generator so that the linear-algebra
    engines can run vectorized on int64 code arrays.
    """

    def __init__(self, p, m, modulus=None):
        self.p = check_odd_prime(p)
        self.m = int(m)
        if self.m < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = irreducible_poly(self.p, self.m)
        else:
            modulus = pnorm(np.asarray(modulus), self.p)
            if pdeg(modulus) != self.m or not is_irreducible(modulus, self.p):
                raise ValueError("modulus must be irreducible of degree m")
            modulus = pmonic(modulus, self.p)
        self.modulus = modulus
        self.order = self.p**self.m
        self._powers = self.p ** np.arange(self.m, dtype=np.int64)
        self._tables = None

    # -- element construction ------------------------------------------------

    def __call__(self, value):
        if isinstance(value, ExtensionFieldElement):
            if value.field != self:
                raise MixedFieldOperands("element of a different extension field")
            return value
        if isinstance(value, FpElement):
            value = value.value
        if isinstance(value, (int, np.integer)):
            return ExtensionFieldElement(
                self, pnorm(np.array([int(value)], dtype=np.int64), self.p)
            )
        coeffs = pnorm(np.asarray(value), self.p)
        if pdeg(coeffs) >= self.m:
            coeffs = pdivmod(coeffs, self.modulus, self.p)[1]
        return ExtensionFieldElement(self, coeffs)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        """The residue class of the variable."""
        return self(np.array([0, 1], dtype=np.int64))

    def random(self, rng):
        return self.from_code(int(rng.integers(self.order)))

    def random_nonzero(self, rng):
        return self.from_code(int(rng.integers(1, self.order)))

    def from_code(self, code):
        coeffs = (code // self._powers) % self.p
        return ExtensionFieldElement(self, ptrim(coeffs))

    def to_code(self, elt):
        c = elt.coeffs
        return int((c * self._powers[: len(c)]).sum())

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.m == self.m
            and np.array_equal(other.modulus, self.modulus)
        )

    def __hash__(self):
        return hash(("ExtensionField", self.p, self.m, self.modulus.tobytes()))

    def __repr__(self):
        return f"ExtensionField({self.p}, {self.m})"

    # -- vectorized code arithmetic -------------------------------------------

    def tables(self):
        """(exp, log, inv, neg) tables over positional codes."""
        if self._tables is None:
            self._tables = self._build_tables()
        return self._tables

    def _find_generator(self):
        factors = _prime_factors(self.order - 1)
        for code in range(2, self.order):
            g = self.from_code(code)
            if all(
                g ** ((self.order - 1) // ell) != self.one() for ell in factors
            ):
                return g
        raise AssertionError("unreachable: F_q^* is cyclic")

    def _build_tables(self):
        q = self.order
        g = self._find_generator()
        exp = np.zeros(q - 1, dtype=np.int64)
        acc = self.one()
        for k in range(q - 1):
            exp[k] = self.to_code(acc)
            acc = acc * g
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        assert log[0] == -1 and (log[1:] >= 0).all()
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        codes = np.arange(q, dtype=np.int64)
        digits = (codes[:, None] // self._powers[None, :]) % self.p
        neg = ((-digits) % self.p) @ self._powers
        return exp, log, inv, neg

    def add_codes(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        da = (a[..., None] // self._powers) % self.p
        db = (b[..., None] // self._powers) % self.p
        return ((da + db) % self.p) @ self._powers

    def neg_codes(self, a):
        _, _, _, neg = self.tables()
        return neg[np.asarray(a, dtype=np.int64)]

    def sub_codes(self, a, b):
        return self.add_codes(a, self.neg_codes(b))

    def mul_codes(self, a, b):
        exp, log, _, _ = self.tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = log[a], log[b]
        zero = (la < 0) | (lb < 0)
        idx = (la + lb) % (self.order - 1)
        out = exp[np.where(zero, 0, idx)]
        return np.where(zero, 0, out)

    def inv_codes(self, a):
        _, _, inv, _ = self.tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of 0 in F_{p^m}")
        return inv[a]

    def eval_poly_codes(self, coeffs, point_code):
        """Evaluate an F_p[s] polynomial (int64 coeff array) at a code point."""
        acc = np.int64(0)
        for c in np.asarray(coeffs, dtype=np.int64)[::-1]:
            acc = self.add_codes(self.mul_codes(acc, point_code), int(c))
        return acc


class ExtensionFieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, ExtensionFieldElement):
            if other.field != self.field:
                raise MixedFieldOperands("operands from different extension fields")
            return other
        if isinstance(other, (int, np.integer, FpElement)):
            return self.field(other)
        raise MixedFieldOperands(
            f"cannot mix ExtensionFieldElement with {type(other).__name__}"
        )

    def __add__(self, other):
        other = self._coerce(other)
        return ExtensionFieldElement(
            self.field, padd(self.coeffs, other.coeffs, self.field.p)
        )

    __radd__ = __add__

    def __neg__(self):
        return ExtensionFieldElement(
            self.field, pscale(self.coeffs, -1, self.field.p)
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.field.p
        prod = pmul(self.coeffs, other.coeffs, p)
        if pdeg(prod) >= self.field.m:
            prod = pdivmod(prod, self.field.modulus, p)[1]
        return ExtensionFieldElement(self.field, prod)

    __rmul__ = __mul__

    def inverse(self):
        if len(self.coeffs) == 0:
            raise DivisionByZero("inverse of 0 in F_{p^m}")
        # extended Euclid against the modulus
        p = self.field.p
        r0, r1 = self.field.modulus, self.coeffs
        t0, t1 = ZERO_POLY, np.ones(1, dtype=np.int64)
        while pdeg(r1) > 0:
            q, r = pdivmod(r0, r1, p)
            r0, r1 = r1, r
            t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
        assert len(r1) == 1
        inv = pscale(t1, pow(int(r1[0]), p - 2, p), p)
        return self.field(inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e > 0:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return len(self.coeffs) != 0

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, FpElement)):
            other = self.field(other)
        return (
            isinstance(other, ExtensionFieldElement)
            and other.field == self.field
            and np.array_equal(other.coeffs, self.coeffs)
        )

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.coeffs.tobytes()))

    def __repr__(self):
        return f"ext{list(int(c) for c in self.coeffs)}"


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------


def specialize(r, point):
    """Evaluate a RationalFunction at a point of F_p or F_{p^m}.

    Evaluation is a ring homomorphism wherever it is defined; a vanishing
    denominator raises PoleAtSpecializationPoint and the caller must resample.
    """
    if not isinstance(r, RationalFunction):
        raise TypeError("specialize expects a RationalFunction")
    field = point.field
    num = _eval_at(r.num, point, field)
    den = _eval_at(r.den, point, field)
    if not den:
        raise PoleAtSpecializationPoint(f"denominator vanishes at {point!r}")
    return num / den


def _eval_at(coeffs, point, field):
    acc = field.zero()
    for c in coeffs[::-1]:
        acc = acc * point + field(int(c))
    return acc


def default_extension_degree(p, max_dim):
    """Least m with p^m >= 2*max_dim + 16 (headroom for generic-rank points)."""
    target = 2 * max_dim + 16
    m = 1
    while p**m < target:
        m += 1
    return m
