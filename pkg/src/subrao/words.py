"""Words in the free group on the commutator letters e_{i,j}.

Gamma is free of rank (p-1)^2 on e_{i,j} = [eps_A^i, eps_B^j] with the
commutator convention [x,y] = x y x^-1 y^-1 (the single choice that makes the
conjugation rewriting rules below hold verbatim; validated in the tests
against an independent syllable encoding of the free product and against
2x2 Moebius matrices).

Words are run-length encoded: a Letter carries (i, j, exponent) and adjacent
letters never share (i, j).  Conjugation by a coset representative
eps_A^a eps_B^b iterates the single-generator rules b times (eps_B) then a
times (eps_A), reducing after every step.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple


class Letter(NamedTuple):
    i: int
    j: int
    exp: int


class Word:
    """A freely reduced word in the e_{i,j} basis of Gamma."""

    __slots__ = ("p", "letters")

    def __init__(self, p, letters=(), reduce=True):
        if reduce:
            letters = _reduce(letters)
        else:
            letters = tuple(Letter(*l) for l in letters)
        for l in letters:
            assert 1 <= l.i <= p - 1 and 1 <= l.j <= p - 1 and l.exp != 0
        self.p = p
        self.letters = letters

    @classmethod
    def identity(cls, p):
        return cls(p, ())

    @classmethod
    def letter(cls, p, i, j, exp=1):
        return cls(p, ((i, j, exp),))

    def __mul__(self, other):
        assert self.p == other.p, "words over different p"
        return Word(self.p, self.letters + other.letters)

    def inverse(self):
        return Word(
            self.p,
            tuple(Letter(l.i, l.j, -l.exp) for l in reversed(self.letters)),
            reduce=False,
        )

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Word.identity(self.p)
        for _ in range(k):
            out = out * self
        return out

    def is_identity(self):
        return not self.letters

    def length(self):
        return sum(abs(l.exp) for l in self.letters)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and other.p == self.p
            and other.letters == self.letters
        )

    def __hash__(self):
        return hash((self.p, self.letters))

    def __repr__(self):
        return format_word(self)

    def abelianized(self):
        """Exponent sums as a dict (i, j) -> integer."""
        out = {}
        for l in self.letters:
            out[(l.i, l.j)] = out.get((l.i, l.j), 0) + l.exp
        return {k: v for k, v in out.items() if v}


def _reduce(letters) -> tuple:
    stack: list[Letter] = []
    for l in letters:
        l = Letter(*l)
        if l.exp == 0:
            continue
        if stack and stack[-1].i == l.i and stack[-1].j == l.j:
            merged = stack[-1].exp + l.exp
            stack.pop()
            if merged:
                stack.append(Letter(l.i, l.j, merged))
        else:
            stack.append(l)
    return tuple(stack)


def format_word(w: Word) -> str:
    """Render as e[i,j]^k tokens joined by '*'; the empty word is '1'."""
    if w.is_identity():
        return "1"
    parts = []
    for l in w.letters:
        tok = f"e[{l.i},{l.j}]"
        if l.exp != 1:
            tok += f"^{l.exp}"
        parts.append(tok)
    return "*".join(parts)


def parse_word(p, text: str) -> Word:
    text = text.strip()
    if text == "1" or not text:
        return Word.identity(p)
    letters = []
    for tok in text.split("*"):
        tok = tok.strip()
        assert tok.startswith("e[") and "]" in tok, f"bad token {tok!r}"
        inside, _, rest = tok[2:].partition("]")
        i, j = (int(x) for x in inside.split(","))
        exp = int(rest[1:]) if rest.startswith("^") else 1
        letters.append((i, j, exp))
    return Word(p, letters)


class CosetRep(NamedTuple):
    """The coset eps_A^a eps_B^b of Gamma in N; (0, 0) is the identity."""

    a: int
    b: int

    def compose(self, other, p):
        return CosetRep((self.a + other.a) % p, (self.b + other.b) % p)


def _conj_eps_a_letter(p, i, j):
    """eps_A e_{i,j} eps_A^-1 = e_{i+1,j} e_{1,j}^-1, with e_{p,j} dropped."""
    if i + 1 <= p - 1:
        return ((i + 1, j, 1), (1, j, -1))
    return ((1, j, -1),)


def _conj_eps_b_letter(p, i, j):
    """eps_B e_{i,j} eps_B^-1 = e_{i,1}^-1 e_{i,j+1}, with e_{i,p} dropped."""
    if j + 1 <= p - 1:
        return ((i, 1, -1), (i, j + 1, 1))
    return ((i, 1, -1),)


def _conj_word(w: Word, letter_rule) -> Word:
    out = []
    for l in w.letters:
        img = letter_rule(w.p, l.i, l.j)
        if l.exp > 0:
            out.extend(img * l.exp)
        else:
            inv = tuple((i, j, -e) for (i, j, e) in reversed(img))
            out.extend(inv * (-l.exp))
    return Word(w.p, out)


def conjugate_word(rep: CosetRep, w: Word) -> Word:
    """rep * w * rep^-1 rewritten in the e-basis.

    Applies the eps_B rule b times, then the eps_A rule a times, reducing
    after every step, so the result is the conjugate by eps_A^a eps_B^b.
    """
    for _ in range(rep.b % w.p):
        w = _conj_word(w, _conj_eps_b_letter)
    for _ in range(rep.a % w.p):
        w = _conj_word(w, _conj_eps_a_letter)
    return w


def conjugate_basis(p, rep: CosetRep, i, j) -> Word:
    """Conjugate of the basis letter e_{i,j} by the coset representative."""
    return conjugate_word(rep, Word.letter(p, i, j))


def evaluate_derivation(values, w: Word, act):
    """d(w) for the derivation with d(e_{i,j}) = values[(i,j)].

    values maps letter indices to coefficient row matrices, act maps a Word to
    its module action matrix.  Uses d(uv) = d(u) act(v) + d(v) and the power
    rule d(f^k) = d(f)(1 + F + ... + F^(k-1)).
    """
    p = w.p
    acc = None
    for l in w.letters:
        single = Word.letter(p, l.i, l.j)
        f_mat = act(single)
        k = abs(l.exp)
        geom = _geometric_sum(f_mat, k)
        d_run = values[(l.i, l.j)] @ geom
        run_word = Word(p, ((l.i, l.j, l.exp),))
        if l.exp < 0:
            d_run = -(d_run @ act(run_word))
        if acc is None:
            acc = d_run
        else:
            acc = acc @ act(run_word) + d_run
    if acc is None:
        zero_row = values[next(iter(values))]
        return zero_row - zero_row
    return acc


def _geometric_sum(mat, k):
    """1 + F + F^2 + ... + F^(k-1)."""
    out = None
    powr = None
    for t in range(k):
        powr = mat.power(0) if t == 0 else powr @ mat
        out = powr if out is None else out + powr
    return out


def fox_coefficients(w: Word, i, j):
    """Formal expansion terms [(sign, suffix)] of d on the target letter.

    For any derivation vanishing on all basis letters except e_{i,j},
    d(w) = sum sign * d(e_{i,j}) act(suffix).
    """
    p = w.p
    terms = []
    for t, l in enumerate(w.letters):
        if (l.i, l.j) != (i, j):
            continue
        rest = Word(p, tuple(w.letters[t + 1 :]), reduce=False)
        if l.exp > 0:
            for nu in range(l.exp):
                prefix = Word(p, ((i, j, nu),)) if nu else Word.identity(p)
                terms.append((1, prefix * rest))
        else:
            for nu in range(1, -l.exp + 1):
                terms.append((-1, Word(p, ((i, j, -nu),)) * rest))
    return terms


# ---------------------------------------------------------------------------
# independent syllable encoding of N = A * B (validation only)
# ---------------------------------------------------------------------------


class FreeProductWord:
    """Reduced alternating word in the free product of two copies of Z/pZ.

    Syllables are ('A', k) or ('B', k) with k nonzero mod p and adjacent
    syllables of different types.  Used as an independent oracle for the
    commutator identities behind conjugate_basis.
    """

    __slots__ = ("p", "syllables")

    def __init__(self, p, syllables=(), reduce=True):
        if reduce:
            syllables = _reduce_syllables(p, syllables)
        self.p = p
        self.syllables = tuple(syllables)

    @classmethod
    def gen_a(cls, p, k=1):
        return cls(p, (("A", k),))

    @classmethod
    def gen_b(cls, p, k=1):
        return cls(p, (("B", k),))

    def __mul__(self, other):
        assert self.p == other.p
        return FreeProductWord(self.p, self.syllables + other.syllables)

    def inverse(self):
        return FreeProductWord(
            self.p, tuple((t, -k) for t, k in reversed(self.syllables))
        )

    def __eq__(self, other):
        return (
            isinstance(other, FreeProductWord)
            and other.p == self.p
            and other.syllables == self.syllables
        )

    def __hash__(self):
        return hash((self.p, self.syllables))

    def __repr__(self):
        if not self.syllables:
            return "1"
        return "*".join(f"{t}^{k}" for t, k in self.syllables)


def _reduce_syllables(p, syllables):
    stack = []
    for t, k in syllables:
        k %= p
        if k == 0:
            continue
        if stack and stack[-1][0] == t:
            merged = (stack[-1][1] + k) % p
            stack.pop()
            if merged:
                stack.append((t, merged))
        else:
            stack.append((t, k))
    return tuple(stack)


def commutator(x, y):
    return x * y * x.inverse() * y.inverse()


def letter_in_free_product(p, i, j) -> FreeProductWord:
    """e_{i,j} = [eps_A^i, eps_B^j] as a syllable word."""
    return commutator(FreeProductWord.gen_a(p, i), FreeProductWord.gen_b(p, j))


def word_in_free_product(w: Word) -> FreeProductWord:
    out = FreeProductWord(w.p)
    for l in w.letters:
        base = letter_in_free_product(w.p, l.i, l.j)
        step = base if l.exp > 0 else base.inverse()
        for _ in range(abs(l.exp)):
            out = out * step
    return out
