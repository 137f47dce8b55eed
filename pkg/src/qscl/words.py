"""Words in a free group on a finite alphabet.

Letters are nonzero integers: generator number ``k`` (1-based position in the
alphabet) is ``k`` and its inverse is ``-k``.  Letters are ordered as
``1 < -1 < 2 < -2 < ...`` (``a < a^-1 < b < b^-1``), which is the order used for
every canonical representative in the package.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class WordSyntaxError(ValueError):
    """Raised for malformed word or chain expressions."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownGeneratorError(WordSyntaxError):
    pass


def letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def word_key(letters: Iterable[int]) -> tuple[tuple[int, int], ...]:
    return tuple(letter_key(x) for x in letters)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word(tuple):
    """A freely reduced word, stored as a tuple of letters.

    >>> Word([1, 2, -2, 1])
    Word('a a')
    >>> Word([1, 2]) * Word([-2, 3])
    Word('a c')
    """

    def __new__(cls, letters: Iterable[int] = ()):
        return super().__new__(cls, free_reduce(letters))

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return Word(tuple(self) + tuple(other))

    def __rmul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return Word(tuple(other) + tuple(self))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(tuple(self) * n)

    # tuple.__add__ would skip reduction
    __add__ = __mul__

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self))

    def __getitem__(self, item):
        result = tuple.__getitem__(self, item)
        if isinstance(item, slice):
            return Word(result)
        return result

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


class CyclicWord(tuple):
    """Cyclically reduced word up to rotation, stored as its least rotation."""

    def __new__(cls, letters: Iterable[int] = ()):
        core, _ = _cyclic_core(free_reduce(letters))
        return super().__new__(cls, least_rotation(core))

    def inverse(self) -> "CyclicWord":
        return CyclicWord(-x for x in reversed(self))

    def word(self) -> Word:
        return Word(self)

    def __repr__(self) -> str:
        return f"CyclicWord({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


def least_rotation(letters: Sequence[int]) -> tuple[int, ...]:
    n = len(letters)
    if n == 0:
        return ()
    letters = tuple(letters)
    best = min(range(n), key=lambda i: word_key(letters[i:] + letters[:i]))
    return letters[best:] + letters[:best]


def _cyclic_core(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1], w[:i]


def cyclic_reduce(w: Sequence[int]) -> tuple[CyclicWord, Word]:
    """Return ``(c, g)`` with ``w = g * c' * g^-1`` where ``c'`` is a rotation
    of ``c``; the conjugator absorbs the rotation.

    >>> cyclic_reduce(Word([2, 1, -2]))
    (CyclicWord('a'), Word('b'))
    """
    w = free_reduce(w)
    core, conj = _cyclic_core(w)
    c = CyclicWord(core)
    if not core:
        return c, Word(conj)
    # core = r c r^-1 reduced-in-the-group where r is a prefix of core
    n = len(core)
    for i in range(n):
        if core[i:] + core[:i] == tuple(c):
            # core = core[:i] * c * core[:i]^-1
            return c, Word(conj + core[:i])
    raise AssertionError("rotation not found")


def inverse(w: Sequence[int]) -> Word:
    return Word(-x for x in reversed(w))


def commutator(x: Sequence[int], y: Sequence[int]) -> Word:
    x, y = Word(x), Word(y)
    return x * y * x.inverse() * y.inverse()


def abelianization(w: Sequence[int], rank: int | None = None) -> tuple[int, ...]:
    if rank is None:
        rank = max((abs(x) for x in w), default=0)
    vec = [0] * rank
    for x in w:
        if abs(x) > rank:
            raise ValueError(f"letter {x} outside rank {rank}")
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def primitive_root(c: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Return ``(u, n)`` with ``c == u * n`` (as tuples) and ``n`` maximal.

    >>> primitive_root((1, 2, 1, 2, 1, 2))
    ((1, 2), 3)
    """
    c = tuple(c)
    n = len(c)
    if n == 0:
        raise ValueError("the empty word has no primitive root")
    for d in range(1, n + 1):
        if n % d == 0 and c[:d] * (n // d) == c:
            return c[:d], n // d
    raise AssertionError


def is_primitive(c: Sequence[int]) -> bool:
    return primitive_root(c)[1] == 1


def verify_commutator_identity(w: Sequence[int], pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> bool:
    product = Word()
    for x, y in pairs:
        product = product * commutator(x, y)
    return product == Word(w)


# -- parsing / printing ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[a-z][0-9]*)|(?P<sym>[()\[\],^*]))")


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.index = {name: i + 1 for i, name in enumerate(names)}
        self.multi = any(len(name) > 1 for name in names)
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise WordSyntaxError(f"unexpected character {text[i]!r}", i)
            kind = m.lastgroup
            value = m.group(kind)
            start = m.start(kind)
            if kind == "name" and not self.multi:
                # single-letter alphabets: "ab" is two generators
                for k, ch in enumerate(value):
                    if ch.isdigit():
                        raise WordSyntaxError(f"unexpected digit {ch!r}", start + k)
                    tokens.append(("name", ch, start + k))
            else:
                tokens.append((kind, value, start))
            i = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, sym: str):
        tok = self.peek()
        if tok is None or tok[1] != sym:
            where = tok[2] if tok else len(self.text)
            raise WordSyntaxError(f"expected {sym!r}", where)
        self.pos += 1

    def word(self) -> Word:
        factors = []
        while True:
            tok = self.peek()
            if tok is None or tok[1] in (")", "]", ","):
                break
            if tok[1] == "*":
                self.pos += 1
                continue
            factors.append(self.factor())
        if not factors:
            tok = self.peek()
            raise WordSyntaxError("empty word", tok[2] if tok else len(self.text))
        out = Word()
        for f in factors:
            out = out * f
        return out

    def factor(self) -> Word:
        tok = self.peek()
        kind, value, where = tok
        self.pos += 1
        if kind == "name":
            if value not in self.index:
                raise UnknownGeneratorError(f"unknown generator {value!r}", where)
            base = Word([self.index[value]])
        elif value == "(":
            base = self.word()
            self.expect(")")
        elif value == "[":
            x = self.word()
            self.expect(",")
            y = self.word()
            self.expect("]")
            base = commutator(x, y)
        else:
            raise WordSyntaxError(f"unexpected {value!r}", where)
        tok = self.peek()
        if tok is not None and tok[1] == "^":
            nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
            if nxt is None or nxt[0] != "num":
                where = nxt[2] if nxt else len(self.text)
                raise WordSyntaxError("expected integer exponent", where)
            self.pos += 2
            base = base ** int(nxt[1])
        return base


def parse_word(text: str, alphabet: Sequence[str] = LETTERS) -> Word:
    """Parse a word expression such as ``"[a,b]^2 a^-1"``.

    ``alphabet`` lists the generator names; a string means one generator per
    character.  Uppercase letters are not inverses.
    """
    parser = _Parser(text, list(alphabet))
    if not parser.tokens:
        return Word()
    w = parser.word()
    tok = parser.peek()
    if tok is not None:
        raise WordSyntaxError(f"unexpected {tok[1]!r}", tok[2])
    return w


def format_word(w: Sequence[int], alphabet: Sequence[str] = LETTERS) -> str:
    """Format a word in the parser's grammar, collapsing runs into powers.

    The empty word formats as the empty string, which parses back to it.
    """
    if not w:
        return ""
    names = list(alphabet)
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[abs(w[i]) - 1]
        power = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if power == 1 else f"{name}^{power}")
        i = j
    return " ".join(parts)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise WordSyntaxError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise WordSyntaxError(f"zero denominator in {text!r}") from None


def format_rational(q) -> str:
    if isinstance(q, float):
        if q == float("inf"):
            return "inf"
        raise TypeError("only exact rationals and inf are formatted")
    return str(Fraction(q))


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
