"""Rational chains on a free group and their images in C_1^H.

A :class:`Chain` is a finite rational combination of group elements.  Its image
in the quotient by ``g^n - n g`` and ``h g h^-1 - g`` is an :class:`HChain`: a
combination of primitive cyclic words, one key per ``{w, w^-1}`` pair (the one
with the smaller least rotation), with the inverse folded in as ``-w``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .words import (
    LETTERS,
    CyclicWord,
    Word,
    WordSyntaxError,
    abelianization,
    cyclic_reduce,
    format_word,
    parse_rational,
    parse_word,
    primitive_root,
    word_key,
)


class NotABoundaryError(ValueError):
    """A chain with nonzero homology class where a boundary is required."""


class Chain:
    """Finite map from reduced words to nonzero rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Sequence[int], object] | Iterable[tuple[object, Sequence[int]]] = ()):
        acc: dict[Word, Fraction] = {}
        items = ((w, q) for w, q in terms.items()) if isinstance(terms, Mapping) else ((w, q) for q, w in terms)
        for w, q in items:
            w = Word(w)
            acc[w] = acc.get(w, Fraction(0)) + Fraction(q)
        self.terms = {w: q for w, q in acc.items() if q}

    def __add__(self, other: "Chain") -> "Chain":
        return Chain([(q, w) for w, q in self.terms.items()] + [(q, w) for w, q in other.terms.items()])

    def __neg__(self) -> "Chain":
        return Chain({w: -q for w, q in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, q) -> "Chain":
        return Chain({w: Fraction(q) * c for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"Chain({format_chain(self.terms)!r})"


def _hkey(c: Sequence[int]) -> tuple[CyclicWord, int]:
    """Canonical primitive key and sign for a nonempty cyclically reduced word."""
    u, _ = primitive_root(CyclicWord(c))
    u = CyclicWord(u)
    ui = u.inverse()
    if word_key(ui) < word_key(u):
        return ui, -1
    return u, 1


class HChain:
    """Normal form of a chain in C_1^H of a free group.

    >>> HChain.parse("(ab)^3 - 3*ab")
    HChain('0')
    >>> HChain.parse("a^-1") == -HChain.parse("a")
    True
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None):
        acc: dict[CyclicWord, Fraction] = {}
        for w, q in (terms or {}).items():
            q = Fraction(q)
            if not q:
                continue
            c, _ = cyclic_reduce(w)
            if not c:
                continue
            _, n = primitive_root(c)
            key, s = _hkey(c)
            acc[key] = acc.get(key, Fraction(0)) + s * n * q
        self.terms: dict[CyclicWord, Fraction] = {
            k: acc[k] for k in sorted(acc, key=word_key) if acc[k]
        }
        self._hash = None

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str] = LETTERS) -> "HChain":
        return normalize(parse_chain(text, alphabet))

    @classmethod
    def from_word(cls, w: Sequence[int], coefficient=1) -> "HChain":
        return cls({Word(w): coefficient})

    def items(self):
        return self.terms.items()

    def __iter__(self) -> Iterator[CyclicWord]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "HChain") -> "HChain":
        acc = dict(self.terms)
        for k, q in other.terms.items():
            acc[k] = acc.get(k, Fraction(0)) + q
        return HChain(acc)

    def __neg__(self) -> "HChain":
        return HChain({k: -q for k, q in self.terms.items()})

    def __sub__(self, other: "HChain") -> "HChain":
        return self + (-other)

    def __mul__(self, q) -> "HChain":
        q = Fraction(q)
        return HChain({k: q * c for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, HChain) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    def to_chain(self) -> Chain:
        return Chain({Word(k): q for k, q in self.terms.items()})

    def support_length(self) -> int:
        return sum(len(k) for k in self.terms)

    def format(self, alphabet: Sequence[str] = LETTERS) -> str:
        return format_chain(self.terms, alphabet)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"HChain({self.format()!r})"


def normalize(c: Chain | HChain | Mapping[Sequence[int], object]) -> HChain:
    if isinstance(c, HChain):
        return HChain(c.terms)
    if isinstance(c, Chain):
        return HChain(c.terms)
    return HChain(c)


def homology_class(h: HChain | Chain, rank: int | None = None) -> tuple[Fraction, ...]:
    terms = h.terms
    if rank is None:
        rank = max((abs(x) for w in terms for x in w), default=0)
    vec = [Fraction(0)] * rank
    for w, q in terms.items():
        for i, e in enumerate(abelianization(w, rank)):
            vec[i] += q * e
    return tuple(vec)


def is_boundary(h: HChain | Chain) -> bool:
    return not any(homology_class(h))


# -- text form -----------------------------------------------------------------


def format_chain(terms: Mapping[Sequence[int], Fraction], alphabet: Sequence[str] = LETTERS) -> str:
    if not terms:
        return "0"
    out = []
    for w, q in terms.items():
        sign = "-" if q < 0 else "+"
        mag = abs(q)
        body = format_word(w, alphabet)
        if " " in body:
            body = f"({body})"
        text = body if mag == 1 else f"{mag}*{body}"
        out.append((sign, text))
    first_sign, first = out[0]
    parts = [("-" if first_sign == "-" else "") + first]
    parts += [f" {s} {t}" for s, t in out[1:]]
    return "".join(parts)


_COEFF = re.compile(r"\s*(\d+(?:/\d+)?)\s*\*")


def split_terms(text: str) -> list[tuple[int, Fraction, str, int]]:
    """Split a chain expression into ``(sign, coefficient, body, offset)``.

    Splits at ``+``/``-`` outside brackets; a ``-`` right after ``^`` belongs
    to an exponent.
    """
    pieces: list[tuple[int, int, int]] = []
    depth = 0
    sign, start = 1, 0
    last = ""
    i = 0
    stripped_start = True
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise WordSyntaxError("unbalanced bracket", i)
        elif ch in "+-" and depth == 0 and last != "^":
            if stripped_start:
                if ch == "-":
                    sign = -sign
                start = i + 1
                i += 1
                continue
            pieces.append((sign, start, i))
            sign = -1 if ch == "-" else 1
            start = i + 1
            stripped_start = True
            last = ch
            i += 1
            continue
        if not ch.isspace():
            last = ch
            stripped_start = False
        i += 1
    if depth != 0:
        raise WordSyntaxError("unbalanced bracket", len(text))
    if stripped_start:
        raise WordSyntaxError("empty term", len(text))
    pieces.append((sign, start, len(text)))
    out = []
    for sign, a, b in pieces:
        body = text[a:b]
        coeff = Fraction(1)
        m = _COEFF.match(body)
        if m:
            coeff = parse_rational(m.group(1))
            a += m.end()
            body = text[a:b]
        if not body.strip():
            raise WordSyntaxError("term without a word", a)
        out.append((sign, coeff, body, a))
    return out


def parse_chain(text: str, alphabet: Sequence[str] = LETTERS) -> Chain:
    """Parse ``"[a,b] - 1/2*(ab)^2 + a"``; ``"0"`` is the zero chain."""
    if text.strip() == "0":
        return Chain()
    terms = []
    for sign, coeff, body, offset in split_terms(text):
        try:
            w = parse_word(body, alphabet)
        except WordSyntaxError as exc:
            pos = None if exc.position is None else exc.position + offset
            raise type(exc)(str(exc).split(" (at position")[0], pos) from None
        terms.append((sign * coeff, w))
    return Chain(terms)
