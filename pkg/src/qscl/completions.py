"""Rational extensions of free groups, their towers, and the computable
fragment of the A-completion: chains of rational powers of base elements.

Every scl computed here is reduced to a free-group chain and handed to
:func:`qscl.scl_free.scl`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chains import HChain, normalize, split_terms
from .scl_free import scl
from .words import (
    LETTERS,
    CyclicWord,
    Word,
    WordSyntaxError,
    cyclic_reduce,
    format_rational,
    format_word,
    is_primitive,
    parse_rational,
    parse_word,
    primitive_root,
    word_key,
)


class InadmissibleExponentError(ValueError):
    pass


class NotInFragmentError(ValueError):
    pass


# -- subgroups of Q -------------------------------------------------------------


def _prime_factors(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class RationalSubgroup:
    """Either all of Q (``scale is None``) or ``scale * Z[1/m]``.

    >>> RationalSubgroup.parse("Z[1/3]").contains(Fraction(1, 9))
    True
    >>> Fraction(1, 2) in RationalSubgroup.parse("Z[1/3]")
    False
    """

    scale: Fraction | None = None
    m: int = 1

    def __post_init__(self):
        if self.scale is not None:
            object.__setattr__(self, "scale", Fraction(self.scale))
            if self.scale <= 0:
                raise ValueError("the scale of a subgroup of Q must be positive")
            if self.m < 1:
                raise ValueError("Z[1/m] needs m >= 1")

    @classmethod
    def rationals(cls) -> "RationalSubgroup":
        return cls(None)

    @classmethod
    def integers(cls) -> "RationalSubgroup":
        return cls(Fraction(1), 1)

    @property
    def is_full(self) -> bool:
        return self.scale is None

    def contains(self, x) -> bool:
        x = Fraction(x)
        if self.scale is None:
            return True
        d = (x / self.scale).denominator
        return d == 1 or _prime_factors(d) <= _prime_factors(self.m)

    __contains__ = contains

    def with_integers(self) -> "RationalSubgroup":
        """The subgroup generated by this one and 1."""
        if self.scale is None:
            return self
        return RationalSubgroup(Fraction(1, self.scale.denominator), self.m)

    _SYNTAX = re.compile(r"^(?:\((?P<q>[0-9]+(?:/[0-9]+)?)\))?Z(?:\[1/(?P<m>[0-9]+)\])?$")

    @classmethod
    def parse(cls, text: str) -> "RationalSubgroup":
        """Accepts ``Q``, ``Z``, ``Z[1/m]``, ``(p/q)Z`` and ``(p/q)Z[1/m]``."""
        t = text.replace(" ", "")
        if t in ("Q", "ℚ"):
            return cls.rationals()
        mt = cls._SYNTAX.match(t.replace("ℤ", "Z"))
        if not mt:
            raise WordSyntaxError(f"malformed ring {text!r}")
        q = parse_rational(mt.group("q")) if mt.group("q") else Fraction(1)
        m = int(mt.group("m")) if mt.group("m") else 1
        if q <= 0 or m < 1:
            raise WordSyntaxError(f"malformed ring {text!r}")
        return cls(q, m)

    def __str__(self) -> str:
        if self.scale is None:
            return "Q"
        head = "" if self.scale == 1 else f"({self.scale})"
        tail = "" if self.m == 1 else f"[1/{self.m}]"
        return f"{head}Z{tail}"


# -- fragment elements --------------------------------------------------------------


@dataclass(frozen=True)
class FragmentElement:
    """``root ** exponent`` with ``root`` a primitive element of the free base.

    The root is normalized so that equal elements have equal data: any power
    is absorbed into the exponent, and of ``r`` and ``r^-1`` the one whose
    cyclic word is smaller is kept.  The identity has the empty root and
    exponent 0.
    """

    root: Word
    exponent: Fraction

    @classmethod
    def power(cls, g: Sequence[int], q=1) -> "FragmentElement":
        g = Word(g)
        q = Fraction(q)
        core, conj = cyclic_reduce(g)
        if not core or q == 0:
            return cls.identity()
        u, n = primitive_root(core)
        root = conj * Word(u) * conj.inverse()
        u = CyclicWord(u)
        if word_key(u.inverse()) < word_key(u):
            root, n = root.inverse(), -n
        return cls(root, n * q)

    @classmethod
    def identity(cls) -> "FragmentElement":
        return cls(Word(), Fraction(0))

    def is_identity(self) -> bool:
        return not self.root or self.exponent == 0

    def __pow__(self, q) -> "FragmentElement":
        if self.is_identity():
            return self
        return FragmentElement(self.root, self.exponent * Fraction(q))

    def inverse(self) -> "FragmentElement":
        return self ** -1

    def word(self) -> Word | None:
        """The element as a free-group word when the exponent is an integer."""
        if self.is_identity():
            return Word()
        if self.exponent.denominator != 1:
            return None
        return self.root ** int(self.exponent)

    def chain(self, coefficient=1) -> HChain:
        """Image in C_1^H of the free group: ``g^q`` goes to ``q g``."""
        if self.is_identity():
            return HChain()
        return HChain({self.root: Fraction(coefficient) * self.exponent})

    def format(self, alphabet=LETTERS) -> str:
        if self.is_identity():
            return "e"
        body = format_word(self.root, alphabet)
        if " " in body or "^" in body:
            body = f"({body})"
        return body if self.exponent == 1 else f"{body}^({self.exponent})"

    def __str__(self) -> str:
        return self.format()


_FRAGMENT_POWER = re.compile(r"^(?P<base>.*)\^\s*\(\s*(?P<q>[+-]?\d+(?:/\d+)?)\s*\)\s*$", re.S)


def parse_fragment(text: str, alphabet=LETTERS) -> FragmentElement:
    """``word`` or ``word^(p/q)``; the exponent applies to the whole word."""
    mt = _FRAGMENT_POWER.match(text)
    if mt:
        base, q = mt.group("base"), parse_rational(mt.group("q"))
    else:
        base, q = text, Fraction(1)
    if "^(" in base.replace(" ", ""):
        raise NotInFragmentError(f"{text.strip()!r} mixes several rational powers; not in the computable fragment")
    return FragmentElement.power(parse_word(base, alphabet), q)


def parse_fragment_chain(text: str, alphabet=LETTERS) -> list[tuple[Fraction, FragmentElement]]:
    """Parse ``"[a,b]^(1/2) + 2*a^(1/3) - a^(2/3)"`` into ``(coefficient, element)`` terms."""
    if text.strip() == "0":
        return []
    out = []
    for sign, coeff, body, offset in split_terms(text):
        try:
            out.append((sign * coeff, parse_fragment(body, alphabet)))
        except WordSyntaxError as exc:
            pos = None if exc.position is None else exc.position + offset
            raise type(exc)(str(exc).split(" (at position")[0], pos) from None
    return out


def fragment_chain_image(terms: Iterable[tuple[object, FragmentElement]]) -> HChain:
    out = HChain()
    for beta, e in terms:
        out = out + e.chain(beta)
    return out


def check_admissible(e: FragmentElement, ring: RationalSubgroup) -> None:
    """Raise unless ``e`` lies in the A-completion for ``A = ring``.

    The normalized exponent must lie in the group generated by ``A`` and 1:
    ``(a^2)^(1/2)`` is ``a`` and exists in every completion.
    """
    if e.is_identity():
        return
    allowed = ring.with_integers()
    if e.exponent not in allowed:
        raise InadmissibleExponentError(
            f"exponent {e.exponent} of {e} is not in {allowed}, so the power does not exist over {ring}"
        )


def scl_fragment(terms, ring: RationalSubgroup | None = None):
    """scl in the A-completion of a chain ``sum beta_i g_i^(q_i)`` of fragment elements.

    >>> scl_fragment([(1, FragmentElement.power(parse_word("[a,b]"), Fraction(1, 6)))])
    Fraction(1, 12)
    """
    ring = ring or RationalSubgroup.rationals()
    if isinstance(terms, FragmentElement):
        terms = [(1, terms)]
    terms = [(Fraction(b), e) for b, e in terms]
    for _, e in terms:
        check_admissible(e, ring)
    return scl(fragment_chain_image(terms))


# -- rational extensions --------------------------------------------------------------


@dataclass(frozen=True)
class RationalExtension:
    """The amalgam of the free base with ``A`` along ``z = a``."""

    z: CyclicWord
    a: Fraction
    ring: RationalSubgroup

    def __post_init__(self):
        z = CyclicWord(self.z)
        if not z:
            raise ValueError("the amalgamated element must be nontrivial")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "a", Fraction(self.a))
        if self.a == 0 or self.a not in self.ring:
            raise ValueError(f"{self.a} is not a nonzero element of {self.ring}")

    @property
    def malnormal(self) -> bool:
        return is_primitive(self.z)

    def __str__(self) -> str:
        return f"F *_{{{format_word(self.z)} = {self.a}}} {self.ring}"


@dataclass(frozen=True)
class MalnormalDecision:
    value: bool
    reason: str

    def __bool__(self) -> bool:
        return self.value


def is_malnormal_extension(ext: RationalExtension) -> MalnormalDecision:
    """A cyclic subgroup of a free group is malnormal iff its generator is primitive."""
    u, n = primitive_root(ext.z)
    if n == 1:
        return MalnormalDecision(True, f"{format_word(ext.z)} is not a proper power, so <z> is its own centraliser and malnormal")
    return MalnormalDecision(
        False, f"{format_word(ext.z)} = ({format_word(u)})^{n}; the root conjugates <z> to itself outside <z>"
    )


def split_value(ext: RationalExtension, c2) -> Fraction:
    values = [c2] if isinstance(c2, (int, Fraction)) else list(c2)
    total = Fraction(0)
    for v in values:
        v = Fraction(v)
        if v not in ext.ring:
            raise InadmissibleExponentError(f"{v} is not in {ext.ring}")
        total += v
    return total


def scl_extension_split(ext: RationalExtension, c1, c2=()):
    """scl in the extension of ``c1 + c2`` with ``c1`` on the free base and
    ``c2`` a combination of elements of ``A`` (given as their values).

    Chains in ``A`` have infinite scl unless they vanish, so the only usable
    transfer across the amalgam is ``d = (v/a) z`` for the total value ``v``
    of ``c2``.
    """
    v = split_value(ext, c2)
    h = normalize(c1)
    if v:
        h = h + HChain({ext.z: v / ext.a})
    return scl(h)


def split_objective(ext: RationalExtension, c1, c2, r) -> Fraction | float:
    """``scl_F(c1 + r z) + scl_A(c2 - r a)`` for a trial transfer ``r``."""
    v = split_value(ext, c2)
    if Fraction(r) * ext.a != v:
        return math.inf
    return scl(normalize(c1) + HChain({ext.z: Fraction(r)}))


# -- positivity -----------------------------------------------------------------------


@dataclass(frozen=True)
class PositiveWithValue:
    value: object


@dataclass(frozen=True)
class PositiveByTheorem:
    citations: tuple[str, ...]


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class NonFragmentElement:
    """A declared nonidentity element outside the computable fragment."""

    description: str


@dataclass(frozen=True)
class SplitDatum:
    ext: RationalExtension
    c1: HChain
    c2: tuple = ()


POSITIVITY_CITATIONS = (
    "iterated rational extensions of free groups: every nonidentity element has positive scl",
    "A-completions of free groups are directed unions of such extensions, so positivity persists",
)


def positivity_certificate(e, ring: RationalSubgroup | None = None):
    ring = ring or RationalSubgroup.rationals()
    if isinstance(e, NonFragmentElement):
        return PositiveByTheorem(POSITIVITY_CITATIONS)
    if isinstance(e, SplitDatum):
        value = scl_extension_split(e.ext, e.c1, e.c2)
    else:
        if e.is_identity():
            return Zero()
        value = scl_fragment([(1, e)], ring)
    return Zero() if value == 0 else PositiveWithValue(value)


# -- towers ---------------------------------------------------------------------------


def centraliser_representatives(rank: int, max_length: int) -> list[CyclicWord]:
    """Primitive cyclic words of length <= ``max_length``, one per ``{w, w^-1}`` up to rotation."""
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    reps = set()
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        frontier = nxt
        for w in frontier:
            if w[0] == -w[-1] or not is_primitive(w):
                continue
            c = CyclicWord(w)
            ci = c.inverse()
            reps.add(min(c, ci, key=word_key))
    return sorted(reps, key=lambda c: (len(c), word_key(c)))


@dataclass
class Tower:
    """Stage 0 is the free base; stage ``j >= 1`` adjoins ``stages[j-1]``."""

    alphabet: str
    stages: list[RationalExtension] = field(default_factory=list)
    ring: RationalSubgroup | None = None

    def labels(self) -> list[str]:
        return ["F"] + [f"G^({j})" for j in range(1, len(self.stages) + 1)]


def build_tower_stage(alphabet: str, max_length: int, ring: RationalSubgroup, stages: int) -> Tower:
    """Rational extensions over the centralisers of the free base.

    The first ``stages`` representatives (by length, then letter order) are
    adjoined in turn; every extension is malnormal since representatives are
    primitive.  Later levels of the completion are not materialized.
    """
    if max_length < 1 or stages < 1:
        raise ValueError("length bound and stage count must be positive")
    reps = centraliser_representatives(len(alphabet), max_length)
    exts = [RationalExtension(z, 1, ring) for z in reps[:stages]]
    return Tower(alphabet, exts, ring)


def root_tower(z, n: int, alphabet: str = "ab") -> Tower:
    """Stages ``F *_{z = 1} Z[1/k!]`` for ``k = 1..n``."""
    exts = [RationalExtension(CyclicWord(z), 1, RationalSubgroup(Fraction(1), math.factorial(k))) for k in range(1, n + 1)]
    return Tower(alphabet, exts, RationalSubgroup.rationals())


def tower_scl_trace(tower: Tower, h) -> list:
    """scl of a base chain at every stage of the tower, stage 0 first."""
    h = normalize(h)
    return [scl(h)] + [scl_extension_split(ext, h) for ext in tower.stages]


def trace_infimum(trace: Sequence) -> object:
    return min(trace)


# -- surfaces -------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceGroup:
    m: int
    generators: tuple[str, ...]
    relator: str
    euler_characteristic: int
    demigenus: int
    double_cover_generators: tuple[str, ...]
    double_cover_genus: int
    root_of: Word  # t is sent to this word to the power 1/2

    def presentation(self) -> str:
        return f"< {', '.join(self.generators)} | {self.relator} >"


def surface_group(m: int) -> SurfaceGroup:
    """The non-orientable closed surface with ``t^2 = [a1,b1]...[am,bm]``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    gens = tuple(x for i in range(1, m + 1) for x in (f"a{i}", f"b{i}")) + ("t",)
    z = Word()
    for i in range(m):
        a, b = Word([2 * i + 1]), Word([2 * i + 2])
        z = z * a * b * a.inverse() * b.inverse()
    rel = "t^2 = " + "".join(f"[a{i},b{i}]" for i in range(1, m + 1))
    chi = 1 - 2 * m
    cover = tuple(x for i in range(1, m + 1) for x in (f"a{i}", f"b{i}"))
    cover += tuple(f"t {x} t^-1" for x in cover)
    return SurfaceGroup(
        m=m,
        generators=gens,
        relator=rel,
        euler_characteristic=chi,
        demigenus=2 - chi,
        double_cover_generators=cover,
        double_cover_genus=(2 - 2 * chi) // 2,
        root_of=z,
    )


def surface_alphabet(m: int) -> list[str]:
    return list(surface_group(m).generators)


def surface_element(m: int, text: str) -> FragmentElement:
    """Image in the rational completion of the free base of ``a1..bm`` words or ``t^j``."""
    names = surface_alphabet(m)
    w = parse_word(text, names)
    t = len(names)
    if not w:
        return FragmentElement.identity()
    if t in w or -t in w:
        if any(abs(x) != t for x in w):
            raise NotInFragmentError(
                f"{text!r} mixes t with the other generators; its scl is outside the computable fragment"
            )
        j = len(w) if w[0] > 0 else -len(w)
        return FragmentElement.power(surface_group(m).root_of, Fraction(j, 2))
    return FragmentElement.power(w, 1)


def scl_surface(m: int, text: str):
    """scl in the surface group of an element ``t^j`` or a word in ``a1..bm``."""
    return scl_fragment([(1, surface_element(m, text))])
