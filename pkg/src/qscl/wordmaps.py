"""Word maps ``G^m -> G`` and their surjectivity on Q-groups.

A word ``w`` in variables ``x1..xm`` with exponent sums ``(i_1, ..., i_m)``:

* all zero: ``w`` is in the commutator subgroup and nothing is promised;
* gcd 1 ("silly"): surjective on every group;
* otherwise surjective on every group with unique roots, since
  ``w(1, .., g^(1/i_k), .., 1) = g``.

Variables are ``x1`` to ``x9``; ``x``, ``y``, ``z`` are the same as ``x1``, ``x2``, ``x3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .completions import FragmentElement
from .words import Word, abelianization, format_word, parse_word

VARIABLES = [f"x{i}" for i in range(1, 10)]
_ALIASES = re.compile(r"([xyz])(?![0-9])")

IN_COMMUTATOR_SUBGROUP = "in-commutator-subgroup"
SILLY = "silly"
NON_SILLY = "non-silly"

_DESCRIPTIONS = {
    IN_COMMUTATOR_SUBGROUP: "in commutator subgroup; no surjectivity guarantee",
    SILLY: "silly; surjective on every group",
    NON_SILLY: "non-silly; surjective on Q-groups",
}


class NoSurjectivityGuarantee(ValueError):
    pass


def parse_wordmap(text: str) -> Word:
    """Parse a word in the variables, e.g. ``"x^2 y^3"`` or ``"[x1,x2] x3"``."""
    text = _ALIASES.sub(lambda mt: "x" + str("xyz".index(mt.group(1)) + 1), text)
    # "x1x2" style juxtaposition needs a separator for the tokenizer
    text = re.sub(r"(\d)x", r"\1 x", text)
    return parse_word(text, VARIABLES)


def format_wordmap(w: Sequence[int]) -> str:
    names = VARIABLES
    if max((abs(x) for x in w), default=0) <= 3:
        names = ["x", "y", "z"]
    return format_word(w, names)


@dataclass(frozen=True)
class WordMapReport:
    exponents: tuple[int, ...]
    classification: str
    witness_index: int | None  # 0-based coordinate used by witnesses
    witness_exponent: int | None

    def describe(self) -> str:
        return _DESCRIPTIONS[self.classification]


def classify_word(w: Sequence[int]) -> WordMapReport:
    """Classify a word map by the exponent sums of its variables.

    >>> classify_word(parse_wordmap("y^2")).exponents
    (0, 2)
    """
    exps = abelianization(Word(w))
    g = 0
    for e in exps:
        g = gcd(g, e)
    if g == 0:
        return WordMapReport(exps, IN_COMMUTATOR_SUBGROUP, None, None)
    k = next(i for i, e in enumerate(exps) if e)
    return WordMapReport(exps, SILLY if g == 1 else NON_SILLY, k, exps[k])


def _as_fragment(h) -> FragmentElement:
    return h if isinstance(h, FragmentElement) else FragmentElement.power(h, 1)


def surjectivity_witness(w: Sequence[int], h) -> tuple[FragmentElement, ...]:
    """Arguments at which the word map takes the value ``h``."""
    report = classify_word(w)
    if report.classification == IN_COMMUTATOR_SUBGROUP:
        raise NoSurjectivityGuarantee(f"{format_wordmap(w)} lies in the commutator subgroup; no surjectivity guarantee")
    h = _as_fragment(h)
    out = [FragmentElement.identity()] * len(report.exponents)
    out[report.witness_index] = h ** Fraction(1, report.witness_exponent)
    return tuple(out)


def evaluate_wordmap(w: Sequence[int], args: Sequence[FragmentElement]) -> list[FragmentElement]:
    """Substitute and collapse with ``g^p g^q = g^(p+q)``; returns the syllables left."""
    syllables: list[FragmentElement] = []
    for x in w:
        e = args[abs(x) - 1]
        if x < 0:
            e = e.inverse()
        if e.is_identity():
            continue
        if syllables and syllables[-1].root == e.root:
            merged = FragmentElement(e.root, syllables[-1].exponent + e.exponent)
            syllables.pop()
            if not merged.is_identity():
                syllables.append(merged)
        else:
            syllables.append(e)
    return syllables


def verify_witness(w: Sequence[int], args: Sequence, h) -> bool:
    """True if substituting ``args`` into ``w`` gives ``h``."""
    w = Word(w)
    if any(abs(x) > len(args) for x in w):
        return False
    args = [_as_fragment(a) for a in args]
    h = _as_fragment(h)
    syllables = evaluate_wordmap(w, args)
    if all(s.exponent.denominator == 1 for s in syllables):
        # everything is an honest word: compare by free reduction
        product = Word()
        for s in syllables:
            product = product * s.word()
        target = h.word()
        return target is not None and product == target
    if h.is_identity():
        return not syllables
    return len(syllables) == 1 and syllables[0] == h
