"""Brooks counting quasimorphisms and the lower bounds they give for scl.

For a reduced word ``u`` the counting function sends ``w`` to the number of
(overlapping) occurrences of ``u`` in the reduced word ``w`` minus those of
``u^-1``.  Its homogenization is the count per period in the bi-infinite
periodic word of the cyclic reduction of ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chains import NotABoundaryError, is_boundary, normalize
from .words import Word, cyclic_reduce


class ZeroDefectError(ValueError):
    pass


@dataclass(frozen=True)
class DefectBound:
    value: Fraction
    reason: str = ""

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("defect bounds are nonnegative")


class CountingQM:
    """Counting quasimorphism for a nonempty reduced word ``u``.

    >>> q = CountingQM(Word([1, 2]))
    >>> q.evaluate(Word([1, 2, 1, 2]))
    2
    """

    def __init__(self, u: Sequence[int]):
        u = Word(u)
        if not u:
            raise ValueError("counting quasimorphisms need a nonempty word")
        self.u = u
        self.u_inv = u.inverse()

    def __repr__(self) -> str:
        return f"CountingQM({str(self.u)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CountingQM) and self.u == other.u

    def __hash__(self) -> int:
        return hash(self.u)

    @staticmethod
    def _count(pattern: tuple, text: tuple) -> int:
        k = len(pattern)
        return sum(1 for i in range(len(text) - k + 1) if text[i:i + k] == pattern)

    def evaluate(self, w: Sequence[int]) -> int:
        w = tuple(Word(w))
        return self._count(tuple(self.u), w) - self._count(tuple(self.u_inv), w)

    def _periodic_count(self, pattern: tuple, c: tuple) -> int:
        # windows starting in one period of ...ccc...
        n, k = len(c), len(pattern)
        reps = (k - 1) // n + 2
        text = c * reps
        return sum(1 for i in range(n) if text[i:i + k] == pattern)

    def homogenized_value(self, w: Sequence[int]) -> Fraction:
        c, _ = cyclic_reduce(w)
        c = tuple(c)
        if not c:
            return Fraction(0)
        return Fraction(self._periodic_count(tuple(self.u), c) - self._periodic_count(tuple(self.u_inv), c))

    def evaluate_chain(self, h) -> Fraction:
        h = normalize(h)
        return sum((q * self.homogenized_value(w) for w, q in h.items()), Fraction(0))

    def raw_defect(self, g: Sequence[int], h: Sequence[int]) -> int:
        g, h = Word(g), Word(h)
        return abs(self.evaluate(g) + self.evaluate(h) - self.evaluate(g * h))


def evaluate(q: CountingQM, w) -> int:
    return q.evaluate(w)


def homogenized_value(q: CountingQM, w) -> Fraction:
    return q.homogenized_value(w)


def evaluate_chain(q: CountingQM, h) -> Fraction:
    return q.evaluate_chain(h)


def defect_bound(q: CountingQM) -> DefectBound:
    """Certified bound ``6(|u| - 1)`` on the defect of the homogenization.

    Of ``g``, ``h``, ``gh`` the reduced words form a tripod; windows inside a
    leg are counted once with each sign, so only windows straddling one of the
    three junctions survive, at most ``|u| - 1`` per junction.  Homogenizing at
    most doubles the defect.
    """
    k = len(q.u)
    return DefectBound(Fraction(6 * (k - 1)), "raw counting defect <= 3(|u|-1), doubled by homogenization")


def bavard_lower_bound(q: CountingQM, h) -> Fraction:
    """Lower bound ``phi(h) / (2 D)`` for ``scl(h)``."""
    h = normalize(h)
    if not is_boundary(h):
        raise NotABoundaryError(f"{h} is not a boundary")
    d = defect_bound(q).value
    if d == 0:
        raise ZeroDefectError(f"{q} is a homomorphism; it gives no bound")
    return q.evaluate_chain(h) / (2 * d)


def extend_to_fragment(q: CountingQM, e) -> Fraction:
    """Value of the extended homogeneous quasimorphism on a rational power ``g^s``."""
    if e.is_identity():
        return Fraction(0)
    return Fraction(e.exponent) * q.homogenized_value(e.root)


def independence_rank(family: Sequence[CountingQM], chains: Sequence) -> int:
    """Rank over Q of the matrix ``evaluate_chain(family[i], chains[j])``.

    Homomorphisms vanish on boundaries, so this bounds the dimension of the
    span of ``family`` modulo homomorphisms from below.
    """
    chains = [normalize(h) for h in chains]
    for h in chains:
        if not is_boundary(h):
            raise NotABoundaryError(f"test chain {h} is not a boundary")
    if not family or not chains:
        return 0
    from sympy import Matrix, Rational

    rows = [[Rational(v.numerator, v.denominator) for v in (q.evaluate_chain(h) for h in chains)] for q in family]
    return Matrix(rows).rank()
