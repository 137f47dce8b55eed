"""Deterministic random inputs shared by the tests."""

import random
from fractions import Fraction

from qscl.chains import Chain, HChain, homology_class, normalize
from qscl.words import Word, abelianization, cyclic_reduce


def random_word(rng, length, rank=2):
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    out = []
    while len(out) < length:
        x = rng.choice(letters)
        if out and out[-1] == -x:
            continue
        out.append(x)
    return Word(out)


def random_cyclic_word(rng, length, rank=2):
    while True:
        w = random_word(rng, length, rank)
        if not w or w[0] != -w[-1]:
            return w


def random_commutator_word(rng, max_length=8, rank=2):
    """Nontrivial cyclically reduced word with zero abelianization."""
    while True:
        n = rng.choice(range(4, max_length + 1, 2))
        w = random_cyclic_word(rng, n, rank)
        if len(w) == n and not any(abelianization(w, rank)):
            return w


def random_boundary_chain(rng, max_support=6, rank=2, max_terms=3):
    """Random nonzero boundary chain with total cyclic length <= max_support.

    Terms are drawn first; coefficients are then taken from the kernel of the
    abelianization map, so the chain is a boundary by construction.
    """
    while True:
        k = rng.randint(1, max_terms)
        budget = max_support
        words = []
        for _ in range(k):
            if budget < 1:
                break
            n = rng.randint(1, min(budget, 5))
            w = Word(cyclic_reduce(random_cyclic_word(rng, n, rank))[0])
            if not w:
                continue
            words.append(w)
            budget -= len(w)
        vecs = [abelianization(w, rank) for w in words]
        coeffs = _kernel_combination(rng, vecs, rank)
        if coeffs is None:
            continue
        h = normalize(Chain([(c, w) for c, w in zip(coeffs, words)]))
        if h and not any(homology_class(h, rank)):
            return h


def _kernel_combination(rng, vecs, rank):
    from sympy import Matrix

    if not vecs:
        return None
    m = Matrix([[v[i] for v in vecs] for i in range(rank)])
    basis = m.nullspace()
    if not basis:
        return None
    combo = [0] * len(vecs)
    for b in basis:
        t = rng.choice([1, 2, -1, Fraction(1, 2), 3])
        for j in range(len(vecs)):
            combo[j] += Fraction(str(b[j])) * t
    if not any(combo):
        return None
    return combo
