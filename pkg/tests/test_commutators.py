import random

from hypothesis import given, settings, strategies as st

from qscl.commutators import (
    _random_pairing,
    best_pairing,
    commutators_from_pairing,
    pairing_genus,
)
from qscl.words import Word, cyclic_reduce, parse_word, verify_commutator_identity

from generators import random_commutator_word


def test_commutator_has_genus_one():
    w = tuple(parse_word("[a,b]"))
    pairing, genus = best_pairing(w)
    assert genus == 1
    assert verify_commutator_identity(w, commutators_from_pairing(w, pairing))


def test_powers_of_commutator():
    for n, expected in [(2, 2), (3, 2)]:
        w = tuple(parse_word(f"[a,b]^{n}"))
        pairing, genus = best_pairing(w)
        assert genus == expected
        pairs = commutators_from_pairing(w, pairing)
        assert len(pairs) == genus and verify_commutator_identity(w, pairs)


def test_unbalanced_word_has_no_pairing():
    assert best_pairing(tuple(parse_word("a b a^-1"))) is None


def test_tiny_budget_reports_unknown():
    assert best_pairing(tuple(parse_word("[a,b]^3")), budget=2) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_every_pairing_gives_verified_commutators(seed):
    rng = random.Random(seed)
    w = tuple(cyclic_reduce(random_commutator_word(rng, 12, rank=rng.choice([2, 3])))[0])
    pairing = _random_pairing(w, rng)
    pairs = commutators_from_pairing(w, pairing)
    assert len(pairs) <= pairing_genus(w, pairing)
    assert verify_commutator_identity(w, pairs)
