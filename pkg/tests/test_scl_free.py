import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qscl.chains import HChain, NotABoundaryError
from qscl.scl_free import (
    SclCertificate,
    cl_upper_bound,
    encode,
    price_cycles,
    scl,
    scl_certificate,
    verify_certificate,
)
from qscl.words import Word, parse_word, verify_commutator_identity

from generators import random_boundary_chain, random_commutator_word
from oracles import close, scl_by_enumeration

seeds = st.integers(0, 10 ** 6)


def H(text):
    return HChain.parse(text)


def test_commutator():
    assert scl(H("[a,b]")) == Fraction(1, 2)


def test_non_boundary_is_infinite():
    assert scl(H("a")) == math.inf
    assert scl(H("a + [a,b]")) == math.inf


def test_zero_chain():
    assert scl(HChain()) == 0
    cert = scl_certificate(H("a + a^-1"))
    assert cert.value == 0 and cert.polygons == []


def test_commutator_certificate_is_one_square():
    cert = scl_certificate(H("[a,b]"))
    assert cert.value == Fraction(1, 2)
    assert len(cert.polygons) == 1
    arcs, weight = cert.polygons[0]
    assert len(arcs) == 4 and weight == 1
    assert verify_certificate(H("[a,b]"), cert) == []


def test_doubling_doubles_weights():
    one, two = scl_certificate(H("[a,b]")), scl_certificate(H("2*[a,b]"))
    assert two.value == 1
    assert sum(w for _, w in two.polygons) == 2 * sum(w for _, w in one.polygons)


def test_certificate_requires_boundary():
    with pytest.raises(NotABoundaryError):
        scl_certificate(H("a b"))


def test_rational_coefficients_are_scaled():
    cert = scl_certificate(H("1/3*[a,b]"))
    assert cert.scaling == 3 and cert.value == Fraction(1, 6)
    assert verify_certificate(H("1/3*[a,b]"), cert) == []


def test_pants_and_genus_two():
    # both checked against the enumeration oracle as well
    for text in ["a + b + b^-1 a^-1", "[a,b][c,d]"]:
        assert close(scl(H(text)), scl_by_enumeration(H(text)))


def test_certificate_json_roundtrip_and_tamper_detection():
    h = H("[a,b]^2 [a,b^-1] - 1/2*[a,b]")
    cert = scl_certificate(h)
    data = json.loads(cert.dumps())
    back = SclCertificate.from_json(data)
    assert back.value == cert.value and verify_certificate(h, back) == []
    data["value"] = str(cert.value - Fraction(1, 100))
    assert verify_certificate(h, SclCertificate.from_json(data))
    data = json.loads(cert.dumps())
    data["duals"][0]["potential"] = str(Fraction(data["duals"][0]["potential"]) + 1)
    assert verify_certificate(h, SclCertificate.from_json(data))


def test_optimal_dual_prices_nothing():
    h = H("[a,b] + [a,b^2]")
    cert = scl_certificate(h)
    enc, _ = encode(h)
    dual = [Fraction(0)] * enc.n_rows
    for p, pos in enumerate(enc.positions):
        dual[p] = cert.coverage_duals[pos]
    for key, r in enc.pair_row.items():
        p, q = sorted(key)
        dual[r] = cert.balance_duals[(enc.positions[p], enc.positions[q])]
    assert price_cycles(enc, dual) == []


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_matches_enumeration_oracle(seed):
    rng = random.Random(seed)
    h = random_boundary_chain(rng, max_support=rng.choice([6, 8, 10]), rank=rng.choice([2, 3]), max_terms=4)
    assert close(scl(h), scl_by_enumeration(h))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 4))
def test_homogeneity(seed, n):
    h = random_boundary_chain(random.Random(seed), 6)
    assert scl(n * h) == n * scl(h)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_pivot_rule_and_seed_size_do_not_matter(seed):
    h = random_boundary_chain(random.Random(seed), 8)
    v = scl(h)
    assert scl(h, rule="dantzig") == v
    assert scl(h, seed_cycles=2) == v
    assert scl(h, seed_cycles=6) == v


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_certificates_verify(seed):
    h = random_boundary_chain(random.Random(seed), 10, rank=3, max_terms=4)
    assert verify_certificate(h, scl_certificate(h)) == []


def test_cl_upper_bound_examples():
    assert cl_upper_bound(parse_word("[a,b]")).value == 1
    assert cl_upper_bound(parse_word("[a,b]^2")).value <= 2
    assert cl_upper_bound(Word()).value == 0
    with pytest.raises(ValueError):
        cl_upper_bound(parse_word("a b"))
    assert cl_upper_bound(parse_word("[a,b]^3"), budget=2) is None


def test_cl_witnesses_verify_for_conjugated_words():
    w = parse_word("c [a,b]^3 c^-1")
    bound = cl_upper_bound(w)
    assert bound.value == 2 and verify_commutator_identity(w, bound.pairs)


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 3))
def test_scl_below_cl_of_powers(seed, n):
    w = random_commutator_word(random.Random(seed), 6)
    bound = cl_upper_bound(w ** n)
    assert verify_commutator_identity(w ** n, bound.pairs)
    assert scl(HChain.from_word(w)) <= Fraction(bound.value, n)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_gap_on_random_commutator_words(seed):
    w = random_commutator_word(random.Random(seed), 8)
    assert scl(HChain.from_word(w)) >= Fraction(1, 2)
