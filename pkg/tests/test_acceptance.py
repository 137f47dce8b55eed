"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary."""

import itertools
import random
import time
from fractions import Fraction

from qscl.chains import Chain, HChain, normalize
from qscl.completions import (
    RationalExtension,
    RationalSubgroup,
    parse_fragment_chain,
    root_tower,
    scl_extension_split,
    scl_fragment,
    scl_surface,
    surface_group,
    tower_scl_trace,
    trace_infimum,
)
from qscl.quasimorphisms import CountingQM, bavard_lower_bound, defect_bound, independence_rank
from qscl.ratlp import check_optimality, solve
from qscl.scl_free import cl_upper_bound, scl, scl_certificate, verify_certificate
from qscl.wordmaps import (
    IN_COMMUTATOR_SUBGROUP,
    NON_SILLY,
    classify_word,
    parse_wordmap,
    surjectivity_witness,
    verify_witness,
)
from qscl.completions import FragmentElement
from qscl.words import Word, abelianization, parse_word, verify_commutator_identity

from generators import random_boundary_chain, random_commutator_word, random_word
from test_ratlp import random_feasible_lp

F = Fraction


def test_commutator_value_and_certificates(criterion):
    h = HChain.parse("[a,b]")
    start = time.perf_counter()
    cert = scl_certificate(h)
    elapsed = time.perf_counter() - start
    assert cert.value == F(1, 2) and elapsed < 5
    assert verify_certificate(h, cert) == []
    # upper side: explicit commutator products for odd powers
    for k in range(4):
        w = parse_word(f"[a,b]^{2 * k + 1}")
        bound = cl_upper_bound(w, budget=200000)
        assert bound.value <= k + 1 and verify_commutator_identity(w, bound.pairs)
        assert cert.value <= F(bound.value, 2 * k + 1)
    # lower side: a counting quasimorphism
    lower = bavard_lower_bound(CountingQM(parse_word("ab")), h)
    assert lower == F(1, 12) and lower <= cert.value <= F(1, 2)
    criterion(f"value {cert.value} in {elapsed:.3f}s")


def test_homogeneity(criterion):
    start = time.perf_counter()
    values = [scl(HChain.parse(f"{n}*[a,b]")) for n in range(1, 5)]
    elapsed = time.perf_counter() - start
    assert values == [F(n, 2) for n in range(1, 5)] and elapsed < 30
    criterion(f"{[str(v) for v in values]} in {elapsed:.3f}s")


def test_representative_invariance(criterion):
    rng = random.Random(2024)
    for _ in range(100):
        h = random_boundary_chain(rng, max_support=6, rank=2)
        value = scl(h)
        terms = list(h.items())
        conj = Chain([(q, g * Word(w) * g.inverse()) for (w, q), g in zip(terms, [random_word(rng, rng.randint(1, 4)) for _ in terms])])
        powered = Chain([(q / k, Word(w) ** k) for (w, q), k in zip(terms, [rng.randint(2, 4) for _ in terms])])
        folded = Chain([(-q, Word(w).inverse()) for w, q in terms])
        for c in (conj, powered, folded):
            assert scl(normalize(c)) == value
    criterion("100 chains x 3 rewritings")


def test_fragment_roots(criterion):
    for k in (2, 3, 6):
        start = time.perf_counter()
        value = scl_fragment(parse_fragment_chain(f"[a,b]^(1/{k})"), RationalSubgroup.rationals())
        assert value == F(1, 2 * k) and time.perf_counter() - start < 5
    criterion("k = 2, 3, 6")


def test_isometry(criterion):
    exts = [
        RationalExtension(parse_word("[a,b]"), 1, RationalSubgroup.parse("(1/2)Z")),
        RationalExtension(parse_word("ab"), 1, RationalSubgroup.parse("Z[1/6]")),
        RationalExtension(parse_word("a"), 1, RationalSubgroup.parse("Q")),
    ]
    rng = random.Random(99)
    for _ in range(50):
        h = random_boundary_chain(rng, max_support=8, rank=2)
        value = scl(h)
        for ext in exts:
            assert scl_extension_split(ext, h, 0) == value
    criterion("50 chains x 3 extensions")


def test_surface_embedding(criterion):
    assert scl_surface(1, "t") == F(1, 4)
    start = time.perf_counter()
    assert scl_surface(2, "t") == F(3, 4)
    elapsed = time.perf_counter() - start
    assert elapsed < 600
    criterion(f"m=2 in {elapsed:.3f}s")


def test_demigenus(criterion):
    for m in range(1, 11):
        g = surface_group(m)
        assert g.euler_characteristic == 1 - 2 * m and g.demigenus == 2 * m + 1
    criterion("m = 1..10")


def test_spectral_gap(criterion):
    rng = random.Random(5)
    least = None
    for _ in range(50):
        w = random_commutator_word(rng, max_length=8)
        v = scl(HChain.from_word(w))
        assert v >= F(1, 2)
        least = v if least is None else min(least, v)
    criterion(f"min over 50 words = {least}")


def test_bavard_soundness(criterion):
    letters = [1, -1, 2, -2]
    family = []
    for n in (2, 3):
        for t in itertools.product(letters, repeat=n):
            u = Word(t)
            if len(u) == n:
                family.append(CountingQM(u))
    rng = random.Random(17)
    chains = [HChain.parse("[a,b]"), HChain.parse("a + b + b^-1 a^-1"), HChain.parse("[a,b]^2 [a,b^-1]")]
    chains += [random_boundary_chain(rng, 8) for _ in range(25)]
    checked = 0
    for h in chains:
        value = scl(h)
        for q in family:
            assert defect_bound(q).value > 0
            assert bavard_lower_bound(q, h) <= value
            checked += 1
    criterion(f"{checked} pairs")


def test_infinite_dimensionality(criterion):
    family = [CountingQM(parse_word(f"a b^{k} a")) for k in range(1, 6)]
    chains = [HChain.parse(f"(a b^{j} a) - 2*a - {j}*b") for j in range(1, 6)]
    assert independence_rank(family, chains) == 5
    criterion("rank 5")


def test_tower_traces(criterion):
    rng = random.Random(31)
    chains = [HChain.parse("[a,b]"), HChain.parse("[a,b] - 1/2*[a^2,b]")] + [random_boundary_chain(rng, 6) for _ in range(5)]
    for h in chains:
        for z in ("[a,b]", "ab"):
            trace = tower_scl_trace(root_tower(parse_word(z), 4), h)
            assert len(trace) == 5 and len(set(trace)) == 1
            assert trace_infimum(trace) == trace[0] == scl(h)
    criterion(f"{len(chains)} chains, stages Z[1/k!] for k <= 4")


def test_word_maps(criterion):
    rng = random.Random(8)
    for _ in range(100):
        w = random_word(rng, rng.randint(0, 10), rank=3)
        assert classify_word(w).exponents == abelianization(w)
    assert classify_word(parse_wordmap("y^2")).classification == NON_SILLY
    n = 0
    for _ in range(100):
        w = random_word(rng, rng.randint(1, 8), rank=3)
        if classify_word(w).classification == IN_COMMUTATOR_SUBGROUP:
            continue
        target = FragmentElement.power(random_word(rng, rng.randint(1, 5)), F(rng.randint(-4, 4), rng.randint(1, 3)))
        assert verify_witness(w, surjectivity_witness(w, target), target)
        n += 1
    criterion(f"{n} witnesses verified")


def test_lp_core(criterion):
    rng = random.Random(20)
    for _ in range(20):
        prog = random_feasible_lp(rng, rng.randint(2, 30), rng.randint(1, 12))
        sol = solve(prog)
        assert sol.optimal and check_optimality(prog, sol) == []
        dual_value = sum(y * b for y, b in zip(sol.dual, prog.rhs))
        assert dual_value == sol.value
        for rule, seed in [("dantzig", None), ("random", 1), ("random", 2), ("random", 3)]:
            assert solve(prog, rule=rule, seed=seed).value == sol.value
    criterion("20 programs, 4 pivot settings")
