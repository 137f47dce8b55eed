"""Stable commutator length of chains in a free group, by exact linear programming.

An admissible surface for a chain cuts into rectangles (one per pair of
inverse letters) and polygons around the vertex.  A polygon is a cycle of
*arcs*: an arc ``(p, q)`` joins positions carrying inverse letters, and the arc
after ``(p, q)`` starts at the position following ``q`` in its cyclic word.  A
polygon with ``k`` sides contributes ``(k - 2) / 4`` to ``-chi / 2``, so

    scl = min  sum_P  w_P (|P| - 2) / 4

over weights ``w_P >= 0`` such that every arc is used as often as its reverse
and every position ``p`` starts arcs exactly ``coefficient(word(p))`` times.

Only simple cycles are used as columns; they are generated lazily by pricing
with a shortest-cycle search on the arc graph under the reduced costs.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chains import HChain, NotABoundaryError, is_boundary, normalize
from .commutators import best_pairing, commutators_from_pairing
from .ratlp import LinearProgram, SimplexSolver, check_optimality
from .words import CyclicWord, Word, abelianization, cyclic_reduce, format_rational, lcm

INF = math.inf

Position = tuple  # (word id, index)
Arc = tuple  # (Position, Position)


class SclEncoding:
    """Positions, arcs, turn graph and LP rows for an integral chain.

    ``words[i]`` is a nonempty cyclically reduced word to be covered
    ``coefficients[i]`` times (a positive integer).
    """

    def __init__(self, words: Sequence[Sequence[int]], coefficients: Sequence[int]):
        self.words = [tuple(w) for w in words]
        self.coefficients = [int(c) for c in coefficients]
        self.positions: list[Position] = [(i, j) for i, w in enumerate(self.words) for j in range(len(w))]
        self.pos_id = {p: k for k, p in enumerate(self.positions)}
        by_letter: dict[int, list[int]] = {}
        for k, (i, j) in enumerate(self.positions):
            by_letter.setdefault(self.words[i][j], []).append(k)
        self.arcs: list[tuple[int, int]] = []
        for p, (i, j) in enumerate(self.positions):
            for q in by_letter.get(-self.words[i][j], []):
                self.arcs.append((p, q))
        self.arc_id = {a: k for k, a in enumerate(self.arcs)}
        self.pair_row: dict[frozenset, int] = {}
        n_pos = len(self.positions)
        for p, q in self.arcs:
            key = frozenset((p, q))
            if key not in self.pair_row:
                self.pair_row[key] = n_pos + len(self.pair_row)
        self.n_rows = n_pos + len(self.pair_row)
        starts: dict[int, list[int]] = {}
        for k, (p, q) in enumerate(self.arcs):
            starts.setdefault(p, []).append(k)
        self.out = [starts.get(self.successor(q), []) for (_, q) in self.arcs]

    def successor(self, p: int) -> int:
        i, j = self.positions[p]
        return self.pos_id[(i, (j + 1) % len(self.words[i]))]

    def rhs(self) -> list[Fraction]:
        b = [Fraction(0)] * self.n_rows
        for p, (i, _) in enumerate(self.positions):
            b[p] = Fraction(self.coefficients[i])
        return b

    def _balance_sign(self, arc: int) -> int:
        p, q = self.arcs[arc]
        return 1 if p < q else -1

    def column(self, cycle: Sequence[int]) -> tuple[dict[int, Fraction], Fraction]:
        col: dict[int, Fraction] = {}
        for a in cycle:
            p, q = self.arcs[a]
            col[p] = col.get(p, Fraction(0)) + 1
            r = self.pair_row[frozenset((p, q))]
            col[r] = col.get(r, Fraction(0)) + self._balance_sign(a)
        col = {k: v for k, v in col.items() if v}
        return col, Fraction(len(cycle) - 2, 4)

    def arc_weights(self, dual: Sequence[Fraction]) -> list[Fraction]:
        """Reduced-cost weight of each arc; a cycle prices out iff its weight sum < 1/2."""
        out = []
        for a, (p, q) in enumerate(self.arcs):
            r = self.pair_row[frozenset((p, q))]
            out.append(Fraction(1, 4) - dual[p] - self._balance_sign(a) * dual[r])
        return out

    def short_cycles(self, max_len: int) -> list[tuple[int, ...]]:
        """All simple cycles with at most ``max_len`` arcs, rooted at their least arc."""
        found = []
        for s in range(len(self.arcs)):
            stack = [(s, [s])]
            while stack:
                v, path = stack.pop()
                for u in self.out[v]:
                    if u == s:
                        found.append(tuple(path))
                    elif u > s and u not in path and len(path) < max_len:
                        stack.append((u, path + [u]))
        return sorted(set(found), key=lambda c: (len(c), c))

    def pairing_cycles(self) -> list[tuple[int, ...]]:
        """Simple cycles of a surface built from an arbitrary letter pairing.

        Each word is copied ``coefficient`` times, every letter copy is paired
        with a copy of its inverse, and the polygon boundaries are split into
        simple cycles.  The resulting columns form a feasible solution.
        """
        copies = []  # (word, copy, index)
        by_letter: dict[int, list[int]] = {}
        for i, w in enumerate(self.words):
            for c in range(self.coefficients[i]):
                for j in range(len(w)):
                    by_letter.setdefault(w[j], []).append(len(copies))
                    copies.append((i, c, j))
        index = {t: k for k, t in enumerate(copies)}
        partner = [None] * len(copies)
        for x, ks in by_letter.items():
            if x > 0:
                for k, l in zip(ks, by_letter.get(-x, [])):
                    partner[k], partner[l] = l, k
        if any(p is None for p in partner):
            raise NotABoundaryError("letters cannot be paired; the chain is not a boundary")
        seen = [False] * len(copies)
        cycles = []
        for start in range(len(copies)):
            if seen[start]:
                continue
            walk = []
            k = start
            while not seen[k]:
                seen[k] = True
                l = partner[k]
                i, _, j = copies[k]
                i2, c2, j2 = copies[l]
                walk.append(self.arc_id[(self.pos_id[(i, j)], self.pos_id[(i2, j2)])])
                k = index[(i2, c2, (j2 + 1) % len(self.words[i2]))]
            cycles.extend(_split_closed_walk(walk))
        return [_root_cycle(c) for c in cycles]


def _split_closed_walk(walk: list[int]) -> list[list[int]]:
    out = []
    stack: list[int] = []
    where: dict[int, int] = {}
    for a in walk:
        if a in where:
            k = where[a]
            out.append(stack[k:])
            for b in stack[k:]:
                del where[b]
            del stack[k:]
        where[a] = len(stack)
        stack.append(a)
    if stack:
        out.append(stack)
    return out


def _root_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


# -- pricing --------------------------------------------------------------------


def _integer_weights(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = lcm(w.denominator for w in weights) if weights else 1
    return [int(w * scale) for w in weights], scale


def _negative_cycles(out: list[list[int]], w: list[int]) -> tuple[list[tuple[int, ...]], list[int]]:
    """Bellman-Ford from a virtual source; returns negative cycles or potentials."""
    n = len(out)
    dist = [0] * n
    pred = [-1] * n
    for _ in range(n):
        changed = False
        for v in range(n):
            dv = dist[v]
            for u in out[v]:
                nd = dv + w[u]
                if nd < dist[u]:
                    dist[u] = nd
                    pred[u] = v
                    changed = True
        if not changed:
            return [], dist
    # cycles of the predecessor graph are negative
    cycles = set()
    color = [0] * n
    for s in range(n):
        path = []
        v = s
        while v != -1 and color[v] == 0:
            color[v] = s + 1
            path.append(v)
            v = pred[v]
        if v != -1 and color[v] == s + 1:
            k = path.index(v)
            cyc = path[k:]
            cyc.reverse()
            cycles.add(_root_cycle(cyc))
    return sorted(cycles), dist


def _edge_weight(w: list[int], u: int) -> int:
    # weight of the arc entered; edges carry the weight of their head
    return w[u]


def price_cycles(enc: SclEncoding, dual: Sequence[Fraction], limit: int | None = None) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Simple cycles whose weight under the dual is below 1/2, cheapest first.

    Returns an empty list exactly when every simple cycle has weight >= 1/2,
    i.e. when the dual is feasible for the full polygon LP.
    """
    weights = enc.arc_weights(dual)
    w, scale = _integer_weights(weights)
    n = len(w)
    if n == 0:
        return []
    cycles, potential = _negative_cycles(enc.out, w)
    if not cycles:
        cycles = []
        # Johnson reweighting on edge v->u of weight w[u]
        for s in range(n):
            best = _min_cycle_through(enc.out, w, potential, s)
            if best is not None and 2 * best[0] < scale:
                cycles.append(best[1])
        cycles = sorted(set(cycles))
    priced = []
    for c in cycles:
        total = sum((weights[a] for a in c), Fraction(0))
        if total < Fraction(1, 2):
            priced.append((total, c))
    priced.sort()
    if limit is not None:
        priced = priced[:limit]
    return priced


def _min_cycle_through(out, w, h, s):
    """Lightest cycle through ``s`` (no negative cycles), restricted to arcs >= s."""
    dist = {s: 0}
    pred = {s: -1}
    heap = [(0, s)]
    best = None
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        true_v = d - h[s] + h[v]
        for u in out[v]:
            if u == s:
                total = true_v + w[s]
                if best is None or total < best[0] or (total == best[0] and v < best[2]):
                    best = (total, v, v)
                continue
            if u < s:
                continue
            nd = d + w[u] + h[v] - h[u]
            if u not in dist or nd < dist[u]:
                dist[u] = nd
                pred[u] = v
                heapq.heappush(heap, (nd, u))
    if best is None:
        return None
    path = []
    v = best[1]
    while v != -1:
        path.append(v)
        v = pred[v]
    path.reverse()
    return best[0], tuple(path)


# -- certificates -----------------------------------------------------------------


@dataclass
class SclCertificate:
    """Optimal polygon weights and LP dual for ``scl`` of a chain.

    ``words``/``coefficients`` describe the integral chain actually encoded
    (``scaling`` times the input); ``value`` is the unscaled scl.
    """

    value: Fraction
    scaling: int
    words: list[tuple[int, ...]]
    coefficients: list[int]
    polygons: list[tuple[tuple[tuple[Position, Position], ...], Fraction]]
    coverage_duals: dict[Position, Fraction]
    balance_duals: dict[tuple[Position, Position], Fraction]
    columns_generated: int = 0
    lp: LinearProgram | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "value": format_rational(self.value),
            "scaling": self.scaling,
            "words": [{"letters": list(w), "coefficient": c} for w, c in zip(self.words, self.coefficients)],
            "polygons": [
                {"arcs": [[list(p), list(q)] for p, q in arcs], "weight": format_rational(wt)}
                for arcs, wt in self.polygons
            ],
            "duals": [{"position": list(p), "potential": format_rational(y)} for p, y in self.coverage_duals.items()],
            "balance_duals": [
                {"arc": [list(p), list(q)], "potential": format_rational(y)} for (p, q), y in self.balance_duals.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "SclCertificate":
        def pos(x):
            return (int(x[0]), int(x[1]))

        return cls(
            value=Fraction(data["value"]),
            scaling=int(data["scaling"]),
            words=[tuple(w["letters"]) for w in data["words"]],
            coefficients=[int(w["coefficient"]) for w in data["words"]],
            polygons=[
                (tuple((pos(p), pos(q)) for p, q in poly["arcs"]), Fraction(poly["weight"])) for poly in data["polygons"]
            ],
            coverage_duals={pos(d["position"]): Fraction(d["potential"]) for d in data["duals"]},
            balance_duals={
                (pos(d["arc"][0]), pos(d["arc"][1])): Fraction(d["potential"]) for d in data.get("balance_duals", [])
            },
        )


def encode(h: HChain) -> tuple[SclEncoding, int]:
    """Integral encoding of a chain: signs moved onto inverses, denominators cleared."""
    words, coeffs = [], []
    for w, q in h.items():
        if q < 0:
            w, q = w.inverse(), -q
        words.append(tuple(w))
        coeffs.append(q)
    scale = lcm(q.denominator for q in coeffs) if coeffs else 1
    ints = [int(q * scale) for q in coeffs]
    return SclEncoding(words, ints), scale


def scl_certificate(h: HChain, seed_cycles: int = 4, rule: str = "bland", max_rounds: int = 10000) -> SclCertificate:
    """Exact scl of a boundary chain together with a primal/dual certificate."""
    h = normalize(h)
    if not is_boundary(h):
        raise NotABoundaryError(f"{h} is not a boundary; its scl is infinite")
    enc, scale = encode(h)
    if not enc.positions:
        return SclCertificate(Fraction(0), scale, [], [], [], {}, {})
    columns: dict[tuple[int, ...], int] = {}
    start = enc.pairing_cycles() + enc.short_cycles(seed_cycles)
    cycles: list[tuple[int, ...]] = []
    for c in start:
        if c not in columns:
            columns[c] = len(cycles)
            cycles.append(c)
    cols, costs = zip(*(enc.column(c) for c in cycles))
    lp = LinearProgram(tuple(costs), tuple(cols), tuple(enc.rhs()))
    solver = SimplexSolver(lp, rule=rule)
    for _ in range(max_rounds):
        sol = solver.solve()
        if not sol.optimal:
            raise AssertionError(f"restricted scl LP is {sol.status}")
        new = [c for _, c in price_cycles(enc, sol.dual) if c not in columns]
        if not new:
            break
        for c in new:
            columns[c] = len(cycles)
            cycles.append(c)
        added = [enc.column(c) for c in new]
        solver.add_columns([a for a, _ in added], [b for _, b in added])
    else:
        raise RuntimeError("column generation did not converge")
    lp = solver.lp
    problems = check_optimality(lp, sol)
    if problems:
        raise AssertionError("; ".join(problems))

    def arc_pos(a):
        p, q = enc.arcs[a]
        return (enc.positions[p], enc.positions[q])

    polygons = [
        (tuple(arc_pos(a) for a in cycles[j]), x) for j, x in enumerate(sol.primal) if x
    ]
    n_pos = len(enc.positions)
    coverage = {enc.positions[p]: sol.dual[p] for p in range(n_pos)}
    balance = {}
    for key, r in enc.pair_row.items():
        p, q = sorted(key)
        balance[(enc.positions[p], enc.positions[q])] = sol.dual[r]
    return SclCertificate(
        value=sol.value / scale,
        scaling=scale,
        words=enc.words,
        coefficients=enc.coefficients,
        polygons=polygons,
        coverage_duals=coverage,
        balance_duals=balance,
        columns_generated=len(cycles),
        lp=lp,
    )


def scl(h: HChain, seed_cycles: int = 4, rule: str = "bland"):
    """Exact scl of ``h`` in the free group: a Fraction, or ``math.inf`` off boundaries.

    >>> scl(HChain.parse("[a,b]"))
    Fraction(1, 2)
    >>> scl(HChain.parse("a"))
    inf
    """
    h = normalize(h)
    if not h:
        return Fraction(0)
    if not is_boundary(h):
        return INF
    return scl_certificate(h, seed_cycles=seed_cycles, rule=rule).value


def verify_certificate(h: HChain, cert: SclCertificate) -> list[str]:
    """Independent check of a certificate against ``h``; returns problems found.

    Checks the encoded chain, primal feasibility and value, dual value, and
    dual feasibility over *all* simple polygons (by exact cycle pricing).
    """
    problems = []
    h = normalize(h)
    enc, scale = encode(h)
    if scale != cert.scaling or enc.words != list(cert.words) or enc.coefficients != list(cert.coefficients):
        return ["certificate encodes a different chain"]
    if not enc.positions:
        return [] if cert.value == 0 and not cert.polygons else ["nonzero certificate for the zero chain"]
    usage = {p: Fraction(0) for p in range(len(enc.positions))}
    flow: dict[tuple[int, int], Fraction] = {}
    total = Fraction(0)
    for arcs, weight in cert.polygons:
        if weight < 0:
            problems.append("negative polygon weight")
        ids = []
        for p, q in arcs:
            try:
                a = enc.arc_id[(enc.pos_id[tuple(p)], enc.pos_id[tuple(q)])]
            except KeyError:
                problems.append(f"invalid arc {p}->{q}")
                continue
            ids.append(a)
        for k, a in enumerate(ids):
            nxt = ids[(k + 1) % len(ids)]
            if nxt not in enc.out[a]:
                problems.append("polygon sides do not follow the turn rule")
                break
        for a in ids:
            p, q = enc.arcs[a]
            usage[p] += weight
            flow[(p, q)] = flow.get((p, q), Fraction(0)) + weight
        total += weight * Fraction(len(ids) - 2, 4)
    for p, u in usage.items():
        if u != enc.coefficients[enc.positions[p][0]]:
            problems.append(f"position {enc.positions[p]} covered {u} times")
    for (p, q), f in flow.items():
        if flow.get((q, p), Fraction(0)) != f:
            problems.append(f"arc {enc.positions[p]}->{enc.positions[q]} unbalanced")
    if total != cert.value * scale:
        problems.append(f"primal value {total} does not match {cert.value} * {scale}")
    dual = [Fraction(0)] * enc.n_rows
    for p in range(len(enc.positions)):
        dual[p] = cert.coverage_duals.get(enc.positions[p], Fraction(0))
    for key, r in enc.pair_row.items():
        p, q = sorted(key)
        dual[r] = cert.balance_duals.get((enc.positions[p], enc.positions[q]), Fraction(0))
    dual_value = sum((dual[p] * enc.coefficients[enc.positions[p][0]] for p in range(len(enc.positions))), Fraction(0))
    if dual_value != total:
        problems.append(f"dual value {dual_value} differs from primal {total}")
    if price_cycles(enc, dual, limit=1):
        problems.append("dual infeasible: some polygon has negative reduced cost")
    return problems


# -- commutator length upper bounds -----------------------------------------------


@dataclass
class ClBound:
    value: int
    pairs: list[tuple[Word, Word]]


def cl_upper_bound(w: Sequence[int], budget: int = 20000, seed: int = 0) -> ClBound | None:
    """A verified upper bound on the commutator length of ``w``.

    Searches letter pairings within ``budget`` nodes, converts the best one
    into explicit commutators and checks the product by free reduction.
    Returns ``None`` when the budget does not reach a single complete pairing.
    """
    w = Word(w)
    if any(abelianization(w)):
        raise ValueError(f"{w} is not in the commutator subgroup")
    if not w:
        return ClBound(0, [])
    core, g = cyclic_reduce(w)
    core = tuple(core)
    found = best_pairing(core, budget=budget, seed=seed)
    if found is None:
        return None
    pairing, genus = found
    pairs = commutators_from_pairing(core, pairing)
    gi = g.inverse()
    pairs = [(g * x * gi, g * y * gi) for x, y in pairs]
    from .words import verify_commutator_identity

    if not verify_commutator_identity(w, pairs):
        raise AssertionError("commutator witness failed verification")
    return ClBound(len(pairs), pairs)
