"""Explicit products of commutators from letter pairings.

A pairing of the letters of a cyclically reduced word ``w`` (each letter with
an occurrence of its inverse) glues a polygon labelled by ``w`` into a closed
surface with ``V`` vertices.  Removing a disc gives a surface of genus
``(1 + n - V) / 2`` (``n`` pairs) whose boundary maps to ``w``, hence an upper
bound for ``cl(w)``.  :func:`commutators_from_pairing` turns the surface into
explicit words ``x_i, y_i`` with ``w = prod [x_i, y_i]`` in the free group.
"""

from __future__ import annotations

import random
from typing import Sequence

from .words import Word, cyclic_reduce, verify_commutator_identity


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[max(ri, rj)] = min(ri, rj)
        return True


def pairing_vertices(w: Sequence[int], pairing: dict[int, int]) -> list[int]:
    """Vertex class of every polygon corner; corner ``i`` precedes letter ``i``."""
    n = len(w)
    uf = _UnionFind(n)
    for i, j in pairing.items():
        if i < j:
            uf.union(i, (j + 1) % n)
            uf.union((i + 1) % n, j)
    return [uf.find(i) for i in range(n)]


def pairing_genus(w: Sequence[int], pairing: dict[int, int]) -> int:
    roots = set(pairing_vertices(w, pairing))
    twice = 1 + len(w) // 2 - len(roots)
    assert twice % 2 == 0
    return twice // 2


def _tree_paths(edges: list[tuple[int, int, int]], root: int, vertices: set[int]):
    """Spanning tree by BFS; returns (tree edge ids, path word from root to each vertex)."""
    adjacency: dict[int, list[tuple[int, int, int]]] = {v: [] for v in vertices}
    for k, (tail, head, letter) in enumerate(edges):
        adjacency[tail].append((k, head, letter))
        adjacency[head].append((k, tail, -letter))
    path = {root: Word()}
    tree = set()
    queue = [root]
    while queue:
        v = queue.pop(0)
        for k, u, letter in adjacency[v]:
            if u not in path:
                path[u] = path[v] * Word([letter])
                tree.add(k)
                queue.append(u)
    return tree, path


def _first_linked(r: list[int]):
    """Positions (i, j, k, l) with r[i]=x, r[j]=y, r[k]=x^-1, r[l]=y^-1, i<j<k<l."""
    where: dict[int, list[int]] = {}
    for pos, s in enumerate(r):
        where.setdefault(abs(s), []).append(pos)
    for i, s in enumerate(r):
        k = where[abs(s)][1] if where[abs(s)][0] == i else where[abs(s)][0]
        if k < i:
            continue
        for j in range(i + 1, k):
            t = r[j]
            lpos = [p for p in where[abs(t)] if p != j][0]
            if lpos > k:
                return i, j, k, lpos
    return None


def _word_of(symbols: Sequence[int], theta: dict[int, Word]) -> Word:
    out = Word()
    for s in symbols:
        out = out * (theta[s] if s > 0 else theta[-s].inverse())
    return out


def quadratic_to_commutators(r: Sequence[int], theta: dict[int, Word]) -> tuple[list[tuple[Word, Word]], Word]:
    """Write ``theta(r)`` as ``prod [x_i, y_i] * h * theta(rest) * h^-1`` and
    eliminate linked pairs until the rest is empty.

    ``r`` is a word in symbols each occurring once with each sign.  Returns the
    commutator pairs and asserts full elimination.
    """
    theta = dict(theta)
    r = list(Word(r))
    h = Word()
    pairs: list[tuple[Word, Word]] = []
    while r:
        # cyclic reduction: r = c r0 c^-1
        core_c, conj = cyclic_reduce(r)
        if conj:
            h = h * _word_of(conj, theta)
            r = list(conj.inverse() * Word(r) * conj)
        found = _first_linked(r)
        if found is None:
            raise ValueError("quadratic word has an unlinked chord; not a one-vertex surface")
        i, j, k, l = found
        # rotate so x is first: r = s r' s^-1 with s = r[:i]
        s = r[:i]
        h = h * _word_of(s, theta)
        r = r[i:] + r[:i]
        j, k, l = j - i, k - i, l - i
        x, y = r[0], r[j]
        B, C, D, A = r[1:j], r[j + 1:k], r[k + 1:l], r[l + 1:]
        V = D + C + B
        tx = _word_of([x], theta)
        ty = _word_of([y], theta)
        new_x = _word_of(V, theta).inverse() * tx * _word_of(B, theta)
        new_y = ty * _word_of(C, theta) * _word_of(B, theta)
        g = h * _word_of(V, theta)
        pairs.append((g * new_x * g.inverse(), g * new_y * g.inverse()))
        for sym in (abs(x), abs(y)):
            del theta[sym]
        r = list(Word(V + A))
    return pairs, h


def commutators_from_pairing(w: Sequence[int], pairing: dict[int, int]) -> list[tuple[Word, Word]]:
    """Explicit commutator pairs for a pairing of the cyclically reduced word ``w``.

    The result has ``pairing_genus(w, pairing)`` pairs (fewer if the contracted
    word cancels further) and satisfies ``verify_commutator_identity``.
    """
    w = tuple(w)
    n = len(w)
    if n == 0:
        return []
    vertex = pairing_vertices(w, pairing)
    # one edge per pair, oriented along its first occurrence
    edges = []
    symbol_at = [0] * n
    for i in range(n):
        j = pairing[i]
        if i < j:
            edges.append((vertex[i], vertex[(i + 1) % n], w[i]))
            symbol_at[i] = len(edges)
            symbol_at[j] = -len(edges)
    root = vertex[0]
    tree, path = _tree_paths(edges, root, set(vertex))
    theta = {}
    for k, (tail, head, letter) in enumerate(edges):
        if k not in tree:
            theta[k + 1] = path[tail] * Word([letter]) * path[head].inverse()
    contracted = [s for s in symbol_at if abs(s) - 1 not in tree]
    pairs, h = quadratic_to_commutators(contracted, theta)
    return pairs


def _random_pairing(w: Sequence[int], rng: random.Random) -> dict[int, int]:
    by_letter: dict[int, list[int]] = {}
    for i, x in enumerate(w):
        by_letter.setdefault(x, []).append(i)
    pairing = {}
    for x, positions in by_letter.items():
        if x < 0:
            continue
        partners = list(by_letter.get(-x, []))
        rng.shuffle(partners)
        for i, j in zip(positions, partners):
            pairing[i], pairing[j] = j, i
    return pairing


def best_pairing(w: Sequence[int], budget: int = 20000, seed: int = 0) -> tuple[dict[int, int], int] | None:
    """Search pairings of ``w`` for the largest vertex count (smallest genus).

    Exhaustive depth-first search while within ``budget`` nodes, then local
    improvement by swapping partners.  Returns ``(pairing, genus)``, or ``None``
    if ``w`` is not balanced or the budget ends before any complete pairing.
    """
    w = tuple(w)
    n = len(w)
    by_letter: dict[int, list[int]] = {}
    for i, x in enumerate(w):
        by_letter.setdefault(x, []).append(i)
    for x, positions in by_letter.items():
        if len(by_letter.get(-x, [])) != len(positions):
            return None
    if n == 0:
        return {}, 0
    order = [i for i in range(n) if w[i] > 0]
    best: list = [None, -1]
    nodes = 0

    def dfs(idx: int, pairing: dict[int, int], used: set[int]):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            return
        if idx == len(order):
            v = len(set(pairing_vertices(w, pairing)))
            if v > best[1]:
                best[0], best[1] = dict(pairing), v
            return
        i = order[idx]
        for j in by_letter[-w[i]]:
            if j in used:
                continue
            pairing[i], pairing[j] = j, i
            used.add(j)
            dfs(idx + 1, pairing, used)
            used.discard(j)
            del pairing[i], pairing[j]
            if nodes > budget:
                return

    dfs(0, {}, set())
    if best[0] is None:
        return None
    if nodes > budget:
        best[0], best[1] = _improve(w, best[0], best[1], budget, seed)
    pairing = best[0]
    return pairing, pairing_genus(w, pairing)


def _improve(w, pairing, score, budget, seed):
    """Swap-partner hill climbing with random restarts."""
    rng = random.Random(seed)
    positives = [i for i in range(len(w)) if w[i] > 0]
    best, best_score = dict(pairing), score
    current, current_score = dict(pairing), score
    for step in range(budget):
        i, k = rng.sample(positives, 2) if len(positives) > 1 else (positives[0], positives[0])
        if w[i] != w[k] or i == k:
            if step % 500 == 499:
                current = _random_pairing(w, rng)
                current_score = len(set(pairing_vertices(w, current)))
            continue
        j, l = current[i], current[k]
        trial = dict(current)
        trial[i], trial[l] = l, i
        trial[k], trial[j] = j, k
        s = len(set(pairing_vertices(w, trial)))
        if s >= current_score:
            current, current_score = trial, s
            if s > best_score:
                best, best_score = dict(trial), s
    return best, best_score
