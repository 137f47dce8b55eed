"""Exact rational linear programming.

Problems are in equality form::

    minimize c.x  subject to  A x = b,  x >= 0

and are solved by a two-phase tableau simplex over :class:`fractions.Fraction`
with Bland's rule (or a seeded random rule that falls back to Bland under
degeneracy).  Every optimal answer carries a dual vector and is checked for
primal feasibility, dual feasibility and zero duality gap before it is
returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_RULES = ("bland", "dantzig", "random")


class DimensionError(ValueError):
    pass


class LPSyntaxError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _sparse(column: Mapping[int, object] | Sequence[object]) -> dict[int, Fraction]:
    items = column.items() if isinstance(column, Mapping) else enumerate(column)
    out = {}
    for i, v in items:
        v = _frac(v)
        if v:
            out[int(i)] = v
    return out


@dataclass(frozen=True)
class LinearProgram:
    """``min objective.x`` s.t. ``sum_j columns[j] x_j = rhs``, ``x >= 0``.

    ``columns[j]`` maps row index to a nonzero coefficient.
    """

    objective: tuple[Fraction, ...]
    columns: tuple[dict[int, Fraction], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(_frac(c) for c in self.objective))
        object.__setattr__(self, "rhs", tuple(_frac(b) for b in self.rhs))
        object.__setattr__(self, "columns", tuple(_sparse(col) for col in self.columns))
        if len(self.objective) != len(self.columns):
            raise DimensionError(f"{len(self.objective)} costs for {len(self.columns)} columns")
        m = len(self.rhs)
        for j, col in enumerate(self.columns):
            for i in col:
                if not 0 <= i < m:
                    raise DimensionError(f"column {j} has entry in row {i}, but there are {m} rows")

    @classmethod
    def from_dense(cls, objective, matrix, rhs) -> "LinearProgram":
        matrix = [list(row) for row in matrix]
        n = len(objective)
        if len(matrix) != len(rhs):
            raise DimensionError(f"{len(matrix)} rows but {len(rhs)} right-hand sides")
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {n}")
        columns = [{i: matrix[i][j] for i in range(len(matrix))} for j in range(n)]
        return cls(tuple(objective), tuple(columns), tuple(rhs))

    @property
    def n_vars(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    def dense_matrix(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.n_vars for _ in range(self.n_rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out


@dataclass
class LPSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    basis: tuple[int, ...] = ()
    # infeasible: y with A^T y <= 0, b.y > 0; unbounded: d >= 0, A d = 0, c.d < 0
    ray: tuple[Fraction, ...] = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def add_columns(lp: LinearProgram, columns: Iterable, costs: Iterable) -> LinearProgram:
    """Return ``lp`` extended by new columns (sparse mappings or dense lists)."""
    columns = [_sparse(c) for c in columns]
    costs = [_frac(c) for c in costs]
    if len(columns) != len(costs):
        raise DimensionError("one cost per added column is required")
    return LinearProgram(lp.objective + tuple(costs), lp.columns + tuple(columns), lp.rhs)


class SimplexSolver:
    """Two-phase tableau simplex that can be extended with columns and re-solved.

    The tableau keeps the artificial block, so ``B^-1`` is always available for
    pricing new columns and for reading the dual.
    """

    def __init__(self, lp: LinearProgram, rule: str = "bland", seed: int | None = None):
        if rule not in PIVOT_RULES:
            raise ValueError(f"unknown pivot rule {rule!r}")
        self.lp = lp
        self.rule = rule
        self.rng = random.Random(seed)
        m = lp.n_rows
        self.m = m
        self.sign = [1 if b >= 0 else -1 for b in lp.rhs]
        self.rhs = [abs(b) for b in lp.rhs]
        self.rows: list[dict[int, Fraction]] = [dict() for _ in range(m)]
        self.col_var: list[int | None] = []
        self.cost: list[Fraction] = []
        self.art_col = []
        for i in range(m):
            self.art_col.append(self._append_column({i: Fraction(1)}, None, Fraction(0)))
        for j, col in enumerate(lp.columns):
            flipped = {i: v * self.sign[i] for i, v in col.items()}
            self._append_column(flipped, j, lp.objective[j])
        self.basis = list(self.art_col)
        self.phase = 0
        self.d: list[Fraction] = []
        self.pivots = 0

    # -- tableau plumbing --------------------------------------------------

    def _append_column(self, entries: dict[int, Fraction], var: int | None, cost: Fraction) -> int:
        k = len(self.col_var)
        for i, v in entries.items():
            if v:
                self.rows[i][k] = v
        self.col_var.append(var)
        self.cost.append(cost)
        return k

    def _binv_times(self, column: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for r in range(self.m):
            row = self.rows[r]
            s = Fraction(0)
            for i, v in column.items():
                a = row.get(self.art_col[i])
                if a:
                    s += a * v
            if s:
                out[r] = s
        return out

    def _phase_cost(self, k: int) -> Fraction:
        if self.phase == 1:
            return Fraction(1) if self.col_var[k] is None else Fraction(0)
        return self.cost[k]

    def _reduced_costs(self) -> None:
        n = len(self.col_var)
        d = [self._phase_cost(k) for k in range(n)]
        for r, b in enumerate(self.basis):
            cb = self._phase_cost(b)
            if cb:
                for k, v in self.rows[r].items():
                    d[k] -= cb * v
        self.d = d

    def _pivot(self, r: int, e: int) -> None:
        prow = self.rows[r]
        piv = prow[e]
        if piv != 1:
            inv = 1 / piv
            for k in prow:
                prow[k] *= inv
            self.rhs[r] *= inv
        items = list(prow.items())
        for i in range(self.m):
            if i == r:
                continue
            row = self.rows[i]
            f = row.get(e)
            if not f:
                continue
            for k, v in items:
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            self.rhs[i] -= f * self.rhs[r]
        f = self.d[e]
        if f:
            for k, v in items:
                self.d[k] -= f * v
        self.basis[r] = e
        self.pivots += 1

    def _allowed(self, k: int, basic: set[int]) -> bool:
        if k in basic:
            return False
        return self.phase == 1 or self.col_var[k] is not None

    def _entering(self, basic: set[int], use_bland: bool) -> int | None:
        candidates = [k for k, dk in enumerate(self.d) if dk < 0 and self._allowed(k, basic)]
        if not candidates:
            return None
        if use_bland or self.rule == "bland":
            return min(candidates, key=self._bland_key)
        if self.rule == "dantzig":
            return min(candidates, key=lambda k: (self.d[k], self._bland_key(k)))
        return self.rng.choice(candidates)

    def _bland_key(self, k: int) -> tuple[int, int]:
        # structural variables by index first, artificials last
        var = self.col_var[k]
        return (0, var) if var is not None else (1, k)

    def _leaving(self, e: int, use_bland: bool) -> int | None:
        best = None
        ties: list[int] = []
        for i in range(self.m):
            a = self.rows[i].get(e)
            if a is None or a <= 0:
                continue
            ratio = self.rhs[i] / a
            if best is None or ratio < best:
                best, ties = ratio, [i]
            elif ratio == best:
                ties.append(i)
        if best is None:
            return None
        if use_bland or self.rule != "random":
            return min(ties, key=lambda i: self._bland_key(self.basis[i]))
        return self.rng.choice(ties)

    def _iterate(self) -> int | None:
        """Run pivots until optimal (returns None) or unbounded (returns column)."""
        degenerate_run = 0
        while True:
            basic = set(self.basis)
            use_bland = degenerate_run > 2 * self.m + 10
            e = self._entering(basic, use_bland)
            if e is None:
                return None
            r = self._leaving(e, use_bland)
            if r is None:
                return e
            degenerate_run = degenerate_run + 1 if self.rhs[r] == 0 else 0
            self._pivot(r, e)

    def _drive_out_artificials(self) -> None:
        for r, b in enumerate(self.basis):
            if self.col_var[b] is not None:
                continue
            for k in sorted(self.rows[r], key=self._bland_key):
                if self.col_var[k] is not None:
                    self._pivot(r, k)
                    break

    # -- public ------------------------------------------------------------

    def solve(self) -> LPSolution:
        if self.phase == 0:
            self.phase = 1
            self._reduced_costs()
            self._iterate()
            infeasibility = sum((self.rhs[r] for r, b in enumerate(self.basis) if self.col_var[b] is None), Fraction(0))
            if infeasibility > 0:
                y = self._dual()
                self.phase = -1
                return LPSolution(INFEASIBLE, ray=tuple(y), pivots=self.pivots)
            self._drive_out_artificials()
            self.phase = 2
            self._reduced_costs()
        elif self.phase == -1:
            return LPSolution(INFEASIBLE, pivots=self.pivots)
        e = self._iterate()
        if e is not None:
            return LPSolution(UNBOUNDED, ray=self._direction(e), pivots=self.pivots)
        return self._solution()

    def add_columns(self, columns: Iterable, costs: Iterable) -> list[int]:
        """Append columns; the current basis stays primal feasible."""
        columns = [_sparse(c) for c in columns]
        costs = [_frac(c) for c in costs]
        if len(columns) != len(costs):
            raise DimensionError("one cost per added column is required")
        start = self.lp.n_vars
        self.lp = add_columns(self.lp, columns, costs)
        added = []
        y = self._dual_flipped() if self.phase == 2 else None
        for offset, (col, c) in enumerate(zip(columns, costs)):
            for i in col:
                if not 0 <= i < self.m:
                    raise DimensionError(f"added column has entry in row {i}")
            flipped = {i: v * self.sign[i] for i, v in col.items()}
            k = self._append_column(self._binv_times(flipped), start + offset, c)
            if self.d:
                if self.phase == 2:
                    self.d.append(c - sum((y[i] * v for i, v in flipped.items()), Fraction(0)))
                else:
                    self.d.append(Fraction(0))
            added.append(k)
        if self.phase == 1:
            self._reduced_costs()
        return added

    def _dual_flipped(self) -> list[Fraction]:
        y = [Fraction(0)] * self.m
        for r, b in enumerate(self.basis):
            cb = self._phase_cost(b)
            if not cb:
                continue
            row = self.rows[r]
            for i in range(self.m):
                a = row.get(self.art_col[i])
                if a:
                    y[i] += cb * a
        return y

    def _dual(self) -> list[Fraction]:
        return [s * v for s, v in zip(self.sign, self._dual_flipped())]

    def _direction(self, e: int) -> tuple[Fraction, ...]:
        d = [Fraction(0)] * self.lp.n_vars
        d[self.col_var[e]] = Fraction(1)
        for r, b in enumerate(self.basis):
            a = self.rows[r].get(e)
            if a and self.col_var[b] is not None:
                d[self.col_var[b]] = -a
        return tuple(d)

    def _solution(self) -> LPSolution:
        x = [Fraction(0)] * self.lp.n_vars
        basis = []
        for r, b in enumerate(self.basis):
            var = self.col_var[b]
            if var is not None:
                x[var] = self.rhs[r]
                basis.append(var)
        y = self._dual()
        value = sum((c * v for c, v in zip(self.lp.objective, x)), Fraction(0))
        sol = LPSolution(OPTIMAL, value, tuple(x), tuple(y), tuple(sorted(basis)), pivots=self.pivots)
        problems = check_optimality(self.lp, sol)
        if problems:
            raise AssertionError("simplex produced an uncertified optimum: " + "; ".join(problems))
        return sol


def check_optimality(lp: LinearProgram, sol: LPSolution) -> list[str]:
    """Exact optimality checks; returns a list of violated conditions."""
    problems = []
    x, y = sol.primal, sol.dual
    if len(x) != lp.n_vars or len(y) != lp.n_rows:
        return ["dimension mismatch"]
    if any(v < 0 for v in x):
        problems.append("negative primal entry")
    ax = [Fraction(0)] * lp.n_rows
    for j, col in enumerate(lp.columns):
        if x[j]:
            for i, v in col.items():
                ax[i] += v * x[j]
    if ax != list(lp.rhs):
        problems.append("A x != b")
    for j, col in enumerate(lp.columns):
        if sum((v * y[i] for i, v in col.items()), Fraction(0)) > lp.objective[j]:
            problems.append(f"dual constraint {j} violated")
            break
    primal_value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    dual_value = sum((b * v for b, v in zip(lp.rhs, y)), Fraction(0))
    if primal_value != dual_value:
        problems.append(f"duality gap {primal_value} vs {dual_value}")
    if sol.value is not None and sol.value != primal_value:
        problems.append("reported value differs from c.x")
    return problems


def solve(lp: LinearProgram, rule: str = "bland", seed: int | None = None) -> LPSolution:
    """Solve ``lp`` exactly.

    >>> lp = LinearProgram.from_dense([1, 1], [[1, 2]], [2])
    >>> sol = solve(lp)
    >>> sol.status, sol.value, sol.primal
    ('optimal', Fraction(1, 1), (Fraction(0, 1), Fraction(1, 1)))
    """
    return SimplexSolver(lp, rule=rule, seed=seed).solve()


# -- debug dump ---------------------------------------------------------------


def format_lp(lp: LinearProgram) -> str:
    lines = [
        "# minimize c.x subject to A x = b, x >= 0",
        f"variables {lp.n_vars}",
        f"constraints {lp.n_rows}",
        "objective " + " ".join(map(str, lp.objective)),
    ]
    for row, b in zip(lp.dense_matrix(), lp.rhs):
        lines.append("row " + " ".join(map(str, row)) + f" = {b}")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> LinearProgram:
    n = m = None
    objective = None
    rows, rhs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "variables":
                n = int(rest)
            elif head == "constraints":
                m = int(rest)
            elif head == "objective":
                objective = [Fraction(t) for t in rest.split()]
            elif head == "row":
                lhs, eq, b = rest.partition("=")
                if not eq:
                    raise LPSyntaxError("row without '='")
                rows.append([Fraction(t) for t in lhs.split()])
                rhs.append(Fraction(b.strip()))
            else:
                raise LPSyntaxError(f"unknown directive {head!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise LPSyntaxError(f"line {lineno}: {exc}") from None
    if objective is None:
        raise LPSyntaxError("missing objective line")
    if n is not None and n != len(objective):
        raise DimensionError(f"declared {n} variables, objective has {len(objective)}")
    if m is not None and m != len(rows):
        raise DimensionError(f"declared {m} constraints, found {len(rows)}")
    return LinearProgram.from_dense(objective, rows, rhs)


def format_solution(sol: LPSolution) -> str:
    lines = [f"status {sol.status}"]
    if sol.optimal:
        lines.append(f"value {sol.value}")
        lines.append("primal " + " ".join(map(str, sol.primal)))
        lines.append("dual " + " ".join(map(str, sol.dual)))
    elif sol.ray:
        lines.append("ray " + " ".join(map(str, sol.ray)))
    return "\n".join(lines) + "\n"
