import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qscl.ratlp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    DimensionError,
    LinearProgram,
    LPSyntaxError,
    SimplexSolver,
    add_columns,
    check_optimality,
    format_lp,
    parse_lp,
    solve,
)

F = Fraction


def lp(c, a, b):
    return LinearProgram.from_dense(c, a, b)


def test_shifted_variable():
    sol = solve(lp([1, 0], [[1, -1]], [3]))
    assert sol.status == OPTIMAL and sol.value == 3


def test_infeasible_with_farkas_ray():
    sol = solve(lp([0], [[1]], [-1]))
    assert sol.status == INFEASIBLE
    # y A <= 0 and y b > 0
    assert sol.ray[0] * 1 <= 0 and sol.ray[0] * -1 > 0


def test_two_basic_solutions():
    sol = solve(lp([1, 1], [[1, 2]], [2]))
    assert sol.value == 1 and sol.primal == (0, 1)


def test_unbounded_direction():
    prog = lp([-1, 0], [[1, -1]], [0])
    sol = solve(prog)
    assert sol.status == UNBOUNDED
    d = sol.ray
    assert all(x >= 0 for x in d) and d[0] - d[1] == 0 and -d[0] < 0


def test_dimension_errors():
    with pytest.raises(DimensionError):
        lp([1, 2], [[1]], [1])
    with pytest.raises(DimensionError):
        lp([1], [[1], [1]], [1])
    with pytest.raises(DimensionError):
        add_columns(lp([1], [[1]], [1]), [{3: 1}], [1])


def test_add_columns_examples():
    base = lp([2, 3], [[1, 1]], [1])
    value = solve(base).value
    assert solve(add_columns(base, [{0: 1}], [2])).value == value
    assert solve(add_columns(base, [], [])).value == value
    solver = SimplexSolver(base)
    first = solver.solve()
    col, cost = {0: F(1)}, F(1)
    assert cost - first.dual[0] * 1 < 0
    solver.add_columns([col], [cost])
    assert solver.solve().value < first.value


def test_dump_roundtrip():
    prog = lp([F(1, 2), 0, -3], [[1, F(-2, 3), 0], [0, 1, 1]], [F(5, 7), 2])
    text = format_lp(prog)
    assert parse_lp(text) == prog
    assert solve(parse_lp(text)).value == solve(prog).value
    with pytest.raises(LPSyntaxError):
        parse_lp("objective 1\nrow 1 2\n")


def random_feasible_lp(rng, n_vars, n_rows):
    a = [[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n_vars)] for _ in range(n_rows)]
    x = [F(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(n_vars)]
    b = [sum(r[j] * x[j] for j in range(n_vars)) for r in a]
    c = [F(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(n_vars)]
    return lp(c, a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 8), st.integers(1, 5))
def test_optimality_conditions(seed, n, m):
    prog = random_feasible_lp(random.Random(seed), n, m)
    sol = solve(prog)
    assert sol.status == OPTIMAL
    assert check_optimality(prog, sol) == []
    # complementary slackness
    for j, x in enumerate(sol.primal):
        reduced = prog.objective[j] - sum(sol.dual[i] * v for i, v in prog.columns[j].items())
        assert x == 0 or reduced == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.fractions(min_value=F(1, 5), max_value=5))
def test_scaling_rhs_scales_value(seed, q):
    prog = random_feasible_lp(random.Random(seed), 6, 3)
    scaled = LinearProgram(prog.objective, prog.columns, tuple(q * b for b in prog.rhs))
    assert solve(scaled).value == q * solve(prog).value


def test_deterministic():
    prog = random_feasible_lp(random.Random(3), 12, 6)
    assert solve(prog, rule="random", seed=5) == solve(prog, rule="random", seed=5)
