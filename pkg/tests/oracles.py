"""Independent reference computations used by the tests.

These share no solver code with the package: cycles are enumerated by
networkx and the LP is solved in floating point by scipy (HiGHS).
"""

from fractions import Fraction

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from qscl.scl_free import encode


def scl_by_enumeration(h, max_cycles=200000):
    """Float scl from the full polygon LP over every simple cycle."""
    enc, scale = encode(h)
    if not enc.positions:
        return 0.0
    g = nx.DiGraph()
    g.add_nodes_from(range(len(enc.arcs)))
    for a, outs in enumerate(enc.out):
        for b in outs:
            g.add_edge(a, b)
    cols, costs = [], []
    for cyc in nx.simple_cycles(g):
        col, cost = enc.column(cyc)
        cols.append(col)
        costs.append(float(cost))
        if len(cols) > max_cycles:
            raise RuntimeError("too many cycles for the enumeration oracle")
    a = np.zeros((enc.n_rows, len(cols)))
    for j, col in enumerate(cols):
        for i, v in col.items():
            a[i, j] = float(v)
    b = np.array([float(x) for x in enc.rhs()])
    res = linprog(np.array(costs), A_eq=a, b_eq=b, bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return res.fun / scale


def close(exact, approx, tol=1e-7):
    return abs(float(Fraction(exact)) - approx) <= tol
