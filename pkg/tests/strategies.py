"""Hypothesis strategies for sequences, piecewise-constant functions and descriptors."""
import numpy as np
from hypothesis import strategies as st

from ceslab.spaces import HALF, UNIT, PCFun, Seq

finite = st.floats(0.0, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def seqs(draw, min_size=1, max_size=12, positive=False):
    vals = draw(st.lists(st.floats(1e-3 if positive else 0.0, 1e3), min_size=min_size, max_size=max_size))
    if not any(vals):
        vals[0] = 1.0
    return Seq(vals)


@st.composite
def pcfuns(draw, domain=HALF, min_cells=1, max_cells=8):
    n = draw(st.integers(min_cells, max_cells))
    gaps = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    if domain == UNIT:
        x = np.concatenate([[0.0], np.cumsum(gaps) / np.sum(gaps)])
        x[-1] = 1.0
    else:
        start = draw(st.floats(-3.0, 1.0))
        x = 10.0 ** (start + np.concatenate([[0.0], np.cumsum(gaps)]))
    vals = draw(st.lists(st.floats(0.0, 100.0), min_size=n, max_size=n))
    if not any(vals):
        vals[0] = 1.0
    return PCFun(x, vals, domain)


leaf_seq = st.sampled_from(["lp(1)", "lp(2)", "lp(3.5)", "lp(inf)", "lp(2,pow(0.5))", "lp(4,recip(one))"])
leaf_half = st.sampled_from(["Lp(1,[0,inf))", "Lp(2,[0,inf))", "Lp(inf,[0,inf))", "Lp(3,[0,inf),pow(-0.25))",
                             "Lp(2,[0,inf),invt)"])
phis = st.sampled_from(["pow(0.25)", "pow(0.5)", "min", "max", "sum"])


def descriptors(leaf):
    unary = lambda c: st.one_of(c.map(lambda s: f"Ces({s})"), c.map(lambda s: f"Cop({s})"),
                                c.map(lambda s: f"Tan({s})"), c.map(lambda s: f"W({s},pow(0.5))"))
    binary = lambda c: st.one_of(
        st.tuples(c, c).map(lambda p: f"Sum({p[0]},{p[1]})"),
        st.tuples(c, c).map(lambda p: f"Cap({p[0]},{p[1]})"),
        st.tuples(phis, c, c).map(lambda p: f"CL({p[0]},{p[1]},{p[2]})"),
        st.tuples(c, c, st.sampled_from(["0.5", "0.25"]), st.sampled_from(["1", "2", "inf"]))
        .map(lambda p: f"RealK({p[0]},{p[1]},{p[2]},{p[3]})"))
    return st.recursive(leaf, lambda c: st.one_of(unary(c), binary(c)), max_leaves=4)
