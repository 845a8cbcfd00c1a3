import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceslab.kernels import (ExactFun, cesaro_fn, cesaro_seq, copson_fn, copson_seq, dilate_fn, dilate_seq,
                            majorant_fn, majorant_seq, maximal_fn, rearrange_at, rearrange_fn, shift_seq)
from ceslab.norms import norm_value
from ceslab.spaces import HALF, UNIT, PCFun, Seq, SpaceError, parse_space

from strategies import pcfuns, seqs


def vals(s):
    return list(np.asarray(s.values, float))


# sequences -----------------------------------------------------------------

def test_cesaro_seq_examples():
    assert np.allclose(vals(cesaro_seq(Seq([1, 0, 0]), 4)), [1, 1 / 2, 1 / 3, 1 / 4])
    assert np.allclose(vals(cesaro_seq(Seq([1, 1, 1]), 5)), [1, 1, 1, 3 / 4, 3 / 5])
    assert np.allclose(vals(cesaro_seq(Seq([2, 4]), 3)), [2, 3, 2])
    with pytest.raises(SpaceError):
        cesaro_seq(Seq([1]), 0)


def test_copson_seq_examples():
    assert np.allclose(vals(copson_seq(Seq([1]), 3)), [1, 0, 0])
    assert np.allclose(vals(copson_seq(Seq([0, 1]), 3)), [1 / 2, 1 / 2, 0])
    assert np.allclose(vals(copson_seq(Seq([1, 1, 1]), 4)), [11 / 6, 5 / 6, 1 / 3, 0])
    with pytest.raises(SpaceError):
        copson_seq(Seq([1]), 0)


def test_majorant_seq_examples():
    assert vals(majorant_seq(Seq([1, 3, 2]))) == [3, 3, 2]
    assert vals(majorant_seq(Seq([0, 0]))) == [0, 0]
    assert vals(majorant_seq(Seq([5, 2, 2, 1]))) == [5, 2, 2, 1]


def test_dilations():
    assert vals(dilate_seq(Seq([1.5, 2.5]), "up", 2)) == [1.5, 1.5, 2.5, 2.5]
    assert vals(dilate_seq(Seq([1, 3, 5, 7]), "down", 2)) == [2, 6]
    with pytest.raises(SpaceError):
        dilate_seq(Seq([1]), "up", 0)


@given(seqs(), st.integers(1, 5))
def test_dilation_down_inverts_up(a, m):
    back = dilate_seq(dilate_seq(a, "up", m), "down", m)
    assert np.allclose(vals(back)[: len(a.values)], vals(a), rtol=1e-14)


def test_shifts():
    assert vals(shift_seq(Seq([1, 2]), "forward")) == [0, 1, 2]
    assert vals(shift_seq(Seq([1, 2, 3]), "backward")) == [2, 3]


@given(seqs(), seqs())
def test_shift_adjoint(a, b):
    sa = np.asarray(shift_seq(a, "forward").values)
    sb = np.asarray(shift_seq(b, "backward").values)
    n = max(len(sa), len(b.values), len(sb), len(a.values))
    pad = lambda v: np.pad(np.asarray(v, float), (0, n - len(v)))
    assert np.dot(pad(sa), pad(b.values)) == pytest.approx(np.dot(pad(a.values), pad(sb)), rel=1e-12, abs=1e-12)
    assert np.allclose(vals(shift_seq(shift_seq(a, "forward"), "backward")), vals(a))


@given(seqs(max_size=10))
def test_bennett_factorisations(a):
    # C = (C - S*) C* and C* = (C* - I) S C on the entries where the finite evaluation is exact
    n = len(a.values)
    m = 4 * n
    Cs = copson_seq(a, m)
    lhs = np.asarray(cesaro_seq(a, m).values)
    rhs = np.asarray(cesaro_seq(Cs, m).values) - np.pad(np.asarray(shift_seq(Cs, "backward").values), (0, 1))[:m]
    scale = max(np.max(np.abs(lhs)), 1e-300)
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale * 10)
    Ca = cesaro_seq(a, m + 1)
    SC = shift_seq(Ca, "forward")
    L = len(SC.values)
    # beyond the support (S C a)_k = s/(k-1), so the neglected Copson tail is s/L
    tail = float(np.sum(a.values)) / L
    lhs2 = np.asarray(copson_seq(a, n).values)
    rhs2 = np.asarray(copson_seq(SC, L).values)[:n] + tail - np.asarray(SC.values)[:n]
    assert np.allclose(lhs2, rhs2, rtol=1e-9, atol=1e-12 * scale)


@given(seqs())
def test_majorant_idempotent_seq(a):
    m = majorant_seq(a)
    assert vals(majorant_seq(m)) == vals(m)
    assert np.all(np.diff(vals(m)) <= 0)


# functions -----------------------------------------------------------------

def test_cesaro_fn_indicator_half_line():
    f = PCFun([0.0, 1.0, 4.0], [1.0, 0.0], HALF)
    E = ExactFun.from_pcfun(f).cesaro()
    x = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    assert np.allclose(E(x), np.where(x <= 1, 1.0, 1 / x), rtol=1e-14)


def test_cesaro_fn_constant_on_unit():
    f = PCFun([0.0, 0.3, 1.0], [2.0, 2.0], UNIT)
    g = cesaro_fn(f)
    assert np.allclose(g.values, 2.0, rtol=1e-14)


def test_cesaro_of_f_alpha_at_one():
    a = math.exp(-1)
    f = PCFun.from_antiderivative(lambda t: np.log(np.maximum(t, a)), np.concatenate([[0.0], np.geomspace(a, 1, 65)]), UNIT)
    assert ExactFun.from_pcfun(f).cesaro()(np.array([1.0]))[0] == pytest.approx(1.0, rel=1e-12)


def test_copson_fn_examples():
    f = PCFun([0.0, 1.0], [1.0], UNIT)
    E = ExactFun.from_pcfun(f).copson()
    x = np.array([0.01, 0.3, 0.9])
    assert np.allclose(E(x), np.log(1 / x), rtol=1e-13)
    g = PCFun([0.0, 0.25, 1.0], [0.0, 1.0], UNIT)
    assert ExactFun.from_pcfun(g).copson()(np.array([0.25]))[0] == pytest.approx(math.log(4), rel=1e-13)
    h = PCFun([0.0, 0.5, 1.0], [1.0, 0.0], UNIT)
    assert np.all(copson_fn(h).values[copson_fn(h).breakpoints[:-1] >= 0.5] == 0)


def test_majorant_fn_examples():
    x = np.linspace(0, 1, 9)
    f = PCFun(x, 0.5 * (x[:-1] + x[1:]), UNIT)
    assert np.all(majorant_fn(f).values == f.values[-1])
    g = PCFun([0.0, 0.5, 1.0], [2.0, 5.0], UNIT)
    assert list(majorant_fn(g).values) == [5.0, 5.0]


@given(pcfuns(HALF))
def test_majorant_idempotent_fn(f):
    m = majorant_fn(f)
    assert np.array_equal(majorant_fn(m).values, m.values)


def test_dilate_fn_examples():
    f = PCFun([0.0, 0.5, 1.0], [1.0, 0.0], UNIT)
    assert np.array_equal(dilate_fn(f, 1.0).values, f.values)
    g = dilate_fn(f, 2.0)
    assert norm_value(parse_space("Lp(1,[0,1])"), g) == pytest.approx(1.0)
    with pytest.raises(SpaceError):
        dilate_fn(f, 0.0)


@pytest.mark.parametrize("p,alpha,tau", [(1.0, 0.0, 2.0), (2.0, 0.3, 0.5), (3.0, -0.2, 3.0)])
def test_dilation_norm_scaling(p, alpha, tau):
    f = PCFun([0.5, 1.0, 2.0, 3.0], [1.0, 3.0, 2.0], HALF)
    X = parse_space(f"Lp({p:g},[0,inf),pow({alpha:g}))")
    ratio = norm_value(X, dilate_fn(f, tau)) / norm_value(X, f)
    assert ratio == pytest.approx(tau ** (1 / p + alpha), rel=1e-12)


def test_maximal_fn_examples():
    c = PCFun([0.0, 0.3, 1.0], [2.0, 2.0], UNIT)
    assert np.allclose(maximal_fn(c).values, 2.0)
    ind = PCFun(np.concatenate([[0.0], np.geomspace(1, 100, 41)]), np.r_[1.0, np.zeros(40)], HALF)
    M = maximal_fn(ind)
    x = M.breakpoints[:-1]
    assert np.all(M.values[x < 1] == pytest.approx(1.0))
    far = x > 2
    assert np.allclose(M.values[far] * 0.5 * (x[far] + M.breakpoints[1:][far]), 1.0, rtol=0.2)


@given(pcfuns(HALF))
def test_maximal_dominates(f):
    assert np.all(maximal_fn(f).values >= np.abs(f.values) * (1 - 1e-12))


def test_rearrange_examples():
    f = PCFun([0.0, 1.0, 2.0], [2.0, 5.0], HALF)
    r = rearrange_fn(f)
    assert list(r.values) == [5.0, 2.0]
    assert list(r.breakpoints) == [0.0, 1.0, 2.0]
    g = PCFun([0.0, 0.5, 1.0], [3.0, 1.0], UNIT)
    assert list(rearrange_fn(g).values) == [3.0, 1.0]


@given(pcfuns(HALF))
def test_rearrangement_preserves_integral(f):
    assert rearrange_fn(f).integral() == pytest.approx(f.integral(), rel=1e-12)


@given(pcfuns(HALF), pcfuns(HALF))
def test_rearrangement_half_argument(f, g):
    x = np.union1d(f.breakpoints, g.breakpoints)
    s = PCFun(x, f(0.5 * (x[:-1] + x[1:])) + g(0.5 * (x[:-1] + x[1:])), HALF)
    t = np.geomspace(1e-3, x[-1] - x[0], 30)
    lhs = rearrange_at(s, t)
    rhs = rearrange_at(f, t / 2) + rearrange_at(g, t / 2)
    assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)


# exact class -----------------------------------------------------------------

@given(pcfuns(HALF))
def test_cesaro_plus_copson_equals_copson_of_cesaro(f):
    E = ExactFun.from_pcfun(f)
    x = f.breakpoints[1:]
    lhs = (E.cesaro() + E.copson())(x)
    rhs = E.cesaro().copson()(x)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-12 * np.max(np.abs(rhs)))


@given(pcfuns(UNIT))
def test_copson_cesaro_unit_interval(f):
    E = ExactFun.from_pcfun(f)
    x = f.breakpoints[1:]
    lhs = E.cesaro().copson()(x)
    rhs = E.cesaro()(x) + E.copson()(x) - f.integral()
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.max(np.abs(E.cesaro()(x))))


@given(pcfuns(HALF))
def test_exact_class_matches_sampled_operators(f):
    # two routes for the L^2 norm of C f: exact log-polynomial integration and the fine sampled grid
    E = ExactFun.from_pcfun(f)
    end = float(f.breakpoints[-1])
    exact = E.cesaro().lp_norm(2.0, 0.0, hi=end)
    g = cesaro_fn(f.refined(64))
    mask = g.breakpoints[1:] <= end * (1 + 1e-12)
    sampled = math.sqrt(np.sum(g.values[mask] ** 2 * np.diff(g.breakpoints)[mask]))
    assert sampled == pytest.approx(exact, rel=1e-3)


def test_majorant_maximal_agree_on_decreasing():
    f = PCFun([0.0, 1.0, 2.0, 3.0], [3.0, 2.0, 1.0], HALF)
    assert np.array_equal(majorant_fn(f).values, f.values)
    assert np.array_equal(rearrange_fn(f).values, f.values)
