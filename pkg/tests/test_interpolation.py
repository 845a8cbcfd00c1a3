import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ceslab.interpolation import (check_S_bounded, cl_norm, k_exact_weightedL1, k_numeric, k_profile,
                                  real_interp_norm, real_method_constant)
from ceslab.kernels import ExactFun
from ceslab.norms import norm_value, sum_norm
from ceslab.spaces import HALF, UNIT, PCFun, PhiDesc, Seq, parse_space

from strategies import pcfuns, seqs

L1 = parse_space("Lp(1,[0,inf))")
L1S = parse_space("Lp(1,[0,inf),pow(-1))")
IND = PCFun([0.0, 1.0], [1.0], HALF)


@pytest.mark.parametrize("th", [0.2, 0.5, 0.8])
def test_cl_identical_factors(th):
    X = parse_space("Ces(lp(2))")
    a = Seq([3.0, 0.5, 2.0, 1.0])
    assert cl_norm(PhiDesc("pow", th), X, X, a).value == pytest.approx(norm_value(X, a), rel=1e-6)


@pytest.mark.parametrize("p0,p1,th", [(1, 2, 0.5), (1.5, 4, 0.3), (2, 8, 0.75), (1, 8, 0.5)])
def test_cl_power_lp_closed_form(p0, p1, th, rng):
    p = 1 / ((1 - th) / p0 + th / p1)
    for _ in range(5):
        a = Seq(rng.exponential(size=int(rng.integers(1, 9))))
        got = cl_norm(PhiDesc("pow", th), parse_space(f"lp({p0:g})"), parse_space(f"lp({p1:g})"), a).value
        assert got == pytest.approx(norm_value(parse_space(f"lp({p:.15g})"), a), rel=1e-4)


def test_cl_min_is_max_of_norms():
    a = Seq([1.0, 2.0, 0.5])
    X, Y = parse_space("lp(1)"), parse_space("lp(3)")
    assert cl_norm(PhiDesc("min"), X, Y, a).value == pytest.approx(max(norm_value(X, a), norm_value(Y, a)))


def test_cl_sum_below_min_of_norms():
    a = Seq([1.0, 2.0, 0.5])
    X, Y = parse_space("lp(1)"), parse_space("lp(3)")
    v = cl_norm(PhiDesc("sum"), X, Y, a).value
    assert v <= min(norm_value(X, a), norm_value(Y, a)) * (1 + 1e-6)
    assert v >= 0.5 * sum_norm(X, Y, a).value * (1 - 1e-6)


@settings(max_examples=15)
@given(seqs(max_size=6), st.sampled_from([0.25, 0.5, 0.75]))
def test_cesaro_embedding(a, th):
    # ||a||_{C[phi(X0,X1)]} <= ||a||_{phi(C X0, C X1)}
    phi = PhiDesc("pow", th)
    inner = norm_value(parse_space(f"Ces(CL(pow({th:g}),lp(2),lp(4)))"), a)
    outer = cl_norm(phi, parse_space("Ces(lp(2))"), parse_space("Ces(lp(4))"), a).value
    assert inner <= outer * (1 + 1e-4)


@settings(max_examples=15)
@given(seqs(max_size=6))
def test_cl_weight_homogeneity(a):
    phi = PhiDesc("pow", 0.4)
    w = np.arange(1, len(a.values) + 1, dtype=float) ** 0.5
    left = cl_norm(phi, parse_space("lp(2,pow(0.5))"), parse_space("lp(3,pow(0.5))"), a).value
    right = cl_norm(phi, parse_space("lp(2)"), parse_space("lp(3)"), Seq(np.asarray(a.values) * w)).value
    assert left == pytest.approx(right, rel=1e-4)


def test_k_exact_indicator():
    for t in (0.01, 0.3, 1.0):
        assert k_exact_weightedL1(t, IND, L1.weight, L1S.weight) == pytest.approx(t + t * math.log(1 / t), rel=1e-12)
    for t in (1.0, 4.0, 100.0):
        assert k_exact_weightedL1(t, IND, L1.weight, L1S.weight) == pytest.approx(1.0, rel=1e-12)


@given(pcfuns(HALF))
def test_k_exact_is_t_times_cesaro_plus_copson(f):
    E = ExactFun.from_pcfun(f)
    for t in f.breakpoints[1:]:
        want = t * (E.cesaro() + E.copson())(np.array([t]))[0]
        assert k_exact_weightedL1(float(t), f, L1.weight, L1S.weight) == pytest.approx(want, rel=1e-9)


def test_k_exact_equal_weights():
    f = PCFun([0.5, 1.0, 3.0], [2.0, 1.0], HALF)
    for t in (0.2, 1.0, 5.0):
        assert k_exact_weightedL1(t, f, L1.weight, L1.weight) == pytest.approx(min(1, t) * norm_value(L1, f))


@settings(max_examples=10)
@given(pcfuns(HALF, max_cells=6), st.floats(-2, 2))
def test_k_numeric_matches_exact(f, logt):
    # the discrete problem keeps cells whole, the exact formula splits them at s = t:
    # they coincide once t is a grid node
    t = 10.0 ** logt
    x = np.union1d(f.breakpoints, [t]) if f.breakpoints[0] < t < f.breakpoints[-1] else f.breakpoints
    f = PCFun(x, f(0.5 * (x[:-1] + x[1:])), HALF)
    num = k_numeric(t, f, L1, L1S).value
    ex = k_exact_weightedL1(t, f, L1.weight, L1S.weight)
    assert num == pytest.approx(ex, rel=1e-5)


def test_k_numeric_at_one_is_sum_norm():
    f = PCFun([0.0, 0.3, 1.0], [2.0, 1.0], UNIT)
    X, Y = parse_space("Lp(1,[0,1])"), parse_space("Lp(2,[0,1])")
    assert k_numeric(1.0, f, X, Y).value == pytest.approx(sum_norm(X, Y, f).value, rel=1e-9)


def test_k_numeric_identical_couple():
    X = parse_space("Ces(Lp(2,[0,inf)))")
    f = PCFun([0.1, 1.0, 2.0], [1.0, 3.0], HALF)
    for t in (0.1, 1.0, 7.0):
        assert k_numeric(t, f, X, X).value == pytest.approx(min(1.0, t) * norm_value(X, f), rel=1e-4)


def test_k_profile_indicator_and_invariants():
    prof = k_profile(IND, L1, L1S, points=33)
    want = np.where(prof.t <= 1, prof.t + prof.t * np.log(1 / np.minimum(prof.t, 1)), 1.0)
    assert np.allclose(prof.k, want, rtol=1e-12)
    assert prof.exact
    assert prof.is_monotone(0.0) and prof.is_concave(1e-12) and prof.k_over_t_nonincreasing(0.0)


def test_k_profile_identical_couple():
    X = parse_space("Lp(2,[0,inf))")
    f = PCFun([0.5, 2.0], [3.0], HALF)
    prof = k_profile(f, X, X, points=9)
    assert np.allclose(prof.k, np.minimum(1, prof.t) * norm_value(X, f), rtol=1e-4)


@given(pcfuns(HALF))
def test_k_profile_invariants_exact_path(f):
    prof = k_profile(f, L1, L1S, points=24)
    assert prof.is_monotone(0.0) and prof.k_over_t_nonincreasing(0.0) and prof.is_concave(1e-12)


def test_k_profile_tail_fit_and_csv(tmp_path):
    prof = k_profile(IND, L1, L1S, points=24)
    assert set(prof.tail_slopes) >= {"low", "high"}
    path = tmp_path / "k.csv"
    prof.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,K" and len(lines) == 25


@pytest.mark.parametrize("th,q", [(0.3, 2.0), (0.5, 1.0), (0.7, math.inf)])
def test_real_identical_couple(th, q):
    f = PCFun([0.2, 1.0, 3.0], [1.0, 2.0], HALF)
    v = real_interp_norm(f, L1, L1, th, q).value
    assert v == pytest.approx(real_method_constant(th, q) * norm_value(L1, f), rel=1e-9)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_real_method_gives_cesaro_plus_copson(p):
    f = PCFun([0.0, 0.3, 1.0, 5.0], [2.0, 0.5, 1.0], HALF)
    E = ExactFun.from_pcfun(f)
    want = (E.cesaro() + E.copson()).lp_norm(p)
    assert real_interp_norm(f, L1, L1S, 1 - 1 / p, p).value == pytest.approx(want, rel=1e-9)


def test_s_operator():
    f = PCFun([1.0, math.e], [1.0], HALF)
    X = parse_space("W(Lp(2,[0,inf)),invt)")
    r = check_S_bounded(f, X)
    assert 0 < r <= 4.0
    assert check_S_bounded(f.refined(2), X) == pytest.approx(r, rel=1e-3)
    assert check_S_bounded(PCFun([1.0, 2.0], [0.0], HALF), X) == 0.0
