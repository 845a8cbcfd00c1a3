import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from ceslab.kernels import rearrange_fn
from ceslab.norms import EvalConfig, lp_tail, norm, norm_value, sum_norm
from ceslab.spaces import HALF, UNIT, PCFun, Seq, SpaceError, parse_space

from strategies import pcfuns, seqs

SEQ_SPACES = ["lp(2)", "lp(1,pow(0.5))", "lp(inf)", "Ces(lp(2))", "Cop(lp(3))", "Tan(lp(1.5))",
              "W(Ces(lp(4)),pow(-0.3))", "Cap(lp(1),Ces(lp(2)))", "Ces(Tan(lp(2)))"]
FN_SPACES = ["Lp(2,[0,inf))", "Lp(inf,[0,inf))", "Ces(Lp(3,[0,inf)))", "Cop(Lp(2,[0,inf)))",
             "Tan(Lp(1.5,[0,inf)))", "W(Lp(2,[0,inf)),invt)", "Ces(Tan(Lp(2,[0,inf))))"]


@pytest.mark.parametrize("p", ["1", "2", "3.5", "inf"])
def test_indicator_unit_norm(p):
    f = PCFun.indicator(0.0, 1.0, UNIT)
    assert norm_value(parse_space(f"Lp({p},[0,1])"), f) == pytest.approx(1.0, rel=1e-14)


def test_lp_of_seq():
    assert norm_value(parse_space("lp(2)"), Seq([3, 4])) == pytest.approx(5.0)
    assert norm_value(parse_space("lp(inf)"), Seq([3, -7, 4])) == 7.0


def _f_alpha(alpha, cells=2 ** 12):
    x = np.concatenate([[0.0], np.geomspace(alpha, 1.0, cells + 1)])
    return PCFun.from_antiderivative(lambda t: np.log(np.maximum(t, alpha)), x, UNIT)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_f_alpha_cesaro_l1(k):
    alpha = math.exp(-k)
    f = _f_alpha(alpha)
    assert norm_value(parse_space("Lp(1,[0,1])"), f) == pytest.approx(k, rel=1e-12)
    assert norm_value(parse_space("Ces(Lp(1,[0,1]))"), f) == pytest.approx(0.5 * k ** 2, rel=1e-3)


@pytest.mark.parametrize("k", [1, 2])
def test_f_alpha_iterated_cesaro_l1(k):
    # the kernel of CC on L^1[0,1] is ln^2(1/t)/2, which gives ln^3(1/alpha)/6
    f = _f_alpha(math.exp(-k))
    assert norm_value(parse_space("Ces(Ces(Lp(1,[0,1])))"), f) == pytest.approx(k ** 3 / 6, rel=1e-3)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_unit_vector_in_ces_p(p):
    v = norm(parse_space(f"Ces(lp({p:g}))"), Seq([1.0]))
    assert v.value == pytest.approx(float(special.zeta(p)) ** (1 / p), rel=1e-12)


def test_ces_l1_sequence_diverges():
    r = norm(parse_space("Ces(lp(1))"), Seq([1.0, 2.0]))
    assert r.divergent and math.isinf(r.value)


def test_lp_tail_examples():
    N = 1000
    t = lp_tail(2.0, Seq(np.zeros(N)), 1.0)
    assert 1 / 1001 <= t.tail <= 1 / 1000
    assert t.lower <= t.tail <= t.upper
    assert lp_tail(2.0, Seq([1.0, 2.0]), 0.0).tail == 0.0
    assert lp_tail(1.0, Seq([1.0]), 1.0).divergent


def test_sum_of_identical_children():
    f = PCFun([0.1, 0.5, 2.0, 5.0], [3.0, 1.0, 0.5], HALF)
    X = parse_space("Ces(Lp(2,[0,inf)))")
    r = sum_norm(X, X, f)
    assert r.value == pytest.approx(norm_value(X, f), rel=1e-4)


@given(pcfuns(UNIT, max_cells=6))
def test_l1_plus_linf_is_rearrangement_integral(f):
    # two routes: the decomposition solver and the integral of f* over [0,1]
    r = sum_norm(parse_space("Lp(1,[0,1])"), parse_space("Lp(inf,[0,1])"), f)
    fs = rearrange_fn(f)
    assert r.value == pytest.approx(fs.integral(), rel=1e-4)


def test_sum_is_upper_bound_with_decomposition():
    f = PCFun([0.0, 0.2, 0.6, 1.0], [5.0, 1.0, 2.0], UNIT)
    r = sum_norm(parse_space("Lp(1,[0,1])"), parse_space("Lp(2,[0,1])"), f)
    d = r.decomposition
    assert np.all(d.g >= -1e-15) and np.all(d.g <= np.abs(f.values) + 1e-15)
    assert r.value == pytest.approx(d.left + d.right, rel=1e-12)


@pytest.mark.parametrize("text", SEQ_SPACES)
def test_norm_axioms_sequences(text, rng):
    X = parse_space(text)
    for _ in range(20):
        n = int(rng.integers(1, 10))
        a = Seq(rng.exponential(size=n) * (rng.random(n) < 0.8))
        b = Seq(rng.exponential(size=n))
        if not np.any(a.values):
            continue
        lam = float(rng.uniform(0.1, 10))
        na = norm_value(X, a)
        assert norm_value(X, Seq(lam * np.asarray(a.values))) == pytest.approx(lam * na, rel=1e-12)
        s = Seq(np.asarray(a.values) + np.asarray(b.values))
        assert norm_value(X, s) <= (na + norm_value(X, b)) * (1 + 1e-4)
        big = Seq(np.asarray(a.values) * (1 + rng.random(n)))
        assert na <= norm_value(X, big) * (1 + 1e-12)


@pytest.mark.parametrize("text", FN_SPACES)
def test_norm_axioms_functions(text, rng):
    X = parse_space(text)
    x = np.concatenate([[0.0], np.geomspace(1e-2, 1e2, 9)])
    for _ in range(10):
        a = PCFun(x, rng.exponential(size=9), HALF)
        b = PCFun(x, rng.exponential(size=9), HALF)
        lam = float(rng.uniform(0.1, 10))
        na = norm_value(X, a)
        assert norm_value(X, a.with_values(lam * a.values)) == pytest.approx(lam * na, rel=1e-12)
        assert norm_value(X, a.with_values(a.values + b.values)) <= (na + norm_value(X, b)) * (1 + 1e-4)
        assert na <= norm_value(X, a.with_values(a.values * (1 + rng.random(9)))) * (1 + 1e-12)


@given(seqs())
def test_tandori_dominates(a):
    for text in ("lp(1)", "lp(2)", "Ces(lp(3))"):
        assert norm_value(parse_space(f"Tan({text})"), a) >= norm_value(parse_space(text), a) * (1 - 1e-12)


@given(seqs())
def test_cesaro_of_intersection(a):
    left = norm_value(parse_space("Ces(Cap(lp(2),lp(4)))"), a)
    right = norm_value(parse_space("Cap(Ces(lp(2)),Ces(lp(4)))"), a)
    assert left == pytest.approx(right, rel=1e-12)


@given(pcfuns(HALF))
def test_cesaro_copson_two_sided(f):
    # ||Cf|| <= ||Cf + C*f|| = ||C* C f|| <= p ||Cf|| on L^p
    from ceslab.kernels import ExactFun
    E = ExactFun.from_pcfun(f)
    p = 2.0
    c = E.cesaro().lp_norm(p)
    s = (E.cesaro() + E.copson()).lp_norm(p)
    assert c <= s * (1 + 1e-12)
    assert s <= p * c * (1 + 1e-9)


def test_error_bound_and_iterations():
    f = PCFun([0.0, 0.5, 1.0], [1.0, 2.0], UNIT)
    r = norm(parse_space("Lp(2,[0,1])"), f)
    assert r.iterations == 0 and r.error_bound <= 1e-12
    r = norm(parse_space("Sum(Lp(1,[0,1]),Lp(2,[0,1]))"), f)
    assert r.iterations > 0


def test_mismatch_errors():
    with pytest.raises(SpaceError):
        norm(parse_space("lp(2)"), PCFun([0.0, 1.0], [1.0], UNIT))
    with pytest.raises(SpaceError):
        norm(parse_space("Lp(2,[0,1])"), PCFun([0.1, 1.0], [1.0], HALF))


def test_refine_config_changes_little():
    f = PCFun(np.concatenate([[0.0], np.geomspace(0.01, 1, 33)]), np.linspace(1, 3, 33), UNIT)
    X = parse_space("Ces(Lp(2,[0,1]))")
    a = norm_value(X, f, EvalConfig(refine=2))
    b = norm_value(X, f, EvalConfig(refine=8))
    assert a == pytest.approx(b, rel=1e-3)
