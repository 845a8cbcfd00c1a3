import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceslab.duality import conj_exponent, conjugate, conjugate_phi, dual_norm_oracle, dual_space
from ceslab.norms import norm_value
from ceslab.spaces import PhiDesc, Seq, SpaceError, parse_space, render

pos = st.floats(1e-3, 1e3)


def test_conj_exponent():
    assert conj_exponent(1) == math.inf
    assert conj_exponent(2) == 2
    assert conj_exponent(math.inf) == 1
    assert conj_exponent(3) == pytest.approx(1.5)


@pytest.mark.parametrize("src,dst", [
    ("lp(3,pow(0.5))", "lp(1.5,recip(pow(0.5)))"),
    ("Ces(lp(3))", "Tan(lp(1.5))"),
    ("Ces(Lp(3,[0,1]))", "Tan(W(Lp(1.5,[0,1]),recip(oneminus)))"),
    ("Ces(Lp(2,[0,inf)))", "Tan(Lp(2,[0,inf)))"),
    ("Sum(lp(2),lp(3))", "Cap(lp(2),lp(1.5))"),
])
def test_dual_space_rules(src, dst):
    assert dual_space(parse_space(src)).result == parse_space(dst)


def test_dual_space_trace_and_exactness():
    tr = dual_space(parse_space("lp(3)"))
    assert tr.exact and [r[0] for r in tr.rules] == ["leaf"]
    tr = dual_space(parse_space("Ces(lp(3))"))
    assert not tr.exact
    assert render(tr.result) in tr.render()
    # replaying the trace is deterministic
    assert dual_space(parse_space("Ces(lp(3))")).render() == tr.render()


def test_dual_space_errors():
    with pytest.raises(SpaceError):
        dual_space(parse_space("Tan(Lp(2,[0,1]))"))
    with pytest.raises(SpaceError):
        dual_space(parse_space("CL(max,lp(2),lp(3))"))


@pytest.mark.parametrize("text", ["lp(2)", "lp(3,pow(0.5))", "Lp(4,[0,1],oneminus)", "Lp(1.5,[0,inf),invt)"])
def test_leaf_duality_involution(text):
    X = parse_space(text)
    assert dual_space(dual_space(X).result).result == X


@pytest.mark.parametrize("p", [2.0, 3.0, 1.5])
def test_leaf_duality_numerically_involutive(p, rng):
    X = parse_space(f"lp({p:g},pow(0.3))")
    XX = dual_space(dual_space(X).result).result
    for _ in range(5):
        a = Seq(rng.exponential(size=6))
        assert norm_value(XX, a) == pytest.approx(norm_value(X, a), rel=1e-12)


def test_oracle_self_dual():
    r = dual_norm_oracle(parse_space("lp(2)"), Seq([3.0, 4.0]))
    assert r.value == pytest.approx(5.0, rel=1e-6)


@pytest.mark.parametrize("text", ["lp(3)", "lp(1.5,pow(0.4))", "lp(4,pow(-0.5))"])
def test_oracle_matches_weighted_holder(text, rng):
    X = parse_space(text)
    for _ in range(3):
        f = Seq(rng.exponential(size=int(rng.integers(2, 16))))
        r = dual_norm_oracle(X, f)
        closed = norm_value(dual_space(X).result, f)
        assert r.value == pytest.approx(closed, rel=1e-6)
        assert r.holder == pytest.approx(closed, rel=1e-12)


def test_oracle_cesaro_unit_vector_bracketed():
    f = Seq([1.0] + [0.0] * 7)
    r = dual_norm_oracle(parse_space("Ces(lp(2))"), f)
    tan = norm_value(parse_space("Tan(lp(2))"), f)
    assert 0.1 < r.value / tan < 10


@given(st.sampled_from(["lp(2)", "lp(3)", "lp(1.5,pow(0.2))"]), st.lists(pos, min_size=1, max_size=6),
       st.lists(pos, min_size=1, max_size=6))
def test_holder_rogers(text, a, b):
    n = min(len(a), len(b))
    f, g = Seq(a[:n]), Seq(b[:n])
    X = parse_space(text)
    Xd = dual_space(X).result
    pair = float(np.dot(a[:n], b[:n]))
    assert pair <= norm_value(X, f) * norm_value(Xd, g) * (1 + 1e-12)


def test_conjugate_closed_forms():
    assert conjugate_phi(PhiDesc("min"), 2.0, 3.0) == 5.0
    assert conjugate_phi(PhiDesc("sum"), 2.0, 3.0) == 2.0
    assert conjugate_phi(PhiDesc("pow", 0.5), 2.0, 3.0) == pytest.approx(2 * math.sqrt(6), rel=1e-12)


@pytest.mark.parametrize("kind", ["min", "sum", "pow"])
def test_conjugate_numeric_matches_closed(kind, rng):
    phi = PhiDesc(kind, 0.3 if kind == "pow" else None)
    for s, t in rng.uniform(0.01, 10, size=(20, 2)):
        assert conjugate_phi(phi, s, t, closed_form=False) == pytest.approx(conjugate_phi(phi, s, t), rel=1e-6)


@given(pos, pos)
def test_pow_half_conjugate(s, t):
    assert conjugate_phi(PhiDesc("pow", 0.5), s, t, closed_form=False) == pytest.approx(2 * math.sqrt(s * t), rel=1e-6)


@pytest.mark.parametrize("phi", [PhiDesc("pow", 0.25), PhiDesc("pow", 0.5), PhiDesc("min"), PhiDesc("sum")])
def test_conjugate_involution(phi, rng):
    twice = conjugate(conjugate(phi))
    for s, t in rng.uniform(0.01, 10, size=(25, 2)):
        assert twice(s, t) == pytest.approx(float(phi(s, t)), rel=1e-6)


def test_conjugate_of_max_is_not_involutive():
    # max is outside the concave class: its conjugate is min(s, t), whose conjugate is s + t
    twice = conjugate(conjugate(PhiDesc("max")))
    assert twice(2.0, 3.0) == pytest.approx(5.0, rel=1e-6)


@given(pos, pos, st.floats(0.01, 100))
def test_conjugate_homogeneous(s, t, lam):
    phi = PhiDesc("pow", 0.7)
    assert conjugate_phi(phi, lam * s, lam * t) == pytest.approx(lam * conjugate_phi(phi, s, t), rel=1e-9)


def test_conjugate_boundaries():
    phi = PhiDesc("pow", 0.5)
    assert conjugate_phi(phi, 0.0, 3.0) == 0.0
    assert conjugate_phi(PhiDesc("min"), 0.0, 3.0) == 3.0
