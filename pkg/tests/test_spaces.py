import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceslab.norms import norm_value
from ceslab.spaces import (HALF, UNIT, Ces, LpLeaf, ParseError, PCFun, Seq, SpaceError, Tan, Weight,
                           oneminus, parse_space, read_element, recip, refine_grid, render, validate_element,
                           write_pcfun_csv, wpow)

from strategies import descriptors, leaf_half, leaf_seq, pcfuns, seqs


def test_parse_cesaro_over_lp():
    d = parse_space("Ces(Lp(2,[0,inf)))")
    assert isinstance(d, Ces)
    assert isinstance(d.child, LpLeaf)
    assert d.child.p == 2.0 and d.child.domain == HALF and d.child.weight.is_one


def test_parse_tandori_over_weighted_lp():
    d = parse_space("Tan(lp(4,recip(one)))")
    assert isinstance(d, Tan)
    assert d.child.p == 4.0


def test_parse_whitespace_insensitive():
    assert parse_space(" Ces ( Lp( 2 , [0, inf) ) ) ") == parse_space("Ces(Lp(2,[0,inf)))")


@pytest.mark.parametrize("text", ["Ces(lp(0.5))", "Lp(-1,[0,1])", "RealK(lp(1),lp(2),1.5,2)",
                                  "RealK(lp(1),lp(2),0.5,0.5)"])
def test_parse_out_of_range(text):
    with pytest.raises(SpaceError):
        parse_space(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_space("Ces(Lp(2,[0,inf))")
    assert "position" in str(exc.value) or "col" in str(exc.value) or any(ch.isdigit() for ch in str(exc.value))


def test_mixed_measure_spaces_rejected():
    with pytest.raises(SpaceError):
        parse_space("Sum(lp(2),Lp(2,[0,1]))")
    with pytest.raises(SpaceError):
        parse_space("Cap(Lp(2,[0,1]),Lp(2,[0,inf)))")


def test_oneminus_only_on_unit_interval():
    parse_space("Lp(2,[0,1],oneminus)")
    with pytest.raises(SpaceError):
        parse_space("Lp(2,[0,inf),oneminus)")


@given(descriptors(leaf_seq))
def test_render_roundtrip_sequences(text):
    d = parse_space(text)
    assert parse_space(render(d)) == d


@given(descriptors(leaf_half))
def test_render_roundtrip_functions(text):
    d = parse_space(text)
    assert parse_space(render(d)) == d


def test_validate_element():
    validate_element(parse_space("lp(2)"), Seq([1, 2]))
    with pytest.raises(SpaceError):
        validate_element(parse_space("Lp(2,[0,1])"), Seq([1, 2]))
    with pytest.raises(SpaceError):
        validate_element(parse_space("Lp(2,[0,1])"), PCFun([1e-3, 1.0, 10.0], [1.0, 2.0], HALF))


def test_pcfun_invariants():
    with pytest.raises(SpaceError):
        PCFun([0.0, 0.5, 0.5, 1.0], [1, 2, 3], UNIT)
    with pytest.raises(SpaceError):
        PCFun([0.0, 1.0], [np.nan], UNIT)
    with pytest.raises(SpaceError):
        Seq([1.0, np.inf])


def test_indicator_and_integral():
    f = PCFun.indicator(0.25, 0.75, UNIT)
    assert f.integral() == pytest.approx(0.5)


def test_weight_recip_involution():
    for w in (Weight("one"), wpow(0.3), oneminus(), oneminus(0.5)):
        a, b = np.array([0.1, 0.4]), np.array([0.4, 0.9])
        assert np.allclose(recip(recip(w)).cell_mean(a, b), w.cell_mean(a, b), rtol=1e-12)
    w = wpow(-0.7)
    assert np.array_equal(recip(recip(w)).seq_values(6), w.seq_values(6))


@given(seqs(), st.integers(0, 10))
def test_zero_padding_exact(a, extra):
    padded = Seq(list(a.values) + [0.0] * extra)
    for text in ("lp(2)", "Ces(lp(3))", "Cop(lp(1.5))", "Tan(lp(2))", "Ces(Tan(lp(4)))"):
        X = parse_space(text)
        assert norm_value(X, padded) == norm_value(X, a)


@given(pcfuns(HALF))
def test_grid_refinement_stable(f):
    # the quadrature tolerance is declared for fine grids: start from cells of ratio about 1.05
    f = f.refined(256)
    g = f.refined(2)
    for text in ("Lp(2,[0,inf))", "Ces(Lp(2,[0,inf)))", "Cop(Lp(3,[0,inf)))", "Tan(Lp(1,[0,inf)))"):
        X = parse_space(text)
        a, b = norm_value(X, f), norm_value(X, g)
        assert b == pytest.approx(a, rel=1e-3)


def test_refine_grid_geometric():
    x = refine_grid(np.array([0.0, 1.0, 4.0]), 2)
    assert np.allclose(x, [0.0, 0.5, 1.0, 2.0, 4.0])


def test_csv_roundtrip(tmp_path):
    f = PCFun([0.0, 0.25, 1.0], [2.0, 3.0], UNIT)
    path = tmp_path / "f.csv"
    write_pcfun_csv(path, f)
    g = read_element(path, parse_space("Lp(2,[0,1])"))
    assert np.array_equal(g.breakpoints, f.breakpoints)
    assert np.array_equal(g.values, f.values)
    with pytest.raises(SpaceError):
        read_element(path, parse_space("lp(2)"))
    s = tmp_path / "s.csv"
    s.write_text("a\n3\n4\n")
    assert list(read_element(s, parse_space("lp(2)")).values) == [3.0, 4.0]
