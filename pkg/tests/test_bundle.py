import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from ceslab.bundle import _simplex_qp, proximal_bundle


def _qp_instance(seed, m):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(m, 3))
    return G @ G.T, rng.exponential(size=m)


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(1, 9))
def test_simplex_qp_kkt(seed, m):
    Q, a = _qp_instance(seed, m)
    lam = _simplex_qp(Q, a)
    assert np.all(lam >= 0) and lam.sum() == pytest.approx(1.0, abs=1e-12)
    # optimality on the simplex: the gradient is smallest, and equal, on the support
    w = Q @ lam + a
    common = float(lam @ w)
    scale = max(np.max(np.abs(Q)), np.max(a))
    assert np.all(w >= common - 1e-8 * scale)
    assert np.all(np.abs(w[lam > 1e-9] - common) <= 1e-8 * scale)


@pytest.mark.parametrize("seed", range(5))
def test_simplex_qp_against_slsqp(seed):
    Q, a = _qp_instance(seed, 7)
    obj = lambda l: 0.5 * l @ Q @ l + a @ l
    lam = _simplex_qp(Q, a)
    ref = optimize.minimize(obj, np.full(7, 1 / 7), method="SLSQP", bounds=[(0, 1)] * 7,
                            constraints=[{"type": "eq", "fun": lambda l: l.sum() - 1}], options={"ftol": 1e-14})
    assert obj(lam) <= ref.fun + 1e-9


def test_simplex_qp_single_cut():
    assert list(_simplex_qp(np.ones((1, 1)), np.array([3.0]))) == [1.0]


def _l1_shifted(x):
    c = np.array([1.0, -0.5, 2.0])
    d = x - c
    return float(np.sum(np.abs(d) * [1.0, 2.0, 0.5])), np.sign(d) * [1.0, 2.0, 0.5]


def test_bundle_on_kinked_l1():
    r = proximal_bundle(_l1_shifted, np.zeros(3), tol=1e-12, maxiter=400)
    assert r.converged
    assert r.fun <= 1e-6
    assert np.allclose(r.x, [1.0, -0.5, 2.0], atol=1e-5)


def test_bundle_on_max_of_affine():
    rng = np.random.default_rng(3)
    A, b = rng.normal(size=(12, 2)), rng.normal(size=12)

    def fun(x):
        v = A @ x + b
        i = int(np.argmax(v))
        return float(v[i]), A[i]

    r = proximal_bundle(fun, np.zeros(2), tol=1e-12, maxiter=400)
    # the same minimax problem as a linear program
    lp = optimize.linprog([0, 0, 1], A_ub=np.c_[A, -np.ones(12)], b_ub=-b, bounds=[(None, None)] * 3)
    assert r.fun == pytest.approx(lp.fun, abs=1e-6)


def test_bundle_on_smooth_quadratic():
    fun = lambda x: (float(x @ x), 2 * x)
    r = proximal_bundle(fun, np.array([3.0, -4.0]))
    assert r.converged and r.fun < 1e-8


def test_bundle_infinite_start():
    r = proximal_bundle(lambda x: (math.inf, np.zeros_like(x)), np.zeros(2))
    assert not r.converged and r.iterations == 0
