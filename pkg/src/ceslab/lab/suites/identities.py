"""Exact operator identities: discrete shift factorisations, continuous
Cesàro/Copson composition rules, and elementary kernel facts."""
import math

import numpy as np

from ...kernels import (ExactFun, cesaro_fn, cesaro_seq, copson_seq, dilate_fn, dilate_seq, majorant_fn,
                        majorant_seq, maximal_fn, rearrange_fn, shift_seq)
from ...norms import norm_value
from ...spaces import HALF, UNIT, LpLeaf, PCFun, Seq, wpow
from ..core import case, witness_of

SUITE = "identities"


def residual(lhs, rhs) -> float:
    """Largest entrywise relative residual. Nodes where ``rhs`` vanishes to roundoff
    (below 1e-12 of its sup) carry no relative information; there the residual is
    taken against the sup instead."""
    lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    live = np.abs(rhs) > 1e-12 * scale
    den = np.where(live, np.abs(rhs), scale)
    return float(np.max(np.abs(lhs - rhs) / den))


def _worst(ctx, samples, fn):
    """Run ``fn(x) -> residual`` over sampled elements, keeping the worst one."""
    worst, wx = -1.0, None
    for x in samples:
        r = fn(x)
        if r > worst:
            worst, wx = r, x
    return worst, wx


def _nodes_half(f: PCFun, tmax: float) -> np.ndarray:
    x = f.breakpoints
    beyond = np.geomspace(x[-1], min(tmax, 1e3 * x[-1]), 17)[1:]
    return np.concatenate([x[x > 0], beyond])


@case(SUITE, "bennett.cesaro", "bennett-shift-factorisation")
def bennett_cesaro(ctx):
    # C_d a = C_d(C*_d a) - S*(C*_d a): C*_d a has the support of a, so every entry is exact
    def res(a):
        m = 4 * len(a)
        b = copson_seq(a, m)
        lhs = cesaro_seq(b, m).values - shift_seq(Seq(np.append(b.values, 0.0)), "backward").values[:m]
        return residual(lhs, cesaro_seq(a, m).values)
    w, a = _worst(ctx, (ctx.seq() for _ in range(ctx.cfg.samples)), res)
    return ctx.le(w, ctx.cfg.tol("identity"), rel=False, witness=witness_of(a))


@case(SUITE, "bennett.copson", "bennett-shift-factorisation")
def bennett_copson(ctx):
    # C*_d a = (C*_d - I) S C_d a. S C_d a has the infinite tail s/(k-1); the part of
    # sum_k c_{k-1}/k beyond k = M telescopes to s/M exactly.
    def res(a):
        M = 4 * len(a)
        c = cesaro_seq(a, M).values
        s = float(np.sum(a.values))
        Sc = np.concatenate([[0.0], c])[:M]           # (Sc)_k, k = 1..M
        k = np.arange(1, M + 1)
        tails = np.cumsum((Sc / k)[::-1])[::-1] + s / M
        lhs = tails - Sc
        return residual(lhs, copson_seq(a, M).values)
    w, a = _worst(ctx, (ctx.seq() for _ in range(ctx.cfg.samples)), res)
    return ctx.le(w, ctx.cfg.tol("identity"), rel=False, witness=witness_of(a))


@case(SUITE, "continuous.sum-half-line", "cesaro-copson-composition-half-line")
def composition_half(ctx):
    out = []

    def res_cstar_c(f):
        E = ExactFun.from_pcfun(f)
        t = _nodes_half(f, ctx.cfg.tmax)
        return residual((E.cesaro() + E.copson())(t), E.cesaro().copson()(t))

    def res_c_cstar(f):
        E = ExactFun.from_pcfun(f)
        t = _nodes_half(f, ctx.cfg.tmax)
        return residual((E.cesaro() + E.copson())(t), E.copson().cesaro()(t))

    fs = [ctx.fn_half() for _ in range(ctx.cfg.samples)]
    for suffix, fn in (("CstarC", res_cstar_c), ("CCstar", res_c_cstar)):
        w, f = _worst(ctx, fs, fn)
        out.append(ctx.le(w, ctx.cfg.tol("identity"), rel=False, witness=witness_of(f), suffix=suffix))
    return out


@case(SUITE, "continuous.unit-interval", "cesaro-copson-composition-unit")
def composition_unit(ctx):
    def res(f):
        E = ExactFun.from_pcfun(f)
        t = f.breakpoints[f.breakpoints > 0]
        t = np.concatenate([t, [1.0]]) if t[-1] < 1 else t
        total = E.integral()
        rhs = E.cesaro()(t) + E.copson()(t) - total
        return residual(E.cesaro().copson()(t), rhs)
    w, f = _worst(ctx, (ctx.fn_unit() for _ in range(ctx.cfg.samples)), res)
    return ctx.le(w, ctx.cfg.tol("identity"), rel=False, witness=witness_of(f))


@case(SUITE, "kernels.majorant-idempotent", "plumbing")
def majorant_idempotent(ctx):
    bad = 0
    for _ in range(ctx.cfg.samples):
        a = ctx.seq()
        m = majorant_seq(a)
        f = ctx.fn_half(cells=16)
        g = majorant_fn(f)
        bad += not np.array_equal(majorant_seq(m).values, m.values)
        bad += not np.array_equal(majorant_fn(g).values[-g.ncells:], g.values[-g.ncells:])
        bad += bool(np.any(m.values < np.abs(a.values)))
    return ctx.le(bad, 0, rel=False)


@case(SUITE, "kernels.rearrangement-measure", "plumbing")
def rearrangement_measure(ctx):
    worst = 0.0
    for _ in range(ctx.cfg.samples):
        f = ctx.fn_half(cells=32)
        r = rearrange_fn(f)
        worst = max(worst, abs(r.integral() / np.sum(np.abs(f.values) * f.widths) - 1))
        worst = max(worst, 0.0 if np.all(np.diff(r.values) <= 0) else 1.0)
    return ctx.le(worst, ctx.cfg.tol("exact"), rel=False)


@case(SUITE, "kernels.shift-adjoint", "plumbing")
def shift_adjoint(ctx):
    worst = 0.0
    for _ in range(ctx.cfg.samples):
        a = ctx.seq()
        b = Seq(ctx.rng.exponential(size=len(a) + 1))
        Sa = shift_seq(a, "forward").values
        lhs = float(np.dot(Sa, b.values[: len(Sa)]))
        rhs = float(np.dot(a.values, shift_seq(b, "backward").values[: len(a)]))
        back = shift_seq(shift_seq(a, "forward"), "backward").values
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300), float(np.max(np.abs(back - a.values))))
    return ctx.le(worst, ctx.cfg.tol("exact"), rel=False)


@case(SUITE, "kernels.dilation", "dilation-norms")
def dilation(ctx):
    out = []
    worst = 0.0
    for _ in range(ctx.cfg.samples):
        a = ctx.seq()
        m = int(ctx.rng.integers(1, 5))
        back = dilate_seq(dilate_seq(a, "up", m), "down", m).values
        worst = max(worst, float(np.max(np.abs(back[: len(a)] - a.values))))
    out.append(ctx.le(worst, ctx.cfg.tol("exact"), rel=False, suffix="down-up"))
    worst = 0.0
    for _ in range(ctx.cfg.samples):
        f = ctx.fn_half(cells=16)
        tau = float(np.exp(ctx.rng.uniform(-2, 2)))
        p = float(ctx.rng.choice([1.0, 1.5, 2.0, 4.0]))
        alpha = float(ctx.rng.uniform(-0.5, 0.5))
        X = LpLeaf(p, HALF, wpow(alpha))
        ratio = norm_value(X, dilate_fn(f, tau)) / norm_value(X, f)
        worst = max(worst, abs(ratio / tau ** (1 / p + alpha) - 1))
    out.append(ctx.le(worst, ctx.cfg.tol("identity"), rel=False, suffix="function-scaling"))
    return out


@case(SUITE, "kernels.maximal-dominates", "plumbing")
def maximal_dominates(ctx):
    bad = 0
    for _ in range(ctx.cfg.samples):
        f = ctx.fn_half(cells=24)
        M = maximal_fn(f)
        bad += int(np.sum(M.values < np.abs(f.values) * (1 - 1e-14)))
    return ctx.le(bad, 0, rel=False)


@case(SUITE, "kernels.cesaro-indicator", "plumbing")
def cesaro_indicator(ctx):
    # C of the indicator of [0,1] on the half-line: cell averages of min(1, 1/x)
    f = PCFun(np.array([0.0, 0.5, 1.0]), np.array([1.0, 1.0]), HALF)
    g = cesaro_fn(f, tmax=100.0)
    a, b = g.breakpoints[:-1], g.breakpoints[1:]
    exact = np.where(b <= 1, 1.0, np.log(b / np.maximum(a, 1e-300)) / (b - a))
    return ctx.le(residual(g.values, exact), ctx.cfg.tol("exact") * 100, rel=False)


@case(SUITE, "kernels.copson-log", "plumbing")
def copson_log(ctx):
    # C* of the indicator of [0,1] on [0,1] equals ln(1/x)
    E = ExactFun.from_pcfun(PCFun(np.array([0.0, 1.0]), np.array([1.0]), UNIT)).copson()
    t = np.geomspace(1e-6, 1.0, 50)
    return ctx.le(residual(E(t), np.log(1 / t)), ctx.cfg.tol("exact") * 100, rel=False)
