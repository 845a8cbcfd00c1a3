"""K-functionals and the real method: exact weighted-L^1 couples against the
numeric splitter, the Cesàro identification, reiteration envelopes, the operator S."""
import math

import numpy as np

from ...interpolation import (check_S_bounded, k_exact_weightedL1, k_numeric, k_profile,
                              real_interp_norm, real_method_constant, s_direct, s_operator)
from ...kernels import ExactFun, majorant_fn
from ...norms import EvalConfig, norm_value
from ...spaces import HALF, PCFun, parse_space
from ..core import case, witness_of

SUITE = "realmethod"

L1 = parse_space("Lp(1,[0,inf))")
L1S = parse_space("Lp(1,[0,inf),pow(-1))")

# envelopes compare ratios across many samples; two starts per split keep them affordable
LIGHT = EvalConfig(multistart=2, polish=20)


def _sample_t(ctx, f, count=16):
    # crossovers of (1, 1/s) sit at s = t, so grid nodes are where K changes form
    nodes = f.breakpoints[f.breakpoints > 0]
    idx = np.sort(ctx.rng.choice(nodes.size, size=min(count, nodes.size), replace=False))
    return nodes[idx]


@case(SUITE, "kfunctional.oracle", "k-functional-weighted-l1")
def k_oracle(ctx):
    worst, wit = 0.0, None
    count = max(20, ctx.cfg.samples // 5)
    for _ in range(count):
        f = ctx.fn_half(cells=16)
        for t in _sample_t(ctx, f):
            num = k_numeric(float(t), f, L1, L1S).value
            ex = k_exact_weightedL1(float(t), f, L1.weight, L1S.weight)
            err = abs(num / ex - 1)
            if err > worst:
                worst, wit = err, {"t": float(t), "f": witness_of(f)}
    return ctx.le(worst, 1e-5, rel=False, witness=wit, detail={"functions": count, "tPerFunction": 16})


@case(SUITE, "kfunctional.closed-form", "k-functional-weighted-l1")
def k_closed_form(ctx):
    # indicator of [0,1]: K(t) = t + t ln(1/t) for t <= 1 and 1 beyond
    f = PCFun([0.0, 1.0], [1.0], HALF)
    out = []
    ts = np.geomspace(1e-3, 1e3, 25)
    want = np.where(ts <= 1, ts + ts * np.log(1 / np.minimum(ts, 1)), 1.0)
    got = np.array([k_exact_weightedL1(float(t), f, L1.weight, L1S.weight) for t in ts])
    out.append(ctx.le(float(np.max(np.abs(got / want - 1))), ctx.cfg.tol("identity"), rel=False, suffix="indicator"))
    # the same values as t (C f + C* f)(t), computed through the exact operator class
    g = ExactFun.from_pcfun(f)
    route = ts * (g.cesaro() + g.copson())(ts)
    out.append(ctx.le(float(np.max(np.abs(got / route - 1))), ctx.cfg.tol("identity"), rel=False,
                      suffix="cesaro-plus-copson"))
    return out


def _profile_checks(prof) -> list[bool]:
    # monotonicity checks are exact; chords carry roundoff, hence the 1e-12 slack
    return [prof.is_monotone(0.0), prof.is_concave(1e-12), prof.k_over_t_nonincreasing(0.0)]


@case(SUITE, "kprofile.invariants", "k-functional-calculus")
def k_profile_invariants(ctx):
    out = []
    bad = []
    for _ in range(max(20, ctx.cfg.samples // 5)):
        f = ctx.fn_half(cells=16)
        if not all(_profile_checks(k_profile(f, L1, L1S))):
            bad.append(witness_of(f))
    out.append(ctx.make("pass" if not bad else "fail", len(bad), 0, 0, bad[:1] or None, suffix="exact"))
    A, B = parse_space("Ces(Lp(2,[0,inf)))"), parse_space("Lp(4,[0,inf))")
    bad = []
    for _ in range(max(3, ctx.cfg.samples // 25)):
        f = ctx.fn_half(cells=8)
        if not all(_profile_checks(k_profile(f, A, B, points=16))):
            bad.append(witness_of(f))
    out.append(ctx.make("pass" if not bad else "fail", len(bad), 0, 0, bad[:1] or None, suffix="numeric"))
    return out


@case(SUITE, "kfunctional.identical-couple", "plumbing")
def k_identical(ctx):
    X = parse_space("Ces(Lp(2,[0,inf)))")
    worst = 0.0
    for _ in range(max(5, ctx.cfg.samples // 20)):
        f = ctx.fn_half(cells=8)
        nx = norm_value(X, f)
        for t in (0.1, 1.0, 7.0):
            worst = max(worst, abs(k_numeric(t, f, X, X).value / (min(1.0, t) * nx) - 1))
    return ctx.le(worst, ctx.cfg.tol("solver"), rel=False)


@case(SUITE, "real.identical-couple-constant", "plumbing")
def real_identical(ctx):
    worst = 0.0
    for th, q in ((0.3, 2.0), (0.5, 1.0), (0.7, 3.0)):
        f = ctx.fn_half(cells=12)
        val = real_interp_norm(f, L1, L1, th, q).value
        worst = max(worst, abs(val / (real_method_constant(th, q) * norm_value(L1, f)) - 1))
    return ctx.le(worst, ctx.cfg.tol("identity"), rel=False)


@case(SUITE, "real.weighted-l1-identity", "cesaro-as-real-method")
def real_identity(ctx):
    # theta = 1 - 1/p, q = p turns the K-norm into ||C f + C* f||_p; the right side comes from the exact class
    out = []
    for p in (1.5, 2.0, 3.0):
        worst, wit = 0.0, None
        for _ in range(max(4, ctx.cfg.samples // 25)):
            f = ctx.fn_half(cells=10)
            lhs = real_interp_norm(f, L1, L1S, 1 - 1 / p, p).value
            E = ExactFun.from_pcfun(f)
            rhs = (E.cesaro() + E.copson()).lp_norm(p, 0.0)
            err = abs(lhs / rhs - 1)
            if err > worst:
                worst, wit = err, witness_of(f)
        out.append(ctx.le(worst, ctx.cfg.tol("identity"), rel=False, witness=wit, suffix=f"p{p:g}"))
    return out


@case(SUITE, "real.cesaro-envelope", "cesaro-as-real-method")
def real_cesaro_envelope(ctx):
    p = 2.0
    Y = parse_space(f"Ces(Lp({p:g},[0,inf)))")
    r, rr = [], []
    for _ in range(max(50, ctx.cfg.samples // 2)):
        f = ctx.fn_half(cells=6)
        g = f.refined(2)
        r.append(real_interp_norm(f, L1, L1S, 1 - 1 / p, p, cfg=LIGHT).value / norm_value(Y, f))
        rr.append(real_interp_norm(g, L1, L1S, 1 - 1 / p, p, cfg=LIGHT).value / norm_value(Y, g))
    c = ctx.envelope(r, rr, suffix=f"p{p:g}")
    c.detail["p"] = p
    return c


@case(SUITE, "real.weighted-cesaro-reiteration", "weighted-cesaro-reiteration")
def reiteration(ctx):
    p0, a0, p1, a1, th = 1.5, 0.1, 3.0, -0.1, 0.4
    p = 1 / ((1 - th) / p0 + th / p1)
    al = (1 - th) * a0 + th * a1
    A = parse_space(f"Ces(Lp({p0:g},[0,inf),pow({a0:g})))")
    B = parse_space(f"Ces(Lp({p1:g},[0,inf),pow({a1:g})))")
    Y = parse_space(f"Ces(Lp({p:.15g},[0,inf),pow({al:.15g})))")
    r, rr = [], []
    for _ in range(max(50, ctx.cfg.samples // 2)):
        f = ctx.fn_half(cells=4)
        g = f.refined(2)
        r.append(real_interp_norm(f, A, B, th, p, points=12, cfg=LIGHT).value / norm_value(Y, f))
        rr.append(real_interp_norm(g, A, B, th, p, points=12, cfg=LIGHT).value / norm_value(Y, g))
    c = ctx.envelope(r, rr)
    c.detail.update({"p": p, "alpha": al})
    return c


@case(SUITE, "s-operator.bounded", "operator-s-bounded")
def s_bounded(ctx):
    out = []
    worst_route, worst_split, worst_hardy = 0.0, -math.inf, 0.0
    for p in (1.5, 2.0, 4.0):
        X = parse_space(f"W(Lp({p:g},[0,inf)),invt)")
        q = p / (p - 1)
        for _ in range(max(17, ctx.cfg.samples // 6)):
            f = ctx.fn_half(cells=12)
            r = check_S_bounded(f, X)
            # the proof's split: ||C g + C* g|| <= ||C g|| + ||C* g|| for g = f/s
            E = ExactFun.from_pcfun(f).times_invt()
            gn = E.lp_norm(p, 0.0)
            split = (E.cesaro().lp_norm(p, 0.0) + E.copson().lp_norm(p, 0.0)) / gn
            worst_split = max(worst_split, r / split)
            worst_hardy = max(worst_hardy, r / (p + q))
            # S f(t) from its kernel against t * (C + C*)(f/s)(t)
            t = f.breakpoints
            a = s_direct(f, t)
            b = t * s_operator(f)(t)
            worst_route = max(worst_route, float(np.max(np.abs(a / b - 1))))
    out.append(ctx.le(worst_split, 1.0, ctx.cfg.tol("identity"), suffix="split"))
    out.append(ctx.le(worst_hardy, 1.0, ctx.cfg.tol("identity"), suffix="hardy-constants"))
    out.append(ctx.le(worst_route, ctx.cfg.tol("identity"), rel=False, suffix="two-routes"))
    z = PCFun([1.0, 2.0], [0.0], HALF)
    out.append(ctx.close(check_S_bounded(z, parse_space("W(Lp(2,[0,inf)),invt)")) + 1.0, 1.0, 0.0, suffix="zero"))
    return out


@case(SUITE, "tandori.k-ratio", "tandori-real-method")
def tandori_k(ctx):
    # K(t, f; Tan X0, Tan X1) against K(t, majorant f; X0, X1)
    A, B = parse_space("Lp(1,[0,inf))"), parse_space("Lp(2,[0,inf))")
    TA, TB = parse_space("Tan(Lp(1,[0,inf)))"), parse_space("Tan(Lp(2,[0,inf)))")
    r, rr = [], []
    for _ in range(max(50, ctx.cfg.samples // 2)):
        f = ctx.fn_half(cells=8)
        t = float(10 ** ctx.rng.uniform(-1, 1))
        for h, out in ((f, r), (f.refined(2), rr)):
            out.append(k_numeric(t, h, TA, TB, cfg=LIGHT).value / k_numeric(t, majorant_fn(h), A, B, cfg=LIGHT).value)
    return ctx.envelope(r, rr)
