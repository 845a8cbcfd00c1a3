"""Explicit-constant inequalities between Cesàro, Copson and dilation norms."""
import math

import numpy as np

from ...kernels import ExactFun, copson_seq, dilate_seq, maximal_fn, rearrange_fn
from ...norms import norm_value
from ...spaces import SeqLeaf, parse_space, wpow
from ...duality import conj_exponent
from ..constants import cr_profile
from ..core import case, sample_values, witness_of

SUITE = "constants"
PS = (1.5, 2.0, 3.0)


def _ratio_case(ctx, pairs, bound_of, suffix=None, slack=None):
    """``max lhs/rhs`` over samples against ``bound_of(p)``; one record per exponent."""
    slack = ctx.cfg.tol("solver") if slack is None else slack
    out = []
    for p, items in pairs.items():
        worst, wx = -1.0, None
        for x, lhs, rhs in items:
            r = lhs / rhs
            if r > worst:
                worst, wx = r, x
        tag = f"p{p:g}" if suffix is None else f"{suffix}.p{p:g}"
        out.append(ctx.le(worst, bound_of(p), slack, witness=witness_of(wx), suffix=tag,
                          detail={"samples": len(items)}))
    return out


@case(SUITE, "cr.ratio", "curbera-ricker-inequality")
def cr_ratio(ctx):
    count = 100 * ctx.cfg.samples
    nmax = 128
    lengths = ctx.rng.integers(2, nmax + 1, size=count)
    A = np.zeros((count, nmax))
    for i, m in enumerate(lengths):
        A[i, :m] = sample_values(ctx.rng, int(m), heavy=True)
    r = cr_profile(A)
    i = int(np.argmax(r))
    return ctx.le(float(r[i]), 6.0, 0.0, witness={"values": A[i, : lengths[i]].tolist()},
                  detail={"samples": count, "observedSup": float(r[i])})


@case(SUITE, "sigma2-copson.half", "copson-iterate-half-inequality")
def sigma2_copson(ctx):
    # (sigma_2 C* C* a)_n = (C* C* a)_{floor((n+1)/2)} >= (C* a)_n / 2, entrywise
    worst, wa = math.inf, None
    for _ in range(10 * ctx.cfg.samples):
        a = ctx.seq()
        m = 4 * len(a)
        b = copson_seq(a, m)
        bb = copson_seq(b, m)
        lhs = dilate_seq(bb, "up", 2).values[:m]
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(b.values > 0, lhs / (0.5 * b.values), np.inf)
        if float(np.min(r)) < worst:
            worst, wa = float(np.min(r)), a
    return ctx.make("pass" if worst >= 1 - ctx.cfg.tol("exact") else "fail", worst, 1.0, ctx.cfg.tol("exact"),
                    None if worst >= 1 else witness_of(wa), {"minRatio": worst})


@case(SUITE, "lna.iteration", "cesaro-iterate-log-inequality")
def lna_iteration(ctx):
    # CC|f|(x) >= (ln a / a) C|f|(x/a) at grid nodes
    out = []
    fs = [ctx.fn_half(cells=32) for _ in range(ctx.cfg.samples)]
    for name, a in (("2", 2.0), ("e", math.e), ("4", 4.0)):
        worst, wf = math.inf, None
        for f in fs:
            E = ExactFun.from_pcfun(f)
            C = E.cesaro()
            t = np.concatenate([f.breakpoints[f.breakpoints > 0], a * f.breakpoints[f.breakpoints > 0]])
            lhs = C.cesaro()(t)
            rhs = math.log(a) / a * C(t / a)
            # where C f(x/a) = 0 the inequality is trivial
            live = rhs > 0
            r = float(np.min(lhs[live] / rhs[live]))
            if r < worst:
                worst, wf = r, f
        ok = worst >= 1 - ctx.cfg.tol("exact")
        out.append(ctx.make("pass" if ok else "fail", worst, 1.0, ctx.cfg.tol("exact"),
                            None if ok else witness_of(wf), {"minRatio": worst, "a": a}, suffix=f"a{name}"))
    return out


@case(SUITE, "hardy.cesaro", "hardy-operator-norms")
def hardy_cesaro(ctx):
    pairs = {}
    for p in PS:
        X, CX = parse_space(f"Lp({p:g},[0,inf))"), parse_space(f"Ces(Lp({p:g},[0,inf)))")
        fs = [ctx.fn_half(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
        pairs[p] = [(f, norm_value(CX, f), norm_value(X, f)) for f in fs]
    return _ratio_case(ctx, pairs, conj_exponent)


@case(SUITE, "hardy.copson", "hardy-operator-norms")
def hardy_copson(ctx):
    pairs = {}
    for p in PS:
        X, CX = parse_space(f"Lp({p:g},[0,inf))"), parse_space(f"Cop(Lp({p:g},[0,inf)))")
        fs = [ctx.fn_half(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
        pairs[p] = [(f, norm_value(CX, f), norm_value(X, f)) for f in fs]
    return _ratio_case(ctx, pairs, lambda p: p)


@case(SUITE, "iterate.cesaro-half-line", "cesaro-iterate-equality")
def iterate_cesaro(ctx):
    # ||C|f|||_p <= (a / ln a) ||sigma_{1/a}|| ||CC|f|||_p with ||sigma_{1/a}||_{L^p} = a^{-1/p}
    out = []
    fs = [ctx.fn_half(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
    for p in PS:
        C1, C2 = parse_space(f"Ces(Lp({p:g},[0,inf)))"), parse_space(f"Ces(Ces(Lp({p:g},[0,inf))))")
        items = [(f, norm_value(C1, f), norm_value(C2, f)) for f in fs]
        for a in (2.0, math.e):
            out += _ratio_case(ctx, {p: items}, lambda p, a=a: a / math.log(a) * a ** (-1 / p), suffix=f"a{a:.3g}")
    return out


@case(SUITE, "iterate.copson-half-line", "copson-iterate-equality")
def iterate_copson(ctx):
    # ||C*f||_p <= ||sigma_{1/a}|| / ln(1/a) ||C*C*f||_p, 0 < a < 1
    out = []
    fs = [ctx.fn_half(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
    for p in PS:
        C1, C2 = parse_space(f"Cop(Lp({p:g},[0,inf)))"), parse_space(f"Cop(Cop(Lp({p:g},[0,inf))))")
        items = [(f, norm_value(C1, f), norm_value(C2, f)) for f in fs]
        for a in (0.5, 1 / math.e):
            out += _ratio_case(ctx, {p: items}, lambda p, a=a: a ** (-1 / p) / math.log(1 / a), suffix=f"a{a:.3g}")
    return out


@case(SUITE, "iterate.cesaro-sequences", "cesaro-iterate-equality")
def iterate_cesaro_seq(ctx):
    # ||C_d a|| <= 12 ||sigma_{1/2}|| ||C_d C_d a|| with ||sigma_{1/2}||_{l^p} <= 2^{-1/p}
    pairs = {}
    for p in PS:
        C1, C2 = parse_space(f"Ces(lp({p:g}))"), parse_space(f"Ces(Ces(lp({p:g})))")
        xs = [ctx.seq(32) for _ in range(ctx.cfg.samples)]
        pairs[p] = [(a, norm_value(C1, a), norm_value(C2, a)) for a in xs]
    return _ratio_case(ctx, pairs, lambda p: 12 * 2 ** (-1 / p))


@case(SUITE, "iterate.copson-sequences", "copson-iterate-equality")
def iterate_copson_seq(ctx):
    # ||C*_d a|| <= 2 ||sigma_2|| ||C*_d C*_d a|| with ||sigma_2||_{l^p} <= 2^{1/p}
    pairs = {}
    for p in PS:
        C1, C2 = parse_space(f"Cop(lp({p:g}))"), parse_space(f"Cop(Cop(lp({p:g})))")
        xs = [ctx.seq(32) for _ in range(ctx.cfg.samples)]
        pairs[p] = [(a, norm_value(C1, a), norm_value(C2, a)) for a in xs]
    return _ratio_case(ctx, pairs, lambda p: 2 * 2 ** (1 / p))


@case(SUITE, "shift.cesaro-copson-sequences", "cesaro-copson-sequence-equality")
def shift_equivalence(ctx):
    # ||C_d a|| <= (||C_d|| + ||S*||) ||C*_d a|| and ||C*_d a|| <= (||C_d S|| + ||S||) ||C_d a||, both p' + 1 on l^p
    out = []
    for p in PS:
        C, Cs = parse_space(f"Ces(lp({p:g}))"), parse_space(f"Cop(lp({p:g}))")
        xs = [ctx.seq(32) for _ in range(ctx.cfg.samples)]
        vals = [(a, norm_value(C, a), norm_value(Cs, a)) for a in xs]
        out += _ratio_case(ctx, {p: vals}, lambda p: conj_exponent(p) + 1, suffix="ces-by-cop")
        out += _ratio_case(ctx, {p: [(a, y, x) for a, x, y in vals]}, lambda p: conj_exponent(p) + 1,
                           suffix="cop-by-ces")
    return out


@case(SUITE, "unit.copson-into-cesaro", "copson-into-cesaro-unit")
def unit_copson_into_cesaro(ctx):
    # on [0,1]: ||f||_{CX} <= ||C|| ||f||_{C*X}, ||C||_{L^p} = p'
    pairs = {}
    for p in PS:
        C, Cs = parse_space(f"Ces(Lp({p:g},[0,1]))"), parse_space(f"Cop(Lp({p:g},[0,1]))")
        fs = [ctx.fn_unit(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
        pairs[p] = [(f, norm_value(C, f), norm_value(Cs, f)) for f in fs]
    return _ratio_case(ctx, pairs, conj_exponent)


@case(SUITE, "iterate.copson-unit", "copson-iterate-equality-unit")
def iterate_copson_unit(ctx):
    # on [0,1] the same argument: ||sigma_{1/a}||_{L^p[0,1]} <= a^{-1/p}
    out = []
    fs = [ctx.fn_unit(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
    for p in PS:
        C1, C2 = parse_space(f"Cop(Lp({p:g},[0,1]))"), parse_space(f"Cop(Cop(Lp({p:g},[0,1])))")
        items = [(f, norm_value(C1, f), norm_value(C2, f)) for f in fs]
        for a in (0.5, 1 / math.e):
            out += _ratio_case(ctx, {p: items}, lambda p, a=a: a ** (-1 / p) / math.log(1 / a), suffix=f"a{a:.3g}")
    return out


@case(SUITE, "unit.copson-cesaro-cap", "copson-equals-cesaro-cap-l1-unit")
def unit_copson_cap(ctx):
    # ||f||_{CX cap L^1} <= p' ||C*f||_p since int C*f = int f; and C*f <= C*Cf + int f gives
    # ||C*f||_p <= (p + 1) max(||Cf||_p, ||f||_1)
    into, back = {}, {}
    L1 = parse_space("Lp(1,[0,1])")
    for p in PS:
        C, Cs = parse_space(f"Ces(Lp({p:g},[0,1]))"), parse_space(f"Cop(Lp({p:g},[0,1]))")
        fs = [ctx.fn_unit(cells=24) for _ in range(ctx.cfg.samples // 2 or 1)]
        rows = [(f, max(norm_value(C, f), norm_value(L1, f)), norm_value(Cs, f)) for f in fs]
        into[p] = rows
        back[p] = [(f, b, a) for f, a, b in rows]
    return (_ratio_case(ctx, into, conj_exponent, suffix="cap-by-copson")
            + _ratio_case(ctx, back, lambda p: p + 1.0, suffix="copson-by-cap"))


@case(SUITE, "dilation.weighted-sequences", "dilation-norms")
def dilation_weighted(ctx):
    # ||sigma_m||_{l^p(n^a)} <= m^{1/p} max(1, m^a), ||sigma_{1/m}|| <= m^{-1/p} max(1, m^{-a})
    worst_up, worst_down, wit = 0.0, 0.0, None
    for _ in range(ctx.cfg.samples):
        a = ctx.seq(32)
        m = int(ctx.rng.integers(2, 5))
        p = float(ctx.rng.choice([1.0, 1.5, 2.0, 4.0]))
        al = float(ctx.rng.uniform(-1, 1))
        X = SeqLeaf(p, wpow(al))
        base = norm_value(X, a)
        up = norm_value(X, dilate_seq(a, "up", m)) / base / (m ** (1 / p) * max(1, m ** al))
        down = norm_value(X, dilate_seq(a, "down", m)) / base / (m ** (-1 / p) * max(1, m ** (-al)))
        if max(up, down) > max(worst_up, worst_down):
            wit = {"values": a.values.tolist(), "m": m, "p": p, "alpha": al}
        worst_up, worst_down = max(worst_up, up), max(worst_down, down)
    tol = ctx.cfg.tol("exact") * 100
    return [ctx.le(worst_up, 1.0, tol, witness=wit, suffix="up"),
            ctx.le(worst_down, 1.0, tol, witness=wit, suffix="down")]


@case(SUITE, "riesz.maximal-rearrangement", "riesz-maximal-inequality")
def riesz(ctx):
    # (Mf)*(x) <= c C(f*)(x): the constant is only estimated
    worst = 0.0
    for _ in range(ctx.cfg.samples // 4 or 1):
        f = ctx.fn_half(cells=24)
        Ms = rearrange_fn(maximal_fn(f))
        Cfs = ExactFun.from_pcfun(rearrange_fn(f)).cesaro()
        x = Ms.breakpoints[1:]
        # (Mf)* is right-continuous and decreasing: its sup on a cell is the left value
        worst = max(worst, float(np.max(Ms.values / Cfs(x))))
    return ctx.flag(worst, "estimated constant c in (Mf)* <= c C f*; no value is asserted",
                    detail={"observedSup": worst})
