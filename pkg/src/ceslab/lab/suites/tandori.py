"""Tandori spaces against Cesàro spaces: the maximal-operator bounds on the half-line
and on [0,1], the contractive inclusion and the Cesàro/Copson two-sided comparison."""
from ...kernels import ExactFun, maximal_fn
from ...norms import norm_value
from ...spaces import UNIT, parse_space
from ..core import case, witness_of

SUITE = "tandori"

P_VALUES = (1.5, 2.0, 4.0)


def _maximal_emp(ctx, p, draw, count):
    """Empirical ``||M||`` on L^p from sampled functions (a lower estimate)."""
    X = parse_space(f"Lp({p:g},{'[0,1]' if draw().domain == UNIT else '[0,inf)'})")
    best = 0.0
    for _ in range(count):
        f = draw()
        best = max(best, norm_value(X, maximal_fn(f)) / norm_value(X, f))
    return best


@case(SUITE, "half-line.tandori-cesaro-bound", "cesaro-tandori-maximal-bound")
def half_line_bound(ctx):
    out = []
    for p in P_VALUES:
        draw = lambda: ctx.fn_half(cells=12)
        m = _maximal_emp(ctx, p, draw, 20)
        CX = parse_space(f"Ces(Lp({p:g},[0,inf)))")
        CT = parse_space(f"Ces(Tan(Lp({p:g},[0,inf))))")
        worst, wit = 0.0, None
        for _ in range(ctx.cfg.samples):
            f = draw()
            r = norm_value(CT, f) / norm_value(CX, f)
            if r > worst:
                worst, wit = r, witness_of(f)
        out.append(ctx.le(worst, 4 * m, ctx.cfg.tol("quadrature"), witness=wit, suffix=f"p{p:g}",
                          detail={"maximalEstimate": m}))
    return out


@case(SUITE, "half-line.tandori-cesaro-envelope", "cesaro-of-tandori-symmetric")
def half_line_envelope(ctx):
    CX = parse_space("Ces(Lp(2,[0,inf)))")
    CT = parse_space("Ces(Tan(Lp(2,[0,inf))))")
    r, rr = [], []
    for _ in range(max(50, ctx.cfg.samples // 2)):
        f = ctx.fn_half(cells=12)
        g = f.refined(2)
        r.append(norm_value(CT, f) / norm_value(CX, f))
        rr.append(norm_value(CT, g) / norm_value(CX, g))
    return ctx.envelope(r, rr)


@case(SUITE, "unit.tandori-cesaro-constants", "cesaro-tandori-unit-constants")
def unit_constants(ctx):
    # ||f||_{CX cap L^1} <= B1 ||f||_{C Tan X} ... as max(||Cf||, ||f||_1) on both sides of the chain
    out = []
    L1 = parse_space("Lp(1,[0,1])")
    for p in P_VALUES:
        draw = lambda: ctx.fn_unit(cells=12)
        m = _maximal_emp(ctx, p, draw, 20)
        b1 = 4 * m * 2 ** (-1 / p)
        CX = parse_space(f"Ces(Lp({p:g},[0,1]))")
        CT = parse_space(f"Ces(Tan(Lp({p:g},[0,1])))")
        up, down, wu, wd = 0.0, 0.0, None, None
        for _ in range(ctx.cfg.samples):
            f = draw()
            cap = max(norm_value(CX, f), norm_value(L1, f))
            ct = norm_value(CT, f)
            if ct / cap > up:
                up, wu = ct / cap, witness_of(f)
            if cap / ct > down:
                down, wd = cap / ct, witness_of(f)
        out.append(ctx.le(up, b1, ctx.cfg.tol("quadrature"), witness=wu, suffix=f"p{p:g}.B1",
                          detail={"maximalEstimate": m}))
        out.append(ctx.le(down, 1.0, ctx.cfg.tol("quadrature"), witness=wd, suffix=f"p{p:g}.B2"))
    return out


@case(SUITE, "inclusion.tandori-contractive", "tandori-contractive-inclusion")
def tandori_contractive(ctx):
    out = []
    for text, draw in (("Lp(2,[0,inf))", lambda: ctx.fn_half(cells=16)),
                       ("Lp(3,[0,1])", lambda: ctx.fn_unit(cells=16)),
                       ("lp(1.5)", lambda: ctx.seq())):
        X = parse_space(text)
        T = parse_space(f"Tan({text})")
        CX = parse_space(f"Ces({text})")
        CT = parse_space(f"Ces(Tan({text}))")
        w1, w2 = 0.0, 0.0
        for _ in range(ctx.cfg.samples):
            f = draw()
            w1 = max(w1, norm_value(X, f) / norm_value(T, f))
            w2 = max(w2, norm_value(CX, f) / norm_value(CT, f))
        out.append(ctx.le(w1, 1.0, ctx.cfg.tol("exact"), suffix=f"{text}.X"))
        out.append(ctx.le(w2, 1.0, ctx.cfg.tol("exact"), suffix=f"{text}.CX"))
    return out


@case(SUITE, "half-line.cesaro-copson-equivalence", "cesaro-equals-copson-half-line")
def cesaro_copson(ctx):
    # ||Cf|| <= ||C* C f||... both directions through C + C* = C*C = CC* with the Hardy constants
    out = []
    for p in P_VALUES:
        q = p / (p - 1)
        w_c, w_s = 0.0, 0.0
        for _ in range(ctx.cfg.samples):
            f = ctx.fn_half(cells=12)
            E = ExactFun.from_pcfun(f)
            nc, ns = E.cesaro().lp_norm(p, 0.0), E.copson().lp_norm(p, 0.0)
            w_c = max(w_c, nc / (q * ns))
            w_s = max(w_s, ns / (p * nc))
        out.append(ctx.le(w_c, 1.0, ctx.cfg.tol("identity"), suffix=f"p{p:g}.cesaro-by-copson"))
        out.append(ctx.le(w_s, 1.0, ctx.cfg.tol("identity"), suffix=f"p{p:g}.copson-by-cesaro"))
    return out
