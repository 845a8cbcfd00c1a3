"""Köthe duality: Hölder–Rogers for exact dual pairs, the brute-force oracle
against closed forms, Cesàro/Tandori dual envelopes, conjugation of phi."""
import math

import numpy as np

from ...duality import conj_exponent, conjugate, conjugate_phi, dual_norm_oracle, dual_space
from ...norms import norm_value
from ...spaces import PCFun, PhiDesc, Seq, SeqLeaf, parse_space, render, wpow
from ..core import case, witness_of

SUITE = "duality"

SEQ_PAIRS = ["lp(1)", "lp(1.5,pow(0.3))", "lp(2)", "lp(3,pow(-0.4))", "lp(inf,pow(0.5))", "Ces(lp(inf))"]
UNIT_PAIRS = ["Lp(1,[0,1],pow(0.5))", "Lp(2,[0,1])", "Lp(4,[0,1],pow(-0.2))", "Lp(inf,[0,1])"]
HALF_PAIRS = ["Lp(1.5,[0,inf),pow(0.25))", "Lp(3,[0,inf))"]
SOLVER_PAIRS = ["Sum(lp(2),lp(4))", "Cap(lp(1.5),lp(3))"]


def _pairing(f, g) -> float:
    if isinstance(f, Seq):
        n = min(len(f), len(g))
        return float(np.sum(np.abs(f.values[:n] * g.values[:n])))
    return float(np.sum(np.abs(f.values * g.values) * f.widths))


def _pair_sampler(ctx, text):
    X = parse_space(text)
    if "[0,1]" in text:
        def draw():
            f = ctx.fn_unit(cells=16)
            return f, f.with_values(ctx.rng.pareto(1.5, f.ncells) + 0.05)
    elif "[0,inf)" in text:
        def draw():
            f = ctx.fn_half(cells=16)
            return f, f.with_values(ctx.rng.pareto(1.5, f.ncells) + 0.05)
    else:
        def draw():
            f = ctx.seq(16)
            return f, Seq(ctx.rng.pareto(1.5, len(f)) + 0.05)
    return X, draw


@case(SUITE, "holder.exact-pairs", "holder-rogers")
def holder(ctx):
    out = []
    fast = SEQ_PAIRS + UNIT_PAIRS + HALF_PAIRS
    per = max(1, (100 * ctx.cfg.samples) // len(fast))
    for text in fast + SOLVER_PAIRS:
        X, draw = _pair_sampler(ctx, text)
        tr = dual_space(X)
        if not tr.exact:
            out.append(ctx.make("fail", None, None, None, {"space": text, "error": "dual rule is not exact"},
                                suffix=text))
            continue
        n = per if text not in SOLVER_PAIRS else max(1, ctx.cfg.samples // 2)
        worst, wit = -math.inf, None
        for _ in range(n):
            f, g = draw()
            lhs = _pairing(f, g)
            rhs = norm_value(X, f) * norm_value(tr.result, g)
            r = lhs / rhs if rhs > 0 else 0.0
            if r > worst:
                worst, wit = r, {"f": witness_of(f), "g": witness_of(g)}
        out.append(ctx.le(worst, 1.0, ctx.cfg.tol("exact"), witness=wit, suffix=text,
                          detail={"dual": render(tr.result), "pairs": n}))
    return out


@case(SUITE, "oracle.weighted-lp", "associate-norm")
def oracle_weighted(ctx):
    worst, wit = 0.0, None
    for _ in range(ctx.cfg.samples):
        p = float(np.exp(ctx.rng.uniform(math.log(1.2), math.log(6))))
        al = float(ctx.rng.uniform(-0.5, 0.5))
        X = SeqLeaf(p, wpow(al))
        f = ctx.seq(16)
        r = dual_norm_oracle(X, f)
        closed = norm_value(dual_space(X).result, f)
        err = abs(r.value / closed - 1)
        if err > worst:
            worst, wit = err, {"p": p, "alpha": al, "f": witness_of(f)}
    return ctx.le(worst, 1e-6, rel=False, witness=wit)


@case(SUITE, "oracle.self-dual", "plumbing")
def oracle_self_dual(ctx):
    return ctx.close(dual_norm_oracle(parse_space("lp(2)"), Seq([3.0, 4.0])).value, 5.0, 1e-9)


def _envelope_oracle(ctx, X, Y, draw, count):
    ratios, refined = [], []
    for _ in range(count):
        f = draw()
        tv = norm_value(Y, f)
        ratios.append(dual_norm_oracle(X, f).value / tv)
        refined.append(dual_norm_oracle(X, f, enlarge=True).value / tv)
    return ratios, refined


@case(SUITE, "cesaro-dual.sequences", "cesaro-dual-tandori")
def cesaro_dual_seq(ctx):
    out = []
    count = max(50, ctx.cfg.samples // 2)
    for p in (1.5, 2.0, 3.0):
        X = parse_space(f"Ces(lp({p:g}))")
        tr = dual_space(X)
        r, rr = _envelope_oracle(ctx, X, tr.result, lambda: ctx.seq(16), count)
        case_ = ctx.envelope(r, rr, suffix=f"p{p:g}")
        case_.detail["dual"] = render(tr.result)
        out.append(case_)
    return out


@case(SUITE, "cesaro-dual.unit-interval", "cesaro-dual-tandori-unit")
def cesaro_dual_unit(ctx):
    # the dual weight 1/(1-x) is not integrable at 1, so samples stop short of it
    X = parse_space("Ces(Lp(2,[0,1]))")
    tr = dual_space(X)

    def draw():
        f = ctx.fn_unit(cells=12)
        hi = float(ctx.rng.uniform(0.5, 0.9))
        return PCFun(f.breakpoints * hi, f.values, f.domain)

    r, rr = _envelope_oracle(ctx, X, tr.result, draw, max(10, ctx.cfg.samples // 5))
    c = ctx.envelope(r, rr)
    c.detail["dual"] = render(tr.result)
    return c


@case(SUITE, "rules.involution", "weighted-dual")
def rules_involution(ctx):
    bad = []
    for text in ["lp(2)", "lp(1.5,pow(0.3))", "Lp(3,[0,1],pow(-0.2))", "Ces(lp(2))", "Tan(lp(4))",
                 "Sum(lp(2),lp(4))", "Cap(Lp(2,[0,inf)),Lp(3,[0,inf)))", "CL(pow(0.3),lp(2),lp(4))"]:
        X = parse_space(text)
        back = dual_space(dual_space(X).result).result
        if render(back) != render(X):
            bad.append({"space": text, "back": render(back)})
    return ctx.make("pass" if not bad else "fail", len(bad), 0, 0, bad or None)


@case(SUITE, "conjugate.involution", "conjugate-involution")
def conjugate_involution(ctx):
    out = []
    for phi in (PhiDesc("pow", 0.5), PhiDesc("pow", 0.3), PhiDesc("min"), PhiDesc("sum"), PhiDesc("max")):
        cc = conjugate(conjugate(phi))
        pts = np.exp(ctx.rng.uniform(-3, 3, size=(ctx.cfg.samples, 2)))
        errs = np.array([abs(cc(s, t) / phi(s, t) - 1) for s, t in pts])
        i = int(np.argmax(errs))
        name = phi.kind if phi.kind != "pow" else f"pow{phi.theta:g}"
        ok = errs[i] <= 1e-6
        if phi.kind == "max" and not ok:
            # max(s,t) is convex, not concave: it lies outside the class where conjugation is an involution
            out.append(ctx.flag(float(errs[i]), "max is not concave; its double conjugate is s + t",
                                detail={"s": pts[i, 0], "t": pts[i, 1]}, suffix=name))
            continue
        out.append(ctx.le(float(errs[i]), 1e-6, rel=False, witness={"s": pts[i, 0], "t": pts[i, 1]},
                          suffix=name))
    return out


@case(SUITE, "conjugate.power-half", "conjugate-function")
def conjugate_power_half(ctx):
    out = []
    pts = np.exp(ctx.rng.uniform(-3, 3, size=(ctx.cfg.samples, 2)))
    phi = PhiDesc("pow", 0.5)
    err_num = max(abs(conjugate_phi(phi, s, t, closed_form=False) / (2 * math.sqrt(s * t)) - 1) for s, t in pts)
    out.append(ctx.le(err_num, 1e-6, rel=False, suffix="numeric"))
    out.append(ctx.close(conjugate_phi(phi, 2.0, 3.0), 2 * math.sqrt(6.0), 1e-12, suffix="closed-form"))
    return out


@case(SUITE, "lozanovskii.power", "lozanovskii-duality")
def lozanovskii_power(ctx):
    # (l^p0)^(1-th) (l^p1)^th = l^p isometrically; its dual l^p' against the rule's output
    ratios = []
    th, p0, p1 = 0.4, 2.0, 4.0
    p = 1 / ((1 - th) / p0 + th / p1)
    X = parse_space(f"CL(pow({th:g}),lp({p0:g}),lp({p1:g}))")
    D = dual_space(X).result
    for _ in range(max(20, ctx.cfg.samples // 5)):
        f = ctx.seq(8)
        ratios.append(norm_value(D, f) / norm_value(SeqLeaf(conj_exponent(p)), f))
    r = np.array(ratios)
    spread = float(r.max() / r.min())
    return ctx.le(spread, 1.0, ctx.cfg.tol("solver"), detail={"min": r.min(), "max": r.max(), "rule": render(D)})
