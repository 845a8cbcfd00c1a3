"""Köthe duals: descriptor rules, a brute-force dual-norm oracle, and the conjugate of phi."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .norms import DEFAULT, EvalConfig, Layout, NormResult, compile_node, layout_of
from .spaces import (
    CL, HALF, UNIT, Cap, Ces, Cop, LpLeaf, PCFun, PhiDesc, RealK, Seq, SeqLeaf, SpaceDesc,
    SpaceError, Sum, Tan, Weight, Weighted, measure_space, oneminus, render, validate_element,
)


def conj_exponent(p: float) -> float:
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    q = p / (p - 1.0)
    # snap to a nearby simple fraction so that p'' == p and 3/2 -> 3 render cleanly
    fr = Fraction(q).limit_denominator(1000)
    return float(fr) if abs(float(fr) - q) <= 1e-12 * q else q


@dataclass
class DualRuleTrace:
    """Result of ``dual_space``: output descriptor and the rules applied, in order."""

    source: SpaceDesc
    result: SpaceDesc
    rules: list = field(default_factory=list)  # (rule name, reference)
    exact: bool = True  # False when some rule gives equivalent (not equal) norms

    def render(self) -> str:
        lines = [f"{render(self.source)}  ->  {render(self.result)}"]
        for name, ref in self.rules:
            lines.append(f"  {name}: {ref}")
        return "\n".join(lines)


def _flip(w: Weight) -> Weight:
    return w.recip()


def _power_leaf(space):
    """``(leaf, alpha)`` when ``space`` is a leaf with a pure power weight, else None."""
    if isinstance(space, Weighted):
        inner = _power_leaf(space.child)
        if inner is None or space.weight.sampled_factor[0] is not None:
            return None
        a, b = space.weight.exponents
        if b:
            return None
        return inner[0], inner[1] + a
    if isinstance(space, (LpLeaf, SeqLeaf)):
        if space.weight.sampled_factor[0] is not None:
            return None
        a, b = space.weight.exponents
        if b:
            return None
        return space, a
    return None


def _ces_bounded(p, alpha) -> bool:
    # C is bounded on L^p(x^alpha) / l^p(n^alpha) iff 1 < p and alpha < 1 - 1/p
    return p > 1 and alpha < 1.0 - (0.0 if math.isinf(p) else 1.0 / p)


class _Dualizer:
    def __init__(self):
        self.rules = []
        self.exact = True

    def note(self, name, ref, exact=True):
        self.rules.append((name, ref))
        self.exact &= exact

    def __call__(self, s: SpaceDesc) -> SpaceDesc:
        if isinstance(s, LpLeaf):
            self.note("leaf", "L^p(w)' = L^p'(1/w)")
            return LpLeaf(conj_exponent(s.p), s.domain, _flip(s.weight))
        if isinstance(s, SeqLeaf):
            self.note("leaf", "l^p(w)' = l^p'(1/w)")
            return SeqLeaf(conj_exponent(s.p), _flip(s.weight))
        if isinstance(s, Weighted):
            self.note("weighted", "[X(w)]' = X'(1/w)")
            return Weighted(self(s.child), _flip(s.weight))
        if isinstance(s, Sum):
            self.note("sum", "(X0 + X1)' = X0' cap X1'")
            return Cap(self(s.left), self(s.right))
        if isinstance(s, Cap):
            self.note("cap", "(X0 cap X1)' = X0' + X1'")
            return Sum(self(s.left), self(s.right))
        if isinstance(s, CL):
            # the Lozanovskii conjugate of s^(1-t) t^t is c * s^(1-t) t^t: same space, equivalent norm
            phi = s.phi
            if phi.kind == "pow":
                out = phi
            elif phi.kind == "min":
                out = PhiDesc("sum")
            elif phi.kind == "sum":
                out = PhiDesc("min")
            else:
                raise SpaceError("max is not concave: no Lozanovskii dual rule")
            self.note("lozanovskii", f"phi(X0,X1)' = phi^(X0',X1'), phi^ ~ {out.kind}", exact=False)
            return CL(out, self(s.left), self(s.right))
        if isinstance(s, Ces):
            return self._ces(s)
        if isinstance(s, Tan):
            return self._tan(s)
        if isinstance(s, Cop):
            raise SpaceError("no dual rule for Copson spaces")
        if isinstance(s, RealK):
            raise SpaceError("no dual rule for real-method spaces")
        raise SpaceError(f"no dual rule for {type(s).__name__}")

    def _ces(self, s: Ces) -> SpaceDesc:
        ms = measure_space(s)
        leaf = _power_leaf(s.child)
        if leaf is None:
            raise SpaceError("Cesàro dual rule needs a power-weighted Lp/lp leaf")
        lf, alpha = leaf
        p = lf.p
        if ms == UNIT:
            if alpha != 0:
                raise SpaceError("on [0,1] only unweighted symmetric Lp leaves qualify")
            if math.isinf(p):
                self.note("ces-inf", "(Ces_inf[0,1])' = Tan(L^1[0,1]) isometrically")
                return Tan(LpLeaf(1.0, UNIT))
            if p == 1:
                raise SpaceError("C is unbounded on L^1")
            self.note("ces-unit", "(CX)' = Tan(X'(1/v)), v = 1-x", exact=False)
            return Tan(Weighted(LpLeaf(conj_exponent(p), UNIT), oneminus().recip()))
        if not _ces_bounded(p, alpha):
            raise SpaceError(f"C is unbounded on the leaf (p={p}, alpha={alpha})")
        inner = self._leaf_dual(s.child)
        if math.isinf(p) and alpha == 0:
            self.note("ces-inf", "(C L^inf)' = Tan(L^1) isometrically")
        else:
            self.note("ces", "(CX)' = Tan(X')", exact=False)
        return Tan(inner)

    def _tan(self, s: Tan) -> SpaceDesc:
        ms = measure_space(s)
        if ms == UNIT:
            raise SpaceError("no dual rule for Tandori spaces on [0,1]")
        leaf = _power_leaf(s.child)
        if leaf is None:
            raise SpaceError("Tandori dual rule needs a power-weighted Lp/lp leaf")
        lf, alpha = leaf
        # Tan(Y)' = C(Y') whenever C is bounded on Y'
        q, beta = conj_exponent(lf.p), -alpha
        if not _ces_bounded(q, beta):
            raise SpaceError("C is unbounded on the dual leaf")
        inner = self._leaf_dual(s.child)
        if lf.p == 1 and alpha == 0:
            self.note("tan-1", "Tan(L^1)' = C L^inf isometrically")
        else:
            self.note("tan", "Tan(Y)' = C(Y')", exact=False)
        return Ces(inner)

    def _leaf_dual(self, s):
        sub = _Dualizer()
        out = sub(s)
        self.rules.extend(sub.rules)
        self.exact &= sub.exact
        return out


def dual_space(space: SpaceDesc) -> DualRuleTrace:
    """Köthe dual descriptor. ``trace.exact`` tells whether norms are equal or only equivalent."""
    measure_space(space)
    d = _Dualizer()
    out = d(space)
    return DualRuleTrace(space, out, d.rules, d.exact)


# ---------------------------------------------------------------------------
# brute-force oracle


@dataclass
class OracleResult(NormResult):
    holder: float | None = None  # closed-form Hölder value for weighted lp/Lp leaves


def _holder_value(space, f):
    leaf = _power_leaf(space)
    if leaf is None:
        return None
    lf = space if isinstance(space, (LpLeaf, SeqLeaf)) else None
    if lf is None or lf.weight.sampled_factor[0] is not None:
        # fold Weighted(...) into a single leaf
        lf0, alpha = leaf
        lf = (SeqLeaf(lf0.p, Weight("pow", alpha)) if isinstance(lf0, SeqLeaf)
              else LpLeaf(lf0.p, lf0.domain, Weight("pow", alpha)))
    from .norms import norm
    d = dual_space(lf).result
    return norm(d, f).value


def dual_norm_oracle(space: SpaceDesc, f, budget: int = 2000, starts: int = 6, seed: int = 0,
                     enlarge: bool = False, cfg: EvalConfig = DEFAULT) -> OracleResult:
    """Lower bound for ``sup{ int |f g| : ||g||_X <= 1 }`` by multi-start ascent.

    ``g`` ranges over nonnegative elements supported where ``f`` is (one extra
    dyadic ring of cells/entries with ``enlarge=True``). The ratio
    ``<|f|, g> / ||g||_X`` is scale invariant, so it is maximised without
    constraints other than ``g >= 0``.
    """
    validate_element(space, f)
    if isinstance(f, Seq):
        n = f.support
        if enlarge:
            f = f.padded(2 * n)
            n = 2 * n
        layout, a = Layout("seq", n), np.abs(f.values[:n])
        mass = np.ones(n)
    else:
        if enlarge:
            x = f.breakpoints
            hi = x[-1] * 2.0 if f.domain == HALF else min(1.0, x[-1] * 2.0)
            extra = [hi] if hi > x[-1] else []
            x = np.concatenate([x, extra])
            vals = np.concatenate([f.values, np.zeros(len(extra))])
            f = PCFun(x, vals, f.domain)
        layout, a = layout_of(f)
        mass = np.diff(layout.x)
    if not np.any(a):
        return OracleResult(0.0, 0.0)
    node = compile_node(space, layout, cfg)
    free = (a > 0) if not enlarge else np.ones(len(a), bool)
    am = a * mass
    rng = np.random.default_rng(seed)

    def negratio(z):
        g = np.zeros(len(a))
        g[free] = z
        pair = float(am @ g)
        nv, grad, _ = node.value_grad(g, 0.0)
        if pair <= 0 or not math.isfinite(nv) or nv <= 0:
            return 1e300, np.zeros_like(z)
        # minimise N(g)/<a,g>, which is quasiconvex
        val = nv / pair
        gz = grad[free] / pair - nv * am[free] / pair ** 2
        return val, gz

    k = int(np.sum(free))
    inits = [np.ones(k), a[free] + 1e-12 * np.max(a), a[free] ** 2 + 1e-12]
    while len(inits) < starts:
        inits.append(rng.exponential(size=k))
    best, best_g, iters, ok = math.inf, None, 0, False
    per = max(1, budget // len(inits))
    for z0 in inits:
        z0 = z0 / np.max(z0)
        res = optimize.minimize(negratio, z0, jac=True, method="L-BFGS-B",
                                bounds=[(0.0, None)] * k,
                                options={"maxiter": per, "ftol": 1e-15, "gtol": 1e-13})
        iters += int(res.nit)
        if res.fun < best:
            best, best_g, ok = float(res.fun), res.x, bool(res.success)
    g = np.zeros(len(a))
    g[free] = best_g
    value = 1.0 / best if best > 0 else math.inf
    out = OracleResult(value, cfg.tol, iters, False, ok, witness={"g": g.tolist()})
    out.holder = _holder_value(space, f)
    return out


# ---------------------------------------------------------------------------
# conjugate function


_BRACKET = 8.0 * math.log(10.0)  # log a in ln(t/s) + [-ln 1e8, ln 1e8]


def _limit(fun, big=1e300):
    """``lim_{u->inf} fun(u)`` for a nondecreasing ``fun``; inf when still growing at ``big``."""
    hi, mid = float(fun(big)), float(fun(math.sqrt(big)))
    if hi > mid * (1 + 1e-9) + 1e-300:
        return math.inf
    return hi


def conjugate_value(phi, s: float, t: float) -> float:
    """``phi^(s,t) = inf_{a,b>0} (a s + b t) / phi(a, b)``, reduced to ``b = 1``.

    Brent's bounded search over ``log a`` in ``ln(t/s) +- ln 1e8``, plus the
    two end limits ``a -> 0`` and ``a -> inf``.
    """
    s, t = float(s), float(t)
    if s < 0 or t < 0:
        raise SpaceError("conjugate_phi needs s, t >= 0")
    ph = lambda a, b: float(phi(a, b))
    if s == 0 and t == 0:
        return 0.0
    if t == 0:
        # (a s)/phi(a,1) = s / phi(1, 1/a), nondecreasing in a: infimum at a -> 0
        lim = _limit(lambda u: ph(1.0, u))
        return 0.0 if math.isinf(lim) else s / lim
    if s == 0:
        lim = _limit(lambda u: ph(u, 1.0))
        return 0.0 if math.isinf(lim) else t / lim
    c = math.log(t / s)

    def h(la):
        a = math.exp(la)
        d = ph(a, 1.0)
        return (a * s + t) / d if d > 0 else math.inf

    r = optimize.minimize_scalar(h, bounds=(c - _BRACKET, c + _BRACKET), method="bounded",
                                 options={"xatol": 1e-11, "maxiter": 500})
    best = min(float(r.fun), h(c - _BRACKET), h(c + _BRACKET))
    # end limits: a -> 0 gives t / phi(0+, 1); a -> inf gives s / phi(1, 0+)
    p01 = ph(1e-300, 1.0)
    p10 = ph(1.0, 1e-300)
    if p01 > 0:
        best = min(best, t / p01)
    if p10 > 0:
        best = min(best, s / p10)
    return best


def conjugate_phi(phi: PhiDesc, s: float, t: float, closed_form: bool = True) -> float:
    """``phi^(s, t)``. Closed forms for min, max, sum (and pow when ``closed_form``)."""
    if closed_form:
        if phi.kind == "min":
            return float(s) + float(t)
        if phi.kind in ("max", "sum"):
            return min(float(s), float(t))
        if phi.kind == "pow" and 0 < phi.theta < 1:
            th = phi.theta
            return th ** (-th) * (1 - th) ** (th - 1) * float(s) ** (1 - th) * float(t) ** th
    return conjugate_value(phi, s, t)


def conjugate(phi):
    """Numerical ``phi^`` as a callable, for nested conjugation."""
    def out(s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        if s.ndim == 0:
            return conjugate_value(phi, float(s), float(t))
        return np.array([conjugate_value(phi, a, b) for a, b in zip(s.ravel(), t.ravel())]).reshape(s.shape)
    return out


def power_conjugate_constant(theta: float) -> float:
    """``theta^-theta (1-theta)^(theta-1)``: the factor in ``(s^(1-th) t^th)^``."""
    return theta ** (-theta) * (1 - theta) ** (theta - 1)
