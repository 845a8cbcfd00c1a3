"""Calderón-Lozanovskii norms, K-functionals, K-profiles and real-method norms."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .bundle import proximal_bundle
from .norms import (
    DEFAULT, EvalConfig, Leaf, Layout, Node, NormResult, Split, compile_node, layout_of,
    split_minimize,
)
from .spaces import (
    HALF, LpLeaf, PCFun, PhiDesc, Seq, SeqLeaf, SpaceDesc, SpaceError, Weight, Weighted,
    measure_space, validate_element, weight_power_mass,
)
from .kernels import ExactFun

_GLX, _GLW = np.polynomial.legendre.leggauss(20)


# ---------------------------------------------------------------------------
# Calderón-Lozanovskii


def cl_norm(phi: PhiDesc, left: SpaceDesc, right: SpaceDesc, f, cfg: EvalConfig = DEFAULT) -> NormResult:
    """``||f||_{phi(X0,X1)} = inf{lam : |f| <= lam phi(|f0|,|f1|), ||f_i|| <= 1}``."""
    if measure_space(left) != measure_space(right):
        raise SpaceError("Calderón-Lozanovskii children live on different measure spaces")
    validate_element(left, f)
    layout, v = layout_of(f)
    if layout.n == 0 or not np.any(v):
        return NormResult(0.0, 0.0)
    L = compile_node(left, layout, cfg)
    R = compile_node(right, layout, cfg)
    return cl_solve(phi, L, R, v, 0.0, cfg)


def cl_solve(phi: PhiDesc, L: Node, R: Node, v, c, cfg: EvalConfig = DEFAULT) -> NormResult:
    v = np.asarray(v, float)
    if phi.kind == "min":
        a = L.value(v, c)
        b = R.value(v, c)
        return NormResult(max(a, b), max(L.error(), R.error()), 0, not math.isfinite(max(a, b)))
    if phi.kind == "pow":
        return _cl_power(phi.theta, L, R, v, c, cfg)
    if phi.kind == "sum":
        return _cl_sum(L, R, v, c, cfg)
    return _cl_max(L, R, v, c, cfg)


def _cl_power(theta, L, R, v, c, cfg):
    if theta == 0.0:
        val = L.value(v, c)
        return NormResult(val, L.error(), 0, not math.isfinite(val))
    if theta == 1.0:
        val = R.value(v, c)
        return NormResult(val, R.error(), 0, not math.isfinite(val))
    act = v > 0
    va = v[act]
    n = len(v)
    has_tail = bool(c)

    def parts(u):
        ua = u[: len(va)]
        f0 = np.zeros(n)
        f1 = np.zeros(n)
        with np.errstate(over="ignore"):
            # far-out trial steps overflow to inf, which the objective reports as inf
            f0[act] = va * np.exp(theta * ua)
            f1[act] = va * np.exp(-(1.0 - theta) * ua)
            c0 = c1 = 0.0
            if has_tail:
                c0 = c * float(np.exp(theta * u[-1]))
                c1 = c * float(np.exp(-(1.0 - theta) * u[-1]))
        return f0, f1, c0, c1

    def J(u):
        f0, f1, c0, c1 = parts(u)
        n0, g0, gc0 = L.value_grad(f0, c0)
        n1, g1, gc1 = R.value_grad(f1, c1)
        if not (n0 > 0 and n1 > 0 and math.isfinite(n0) and math.isfinite(n1)):
            return math.inf, np.zeros_like(u)
        val = (1 - theta) * math.log(n0) + theta * math.log(n1)
        grad = np.zeros_like(u)
        grad[: len(va)] = ((1 - theta) / n0 * g0[act] * theta * f0[act]
                           - theta / n1 * g1[act] * (1 - theta) * f1[act])
        if has_tail:
            grad[-1] = (1 - theta) / n0 * gc0 * theta * c0 - theta / n1 * gc1 * (1 - theta) * c1
        return val, grad

    u0 = np.zeros(len(va) + (1 if has_tail else 0))
    j0, _ = J(u0)
    if not math.isfinite(j0):
        # try to move mass toward the finite side
        for shift in (-20.0, 20.0):
            if math.isfinite(J(u0 + shift)[0]):
                u0 = u0 + shift
                break
        else:
            return NormResult(math.inf, 0.0, 0, True, False)
    res = optimize.minimize(J, u0, jac=True, method="L-BFGS-B",
                            options={"maxiter": 10000, "ftol": 1e-15, "gtol": 1e-11, "maxcor": 30})
    u, fbest, nit, ok = res.x, float(res.fun), int(res.nit), bool(res.success)
    # L-BFGS stalls at kinks of sup-type norms; the bundle method certifies or improves
    b = proximal_bundle(J, u, tol=1e-10, maxiter=120)
    if b.fun < fbest:
        u, fbest = b.x, b.fun
    nit += b.iterations
    ok = ok or b.converged
    f0, f1, c0, c1 = parts(u)
    n0, n1 = L.value(f0, c0), R.value(f1, c1)
    # equalize: shift u so that both factor norms agree
    s = math.log(n1 / n0)
    f0, f1 = f0 * math.exp(theta * s), f1 * math.exp(-(1 - theta) * s)
    c0, c1 = c0 * math.exp(theta * s), c1 * math.exp(-(1 - theta) * s)
    val = math.exp(fbest)
    gap = abs(L.value(f0, c0) - R.value(f1, c1)) / max(val, 1e-300)
    split = Split(f0, c0, L.value(f0, c0), R.value(f1, c1))
    split.f1 = f1
    return NormResult(val, max(cfg.tol * 1e-2, gap, L.error(), R.error()), nit, False, ok,
                      decomposition=split)


def _balanced_threshold(L, R, v, c):
    """Best balanced split within the threshold families ``(v-lam)_+`` and ``min(v, lam)``."""
    pos = v[v > 0]
    lo, hi = math.log(float(np.min(pos))) - 2.0, math.log(float(np.max(pos))) + 1.0
    best = (math.inf, np.zeros_like(v), 0.0)
    for family in ("top", "bottom"):
        for frac in ((0.0, 1.0) if c else (0.0,)):
            def parts(s):
                lam = math.exp(s)
                g = np.maximum(v - lam, 0.0) if family == "top" else np.minimum(v, lam)
                return g, L.value(g, frac * c), R.value(v - g, (1 - frac) * c)

            def gap(s):
                _, a, b = parts(s)
                a, b = min(a, 1e300), min(b, 1e300)
                return a - b
            try:
                s = optimize.brentq(gap, lo, hi, xtol=1e-10)
            except ValueError:
                s = lo if abs(gap(lo)) < abs(gap(hi)) else hi
            g, a, b = parts(s)
            if max(a, b) < best[0]:
                best = (max(a, b), g, frac * c)
    return best


def _cl_sum(L, R, v, c, cfg):
    """``inf max(||g||_0, ||v-g||_1)`` over ``0 <= g <= v`` in epigraph form.

    A balanced threshold split seeds SLSQP on ``min s`` subject to
    ``s >= ||g||_0`` and ``s >= ||v-g||_1``. The dual bound
    ``max_mu K(mu)/(1+mu)`` certifies the gap on request.
    """
    n = len(v)
    has_tail = bool(c)
    val0, g0, c00 = _balanced_threshold(L, R, v, c)
    cands = [(val0, g0, c00)]
    half = (max(L.value(0.5 * v, 0.5 * c), R.value(0.5 * v, 0.5 * c)), 0.5 * v, 0.5 * c)
    cands.append(half)
    val0, g0, c00 = min(cands, key=lambda z: z[0])
    iters = 0
    if math.isfinite(val0) and L.differentiable and R.differentiable:
        scale = val0 if val0 > 0 else 1.0

        def unpack(z):
            return z[:n], (z[n] if has_tail else 0.0)

        def obj(z):
            g = np.zeros(len(z))
            g[-1] = 1.0
            return z[-1], g

        def cons(z):
            g, cg = unpack(z[:-1])
            a = L.value(g, cg) / scale
            b = R.value(v - g, c - cg) / scale
            return np.array([z[-1] - a, z[-1] - b])

        def cons_jac(z):
            g, cg = unpack(z[:-1])
            _, ga, gca = L.value_grad(g, cg)
            _, gb, gcb = R.value_grad(v - g, c - cg)
            J = np.zeros((2, len(z)))
            J[0, :n] = -ga / scale
            J[1, :n] = gb / scale
            if has_tail:
                J[0, n] = -gca / scale
                J[1, n] = gcb / scale
            J[:, -1] = 1.0
            return J

        z0 = np.concatenate([g0, [c00] if has_tail else [], [1.0]])
        ub = np.concatenate([v, [c] if has_tail else [], [np.inf]])
        bounds = list(zip(np.zeros(len(z0)), ub))
        with np.errstate(all="ignore"):
            res = optimize.minimize(obj, z0, jac=True, method="SLSQP", bounds=bounds,
                                    constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                                    options={"maxiter": 500, "ftol": 1e-14})
        iters = int(res.nit)
        z = np.clip(res.x[:-1], 0.0, ub[:-1])
        g, cg = unpack(z)
        m = max(L.value(g, cg), R.value(v - g, c - cg))
        if m < val0:
            val0, g0, c00 = m, g, cg
    split = Split(g0, c00, L.value(g0, c00), R.value(v - g0, c - c00))
    return NormResult(val0, cfg.tol, iters, not math.isfinite(val0), True, decomposition=split)


def cl_sum_dual_bound(L, R, v, c=0.0, cfg: EvalConfig = DEFAULT) -> float:
    """Lower bound ``max_mu K(mu)/(1+mu)`` for the sum-kind minimax (certificate)."""
    best = 0.0
    for s in np.linspace(-8, 8, 17):
        mu = math.exp(s)
        r = split_minimize(L, R, v, c, mu, cfg)
        best = max(best, r.value / (1 + mu))
    return best


def _cl_max(L, R, v, c, cfg):
    """Split the support: ``inf_A max(||v 1_A||_0, ||v 1_{A^c}||_1)``.

    The relaxed (sum-kind) split is rounded over all thresholds of ``g/v``,
    which is an upper bound for the combinatorial problem.
    """
    relaxed = _cl_sum(L, R, v, c, cfg)
    g = relaxed.decomposition.g
    ratio = np.where(v > 0, g / np.where(v > 0, v, 1.0), 0.0)
    order = np.argsort(-ratio, kind="stable")
    best, best_mask = math.inf, None
    n = len(v)
    for k in range(n + 1):
        mask = np.zeros(n, bool)
        mask[order[:k]] = True
        for tail_left in ((True, False) if c else (False,)):
            a = L.value(np.where(mask, v, 0.0), c if tail_left else 0.0)
            b = R.value(np.where(mask, 0.0, v), 0.0 if tail_left else c)
            m = max(a, b)
            if m < best:
                best, best_mask = m, mask.copy()
    # max(s,t) <= s+t <= 2max(s,t): the relaxed value brackets the answer within a factor 2
    lower = relaxed.value
    return NormResult(best, max(cfg.tol, (best - lower) / max(best, 1e-300)), relaxed.iterations,
                      not math.isfinite(best), True, decomposition=best_mask)


# ---------------------------------------------------------------------------
# K-functional


def _l1_weight(space: SpaceDesc):
    """Weight ``w`` if ``space`` is ``L^1(w)`` / ``l^1(w)``, else None."""
    if isinstance(space, (LpLeaf, SeqLeaf)) and space.p == 1:
        return space.weight
    if isinstance(space, Weighted) and isinstance(space.child, (LpLeaf, SeqLeaf)) and space.child.p == 1:
        w = space.child.weight
        a1, b1 = w.exponents
        a2, b2 = space.weight.exponents
        if w.sampled_factor[0] is not None or space.weight.sampled_factor[0] is not None:
            return None
        return _PowWeight(a1 + a2, b1 + b2)
    return None


class _PowWeight:
    """Minimal weight ``x**alpha (1-x)**beta`` used inside K computations."""

    def __init__(self, alpha, beta=0.0):
        self.ab = (float(alpha), float(beta))

    @property
    def exponents(self):
        return self.ab

    @property
    def sampled_factor(self):
        return None, 0


def _weight_parts(w):
    al, be = w.exponents
    s, e = w.sampled_factor
    return al, be, (None if s is None else (s, e))


def _cell_factor(sampled, a, b):
    if sampled is None:
        return np.ones_like(a)
    s, e = sampled
    mid = np.where(a > 0, np.sqrt(np.maximum(a, 0) * b), 0.5 * (a + b))
    return np.power(s(mid), e)


def k_exact_weightedL1(t: float, f, w0, w1, parts: bool = False):
    """``K(t, f; L^1(w0), L^1(w1)) = int min(w0, t w1) |f|`` with crossover splitting.

    With ``parts=True`` returns ``(K, L, R)`` where ``L = int_{w0 < t w1} w0|f|``
    and ``R = int_{w0 >= t w1} w1|f|`` (so ``K = L + t R``).
    """
    if not t > 0:
        raise SpaceError("t must be positive")
    a0, b0, s0 = _weight_parts(w0)
    a1, b1, s1 = _weight_parts(w1)
    if isinstance(f, Seq):
        k = np.arange(1, len(f.values) + 1, dtype=float)
        W0 = k ** a0 * (1.0 if s0 is None else np.power(s0[0](k), s0[1]))
        W1 = k ** a1 * (1.0 if s1 is None else np.power(s1[0](k), s1[1]))
        av = np.abs(f.values)
        use0 = W0 < t * W1
        Lp = float(np.sum(np.where(use0 & (av > 0), av * W0, 0.0)))
        Rp = float(np.sum(np.where(~use0 & (av > 0), av * W1, 0.0)))
        K = Lp + t * Rp
        return (K, Lp, Rp) if parts else K
    g = f.padded()
    x, v = g.breakpoints, np.abs(g.values)
    keep = v > 0
    a, b, v = x[:-1][keep], x[1:][keep], v[keep]
    k0 = _cell_factor(s0, a, b)
    k1 = _cell_factor(s1, a, b)
    lnt = math.log(t)

    def h(s, i):
        # ln w0 - ln(t w1) at s inside cell i
        with np.errstate(divide="ignore"):
            out = (a0 - a1) * np.log(s) - lnt + math.log(k0[i]) - math.log(k1[i])
            if b0 != b1:
                out = out + (b0 - b1) * np.log1p(-s)
        return out

    Lsum = 0.0
    Rsum = 0.0
    pure = b0 == b1
    for i in range(len(v)):
        lo, hi = a[i], b[i]
        cuts = [lo]
        if pure:
            if a0 != a1:
                ln_star = (lnt + math.log(k1[i]) - math.log(k0[i])) / (a0 - a1)
                if ln_star < 700:
                    s_star = math.exp(ln_star)
                    if lo < s_star < hi:
                        cuts.append(s_star)
        else:
            probe = np.linspace(lo, hi, 17)[1:-1] if lo == 0 else np.geomspace(lo, hi, 17)[1:-1]
            pts = np.concatenate([[lo + (hi - lo) * 1e-12 if lo == 0 else lo], probe,
                                  [hi - (hi - lo) * 1e-12 if b1 or b0 else hi]])
            hv = h(pts, i)
            for j in range(len(pts) - 1):
                if np.isfinite(hv[j]) and np.isfinite(hv[j + 1]) and hv[j] * hv[j + 1] < 0:
                    cuts.append(optimize.brentq(lambda s: float(h(np.array([s]), i)[0]),
                                                pts[j], pts[j + 1], xtol=1e-15, rtol=4e-16))
        cuts.append(hi)
        for lo_, hi_ in zip(cuts[:-1], cuts[1:]):
            mid = 0.5 * (lo_ + hi_) if lo_ == 0 else math.sqrt(lo_ * hi_)
            if float(h(np.array([mid]), i)[0]) < 0:
                Lsum += v[i] * k0[i] * float(weight_power_mass(np.array([lo_]), np.array([hi_]), 1.0, a0, b0)[0])
            else:
                Rsum += v[i] * k1[i] * float(weight_power_mass(np.array([lo_]), np.array([hi_]), 1.0, a1, b1)[0])
    K = Lsum + t * Rsum
    return (K, Lsum, Rsum) if parts else K


def k_numeric(t: float, f, left: SpaceDesc, right: SpaceDesc, cfg: EvalConfig = DEFAULT,
              extra_starts=()) -> NormResult:
    """``K(t, f; X0, X1)`` by box-constrained minimisation over ``0 <= g <= |f|``."""
    if not t > 0:
        raise SpaceError("t must be positive")
    validate_element(left, f)
    validate_element(right, f)
    layout, v = layout_of(f)
    if layout.n == 0 or not np.any(v):
        return NormResult(0.0, 0.0)
    L = compile_node(left, layout, cfg)
    R = compile_node(right, layout, cfg)
    return split_minimize(L, R, v, 0.0, t, cfg, extra_starts)


@dataclass
class KProfile:
    """Sampled ``t -> K(t, f; X0, X1)``.

    ``pieces`` are ``(L_j, R_j)`` pairs of achieved decompositions; the
    profile values are the lower envelope ``min_j (L_j + t R_j)``, which makes
    them nondecreasing, concave and with ``K/t`` nonincreasing by
    construction. ``tail_slopes`` holds log-log slope and coefficient fits at
    both ends.
    """

    t: np.ndarray
    k: np.ndarray
    pieces: np.ndarray
    tail_slopes: dict
    exact: bool
    flags: list = field(default_factory=list)

    def k_at(self, t):
        t = np.atleast_1d(np.asarray(t, float))
        P = self.pieces
        return np.min(P[:, 0][None, :] + t[:, None] * P[:, 1][None, :], axis=1)

    def is_monotone(self, rtol: float = 1e-12) -> bool:
        return bool(np.all(np.diff(self.k) >= -rtol * np.abs(self.k[1:])))

    def is_concave(self, rtol: float = 1e-12) -> bool:
        t, k = self.t, self.k
        lam = (t[1:-1] - t[:-2]) / (t[2:] - t[:-2])
        chord = (1 - lam) * k[:-2] + lam * k[2:]
        return bool(np.all(k[1:-1] >= chord - rtol * np.abs(k[1:-1])))

    def k_over_t_nonincreasing(self, rtol: float = 1e-12) -> bool:
        # min_j (L_j / t + R_j) is monotone under rounding, unlike k / t
        P = self.pieces
        r = np.min(P[:, 0][None, :] / self.t[:, None] + P[:, 1][None, :], axis=1)
        return bool(np.all(np.diff(r) <= rtol * np.abs(r[:-1])))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "K"])
            for ti, ki in zip(self.t, self.k):
                w.writerow([repr(float(ti)), repr(float(ki))])


def _envelope_values(pieces, t):
    P = np.asarray(pieces, float)
    return np.min(P[:, 0][None, :] + np.asarray(t)[:, None] * P[:, 1][None, :], axis=1)


def _tail_fit(t, k, n=8):
    out = {}
    for end, sl in (("low", slice(0, n)), ("high", slice(-n, None))):
        tt, kk = t[sl], k[sl]
        good = kk > 0
        if np.sum(good) >= 2:
            s, c = np.polyfit(np.log(tt[good]), np.log(kk[good]), 1)
            out[end] = (float(np.clip(s, 0.0, 1.0)), float(math.exp(c)))
        else:
            out[end] = (0.0, 0.0)
    return out


def _exact_couple(left, right, f):
    w0, w1 = _l1_weight(left), _l1_weight(right)
    if w0 is None or w1 is None:
        return None
    return w0, w1


def k_profile(f, left: SpaceDesc, right: SpaceDesc, tmin: float = 1e-4, tmax: float = 1e4,
              points: int = 64, cfg: EvalConfig = DEFAULT) -> KProfile:
    """K-functional on a log grid; exact for weighted-L^1 couples, numeric otherwise."""
    if not (0 < tmin < tmax) or points < 2:
        raise SpaceError("need 0 < tmin < tmax and points >= 2")
    validate_element(left, f)
    validate_element(right, f)
    ts = np.geomspace(tmin, tmax, points)
    couple = _exact_couple(left, right, f)
    pieces = []
    flags = []
    if couple is not None:
        for t in ts:
            _, Lp, Rp = k_exact_weightedL1(float(t), f, *couple, parts=True)
            pieces.append((Lp, Rp))
    else:
        layout, v = layout_of(f)
        L = compile_node(left, layout, cfg)
        R = compile_node(right, layout, cfg)
        prev = None
        for t in ts:
            starts = [] if prev is None else [prev]
            r = split_minimize(L, R, v, 0.0, float(t), cfg, starts)
            d = r.decomposition
            prev = d.g
            pieces.append((d.left, d.right))
            if not r.converged:
                flags.append(f"t={t:.3g}: solver budget exhausted")
    layout, v = layout_of(f)
    Ln = compile_node(left, layout, cfg)
    Rn = compile_node(right, layout, cfg)
    n0, n1 = Ln.value(v), Rn.value(v)
    if math.isfinite(n1):
        pieces.append((0.0, n1))
    if math.isfinite(n0):
        pieces.append((n0, 0.0))
    pieces = np.array([p for p in pieces if math.isfinite(p[0]) and math.isfinite(p[1])], float)
    k = _envelope_values(pieces, ts)
    return KProfile(ts, k, pieces, _tail_fit(ts, k), couple is not None, flags)


# ---------------------------------------------------------------------------
# real method


def _lower_envelope(pieces):
    """Lines ``L + tR`` forming ``min_j`` on ``(0, inf)``: list of ``(L, R, t_from, t_to)``."""
    P = sorted({(float(a), float(b)) for a, b in pieces}, key=lambda p: (-p[1], p[0]))
    # keep, for each slope, the smallest intercept
    hull = []
    for L, R in P:
        if hull and hull[-1][1] == R:
            continue
        while hull:
            L1, R1 = hull[-1]
            # line (L,R) has smaller slope; it beats (L1,R1) for t > (L - L1)/(R1 - R)
            if L <= L1:
                hull.pop()
                continue
            if len(hull) >= 2:
                L0, R0 = hull[-2]
                x01 = (L1 - L0) / (R0 - R1)
                x1n = (L - L1) / (R1 - R)
                if x1n <= x01:
                    hull.pop()
                    continue
            break
        hull.append((L, R))
    out = []
    for i, (L, R) in enumerate(hull):
        t0 = 0.0 if i == 0 else (L - hull[i - 1][0]) / (hull[i - 1][1] - R)
        t1 = math.inf if i == len(hull) - 1 else (hull[i + 1][0] - L) / (R - hull[i + 1][1])
        out.append((L, R, t0, t1))
    return out


def _seg_integral(fun, t0, t1):
    """``int_{t0}^{t1} fun(t) dt/t`` by Gauss-Legendre in ``ln t``, unit-width chunks."""
    u0, u1 = math.log(t0), math.log(t1)
    n = max(1, int(math.ceil((u1 - u0) / 0.5)))
    edges = np.linspace(u0, u1, n + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (a + b) + 0.5 * (b - a) * _GLX
        total += 0.5 * (b - a) * float(np.sum(_GLW * fun(np.exp(u))))
    return total


def _envelope_norm(pieces, theta, q):
    """``|| t^{-theta} min_j(L_j + t R_j) ||_{L^q(dt/t)}`` with exact end pieces."""
    env = _lower_envelope(pieces)
    divergent = False
    if math.isinf(q):
        best = 0.0
        for L, R, t0, t1 in env:
            for t in (t0, t1):
                if t == 0:
                    val = 0.0 if L == 0 else math.inf
                elif math.isinf(t):
                    val = 0.0 if R == 0 else math.inf
                else:
                    val = t ** (-theta) * (L + t * R)
            # the function is convex in ln t on a piece, so endpoints suffice
                best = max(best, val)
        return best, not math.isfinite(best)
    total = 0.0
    for L, R, t0, t1 in env:
        if t0 == 0 and math.isinf(t1):
            if L == 0 and R == 0:
                continue
            return math.inf, True
        if t0 == 0:
            if L > 0:
                return math.inf, True
            total += R ** q * t1 ** ((1 - theta) * q) / ((1 - theta) * q)
        elif math.isinf(t1):
            if R > 0:
                return math.inf, True
            total += L ** q * t0 ** (-theta * q) / (theta * q)
        else:
            total += _seg_integral(lambda t: (t ** (-theta) * (L + t * R)) ** q, t0, t1)
    return total ** (1.0 / q), divergent


def _exact_K_integral(f, w0, w1, theta, q):
    """Real-method norm with exact K for power-weighted L^1 couples on functions."""
    a0, b0, s0 = _weight_parts(w0)
    a1, b1, s1 = _weight_parts(w1)
    if b0 or b1 or s0 or s1 or a0 == a1:
        return None
    g = f.padded()
    x = g.breakpoints
    v = np.abs(g.values)
    live = v > 0
    nodes = np.unique(np.concatenate([x[:-1][live], x[1:][live]]))
    nodes = nodes[nodes > 0]
    from_zero = x[:-1][live][0] == 0
    if nodes.size < 2 and not from_zero:
        return None
    if from_zero and (a0 - a1) <= 0:
        return None
    # K is smooth in t between the crossover values t = x^{a0-a1}
    tb = np.sort(nodes ** (a0 - a1))
    Kfun = lambda ts: np.array([k_exact_weightedL1(float(t), g, w0, w1) for t in np.atleast_1d(ts)])
    lo, hi = tb[0], tb[-1]
    # beyond the crossover range K is linear (t R) below and constant (L) above
    _, Llo, Rlo = k_exact_weightedL1(float(lo), g, w0, w1, parts=True)
    _, Lhi, Rhi = k_exact_weightedL1(float(hi), g, w0, w1, parts=True)
    below = Llo + lo * Rlo  # equals lo * R_total
    above = Lhi + hi * Rhi
    if math.isinf(q):
        ts = np.geomspace(lo * (1e-12 if from_zero else 1.0), hi, 2000)
        return float(np.max(ts ** (-theta) * Kfun(ts)))
    if from_zero:
        # the first cell reaches 0: below lo the crossover stays inside it, K is smooth
        # and t^-theta K(t) decays like t^(1-theta) up to logs; integrate decade by decade
        total, top = 0.0, lo
        for _ in range(400):
            part = _seg_integral(lambda ts: (ts ** (-theta) * Kfun(ts)) ** q, top / 10, top)
            total += part
            top /= 10
            if part <= 1e-17 * total:
                break
    else:
        total = (below / lo) ** q * lo ** ((1 - theta) * q) / ((1 - theta) * q)
    total += above ** q * hi ** (-theta * q) / (theta * q)
    for t0, t1 in zip(tb[:-1], tb[1:]):
        if t1 > t0:
            total += _seg_integral(lambda ts: (ts ** (-theta) * Kfun(ts)) ** q, t0, t1)
    return total ** (1.0 / q)


def real_interp_norm(f, left: SpaceDesc, right: SpaceDesc, theta: float, q: float,
                     tmin: float = 1e-4, tmax: float = 1e4, points: int = 64,
                     cfg: EvalConfig = DEFAULT) -> NormResult:
    """``(int_0^inf (t^{-theta} K(t))^q dt/t)^{1/q}`` (sup form for ``q = inf``)."""
    if not 0 < theta < 1:
        raise SpaceError("theta must lie in (0,1)")
    if q < 1:
        raise SpaceError("q must be >= 1")
    couple = _exact_couple(left, right, f)
    if couple is not None and isinstance(f, PCFun):
        val = _exact_K_integral(f, couple[0], couple[1], theta, q)
        if val is not None:
            return NormResult(val, 1e-10, 0, not math.isfinite(val))
    if couple is not None and isinstance(f, Seq):
        # K is piecewise linear with kinks at t = w0_k / w1_k: the envelope is exact
        a0, _, _ = _weight_parts(couple[0])
        a1, _, _ = _weight_parts(couple[1])
        k = np.arange(1, f.support + 1, dtype=float)
        ts = np.unique(k ** (a0 - a1))
        pieces = [k_exact_weightedL1(float(t), f, *couple, parts=True)[1:] for t in ts]
        pieces += [k_exact_weightedL1(float(t) * (1 - 1e-9), f, *couple, parts=True)[1:] for t in ts]
        val, div = _envelope_norm(pieces, theta, q)
        return NormResult(val, 1e-10, 0, div)
    prof = k_profile(f, left, right, tmin, tmax, points, cfg)
    val, div = _envelope_norm(prof.pieces, theta, q)
    return NormResult(val, cfg.tol, len(prof.pieces), div, not prof.flags, notes=prof.flags)


def real_interp_solve(L: Node, R: Node, v, c, theta, q, cfg: EvalConfig = DEFAULT,
                      tmin=1e-4, tmax=1e4, points=64) -> NormResult:
    """Real-method norm on a compiled layout (used for nested RealK nodes)."""
    if c:
        raise SpaceError("real-method node cannot follow an operator with an infinite tail")
    pieces = []
    prev = None
    for t in np.geomspace(tmin, tmax, points):
        r = split_minimize(L, R, v, 0.0, float(t), cfg, [] if prev is None else [prev])
        prev = r.decomposition.g
        pieces.append((r.decomposition.left, r.decomposition.right))
    n0, n1 = L.value(v), R.value(v)
    if math.isfinite(n1):
        pieces.append((0.0, n1))
    if math.isfinite(n0):
        pieces.append((n0, 0.0))
    val, div = _envelope_norm(pieces, theta, q)
    return NormResult(val, cfg.tol, len(pieces), div)


def real_method_constant(theta: float, q: float) -> float:
    """``|| t^{-theta} min(1,t) ||_{L^q(dt/t)}`` in closed form."""
    if math.isinf(q):
        return 1.0
    return (1.0 / ((1 - theta) * q) + 1.0 / (theta * q)) ** (1.0 / q)


# ---------------------------------------------------------------------------
# the operator S


def _leaf_of(space: SpaceDesc):
    """``(p, alpha)`` for ``W(Lp(p,[0,inf),x^a), invt)``-style descriptors."""
    if isinstance(space, Weighted) and isinstance(space.child, LpLeaf):
        a_extra, _ = space.weight.exponents
        a_leaf, _ = space.child.weight.exponents
        return space.child.p, a_leaf, a_extra
    if isinstance(space, LpLeaf):
        a, _ = space.weight.exponents
        return space.p, a, 0.0
    raise SpaceError("check_S_bounded needs W(Lp(p,[0,inf)[,pow(a)]), invt)")


def s_operator(f: PCFun) -> ExactFun:
    """``Sf(t)/t = C(f/s)(t) + C*(f/s)(t)`` in exact form."""
    if f.domain != HALF:
        raise SpaceError("S acts on the half-line")
    E = ExactFun.from_pcfun(f).times_invt()
    return E.cesaro() + E.copson()


def check_S_bounded(x: PCFun, space: SpaceDesc) -> float:
    """``||Sf||_{X(w0)} / ||f||_{X(w0)}`` with ``w0 = 1/t`` and ``X = L^p(t^a)``.

    Uses ``||Sf||_{X(w0)} = ||C(f w0) + C*(f w0)||_X`` evaluated exactly.
    """
    if x.domain != HALF:
        raise SpaceError("check_S_bounded needs a half-line function")
    p, a_leaf, a_extra = _leaf_of(space)
    if a_extra != -1.0:
        raise SpaceError("the outer weight must be invt (1/t)")
    if not np.any(x.values):
        return 0.0
    if x.breakpoints[0] <= 0 and x.values[0] != 0:
        raise SpaceError("f w0 must be integrable near 0")
    g = s_operator(x)
    num = g.lp_norm(p, a_leaf) if math.isfinite(p) else g.sup(x.breakpoints[0] * 1e-6, x.breakpoints[-1] * 1e6)
    av = np.abs(x.values)
    a, b = x.breakpoints[:-1], x.breakpoints[1:]
    if math.isfinite(p):
        den = float(np.sum(av ** p * weight_power_mass(a, b, p, a_leaf - 1.0))) ** (1.0 / p)
    else:
        from .spaces import weight_cell_sup
        den = float(np.max(av * weight_cell_sup(a, b, a_leaf - 1.0)))
    return num / den


def s_direct(x: PCFun, t) -> np.ndarray:
    """``Sf(t)`` from its defining kernel: ``K(t, f/s; L^1, L^1(1/s))``."""
    t = np.atleast_1d(np.asarray(t, float))
    # int min(1, t/s) f(s)/s ds split at s = t, using cell integrals of f/s and f/s^2
    xs, v = x.breakpoints, np.abs(x.values)
    a, b = xs[:-1], xs[1:]
    out = np.zeros_like(t)
    for j, tj in enumerate(t):
        lo = np.minimum(b, tj)
        m1 = np.where(lo > a, v * np.log(np.where(lo > a, lo, 1.0) / np.where(a > 0, a, 1.0)), 0.0)
        hi_a = np.maximum(a, tj)
        m2 = np.where(b > hi_a, v * (1.0 / hi_a - 1.0 / b), 0.0)
        out[j] = float(np.sum(m1) + tj * np.sum(m2))
    return out
