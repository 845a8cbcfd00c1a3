"""Recursive norm evaluation over space descriptors.

A descriptor is compiled against the layout of an element (sequence length or
breakpoint grid) into a tree of nodes. Every node maps a nonnegative cell
vector plus an optional power-law tail ``c * t**gamma`` beyond the layout to a
norm value; differentiable nodes also return the gradient, which the
decomposition solvers (sums, Calderón-Lozanovskii, K-functional) use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import optimize, special

from . import kernels
from .spaces import (
    CL, HALF, UNIT, Cap, Ces, Cop, LpLeaf, PCFun, RealK, Seq, SeqLeaf, SpaceDesc,
    SpaceError, Sum, Tan, Weight, Weighted, refine_grid, validate_element,
    weight_cell_sup, weight_power_mass,
)

EXACT_TOL = 1e-12
SOLVER_TOL = 1e-6
MULTISTART = 8
ITER_CAP = 5000


@dataclass
class NormResult:
    """Norm value with an error estimate.

    ``divergent`` marks an infinite norm (for truncated computations, the
    value is the truncated one and ``witness`` records the truncation scale).
    """

    value: float
    error_bound: float = EXACT_TOL
    iterations: int = 0
    divergent: bool = False
    converged: bool = True
    witness: dict | None = None
    decomposition: Any = None
    notes: list = field(default_factory=list)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class EvalConfig:
    """Numerical settings for compiled evaluation."""

    refine: int = 2
    seq_factor: int = 4
    tmax: float = 1e6
    multistart: int = MULTISTART
    iter_cap: int = ITER_CAP
    tol: float = SOLVER_TOL
    polish: int = 60
    tan_ratio: float = 1.0001


DEFAULT = EvalConfig()


# ---------------------------------------------------------------------------
# layouts


@dataclass(frozen=True, eq=False)
class Layout:
    kind: str  # "seq" or "fn"
    n: int
    x: np.ndarray | None = None
    domain: str | None = None
    gamma: float | None = None  # tail exponent, None when there is no tail

    @property
    def end(self) -> float:
        return float(self.n) if self.kind == "seq" else float(self.x[-1])


def layout_of(x) -> tuple[Layout, np.ndarray]:
    """Layout and nonnegative cell vector of an element."""
    if isinstance(x, Seq):
        n = x.support
        v = np.abs(x.values[:n])
        return Layout("seq", n), v
    if isinstance(x, PCFun):
        g = x.padded()
        return Layout("fn", g.ncells, g.breakpoints, g.domain), np.abs(g.values)
    raise SpaceError(f"unsupported element {type(x).__name__}")


def _cell_mid(x):
    a, b = x[:-1], x[1:]
    return np.where(a > 0, np.sqrt(np.maximum(a, 0) * b), 0.5 * (a + b))


# ---------------------------------------------------------------------------
# nodes


class Node:
    layout: Layout
    differentiable = True

    def value(self, v, c=0.0) -> float:
        return self.value_grad(v, c, need_grad=False)[0]

    def value_grad(self, v, c=0.0, need_grad=True):
        raise NotImplementedError

    def error(self) -> float:
        return EXACT_TOL


class Leaf(Node):
    """Weighted L^p / l^p norm with exact cell masses and an analytic tail."""

    def __init__(self, layout: Layout, p: float, alpha: float, beta: float, sampled):
        self.layout = layout
        self.p = float(p)
        self.alpha, self.beta = float(alpha), float(beta)
        self.sampled = sampled  # (PCFun, exponent) or None
        lay = layout
        if lay.kind == "seq":
            k = np.arange(1, lay.n + 1, dtype=float)
            w = k ** self.alpha
            if sampled is not None:
                w = w * np.power(sampled[0](k), sampled[1])
            self.mass = w ** self.p if math.isfinite(self.p) else w
        else:
            a, b = lay.x[:-1], lay.x[1:]
            if math.isfinite(self.p):
                self.mass = weight_power_mass(a, b, self.p, self.alpha, self.beta, sampled)
            else:
                self.mass = weight_cell_sup(a, b, self.alpha, self.beta, sampled)
        self.tail_factor = self._tail_factor()

    def _tail_factor(self) -> float:
        """Norm contribution of the tail ``t**gamma`` (to the p-th power for finite p)."""
        lay = self.layout
        if lay.gamma is None:
            return 0.0
        g = lay.gamma + self.alpha
        s_mult = 1.0
        if self.sampled is not None:
            s_mult = float(np.power(self.sampled[0](np.array([lay.end]))[0], self.sampled[1]))
        if lay.kind == "seq":
            if math.isinf(self.p):
                return (lay.n + 1) ** g * s_mult if g <= 0 else math.inf
            s = -g * self.p
            return float(special.zeta(s, lay.n + 1)) * s_mult ** self.p if s > 1 else math.inf
        if lay.domain != HALF:
            return 0.0
        X = lay.end
        if math.isinf(self.p):
            return X ** g * s_mult if g <= 0 else math.inf
        e = g * self.p + 1.0
        return X ** e / (-e) * s_mult ** self.p if e < 0 else math.inf

    def value_grad(self, v, c=0.0, need_grad=True):
        v = np.asarray(v, float)
        m = self.mass
        if math.isinf(self.p):
            terms = np.where(v != 0, np.abs(v) * m, 0.0)
            tail = abs(c) * self.tail_factor if c else 0.0
            i = int(np.argmax(terms)) if terms.size else -1
            top = terms[i] if terms.size else 0.0
            val = max(top, tail)
            if not need_grad:
                return val, None, None
            gv = np.zeros_like(v)
            gc = 0.0
            if val > 0 and math.isfinite(val):
                if tail >= top and c:
                    gc = self.tail_factor * np.sign(c)
                elif terms.size:
                    gv[i] = m[i] * np.sign(v[i])
            return val, gv, gc
        p = self.p
        av = np.abs(v)
        with np.errstate(invalid="ignore", over="ignore"):
            terms = np.where(av != 0, av ** p * m, 0.0)
        tail = abs(c) ** p * self.tail_factor if c else 0.0
        S = float(np.sum(terms)) + tail
        val = S ** (1.0 / p)
        if not need_grad:
            return val, None, None
        if not (val > 0) or not math.isfinite(val):
            return val, np.zeros_like(v), 0.0
        scale = val ** (1.0 - p)
        with np.errstate(invalid="ignore"):
            gv = np.where(av != 0, np.sign(v) * av ** (p - 1) * m, 0.0) * scale
        if p == 1:
            # an infinite cell weight makes the slope infinite there, which is the right answer
            with np.errstate(invalid="ignore"):
                gv = np.where(av != 0, np.sign(v) * m, m)  # right derivative at 0
        gc = (np.sign(c) * abs(c) ** (p - 1) * self.tail_factor * scale) if c else (
            self.tail_factor if p == 1 else 0.0)
        return val, gv, gc


class OpNode(Node):
    """Linear or sublinear operator feeding a child norm."""

    def __init__(self, layout: Layout, child: Node | None = None):
        self.layout = layout
        self.child = child

    def forward(self, v, c):
        raise NotImplementedError

    def backward(self, gw, gc):
        raise NotImplementedError

    def value_grad(self, v, c=0.0, need_grad=True):
        w, cw = self.forward(np.asarray(v, float), c)
        val, gw, gcw = self.child.value_grad(w, cw, need_grad)
        if not need_grad:
            return val, None, None
        gv, gc = self.backward(gw, gcw)
        return val, gv, gc

    @property
    def differentiable(self):
        return self.child.differentiable

    def error(self):
        return self.child.error() + self.own_error()

    def own_error(self):
        return EXACT_TOL


def _hurwitz(s, q):
    return float(special.zeta(s, q)) if s > 1 else math.inf


class SeqCes(OpNode):
    def __init__(self, layout: Layout, cfg: EvalConfig):
        self.inp = layout
        n = layout.n
        self.m = max(cfg.seq_factor * n, n + 1)
        g = layout.gamma
        self.k = np.arange(1, self.m + 1, dtype=float)
        if g is None:
            self.ext = np.zeros(self.m - n)
            out_gamma, self.kappa = -1.0, 0.0
        else:
            self.ext = self.k[n:] ** g
            if g < -1:
                out_gamma, self.kappa = -1.0, _hurwitz(-g, self.m + 1)
            elif g == -1:
                out_gamma, self.kappa = -1.0, 0.0
            else:
                out_gamma, self.kappa = g, 1.0 / (g + 1.0)
        self.sum_into_tail = g is None or g <= -1
        super().__init__(Layout("seq", self.m, gamma=out_gamma))

    def forward(self, v, c):
        n = self.inp.n
        lifted = np.concatenate([v, c * self.ext]) if self.m > n else v
        S = np.cumsum(lifted)
        ct = (S[-1] if self.sum_into_tail else 0.0) + self.kappa * c
        return S / self.k, ct

    def backward(self, gw, gc):
        n = self.inp.n
        r = np.cumsum((gw / self.k)[::-1])[::-1]
        if self.sum_into_tail:
            r = r + gc
        gv = r[:n]
        gcin = float(np.dot(r[n:], self.ext)) + self.kappa * gc
        return gv, gcin


class SeqCop(OpNode):
    def __init__(self, layout: Layout, cfg: EvalConfig):
        self.inp = layout
        n = layout.n
        self.k = np.arange(1, n + 1, dtype=float)
        g = layout.gamma
        if g is None:
            self.const, out_gamma, self.tail_mult = 0.0, None, 0.0
        else:
            self.const = _hurwitz(1.0 - g, n + 1)
            out_gamma = g
            self.tail_mult = 1.0 / (-g) if g < 0 else math.inf
        super().__init__(Layout("seq", n, gamma=out_gamma))

    def forward(self, v, c):
        q = v / self.k
        out = np.cumsum(q[::-1])[::-1]
        if c:
            out = out + c * self.const
        return out, c * self.tail_mult if c else 0.0

    def backward(self, gw, gc):
        gv = np.cumsum(gw) / self.k
        gcin = float(np.sum(gw)) * self.const + gc * self.tail_mult if self.inp.gamma is not None else 0.0
        return gv, gcin


class SeqTan(OpNode):
    def __init__(self, layout: Layout, cfg: EvalConfig):
        self.inp = layout
        g = layout.gamma
        self.tsup = 0.0 if g is None else ((layout.n + 1) ** g if g <= 0 else math.inf)
        super().__init__(Layout("seq", layout.n, gamma=g))

    def forward(self, v, c):
        tv = abs(c) * self.tsup if c else 0.0
        ext = np.concatenate([np.abs(v), [tv]])
        rev = ext[::-1]
        run = np.maximum.accumulate(rev)
        # index (in ext) that attains each running max
        idx_rev = np.arange(len(rev))
        best = np.where(rev == run, idx_rev, 0)
        best = np.maximum.accumulate(best)
        self._arg = (len(ext) - 1 - best[::-1])[:-1]
        self._sign = np.sign(v)
        self._n = len(v)
        return run[::-1][:-1], c

    def backward(self, gw, gc):
        n = self._n
        acc = np.zeros(n + 1)
        np.add.at(acc, self._arg, gw)
        gv = acc[:n] * np.where(self._sign == 0, 1.0, self._sign)
        return gv, gc + acc[n] * self.tsup


class SeqWeight(OpNode):
    def __init__(self, layout: Layout, w: Weight):
        self.inp = layout
        self.w = w.seq_values(layout.n)
        al, _ = w.exponents
        s, e = w.sampled_factor
        self.tail_mult = 1.0 if s is None else float(np.power(s(np.array([layout.n + 1.0]))[0], e))
        g = None if layout.gamma is None else layout.gamma + al
        super().__init__(Layout("seq", layout.n, gamma=g))

    def forward(self, v, c):
        return v * self.w, c * self.tail_mult

    def backward(self, gw, gc):
        return gw * self.w, gc * self.tail_mult


def _ext_cell_means(x, gamma):
    """Cell means of ``t**gamma`` on grid ``x``."""
    a, b = x[:-1], x[1:]
    if gamma == -1:
        return np.log(b / a) / (b - a)
    e = gamma + 1.0
    return a ** e * np.expm1(e * np.log(b / a)) / e / (b - a)


def _quad_error(x, v):
    """Heuristic relative error of sampling an operator image on the refined grid:
    squared largest log-width among cells carrying mass, over 8."""
    a, b = x[:-1], x[1:]
    live = (v != 0)
    h = np.where(a > 0, np.log(b / np.where(a > 0, a, 1.0)), 1.0)
    h = h[live]
    return float(np.max(h)) ** 2 / 8.0 if h.size else 0.0


def _fine_grid(x: np.ndarray, k: int, ratio: float) -> tuple[np.ndarray, np.ndarray]:
    """Refine cells away from 0 geometrically until neighbouring nodes differ by at
    most ``ratio``; a cell starting at 0 keeps ``k`` pieces. Returns the grid and the
    number of pieces per input cell."""
    a, b = x[:-1], x[1:]
    with np.errstate(divide="ignore"):
        need = np.ceil(np.log(np.where(a > 0, b / np.where(a > 0, a, 1.0), 1.0)) / math.log(ratio))
    counts = np.where(a > 0, np.maximum(need, k), k).astype(int)
    parts = [np.linspace(a[i], b[i], counts[i] + 1)[:-1] if a[i] == 0
             else np.geomspace(a[i], b[i], counts[i] + 1)[:-1] for i in range(len(a))]
    return np.concatenate(parts + [x[-1:]]), counts


class FnCes(OpNode):
    """Cell means of ``C f`` on a refined grid.

    With ``fine`` set (a node ratio such as 1.0005) the refinement follows the
    node ratio instead of a fixed count. A Tandori majorant applied next then sees
    ``C f = A + B/x`` at near pointwise resolution.
    """

    def __init__(self, layout: Layout, cfg: EvalConfig, fine: float | None = None):
        self.inp = layout
        xin = layout.x
        if fine is None:
            xr = refine_grid(xin, cfg.refine)
            self.counts = np.full(len(xin) - 1, cfg.refine)
        else:
            xr, self.counts = _fine_grid(xin, cfg.refine, fine)
        self.starts = np.concatenate([[0], np.cumsum(self.counts)[:-1]])
        self.n_ref = len(xr) - 1
        if layout.domain == HALF:
            ext = kernels.extension_grid(xr[-1], max(cfg.tmax, xr[-1]))
        else:
            ext = np.empty(0)
        x = np.concatenate([xr, ext])
        self.x = x
        self.w = np.diff(x)
        self.lam = kernels.log_ratio_over_width(x[:-1], x[1:])
        self.mult = 1.0 - x[:-1] * self.lam
        g = layout.gamma
        X = x[-1]
        if layout.domain != HALF:
            out_gamma, self.kappa, self.sum_into_tail = None, 0.0, False
        elif g is None:
            out_gamma, self.kappa, self.sum_into_tail = -1.0, 0.0, True
        elif g < -1:
            out_gamma, self.kappa, self.sum_into_tail = -1.0, X ** (g + 1) / (-g - 1), True
        elif g == -1:
            out_gamma, self.kappa, self.sum_into_tail = -1.0, 0.0, True
        else:
            out_gamma, self.kappa, self.sum_into_tail = g, 1.0 / (g + 1.0), False
        self.ext_means = _ext_cell_means(x[self.n_ref:], g) if (g is not None and len(ext)) else np.zeros(len(ext))
        super().__init__(Layout("fn", len(x) - 1, x, layout.domain, out_gamma))

    def own_error(self):
        return self._err

    def forward(self, v, c):
        self._err = _quad_error(self.inp.x, v)
        lifted = np.concatenate([np.repeat(v, self.counts), c * self.ext_means])
        m = lifted * self.w
        F = np.concatenate([[0.0], np.cumsum(m)])
        out = lifted * self.mult + self.lam * F[:-1]
        ct = (F[-1] if self.sum_into_tail else 0.0) + self.kappa * c
        return out, ct

    def backward(self, gw, gc):
        # out_i = lifted_i * mult_i + lam_i * sum_{k<i} lifted_k w_k
        s = gw * self.lam
        suffix = np.concatenate([np.cumsum(s[::-1])[::-1][1:], [0.0]])
        glift = gw * self.mult + self.w * suffix
        if self.sum_into_tail:
            glift = glift + gc * self.w
        gv = np.add.reduceat(glift[: self.n_ref], self.starts)
        gcin = float(np.dot(glift[self.n_ref:], self.ext_means)) + self.kappa * gc
        return gv, gcin


class FnCop(OpNode):
    def __init__(self, layout: Layout, cfg: EvalConfig):
        self.inp = layout
        xr = refine_grid(layout.x, cfg.refine)
        self.r = cfg.refine
        a, b = xr[:-1], xr[1:]
        pos = a > 0
        self.logr = np.where(pos, np.log(b / np.where(pos, a, 1.0)), np.inf)
        self.mult = 1.0 - a * kernels.log_ratio_over_width(a, b)
        self.prepend = xr[0] > 0
        x = np.concatenate([[0.0], xr]) if self.prepend else xr
        g = layout.gamma
        X = xr[-1]
        if g is None or layout.domain != HALF:
            self.endc, out_gamma, self.tail_mult = 0.0, None, 0.0
        else:
            self.endc = X ** g / (-g) if g < 0 else math.inf
            out_gamma, self.tail_mult = g, (1.0 / (-g) if g < 0 else math.inf)
        super().__init__(Layout("fn", len(x) - 1, x, layout.domain, out_gamma))

    def own_error(self):
        return self._err

    def forward(self, v, c):
        self._err = _quad_error(self.inp.x, v)
        lifted = np.repeat(v, self.r)
        with np.errstate(invalid="ignore"):
            contrib = np.where(lifted != 0, lifted * self.logr, 0.0)
        R = np.concatenate([np.cumsum(contrib[::-1])[::-1], [0.0]])
        if c:
            R = R + c * self.endc
        out = R[1:] + lifted * self.mult
        if self.prepend:
            out = np.concatenate([[R[0]], out])
        return out, (c * self.tail_mult if c else 0.0)

    def backward(self, gw, gc):
        if self.prepend:
            g0, gw = gw[0], gw[1:]
        else:
            g0 = 0.0
        # R_{i+1} = sum_{k>i} contrib_k ; out_i gets R_{i+1}; prepended cell gets R_0
        pref = np.concatenate([[0.0], np.cumsum(gw)[:-1]])  # sum_{i<k} gw_i
        acc = pref + g0
        with np.errstate(invalid="ignore"):
            glift = gw * self.mult + np.where(acc != 0, self.logr * acc, 0.0)
        gv = glift.reshape(-1, self.r).sum(axis=1)
        gcin = (float(np.sum(gw)) + g0) * self.endc + gc * self.tail_mult if self.inp.gamma is not None and self.inp.domain == HALF else 0.0
        return gv, gcin


class FnTan(OpNode):
    def __init__(self, layout: Layout, cfg: EvalConfig):
        self.inp = layout
        x = layout.x
        self.prepend = x[0] > 0
        if self.prepend:
            x = np.concatenate([[0.0], x])
        g = layout.gamma
        self.tsup = 0.0 if g is None else (layout.x[-1] ** g if g <= 0 else math.inf)
        self.seq = SeqTan(Layout("seq", layout.n, gamma=g), cfg)
        self.seq.tsup = self.tsup
        super().__init__(Layout("fn", len(x) - 1, x, layout.domain, g))

    def forward(self, v, c):
        out, c = self.seq.forward(v, c)
        if self.prepend:
            out = np.concatenate([[out[0]], out])
        return out, c

    def backward(self, gw, gc):
        if self.prepend:
            gw = np.concatenate([[gw[0] + gw[1]], gw[2:]])
        return self.seq.backward(gw, gc)


class FnWeight(OpNode):
    def __init__(self, layout: Layout, w: Weight):
        self.inp = layout
        a, b = layout.x[:-1], layout.x[1:]
        self.w = w.cell_mean(a, b)
        al, _ = w.exponents
        s, e = w.sampled_factor
        self.tail_mult = 1.0 if s is None else float(np.power(s(np.array([layout.x[-1]]))[0], e))
        g = None if layout.gamma is None else layout.gamma + al
        super().__init__(Layout("fn", layout.n, layout.x, layout.domain, g))

    def forward(self, v, c):
        with np.errstate(invalid="ignore"):
            return np.where(v != 0, v * self.w, 0.0), c * self.tail_mult

    def backward(self, gw, gc):
        return gw * self.w, gc * self.tail_mult


class CapNode(Node):
    def __init__(self, layout, left: Node, right: Node):
        self.layout, self.left, self.right = layout, left, right

    @property
    def differentiable(self):
        return self.left.differentiable and self.right.differentiable

    def value_grad(self, v, c=0.0, need_grad=True):
        a = self.left.value_grad(v, c, need_grad)
        b = self.right.value_grad(v, c, need_grad)
        return a if a[0] >= b[0] else b

    def error(self):
        return max(self.left.error(), self.right.error())


class SolverNode(Node):
    """Sum, Calderón-Lozanovskii and real-method nodes: value only."""

    differentiable = False

    def __init__(self, layout, desc, left: Node, right: Node, cfg: EvalConfig):
        self.layout, self.desc, self.left, self.right, self.cfg = layout, desc, left, right, cfg
        self.last: NormResult | None = None

    def value_grad(self, v, c=0.0, need_grad=True):
        if need_grad:
            raise SpaceError(f"gradient through {type(self.desc).__name__} nodes is not supported; "
                             "nested decompositions cannot be optimised jointly")
        res = self.solve(np.asarray(v, float), c)
        self.last = res
        return res.value, None, None

    def solve(self, v, c) -> NormResult:
        d = self.desc
        if isinstance(d, Sum):
            return split_minimize(self.left, self.right, v, c, 1.0, self.cfg)
        from . import interpolation
        if isinstance(d, CL):
            return interpolation.cl_solve(d.phi, self.left, self.right, v, c, self.cfg)
        if isinstance(d, RealK):
            return interpolation.real_interp_solve(self.left, self.right, v, c, d.theta, d.q, self.cfg)
        raise SpaceError(f"unsupported node {d!r}")

    def error(self):
        return self.cfg.tol + max(self.left.error(), self.right.error())


# ---------------------------------------------------------------------------
# compilation


def _leaf_node(leaf, layout: Layout, extra: Weight | None = None) -> Node:
    w = leaf.weight
    al, be = w.exponents
    s, e = w.sampled_factor
    sampled = None if s is None else (s, e)
    if extra is not None:
        a2, b2 = extra.exponents
        al, be = al + a2, be + b2
        s2, e2 = extra.sampled_factor
        if s2 is not None:
            if sampled is not None:
                raise SpaceError("two sampled weights on one leaf are not supported")
            sampled = (s2, e2)
    if isinstance(leaf, LpLeaf):
        if layout.kind != "fn":
            raise SpaceError("function leaf on a sequence layout")
        if leaf.domain != layout.domain:
            raise SpaceError("domain mismatch between leaf and element")
    elif layout.kind != "seq":
        raise SpaceError("sequence leaf on a function layout")
    return Leaf(layout, leaf.p, al, be, sampled)


def _majorant_next(space: SpaceDesc) -> bool:
    while isinstance(space, Weighted):
        space = space.child
    return isinstance(space, Tan)


def compile_node(space: SpaceDesc, layout: Layout, cfg: EvalConfig = DEFAULT) -> Node:
    """Compile ``space`` against ``layout`` into an evaluation tree."""
    seq = layout.kind == "seq"
    if isinstance(space, (LpLeaf, SeqLeaf)):
        return _leaf_node(space, layout)
    if isinstance(space, Weighted):
        if isinstance(space.child, (LpLeaf, SeqLeaf)):
            return _leaf_node(space.child, layout, space.weight)
        op = SeqWeight(layout, space.weight) if seq else FnWeight(layout, space.weight)
        op.child = compile_node(space.child, op.layout, cfg)
        return op
    if isinstance(space, (Ces, Cop, Tan)):
        cls = {Ces: (SeqCes, FnCes), Cop: (SeqCop, FnCop), Tan: (SeqTan, FnTan)}[type(space)]
        if not seq and isinstance(space, Ces) and _majorant_next(space.child):
            # the majorant of cell means undershoots sup C f; resolve C f finely first
            op = FnCes(layout, cfg, fine=cfg.tan_ratio)
        else:
            op = cls[0 if seq else 1](layout, cfg)
        op.child = compile_node(space.child, op.layout, cfg)
        return op
    if isinstance(space, Cap):
        return CapNode(layout, compile_node(space.left, layout, cfg), compile_node(space.right, layout, cfg))
    if isinstance(space, (Sum, CL, RealK)):
        return SolverNode(layout, space, compile_node(space.left, layout, cfg),
                          compile_node(space.right, layout, cfg), cfg)
    raise SpaceError(f"cannot evaluate {space!r}")


def _find_solver(node: Node):
    if isinstance(node, SolverNode):
        return node
    for attr in ("child", "left", "right"):
        sub = getattr(node, attr, None)
        if sub is not None:
            found = _find_solver(sub)
            if found is not None:
                return found
    return None


def norm(space: SpaceDesc, x, cfg: EvalConfig = DEFAULT) -> NormResult:
    """``||x||_X`` for the space described by ``space``."""
    validate_element(space, x)
    layout, v = layout_of(x)
    if layout.n == 0 or not np.any(v):
        return NormResult(0.0, 0.0)
    node = compile_node(space, layout, cfg)
    val = node.value(v, 0.0)
    res = NormResult(float(val), node.error())
    solver = _find_solver(node)
    if solver is not None and solver.last is not None:
        res.iterations = solver.last.iterations
        res.converged = solver.last.converged
        res.decomposition = solver.last.decomposition
        res.error_bound = max(res.error_bound, solver.last.error_bound)
        res.divergent = solver.last.divergent
    if not math.isfinite(res.value):
        res.divergent = True
        res.witness = {"layout_end": layout.end, "cells": layout.n}
    return res


def norm_value(space: SpaceDesc, x, cfg: EvalConfig = DEFAULT) -> float:
    return norm(space, x, cfg).value


# ---------------------------------------------------------------------------
# decomposition solver


@dataclass
class Split:
    g: np.ndarray
    c0: float
    left: float
    right: float


def _split_eval(L: Node, R: Node, v, c, t, z, need_grad):
    n = len(v)
    g, c0 = z[:n], (z[n] if len(z) > n else 0.0)
    a = L.value_grad(g, c0, need_grad)
    b = R.value_grad(v - g, c - c0, need_grad)
    val = a[0] + t * b[0]
    if not need_grad:
        return val, None, a[0], b[0]
    grad = a[1] - t * b[1]
    if len(z) > n:
        grad = np.concatenate([grad, [a[2] - t * b[2]]])
    return val, grad, a[0], b[0]


def split_minimize(L: Node, R: Node, v, c=0.0, t: float = 1.0, cfg: EvalConfig = DEFAULT,
                   extra_starts=()) -> NormResult:
    """``min_{0<=g<=v} ||g||_L + t ||v-g||_R`` (tail split included when ``c != 0``).

    Threshold families are scanned by 1-D search, the best starts are
    polished with L-BFGS-B, and a short projected-subgradient run guards
    against nonsmooth stalls. The returned value is always achieved by a
    feasible split, so it is an upper bound.
    """
    if not (L.differentiable and R.differentiable):
        raise SpaceError("decomposition children must be differentiable (no nested sums)")
    v = np.asarray(v, float)
    n = len(v)
    has_tail = bool(c)
    dim = n + (1 if has_tail else 0)
    upper = np.concatenate([v, [c]]) if has_tail else v.copy()

    def fval(z):
        return _split_eval(L, R, v, c, t, z, False)[0]

    def pack(g, frac):
        return np.concatenate([g, [frac * c]]) if has_tail else g

    starts = []
    for frac in ((0.0, 1.0) if has_tail else (0.0,)):
        starts += [pack(np.zeros(n), frac), pack(v.copy(), frac), pack(0.5 * v, frac)]
    vmax = float(np.max(v)) if n else 0.0
    evals = 0
    if vmax > 0:
        pos = v[v > 0]
        lo, hi = math.log(float(np.min(pos))) - 1.0, math.log(vmax)
        for family in ("top", "bottom"):
            for frac in ((0.0, 1.0) if has_tail else (0.0,)):
                def h(s, family=family, frac=frac):
                    lam = math.exp(s)
                    g = np.maximum(v - lam, 0.0) if family == "top" else np.minimum(v, lam)
                    val = fval(pack(g, frac))
                    return val if math.isfinite(val) else 1e300
                grid = np.linspace(lo, hi, 33)
                vals = [h(s) for s in grid]
                j = int(np.argmin(vals))
                a_, b_ = grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]
                r = optimize.minimize_scalar(h, bounds=(a_, b_), method="bounded",
                                             options={"xatol": 1e-12, "maxiter": 200})
                evals += r.nfev + len(grid)
                s_best = float(r.x) if r.fun <= vals[j] else float(grid[j])
                lam = math.exp(s_best)
                g = np.maximum(v - lam, 0.0) if family == "top" else np.minimum(v, lam)
                starts.append(pack(g, frac))
        for q in (0.25, 0.5, 0.75):
            k = int(q * n)
            pre = np.where(np.arange(n) < k, v, 0.0)
            starts += [pack(pre, 0.0), pack(v - pre, 1.0)]
    starts += [np.asarray(s, float) for s in extra_starts]
    scored = sorted(((fval(s), i) for i, s in enumerate(starts)), key=lambda p: (p[0], p[1]))
    evals += len(starts)
    best_val, best_z = math.inf, starts[scored[0][1]]
    iters = 0
    converged = False
    bounds = list(zip(np.zeros(dim), upper))
    fun = lambda z: _split_eval(L, R, v, c, t, z, True)[:2]
    for val0, i in scored[: cfg.multistart]:
        z0 = starts[i]
        if val0 < best_val:
            best_val, best_z = val0, z0
        if not math.isfinite(val0):
            continue
        res = optimize.minimize(fun, z0, jac=True, method="L-BFGS-B", bounds=bounds,
                                options={"maxiter": max(1, cfg.iter_cap // cfg.multistart),
                                         "ftol": 1e-15, "gtol": 1e-12})
        iters += int(res.nit)
        z = np.clip(res.x, 0.0, upper)
        val = fval(z)
        if val < best_val:
            best_val, best_z = val, z
            converged = bool(res.success)
    # projected subgradient polish
    z = best_z.copy()
    scale = float(np.max(upper)) if dim else 0.0
    for k in range(cfg.polish if dim and math.isfinite(best_val) else 0):
        val, grad, _, _ = _split_eval(L, R, v, c, t, z, True)
        if val < best_val:
            best_val, best_z = val, z.copy()
        gn = float(np.linalg.norm(grad))
        if gn == 0 or not math.isfinite(gn):
            break
        z = np.clip(z - (0.1 * scale / math.sqrt(k + 1)) * grad / gn, 0.0, upper)
        iters += 1
    _, _, lv, rv = _split_eval(L, R, v, c, t, best_z, False)
    split = Split(best_z[:n], float(best_z[n]) if has_tail else 0.0, lv, rv)
    res = NormResult(float(best_val), cfg.tol, iters, not math.isfinite(best_val), converged,
                     decomposition=split)
    return res


def sum_norm(left: SpaceDesc, right: SpaceDesc, x, cfg: EvalConfig = DEFAULT) -> NormResult:
    """``||x||_{X0+X1} = inf_{0<=g<=|x|} ||g||_0 + |||x|-g||_1``."""
    validate_element(Sum(left, right), x)
    layout, v = layout_of(x)
    if layout.n == 0 or not np.any(v):
        return NormResult(0.0, 0.0)
    L = compile_node(left, layout, cfg)
    R = compile_node(right, layout, cfg)
    return split_minimize(L, R, v, 0.0, 1.0, cfg)


# ---------------------------------------------------------------------------
# sequence tails


@dataclass
class TailResult:
    value: float
    tail: float
    lower: float
    upper: float
    divergent: bool = False


def lp_tail(p: float, partial, mass: float, alpha: float = 0.0) -> TailResult:
    """Norm of ``(partial_1..partial_N, s/(N+1), s/(N+2), ...)`` in ``l^p(n^alpha)``.

    The tail ``sum_{n>N} (s n^{alpha-1})^p`` is summed exactly with the Hurwitz
    zeta function; ``lower``/``upper`` are the integral-comparison bracket.
    """
    vals = np.abs(np.asarray(partial.values if isinstance(partial, Seq) else partial, float))
    N = len(vals)
    k = np.arange(1, N + 1, dtype=float)
    head = float(np.sum((vals * k ** alpha) ** p)) if N else 0.0
    s = abs(float(mass))
    if s == 0:
        v = head ** (1.0 / p)
        return TailResult(v, 0.0, 0.0, 0.0)
    e = (1.0 - alpha) * p
    if e <= 1:
        return TailResult(math.inf, math.inf, math.inf, math.inf, True)
    tail = s ** p * float(special.zeta(e, N + 1))
    lower = s ** p * (N + 1) ** (1 - e) / (e - 1)
    upper = s ** p * N ** (1 - e) / (e - 1) if N > 0 else math.inf
    return TailResult((head + tail) ** (1.0 / p), tail, lower, upper)
