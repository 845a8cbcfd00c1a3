"""Data model: sequences, piecewise-constant functions, weights and space descriptors.

Descriptors are small immutable trees. ``parse_space`` and ``render`` convert
between trees and the text grammar::

    space := Lp(num, dom[, wt]) | lp(num[, wt]) | Ces(space) | Cop(space)
           | Tan(space) | W(space, wt) | Sum(space, space) | Cap(space, space)
           | CL(phi, space, space) | RealK(space, space, num, num)
    phi   := pow(num) | min | max | sum
    wt    := one | pow(num) | oneminus[(num)] | invt | recip(wt)
    dom   := [0,1] | [0,inf)
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

UNIT = "unit"
HALF = "half"

DEFAULT_EPS = 1e-6
DEFAULT_TMAX = 1e6


class SpaceError(ValueError):
    """Invalid descriptor, element, or element/space mismatch."""


class ParseError(SpaceError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, eq=False)
class Seq:
    """Finitely supported real sequence ``(a_1, ..., a_n, 0, 0, ...)``."""

    values: np.ndarray

    def __post_init__(self):
        v = _frozen(np.atleast_1d(self.values) if np.ndim(self.values) else [self.values])
        if v.ndim != 1:
            raise SpaceError("Seq values must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise SpaceError("Seq values must be finite")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    @property
    def support(self) -> int:
        """Index of the last nonzero entry (0 for the zero sequence)."""
        nz = np.flatnonzero(self.values)
        return int(nz[-1]) + 1 if nz.size else 0

    def trimmed(self) -> "Seq":
        return Seq(self.values[: self.support])

    def padded(self, n: int) -> "Seq":
        if n <= len(self):
            return self
        return Seq(np.concatenate([self.values, np.zeros(n - len(self))]))

    def __abs__(self):
        return Seq(np.abs(self.values))

    def __mul__(self, c: float):
        return Seq(self.values * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Seq({np.array2string(self.values, threshold=8)})"


@dataclass(frozen=True, eq=False)
class PCFun:
    """Piecewise-constant function: ``values[i]`` on ``[x[i], x[i+1])``, zero elsewhere.

    ``domain`` is ``"unit"`` for [0, 1] or ``"half"`` for the (truncated)
    half-line.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    domain: str = UNIT

    def __post_init__(self):
        x = _frozen(self.breakpoints)
        v = _frozen(self.values)
        if self.domain not in (UNIT, HALF):
            raise SpaceError(f"unknown domain tag {self.domain!r}")
        if x.ndim != 1 or v.ndim != 1 or len(x) != len(v) + 1 or len(v) == 0:
            raise SpaceError("PCFun needs N+1 breakpoints for N >= 1 cell values")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise SpaceError("PCFun breakpoints and values must be finite")
        if np.any(np.diff(x) <= 0):
            raise SpaceError("breakpoints must be strictly increasing")
        if x[0] < 0:
            raise SpaceError("breakpoints must be nonnegative")
        if self.domain == UNIT and x[-1] > 1 + 1e-15:
            raise SpaceError("function on [0,1] has breakpoints beyond 1")
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.breakpoints

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def ncells(self) -> int:
        return len(self.values)

    def __abs__(self):
        return PCFun(self.breakpoints, np.abs(self.values), self.domain)

    def __mul__(self, c: float):
        return PCFun(self.breakpoints, self.values * c, self.domain)

    __rmul__ = __mul__

    def with_values(self, values) -> "PCFun":
        return PCFun(self.breakpoints, values, self.domain)

    def __call__(self, t):
        """Point evaluation (right-continuous, zero off the grid)."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        inside = (idx >= 0) & (idx < self.ncells)
        out = np.where(inside, self.values[np.clip(idx, 0, self.ncells - 1)], 0.0)
        return out if out.ndim else float(out)

    def integral(self) -> float:
        return float(np.sum(self.values * self.widths))

    def padded(self) -> "PCFun":
        """On [0,1], extend the grid with zero cells so it covers exactly [0, 1]."""
        if self.domain != UNIT:
            return self
        x, v = self.breakpoints, self.values
        if x[0] > 0:
            x = np.concatenate([[0.0], x])
            v = np.concatenate([[0.0], v])
        if x[-1] < 1:
            x = np.concatenate([x, [1.0]])
            v = np.concatenate([v, [0.0]])
        if len(x) == len(self.breakpoints):
            return self
        return PCFun(x, v, self.domain)

    def refined(self, k: int = 2) -> "PCFun":
        """Split every cell into ``k`` subcells (geometric where possible)."""
        x = refine_grid(self.breakpoints, k)
        return PCFun(x, np.repeat(self.values, k), self.domain)

    @classmethod
    def from_function(cls, fn, breakpoints, domain=UNIT, order: int = 8) -> "PCFun":
        """Cell averages of ``fn`` by Gauss-Legendre quadrature on every cell."""
        x = np.asarray(breakpoints, dtype=float)
        nodes, weights = np.polynomial.legendre.leggauss(order)
        a, b = x[:-1, None], x[1:, None]
        t = 0.5 * (a + b) + 0.5 * (b - a) * nodes[None, :]
        vals = np.asarray(fn(t), dtype=float)
        return cls(x, 0.5 * vals @ weights, domain)

    @classmethod
    def from_antiderivative(cls, F, breakpoints, domain=UNIT) -> "PCFun":
        """Exact cell averages from an antiderivative ``F``."""
        x = np.asarray(breakpoints, dtype=float)
        Fx = np.asarray(F(x), dtype=float)
        return cls(x, np.diff(Fx) / np.diff(x), domain)

    @classmethod
    def indicator(cls, a: float, b: float, domain=UNIT) -> "PCFun":
        return cls([a, b], [1.0], domain)

    def __repr__(self):
        return (f"PCFun({self.domain}, {self.ncells} cells on "
                f"[{self.breakpoints[0]:.3g}, {self.breakpoints[-1]:.3g}])")


Element = Union[Seq, PCFun]


def refine_grid(x: np.ndarray, k: int = 2) -> np.ndarray:
    """Insert ``k-1`` points per cell: geometric spacing for cells away from 0."""
    x = np.asarray(x, dtype=float)
    if k == 1:
        return x.copy()
    a, b = x[:-1], x[1:]
    s = np.arange(1, k)[None, :] / k
    geo = a[:, None] > 0
    safe_a = np.where(geo, a[:, None], 1.0)
    inner = np.where(geo, safe_a * (b[:, None] / safe_a) ** s,
                     a[:, None] + (b - a)[:, None] * s)
    inner = inner.reshape(len(a), k - 1)
    out = np.concatenate([a[:, None], inner], axis=1).ravel()
    return np.concatenate([out, x[-1:]])


def log_grid(lo: float, hi: float, cells: int) -> np.ndarray:
    return np.geomspace(lo, hi, cells + 1)


def half_line_grid(cells: int, eps: float = DEFAULT_EPS, tmax: float = DEFAULT_TMAX) -> np.ndarray:
    return log_grid(eps, tmax, cells)


def unit_grid(cells: int, eps: float | None = None) -> np.ndarray:
    """Uniform grid on [0,1], or a log grid on [eps,1] with a leading [0,eps) cell."""
    if eps is None:
        return np.linspace(0.0, 1.0, cells + 1)
    return np.concatenate([[0.0], log_grid(eps, 1.0, cells - 1)])


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weight:
    """Weight tree. ``kind`` is one of one, pow, oneminus, invt, recip, sampled."""

    kind: str = "one"
    param: float | None = None
    inner: "Weight | None" = None
    sampled: PCFun | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("one", "pow", "oneminus", "invt", "recip", "sampled"):
            raise SpaceError(f"unknown weight kind {self.kind!r}")
        if self.kind == "recip" and self.inner is None:
            raise SpaceError("recip weight needs an inner weight")
        if self.kind == "sampled":
            if self.sampled is None or np.any(self.sampled.values <= 0):
                raise SpaceError("sampled weight must be positive")

    @property
    def exponents(self) -> tuple[float, float]:
        """``(alpha, beta)`` with ``w(x) = x**alpha * (1-x)**beta`` (times the sampled factor)."""
        if self.kind == "one" or self.kind == "sampled":
            return 0.0, 0.0
        if self.kind == "pow":
            return float(self.param), 0.0
        if self.kind == "oneminus":
            return 0.0, 1.0 if self.param is None else float(self.param)
        if self.kind == "invt":
            return -1.0, 0.0
        a, b = self.inner.exponents
        return -a, -b

    @property
    def sampled_factor(self) -> tuple[PCFun | None, int]:
        if self.kind == "sampled":
            return self.sampled, 1
        if self.kind == "recip":
            s, e = self.inner.sampled_factor
            return s, -e
        return None, 0

    @property
    def is_one(self) -> bool:
        return self.exponents == (0.0, 0.0) and self.sampled_factor[0] is None

    def recip(self) -> "Weight":
        if self.kind == "one":
            return self
        if self.kind == "recip":
            return self.inner
        return Weight("recip", inner=self)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.exponents
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.ones_like(x)
            if a:
                out = out * np.power(x, a)
            if b:
                out = out * np.power(1.0 - x, b)
        s, e = self.sampled_factor
        if s is not None:
            out = out * np.power(s(x), e)
        return out

    def power_integral(self, a: np.ndarray, b: np.ndarray, p: float) -> np.ndarray:
        """``int_a^b w(x)**p dx`` per cell (``inf`` where it diverges)."""
        al, be = self.exponents
        return weight_power_mass(a, b, p, al, be, self.sampled_factor)

    def cell_mean(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.power_integral(a, b, 1.0) / (np.asarray(b, float) - np.asarray(a, float))

    def cell_sup(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Supremum of ``w`` over each cell ``[a, b)`` (limits at the ends)."""
        al, be = self.exponents
        return weight_cell_sup(a, b, al, be, self.sampled_factor)

    def seq_values(self, n: int) -> np.ndarray:
        """Weight on ``1..n`` for sequence leaves."""
        al, be = self.exponents
        if be:
            raise SpaceError("oneminus weights are not defined on sequences")
        k = np.arange(1, n + 1, dtype=float)
        out = k ** al
        s, e = self.sampled_factor
        if s is not None:
            out = out * np.power(s(k), e)
        return out


def _sampled_on_cells(a, b, sampled, power):
    s, e = sampled if sampled is not None else (None, 0)
    if s is None or e == 0:
        return 1.0
    mid = np.where(a > 0, np.sqrt(np.maximum(a, 0) * b), 0.5 * (a + b))
    return np.power(s(mid), e * power)


def weight_power_mass(a, b, p, alpha=0.0, beta=0.0, sampled=None) -> np.ndarray:
    """``int_a^b (x**alpha (1-x)**beta)**p dx`` per cell, times a sampled factor."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    return _power_integral(a, b, alpha * p, beta * p) * _sampled_on_cells(a, b, sampled, p)


def weight_cell_sup(a, b, alpha=0.0, beta=0.0, sampled=None) -> np.ndarray:
    """Supremum of ``x**alpha (1-x)**beta`` over each cell, times a sampled factor."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cand = [_lim_weight(a, alpha, beta), _lim_weight(b, alpha, beta)]
        if alpha > 0 and beta > 0:
            xc = alpha / (alpha + beta)
            inside = (a < xc) & (xc < b)
            cand.append(np.where(inside, xc ** alpha * (1 - xc) ** beta, 0.0))
    return np.max(np.stack(cand), axis=0) * _sampled_on_cells(a, b, sampled, 1.0)


def _lim_weight(x, al, be):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.ones_like(x)
        if al:
            out = out * np.where(x == 0, np.inf if al < 0 else 0.0, np.power(np.maximum(x, 0), al))
        if be:
            y = 1.0 - x
            out = out * np.where(y == 0, np.inf if be < 0 else 0.0, np.power(np.maximum(y, 0), be))
    return np.nan_to_num(out, nan=np.inf)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def _power_integral(a, b, g, d):
    """``int_a^b x**g (1-x)**d dx`` vectorised over cells."""
    a, b = np.broadcast_arrays(a, b)
    if d == 0:
        return _monomial_integral(a, b, g)
    if g == 0:
        return _monomial_integral(1.0 - b, 1.0 - a, d)
    # mixed exponents: Gauss-Legendre per cell, endpoint singularities flagged infinite
    out = np.empty(a.shape)
    bad = ((a <= 0) & (g <= -1)) | ((b >= 1) & (d <= -1))
    t = 0.5 * (a + b)[..., None] + 0.5 * (b - a)[..., None] * _GL_X
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = t ** g * (1 - t) ** d
    out[...] = 0.5 * (b - a) * (vals @ _GL_W)
    out[bad] = np.inf
    return out


def _monomial_integral(a, b, g):
    """``int_a^b x**g dx`` for ``0 <= a < b``, stable for thin cells."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    out = np.empty(np.broadcast(a, b).shape)
    pos = a > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.log(np.where(pos, b, 1.0) / np.where(pos, a, 1.0))
        if g == -1:
            out = np.where(pos, r, np.inf)
        else:
            e = g + 1.0
            out_pos = np.power(np.where(pos, a, 1.0), e) * np.expm1(e * r) / e
            out_zero = np.power(b, e) / e if e > 0 else np.full_like(b, np.inf)
            out = np.where(pos, out_pos, out_zero)
    return out


ONE = Weight("one")


def wpow(alpha: float) -> Weight:
    return Weight("pow", float(alpha))


def oneminus(beta: float | None = None) -> Weight:
    return Weight("oneminus", None if beta is None else float(beta))


INVT = Weight("invt")


def recip(w: Weight) -> Weight:
    return Weight("recip", inner=w)


# ---------------------------------------------------------------------------
# phi functions


@dataclass(frozen=True)
class PhiDesc:
    kind: str
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in ("pow", "min", "max", "sum"):
            raise SpaceError(f"unknown phi kind {self.kind!r}")
        if self.kind == "pow":
            if self.theta is None or not 0.0 <= float(self.theta) <= 1.0:
                raise SpaceError("pow(theta) needs theta in [0,1]")
            object.__setattr__(self, "theta", float(self.theta))

    def __call__(self, s, t):
        s = np.asarray(s, float)
        t = np.asarray(t, float)
        if self.kind == "pow":
            return s ** (1.0 - self.theta) * t ** self.theta
        if self.kind == "min":
            return np.minimum(s, t)
        if self.kind == "max":
            return np.maximum(s, t)
        return s + t


# ---------------------------------------------------------------------------
# space descriptors


class SpaceDesc:
    """Base class of descriptor nodes."""

    __slots__ = ()

    def children(self) -> tuple["SpaceDesc", ...]:
        return ()

    def __str__(self):
        return render(self)


def _check_p(p: float, what: str = "p"):
    if not (p >= 1.0):
        raise SpaceError(f"{what} out of range [1, inf]: {p}")


@dataclass(frozen=True)
class LpLeaf(SpaceDesc):
    p: float
    domain: str = HALF
    weight: Weight = ONE

    def __post_init__(self):
        _check_p(self.p)
        if self.domain not in (UNIT, HALF):
            raise SpaceError(f"unknown domain {self.domain!r}")
        if self.domain == HALF and self.weight.exponents[1] != 0:
            raise SpaceError("oneminus weight is not defined on the half-line")


@dataclass(frozen=True)
class SeqLeaf(SpaceDesc):
    p: float
    weight: Weight = ONE

    def __post_init__(self):
        _check_p(self.p)
        if self.weight.exponents[1] != 0:
            raise SpaceError("oneminus weight is not defined on sequences")


@dataclass(frozen=True)
class Ces(SpaceDesc):
    child: SpaceDesc

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Cop(SpaceDesc):
    child: SpaceDesc

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Tan(SpaceDesc):
    child: SpaceDesc

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Weighted(SpaceDesc):
    child: SpaceDesc
    weight: Weight

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Sum(SpaceDesc):
    left: SpaceDesc
    right: SpaceDesc

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Cap(SpaceDesc):
    left: SpaceDesc
    right: SpaceDesc

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class CL(SpaceDesc):
    phi: PhiDesc
    left: SpaceDesc
    right: SpaceDesc

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class RealK(SpaceDesc):
    left: SpaceDesc
    right: SpaceDesc
    theta: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise SpaceError(f"theta must lie strictly inside (0,1): {self.theta}")
        _check_p(self.q, "q")

    def children(self):
        return (self.left, self.right)


def measure_space(space: SpaceDesc) -> str:
    """``"seq"``, ``"unit"`` or ``"half"``; raises on mixed trees."""
    if isinstance(space, SeqLeaf):
        return "seq"
    if isinstance(space, LpLeaf):
        return space.domain
    kinds = {measure_space(c) for c in space.children()}
    if len(kinds) != 1:
        raise SpaceError(f"mixed measure spaces in descriptor: {sorted(kinds)}")
    return kinds.pop()


def leaves(space: SpaceDesc):
    if isinstance(space, (LpLeaf, SeqLeaf)):
        yield space
    for c in space.children():
        yield from leaves(c)


def validate_element(space: SpaceDesc, x: Element) -> None:
    """Raise ``SpaceError`` unless ``x`` lives on the measure space of ``space``."""
    ms = measure_space(space)
    if isinstance(x, Seq):
        if ms != "seq":
            raise SpaceError(f"sequence given for a function space on {ms}")
    elif isinstance(x, PCFun):
        if ms == "seq":
            raise SpaceError("function given for a sequence space")
        if x.domain != ms:
            raise SpaceError(f"domain mismatch: element on {x.domain}, space on {ms}")
    else:
        raise SpaceError(f"unsupported element type {type(x).__name__}")


# ---------------------------------------------------------------------------
# rendering


def _num(v: float) -> str:
    v = float(v)
    if math.isinf(v):
        return "inf"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def render_weight(w: Weight) -> str:
    if w.kind == "one":
        return "one"
    if w.kind == "pow":
        return f"pow({_num(w.param)})"
    if w.kind == "oneminus":
        return "oneminus" if w.param is None else f"oneminus({_num(w.param)})"
    if w.kind == "invt":
        return "invt"
    if w.kind == "recip":
        return f"recip({render_weight(w.inner)})"
    raise SpaceError("sampled weights have no text form")


def render_phi(phi: PhiDesc) -> str:
    return f"pow({_num(phi.theta)})" if phi.kind == "pow" else phi.kind


def render(space: SpaceDesc) -> str:
    if isinstance(space, LpLeaf):
        dom = "[0,1]" if space.domain == UNIT else "[0,inf)"
        wt = "" if space.weight == ONE else "," + render_weight(space.weight)
        return f"Lp({_num(space.p)},{dom}{wt})"
    if isinstance(space, SeqLeaf):
        wt = "" if space.weight == ONE else "," + render_weight(space.weight)
        return f"lp({_num(space.p)}{wt})"
    if isinstance(space, (Ces, Cop, Tan)):
        return f"{type(space).__name__}({render(space.child)})"
    if isinstance(space, Weighted):
        return f"W({render(space.child)},{render_weight(space.weight)})"
    if isinstance(space, (Sum, Cap)):
        return f"{type(space).__name__}({render(space.left)},{render(space.right)})"
    if isinstance(space, CL):
        return f"CL({render_phi(space.phi)},{render(space.left)},{render(space.right)})"
    if isinstance(space, RealK):
        return f"RealK({render(space.left)},{render(space.right)},{_num(space.theta)},{_num(space.q)})"
    raise SpaceError(f"cannot render {space!r}")


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.src = []  # (char, original position), whitespace removed
        for i, ch in enumerate(text):
            if not ch.isspace():
                self.src.append((ch, i))
        self.i = 0

    def pos(self) -> int:
        if self.i < len(self.src):
            return self.src[self.i][1]
        return len(self.text)

    def error(self, msg: str):
        raise ParseError(msg, self.pos(), self.text)

    def peek(self, s: str) -> bool:
        n = len(s)
        return "".join(c for c, _ in self.src[self.i:self.i + n]) == s

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.i += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.accept(s):
            self.error(f"expected {s!r}")

    def ident(self) -> str:
        j = self.i
        while j < len(self.src) and self.src[j][0].isalpha():
            j += 1
        if j == self.i:
            self.error("expected a name")
        name = "".join(c for c, _ in self.src[self.i:j])
        self.i = j
        return name

    def number(self) -> float:
        j = self.i
        while j < len(self.src) and (self.src[j][0] in "0123456789.+-eE" or self.src[j][0].isalpha()):
            j += 1
        tok = "".join(c for c, _ in self.src[self.i:j])
        try:
            val = float(tok)
        except ValueError:
            self.error(f"bad number {tok!r}")
        if math.isnan(val):
            self.error("bad number 'nan'")
        self.i = j
        return val

    def space(self) -> SpaceDesc:
        start = self.pos()
        name = self.ident()
        self.expect("(")
        try:
            if name == "Lp":
                p = self.number()
                _check_p(p)
                self.expect(",")
                dom = self.domain()
                wt = ONE
                if self.accept(","):
                    wt = self.weight()
                node = LpLeaf(p, dom, wt)
            elif name == "lp":
                p = self.number()
                _check_p(p)
                wt = ONE
                if self.accept(","):
                    wt = self.weight()
                node = SeqLeaf(p, wt)
            elif name in ("Ces", "Cop", "Tan"):
                node = {"Ces": Ces, "Cop": Cop, "Tan": Tan}[name](self.space())
            elif name == "W":
                child = self.space()
                self.expect(",")
                node = Weighted(child, self.weight())
            elif name in ("Sum", "Cap"):
                left = self.space()
                self.expect(",")
                node = (Sum if name == "Sum" else Cap)(left, self.space())
            elif name == "CL":
                phi = self.phi()
                self.expect(",")
                left = self.space()
                self.expect(",")
                node = CL(phi, left, self.space())
            elif name == "RealK":
                left = self.space()
                self.expect(",")
                right = self.space()
                self.expect(",")
                theta = self.number()
                self.expect(",")
                node = RealK(left, right, theta, self.number())
            else:
                raise ParseError(f"unknown constructor {name!r}", start, self.text)
        except ParseError:
            raise
        except SpaceError as exc:
            raise ParseError(str(exc), start, self.text) from None
        self.expect(")")
        measure_space_checked(node, start, self.text)
        return node

    def domain(self) -> str:
        if self.accept("[0,1]"):
            return UNIT
        if self.accept("[0,inf)"):
            return HALF
        self.error("expected domain '[0,1]' or '[0,inf)'")

    def weight(self) -> Weight:
        # "oneminus" before "one": the latter is a prefix of the former
        if self.accept("oneminus"):
            if self.accept("("):
                b = self.number()
                self.expect(")")
                return oneminus(b)
            return oneminus()
        if self.accept("one"):
            return ONE
        if self.accept("pow("):
            a = self.number()
            self.expect(")")
            return wpow(a)
        if self.accept("invt"):
            return INVT
        if self.accept("recip("):
            w = self.weight()
            self.expect(")")
            return recip(w)
        self.error("expected a weight")

    def phi(self) -> PhiDesc:
        if self.accept("pow("):
            th = self.number()
            self.expect(")")
            return PhiDesc("pow", th)
        for k in ("min", "max", "sum"):
            if self.accept(k):
                return PhiDesc(k)
        self.error("expected phi: pow(theta), min, max or sum")


def measure_space_checked(node, pos, text):
    try:
        measure_space(node)
    except SpaceError as exc:
        raise ParseError(str(exc), pos, text) from None


def parse_space(text: str) -> SpaceDesc:
    """Parse a descriptor string into a ``SpaceDesc`` tree."""
    p = _Parser(text)
    node = p.space()
    if p.i != len(p.src):
        p.error("trailing input")
    return node


# ---------------------------------------------------------------------------
# CSV


def read_pcfun_csv(path, domain: str = UNIT) -> PCFun:
    """Read ``x,value`` rows; the last row's value is ignored."""
    xs, vs = [], []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise SpaceError(f"{path}: expected header 'x,value'")
    for row in rows[1:]:
        if not row:
            continue
        xs.append(float(row[0]))
        vs.append(float(row[1]))
    return PCFun(xs, vs[:-1], domain)


def write_pcfun_csv(path, f: PCFun) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for x, v in zip(f.breakpoints, list(f.values) + [0.0]):
            w.writerow([repr(float(x)), repr(float(v))])


def read_seq_csv(path) -> Seq:
    vals = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                if vals:
                    raise SpaceError(f"{path}: non-numeric entry {row[0]!r}")
                # header line
    return Seq(vals)


def read_element(path, space: SpaceDesc) -> Element:
    """Read a PCFun or Seq CSV depending on the descriptor's measure space."""
    path = Path(path)
    with open(path) as fh:
        head = fh.readline().strip().replace(" ", "")
    ms = measure_space(space)
    if head == "x,value":
        if ms == "seq":
            raise SpaceError("function CSV given for a sequence space")
        return read_pcfun_csv(path, ms)
    if ms != "seq":
        raise SpaceError("sequence CSV given for a function space")
    return read_seq_csv(path)
