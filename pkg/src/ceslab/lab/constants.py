"""Empirical best constants: random search plus coordinate-wise perturbation ascent."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..norms import norm_value
from ..spaces import Seq, SpaceError, parse_space
from .core import sample_values


def cr_profile(A: np.ndarray) -> np.ndarray:
    """Row-wise ``max_n`` of the Curbera–Ricker ratio for a batch of sequences.

    ``A`` has shape ``(batch, n)``. Zeros may pad shorter sequences: the
    inequality is claimed for every ``n >= 2``, so padded positions are valid
    comparisons too.
    """
    A = np.abs(np.atleast_2d(A))
    S = np.cumsum(A, axis=1)                      # S_k
    k = np.arange(1, A.shape[1] + 1)
    rhs = np.cumsum(S / k, axis=1)                # sum_{k<=n} S_k / k
    n = k[1:]
    h = n // 2
    lhs = S[:, h - 1] / h
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(rhs[:, 1:] > 0, lhs / rhs[:, 1:], 0.0)
    return np.max(r, axis=1)


def _cr(a: np.ndarray) -> float:
    return float(cr_profile(a[None, :])[0])


_L2 = parse_space("lp(2)")
_COP = parse_space("Cop(lp(2))")
_COPCOP = parse_space("Cop(Cop(lp(2)))")


def _sigma2_copson(a: np.ndarray) -> float:
    s = Seq(a)
    den = norm_value(_COPCOP, s)
    return norm_value(_COP, s) / den if den > 0 else 0.0


def _identity(a: np.ndarray) -> float:
    s = Seq(a)
    n = norm_value(_L2, s)
    return n / n if n > 0 else 1.0


@dataclass(frozen=True)
class Ratio:
    name: str
    fn: Callable[[np.ndarray], float]
    bound: float
    n: int
    note: str


RATIOS = {
    "cr": Ratio("cr", _cr, 6.0, 32, "Curbera–Ricker partial-average ratio, asserted <= 6"),
    "sigma2-copson": Ratio("sigma2-copson", _sigma2_copson, 2.0 * math.sqrt(2.0), 16,
                           "||C* a|| / ||C* C* a|| on l^2, asserted <= 2 ||sigma_2|| = 2 sqrt 2"),
    "identity": Ratio("identity", _identity, 1.0, 8, "||a|| / ||a|| on l^2"),
}


@dataclass
class ConstantEstimate:
    ratio: str
    value: float
    bound: float
    sample: np.ndarray
    evaluations: int


def estimate_best_constant(ratio: str, budget: int = 2000, seed: int = 42, n: int | None = None) -> ConstantEstimate:
    """Empirical supremum of a registered ratio functional.

    Half the budget draws random nonnegative sequences; the rest runs
    coordinate-wise multiplicative perturbation ascent from the best draw.
    The best value found is always returned together with its sample.
    """
    if ratio not in RATIOS:
        raise SpaceError(f"unknown ratio {ratio!r}; known: {', '.join(sorted(RATIOS))}")
    if budget < 1:
        raise SpaceError("budget must be at least 1")
    R = RATIOS[ratio]
    n = n or R.n
    rng = np.random.default_rng([seed, 7])
    best, best_a, used = -math.inf, None, 0
    n_random = max(1, budget // 2)
    for _ in range(n_random):
        m = int(rng.integers(2, n + 1))
        a = sample_values(rng, m, heavy=True)
        v = R.fn(a)
        used += 1
        if v > best:
            best, best_a = v, a
    step = 1.0
    while used < budget:
        improved = False
        for i in range(len(best_a)):
            if used >= budget:
                break
            for fac in (math.exp(step), math.exp(-step), 0.0):
                if used >= budget:
                    break
                cand = best_a.copy()
                cand[i] = cand[i] * fac if cand[i] > 0 else step
                if not np.any(cand):
                    continue
                v = R.fn(cand)
                used += 1
                if v > best:
                    best, best_a, improved = v, cand, True
                    break
        if not improved:
            step *= 0.5
            if step < 1e-6:
                break
    return ConstantEstimate(ratio, float(best), R.bound, best_a, used)
