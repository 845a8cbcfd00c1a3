"""Proximal bundle method for unconstrained nonsmooth convex minimisation.

Quasi-Newton methods stall at the kinks of sup-type norms (L^inf leaves,
Tandori majorants). The bundle method keeps a cutting-plane model built from
subgradients and only accepts steps that realise a fixed fraction of the
model's predicted decrease, which makes it reliable on those kinks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class BundleResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    gap: float


def _simplex_qp(Q: np.ndarray, a: np.ndarray, maxiter: int = 200) -> np.ndarray:
    """``min 0.5 l'Ql + a'l`` over the simplex by a primal active-set method.

    On a support ``S`` the equality-constrained problem is solved through its
    KKT system; a blocking step removes indices, and the most negative
    reduced gradient enters.
    """
    m = len(a)
    if m == 1:
        return np.ones(1)
    scale = max(float(np.max(np.abs(Q))), float(np.max(np.abs(a))), 1e-300)
    # a tiny ridge makes every reduced problem strictly convex, so the entering index
    # always gets positive weight
    Q = Q + 1e-12 * scale * np.eye(m)
    j0 = int(np.argmin(0.5 * np.diag(Q) + a))
    lam = np.zeros(m)
    lam[j0] = 1.0
    S = [j0]
    for _ in range(maxiter):
        w = Q @ lam + a
        common = float(np.dot(lam, w))
        out = [j for j in range(m) if j not in S]
        if not out:
            break
        j = min(out, key=lambda k: w[k])
        if w[j] >= common - 1e-13 * scale:
            break
        S.append(j)
        while True:
            k = len(S)
            K = np.zeros((k + 1, k + 1))
            K[:k, :k] = Q[np.ix_(S, S)]
            K[:k, k] = 1.0
            K[k, :k] = 1.0
            rhs = np.concatenate([-a[S], [1.0]])
            sol = np.linalg.solve(K, rhs)[:k]
            if np.all(sol > 0):
                lam = np.zeros(m)
                lam[S] = sol
                break
            cur = lam[S]
            d = sol - cur
            neg = d < 0
            steps = np.where(neg, cur / np.where(neg, -d, 1.0), np.inf)
            t = float(min(1.0, np.min(steps)))
            new = cur + t * d
            lam = np.zeros(m)
            lam[S] = np.maximum(new, 0.0)
            S = [i for i, v in zip(S, new) if v > 1e-15]
            if not S:
                S = [j]
                lam[j] = 1.0
            lam /= lam.sum()
    return lam


def proximal_bundle(fun, x0, tol: float = 1e-11, maxiter: int = 300, mu: float = 1.0,
                    max_bundle: int = 30, accept: float = 0.1) -> BundleResult:
    """Minimise a convex ``fun(x) -> (value, subgradient)`` starting at ``x0``.

    Stops when the predicted decrease of the proximal model falls below
    ``tol * (1 + |f|)``; ``gap`` reports that final prediction.
    """
    xc = np.asarray(x0, float).copy()
    fc, gc = fun(xc)
    if not math.isfinite(fc):
        return BundleResult(xc, fc, 0, False, math.inf)
    X, F, G = [xc.copy()], [fc], [np.asarray(gc, float).copy()]
    lam = np.ones(1)
    delta = math.inf
    for it in range(1, maxiter + 1):
        Gm = np.array(G)
        # linearisation errors at the centre
        alpha = np.maximum(fc - (np.array(F) + np.einsum("ij,ij->i", Gm, xc - np.array(X))), 0.0)
        lam = _simplex_qp(Gm @ Gm.T / mu, alpha)
        agg = lam @ Gm
        delta = float(agg @ agg) / mu + float(lam @ alpha)
        if delta <= tol * (1 + abs(fc)):
            return BundleResult(xc, fc, it, True, delta)
        y = xc - agg / mu
        fy, gy = fun(y)
        if math.isfinite(fy) and fy <= fc - accept * delta:
            xc, fc = y, fy
            mu = max(mu * 0.5, 1e-6)
        else:
            mu = min(mu * 2.0, 1e12)
        if not math.isfinite(fy):
            continue
        X.append(y.copy())
        F.append(fy)
        G.append(np.asarray(gy, float).copy())
        if len(F) > max_bundle:
            # drop the cut with the smallest multiplier among the old ones
            w = np.concatenate([lam, [1.0]])[: len(F)]
            j = int(np.argmin(w[:-1]))
            del X[j], F[j], G[j]
    return BundleResult(xc, fc, maxiter, False, delta)
