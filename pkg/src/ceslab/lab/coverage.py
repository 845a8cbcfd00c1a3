"""Claim manifest: every checked statement has an id, a one-line description and
at least one registered case; every case names a claim from this list."""
from __future__ import annotations

from .core import REGISTRY, suite_names

CLAIMS: dict[str, str] = {
    "associate-norm": "the Köthe dual norm of a weighted l^p is the conjugate-exponent weighted norm",
    "bennett-shift-factorisation": "discrete Cesàro and Copson compositions factor through the shift",
    "calderon-product-lp": "the power Calderón product of l^p0 and l^p1 is l^p with 1/p = (1-th)/p0 + th/p1",
    "cesaro-as-real-method": "the real method on (L^1, L^1(1/s)) gives ||C f + C* f||_p, so Ces_p up to equivalence",
    "cesaro-copson-composition-half-line": "C + C* = C* C = C C* on the half-line",
    "cesaro-copson-composition-unit": "C* C f = C f + C* f - int_0^1 f on [0,1]",
    "cesaro-copson-sequence-equality": "Cesàro and Copson sequence norms compare through the shift",
    "cesaro-dual-tandori": "the dual of ces_p is Tan(l^p') up to equivalence",
    "cesaro-dual-tandori-unit": "the dual of Ces_p[0,1] is Tan(L^p'(1/(1-x))) up to equivalence",
    "cesaro-equals-copson-half-line": "Ces_p = Cop_p on the half-line with Hardy constants p and p'",
    "cesaro-iterate-equality": "||C C f|| against ||C f|| for the iterated Cesàro operator",
    "cesaro-iterate-log-inequality": "C C f >= (ln a / a) C f (x/a) pointwise",
    "cesaro-of-intersection": "C(X0 cap X1) = C X0 cap C X1",
    "cesaro-of-l1-plus-linf": "C(L^1 + L^inf) is strictly larger than the sum of the Cesàro spaces",
    "cesaro-of-sum": "C(X0 + X1) against C X0 + C X1 as an envelope",
    "cesaro-of-tandori-symmetric": "Ces(Tan X) against Ces X for symmetric X",
    "cesaro-power-product": "C[X0^(1-th) X1^th] against (C X0)^(1-th) (C X1)^th",
    "cesaro-tandori-maximal-bound": "||f||_{C Tan X} <= 4 ||M|| ||f||_{C X} on the half-line",
    "cesaro-tandori-unit-constants": "on [0,1] the norms of C Tan X and C X cap L^1 compare with constants 4||M|| sigma and 1",
    "cl-cesaro-copson-pointwise": "C and C* commute with concave homogeneous functions up to a pointwise inequality",
    "cl-cesaro-embedding": "C[phi(X0,X1)] embeds contractively in phi(C X0, C X1) for phi in the concave class",
    "cl-tandori-embedding": "[phi(X0,X1)]~ embeds contractively in phi(Tan X0, Tan X1)",
    "cl-weight-homogeneity": "Calderón-Lozanovskii spaces of weighted couples pull weights out homogeneously",
    "composite-space-example": "pointwise and norm bounds for the composite L^2 / L^inf / L^2 example on [0,1]",
    "conjugate-function": "the conjugate of s^(1/2) t^(1/2) is 2 sqrt(st)",
    "conjugate-involution": "conjugation is an involution on concave homogeneous functions",
    "copson-equals-cesaro-cap-l1-unit": "on [0,1] the Copson norm is equivalent to max(||C f||_p, ||f||_1)",
    "copson-into-cesaro-unit": "Cop_p[0,1] embeds into Ces_p[0,1]",
    "copson-iterate-equality": "||C* C* f|| against ||C* f|| for the iterated Copson operator",
    "copson-iterate-equality-unit": "the iterated Copson bound a^(-1/p) / ln(1/a) on [0,1]",
    "copson-iterate-half-inequality": "||C* sigma_2 f|| <= 2 ||sigma_2|| ||C* f||",
    "curbera-ricker-inequality": "the Curbera-Ricker ratio is at most 6",
    "dilation-norms": "dilations scale weighted L^p norms by tau^(1/p + alpha)",
    "hardy-operator-norms": "the Hardy constants p' and p for C and C* on L^p",
    "holder-rogers": "Hölder-Rogers pairing bound for analytic dual pairs",
    "iterated-cesaro-l1-ratio": "2 ||f_a||_{CL^1} / ||f_a||_{L^1} = ln(1/a) and the iterated analogue",
    "iterated-cesaro-l1-values": "the L^1, CL^1 and CCL^1 norms of (1/x) 1_[a,1]",
    "k-functional-calculus": "K(t) is nondecreasing, concave and K(t)/t is nonincreasing",
    "k-functional-weighted-l1": "closed-form K-functional of a weighted-L^1 couple",
    "l1-cesaro-infinity-unit": "(L^1)^(1-th) (Ces_inf)^th = C[(L^1)^(1-th) (L^inf)^th] on [0,1]",
    "l1-cesaro-product-half-line": "(L^1)^(1-th) (Ces_p)^th = Ces_q on the half-line",
    "lozanovskii-duality": "the dual of phi(X0,X1) is the conjugate-phi space of the duals",
    "operator-s-bounded": "the operator S f(t) = t (C + C*)(f/s)(t) is bounded on L^p(1/t)",
    "plumbing": "library self-consistency with no mathematical claim",
    "rearrangement-half-argument": "rearrangements of Cesàro means are controlled at half the argument",
    "riesz-maximal-inequality": "the maximal function is controlled by C applied to the rearrangement",
    "tandori-contractive-inclusion": "Tan X embeds contractively in X, and C Tan X in C X",
    "tandori-power-product": "(Tan X0)^(1-th) (Tan X1)^th against Tan of the product",
    "tandori-real-method": "K-functional of a Tandori couple against that of the majorant",
    "unit-interval-strict-inclusion": "a diverging ratio family near x = 1 separating two Tandori dual spaces",
    "weighted-cesaro-reiteration": "(Ces_{p0,a0}, Ces_{p1,a1})_{th,p} = Ces_{p,a} as an envelope",
    "weighted-dual": "duals of weighted spaces move the weight to its reciprocal",
}


def claim_cases() -> dict[str, list[str]]:
    """Claim id -> ``suite:case`` names registered against it."""
    suite_names()
    out: dict[str, list[str]] = {}
    for suite, specs in REGISTRY.items():
        for s in specs:
            out.setdefault(s.claim, []).append(f"{suite}:{s.name}")
    return {k: sorted(v) for k, v in sorted(out.items())}


def coverage_gaps() -> dict[str, list[str]]:
    """Claims without cases and cases naming unknown claims (both empty when complete)."""
    used = claim_cases()
    return {
        "uncovered": sorted(c for c in CLAIMS if c not in used),
        "unknown": sorted(f"{c} <- {n}" for c, names in used.items() if c not in CLAIMS for n in names),
    }
