"""Norms of composite spaces, their Kothe duals, and the conjugate of phi.

Run: python3 demos/02_norms_and_duality.py
"""
import math

from ceslab.duality import conjugate, conjugate_phi, dual_norm_oracle, dual_space
from ceslab.norms import norm
from ceslab.spaces import PhiDesc, Seq, parse_space


def main():
    a = Seq([1.0, 0.0, 0.5, 0.25])
    for text in ("lp(2)", "Ces(lp(2))", "Tan(lp(2))", "Cop(lp(2))", "Ces(Tan(lp(2)))", "Sum(lp(1),lp(4))"):
        r = norm(parse_space(text), a)
        print(f"  {text:<18s} {r.value:.8f}   (error bound {r.error_bound:.1e})")

    print("\nThe dual of a Cesaro sequence space is a Tandori space; the rule trace shows")
    print("which steps are isometric and which hold up to equivalent norms:")
    print(dual_space(parse_space("Ces(lp(3))")).render())

    print("\nThe associate norm computed as a supremum of pairings, against the closed form:")
    X = parse_space("lp(3,pow(0.5))")
    f = Seq([2.0, 1.0, 0.5, 0.25, 0.125])
    r = dual_norm_oracle(X, f)
    print(f"  oracle {r.value:.8f}   Holder closed form {r.holder:.8f}")

    print("\nConjugation of concave homogeneous functions is an involution; max lies outside that class:")
    for phi in (PhiDesc("pow", 0.5), PhiDesc("min"), PhiDesc("max")):
        twice = conjugate(conjugate(phi))
        print(f"  {phi.kind:<4s} phi(2,3) = {float(phi(2.0, 3.0)):.6f}   phi^^(2,3) = {twice(2.0, 3.0):.6f}")
    print(f"  conjugate of pow(1/2) at (2,3): {conjugate_phi(PhiDesc('pow', 0.5), 2.0, 3.0):.10f}"
          f" = 2 sqrt 6 = {2 * math.sqrt(6):.10f}")


if __name__ == "__main__":
    main()
