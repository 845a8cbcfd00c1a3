"""Calderon-Lozanovskii spaces, K-functionals and the real method.

Run: python3 demos/03_interpolation.py
"""
from ceslab.interpolation import cl_norm, k_exact_weightedL1, k_numeric, k_profile, real_interp_norm
from ceslab.kernels import ExactFun
from ceslab.norms import norm_value
from ceslab.spaces import HALF, PCFun, PhiDesc, Seq, parse_space


def main():
    print("The power construction of lp(1) and lp(4) at theta = 1/2 is lp(8/5):")
    a = Seq([1.0, 0.3, 2.0, 0.7])
    got = cl_norm(PhiDesc("pow", 0.5), parse_space("lp(1)"), parse_space("lp(4)"), a).value
    print(f"  solver {got:.10f}   closed form {norm_value(parse_space('lp(1.6)'), a):.10f}")

    L1 = parse_space("Lp(1,[0,inf))")
    L1s = parse_space("Lp(1,[0,inf),pow(-1))")
    f = PCFun([0.0, 0.3, 1.0, 5.0], [2.0, 0.5, 1.0], HALF)
    print("\nK(t, f; L1, L1(1/s)) by linear programming over splittings and in closed form:")
    for t in (0.3, 1.0, 5.0):
        print(f"  t={t:<4g} numeric {k_numeric(t, f, L1, L1s).value:.10f}"
              f"   exact {k_exact_weightedL1(t, f, L1.weight, L1s.weight):.10f}")

    prof = k_profile(f, L1, L1s, points=17)
    print(f"\nK profile on {prof.t.size} points: monotone {prof.is_monotone(0.0)}, "
          f"concave {prof.is_concave(1e-12)}, K/t nonincreasing {prof.k_over_t_nonincreasing(0.0)}")

    print("\nThe real method on this couple reproduces the norm of C f + C* f in L^p:")
    E = ExactFun.from_pcfun(f)
    for p in (1.5, 2.0, 4.0):
        real = real_interp_norm(f, L1, L1s, 1 - 1 / p, p).value
        direct = (E.cesaro() + E.copson()).lp_norm(p)
        print(f"  p={p:<4g} real method {real:.10f}   ||Cf + C*f||_p {direct:.10f}"
              f"   ||Cf||_p {E.cesaro().lp_norm(p):.10f}")
    print("Cf + C*f and Cf have equivalent L^p norms, so the real method gives Ces_p.")


if __name__ == "__main__":
    main()
