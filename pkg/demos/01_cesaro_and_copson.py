"""Cesaro and Copson operators on step functions, exactly and on grids.

Run: python3 demos/01_cesaro_and_copson.py
"""
import math

import numpy as np

from ceslab.kernels import ExactFun, cesaro_seq, copson_seq
from ceslab.norms import norm_value
from ceslab.spaces import HALF, UNIT, PCFun, Seq, parse_space


def main():
    print("Discrete operators on a = (1, 1, 1):")
    a = Seq([1.0, 1.0, 1.0])
    print("  C a  =", np.round(cesaro_seq(a, 5).values, 4))
    print("  C* a =", np.round(copson_seq(a, 4).values, 4))

    print("\nOn the half-line the sum C f + C* f equals C* C f. Step functions map to")
    print("log-polynomials, so both sides can be evaluated without quadrature:")
    f = PCFun([0.0, 0.5, 2.0, 3.0], [2.0, 0.5, 1.0], HALF)
    E = ExactFun.from_pcfun(f)
    x = np.array([0.25, 1.0, 2.5, 10.0])
    lhs = (E.cesaro() + E.copson())(x)
    rhs = E.cesaro().copson()(x)
    for xi, l, r in zip(x, lhs, rhs):
        print(f"  x={xi:<5g} C f + C* f = {l:.12f}   C* C f = {r:.12f}")

    print("\nThe family f_alpha = (1/x) on [alpha, 1] separates L1, CL1 and CCL1 on [0,1].")
    for k in (1, 2, 3):
        alpha = math.exp(-k)
        grid = np.concatenate([[0.0], np.geomspace(alpha, 1.0, 2 ** 12 + 1)])
        fa = PCFun.from_antiderivative(lambda t: np.log(np.maximum(t, alpha)), grid, UNIT)
        l1 = norm_value(parse_space("Lp(1,[0,1])"), fa)
        c1 = norm_value(parse_space("Ces(Lp(1,[0,1]))"), fa)
        cc1 = norm_value(parse_space("Ces(Ces(Lp(1,[0,1])))"), fa)
        print(f"  alpha=e^-{k}: L1 {l1:.6f}  CL1 {c1:.6f} (k^2/2 = {k * k / 2:g})"
              f"  CCL1 {cc1:.6f} (k^3/6 = {k ** 3 / 6:.6f})")
    print("The iterated norm follows ln^3(1/alpha)/6, the integral of the kernel ln^2(1/t)/2.")


if __name__ == "__main__":
    main()
