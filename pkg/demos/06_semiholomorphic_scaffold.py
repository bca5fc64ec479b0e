#!/usr/bin/env python3
"""From loops of polynomials to mixed polynomials with controlled derivative.

A closed-form loop with the right half-period parity folds into a
polynomial f(u, v, vbar) with f(u, r e^{it}) = r^{kn} g_t(u/r^k) exactly.
The support of f lies on one line of negative slope (radially weighted
homogeneous), and f_u vanishes precisely on the cone over the saddle set
of the loop -- prescribing the saddle braid of g therefore prescribes the
zero set of the derivative of f.
"""

import os

from braidfib import (PolyLoop, TrigCurve, check_symmetry, derivative_u,
                      minimal_k, newton_data, semiholomorphic, verify_cone)
from braidfib.mixedpoly import newton_svg

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)


def show(name, g):
    sym = check_symmetry(g)
    print(f"{name}: symmetry = {sym}")
    if sym == "none":
        print("  no polynomial in (v, vbar) exists for this loop")
        return
    k = minimal_k(g)
    f = semiholomorphic(g, k)
    nd = newton_data(f)
    print(f"  minimal k = {k}")
    print(f"  f = {f.pretty()}")
    print(f"  support {nd.support} | convenient: {nd.convenient} | "
          f"radially weighted homogeneous: {nd.radially_weighted_homogeneous}")
    if g.degree >= 2:
        cone = verify_cone(f, g, k)
        print(f"  f_u = {derivative_u(f).pretty()}")
        print(f"  cone check: max relative mismatch {cone['max_relative_mismatch']:.2e} "
              f"at r in {cone['radii']}")
    return f, nd


show("torus loop u^2 - e^{2it}", PolyLoop.closed_form(
    [TrigCurve([2], [-1.0]), TrigCurve.zero()]))
print()
show("cusp loop u^3 - e^{2it}", PolyLoop.closed_form(
    [TrigCurve([2], [-1.0]), TrigCurve.zero(), TrigCurve.zero()]))
print()
f_nd = show("prescribed-saddle loop u^3 - (3/4) e^{2it} u", PolyLoop.closed_form(
    [TrigCurve.zero(), TrigCurve([2], [-0.75]), TrigCurve.zero()]))
print()
show("odd-parity cubic loop", PolyLoop.closed_form(
    [TrigCurve([3], [-1.0]), TrigCurve([2], [-1.0]), TrigCurve([1], [1.0])]))
print()
show("mixed-parity loop u^2 - e^{it} - 1 (rejected)", PolyLoop.closed_form(
    [TrigCurve([0, 1], [-1.0, -1.0]), TrigCurve.zero()]))

if f_nd:
    svg = os.path.join(OUT, "newton_staircase.svg")
    newton_svg(f_nd[1]).save(svg)
    print("\nwrote", svg)
