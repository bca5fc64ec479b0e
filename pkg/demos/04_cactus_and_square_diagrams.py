#!/usr/bin/env python3
"""Cacti, embedded trees, and square (Rampichini) diagrams.

For a polynomial with distinct critical-value arguments, each singular
leaf of the argument foliation is a cross joining two roots and two
boundary arcs; reading the arc pairs by increasing critical-value argument
gives the cactus, whose ordered product is always the full cycle.  Along a
loop of polynomials the critical-value arguments sweep out curves on the
(arg, t) torus; decorated with crossings, tangencies, and cactus labels
this square diagram encodes the whole (pseudo)fibration combinatorially.
"""

import os

import numpy as np

from braidfib import (cactus_of, embedded_tree_of, fiber_band_word, from_roots,
                      builtin_52, square_diagram, twist_loop)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

coeffs = np.poly(np.array([0.0, 1.0, -1.0]) * np.exp(0.35j))[::-1]
cac = cactus_of(coeffs)
print("rotated cubic: cactus =", cac.transpositions,
      "| product is the full cycle:", cac.is_full_cycle())
tree = embedded_tree_of(coeffs)
print("embedded tree edges (root indices):", [(a, b) for a, b, _ in tree.edges])

# a quartic whose twist reproduces the classical film of one band crossing
film = np.array([0.13776567 + 0.69083767j, -0.71068088 + 0.78546518j,
                 0.85151612 + 0.69490415j, 0.43269043 + 1.01554298j, 1.0])
tl = twist_loop(film, 1, +1)
d = film_diagram = square_diagram(tl, N=768)
cuts = sorted(t for t, _, _, _ in d.crossings)
print("\nfilm quartic twist: crossings at t =", [round(t, 3) for t in cuts])
for t0, t1 in zip([0.0] + cuts, cuts + [2 * np.pi]):
    cac_t = cactus_of(tl.coeffs_at(0.5 * (t0 + t1)))
    print(f"  cactus on [{t0:.3f}, {t1:.3f}]:", cac_t.transpositions)

g = from_roots(builtin_52())
d52 = square_diagram(g, N=1024)
print("\n5_2 square diagram: curves =", len(d52.curves),
      "| crossings =", len(d52.crossings),
      "| vertical tangencies =", len(d52.tangencies),
      "| Rampichini =", d52.rampichini)
svg_path = os.path.join(OUT, "52_square_diagram.svg")
d52.to_svg().save(svg_path)
d52.save_json(os.path.join(OUT, "52_square_diagram.json"))

word, chi = fiber_band_word(d52, g, phi=np.pi)
print("fiber band word at phi = pi:",
      [f"a{i},{j}{'^-1' if s < 0 else ''}" for (i, j), s in word.letters],
      "| chi = n - l =", chi)
print("\nwrote", svg_path)
