"""Brute-force spot check of the critical-value covering degree.

The map sending a monic degree-n polynomial (distinct roots, distinct
critical values, constant term off the critical values) to its unordered
critical values plus constant term is a covering of degree n^{n-1}.  That
is checkable by hand for n = 2 (two square roots) and by elimination for
n = 3: writing g = u^3 - (3/2)(c1+c2)u^2 + 3 c1 c2 u + a0 in terms of its
critical points, the condition g(c1) = v1 solves for c2 rationally and
g(c2) = v2 collapses to a cubic in x = c1^3,

    -8 x^3 + (54 C - 15 B) x^2 - 6 B^2 x + B^3 = 0,
    B = 2 (v1 - a0),  C = v2 - a0,

so the 9 = 3^2 preimages are exactly (3 roots x) * (3 cube roots each).
"""

from __future__ import annotations

import cmath

import numpy as np

from .rootfinding import aberth_roots, polyval

__all__ = ["quadratic_preimages", "cubic_preimages", "verify_critical_values"]


def quadratic_preimages(v, a0):
    """Monic quadratics with critical value v and constant term a0 (2 = 2^1)."""
    if abs(a0 - v) < 1e-12:
        raise ValueError("a0 must differ from the critical value")
    b = 2.0 * cmath.sqrt(a0 - v)
    return [np.array([a0, b, 1.0], dtype=complex),
            np.array([a0, -b, 1.0], dtype=complex)]


def cubic_preimages(v1, v2, a0):
    """Monic cubics with critical values {v1, v2} and constant term a0.

    Returns the verified, deduplicated list; for generic data it has
    exactly 9 = 3^2 entries.
    """
    out = []
    for w1, w2 in ((v1, v2), (v2, v1)):
        B = 2.0 * (w1 - a0)
        C = w2 - a0
        xs = np.roots([-8.0, 54.0 * C - 15.0 * B, -6.0 * B * B, B ** 3])
        for x in xs:
            if abs(x) < 1e-14:
                continue
            r = x ** (1.0 / 3.0)
            for m in range(3):
                c1 = r * cmath.exp(2j * cmath.pi * m / 3.0)
                c2 = (2.0 * (w1 - a0) + c1 ** 3) / (3.0 * c1 ** 2)
                g = np.array([a0, 3.0 * c1 * c2, -1.5 * (c1 + c2), 1.0], dtype=complex)
                if verify_critical_values(g, (v1, v2)):
                    out.append(g)
    # dedupe up to coefficient proximity
    distinct = []
    for g in out:
        if not any(np.max(np.abs(g - h)) < 1e-6 for h in distinct):
            distinct.append(g)
    return distinct


def verify_critical_values(coeffs, values, tol=1e-8):
    """True iff the polynomial's critical values match ``values`` as a multiset."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.size - 1
    dp = coeffs[1:] * np.arange(1, n + 1)
    crit = aberth_roots(dp / dp[-1])
    got = sorted(polyval(coeffs, crit), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    want = sorted(values, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    scale = max(1.0, max(abs(z) for z in want))
    return all(abs(a - b) <= tol * scale for a, b in zip(got, want))
