"""Simultaneous root finding for monic complex polynomials (Aberth-Ehrlich).

Coefficients are ascending: p(u) = a[0] + a[1] u + ... + a[n] u^n with
a[n] = 1.  Warm starts matter: continuation along a loop of polynomials
reuses the previous slice's roots, so one or two sweeps usually suffice.
"""

from __future__ import annotations

import numpy as np

__all__ = ["aberth_roots", "polyval", "polyder", "RootSolveError"]


class RootSolveError(RuntimeError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


def polyval(coeffs, u):
    """Horner evaluation; coeffs ascending, u scalar or array."""
    coeffs = np.asarray(coeffs)
    out = np.full_like(np.asarray(u, dtype=np.complex128), coeffs[-1], dtype=np.complex128)
    for a in coeffs[-2::-1]:
        out = out * u + a
    return out


def polyder(coeffs):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = coeffs.size - 1
    return coeffs[1:] * np.arange(1, n + 1)


def _initial_guesses(coeffs):
    n = len(coeffs) - 1
    radius = 1.0 + max(abs(c) for c in coeffs[:-1]) if n else 1.0
    # slight angular offset breaks the symmetry stall of symmetric polynomials
    ang = 2 * np.pi * (np.arange(n) + 0.25) / n + 0.3937
    return 0.8 * radius * np.exp(1j * ang)


def aberth_roots(coeffs, warm=None, tol=1e-13, max_iter=500):
    """All n roots of a monic polynomial, backward error <= tol * coeff scale.

    ``warm`` optionally seeds the iteration (e.g. the previous slice's
    roots).  Raises RootSolveError if the iteration cap is reached without
    meeting the backward-error bound.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = coeffs.size - 1
    if n < 1:
        raise ValueError("degree must be >= 1")
    if abs(coeffs[-1] - 1.0) > 1e-9:
        raise ValueError("polynomial must be monic")
    if n == 1:
        return np.array([-coeffs[0]])
    dcoeffs = polyder(coeffs)
    z = np.array(warm, dtype=np.complex128) if warm is not None else _initial_guesses(coeffs)
    if z.size != n:
        raise ValueError("warm start has wrong length")
    absc = np.abs(coeffs)
    for _ in range(max_iter):
        p = polyval(coeffs, z)
        # backward error bound: |p(z)| <= tol * sum |a_m| |z|^m
        scale = polyval(absc, np.abs(z)).real
        done = np.abs(p) <= tol * scale
        if np.all(done):
            return z
        dp = polyval(dcoeffs, z)
        newton = np.where(dp != 0, p / np.where(dp == 0, 1.0, dp), 0.1 + 0.1j)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        sums = inv.sum(axis=1)
        denom = 1.0 - newton * sums
        small = np.abs(denom) < 1e-300
        step = np.where(small, newton, newton / np.where(small, 1.0, denom))
        z = z - np.where(done, 0.0, step)
    p = polyval(coeffs, z)
    scale = polyval(absc, np.abs(z)).real
    res = float(np.max(np.abs(p) / np.maximum(scale, 1e-300)))
    if res <= 1e4 * tol:
        # stagnated within a hair of the bound; accept (clustered roots)
        return z
    raise RootSolveError(f"root iteration did not converge (residual {res:.2e})", residual=res)
