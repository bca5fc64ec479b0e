"""Trigonometric polynomials z(t) = sum_k c_k exp(i k t / q).

These are the curves everything else is made of: braid strands, polynomial
loop coefficients, and the loops gamma(t) that drive twist constructions.
The subperiod denominator ``q`` allows curves that only close up after q
turns, such as the strands of a braid whose closure permutation is a
q-cycle (each strand is 2*pi*q periodic; the strand *set* is 2*pi
periodic).  Coefficient curves of a valid polynomial loop must always
collapse to q = 1.

Degrees are stored as integers k; the effective Fourier degree is k/q.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["TrigCurve"]

PRUNE_TOL = 1e-14


class TrigCurve:
    """A finite Fourier sum with subperiod q, immutable after construction."""

    __slots__ = ("q", "degs", "coefs")

    def __init__(self, degs, coefs, q=1, prune=True):
        if q < 1:
            raise ValueError("subperiod q must be a positive integer")
        degs = np.asarray(degs, dtype=np.int64).ravel()
        coefs = np.asarray(coefs, dtype=np.complex128).ravel()
        if degs.shape != coefs.shape:
            raise ValueError("degs and coefs must have equal length")
        if degs.size:
            order = np.argsort(degs)
            degs, coefs = degs[order], coefs[order]
            if np.any(np.diff(degs) == 0):
                # merge duplicate degrees
                out_d, out_c = [], []
                for d, c in zip(degs, coefs):
                    if out_d and out_d[-1] == d:
                        out_c[-1] += c
                    else:
                        out_d.append(d)
                        out_c.append(c)
                degs = np.array(out_d, dtype=np.int64)
                coefs = np.array(out_c, dtype=np.complex128)
        if prune and degs.size:
            scale = np.max(np.abs(coefs)) if coefs.size else 0.0
            keep = np.abs(coefs) > PRUNE_TOL * max(1.0, scale)
            degs, coefs = degs[keep], coefs[keep]
        # reduce q when every degree is a multiple of a common factor of q
        if q > 1:
            g = q
            for d in degs:
                g = math.gcd(g, int(d))
                if g == 1:
                    break
            if g > 1:
                degs = degs // g
                q = q // g
        self.q = int(q)
        self.degs = degs
        self.coefs = coefs
        self.degs.setflags(write=False)
        self.coefs.setflags(write=False)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def constant(c):
        if c == 0:
            return TrigCurve([], [])
        return TrigCurve([0], [c])

    @staticmethod
    def zero():
        return TrigCurve([], [])

    @staticmethod
    def harmonic(k, c=1.0, q=1):
        """c * exp(i k t / q)."""
        return TrigCurve([k], [c], q=q)

    @staticmethod
    def from_samples(values, q=1, max_degree=None):
        """Least-squares-exact Fourier fit of uniform samples on [0, 2*pi*q).

        ``values`` are samples at t_m = 2*pi*q*m/M.  Modes are integer
        multiples of 1/q up to max_degree (in units of 1/q), i.e. |k| <=
        max_degree with effective degree k/q.
        """
        values = np.asarray(values, dtype=np.complex128).ravel()
        m = values.size
        spectrum = np.fft.fft(values) / m
        kk = np.fft.fftfreq(m, d=1.0 / m).astype(np.int64)  # mode index in e^{i k s}, s = t/q
        if max_degree is not None:
            keep = np.abs(kk) <= max_degree
            kk, spectrum = kk[keep], spectrum[keep]
        return TrigCurve(kk, spectrum, q=q)

    # -- basic queries ---------------------------------------------------

    @property
    def max_degree(self):
        """Largest |k| present (in units of 1/q)."""
        return int(np.max(np.abs(self.degs))) if self.degs.size else 0

    def is_zero(self, tol=PRUNE_TOL):
        return not self.degs.size or np.all(np.abs(self.coefs) <= tol)

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t):
        t = np.asarray(t, dtype=np.float64)
        if not self.degs.size:
            return np.zeros(t.shape, dtype=np.complex128) if t.shape else 0j
        phase = np.exp(1j * np.multiply.outer(t / self.q, self.degs.astype(np.float64)))
        out = phase @ self.coefs
        return out if t.shape else complex(out)

    def derivative(self):
        """d/dt: multiplies each coefficient by i*k/q."""
        return TrigCurve(self.degs, self.coefs * (1j * self.degs / self.q), q=self.q, prune=False)

    def conjugate(self):
        return TrigCurve(-self.degs, np.conj(self.coefs), q=self.q)

    def shifted(self, dt):
        """The curve t -> z(t + dt)."""
        return TrigCurve(self.degs, self.coefs * np.exp(1j * self.degs * (dt / self.q)), q=self.q)

    # -- arithmetic -------------------------------------------------------

    def _aligned(self, other):
        if isinstance(other, (int, float, complex)):
            other = TrigCurve.constant(other)
        L = self.q * other.q // math.gcd(self.q, other.q)
        a = self.degs * (L // self.q)
        b = other.degs * (L // other.q)
        return a, self.coefs, b, other.coefs, L

    def __add__(self, other):
        a, ca, b, cb, L = self._aligned(other)
        return TrigCurve(np.concatenate([a, b]), np.concatenate([ca, cb]), q=L)

    __radd__ = __add__

    def __neg__(self):
        return TrigCurve(self.degs, -self.coefs, q=self.q, prune=False)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigCurve) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return TrigCurve(self.degs, self.coefs * other, q=self.q)
        a, ca, b, cb, L = self._aligned(other)
        if not a.size or not b.size:
            return TrigCurve([], [], q=1)
        degs = (a[:, None] + b[None, :]).ravel()
        coefs = (ca[:, None] * cb[None, :]).ravel()
        return TrigCurve(degs, coefs, q=L)

    __rmul__ = __mul__

    # -- structure --------------------------------------------------------

    def collapse_subperiod(self, tol=1e-11):
        """Drop non-integer-degree modes and return a q = 1 curve.

        Raises if a dropped mode is larger than ``tol`` relative to the
        curve scale: the curve genuinely fails to be 2*pi periodic then.
        """
        if self.q == 1:
            return self
        scale = max(1.0, float(np.max(np.abs(self.coefs))) if self.coefs.size else 0.0)
        frac = self.degs % self.q != 0
        bad = np.abs(self.coefs[frac])
        if bad.size and bad.max() > tol * scale:
            raise ValueError(
                f"curve is not 2*pi periodic: fractional mode of size {bad.max():.3e}"
            )
        keep = ~frac
        return TrigCurve(self.degs[keep] // self.q, self.coefs[keep], q=1)

    def terms(self):
        """Iterate (degree k, coefficient); effective degree is k/q."""
        return list(zip(self.degs.tolist(), self.coefs.tolist()))

    def __repr__(self):
        inner = ", ".join(f"{k}:{c:.3g}" for k, c in self.terms())
        return f"TrigCurve(q={self.q}, {{{inner}}})"


def elementary_symmetric(curves):
    """Coefficient curves of prod_j (u - z_j(t)) for TrigCurve roots z_j.

    Returns [a_0, ..., a_{n-1}] with prod (u - z_j) = u^n + sum a_m u^m.
    """
    coeffs = [TrigCurve.constant(1.0)]
    for z in curves:
        nxt = [(-z) * coeffs[0]]
        for m in range(1, len(coeffs)):
            nxt.append(coeffs[m - 1] + (-z) * coeffs[m])
        nxt.append(TrigCurve.constant(1.0))
        coeffs = nxt
    return coeffs[:-1]
