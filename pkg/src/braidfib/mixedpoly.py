"""Semiholomorphic mixed polynomials from loops of polynomials.

A closed-form loop g_t with trigonometric-polynomial coefficients can be
folded into a polynomial f(u, v, vbar), holomorphic in u, through

    f(u, r e^{it}) = r^{kn} g_t(u / r^k),

provided every coefficient monomial a_m-mode e^{idt} turns into an honest
monomial: u^m r^{k(n-m)} e^{idt} = u^m v^p vbar^q needs p = (k(n-m)+d)/2
and q = (k(n-m)-d)/2 to be nonnegative integers, i.e. k(n-m) >= |d| and
k(n-m) = d mod 2.  The parity condition is exactly the classical symmetry
requirement on the loop (g_{t+pi} = g_t, or the odd variant); loops that
satisfy neither parity pattern are rejected.

By construction f is radially weighted homogeneous: every support point
(mu, nu) = (m, p+q) satisfies k*mu + nu = k*n, a line of negative slope.
The u-derivative f_u vanishes exactly on the cone (r^k c_j(t), r e^{it})
over the saddle braid of g, which verify_cone checks numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .rootfinding import aberth_roots
from .svgout import SvgCanvas

__all__ = [
    "MixedPolynomial",
    "NewtonData",
    "check_symmetry",
    "minimal_k",
    "semiholomorphic",
    "newton_data",
    "derivative_u",
    "verify_cone",
    "SymmetryError",
]

PRUNE_TOL = 1e-14


class SymmetryError(ValueError):
    """The loop violates the parity pattern needed for a polynomial in v, vbar."""


class MixedPolynomial:
    """Sparse sum of monomials c * u^i v^k vbar^l (no ubar: semiholomorphic)."""

    def __init__(self, monomials, pruned_total=0.0):
        clean = {}
        pruned = float(pruned_total)
        for (i, k, l), c in monomials.items():
            if i < 0 or k < 0 or l < 0:
                raise ValueError("exponents must be nonnegative")
            c = complex(c)
            if abs(c) <= PRUNE_TOL:
                pruned += abs(c)
                continue
            clean[(int(i), int(k), int(l))] = c
        self.monomials = dict(sorted(clean.items()))
        self.pruned_total = pruned

    def __len__(self):
        return len(self.monomials)

    def __eq__(self, other):
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        if self.monomials.keys() != other.monomials.keys():
            return False
        return all(abs(self.monomials[k] - other.monomials[k]) <= 1e-12
                   for k in self.monomials)

    def evaluate(self, u, v):
        u = np.asarray(u, dtype=np.complex128)
        v = np.asarray(v, dtype=np.complex128)
        vb = np.conj(v)
        out = np.zeros(np.broadcast(u, v).shape, dtype=np.complex128)
        for (i, k, l), c in self.monomials.items():
            out = out + c * u ** i * v ** k * vb ** l
        return out if out.shape else complex(out)

    def u_degree(self):
        return max((i for i, _, _ in self.monomials), default=0)

    def u_coefficients(self, v):
        """Ascending coefficients of f(., v) as a polynomial in u."""
        v = complex(v)
        vb = v.conjugate()
        out = np.zeros(self.u_degree() + 1, dtype=np.complex128)
        for (i, k, l), c in self.monomials.items():
            out[i] += c * v ** k * vb ** l
        return out

    def pretty(self):
        parts = []
        for (i, k, l), c in self.monomials.items():
            factors = []
            if i:
                factors.append(f"u^{i}" if i > 1 else "u")
            if k:
                factors.append(f"v^{k}" if k > 1 else "v")
            if l:
                factors.append(f"v̄^{l}" if l > 1 else "v̄")
            mono = "·".join(factors) if factors else "1"
            parts.append(f"({c.real:+.6g}{c.imag:+.6g}i)·{mono}")
        return " ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "monomials": [
                {"i": i, "k": k, "l": l, "re": c.real, "im": c.imag}
                for (i, k, l), c in self.monomials.items()
            ],
            "pruned_total": self.pruned_total,
        }

    @staticmethod
    def from_json(data):
        return MixedPolynomial(
            {(m["i"], m["k"], m["l"]): complex(m["re"], m["im"])
             for m in data["monomials"]},
            pruned_total=data.get("pruned_total", 0.0),
        )

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1, sort_keys=True)


def _loop_modes(loop):
    """[(m, d, coeff), ...] over the coefficients a_m of a closed-form loop."""
    if not loop.is_closed_form:
        raise ValueError("closed form required: the loop has multiple segments")
    seg = loop.segments[0]
    out = []
    for m, curve in enumerate(seg.coeffs):
        if curve.q != 1:
            raise ValueError("coefficients must be 2*pi periodic")
        for d, c in curve.terms():
            out.append((m, int(d), complex(c)))
    return out


def check_symmetry(loop):
    """Classify the half-period symmetry of the loop: 'even', 'odd' or 'none'.

    Even means g_{t+pi} = g_t: every coefficient carries only even Fourier
    degrees.  Odd is the pattern of g_{t+pi}(u) = -g_t(-u): the Fourier
    degrees of a_m all have the parity of m+1 (for odd n this is the exact
    functional identity; for even n it is the same formal parity pattern,
    with the monic leading term exempt).
    """
    modes = _loop_modes(loop)
    n = loop.degree
    even = all(d % 2 == 0 for _, d, _ in modes)
    if even:
        return "even"
    odd = all(d % 2 == (m + 1) % 2 for m, d, _ in modes if m < n)
    return "odd" if odd else "none"


def minimal_k(loop):
    """Smallest k making r^{kn} g_t(u/r^k) a polynomial in u, v, vbar.

    For every coefficient mode (m < n, degree d): k(n-m) >= |d| and
    k(n-m) = d (mod 2).  Raises SymmetryError when no k satisfies the
    parity conditions (the loop then has no such polynomial at all).
    """
    sym = check_symmetry(loop)
    if sym == "none":
        raise SymmetryError("loop has neither half-period symmetry: "
                            "f would not be a polynomial")
    n = loop.degree
    parity = None  # required parity of k, if constrained
    k_min = 1
    for m, d, _ in _loop_modes(loop):
        w = n - m
        if w % 2 == 0:
            if d % 2 != 0:
                raise SymmetryError(
                    f"mode e^{{i{d}t}} on a_{m}: k*{w} can never have odd parity"
                )
        else:
            need = d % 2
            if parity is None:
                parity = need
            elif parity != need:
                raise SymmetryError("conflicting parity requirements between modes")
        k_min = max(k_min, math.ceil(abs(d) / w))
    k = k_min
    if parity is not None and k % 2 != parity:
        k += 1
    return k


def _admissible(loop, k):
    n = loop.degree
    for m, d, _ in _loop_modes(loop):
        w = k * (n - m)
        if w < abs(d) or (w - d) % 2 != 0:
            return False
    return True


def semiholomorphic(loop, k=None):
    """The mixed polynomial with f(u, r e^{it}) = r^{kn} g_t(u/r^k), exactly."""
    if k is None:
        k = minimal_k(loop)
    if not _admissible(loop, k):
        raise SymmetryError(f"k={k} is not admissible for this loop")
    n = loop.degree
    mono = {(n, 0, 0): 1.0 + 0j}
    pruned = 0.0
    for m, d, c in _loop_modes(loop):
        w = k * (n - m)
        p = (w + d) // 2
        q = (w - d) // 2
        key = (m, p, q)
        mono[key] = mono.get(key, 0j) + c
    return MixedPolynomial(mono, pruned_total=pruned)


def derivative_u(f: MixedPolynomial):
    """f_u by the monomial rule; pure (v, vbar) terms drop out."""
    out = {}
    for (i, k, l), c in f.monomials.items():
        if i >= 1:
            out[(i - 1, k, l)] = out.get((i - 1, k, l), 0j) + i * c
    return MixedPolynomial(out)


@dataclass(frozen=True)
class NewtonData:
    support: tuple                 # sorted (mu, nu) lattice points
    boundary_vertices: tuple       # vertices of Gamma_f, lexicographically sorted
    boundary_edges: tuple          # compact edges as vertex pairs
    convenient: bool
    radially_weighted_homogeneous: bool

    def to_json(self):
        return {
            "support": [list(p) for p in self.support],
            "boundary_vertices": [list(p) for p in self.boundary_vertices],
            "boundary_edges": [[list(a), list(b)] for a, b in self.boundary_edges],
            "convenient": self.convenient,
            "radially_weighted_homogeneous": self.radially_weighted_homogeneous,
        }


def newton_data(f: MixedPolynomial):
    """Support, Newton boundary and the convenience / homogeneity flags.

    Support points are (mu, nu) = (u-exponent, total v+vbar exponent); the
    Newton boundary is the staircase of the convex hull of support +
    (R+)^2; radially weighted homogeneous means all support points lie on
    one line of negative slope (a single point counts as such).
    """
    if not f.monomials:
        raise ValueError("zero polynomial has no Newton data")
    pts = sorted({(i, k + l) for i, k, l in f.monomials})
    # Pareto-minimal staircase points
    minimal = []
    best_nu = math.inf
    for mu, nu in sorted(pts, key=lambda p: (p[0], p[1])):
        if nu < best_nu:
            minimal.append((mu, nu))
            best_nu = nu
    # lower-left convex chain of the minimal points
    chain = []
    for p in minimal:
        while len(chain) >= 2:
            (x1, y1), (x2, y2) = chain[-2], chain[-1]
            if (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1) >= 0:
                chain.pop()
            else:
                break
        chain.append(p)
    edges = tuple((a, b) for a, b in zip(chain, chain[1:]))
    convenient = any(nu == 0 for _, nu in pts) and any(mu == 0 for mu, _ in pts)
    if len(pts) == 1:
        rwh = True
    else:
        (x0, y0), (x1, y1) = pts[0], pts[-1]
        rwh = all((x1 - x0) * (y - y0) == (x - x0) * (y1 - y0) for x, y in pts)
        rwh = rwh and (x1 - x0) > 0 and (y1 - y0) < 0
    return NewtonData(tuple(pts), tuple(chain), edges, convenient, rwh)


def newton_svg(nd: NewtonData, size=400):
    """Staircase plot of the support and Newton boundary."""
    mu_max = max(p[0] for p in nd.support) + 1
    nu_max = max(p[1] for p in nd.support) + 1
    pad = 40
    canvas = SvgCanvas(size + 2 * pad, size + 2 * pad)
    sx = size / mu_max
    sy = size / nu_max

    def xy(mu, nu):
        return pad + mu * sx, pad + size - nu * sy

    for g in range(mu_max + 1):
        canvas.line(*xy(g, 0), *xy(g, nu_max), stroke="#dddddd", width=0.5)
    for g in range(nu_max + 1):
        canvas.line(*xy(0, g), *xy(mu_max, g), stroke="#dddddd", width=0.5)
    for a, b in nd.boundary_edges:
        canvas.line(*xy(*a), *xy(*b), stroke="#d62728", width=2.0)
    for p in nd.support:
        canvas.circle(*xy(*p), 4.0, fill="#1f77b4")
    flags = []
    if nd.convenient:
        flags.append("convenient")
    if nd.radially_weighted_homogeneous:
        flags.append("radially weighted homogeneous")
    canvas.text(pad + size / 2, pad + size + 30, ", ".join(flags) or "no flags", size=13)
    return canvas


def verify_cone(f: MixedPolynomial, loop, k, radii=(0.5, 1.0, 2.0), samples=64,
                tol=1e-6):
    """Check that the zeros of f_u are the cone r^k c_j(t) over the saddle set.

    Solves f_u(., r e^{it}) = 0 on a (radii x t) sample set and matches the
    roots against the scaled critical points of g_t (solved directly, so
    degenerate saddles such as a repeated critical point are allowed);
    reports the maximum relative mismatch.
    """
    fu = derivative_u(f)
    dloop = loop.derivative_loop()
    ts = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
    worst = 0.0
    where = None
    warm = None
    for t in ts:
        c_t = aberth_roots(dloop.coeffs_at(t), warm=warm)
        warm = c_t
        for r in radii:
            scale = r ** k
            v = r * np.exp(1j * t)
            coeffs = fu.u_coefficients(v)
            roots = aberth_roots(coeffs / coeffs[-1])
            target = scale * c_t
            d = np.abs(roots[None, :] - target[:, None])
            choice = np.argmin(d, axis=1)
            rel = float(np.max(d[np.arange(len(target)), choice]
                               / np.maximum(1.0, np.abs(target))))
            if rel > worst:
                worst, where = rel, (r, float(t))
    return {
        "max_relative_mismatch": worst,
        "at": where,
        "tolerance": tol,
        "passed": worst <= tol,
        "radii": list(radii),
        "samples_per_radius": samples,
    }
