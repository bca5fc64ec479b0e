"""Loops of monic complex polynomials and their three braids.

A PolyLoop is a 2*pi-periodic family g_t of monic degree-n polynomials,
stored as trigonometric coefficient curves, either in a single closed-form
piece or as chained segments.  From it we track

* the roots (a geometric braid on n strands when they stay distinct),
* the critical points, i.e. the roots of dg/du -- the saddle point braid
  on n-1 strands,
* the critical values v_j(t) = g_t(c_j(t)) together with the argument
  velocity d/dt arg v_j = Im(dg/dt (c_j, t) / v_j), which is exact because
  g_u(c_j) = 0 kills the other chain-rule term.

Everything downstream (argument-critical points, square diagrams, fiber
meshes) consumes the SampledBraid / CriticalData produced here.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .braidwords import Permutation
from .rootfinding import aberth_roots, polyval
from .strands import CollisionError
from .trigcurves import TrigCurve, elementary_symmetric

__all__ = [
    "PolyLoop",
    "PolySegment",
    "SampledBraid",
    "CriticalData",
    "from_roots",
    "roots_at",
    "track",
    "critical_data",
    "prescribe_saddle",
    "twist_loop",
    "twist_concatenation",
    "concatenate",
]

CHAIN_TOL = 1e-8
COLLISION_TOL = 1e-6
AMBIGUITY_RATIO = 2.0
MAX_HALVINGS = 20


class PolySegment:
    """Coefficient curves a_0..a_{n-1} over a subinterval [t0, t1] of the loop.

    The curves are parametrized by a local phase running 0..2*pi across the
    segment; every curve must be genuinely 2*pi periodic (q == 1).
    """

    __slots__ = ("t0", "t1", "coeffs")

    def __init__(self, coeffs, t0=0.0, t1=2 * math.pi):
        if not t1 > t0:
            raise ValueError("empty segment")
        coeffs = tuple(coeffs)
        for c in coeffs:
            if c.q != 1:
                raise ValueError("segment coefficients must be 2*pi periodic (q == 1)")
        self.t0, self.t1, self.coeffs = float(t0), float(t1), coeffs

    def phase(self, t):
        return (t - self.t0) / (self.t1 - self.t0) * (2 * math.pi)

    def phase_rate(self):
        return 2 * math.pi / (self.t1 - self.t0)


class PolyLoop:
    """A 2*pi-periodic loop of monic degree-n polynomials."""

    def __init__(self, segments, validate=True, meta=None):
        segments = tuple(segments)
        if not segments:
            raise ValueError("a loop needs at least one segment")
        degrees = {len(s.coeffs) for s in segments}
        if len(degrees) != 1:
            raise ValueError("all segments must share the polynomial degree")
        self.degree = degrees.pop()
        self.segments = segments
        self.meta = dict(meta or {})
        if validate:
            self._validate_chaining()

    @staticmethod
    def closed_form(coeffs, meta=None):
        """Single-segment loop with coefficients given on the whole circle."""
        return PolyLoop([PolySegment(coeffs)], meta=meta)

    @property
    def n(self):
        return self.degree

    @property
    def is_closed_form(self):
        return len(self.segments) == 1

    def _validate_chaining(self):
        scale = max(1.0, self.coefficient_scale())
        prev_end = None
        for seg in self.segments:
            vals = np.array([c(2 * math.pi) for c in seg.coeffs])
            start = np.array([c(0.0) for c in seg.coeffs])
            if prev_end is not None and np.max(np.abs(start - prev_end)) > CHAIN_TOL * scale:
                raise ValueError("segments do not chain: coefficient jump at interior junction")
            prev_end = vals
        first = np.array([c(0.0) for c in self.segments[0].coeffs])
        if np.max(np.abs(prev_end - first)) > CHAIN_TOL * scale:
            raise ValueError("loop does not close up: coefficient jump at t=0")
        spans = [(s.t0, s.t1) for s in self.segments]
        if abs(spans[0][0]) > 1e-12 or abs(spans[-1][1] - 2 * math.pi) > 1e-12:
            raise ValueError("segments must cover [0, 2*pi]")
        for (a, b), (c, _) in zip(spans, spans[1:]):
            if abs(b - c) > 1e-12:
                raise ValueError("segment spans must tile [0, 2*pi]")

    def coefficient_scale(self):
        out = 0.0
        for seg in self.segments:
            for c in seg.coeffs:
                if c.coefs.size:
                    out = max(out, float(np.sum(np.abs(c.coefs))))
        return out

    def root_scale(self):
        """Crude bound for root magnitudes from coefficient sizes."""
        n, out = self.degree, 1.0
        for seg in self.segments:
            for m, c in enumerate(seg.coeffs):
                if c.coefs.size:
                    out = max(out, float(np.sum(np.abs(c.coefs))) ** (1.0 / (n - m)))
        return out

    def _segment_at(self, t):
        t = float(t) % (2 * math.pi)
        for seg in self.segments:
            if seg.t0 - 1e-15 <= t < seg.t1:
                return seg, t
        return self.segments[-1], t

    def coeffs_at(self, t):
        """Ascending coefficients [a_0, ..., a_{n-1}, 1] at time t."""
        seg, t = self._segment_at(t)
        tau = seg.phase(t)
        out = np.empty(self.degree + 1, dtype=np.complex128)
        for m, c in enumerate(seg.coeffs):
            out[m] = c(tau)
        out[self.degree] = 1.0
        return out

    def dcoeffs_at(self, t):
        """Time derivatives [da_0/dt, ..., da_{n-1}/dt, 0] at time t."""
        seg, t = self._segment_at(t)
        tau, rate = seg.phase(t), seg.phase_rate()
        out = np.empty(self.degree + 1, dtype=np.complex128)
        for m, c in enumerate(seg.coeffs):
            out[m] = c.derivative()(tau) * rate
        out[self.degree] = 0.0
        return out

    def coeff_rows(self, ts):
        """Matrix of ascending coefficient rows, shape (len(ts), n+1)."""
        ts = np.asarray(ts, dtype=np.float64)
        rows = np.empty((ts.size, self.degree + 1), dtype=np.complex128)
        for i, t in enumerate(ts.ravel()):
            rows[i] = self.coeffs_at(t)
        return rows

    def eval(self, u, t):
        return polyval(self.coeffs_at(t), u)

    def eval_dt(self, u, t):
        return polyval(self.dcoeffs_at(t), u)

    def derivative_loop(self):
        """The monic loop of g_t'/n, whose roots are the critical points."""
        n = self.degree
        if n < 2:
            raise ValueError("derivative loop needs degree >= 2")
        segs = []
        for seg in self.segments:
            coeffs = [seg.coeffs[m + 1] * ((m + 1) / n) for m in range(n - 1)]
            segs.append(PolySegment(coeffs, seg.t0, seg.t1))
        return PolyLoop(segs, validate=False, meta={"derivative_of": self.meta.get("name")})

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return {
            "degree": self.degree,
            "segments": [
                {
                    "t0": seg.t0,
                    "t1": seg.t1,
                    "coeffs": [
                        {"q": c.q, "terms": [[int(k), z.real, z.imag] for k, z in c.terms()]}
                        for c in seg.coeffs
                    ],
                }
                for seg in self.segments
            ],
            "meta": {k: v for k, v in self.meta.items() if isinstance(v, (str, int, float))},
        }

    @staticmethod
    def from_json(data):
        segs = []
        for rec in data["segments"]:
            coeffs = []
            for crec in rec["coeffs"]:
                degs = [t[0] for t in crec["terms"]]
                cs = [complex(t[1], t[2]) for t in crec["terms"]]
                coeffs.append(TrigCurve(degs, cs, q=crec.get("q", 1)))
            segs.append(PolySegment(coeffs, rec["t0"], rec["t1"]))
        return PolyLoop(segs, meta=data.get("meta"))

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1, sort_keys=True)

    @staticmethod
    def load(path):
        with open(path) as f:
            return PolyLoop.from_json(json.load(f))


# -- construction -------------------------------------------------------------


def from_roots(strand_system):
    """g_t(u) = prod_j (u - z_j(t)) for a StrandSystem of TrigCurve strands.

    The elementary symmetric coefficient curves of a braid are 2*pi
    periodic even when individual strands need several turns to close up;
    fractional Fourier modes must cancel and are verified to do so.
    """
    coeffs = [c.collapse_subperiod() for c in elementary_symmetric(strand_system.curves)]
    return PolyLoop.closed_form(coeffs, meta={"kind": "from_roots"})


def roots_at(loop, t, warm=None, tol=1e-13):
    """All n roots of g_t, warm-startable for continuation."""
    return aberth_roots(loop.coeffs_at(t), warm=warm, tol=tol)


# -- tracking ------------------------------------------------------------------


class SampledBraid:
    """Strand-aligned samples of the roots (or critical points) of a loop.

    ``points[i, j]`` follows strand j across the uniform grid ``ts`` (which
    includes the closure sample t = 2*pi).  ``points_at`` re-solves at any
    t with a warm start from the nearest stored slice, so bisection-style
    refinement against the continuous object is available downstream.
    """

    def __init__(self, loop, ts, points, closure, collision_tol):
        self.loop = loop
        self.ts = ts
        self.points = points
        self.closure = closure
        self.collision_tol = collision_tol

    @property
    def n(self):
        return self.points.shape[1]

    def points_at(self, t):
        # warm row chosen from the *unwrapped* t so that small overshoots past
        # the seam stay in the closure row's strand convention
        t = float(t)
        N = len(self.ts) - 1
        i = min(max(int(round(t / (2 * math.pi) * N)), 0), N)
        warm = self.points[i]
        z = aberth_roots(self.loop.coeffs_at(t), warm=warm)
        return _align(warm, z)

    def sample(self, ts):
        ts = np.asarray(ts, dtype=np.float64)
        if ts.size == self.ts.size and np.allclose(ts, self.ts):
            return self.points
        return np.stack([self.points_at(t) for t in ts], axis=0)

    def min_separation(self):
        d = np.inf
        for a in range(self.n):
            for b in range(a + 1, self.n):
                d = min(d, float(np.min(np.abs(self.points[:, a] - self.points[:, b]))))
        return d

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("t,j,re,im,strand_id\n")
            for i, t in enumerate(self.ts):
                for j in range(self.n):
                    z = self.points[i, j]
                    f.write(f"{t:.17g},{j + 1},{z.real:.17g},{z.imag:.17g},{j + 1}\n")


def _align(ref, pts):
    """Order ``pts`` so entry j is the one nearest ref[j]; must be a bijection."""
    k = len(ref)
    d = np.abs(pts[None, :] - ref[:, None])
    choice = np.argmin(d, axis=1)
    if len(set(choice.tolist())) != k:
        raise AmbiguousMatch("nearest-neighbour matching is not a bijection")
    return pts[choice]


class AmbiguousMatch(RuntimeError):
    pass


def _match_step(ref, pts):
    """Nearest-neighbour match with the 2x ambiguity test of the tracker."""
    k = len(ref)
    d = np.abs(pts[None, :] - ref[:, None])  # d[j, i] = |pts[i] - ref[j]|
    order = np.argsort(d, axis=1)
    first = d[np.arange(k), order[:, 0]]
    if k > 1:
        second = d[np.arange(k), order[:, 1]]
        if np.any(second < AMBIGUITY_RATIO * first):
            raise AmbiguousMatch("two candidate matches within 2x of each other")
    choice = order[:, 0]
    if len(set(choice.tolist())) != k:
        raise AmbiguousMatch("matching is not a bijection")
    return pts[choice]


def track(loop, which="roots", N=1024, collision_tol=None, tol=1e-13):
    """Continuation of the roots or critical points over a uniform N-grid.

    Matching is nearest neighbour; when two candidate matches come within a
    factor 2 of each other the step is bisected, up to 20 halvings, after
    which the configuration is declared singular ("not a braid").  The
    closure permutation records which strand each strand continues into at
    t = 2*pi.  Deterministic: no randomness, warm starts fixed by the
    initial deterministic ordering.
    """
    if which == "roots":
        target = loop
    elif which == "critical_points":
        target = loop.derivative_loop()
    else:
        raise ValueError("which must be 'roots' or 'critical_points'")
    k = target.degree
    scale = target.root_scale()
    ctol = collision_tol if collision_tol is not None else COLLISION_TOL * scale
    ts = np.linspace(0.0, 2 * math.pi, N + 1)
    pts = np.empty((N + 1, k), dtype=np.complex128)
    z0 = aberth_roots(target.coeffs_at(0.0), tol=tol)
    z0 = np.array(sorted(z0, key=lambda z: (round(z.real, 12), round(z.imag, 12))))
    _check_distinct(z0, ctol, 0.0, which)
    pts[0] = z0

    def advance(z_from, t_from, t_to, depth):
        z_new = aberth_roots(target.coeffs_at(t_to), warm=z_from, tol=tol)
        _check_distinct(z_new, ctol, t_to, which)
        try:
            return _match_step(z_from, z_new)
        except AmbiguousMatch:
            if depth >= MAX_HALVINGS:
                raise CollisionError(
                    f"not a braid at t={t_to:.6f}: {which} cannot be disentangled"
                )
            tm = 0.5 * (t_from + t_to)
            z_mid = advance(z_from, t_from, tm, depth + 1)
            return advance(z_mid, tm, t_to, depth + 1)

    for i in range(N):
        pts[i + 1] = advance(pts[i], ts[i], ts[i + 1], 0)

    d = np.abs(pts[N][None, :] - pts[0][:, None])
    images = np.argmin(d, axis=0)  # strand j ends where strand images[j] starts
    if len(set(images.tolist())) != k:
        raise CollisionError("closure matching is not a bijection")
    closure = Permutation(tuple(int(i) + 1 for i in images))
    return SampledBraid(target, ts, pts, closure, ctol)


def _check_distinct(z, ctol, t, which):
    k = len(z)
    for a in range(k):
        for b in range(a + 1, k):
            if abs(z[a] - z[b]) < ctol:
                raise CollisionError(
                    f"not a braid at t={t:.6f}: {which} {a + 1} and {b + 1} collide"
                )


# -- critical data -------------------------------------------------------------


class CriticalData:
    """Saddle samples c_j(t), critical values v_j(t), and d/dt arg v_j samples."""

    def __init__(self, loop, saddles, flags, zero_tol):
        self.loop = loop
        self.saddles = saddles          # SampledBraid of the critical points
        self.ts = saddles.ts
        self.c = saddles.points
        self.zero_tol = zero_tol
        rows = np.empty_like(self.c)
        drows = np.empty_like(self.c)
        for i, t in enumerate(self.ts):
            co = loop.coeffs_at(t)
            dco = loop.dcoeffs_at(t)
            rows[i] = polyval(co, self.c[i])
            drows[i] = polyval(dco, self.c[i])
        self.v = rows
        self.dv = drows
        with np.errstate(invalid="ignore", divide="ignore"):
            # v = 0 means the loop left Xhat; flagged below, velocity is NaN there
            self.dargv = np.imag(self.dv / self.v)
        self.flags = list(flags)
        vmin = float(np.min(np.abs(self.v))) if self.v.size else np.inf
        if vmin < zero_tol:
            self.flags.append(f"critical value hits 0 (min |v| = {vmin:.3e}): loop leaves Xhat")
        # constant-term-vs-critical-value check, at samples only
        a0 = np.array([self.loop.coeffs_at(t)[0] for t in self.ts])
        gap = float(np.min(np.abs(self.v - a0[:, None]))) if self.v.size else np.inf
        if gap < zero_tol:
            self.flags.append(f"constant term meets a critical value (gap {gap:.3e})")

    @property
    def n_saddles(self):
        return self.c.shape[1]

    def residual(self):
        """max |g'(c_j)| over the grid, as a backward sanity check."""
        out = 0.0
        for i, t in enumerate(self.ts):
            co = self.loop.coeffs_at(t)
            dp = polyval(np.asarray(co[1:]) * np.arange(1, len(co)), self.c[i])
            out = max(out, float(np.max(np.abs(dp))))
        return out

    def at(self, t):
        """(c_j, v_j, dargv_j) at arbitrary t, strand-aligned with the samples."""
        c = self.saddles.points_at(t)
        co = self.loop.coeffs_at(t)
        dco = self.loop.dcoeffs_at(t)
        v = polyval(co, c)
        dv = polyval(dco, c)
        with np.errstate(invalid="ignore", divide="ignore"):
            return c, v, np.imag(dv / v)

    def args(self):
        return np.angle(self.v) % (2 * np.pi)


def critical_data(loop, N=1024, collision_tol=None, zero_tol=1e-9):
    """Track the saddle braid and evaluate critical values along it."""
    sb = track(loop, "critical_points", N=N, collision_tol=collision_tol)
    return CriticalData(loop, sb, [], zero_tol * max(1.0, loop.root_scale()))


# -- prescribed saddles ---------------------------------------------------------


def prescribe_saddle(c_system, eps0=None, grid=1024, collision_tol=None, max_steps=200):
    """Loop with prescribed critical points: h_t(u) = n * int_0^u prod (w - c_j(t)) dw.

    The critical points of h_t are exactly the strands of ``c_system`` for
    any additive constant, so the smallest deformation eps in {0, eps0,
    2*eps0, ...} (a real constant added to h) that makes the roots distinct
    on the validation grid is applied.
    """
    n = c_system.n + 1
    p_coeffs = [c.collapse_subperiod() for c in elementary_symmetric(c_system.curves)]
    a = [TrigCurve.zero()]
    for m, pm in enumerate(p_coeffs):
        a.append(pm * (n / (m + 1)))
    # a has entries a_0 .. a_{n-1}; leading coefficient n * 1/n = 1 is implicit
    assert len(a) == n

    ts = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    scale = 1.0 + max(float(np.max(np.abs(c.evaluate(ts)))) for c in c_system.curves)
    eps0 = eps0 if eps0 is not None else 1e-3 * scale ** n
    ctol = collision_tol if collision_tol is not None else COLLISION_TOL * scale

    rows = np.empty((grid, n + 1), dtype=np.complex128)
    for m in range(n):
        rows[:, m] = a[m].evaluate(ts)
    rows[:, n] = 1.0

    for step in range(max_steps):
        eps = step * eps0
        ok = True
        warm = None
        for i in range(grid):
            co = rows[i].copy()
            co[0] += eps
            z = aberth_roots(co, warm=warm)
            warm = z
            dmin = np.min(np.abs(z[None, :] - z[:, None]) + np.eye(n) * 1e9)
            if dmin < ctol:
                ok = False
                break
        if ok:
            coeffs = [a[0] + eps] + a[1:]
            return PolyLoop.closed_form(
                coeffs, meta={"kind": "prescribed_saddle", "eps": eps}
            )
    raise ValueError("no additive constant below the cap separates the roots")


# -- twist loops -----------------------------------------------------------------


def _winding(curve_vals, center):
    rel = np.angle(curve_vals - center)
    inc = np.diff(rel)
    inc = (inc + np.pi) % (2 * np.pi) - np.pi
    return int(round(float(np.sum(inc)) / (2 * np.pi)))


def critical_values_of(p):
    """Critical points and values of a monic polynomial, ordered by (arg, |v|)."""
    p = np.asarray(p, dtype=np.complex128)
    n = p.size - 1
    dp = p[1:] * np.arange(1, n + 1)
    c = aberth_roots(dp / dp[-1])
    v = polyval(p, c)
    order = sorted(range(n - 1), key=lambda i: (np.angle(v[i]) % (2 * np.pi), abs(v[i])))
    return c[order], v[order]


def twist_loop(p, j, sign=+1, margin_frac=1.0 / 3.0, profile=None):
    """The loop p - gamma_j(t): a lasso of the constant term around one critical value.

    gamma_j(t) = v_j (1 - rho(t) e^{i s t}) starts and ends at 0, follows
    the segment [0, v_j], circles v_j once with orientation ``sign`` at
    radius delta, and returns; rho(t) = delta + (1 - delta) ((1+cos t)/2)^m
    keeps the whole trace inside a tube around segment-plus-circle whose
    clearance from every other critical value is checked numerically.  Only
    the constant term depends on t, so the critical points of the loop are
    those of p, exactly constant, and arg v_j(t) moves with constant
    velocity ``sign`` while the other critical values ride along as
    v_i - gamma_j(t).
    """
    p = np.asarray(p, dtype=np.complex128)
    n = p.size - 1
    if abs(p[-1] - 1) > 1e-12:
        raise ValueError("p must be monic")
    roots = aberth_roots(p)
    _check_distinct(roots, 1e-9, 0.0, "roots")
    c, v = critical_values_of(p)
    _check_distinct(v, 1e-12, 0.0, "critical values")
    if np.min(np.abs(v)) < 1e-12:
        raise ValueError("a critical value sits at the basepoint 0; p is not in Xhat")
    if not 1 <= j <= n - 1:
        raise ValueError(f"critical value index {j} out of range")
    vj = v[j - 1]
    others = np.delete(v, j - 1)

    if others.size:
        seg_d = _dist_to_segment(others, 0.0, vj)
        margin = margin_frac * float(np.min(seg_d))
        if margin <= 0:
            raise ValueError("critical values too crowded: perturb p first")
        delta_abs = min(0.8 * margin, 0.3 * float(np.min(np.abs(others - vj))), 0.5 * abs(vj))
    else:
        margin = 0.4 * abs(vj)
        delta_abs = 0.4 * abs(vj)
    delta = delta_abs / abs(vj)

    half = TrigCurve([-1, 0, 1], [0.25, 0.5, 0.25])  # (1 + cos t)/2
    ts = np.linspace(0.0, 2 * math.pi, 8192, endpoint=False)
    chosen = None
    profiles = [profile] if profile else [4, 8, 16, 32, 64, 128, 256]
    for m in profiles:
        h = TrigCurve.constant(1.0)
        for _ in range(m):
            h = h * half
        rho = delta + (1.0 - delta) * h
        gamma = (TrigCurve.constant(1.0) - rho * TrigCurve.harmonic(sign)) * vj
        gv = gamma.evaluate(ts)
        ok = np.min(np.abs(gv - vj)) >= 0.8 * delta_abs
        ok = ok and _winding(np.append(gv, gv[0]), vj) == sign
        for vi in others:
            ok = ok and np.min(np.abs(gv - vi)) >= margin
            ok = ok and _winding(np.append(gv, gv[0]), vi) == 0
        if ok:
            chosen = (gamma, m)
            break
    if chosen is None:
        raise ValueError("critical values too crowded for a clean lasso: perturb p first")
    gamma, m = chosen

    coeffs = [TrigCurve.constant(p[0]) - gamma] + [TrigCurve.constant(z) for z in p[1:n]]
    return PolyLoop.closed_form(
        coeffs,
        meta={
            "kind": "twist_loop", "j": j, "sign": sign, "margin": margin,
            "delta": delta_abs, "profile_m": m,
        },
    )


def _dist_to_segment(pts, a, b):
    ab = b - a
    tt = np.clip(((pts - a) * np.conj(ab)).real / abs(ab) ** 2, 0.0, 1.0)
    return np.abs(pts - (a + tt * ab))


def twist_concatenation(p, letters, **kw):
    """Concatenate twist loops of p for letters [(j, sign), ...]."""
    loops = [twist_loop(p, j, sign, **kw) for j, sign in letters]
    out = concatenate(loops)
    out.meta.update({"kind": "twist_concatenation", "letters": list(letters)})
    return out


def concatenate(loops, tol=CHAIN_TOL):
    """Concatenation with interval rescaling; loop k must end where k+1 starts."""
    loops = list(loops)
    if not loops:
        raise ValueError("nothing to concatenate")
    n = loops[0].degree
    scale = max(1.0, max(lp.coefficient_scale() for lp in loops))
    for lp in loops:
        if lp.degree != n:
            raise ValueError("degree mismatch in concatenation")
    for a, b in zip(loops, loops[1:] + loops[:1]):
        ea = a.coeffs_at(2 * math.pi - 1e-15)
        sb = b.coeffs_at(0.0)
        if np.max(np.abs(ea - sb)) > 10 * tol * scale:
            raise ValueError("basepoint mismatch: consecutive loops do not chain")
    L = len(loops)
    segs = []
    for k, lp in enumerate(loops):
        off, width = 2 * math.pi * k / L, 1.0 / L
        for seg in lp.segments:
            segs.append(PolySegment(seg.coeffs, off + seg.t0 * width, off + seg.t1 * width))
    return PolyLoop(segs, meta={"kind": "concatenation", "parts": L})
