"""Trigonometric strand systems: building geometric braids and reading words back.

A StrandSystem is n TrigCurve strands z_j(t) on [0, 2*pi] that are pairwise
disjoint and close up as a set, z_j(2*pi) = z_{c(j)}(0) for the closure
permutation c.  Strands of a q-cycle orbit are 2*pi*q periodic, which the
TrigCurve subperiod machinery represents exactly.

``recover_word`` reads an Artin word off any strand source by watching the
real-part order of the strands; ``parametrize`` builds a strand system for
a given word from eased piecewise paths projected onto finitely many
harmonics, with a round-trip check.

Crossing sign convention (the single source of truth, calibrated against
the 5_2 parametrization whose word has exponent sum +4): at a crossing of
the strands in real-part positions i, i+1, the letter is s_i^+ when the
strand arriving from position i passes with strictly smaller imaginary
part.  ``parametrize`` uses the same constant, so round trips are
convention-free.
"""

from __future__ import annotations

import json

import numpy as np

from .braidwords import BraidWord, Permutation
from .trigcurves import TrigCurve

__all__ = [
    "StrandSystem",
    "builtin_52",
    "recover_word",
    "parametrize",
    "CollisionError",
    "TangencyError",
]

# +1: "arriving from position i with smaller imaginary part" reads as s_i^+.
CROSSING_SIGN = +1

COLLISION_TOL = 1e-6      # strand units
VALIDATION_GRID = 4096
REFINE_FACTOR = 16


class CollisionError(ValueError):
    """Two strands meet (or nearly meet): not a braid."""


class TangencyError(ValueError):
    """A real-part tie persists at refinement tolerance: non-generic projection."""


class StrandSystem:
    """n disjoint TrigCurve strands with their closure permutation."""

    def __init__(self, curves, closure=None, validate=True, collision_tol=COLLISION_TOL):
        self.curves = tuple(curves)
        self.n = len(self.curves)
        if self.n < 1:
            raise ValueError("need at least one strand")
        if closure is None:
            closure = self._detect_closure()
        self.closure = closure
        self.collision_tol = collision_tol
        if validate:
            self.validate()

    # strand start/end matching: z_j(2pi) = z_{closure(j)}(0)
    def _detect_closure(self):
        starts = np.array([c(0.0) for c in self.curves])
        ends = np.array([c(2 * np.pi) for c in self.curves])
        images = []
        for e in ends:
            d = np.abs(starts - e)
            images.append(int(np.argmin(d)) + 1)
        return Permutation(tuple(images))

    def validate(self):
        starts = np.array([c(0.0) for c in self.curves])
        ends = np.array([c(2 * np.pi) for c in self.curves])
        scale = max(1.0, float(np.max(np.abs(starts))))
        for j in range(self.n):
            target = starts[self.closure(j + 1) - 1]
            if abs(ends[j] - target) > 1e-8 * scale:
                raise ValueError(
                    f"strand {j + 1} does not close up: end {ends[j]:.6g} vs start {target:.6g}"
                )
        if self.n > 1:
            sep, tmin = self.min_separation()
            if sep <= self.collision_tol:
                raise CollisionError(
                    f"strands approach within {sep:.3e} (tol {self.collision_tol:g}) near t={tmin:.6f}"
                )

    def sample(self, ts):
        """Array of shape (len(ts), n): strand values, columns strand-aligned."""
        ts = np.asarray(ts, dtype=np.float64)
        return np.stack([c.evaluate(ts) for c in self.curves], axis=-1)

    def points_at(self, t):
        return np.array([c(float(t)) for c in self.curves])

    def min_separation(self, grid=VALIDATION_GRID, refine=REFINE_FACTOR):
        """Minimum pairwise strand distance, with local refinement near minima."""
        ts = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
        pts = self.sample(ts)
        dmin, tmin = np.inf, 0.0
        for a in range(self.n):
            for b in range(a + 1, self.n):
                d = np.abs(pts[:, a] - pts[:, b])
                i = int(np.argmin(d))
                # repeat the x16 local zoom until the step certifies the tolerance
                t_best, step, d_best = float(ts[i]), 2 * np.pi / grid, float(d[i])
                while step > self.collision_tol / 10:
                    fine = np.linspace(t_best - 2 * step, t_best + 2 * step, refine * 4)
                    df = np.abs(self.curves[a].evaluate(fine) - self.curves[b].evaluate(fine))
                    k = int(np.argmin(df))
                    t_best, d_best = float(fine[k]), float(df[k])
                    step = float(fine[1] - fine[0])
                if d_best < dmin:
                    dmin, tmin = d_best, t_best % (2 * np.pi)
        return dmin, tmin

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return {
            "n": self.n,
            "closure": list(self.closure.images),
            "strands": [
                {"q": c.q, "terms": [[int(k), co.real, co.imag] for k, co in c.terms()]}
                for c in self.curves
            ],
        }

    @staticmethod
    def from_samples(points, closure=None, max_degree=None, collision_tol=COLLISION_TOL):
        """Strand system fitted to uniform samples on [0, 2*pi).

        ``points`` has shape (N, n), column j sampling strand j at
        t_i = 2*pi*i/N.  Strands are chained into closure orbits (strand j
        continues as strand closure(j)) and each orbit is Fourier-fitted as
        one closed curve, so fractional-period strands come out exact.  The
        closure permutation is detected from the samples when not given.
        """
        points = np.asarray(points, dtype=np.complex128)
        N, n = points.shape
        if closure is None:
            from .braidwords import Permutation

            ends = points[-1] + (points[-1] - points[-2])  # one-step extrapolation
            images = []
            for j in range(n):
                images.append(int(np.argmin(np.abs(points[0] - ends[j]))) + 1)
            if sorted(images) != list(range(1, n + 1)):
                raise ValueError("cannot detect the closure permutation from samples")
            closure = Permutation(tuple(images))
        curves = [None] * n
        for cyc in closure.cycles():
            q = len(cyc)
            orbit = np.concatenate([points[:, s - 1] for s in cyc])
            D = max_degree if max_degree is not None else (N * q) // 3
            fit = TrigCurve.from_samples(orbit, q=q, max_degree=D)
            for m, strand in enumerate(cyc):
                curves[strand - 1] = fit.shifted(2 * np.pi * m) if m else fit
        return StrandSystem(curves, closure, collision_tol=collision_tol)

    @staticmethod
    def from_json(data):
        curves = []
        for rec in data["strands"]:
            degs = [t[0] for t in rec["terms"]]
            coefs = [complex(t[1], t[2]) for t in rec["terms"]]
            curves.append(TrigCurve(degs, coefs, q=rec.get("q", 1)))
        closure = Permutation(tuple(data["closure"])) if "closure" in data else None
        return StrandSystem(curves, closure)

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1, sort_keys=True)

    @staticmethod
    def load(path):
        with open(path) as f:
            return StrandSystem.from_json(json.load(f))

    def sample_csv(self, path, samples=512):
        ts = np.linspace(0.0, 2 * np.pi, samples)
        pts = self.sample(ts)
        with open(path, "w") as f:
            head = ["t"]
            for j in range(1, self.n + 1):
                head += [f"re_{j}", f"im_{j}"]
            f.write(",".join(head) + "\n")
            for i, t in enumerate(ts):
                row = [f"{t:.17g}"]
                for j in range(self.n):
                    row += [f"{pts[i, j].real:.17g}", f"{pts[i, j].imag:.17g}"]
                f.write(",".join(row) + "\n")


def builtin_52():
    """The trigonometric 3-strand parametrization whose closure is the 5_2 knot.

    z_j(t) = -cos(2 th) - (3/4) cos(5 th) - i (sin(4 th) + (1/2) sin(th)),
    th = (t + 2*pi*j)/3, j = 1, 2, 3, entered in closed form.
    """
    degs = [-5, -4, -2, -1, 1, 2, 4, 5]
    coefs = [-3 / 8, 1 / 2, -1 / 2, 1 / 4, -1 / 4, -1 / 2, -1 / 2, -3 / 8]
    base = TrigCurve(degs, coefs, q=3)
    curves = [base.shifted(2 * np.pi * j) for j in (1, 2, 3)]
    return StrandSystem(curves, Permutation((2, 3, 1)))


# -- word recovery ------------------------------------------------------------


def _order_by_re(points, tol=1e-12):
    order = sorted(range(len(points)), key=lambda j: points[j].real)
    gaps = [points[order[k + 1]].real - points[order[k]].real for k in range(len(order) - 1)]
    return order, (min(gaps) if gaps else np.inf)


def recover_word(source, grid_size=2048, collision_tol=COLLISION_TOL,
                 refine_tol=1e-12):
    """Read the Artin word of a strand source from real-part order changes.

    ``source`` needs ``.n`` and ``points_at(t)`` returning the n strand
    values in a fixed strand order; StrandSystem and SampledBraid both
    qualify.  Crossings are located by bisection and signed by the house
    convention (module docstring).  Raises TangencyError for persistent
    real-part ties and CollisionError for actual strand collisions.
    """
    n = source.n
    if n == 1:
        return BraidWord(1, ())
    ts = np.linspace(0.0, 2 * np.pi, grid_size + 1)
    if hasattr(source, "sample"):
        grid_pts = source.sample(ts)
    else:
        grid_pts = np.stack([source.points_at(t) for t in ts], axis=0)

    def pts_at(t):
        return source.points_at(t)

    orders = []
    for i, t in enumerate(ts):
        order, gap = _order_by_re(grid_pts[i])
        if gap < 1e-12:
            order, gap = _order_by_re(pts_at(t + 1e-9))
            if gap < 1e-12:
                raise TangencyError(f"real-part tie at t={t:.6f}")
        orders.append(order)

    letters = []  # (t_star, position index, sign)

    def bisect_crossing(t0, t1, a, b):
        # Re z_a - Re z_b changes sign on [t0, t1]; a is the lower strand at t0
        f0 = pts_at(t0)
        lo, hi = t0, t1
        flo = f0[a].real - f0[b].real
        if flo > 0:
            raise TangencyError(f"lost crossing bracket near t={t0:.6f}")
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            pm = pts_at(mid)
            fm = pm[a].real - pm[b].real
            if fm <= 0:
                lo = mid
            else:
                hi = mid
        t_star = 0.5 * (lo + hi)
        p = pts_at(t_star)
        ya, yb = p[a].imag, p[b].imag
        if abs(ya - yb) < collision_tol and abs(p[a].real - p[b].real) < collision_tol:
            raise CollisionError(f"strand collision at t={t_star:.6f}: not a braid")
        sign = CROSSING_SIGN if ya < yb else -CROSSING_SIGN
        return t_star, sign

    def resolve(t0, t1, o0, o1, depth):
        if o0 == o1:
            return
        # try to decompose the order change into disjoint adjacent swaps
        k, swaps, ok = 0, [], True
        while k < n - 1:
            if o1[k] == o0[k]:
                k += 1
            elif o1[k] == o0[k + 1] and o1[k + 1] == o0[k]:
                swaps.append(k)
                k += 2
            else:
                ok = False
                break
        if ok and (k >= n - 1 or o1[n - 1] == o0[n - 1]):
            for k in swaps:
                a, b = o0[k], o0[k + 1]
                t_star, sign = bisect_crossing(t0, t1, a, b)
                letters.append((t_star, k + 1, sign))
            return
        if depth > 48:
            raise TangencyError(
                f"cannot resolve strand order change on [{t0:.6f}, {t1:.6f}]"
            )
        tm = 0.5 * (t0 + t1)
        pm = pts_at(tm)
        om, gap = _order_by_re(pm)
        if gap < 1e-12:
            tm += (t1 - t0) * 1e-3
            pm = pts_at(tm)
            om, _ = _order_by_re(pm)
        resolve(t0, tm, o0, om, depth + 1)
        resolve(tm, t1, om, o1, depth + 1)

    for i in range(grid_size):
        resolve(ts[i], ts[i + 1], orders[i], orders[i + 1], 0)

    letters.sort(key=lambda rec: rec[0])
    return BraidWord(n, tuple((pos, sign) for _, pos, sign in letters))


# -- parametrization -----------------------------------------------------------


def _eased(x):
    """C^1 ramp [0,1] -> [0,1] with zero slope at both ends."""
    return 0.5 * (1.0 - np.cos(np.pi * np.clip(x, 0.0, 1.0)))


def _pl_strand_paths(word):
    """Eased piecewise strand paths realizing ``word``, one crossing per slot.

    Returns a callable paths(j, t) evaluating strand j (1-based start
    position) on [0, 2*pi], and the closure permutation.
    """
    n, letters = word.n, word.letters
    ell = len(letters)
    cur = list(range(1, n + 1))  # cur[p-1] = strand currently in position p
    for idx, _ in letters:
        cur[idx - 1], cur[idx] = cur[idx], cur[idx - 1]
    end_pos = [0] * (n + 1)
    for p, s in enumerate(cur, start=1):
        end_pos[s] = p
    closure = Permutation(tuple(end_pos[1:]))

    def strand_position(k, strand):
        # position of ``strand`` at the start of slot k
        pos = strand
        for idx, _ in word.letters[:k]:
            if pos == idx:
                pos = idx + 1
            elif pos == idx + 1:
                pos = idx
        return pos

    def position_path(strand, t):
        x = t / (2 * np.pi) * ell
        k = min(int(x), ell - 1)
        tau = x - k
        pos = strand_position(k, strand)
        idx, sign = letters[k]
        if pos not in (idx, idx + 1):
            return complex(pos, 0.0)
        # dip direction chosen so the emitted letter matches the recover convention:
        # d=-1 sends the lower strand under (smaller imaginary part)
        d = -sign * CROSSING_SIGN
        m, r = idx + 0.5, 0.5
        e = _eased(tau)
        if pos == idx:
            return m + r * np.exp(1j * (np.pi - d * np.pi * e))
        return m + r * np.exp(-1j * d * np.pi * e)

    return position_path, closure


def parametrize(word, harmonics=None, max_retries=4):
    """Trigonometric strand system realizing an Artin word.

    Piecewise eased strand paths (one crossing per time slot, crossing
    strands swap along a semicircle whose side sets the sign) are projected
    onto ``harmonics`` Fourier modes per 2*pi.  The round trip
    recover_word(parametrize(w)) is required to reproduce the permutation
    and exponent sum of w; otherwise the harmonic count is doubled, up to
    ``max_retries`` doublings.
    """
    if word.scheme != "artin":
        raise ValueError("parametrize expects an Artin word")
    n, ell = word.n, len(word)
    if ell == 0:
        curves = [TrigCurve.constant(complex(j, 0.0)) for j in range(1, n + 1)]
        return StrandSystem(curves, Permutation.identity(n))
    D = harmonics if harmonics is not None else max(12, 4 * ell)
    path, closure = _pl_strand_paths(word)
    target_perm = permutation_images(word)
    target_exp = word.exponent_sum()

    last_err = None
    for _ in range(max_retries + 1):
        curves = _fit_orbits(path, closure, n, D)
        try:
            sys = StrandSystem(curves, closure)
            got = recover_word(sys, grid_size=max(512, 64 * ell))
            if (permutation_images(got) == target_perm
                    and got.exponent_sum() == target_exp):
                return sys
            last_err = ValueError(
                f"round trip mismatch at D={D}: perm {permutation_images(got)} "
                f"exp {got.exponent_sum()} (want {target_perm}, {target_exp})"
            )
        except (CollisionError, TangencyError) as exc:
            last_err = exc
        D *= 2
    raise ValueError(f"insufficient harmonics for {word}: {last_err}")


def permutation_images(word):
    from .braidwords import permutation_of

    return permutation_of(word).images


def _fit_orbits(path, closure, n, D):
    """Fourier-fit the closure orbits of the piecewise paths; returns strand curves."""
    curves = [None] * n
    for cyc in closure.cycles():
        q = len(cyc)
        M = max(256, 8 * D) * q
        ts = np.linspace(0.0, 2 * np.pi * q, M, endpoint=False)
        vals = np.empty(M, dtype=np.complex128)
        for i, t in enumerate(ts):
            m, tt = divmod(t, 2 * np.pi)
            strand = cyc[int(m) % q]
            vals[i] = path(strand, tt)
        orbit = TrigCurve.from_samples(vals, q=q, max_degree=D * q)
        for m, strand in enumerate(cyc):
            curves[strand - 1] = orbit.shifted(2 * np.pi * m) if m else orbit
    return curves
