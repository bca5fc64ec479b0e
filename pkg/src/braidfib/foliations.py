"""Cacti of polynomials, embedded trees, and square (Rampichini) diagrams.

The argument map of a polynomial p in Xhat_n induces a singular foliation
of the plane: elliptic singularities at the roots, hyperbolic saddles at
the critical points.  The singular leaf through the saddle c_k is a cross
inside the level set {arg p = arg v_k}: two of its separatrices run into
roots, the other two run out to the boundary circle.  Tracing them gives

* the cactus: the transposition tau_k = (i j) of the boundary arcs A_i,
  A_j hit by the leaf of c_k, listed by increasing arg v_k, whose ordered
  product is always the full cycle (1 2 ... n);
* the embedded tree: roots joined when they share a singular leaf.

Arc convention (fixed once for all polynomials): the nth roots of unity
cut the boundary circle into n sectors; A_1 is the sector clockwise-
adjacent to angle 0, i.e. (2*pi(n-1)/n, 2*pi), and labels increase
clockwise.

A square diagram draws the curves (arg v_j(t), t) of a loop on the
[0,2*pi]^2 torus, decorated with crossings (over = larger |v|), vertical
tangencies (the critical points of arg g), transposition labels per arc,
and band letters signed by monotonicity.  It is called a Rampichini
diagram only when there are no tangencies.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .argmap import arg_critical_points
from .braidwords import BraidWord, Permutation, PlaneTree
from .polyloops import critical_data
from .rootfinding import aberth_roots
from .svgout import SvgCanvas, fmt

__all__ = [
    "Cactus",
    "SquareDiagram",
    "cactus_of",
    "embedded_tree_of",
    "square_diagram",
    "fiber_band_word",
    "FoliationError",
]


class FoliationError(RuntimeError):
    """Separatrix tracing failed (non-generic configuration or tracer fault)."""


def _horner(coeffs, u):
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = acc * u + a
    return acc


def _arc_of_angle(psi, n):
    """House labelling: sector m = [2*pi*m/n, 2*pi*(m+1)/n) maps to arc n - m."""
    m = int(math.floor((psi % (2 * math.pi)) / (2 * math.pi / n))) % n
    return ((n - m - 1) % n) + 1


@dataclass(frozen=True)
class Cactus:
    transpositions: tuple          # ((i, j), ...) by increasing arg v_k
    critical_points: tuple
    critical_values: tuple
    root_edges: tuple              # ((root_a, root_b), ...) 0-based root indices per leaf
    roots: tuple
    convention: str = "A_1 clockwise-adjacent to angle 0, labels clockwise"

    def product(self):
        n = len(self.roots)
        perm = Permutation.identity(n)
        for i, j in self.transpositions:
            perm = perm.then(Permutation.transposition(n, i, j))
        return perm

    def is_full_cycle(self):
        n = len(self.roots)
        return self.product().images == Permutation.cycle(n, *range(1, n + 1)).images


class _Tracer:
    """Predictor-corrector on Im(e^{-i alpha} p(u)) = 0 from a saddle outward."""

    def __init__(self, coeffs, roots, crits, alpha, r_far):
        self.p = [complex(c) for c in coeffs]
        self.dp = [m * c for m, c in enumerate(self.p)][1:]
        self.rot = cmath.exp(-1j * alpha)
        self.roots = list(roots)
        self.crits = list(crits)
        self.r_far = r_far
        pair = [abs(a - b) for i, a in enumerate(self.roots + self.crits)
                for b in (self.roots + self.crits)[i + 1:]]
        self.d_min = min(pair) if pair else 1.0

    def F(self, u):
        return self.rot * _horner(self.p, u)

    def dF(self, u):
        return self.rot * _horner(self.dp, u)

    def run(self, c_k, direction, to_root):
        """Trace one separatrix; returns ('root', index) or ('boundary', arc angle)."""
        h0 = 0.01 * self.d_min
        u = c_k + h0 * direction
        prev = direction
        snap = 0.25 * self.d_min
        for _ in range(6000):
            # terminate?
            if to_root:
                dists = [abs(u - r) for r in self.roots]
                i = min(range(len(dists)), key=dists.__getitem__)
                if dists[i] < snap:
                    return ("root", i)
            if abs(u) >= self.r_far:
                return ("boundary", cmath.phase(u) % (2 * math.pi))
            for cm in self.crits:
                if cm != c_k and abs(u - cm) < 0.02 * self.d_min:
                    raise FoliationError(
                        f"separatrix ran into another critical point near {cm:.4f}"
                    )
            dF = self.dF(u)
            if abs(dF) < 1e-14:
                raise FoliationError("vanishing gradient away from the saddle")
            tan = dF.conjugate() / abs(dF)
            if (tan.real * prev.real + tan.imag * prev.imag) < 0:
                tan = -tan
            h = min(0.15 * self._clearance(u, c_k), 0.08 * (1.0 + abs(u)))
            h = max(h, 1e-3 * self.d_min)
            u_new = u + h * tan
            # corrector: Newton along the gradient direction
            for _ in range(3):
                dFn = self.dF(u_new)
                if abs(dFn) < 1e-14:
                    raise FoliationError("corrector hit a critical point")
                phi = self.F(u_new).imag
                u_new = u_new - phi / abs(dFn) ** 2 * (1j * dFn.conjugate())
            prev = tan
            u = u_new
        raise FoliationError("separatrix tracing exceeded the step budget")

    def _clearance(self, u, c_k):
        d = self.r_far
        for z in self.roots:
            d = min(d, abs(u - z))
        for cm in self.crits:
            if cm != c_k:
                d = min(d, abs(u - cm))
        return max(d, 0.02 * self.d_min)


def _critical_frame(coeffs, arg_tol):
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    n = coeffs.size - 1
    roots = aberth_roots(coeffs)
    dp = coeffs[1:] * np.arange(1, n + 1)
    crits = aberth_roots(dp / dp[-1])
    vals = np.array([_horner(list(coeffs), complex(c)) for c in crits])
    if np.min(np.abs(vals)) < 1e-12:
        raise FoliationError("a critical value vanishes: p is not in Xhat")
    args = np.angle(vals) % (2 * np.pi)
    order = np.argsort(args)
    crits, vals, args = crits[order], vals[order], args[order]
    gaps = np.diff(np.concatenate([args, [args[0] + 2 * np.pi]])) if n > 2 else np.array([np.inf])
    if n > 2 and np.min(gaps) < arg_tol:
        raise FoliationError("critical value arguments are not distinct")
    if np.min(np.minimum(args, 2 * np.pi - args)) < arg_tol:
        raise FoliationError("a critical value argument sits on the arc seam (arg 0)")
    return coeffs, roots, crits, vals, args


def cactus_of(coeffs, boundary_radius=None, arg_tol=1e-6):
    """The cactus of a polynomial with distinct critical-value arguments.

    For each critical point the four separatrix directions come from the
    second-order local model of p: with b = e^{-i arg v_k} p''(c_k)/2 the
    boundary-bound branches leave along +-e^{-i arg(b)/2} (where the
    rotated polynomial grows real-positive) and the root-bound branches
    along +-i e^{-i arg(b)/2}.  Boundary endpoints are classified by the
    sector of the asymptotic angle (α + 2*pi*m)/n they occupy.
    """
    coeffs, roots, crits, vals, args = _critical_frame(coeffs, arg_tol)
    n = coeffs.size - 1
    maxmod = max(1.0, float(np.max(np.abs(roots))), float(np.max(np.abs(crits))))
    alpha_edge = float(np.min(np.minimum(args, 2 * np.pi - args)))
    if boundary_radius is None:
        boundary_radius = maxmod / math.sin(min(0.5, 0.45 * alpha_edge / n))
    boundary_radius = max(boundary_radius, 4.0 * maxmod)

    ddp = [m * (m - 1) * c for m, c in enumerate(coeffs)][2:]
    taus, edges = [], []
    for k in range(n - 1):
        alpha = float(args[k])
        c_k = complex(crits[k])
        tracer = _Tracer(coeffs, roots, crits, alpha, boundary_radius)
        b = cmath.exp(-1j * alpha) * _horner([complex(x) for x in ddp], c_k) / 2.0
        if abs(b) < 1e-14:
            raise FoliationError("degenerate (non-Morse) critical point")
        d_bdry = cmath.exp(-0.5j * cmath.phase(b))
        arcs, hit_roots = [], []
        for direction, to_root in (
            (d_bdry, False), (-d_bdry, False), (1j * d_bdry, True), (-1j * d_bdry, True),
        ):
            kind, payload = tracer.run(c_k, direction, to_root)
            if to_root and kind != "root":
                raise FoliationError("root-bound separatrix escaped to the boundary")
            if not to_root and kind != "boundary":
                raise FoliationError("boundary-bound separatrix fell into a root")
            if kind == "boundary":
                arcs.append(_arc_of_angle(payload, n))
            else:
                hit_roots.append(payload)
        if arcs[0] == arcs[1]:
            raise FoliationError(
                f"both boundary separatrices reached arc {arcs[0]}: endpoint "
                f"classification ambiguous (trace dump: c_k={c_k}, arcs={arcs})"
            )
        if hit_roots[0] == hit_roots[1]:
            raise FoliationError("both root separatrices reached the same root")
        taus.append((min(arcs), max(arcs)))
        edges.append((min(hit_roots), max(hit_roots)))
    return Cactus(tuple(taus), tuple(complex(c) for c in crits),
                  tuple(complex(v) for v in vals), tuple(edges),
                  tuple(complex(r) for r in roots))


def embedded_tree_of(coeffs, boundary_radius=None):
    """The plane tree of p: roots joined iff they share a singular leaf."""
    cac = cactus_of(coeffs, boundary_radius)
    try:
        return PlaneTree(cac.roots, tuple((a + 1, b + 1, 1) for a, b in cac.root_edges))
    except ValueError as exc:
        raise FoliationError(f"leaf graph is not a tree: {exc}") from exc


# -- square diagrams -----------------------------------------------------------


@dataclass(frozen=True)
class DiagramArc:
    strand: int          # saddle strand column
    t0: float
    t1: float
    transposition: tuple  # (i, j)
    band_sign: int        # +1 for strictly increasing arg, -1 for decreasing
    samples: tuple        # ((t, arg), ...) polyline through the arc


@dataclass(frozen=True)
class SquareDiagram:
    n: int
    curves: tuple        # per strand: ((t, arg mod 2pi), ...) dense polyline
    crossings: tuple     # (t, arg, under_strand, over_strand)
    tangencies: tuple    # ArgCriticalPoint list
    arcs: tuple          # DiagramArc list
    rampichini: bool
    meta: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "n": self.n,
            "rampichini": self.rampichini,
            "curves": [[[fmt(t), fmt(a)] for t, a in cur] for cur in self.curves],
            "crossings": [
                {"t": fmt(t), "arg": fmt(a), "under": u, "over": o}
                for t, a, u, o in self.crossings
            ],
            "tangencies": [
                {"t": fmt(p.t), "arg": fmt(p.critical_arg), "strand": p.strand,
                 "kind": p.kind}
                for p in self.tangencies
            ],
            "arcs": [
                {"strand": a.strand, "t0": fmt(a.t0), "t1": fmt(a.t1),
                 "transposition": list(a.transposition), "band_sign": a.band_sign}
                for a in self.arcs
            ],
            "meta": self.meta,
        }

    def save_json(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1, sort_keys=True)

    def to_svg(self, size=800):
        return _diagram_svg(self, size)


def _wrap_pi(x):
    return (x + np.pi) % (2 * np.pi) - np.pi


def square_diagram(loop, N=1024, label_checks=True):
    """Square diagram of a loop: critical-value argument curves on the torus.

    Curves come from the tracked critical values; crossings are refined by
    bisection and decorated over/under by absolute value (smaller |v|
    underneath); labels are computed by cactus_of at one sample per arc and
    verified at two more samples ("propagation" consistency).  Vertical
    tangencies are imported from the argument-critical analysis; output is
    marked ``rampichini`` only when there are none.
    """
    cd = critical_data(loop, N=N)
    n = loop.degree
    k = cd.n_saddles
    ts = cd.ts
    argv = np.angle(cd.v) % (2 * np.pi)
    tangencies = tuple(arg_critical_points(cd))

    curves = tuple(
        tuple((float(t), float(a)) for t, a in zip(ts, argv[:, j])) for j in range(k)
    )

    # crossings: arg v_i = arg v_j (mod 2pi), refined by bisection
    crossings = []
    for a in range(k):
        for b in range(a + 1, k):
            d = _wrap_pi(np.angle(cd.v[:, a]) - np.angle(cd.v[:, b]))
            for i in range(len(ts) - 1):
                if d[i] == 0.0:
                    d_i = 1e-15
                else:
                    d_i = d[i]
                if d_i * d[i + 1] < 0 and abs(d[i] - d[i + 1]) < np.pi:
                    t_star = _bisect_cross(cd, a, b, ts[i], ts[i + 1]) % (2 * math.pi)
                    _, v, _ = cd.at(t_star)
                    under, over = (a, b) if abs(v[a]) < abs(v[b]) else (b, a)
                    crossings.append(
                        (float(t_star), float(np.angle(v[a]) % (2 * np.pi)), under, over)
                    )
    crossings = _dedupe_events(sorted(crossings), key=lambda c: c[0],
                               same=lambda x, y: {x[2], x[3]} == {y[2], y[3]})

    # right-edge events: arg v_j crosses 0 (mod 2pi)
    edge_events = {j: [] for j in range(k)}
    for j in range(k):
        aj = argv[:, j]
        for i in range(len(ts) - 1):
            if abs(aj[i + 1] - aj[i]) > np.pi:  # wrapped across 0/2pi
                edge_events[j].append(_bisect_edge(cd, j, ts[i], ts[i + 1]))

    # arcs per strand, labelled by the cactus at interior samples
    arcs = []
    for j in range(k):
        cuts = sorted([t for t, _, u, o in crossings if j in (u, o)] + edge_events[j])
        cuts = _dedupe_events([(c,) for c in cuts], key=lambda c: c[0],
                              same=lambda x, y: True)
        spans = _spans_from_cuts([c[0] for c in cuts])
        for t0, t1 in spans:
            fracs = (0.5, 0.27, 0.73) if label_checks else (0.5,)
            labels = [_label_at(loop, cd, j, t0 + f * (t1 - t0)) for f in fracs]
            if any(lb != labels[0] for lb in labels[1:]):
                raise FoliationError(
                    f"label propagation inconsistency on strand {j} in [{t0:.4f}, {t1:.4f}]: {labels}"
                )
            sgn = 1 if cd.at(0.5 * (t0 + t1))[2][j] > 0 else -1
            mids = [(float(t), float(a)) for t, a in zip(ts, argv[:, j]) if t0 <= t <= t1]
            arcs.append(DiagramArc(j, float(t0), float(t1), labels[0], sgn, tuple(mids)))

    ramp = len([p for p in tangencies if p.kind == "sign-change"]) == 0
    return SquareDiagram(
        n, curves, tuple(crossings), tangencies, tuple(arcs), ramp,
        meta={"N": N, "kind": "rampichini" if ramp else "square",
              "tangency_count": len(tangencies)},
    )


def _spans_from_cuts(cuts):
    if not cuts:
        return [(0.0, 2 * math.pi)]
    cuts = sorted(c % (2 * math.pi) for c in cuts)
    spans = list(zip(cuts, cuts[1:]))
    # wrap-around arc covers [cuts[-1], 2pi] + [0, cuts[0]]
    spans.append((cuts[-1], cuts[0] + 2 * math.pi))
    return spans


def _dedupe_events(events, key, same, tol=1e-7):
    """Merge events at cyclically equal times (seam crossings appear twice)."""
    out = []
    for ev in events:
        t = key(ev) % (2 * math.pi)
        dup = False
        for other in out:
            dt = abs(t - key(other) % (2 * math.pi))
            if min(dt, 2 * math.pi - dt) < tol and same(ev, other):
                dup = True
                break
        if not dup:
            out.append(ev)
    return out


def _bisect_cross(cd, a, b, t0, t1, tol=1e-11):
    f0 = _wrap_pi(np.angle(cd.at(t0)[1][a]) - np.angle(cd.at(t0)[1][b]))
    s0 = 1 if f0 >= 0 else -1
    lo, hi = t0, t1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        v = cd.at(mid)[1]
        fm = _wrap_pi(np.angle(v[a]) - np.angle(v[b]))
        if (1 if fm >= 0 else -1) == s0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bisect_edge(cd, j, t0, t1, tol=1e-11):
    f0 = _wrap_pi(np.angle(cd.at(t0)[1][j]))
    s0 = 1 if f0 >= 0 else -1
    lo, hi = t0, t1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = _wrap_pi(np.angle(cd.at(mid)[1][j]))
        if (1 if fm >= 0 else -1) == s0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _label_at(loop, cd, j, t, spread=2e-3):
    """Transposition label of strand j at time t, via the cactus of g_t.

    Retries at slightly shifted times when t happens to sit too close to a
    crossing or seam for the cactus to be defined.
    """
    last = None
    for dt in (0.0, spread, -spread, 2 * spread, -2 * spread):
        try:
            cac = cactus_of(loop.coeffs_at(t + dt))
        except FoliationError as exc:
            last = exc
            continue
        c_here, _, _ = cd.at(t + dt)
        d = [abs(complex(cp) - complex(c_here[j])) for cp in cac.critical_points]
        k = min(range(len(d)), key=d.__getitem__)
        return cac.transpositions[k]
    raise FoliationError(f"no cactus near t={t:.6f}: {last}")


def fiber_band_word(diagram: SquareDiagram, loop, phi, N=None, tol=1e-4):
    """Band word of the fiber over a regular argument phi.

    Intersections of the vertical line arg = phi with the diagram's curves,
    read bottom to top, spell a BKL word a_{i,j}^{+-1} with the sign of the
    curve's monotonicity; attached is the Euler characteristic n - length
    of the disk-band fiber surface it describes.
    """
    phi = phi % (2 * math.pi)
    bad = [t for t, a, _, _ in diagram.crossings if _angdist(a, phi) < tol]
    bad += [p.critical_arg for p in diagram.tangencies if _angdist(p.critical_arg, phi) < tol]
    if bad:
        raise ValueError(f"phi={phi:.6f} is within {tol} of a critical argument: "
                         "choose regular value")
    cd = critical_data(loop, N=N or diagram.meta.get("N", 1024))
    hits = []
    for j in range(cd.n_saddles):
        rel = _wrap_pi(np.angle(cd.v[:, j]) - phi)
        for i in range(len(cd.ts) - 1):
            if rel[i] == 0.0:
                rel[i] = 1e-15
            if rel[i] * rel[i + 1] < 0 and abs(rel[i] - rel[i + 1]) < np.pi:
                t_star = _bisect_phi(cd, j, phi, cd.ts[i], cd.ts[i + 1])
                sgn = 1 if cd.at(t_star)[2][j] > 0 else -1
                label = _arc_label_at(diagram, j, t_star)
                hits.append((float(t_star), label, sgn))
    hits.sort()
    letters = tuple((lab, sgn) for _, lab, sgn in hits)
    word = BraidWord(diagram.n, letters, scheme="band")
    return word, diagram.n - len(letters)


def _angdist(a, b):
    return abs(_wrap_pi(np.array(a - b)))


def _bisect_phi(cd, j, phi, t0, t1, tol=1e-11):
    f0 = _wrap_pi(np.angle(cd.at(t0)[1][j]) - phi)
    s0 = 1 if f0 >= 0 else -1
    lo, hi = t0, t1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = _wrap_pi(np.angle(cd.at(mid)[1][j]) - phi)
        if (1 if fm >= 0 else -1) == s0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _arc_label_at(diagram, strand, t):
    t = t % (2 * math.pi)
    for arc in diagram.arcs:
        if arc.strand != strand:
            continue
        if arc.t0 <= t < arc.t1 or arc.t0 <= t + 2 * math.pi < arc.t1:
            return arc.transposition
    raise ValueError(f"no labelled arc on strand {strand} at t={t:.6f}")


# -- SVG -----------------------------------------------------------------------


def _diagram_svg(diagram: SquareDiagram, size=800):
    pad = 60
    canvas = SvgCanvas(size + 2 * pad, size + 2 * pad)
    scale = size / (2 * math.pi)

    def xy(arg, t):
        return pad + arg * scale, pad + size - t * scale

    canvas.rect(pad, pad, size, size, stroke="#000000", width=2.0)
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]

    def draw_curve(j, color):
        run, prev = [], None
        for t, a in diagram.curves[j]:
            if prev is not None and abs(a - prev) > math.pi:
                if run:
                    canvas.polyline([xy(a2, t2) for t2, a2 in run], stroke=color)
                run = []
            run.append((t, a))
            prev = a
        if run:
            canvas.polyline([xy(a2, t2) for t2, a2 in run], stroke=color)

    for j in range(len(diagram.curves)):
        draw_curve(j, palette[j % len(palette)])
    # knot-diagram crossings: break both strands, then redraw the strand whose
    # critical value has the larger absolute value (the overcrossing arc)
    for t, a, under, over in diagram.crossings:
        x, y = xy(a, t)
        canvas.circle(x, y, 6.0, fill="#ffffff")
        window = [(t2, a2) for t2, a2 in diagram.curves[over]
                  if abs(t2 - t) < 0.05 and abs(_wrap_pi(np.array(a2 - a))) < 0.3]
        if len(window) >= 2:
            canvas.polyline([xy(a2, t2) for t2, a2 in window],
                            stroke=palette[over % len(palette)])
    for p in diagram.tangencies:
        x, y = xy(p.critical_arg, p.t)
        canvas.circle(x, y, 5.0, fill="#000000")
    for arc in diagram.arcs:
        tm = 0.5 * (arc.t0 + arc.t1)
        if not arc.samples:
            continue
        t_lab, a_lab = min(arc.samples, key=lambda sa: abs(sa[0] - tm))
        x, y = xy(a_lab, t_lab)
        i, j = arc.transposition
        canvas.text(x + 8, y - 6, f"({i} {j})", size=12, fill="#444444", anchor="start")
    title = "Rampichini diagram" if diagram.rampichini else "square diagram"
    canvas.text(pad + size / 2, pad - 20, title, size=16)
    canvas.text(pad + size / 2, pad + size + 40, "arg v (phi)", size=13)
    canvas.text(pad - 40, pad + size / 2, "t", size=13)
    return canvas
