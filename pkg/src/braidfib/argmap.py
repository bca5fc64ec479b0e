"""Critical points of arg(g) for a loop of polynomials: pseudo-fibration analysis.

Every critical point of arg(g) on the braid complement lies on the saddle
point braid, at a time t* where the critical value v_j(t) reverses the
direction of its winding around 0, i.e. where d/dt arg v_j(t) = 0.  The
loop is a fibration map (the braid is P-fibered) iff no critical value
ever reverses.

Counting is done on the strand-aligned CriticalData samples: consecutive
sign changes of d/dt arg v_j over [0, 2*pi] (the closure sample continues
each strand, so orbits that need several turns are chained correctly),
refined by bisection against the continuous loop.  Near-zero plateaus are
flagged as degenerate rather than counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polyloops import CriticalData, critical_data, track

__all__ = [
    "ArgCriticalPoint",
    "arg_critical_points",
    "is_p_fibered",
    "PFiberedCertificate",
    "morse_count_report",
    "DegenerateError",
]

DEFAULT_GRID = 2048
REFINE_TOL = 1e-10
PLATEAU_TOL = 1e-8


class DegenerateError(RuntimeError):
    """A plateau of d/dt arg v was found in strict Morse mode."""


@dataclass(frozen=True)
class ArgCriticalPoint:
    t: float                  # time of the critical point, in [0, 2*pi)
    strand: int               # saddle strand index (0-based column)
    location: complex         # c_j(t*), the critical point in the u-plane
    critical_arg: float       # arg v_j(t*) in [0, 2*pi)
    kind: str = "sign-change"  # "sign-change" (Morse) or "degenerate"


def _signs(x):
    # tie rule: zero counts as positive
    return np.where(x >= 0.0, 1, -1)


def arg_critical_points(cd: CriticalData, refine_tol=REFINE_TOL,
                        plateau_tol=PLATEAU_TOL, strict=False):
    """Zeros of d/dt arg v_j located by sign-change bracketing plus bisection.

    Plateaus (|d/dt arg v| below ``plateau_tol`` across three or more
    consecutive samples) are flagged as degenerate points rather than
    counted; ``strict`` turns them into DegenerateError ("not Morse").
    """
    out = []
    D = cd.dargv
    sc = _signs(D)
    N = len(cd.ts) - 1
    for j in range(cd.n_saddles):
        col = D[:, j]
        flat = np.abs(col) < plateau_tol
        run = 0
        for i in range(N + 1):
            run = run + 1 if flat[i] else 0
            if run == 3:
                if strict:
                    raise DegenerateError(
                        f"plateau of d/dt arg v on strand {j} near t={cd.ts[i]:.6f}: not Morse"
                    )
                out.append(ArgCriticalPoint(
                    float(cd.ts[i - 2]), j, complex(cd.c[i - 2, j]),
                    float(np.angle(cd.v[i - 2, j]) % (2 * np.pi)), kind="degenerate"))
        for i in range(N):
            if sc[i, j] == sc[i + 1, j]:
                continue
            if flat[i] and flat[i + 1]:
                continue  # inside a flagged plateau
            t_star = _bisect_zero(cd, j, cd.ts[i], cd.ts[i + 1], refine_tol)
            c, v, _ = cd.at(t_star)
            out.append(ArgCriticalPoint(
                float(t_star % (2 * np.pi)), j, complex(c[j]),
                float(np.angle(v[j]) % (2 * np.pi))))
    out.sort(key=lambda a: (a.t, a.strand))
    return out


def _bisect_zero(cd, j, t0, t1, refine_tol):
    f0 = cd.at(t0)[2][j]
    lo, hi = t0, t1
    slo = 1 if f0 >= 0 else -1
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        fm = cd.at(mid)[2][j]
        if (1 if fm >= 0 else -1) == slo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class PFiberedCertificate:
    p_fibered: bool
    margin: float                    # min over the grid of |d/dt arg v|
    margin_location: tuple           # (strand, t) attaining the minimum
    first_reversal: ArgCriticalPoint | None = None
    degenerate: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def __bool__(self):
        return self.p_fibered


def is_p_fibered(loop, N=DEFAULT_GRID, margin_threshold=PLATEAU_TOL,
                 collision_tol=None, cd=None):
    """Decide P-fiberedness of the loop's root braid, with a certificate.

    True iff the argument velocity of every critical value keeps a fixed
    sign with margin above ``margin_threshold``.  The roots must form a
    braid (tracked; collisions raise) and no critical value may reach 0.
    A precomputed CriticalData for the same loop can be passed as ``cd``.
    """
    track(loop, "roots", N=max(64, N // 8), collision_tol=collision_tol)
    if cd is None:
        cd = critical_data(loop, N=N, collision_tol=collision_tol)
    if any("leaves Xhat" in f for f in cd.flags):
        raise ValueError("critical value reaches 0: loop leaves Xhat; " + "; ".join(cd.flags))
    pts = arg_critical_points(cd)
    degen = [p for p in pts if p.kind == "degenerate"]
    reversals = [p for p in pts if p.kind == "sign-change"]
    i_flat = np.argmin(np.abs(cd.dargv))
    row, col = np.unravel_index(i_flat, cd.dargv.shape)
    margin = float(np.abs(cd.dargv[row, col]))
    cert = PFiberedCertificate(
        p_fibered=not reversals and not degen and margin > margin_threshold,
        margin=margin,
        margin_location=(int(col), float(cd.ts[row])),
        first_reversal=reversals[0] if reversals else None,
        degenerate=degen,
        flags=list(cd.flags),
    )
    return cert.p_fibered, cert


def morse_count_report(loop, word=None, beta_value=None, N=DEFAULT_GRID,
                       collision_tol=None):
    """Bundle the critical-point count with a beta comparison for a stated word.

    Purely reporting: ``word``/``beta_value`` are caller-supplied claims
    about which braid word the loop realizes; beta bounds the count from
    below only for the constructions of the underlying theory, so the
    report states both numbers without enforcing a relation.
    """
    from .braidwords import beta as beta_of

    cd = critical_data(loop, N=N, collision_tol=collision_tol)
    pts = arg_critical_points(cd)
    per = {}
    for p in pts:
        per.setdefault(p.strand, []).append(p)
    if beta_value is None and word is not None:
        beta_value = beta_of(word)
    count = sum(1 for p in pts if p.kind == "sign-change")
    return {
        "count": count,
        "per_strand": {j: len([p for p in ps if p.kind == "sign-change"])
                       for j, ps in sorted(per.items())},
        "degenerate": [p for p in pts if p.kind == "degenerate"],
        "points": pts,
        "beta": beta_value,
        "matches_beta": (None if beta_value is None else count == beta_value),
        "flags": list(cd.flags),
    }
